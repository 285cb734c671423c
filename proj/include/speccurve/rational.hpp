#ifndef SPECCURVE_RATIONAL_HPP
#define SPECCURVE_RATIONAL_HPP

#include <gmpxx.h>

#include <cstddef>
#include <string>
#include <string_view>

#include "speccurve/errors.hpp"

namespace speccurve {

using Rat = mpq_class;
using Int = mpz_class;

inline int sign(const Rat& a) { return sgn(a); }

// Gaussian rational: element of Q(i), stored as re + im*i with both parts in
// canonical reduced form (mpq_class keeps coprime numerator/denominator and
// positive denominator). Equality is exact.
struct GaussRat {
    Rat re, im;

    GaussRat() : re(0), im(0) {}
    GaussRat(int n) : re(n), im(0) {}               // NOLINT: implicit by design
    GaussRat(const Rat& r) : re(r), im(0) {}        // NOLINT
    GaussRat(Rat r, Rat i) : re(std::move(r)), im(std::move(i)) {}

    static GaussRat I() { return GaussRat(Rat(0), Rat(1)); }

    bool is_zero() const { return sgn(re) == 0 && sgn(im) == 0; }
    bool is_one() const { return re == 1 && sgn(im) == 0; }
    bool is_real() const { return sgn(im) == 0; }

    GaussRat conj() const { return GaussRat(re, -im); }
    // |a|^2 = a * conj(a), a rational number.
    Rat norm() const { return re * re + im * im; }

    GaussRat operator-() const { return GaussRat(-re, -im); }

    GaussRat& operator+=(const GaussRat& o) { re += o.re; im += o.im; return *this; }
    GaussRat& operator-=(const GaussRat& o) { re -= o.re; im -= o.im; return *this; }
    GaussRat& operator*=(const GaussRat& o) {
        Rat r = re * o.re - im * o.im;
        Rat i = re * o.im + im * o.re;
        re = std::move(r);
        im = std::move(i);
        return *this;
    }

    GaussRat inv() const {
        Rat n = norm();
        if (sgn(n) == 0) throw value_error("division by zero in Q(i)");
        return GaussRat(re / n, -im / n);
    }
};

inline GaussRat operator+(GaussRat a, const GaussRat& b) { return a += b; }
inline GaussRat operator-(GaussRat a, const GaussRat& b) { return a -= b; }
inline GaussRat operator*(GaussRat a, const GaussRat& b) { return a *= b; }
inline GaussRat operator/(const GaussRat& a, const GaussRat& b) { return a * b.inv(); }
inline bool operator==(const GaussRat& a, const GaussRat& b) { return a.re == b.re && a.im == b.im; }
inline bool operator!=(const GaussRat& a, const GaussRat& b) { return !(a == b); }

// Total order (lexicographic on (re, im)); used only for deterministic
// sorting of reported data, it has no arithmetic meaning.
inline int cmp(const GaussRat& a, const GaussRat& b) {
    int c = cmp(a.re, b.re);
    if (c != 0) return c;
    return cmp(a.im, b.im);
}
inline bool operator<(const GaussRat& a, const GaussRat& b) { return cmp(a, b) < 0; }

inline GaussRat pow(GaussRat base, unsigned long e) {
    GaussRat acc(1);
    while (e) {
        if (e & 1) acc *= base;
        base *= base;
        e >>= 1;
    }
    return acc;
}

// ---------------------------------------------------------------------------
// Exact scalar strings.
//
// Grammar ("p/q" rationals with an optional "i" part, no decimals):
//   scalar  := term | term sign term
//   term    := rat | rat 'i' | 'i'
//   rat     := ['+'|'-'] digits ['/' digits]
// Examples: "0", "-1/2", "i", "-i", "3/4i", "1/2+3/4i", "2-i".
// ---------------------------------------------------------------------------

inline std::string rat_to_string(const Rat& r) {
    std::string s = r.get_num().get_str();
    if (r.get_den() != 1) {
        s += "/";
        s += r.get_den().get_str();
    }
    return s;
}

namespace detail {

inline bool parse_unsigned_digits(std::string_view s, std::size_t& pos, Int& out) {
    std::size_t start = pos;
    while (pos < s.size() && s[pos] >= '0' && s[pos] <= '9') ++pos;
    if (pos == start) return false;
    out = Int(std::string(s.substr(start, pos - start)), 10);
    return true;
}

// Parses a signed rational starting at pos; leaves pos after it.
inline bool parse_rat_at(std::string_view s, std::size_t& pos, Rat& out, bool& had_digits) {
    bool neg = false;
    std::size_t save = pos;
    if (pos < s.size() && (s[pos] == '+' || s[pos] == '-')) {
        neg = (s[pos] == '-');
        ++pos;
    }
    Int num;
    if (!parse_unsigned_digits(s, pos, num)) {
        pos = save;
        had_digits = false;
        out = neg ? Rat(-1) : Rat(1);
        return false;
    }
    had_digits = true;
    Int den(1);
    if (pos < s.size() && s[pos] == '/') {
        ++pos;
        if (!parse_unsigned_digits(s, pos, den) || den == 0)
            throw parse_error("bad denominator in rational: '" + std::string(s) + "'");
    }
    out = Rat(num, den);
    out.canonicalize();
    if (neg) out = -out;
    return true;
}

} // namespace detail

inline Rat parse_rat(std::string_view s) {
    std::size_t pos = 0;
    Rat r;
    bool had_digits = false;
    if (!detail::parse_rat_at(s, pos, r, had_digits) || pos != s.size())
        throw parse_error("bad rational: '" + std::string(s) + "' (expected p or p/q, no decimals)");
    return r;
}

inline GaussRat parse_gauss(std::string_view s) {
    if (s.empty()) throw parse_error("empty scalar");
    std::size_t pos = 0;
    GaussRat out;
    bool seen_re = false, seen_im = false;
    while (pos < s.size()) {
        std::size_t save = pos;
        Rat r;
        bool had_digits = false;
        bool sign_only = !detail::parse_rat_at(s, pos, r, had_digits);
        if (sign_only) {
            // Accept a bare sign only when directly followed by 'i'.
            if (pos < s.size() && (s[pos] == '+' || s[pos] == '-')) ++pos;
        }
        if (pos < s.size() && s[pos] == 'i') {
            ++pos;
            if (seen_im) throw parse_error("two imaginary parts in '" + std::string(s) + "'");
            out.im += r;
            seen_im = true;
        } else {
            if (!had_digits || seen_re)
                throw parse_error("bad scalar: '" + std::string(s) + "'");
            out.re += r;
            seen_re = true;
        }
        if (pos == save) throw parse_error("bad scalar: '" + std::string(s) + "'");
    }
    return out;
}

inline std::string gauss_to_string(const GaussRat& g) {
    if (g.is_zero()) return "0";
    std::string s;
    if (sgn(g.re) != 0) s = rat_to_string(g.re);
    if (sgn(g.im) != 0) {
        Rat a = abs(g.im);
        std::string part;
        if (a == 1)
            part = "i";
        else
            part = rat_to_string(a) + "i";
        if (s.empty())
            s = (sgn(g.im) < 0 ? "-" : "") + part;
        else
            s += (sgn(g.im) < 0 ? "-" : "+") + part;
    }
    return s;
}

} // namespace speccurve

#endif
