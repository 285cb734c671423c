#ifndef SPECCURVE_POLY_HPP
#define SPECCURVE_POLY_HPP

#include <algorithm>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "speccurve/rational.hpp"

namespace speccurve {

// Univariate polynomial over Q(i), coefficients lowest degree first.
// The zero polynomial has an empty coefficient vector and degree -1.
class UniPoly {
  public:
    UniPoly() = default;
    explicit UniPoly(GaussRat c0) { c_.push_back(std::move(c0)); trim(); }
    explicit UniPoly(std::vector<GaussRat> coeffs) : c_(std::move(coeffs)) { trim(); }

    static UniPoly zero() { return UniPoly(); }
    static UniPoly one() { return constant(GaussRat(1)); }
    static UniPoly constant(GaussRat v) { return UniPoly(std::move(v)); }
    // x^k with coefficient c.
    static UniPoly monomial(GaussRat c, std::size_t k) {
        if (c.is_zero()) return UniPoly();
        std::vector<GaussRat> v(k + 1);
        v[k] = std::move(c);
        return UniPoly(std::move(v));
    }
    // x - a
    static UniPoly linear_root(const GaussRat& a) {
        return UniPoly(std::vector<GaussRat>{-a, GaussRat(1)});
    }

    int deg() const { return static_cast<int>(c_.size()) - 1; }
    bool is_zero() const { return c_.empty(); }
    bool is_constant() const { return c_.size() <= 1; }
    const std::vector<GaussRat>& coeffs() const { return c_; }
    const GaussRat& operator[](std::size_t k) const {
        static const GaussRat zero_coef{};
        return k < c_.size() ? c_[k] : zero_coef;
    }
    const GaussRat& lc() const {
        if (c_.empty()) throw value_error("leading coefficient of zero polynomial");
        return c_.back();
    }
    bool is_monic() const { return !c_.empty() && c_.back().is_one(); }

    void set_coeff(std::size_t k, GaussRat v) {
        if (k >= c_.size()) c_.resize(k + 1);
        c_[k] = std::move(v);
        trim();
    }

    UniPoly operator-() const {
        UniPoly r(*this);
        for (auto& x : r.c_) x = -x;
        return r;
    }

    friend UniPoly operator+(const UniPoly& a, const UniPoly& b) {
        std::vector<GaussRat> v(std::max(a.c_.size(), b.c_.size()));
        for (std::size_t k = 0; k < v.size(); ++k) v[k] = a[k] + b[k];
        return UniPoly(std::move(v));
    }
    friend UniPoly operator-(const UniPoly& a, const UniPoly& b) {
        std::vector<GaussRat> v(std::max(a.c_.size(), b.c_.size()));
        for (std::size_t k = 0; k < v.size(); ++k) v[k] = a[k] - b[k];
        return UniPoly(std::move(v));
    }
    friend UniPoly operator*(const UniPoly& a, const UniPoly& b) {
        if (a.is_zero() || b.is_zero()) return UniPoly();
        std::vector<GaussRat> v(a.c_.size() + b.c_.size() - 1);
        for (std::size_t j = 0; j < a.c_.size(); ++j) {
            if (a.c_[j].is_zero()) continue;
            for (std::size_t k = 0; k < b.c_.size(); ++k) v[j + k] += a.c_[j] * b.c_[k];
        }
        return UniPoly(std::move(v));
    }
    friend UniPoly operator*(const GaussRat& s, const UniPoly& p) {
        if (s.is_zero()) return UniPoly();
        UniPoly r(p);
        for (auto& x : r.c_) x = s * x;
        return r;
    }
    friend UniPoly operator*(const UniPoly& p, const GaussRat& s) { return s * p; }
    UniPoly& operator+=(const UniPoly& o) { return *this = *this + o; }
    UniPoly& operator-=(const UniPoly& o) { return *this = *this - o; }
    UniPoly& operator*=(const UniPoly& o) { return *this = *this * o; }

    friend bool operator==(const UniPoly& a, const UniPoly& b) { return a.c_ == b.c_; }
    friend bool operator!=(const UniPoly& a, const UniPoly& b) { return !(a == b); }

    // multiply by x^k
    UniPoly shifted_up(std::size_t k) const {
        if (is_zero()) return UniPoly();
        std::vector<GaussRat> v(c_.size() + k);
        std::copy(c_.begin(), c_.end(), v.begin() + static_cast<long>(k));
        return UniPoly(std::move(v));
    }

    GaussRat eval(const GaussRat& x) const {
        GaussRat acc;
        for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + *it;
        return acc;
    }

    UniPoly derivative() const {
        if (c_.size() <= 1) return UniPoly();
        std::vector<GaussRat> v(c_.size() - 1);
        for (std::size_t k = 1; k < c_.size(); ++k) v[k - 1] = GaussRat(Rat(static_cast<long>(k))) * c_[k];
        return UniPoly(std::move(v));
    }

    UniPoly monic() const {
        if (is_zero()) throw value_error("monic() of zero polynomial");
        return lc().inv() * *this;
    }

    // f(x + a), Taylor shift via repeated synthetic division.
    UniPoly shift_arg(const GaussRat& a) const {
        if (a.is_zero() || is_zero()) return *this;
        std::vector<GaussRat> w = c_;
        std::vector<GaussRat> out(c_.size());
        for (std::size_t k = 0; k < c_.size(); ++k) {
            // divide w by (x - (-a))... evaluate tail: Horner at -(-a) = a? We
            // want coefficients of f(x+a): out[k] = (d^k f / k!)(a).
            GaussRat rem;
            for (std::size_t j = w.size(); j-- > 1;) w[j - 1] += a * w[j];
            rem = w[0];
            out[k] = rem;
            w.erase(w.begin());
            if (w.empty()) break;
        }
        return UniPoly(std::move(out));
    }

    // f(g(x)): polynomial composition by Horner.
    UniPoly compose(const UniPoly& g) const {
        UniPoly acc;
        for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * g + UniPoly::constant(*it);
        return acc;
    }

    // Multiplicity of a as a root (0 if not a root).
    int root_multiplicity(const GaussRat& a) const {
        if (is_zero()) throw value_error("root multiplicity in zero polynomial");
        UniPoly f = *this;
        int m = 0;
        while (!f.is_zero() && f.eval(a).is_zero()) {
            auto [q, r] = divmod(f, linear_root(a));
            f = q;
            ++m;
        }
        return m;
    }

    // Order of vanishing at 0 (index of lowest nonzero coefficient).
    int valuation_at_zero() const {
        if (is_zero()) throw value_error("valuation of zero polynomial");
        for (std::size_t k = 0; k < c_.size(); ++k)
            if (!c_[k].is_zero()) return static_cast<int>(k);
        return 0; // unreachable
    }
    UniPoly divided_by_x_pow(int k) const {
        if (k == 0) return *this;
        std::vector<GaussRat> v(c_.begin() + k, c_.end());
        return UniPoly(std::move(v));
    }

    // Exact field division with remainder.
    friend std::pair<UniPoly, UniPoly> divmod(const UniPoly& a, const UniPoly& b) {
        if (b.is_zero()) throw value_error("polynomial division by zero");
        if (a.deg() < b.deg()) return {UniPoly(), a};
        std::vector<GaussRat> rem = a.c_;
        std::vector<GaussRat> quo(static_cast<std::size_t>(a.deg() - b.deg()) + 1);
        GaussRat inv_lc = b.lc().inv();
        for (int k = a.deg() - b.deg(); k >= 0; --k) {
            GaussRat q = rem[static_cast<std::size_t>(k + b.deg())] * inv_lc;
            if (!q.is_zero()) {
                quo[static_cast<std::size_t>(k)] = q;
                for (int j = 0; j <= b.deg(); ++j)
                    rem[static_cast<std::size_t>(k + j)] -= q * b.c_[static_cast<std::size_t>(j)];
            }
        }
        rem.resize(static_cast<std::size_t>(std::max(b.deg(), 0)));
        return {UniPoly(std::move(quo)), UniPoly(std::move(rem))};
    }

    // Quotient when the division is known to be exact; throws otherwise.
    friend UniPoly exact_div(const UniPoly& a, const UniPoly& b) {
        auto [q, r] = divmod(a, b);
        if (!r.is_zero()) throw value_error("exact_div: division not exact");
        return q;
    }

    UniPoly pow(unsigned e) const {
        UniPoly acc = UniPoly::one(), base = *this;
        while (e) {
            if (e & 1) acc = acc * base;
            base = base * base;
            e >>= 1;
        }
        return acc;
    }

    std::string str(const std::string& var = "x") const {
        if (is_zero()) return "0";
        std::string s;
        for (std::size_t k = c_.size(); k-- > 0;) {
            if (c_[k].is_zero()) continue;
            std::string coef = gauss_to_string(c_[k]);
            std::string term;
            if (k == 0) {
                term = coef;
            } else {
                bool unit = (coef == "1");
                bool neg_unit = (coef == "-1");
                // a+bi coefficients get parentheses so the term reparses
                bool needs_parens = coef.find('+', 1) != std::string::npos ||
                                    coef.find('-', 1) != std::string::npos;
                std::string head = unit ? "" : neg_unit ? "-" : coef + "*";
                if (needs_parens) head = "(" + coef + ")*";
                term = head + var + (k == 1 ? "" : "^" + std::to_string(k));
            }
            if (s.empty())
                s = term;
            else if (!term.empty() && term[0] == '-')
                s += term;
            else
                s += "+" + term;
        }
        return s;
    }

  private:
    void trim() {
        while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
    }
    std::vector<GaussRat> c_;
};

namespace detail_poly {

// Gaussian integers, used to keep the polynomial gcd fraction-free.
struct GInt {
    Int re, im;
    bool is_zero() const { return re == 0 && im == 0; }
};

inline GInt gmul(const GInt& a, const GInt& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}
inline GInt gsub(const GInt& a, const GInt& b) { return {a.re - b.re, a.im - b.im}; }
inline Int gnorm(const GInt& a) { return a.re * a.re + a.im * a.im; }

inline Int round_div(const Int& a, const Int& b) {
    // nearest integer to a/b
    Int q, r;
    mpz_fdiv_qr(q.get_mpz_t(), r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    if (2 * r >= b) q += 1;
    return q;
}

// Euclidean gcd in Z[i] (the ring is norm-Euclidean with rounded division).
inline GInt gint_gcd(GInt a, GInt b) {
    while (!b.is_zero()) {
        Int n = gnorm(b);
        GInt num = gmul(a, {b.re, -b.im});
        GInt q{round_div(num.re, n), round_div(num.im, n)};
        GInt r = gsub(a, gmul(q, b));
        a = b;
        b = r;
    }
    return a;
}

using ZGPoly = std::vector<GInt>;  // lowest first, trimmed

inline void ztrim(ZGPoly& f) {
    while (!f.empty() && f.back().is_zero()) f.pop_back();
}

inline GInt zcontent(const ZGPoly& f) {
    GInt g{Int(0), Int(0)};
    for (const auto& c : f) {
        if (c.is_zero()) continue;
        g = gint_gcd(g, c);
    }
    return g;
}

inline void make_primitive(ZGPoly& f) {
    GInt c = zcontent(f);
    if (c.is_zero() || (c.re == 1 && c.im == 0)) return;
    Int n = gnorm(c);
    GInt cc{c.re, -c.im};
    for (auto& x : f) {
        GInt t = gmul(x, cc);
        x = {t.re / n, t.im / n};
    }
}

// lc(B)^k A mod B over Z[i], fraction free.
inline ZGPoly zprem(ZGPoly A, const ZGPoly& B) {
    const GInt& v = B.back();
    while (A.size() >= B.size() && !A.empty()) {
        GInt top = A.back();
        std::size_t shift = A.size() - B.size();
        for (auto& c : A) c = gmul(c, v);
        for (std::size_t k = 0; k < B.size(); ++k)
            A[shift + k] = gsub(A[shift + k], gmul(top, B[k]));
        ztrim(A);
    }
    return A;
}

} // namespace detail_poly

// Monic gcd; computed by the primitive pseudo-remainder sequence over Z[i]
// (clearing denominators first), which avoids the coefficient blow-up of the
// naive Euclidean algorithm over Q(i). gcd(0,0) = 0.
inline UniPoly gcd(const UniPoly& a_in, const UniPoly& b_in) {
    using namespace detail_poly;
    if (a_in.is_zero()) return b_in.is_zero() ? b_in : b_in.monic();
    if (b_in.is_zero()) return a_in.monic();

    auto to_int = [](const UniPoly& p) {
        Int den(1);
        for (const auto& c : p.coeffs()) {
            den = lcm(den, c.re.get_den());
            den = lcm(den, c.im.get_den());
        }
        ZGPoly out(p.coeffs().size());
        for (std::size_t k = 0; k < out.size(); ++k) {
            Rat re = p.coeffs()[k].re * Rat(den);
            Rat im = p.coeffs()[k].im * Rat(den);
            out[k] = {Int(re.get_num()), Int(im.get_num())};
        }
        make_primitive(out);
        return out;
    };

    ZGPoly A = to_int(a_in), B = to_int(b_in);
    if (A.size() < B.size()) std::swap(A, B);
    while (B.size() > 1) {
        ZGPoly R = zprem(A, B);
        if (R.empty()) {
            A = std::move(B);
            B.clear();
            break;
        }
        make_primitive(R);
        A = std::move(B);
        B = std::move(R);
    }
    if (!B.empty()) return UniPoly::one();  // nonzero constant remainder

    std::vector<GaussRat> c(A.size());
    for (std::size_t k = 0; k < A.size(); ++k) c[k] = GaussRat(Rat(A[k].re), Rat(A[k].im));
    return UniPoly(std::move(c)).monic();
}

// Extended gcd: returns (g, u, v) monic with u*a + v*b = g.
inline std::tuple<UniPoly, UniPoly, UniPoly> ext_gcd(const UniPoly& a, const UniPoly& b) {
    UniPoly r0 = a, r1 = b;
    UniPoly u0 = UniPoly::one(), u1 = UniPoly::zero();
    UniPoly v0 = UniPoly::zero(), v1 = UniPoly::one();
    while (!r1.is_zero()) {
        auto [q, r] = divmod(r0, r1);
        UniPoly u2 = u0 - q * u1;
        UniPoly v2 = v0 - q * v1;
        r0 = std::move(r1); r1 = std::move(r);
        u0 = std::move(u1); u1 = std::move(u2);
        v0 = std::move(v1); v1 = std::move(v2);
    }
    if (r0.is_zero()) return {r0, u0, v0};
    GaussRat s = r0.lc().inv();
    return {s * r0, s * u0, s * v0};
}

// Deterministic comparison: by degree, then lexicographic on coefficients
// from constant term upward (using the total order on Q(i)).
inline int cmp(const UniPoly& a, const UniPoly& b) {
    if (a.deg() != b.deg()) return a.deg() < b.deg() ? -1 : 1;
    for (std::size_t k = 0; k < a.coeffs().size(); ++k) {
        int c = cmp(a.coeffs()[k], b.coeffs()[k]);
        if (c != 0) return c;
    }
    return 0;
}
inline bool poly_less(const UniPoly& a, const UniPoly& b) { return cmp(a, b) < 0; }

} // namespace speccurve

#endif
