#ifndef SPECCURVE_RATFUNC_HPP
#define SPECCURVE_RATFUNC_HPP

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "speccurve/poly.hpp"

namespace speccurve {

// Rational function over Q(i): num/den with den monic and gcd(num, den) = 1.
class RatFunc {
  public:
    RatFunc() : num_(), den_(UniPoly::one()) {}
    RatFunc(int n) : num_(UniPoly::constant(GaussRat(n))), den_(UniPoly::one()) {}  // NOLINT
    RatFunc(GaussRat v) : num_(UniPoly::constant(std::move(v))), den_(UniPoly::one()) {}  // NOLINT
    explicit RatFunc(UniPoly p) : num_(std::move(p)), den_(UniPoly::one()) {}
    RatFunc(UniPoly n, UniPoly d) : num_(std::move(n)), den_(std::move(d)) { normalize(); }

    static RatFunc var() { return RatFunc(UniPoly::monomial(GaussRat(1), 1)); }

    // Construct from an already-coprime pair (only the monic normalization of
    // the denominator is applied). Callers must guarantee gcd(num, den) = 1.
    static RatFunc from_reduced(UniPoly n, UniPoly d) {
        if (d.is_zero()) throw value_error("zero denominator");
        RatFunc f;
        if (n.is_zero()) return f;
        GaussRat s = d.lc().inv();
        f.num_ = s * n;
        f.den_ = s * d;
        return f;
    }

    const UniPoly& num() const { return num_; }
    const UniPoly& den() const { return den_; }
    bool is_zero() const { return num_.is_zero(); }
    bool is_polynomial() const { return den_.deg() == 0; }
    const UniPoly& as_poly() const {
        if (!is_polynomial()) throw value_error("rational function is not a polynomial");
        return num_;
    }

    RatFunc operator-() const { return RatFunc::raw(-num_, den_); }

    friend RatFunc operator+(const RatFunc& a, const RatFunc& b) {
        return RatFunc(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
    }
    friend RatFunc operator-(const RatFunc& a, const RatFunc& b) {
        return RatFunc(a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_);
    }
    friend RatFunc operator*(const RatFunc& a, const RatFunc& b) {
        return RatFunc(a.num_ * b.num_, a.den_ * b.den_);
    }
    friend RatFunc operator/(const RatFunc& a, const RatFunc& b) {
        if (b.is_zero()) throw value_error("division by zero rational function");
        return RatFunc(a.num_ * b.den_, a.den_ * b.num_);
    }
    RatFunc& operator+=(const RatFunc& o) { return *this = *this + o; }
    RatFunc& operator-=(const RatFunc& o) { return *this = *this - o; }
    RatFunc& operator*=(const RatFunc& o) { return *this = *this * o; }
    RatFunc& operator/=(const RatFunc& o) { return *this = *this / o; }

    friend bool operator==(const RatFunc& a, const RatFunc& b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }
    friend bool operator!=(const RatFunc& a, const RatFunc& b) { return !(a == b); }

    RatFunc derivative() const {
        return RatFunc(num_.derivative() * den_ - num_ * den_.derivative(), den_ * den_);
    }

    // Evaluation; nullopt at a pole.
    std::optional<GaussRat> eval(const GaussRat& x) const {
        GaussRat d = den_.eval(x);
        if (d.is_zero()) {
            // the gcd(num,den)=1 invariant rules out a removable singularity
            return std::nullopt;
        }
        return num_.eval(x) / d;
    }

    // Order of vanishing at the finite point p (negative = pole order).
    int valuation_at(const GaussRat& p) const {
        if (is_zero()) throw value_error("valuation of zero rational function");
        return num_.root_multiplicity(p) - den_.root_multiplicity(p);
    }

    // Order of vanishing at infinity: f ~ z^{-v} with v = deg den - deg num.
    int valuation_at_infinity() const {
        if (is_zero()) throw value_error("valuation of zero rational function");
        return den_.deg() - num_.deg();
    }

    // Laurent coefficients at p for orders from..to inclusive (exact).
    // Returns a vector indexed by (order - from).
    std::vector<GaussRat> laurent_at(const GaussRat& p, int from, int to) const {
        if (to < from) return {};
        if (is_zero()) return std::vector<GaussRat>(static_cast<std::size_t>(to - from + 1));
        UniPoly n = num_.shift_arg(p);
        UniPoly d = den_.shift_arg(p);
        int vn = n.valuation_at_zero(), vd = d.valuation_at_zero();
        n = n.divided_by_x_pow(vn);
        d = d.divided_by_x_pow(vd);
        int val = vn - vd;  // leading order of the expansion
        std::vector<GaussRat> out(static_cast<std::size_t>(to - from + 1));
        if (to < val) return out;
        // series division n/d to order (to - val)
        int need = to - val;
        GaussRat d0inv = d[0].inv();
        std::vector<GaussRat> q(static_cast<std::size_t>(need) + 1);
        for (int k = 0; k <= need; ++k) {
            GaussRat acc = n[static_cast<std::size_t>(k)];
            for (int j = 1; j <= k; ++j)
                acc -= d[static_cast<std::size_t>(j)] * q[static_cast<std::size_t>(k - j)];
            q[static_cast<std::size_t>(k)] = acc * d0inv;
        }
        for (int ord = std::max(from, val); ord <= to; ++ord)
            out[static_cast<std::size_t>(ord - from)] = q[static_cast<std::size_t>(ord - val)];
        return out;
    }

    GaussRat residue_at(const GaussRat& p) const {
        if (is_zero()) return GaussRat();
        return laurent_at(p, -1, -1)[0];
    }

    std::string str(const std::string& var = "z") const {
        if (den_.deg() == 0) return num_.str(var);
        std::string n = num_.str(var), d = den_.str(var);
        return "(" + n + ")/(" + d + ")";
    }

  private:
    static RatFunc raw(UniPoly n, UniPoly d) {
        RatFunc f;
        f.num_ = std::move(n);
        f.den_ = std::move(d);
        return f;
    }
    void normalize() {
        if (den_.is_zero()) throw value_error("zero denominator");
        if (num_.is_zero()) {
            den_ = UniPoly::one();
            return;
        }
        UniPoly g = gcd(num_, den_);
        if (g.deg() > 0) {
            num_ = exact_div(num_, g);
            den_ = exact_div(den_, g);
        }
        GaussRat s = den_.lc().inv();
        num_ = s * num_;
        den_ = s * den_;
    }
    UniPoly num_, den_;
};

} // namespace speccurve

#endif
