#ifndef SPECCURVE_BIPOLY_HPP
#define SPECCURVE_BIPOLY_HPP

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "speccurve/linalg.hpp"
#include "speccurve/ratfunc.hpp"

namespace speccurve {

// Bivariate polynomial over Q(i), stored as a polynomial in w whose
// coefficients are univariate polynomials in z (lowest w-degree first).
class BiPoly {
  public:
    BiPoly() = default;
    explicit BiPoly(std::vector<UniPoly> wcoeffs) : wc_(std::move(wcoeffs)) { trim(); }
    explicit BiPoly(UniPoly z_part) { wc_.push_back(std::move(z_part)); trim(); }

    static BiPoly zero() { return BiPoly(); }
    static BiPoly constant(GaussRat c) { return BiPoly(UniPoly::constant(std::move(c))); }
    static BiPoly var_w() { return BiPoly(std::vector<UniPoly>{UniPoly(), UniPoly::one()}); }
    static BiPoly var_z() { return BiPoly(UniPoly::monomial(GaussRat(1), 1)); }
    // c * z^a w^b
    static BiPoly monomial(GaussRat c, std::size_t a, std::size_t b) {
        std::vector<UniPoly> v(b + 1);
        v[b] = UniPoly::monomial(std::move(c), a);
        return BiPoly(std::move(v));
    }

    bool is_zero() const { return wc_.empty(); }
    int deg_w() const { return static_cast<int>(wc_.size()) - 1; }
    int deg_z() const {
        int d = -1;
        for (const auto& c : wc_) d = std::max(d, c.deg());
        return d;
    }
    const std::vector<UniPoly>& wcoeffs() const { return wc_; }
    const UniPoly& wcoeff(std::size_t j) const {
        static const UniPoly zero_poly{};
        return j < wc_.size() ? wc_[j] : zero_poly;
    }
    const UniPoly& lc_w() const {
        if (wc_.empty()) throw value_error("leading coefficient of zero bivariate polynomial");
        return wc_.back();
    }

    BiPoly operator-() const {
        BiPoly r(*this);
        for (auto& c : r.wc_) c = -c;
        return r;
    }
    friend BiPoly operator+(const BiPoly& a, const BiPoly& b) {
        std::vector<UniPoly> v(std::max(a.wc_.size(), b.wc_.size()));
        for (std::size_t k = 0; k < v.size(); ++k) v[k] = a.wcoeff(k) + b.wcoeff(k);
        return BiPoly(std::move(v));
    }
    friend BiPoly operator-(const BiPoly& a, const BiPoly& b) { return a + (-b); }
    friend BiPoly operator*(const BiPoly& a, const BiPoly& b) {
        if (a.is_zero() || b.is_zero()) return BiPoly();
        std::vector<UniPoly> v(a.wc_.size() + b.wc_.size() - 1);
        for (std::size_t i = 0; i < a.wc_.size(); ++i) {
            if (a.wc_[i].is_zero()) continue;
            for (std::size_t j = 0; j < b.wc_.size(); ++j) v[i + j] += a.wc_[i] * b.wc_[j];
        }
        return BiPoly(std::move(v));
    }
    friend BiPoly operator*(const UniPoly& s, const BiPoly& p) {
        BiPoly r(p);
        for (auto& c : r.wc_) c = s * c;
        r.trim();
        return r;
    }
    friend BiPoly operator*(const GaussRat& s, const BiPoly& p) {
        return UniPoly::constant(s) * p;
    }
    friend bool operator==(const BiPoly& a, const BiPoly& b) { return a.wc_ == b.wc_; }
    friend bool operator!=(const BiPoly& a, const BiPoly& b) { return !(a == b); }

    BiPoly pow(unsigned e) const {
        BiPoly acc = BiPoly::constant(GaussRat(1)), base = *this;
        while (e) {
            if (e & 1) acc = acc * base;
            base = base * base;
            e >>= 1;
        }
        return acc;
    }

    BiPoly derivative_w() const {
        if (wc_.size() <= 1) return BiPoly();
        std::vector<UniPoly> v(wc_.size() - 1);
        for (std::size_t k = 1; k < wc_.size(); ++k)
            v[k - 1] = GaussRat(Rat(static_cast<long>(k))) * wc_[k];
        return BiPoly(std::move(v));
    }
    BiPoly derivative_z() const {
        std::vector<UniPoly> v(wc_.size());
        for (std::size_t k = 0; k < wc_.size(); ++k) v[k] = wc_[k].derivative();
        return BiPoly(std::move(v));
    }

    // Fiber polynomial: F(z0, w) as a univariate polynomial in w.
    UniPoly eval_z(const GaussRat& z0) const {
        std::vector<GaussRat> v(wc_.size());
        for (std::size_t k = 0; k < wc_.size(); ++k) v[k] = wc_[k].eval(z0);
        return UniPoly(std::move(v));
    }
    // F(z, w0) as a univariate polynomial in z.
    UniPoly eval_w(const GaussRat& w0) const {
        UniPoly acc;
        for (std::size_t k = wc_.size(); k-- > 0;) acc = w0 * acc + wc_[k];
        return acc;
    }

    // Substitute w := A(z) + z^k * w (the iterated blow-up chart map).
    BiPoly subst_w(const UniPoly& A, std::size_t k) const {
        BiPoly repl = BiPoly(A) + BiPoly::monomial(GaussRat(1), k, 1);
        BiPoly acc;
        for (std::size_t j = wc_.size(); j-- > 0;) acc = acc * repl + BiPoly(wc_[j]);
        return acc;
    }

    // Substitute (z, w) := (z' * u, c + u); returns a polynomial in (z', u)
    // with u in the w slot. This is the complementary blow-up chart.
    BiPoly subst_opposite_chart(const GaussRat& c) const {
        BiPoly acc;
        BiPoly repl = BiPoly::constant(c) + BiPoly::var_w();  // c + u
        for (std::size_t j = wc_.size(); j-- > 0;) {
            // a_j(z) -> a_j(z'u): z^k -> z'^k u^k (diagonal support)
            std::vector<UniPoly> diag(static_cast<std::size_t>(wc_[j].deg()) + 1);
            for (int k = 0; k <= wc_[j].deg(); ++k)
                diag[static_cast<std::size_t>(k)] =
                    UniPoly::monomial(wc_[j][static_cast<std::size_t>(k)], static_cast<std::size_t>(k));
            acc = acc * repl + BiPoly(std::move(diag));
        }
        return acc;
    }

    // Shift the z variable: F(z + a, w).
    BiPoly shift_z(const GaussRat& a) const {
        BiPoly r(*this);
        for (auto& c : r.wc_) c = c.shift_arg(a);
        r.trim();
        return r;
    }

    // Substitute z := z^q (exponent scaling, q >= 1).
    BiPoly scale_z(std::size_t q) const {
        BiPoly r;
        r.wc_.resize(wc_.size());
        for (std::size_t j = 0; j < wc_.size(); ++j) {
            if (wc_[j].is_zero()) continue;
            std::vector<GaussRat> v(static_cast<std::size_t>(wc_[j].deg()) * q + 1);
            for (int k = 0; k <= wc_[j].deg(); ++k)
                v[static_cast<std::size_t>(k) * q] = wc_[j][static_cast<std::size_t>(k)];
            r.wc_[j] = UniPoly(std::move(v));
        }
        r.trim();
        return r;
    }

    // z-adic valuation of the whole polynomial.
    int val_z() const {
        if (is_zero()) throw value_error("z-valuation of zero bivariate polynomial");
        int v = -1;
        for (const auto& c : wc_) {
            if (c.is_zero()) continue;
            int cv = c.valuation_at_zero();
            v = v < 0 ? cv : std::min(v, cv);
        }
        return v;
    }
    BiPoly divided_by_z_pow(int k) const {
        BiPoly r(*this);
        for (auto& c : r.wc_)
            if (!c.is_zero()) c = c.divided_by_x_pow(k);
        return r;
    }

    // gcd of the w-coefficients as polynomials in z (monic).
    UniPoly content_z() const {
        UniPoly g;
        for (const auto& c : wc_) g = gcd(g, c);
        return g;
    }

    // Divide by the content and scale so the leading z-coefficient of the
    // leading w-coefficient is 1 (a deterministic unit normalization).
    BiPoly primitive_normalized() const {
        if (is_zero()) throw value_error("primitive part of zero bivariate polynomial");
        UniPoly ct = content_z();
        BiPoly r;
        r.wc_.resize(wc_.size());
        for (std::size_t k = 0; k < wc_.size(); ++k)
            r.wc_[k] = wc_[k].is_zero() ? wc_[k] : exact_div(wc_[k], ct);
        GaussRat u = r.lc_w().lc().inv();
        for (auto& c : r.wc_) c = u * c;
        return r;
    }

    std::vector<RatFunc> wcoeffs_ratfunc() const {
        std::vector<RatFunc> v(wc_.size());
        for (std::size_t k = 0; k < wc_.size(); ++k) v[k] = RatFunc(wc_[k]);
        return v;
    }

    // Clear denominators of rational-function coefficients (minimal lcm) and
    // return the primitive normalized polynomial.
    static BiPoly from_ratfunc_coeffs(const std::vector<RatFunc>& coeffs) {
        UniPoly l = UniPoly::one();
        for (const auto& f : coeffs)
            if (!f.is_zero()) l = exact_div(l * f.den(), gcd(l, f.den()));
        std::vector<UniPoly> v(coeffs.size());
        for (std::size_t k = 0; k < coeffs.size(); ++k) {
            if (coeffs[k].is_zero()) continue;
            v[k] = coeffs[k].num() * exact_div(l, coeffs[k].den());
        }
        BiPoly r(std::move(v));
        if (r.is_zero()) return r;
        return r.primitive_normalized();
    }

    std::string str(const std::string& zvar = "z", const std::string& wvar = "w") const {
        if (is_zero()) return "0";
        std::string s;
        for (std::size_t j = wc_.size(); j-- > 0;) {
            if (wc_[j].is_zero()) continue;
            std::string coef = wc_[j].str(zvar);
            std::string term;
            if (j == 0) {
                term = coef;
            } else {
                std::string head;
                if (coef == "1")
                    head = "";
                else if (coef == "-1")
                    head = "-";
                else if (coef.find('+') != std::string::npos || coef.find('-', 1) != std::string::npos ||
                         coef.find('*') != std::string::npos)
                    head = "(" + coef + ")*";
                else
                    head = coef + "*";
                term = head + wvar + (j == 1 ? "" : "^" + std::to_string(j));
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
        while (!wc_.empty() && wc_.back().is_zero()) wc_.pop_back();
    }
    std::vector<UniPoly> wc_;
};

// ------------------------------------------------------ function field ops --

// Monic gcd in w over the field Q(i)(z).
inline std::vector<RatFunc> gcd_over_field(std::vector<RatFunc> a, std::vector<RatFunc> b) {
    auto trim = [](std::vector<RatFunc>& f) {
        while (!f.empty() && f.back().is_zero()) f.pop_back();
    };
    auto degf = [](const std::vector<RatFunc>& f) { return static_cast<int>(f.size()) - 1; };
    trim(a);
    trim(b);
    while (!b.empty()) {
        // a mod b
        RatFunc inv_lc = RatFunc(1) / b.back();
        while (degf(a) >= degf(b) && !a.empty()) {
            RatFunc c = a.back() * inv_lc;
            std::size_t shift = a.size() - b.size();
            for (std::size_t k = 0; k < b.size(); ++k) a[shift + k] -= c * b[k];
            trim(a);
        }
        std::swap(a, b);
        trim(b);
    }
    if (a.empty()) return a;
    RatFunc s = RatFunc(1) / a.back();
    for (auto& c : a) c *= s;
    return a;
}

// Exact division in Q(i)[z][w] when the quotient is known to be polynomial
// (w-long division with exact UniPoly division at every step; throws
// otherwise). Used by the fraction-free determinant and the gcd machinery.
inline BiPoly exact_div_bipoly(const BiPoly& A, const BiPoly& B) {
    if (B.is_zero()) throw value_error("division by zero bivariate polynomial");
    if (A.is_zero()) return BiPoly();
    if (A.deg_w() < B.deg_w()) throw value_error("exact_div_bipoly: degree mismatch");
    std::vector<UniPoly> rem(A.wcoeffs());
    std::vector<UniPoly> quo(static_cast<std::size_t>(A.deg_w() - B.deg_w()) + 1);
    const UniPoly& lb = B.lc_w();
    for (int k = A.deg_w() - B.deg_w(); k >= 0; --k) {
        const UniPoly& top = rem[static_cast<std::size_t>(k + B.deg_w())];
        if (top.is_zero()) continue;
        UniPoly q = exact_div(top, lb);
        quo[static_cast<std::size_t>(k)] = q;
        for (int j = 0; j <= B.deg_w(); ++j)
            rem[static_cast<std::size_t>(k + j)] -= q * B.wcoeff(static_cast<std::size_t>(j));
    }
    for (const auto& c : rem)
        if (!c.is_zero()) throw value_error("exact_div_bipoly: division not exact");
    return BiPoly(std::move(quo));
}

// Pseudo-remainder of A by B in w: lc_w(B)^k A mod B, computed entirely over
// Q(i)[z] (no function-field fractions).
inline BiPoly pseudo_rem_w(BiPoly A, const BiPoly& B) {
    const UniPoly& v = B.lc_w();
    while (!A.is_zero() && A.deg_w() >= B.deg_w()) {
        int shift = A.deg_w() - B.deg_w();
        UniPoly top = A.lc_w();
        A = v * A - top * (BiPoly::monomial(GaussRat(1), 0, static_cast<std::size_t>(shift)) * B);
    }
    return A;
}

// gcd of F and G as polynomials in w over Q(i)(z), by the primitive
// pseudo-remainder sequence; content stripped at every step so coefficient
// degrees stay bounded. Result is primitive-normalized in Q(i)[z][w].
inline BiPoly gcd_w(const BiPoly& F, const BiPoly& G) {
    if (F.is_zero()) return G.is_zero() ? G : G.primitive_normalized();
    if (G.is_zero()) return F.primitive_normalized();
    BiPoly a = F.primitive_normalized(), b = G.primitive_normalized();
    if (a.deg_w() < b.deg_w()) std::swap(a, b);
    while (b.deg_w() > 0) {
        BiPoly r = pseudo_rem_w(a, b);
        if (r.is_zero()) return b.primitive_normalized();
        a = std::move(b);
        b = r.deg_w() == 0 ? r : r.primitive_normalized();
    }
    // w-degree 0 remainder: the gcd in w is trivial
    return b.is_zero() ? a.primitive_normalized() : BiPoly::constant(GaussRat(1));
}

// Squarefreeness in w over Q(i)(z). Fast exact route: Res_w(F, F') is a
// polynomial in z of bounded degree, so either some evaluation is nonzero
// (a certificate of squarefreeness) or it has more roots than its degree
// bound and must vanish identically.
inline bool is_squarefree_w(const BiPoly& F) {
    if (F.is_zero()) throw value_error("squarefree test on zero polynomial");
    if (F.deg_w() == 0) return true;
    BiPoly Fw = F.derivative_w();
    long zero_hits = 0;
    for (long t = 0;; t = (t > 0 ? -t : -t + 1)) {
        GaussRat z0{Rat(t)};
        if (F.lc_w().eval(z0).is_zero()) {
            if (t > 4 * (F.deg_z() + 2)) break;  // pathological leading coefficient
            continue;
        }
        UniPoly f = F.eval_z(z0);
        UniPoly g = Fw.eval_z(z0);
        if (g.is_zero() || gcd(f, g).deg() > 0) {
            if (++zero_hits >= 12) break;  // likely a genuine common factor, decide exactly
        } else {
            return true;  // Res_w(F, F') is nonzero at z0: certified squarefree
        }
    }
    return gcd_w(F, Fw).deg_w() == 0;
}

// F / gcd(F, dF/dw), primitive normalized; squarefree in w.
inline BiPoly squarefree_part_w(const BiPoly& F) {
    if (F.is_zero()) throw value_error("squarefree part of zero polynomial");
    if (F.deg_w() >= 1 && is_squarefree_w(F)) return F.primitive_normalized();
    BiPoly g = gcd_w(F, F.derivative_w());
    if (g.deg_w() == 0) return F.primitive_normalized();
    return exact_div_bipoly(F.primitive_normalized(), g).primitive_normalized();
}

// Sylvester resultant eliminating w; a univariate polynomial in z.
// The sign convention is the Sylvester determinant with deg_w(g) rows of f
// above deg_w(f) rows of g, leading coefficients on the main diagonal.
inline UniPoly resultant_w(const BiPoly& f, const BiPoly& g) {
    if (f.is_zero() || g.is_zero()) throw value_error("resultant of zero polynomial");
    int m = f.deg_w(), n = g.deg_w();
    if (m <= 0 || n <= 0) throw value_error("resultant needs positive w-degree in both arguments");
    std::size_t N = static_cast<std::size_t>(m + n);
    RMat S(N, N);
    for (int i = 0; i < n; ++i)
        for (int t = 0; t <= m; ++t)
            S(static_cast<std::size_t>(i), static_cast<std::size_t>(i + t)) =
                RatFunc(f.wcoeff(static_cast<std::size_t>(m - t)));
    for (int i = 0; i < m; ++i)
        for (int t = 0; t <= n; ++t)
            S(static_cast<std::size_t>(n + i), static_cast<std::size_t>(i + t)) =
                RatFunc(g.wcoeff(static_cast<std::size_t>(n - t)));
    RatFunc d = S.det();
    return d.as_poly();
}

// Fraction-free (Bareiss) determinant of a square matrix of bivariate
// polynomials; all divisions are exact over the polynomial ring.
inline BiPoly bipoly_det(std::vector<std::vector<BiPoly>> a) {
    std::size_t n = a.size();
    if (n == 0) return BiPoly::constant(GaussRat(1));
    bool neg = false;
    BiPoly prev = BiPoly::constant(GaussRat(1));
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (a[k][k].is_zero()) {
            std::size_t piv = k + 1;
            while (piv < n && a[piv][k].is_zero()) ++piv;
            if (piv == n) return BiPoly();
            std::swap(a[k], a[piv]);
            neg = !neg;
        }
        for (std::size_t i = k + 1; i < n; ++i)
            for (std::size_t j = k + 1; j < n; ++j) {
                BiPoly num = a[i][j] * a[k][k] - a[i][k] * a[k][j];
                a[i][j] = num.is_zero() ? BiPoly() : exact_div_bipoly(num, prev);
            }
        prev = a[k][k];
    }
    BiPoly det = a[n - 1][n - 1];
    return neg ? -det : det;
}

// Exact division test in Q(i)[z][w]: returns F/G when G divides F.
inline std::optional<BiPoly> try_exact_divide(const BiPoly& F, const BiPoly& G) {
    if (G.is_zero()) throw value_error("division by zero bivariate polynomial");
    if (F.is_zero()) return BiPoly();
    if (F.deg_w() < G.deg_w()) return std::nullopt;
    std::vector<RatFunc> a = F.wcoeffs_ratfunc(), b = G.wcoeffs_ratfunc();
    std::vector<RatFunc> q(a.size() - b.size() + 1);
    RatFunc inv_lc = RatFunc(1) / b.back();
    while (!a.empty() && a.size() >= b.size()) {
        RatFunc c = a.back() * inv_lc;
        std::size_t shift = a.size() - b.size();
        q[shift] = c;
        for (std::size_t k = 0; k < b.size(); ++k) a[shift + k] -= c * b[k];
        while (!a.empty() && a.back().is_zero()) a.pop_back();
    }
    if (!a.empty()) return std::nullopt;  // nonzero remainder
    std::vector<UniPoly> qq(q.size());
    for (std::size_t k = 0; k < q.size(); ++k) {
        if (q[k].is_zero()) continue;
        if (!q[k].is_polynomial()) return std::nullopt;
        qq[k] = q[k].as_poly();
    }
    return BiPoly(std::move(qq));
}

} // namespace speccurve

#endif
