#ifndef SPECCURVE_SERIES_HPP
#define SPECCURVE_SERIES_HPP

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "speccurve/poly.hpp"

namespace speccurve {

// Truncated Puiseux series: finitely many exact terms c * z^e with rational
// exponents (strictly increasing), plus an explicit truncation order. All
// stored exponents are < trunc; asking for a coefficient at or beyond trunc
// raises precision_error. trunc == nullopt means the series is exact.
class PuiseuxSeries {
  public:
    using Term = std::pair<Rat, GaussRat>;

    PuiseuxSeries() = default;
    explicit PuiseuxSeries(std::optional<Rat> trunc) : trunc_(std::move(trunc)) {}
    PuiseuxSeries(std::vector<Term> terms, std::optional<Rat> trunc)
        : terms_(std::move(terms)), trunc_(std::move(trunc)) {
        normalize();
    }

    static PuiseuxSeries zero_exact() { return PuiseuxSeries(); }
    static PuiseuxSeries term(const GaussRat& c, const Rat& e, std::optional<Rat> trunc = std::nullopt) {
        return PuiseuxSeries({{e, c}}, std::move(trunc));
    }
    // Polynomial in z (flagged exact).
    static PuiseuxSeries from_poly(const UniPoly& p) {
        std::vector<Term> t;
        for (int k = 0; k <= p.deg(); ++k)
            if (!p[static_cast<std::size_t>(k)].is_zero())
                t.push_back({Rat(k), p[static_cast<std::size_t>(k)]});
        return PuiseuxSeries(std::move(t), std::nullopt);
    }

    const std::vector<Term>& terms() const { return terms_; }
    const std::optional<Rat>& trunc() const { return trunc_; }
    bool is_exact() const { return !trunc_.has_value(); }
    bool known_zero() const { return terms_.empty() && is_exact(); }

    // Smallest exponent carrying a nonzero coefficient; for an empty series
    // this is the truncation order (nothing is known below it).
    std::optional<Rat> valuation() const {
        if (!terms_.empty()) return terms_.front().first;
        return trunc_;  // nullopt for the exact zero series: valuation +infinity
    }

    // Minimal ramification for the stored support: lcm of exponent denominators.
    Int ramification() const {
        Int n(1);
        for (const auto& [e, c] : terms_) {
            (void)c;
            Int d = e.get_den();
            n = lcm(n, d);
        }
        return n;
    }

    GaussRat coeff_at(const Rat& e) const {
        if (trunc_ && e >= *trunc_)
            throw precision_error("coefficient at z^" + rat_to_string(e) +
                                  " lies at/beyond truncation order z^" + rat_to_string(*trunc_));
        for (const auto& [ee, c] : terms_)
            if (ee == e) return c;
        return GaussRat();
    }

    PuiseuxSeries operator-() const {
        PuiseuxSeries r(*this);
        for (auto& [e, c] : r.terms_) c = -c;
        return r;
    }

    friend PuiseuxSeries operator+(const PuiseuxSeries& a, const PuiseuxSeries& b) {
        std::map<Rat, GaussRat> acc;
        for (const auto& [e, c] : a.terms_) acc[e] += c;
        for (const auto& [e, c] : b.terms_) acc[e] += c;
        std::vector<Term> t(acc.begin(), acc.end());
        return PuiseuxSeries(std::move(t), min_trunc(a.trunc_, b.trunc_));
    }
    friend PuiseuxSeries operator-(const PuiseuxSeries& a, const PuiseuxSeries& b) {
        return a + (-b);
    }
    friend PuiseuxSeries operator*(const PuiseuxSeries& a, const PuiseuxSeries& b) {
        // truncation: min(val_a + trunc_b, val_b + trunc_a), tracked pessimistically
        std::optional<Rat> tr;
        if (a.known_zero() || b.known_zero()) return PuiseuxSeries::zero_exact();
        auto add_bound = [](const std::optional<Rat>& val, const std::optional<Rat>& t) -> std::optional<Rat> {
            if (!t) return std::nullopt;        // exact factor imposes no bound
            if (!val) return std::nullopt;      // exactly-zero factor: product exact
            return *val + *t;
        };
        tr = min_trunc(add_bound(a.valuation(), b.trunc_), add_bound(b.valuation(), a.trunc_));
        std::map<Rat, GaussRat> acc;
        for (const auto& [ea, ca] : a.terms_)
            for (const auto& [eb, cb] : b.terms_) {
                Rat e = ea + eb;
                if (tr && e >= *tr) continue;
                acc[e] += ca * cb;
            }
        std::vector<Term> t(acc.begin(), acc.end());
        return PuiseuxSeries(std::move(t), std::move(tr));
    }
    friend PuiseuxSeries operator*(const GaussRat& s, const PuiseuxSeries& p) {
        if (s.is_zero()) return PuiseuxSeries(std::vector<Term>{}, p.trunc_);
        PuiseuxSeries r(p);
        for (auto& [e, c] : r.terms_) c = s * c;
        return r;
    }

    friend bool operator==(const PuiseuxSeries& a, const PuiseuxSeries& b) {
        return a.terms_ == b.terms_ && a.trunc_ == b.trunc_;
    }

    // Multiply by z^d (shift all exponents; truncation shifts along).
    PuiseuxSeries shifted(const Rat& d) const {
        PuiseuxSeries r(*this);
        for (auto& [e, c] : r.terms_) e += d;
        if (r.trunc_) *r.trunc_ += d;
        return r;
    }

    // Substitute z <- z^N for a positive rational N (exponents scale by N).
    PuiseuxSeries scaled_exponents(const Rat& N) const {
        if (sgn(N) <= 0) throw value_error("exponent scale must be positive");
        PuiseuxSeries r(*this);
        for (auto& [e, c] : r.terms_) e *= N;
        if (r.trunc_) *r.trunc_ *= N;
        return r;
    }

    // Drop all terms with exponent >= order; tightens the truncation.
    PuiseuxSeries truncated(const Rat& order) const {
        std::vector<Term> t;
        for (const auto& [e, c] : terms_)
            if (e < order) t.push_back({e, c});
        return PuiseuxSeries(std::move(t), min_trunc(trunc_, order));
    }

    // Galois twist z^{1/N} -> omega * z^{1/N} where N = ramification():
    // the coefficient at exponent k/N is multiplied by omega^k.
    // omega must satisfy omega^N = 1 (only Q(i) roots of unity apply).
    PuiseuxSeries galois_twist(const GaussRat& omega) const {
        Int N = ramification();
        if (pow(omega, N.get_ui()) != GaussRat(1))
            throw value_error("galois twist: omega is not an N-th root of unity for N=" + N.get_str());
        PuiseuxSeries r(*this);
        for (auto& [e, c] : r.terms_) {
            Rat k = e * Rat(N);
            Int kmod = k.get_num() % N;  // k integral by construction
            if (kmod < 0) kmod += N;
            c = c * pow(omega, kmod.get_ui());
        }
        return r;
    }

    std::string str(const std::string& var = "z") const {
        std::string s;
        for (const auto& [e, c] : terms_) {
            std::string coef = gauss_to_string(c);
            bool needs_parens = coef.find('+', 1) != std::string::npos ||
                                coef.find('-', 1) != std::string::npos;
            if (needs_parens) coef = "(" + coef + ")";
            std::string term;
            if (e == 0)
                term = coef;
            else {
                std::string head = coef == "1" ? "" : coef == "-1" ? "-" : coef + "*";
                std::string es = rat_to_string(e);
                if (es.find('/') != std::string::npos || es.find('-') != std::string::npos)
                    es = "(" + es + ")";
                term = head + var + (es == "1" ? "" : "^" + es);
            }
            if (s.empty())
                s = term;
            else if (!term.empty() && term[0] == '-')
                s += term;
            else
                s += "+" + term;
        }
        if (s.empty()) s = "0";
        if (trunc_) s += "+O(" + var + "^" + rat_to_string(*trunc_) + ")";
        return s;
    }

    // Deterministic comparison for reproducible branch ordering.
    friend int cmp(const PuiseuxSeries& a, const PuiseuxSeries& b) {
        std::size_t n = std::min(a.terms_.size(), b.terms_.size());
        for (std::size_t k = 0; k < n; ++k) {
            int c = cmp(a.terms_[k].first, b.terms_[k].first);
            if (c != 0) return c;  // smaller leading exponent sorts first
            c = cmp(a.terms_[k].second, b.terms_[k].second);
            if (c != 0) return c;
        }
        if (a.terms_.size() != b.terms_.size()) return a.terms_.size() < b.terms_.size() ? -1 : 1;
        return 0;
    }

  private:
    static std::optional<Rat> min_trunc(const std::optional<Rat>& a, const std::optional<Rat>& b) {
        if (!a) return b;
        if (!b) return a;
        return std::min(*a, *b);
    }
    void normalize() {
        std::sort(terms_.begin(), terms_.end(),
                  [](const Term& x, const Term& y) { return x.first < y.first; });
        std::vector<Term> out;
        for (auto& t : terms_) {
            if (t.second.is_zero()) continue;
            if (trunc_ && t.first >= *trunc_) continue;
            if (!out.empty() && out.back().first == t.first)
                throw value_error("duplicate exponent in Puiseux series");
            out.push_back(std::move(t));
        }
        terms_ = std::move(out);
    }

    std::vector<Term> terms_;
    std::optional<Rat> trunc_;
};

} // namespace speccurve

#endif
