#ifndef SPECCURVE_NUMBERFIELD_HPP
#define SPECCURVE_NUMBERFIELD_HPP

// Arithmetic in K = Q(i)[z]/(h) for an irreducible monic h. Used to decide
// whether candidate singular points with coordinates outside Q(i) are genuine
// solutions (triangular systems).

#include <memory>
#include <utility>
#include <vector>

#include "speccurve/bipoly.hpp"

namespace speccurve {

struct NumberField {
    UniPoly modulus;  // monic irreducible over Q(i)
};

class NFElem {
  public:
    NFElem() : fld_(nullptr) {}
    NFElem(const NumberField* fld, UniPoly rep) : fld_(fld), rep_(std::move(rep)) { reduce(); }

    static NFElem make(const NumberField* fld, const UniPoly& p) { return NFElem(fld, p); }

    const UniPoly& rep() const { return rep_; }
    bool is_zero() const { return rep_.is_zero(); }

    friend NFElem operator+(const NFElem& a, const NFElem& b) {
        return NFElem(a.field(b), a.rep_ + b.rep_);
    }
    friend NFElem operator-(const NFElem& a, const NFElem& b) {
        return NFElem(a.field(b), a.rep_ - b.rep_);
    }
    friend NFElem operator*(const NFElem& a, const NFElem& b) {
        return NFElem(a.field(b), a.rep_ * b.rep_);
    }
    NFElem inv() const {
        if (is_zero()) throw value_error("inverse of zero in number field");
        auto [g, u, v] = ext_gcd(rep_, fld_->modulus);
        (void)v;
        if (g.deg() != 0)
            throw value_error("number field modulus is not irreducible (gcd found)");
        return NFElem(fld_, u);  // g is monic, hence g == 1
    }
    friend NFElem operator/(const NFElem& a, const NFElem& b) { return a * b.inv(); }
    friend bool operator==(const NFElem& a, const NFElem& b) { return a.rep_ == b.rep_; }

  private:
    const NumberField* field(const NFElem& other) const {
        return fld_ ? fld_ : other.fld_;
    }
    void reduce() {
        if (!fld_ || rep_.is_zero()) return;
        auto [q, r] = divmod(rep_, fld_->modulus);
        (void)q;
        rep_ = std::move(r);
    }
    const NumberField* fld_;
    UniPoly rep_;
};

// Polynomials in w with coefficients in K, lowest degree first.
using NFPoly = std::vector<NFElem>;

inline void nf_trim(NFPoly& f) {
    while (!f.empty() && f.back().is_zero()) f.pop_back();
}
inline int nf_deg(const NFPoly& f) { return static_cast<int>(f.size()) - 1; }

// Reduce the w-coefficients of F modulo h.
inline NFPoly nf_from_bipoly(const NumberField* fld, const BiPoly& F) {
    NFPoly out(static_cast<std::size_t>(F.deg_w()) + 1);
    for (std::size_t k = 0; k < out.size(); ++k) out[k] = NFElem(fld, F.wcoeff(k));
    nf_trim(out);
    return out;
}

inline NFPoly nf_mod(NFPoly a, const NFPoly& b) {
    NFElem inv_lc = b.back().inv();
    while (nf_deg(a) >= nf_deg(b) && !a.empty()) {
        NFElem c = a.back() * inv_lc;
        std::size_t shift = a.size() - b.size();
        for (std::size_t k = 0; k < b.size(); ++k) a[shift + k] = a[shift + k] - c * b[k];
        nf_trim(a);
    }
    return a;
}

inline NFPoly nf_gcd(NFPoly a, NFPoly b) {
    nf_trim(a);
    nf_trim(b);
    while (!b.empty()) {
        NFPoly r = nf_mod(std::move(a), b);
        a = std::move(b);
        b = std::move(r);
    }
    if (a.empty()) return a;
    NFElem s = a.back().inv();
    for (auto& c : a) c = c * s;
    return a;
}

} // namespace speccurve

#endif
