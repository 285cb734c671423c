#ifndef SPECCURVE_TEST_FIXTURES_HPP
#define SPECCURVE_TEST_FIXTURES_HPP

#include "speccurve/blowup.hpp"
#include "speccurve/lattice.hpp"

namespace speccurve::fixtures {

// Rank 2, one irregular point at z = 0 with m = 1, jets (1) and (-1),
// zero residue: theta = diag(z^-2, -z^-2) dz. Reducible spectral curve.
inline HiggsField e1_higgs() {
    NormalForm nf;
    nf.frame = QMat::identity(2);
    nf.jets = {{GaussRat(1)}, {GaussRat(-1)}};
    nf.residue = QMat(2, 2);
    SingularPoint pt{GaussRat(0), 1, nf};
    return build_higgs(2, {pt});
}

// P = zeta^2 - 1/(z^4 (z-1)) with divisor points (0, m=1) and (1, m=0).
inline SpectralData e2_spectral() {
    SpectralData S;
    S.rank = 2;
    UniPoly den = UniPoly::monomial(GaussRat(1), 4) *
                  UniPoly(std::vector<GaussRat>{GaussRat(-1), GaussRat(1)});
    S.a = {RatFunc(0), RatFunc(UniPoly::constant(GaussRat(-1)), den)};
    S.points = {{GaussRat(0), 1}, {GaussRat(1), 0}};
    return S;
}

} // namespace speccurve::fixtures

#endif
