#ifndef SPECCURVE_CHART_HPP
#define SPECCURVE_CHART_HPP

#include <string>

#include "speccurve/bipoly.hpp"

namespace speccurve {

// Affine chart form of a curve: the spectral curve near a declared point in
// the trivialization zeta = zeta_i * z_i^{-(m_i+1)}, or a blow-up chart.
// Q is primitive (content 1) and nonzero.
struct ChartCurve {
    BiPoly Q;
    int point_index = -1;  // index into the declared divisor points
    int order_m = 0;       // pole order parameter m_i of that point
    std::string chart_id;
    std::string provenance;
};

} // namespace speccurve

#endif
