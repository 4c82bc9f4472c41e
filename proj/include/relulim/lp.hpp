#ifndef RELULIM_LP_HPP
#define RELULIM_LP_HPP

#include "relulim/types.hpp"

namespace relulim {

/// One linear constraint on the input cube, a.x + beta > 0 when strict,
/// a.x + beta <= 0 otherwise.
struct HalfSpace {
    VectorXd normal;
    double offset = 0.0;
    bool strict = true;
};

/// Result of the interior-certification program
///   maximize t  s.t.  a.x + beta >= t (strict rows), a.x + beta <= 0
///   (non-strict rows), x in [0,1]^d, t <= 1.
/// The region has nonempty interior (relative to the cube) iff slack >= eps.
struct InteriorCertificate {
    bool feasible = false;   // the relaxed program admitted any point at all
    double slack = 0.0;      // optimal t
    VectorXd witness;        // argmax x, valid when feasible
};

/// Dense two-phase simplex with Bland's rule; desk-scale sizes only.
/// Throws std::runtime_error on numerical failure (iteration cap).
InteriorCertificate certify_interior(const std::vector<HalfSpace>& constraints, int dim);

}  // namespace relulim

#endif
