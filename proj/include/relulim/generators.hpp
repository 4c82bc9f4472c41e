#ifndef RELULIM_GENERATORS_HPP
#define RELULIM_GENERATORS_HPP

#include "relulim/types.hpp"

namespace relulim {

/// Realize the first `depth` layers of the infinite family described by
/// `spec`. Deterministic given the seed; realizations at different depths
/// agree on their common prefix.
Network generate_sequence(const SequenceSpec& spec, int depth);

/// norm(P_n) the generator aims for at layer n (identity_perturbation and
/// resnet_like kinds); used by condition checks and tail bounds.
double perturbation_target(const SequenceSpec& spec, int n);

/// norm(b_n) the generator aims for at layer n.
double bias_target(const SequenceSpec& spec, int n);

/// True when the spec carries closed-form decay metadata (power law).
bool has_decay_metadata(const SequenceSpec& spec);

/// Analytic tail sum_{i>n} of the power-law perturbation model
/// scale / i^alpha, by integral comparison: scale / ((alpha-1) n^(alpha-1)).
double power_law_tail(double scale, double alpha, int n);

}  // namespace relulim

#endif
