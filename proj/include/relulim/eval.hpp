#ifndef RELULIM_EVAL_HPP
#define RELULIM_EVAL_HPP

#include "relulim/types.hpp"

namespace relulim {

struct ForwardResult {
    VectorXd value;
    ActivationPattern pattern;
};

/// The affine map (A, c) that the network equals on one activation domain:
/// A is the ordered product of masked weights, c the accumulated bias sum.
struct AffinePiece {
    MatrixXd A;
    VectorXd c;
    ActivationPattern pattern;

    VectorXd operator()(const VectorXd& x) const { return A * x + c; }
};

/// Exact forward pass. A neuron is activated (mask bit 1) iff its
/// pre-activation is strictly positive; exactly zero counts as deactivated.
ForwardResult forward(const Network& net, const VectorXd& x);

/// Forward pass that also reports the smallest |pre-activation| seen,
/// used to flag inputs lying (numerically) on a pattern boundary.
ForwardResult forward_with_margin(const Network& net, const VectorXd& x, double& min_margin);

/// (A, c) for a prescribed pattern, built by the layer recurrence
/// A <- I_k W_k A, c <- I_k (W_k c + b_k).
AffinePiece affine_piece(const Network& net, const ActivationPattern& pattern);

/// Max over samples of the sup-norm gap between the forward value and the
/// affine piece of the sample's own pattern. Samples must lie in [0,1]^d.
double representation_check(const Network& net, const std::vector<VectorXd>& samples);

/// Output-layer map y = W_o x + b_o. Requires an output layer.
VectorXd output_map(const Network& net, const VectorXd& y);

}  // namespace relulim

#endif
