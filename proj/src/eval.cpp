#include "relulim/eval.hpp"

#include <cmath>
#include <limits>

namespace relulim {

namespace {

ForwardResult forward_impl(const Network& net, const VectorXd& x, double* min_margin) {
    if (x.size() != net.input_dim)
        throw std::invalid_argument("forward: input length does not match input_dim");
    const int m = net.width;
    VectorXd state = x;
    std::vector<ActivationMatrix> masks;
    masks.reserve(net.layers.size());
    double margin = std::numeric_limits<double>::infinity();
    for (const auto& layer : net.layers) {
        VectorXd pre = layer.W * state + layer.b;
        std::uint64_t bits = 0;
        for (int j = 0; j < m; ++j) {
            margin = std::min(margin, std::abs(pre(j)));
            if (pre(j) > 0.0)
                bits |= std::uint64_t{1} << j;
            else
                pre(j) = 0.0;
        }
        masks.emplace_back(m, bits);
        state = std::move(pre);
    }
    if (min_margin) *min_margin = margin;
    return {std::move(state), ActivationPattern(std::move(masks))};
}

}  // namespace

ForwardResult forward(const Network& net, const VectorXd& x) {
    return forward_impl(net, x, nullptr);
}

ForwardResult forward_with_margin(const Network& net, const VectorXd& x, double& min_margin) {
    return forward_impl(net, x, &min_margin);
}

AffinePiece affine_piece(const Network& net, const ActivationPattern& pattern) {
    if (pattern.depth() != net.depth())
        throw std::invalid_argument("affine_piece: pattern length must equal network depth");
    if (pattern.width() != net.width)
        throw std::invalid_argument("affine_piece: pattern width must equal network width");
    MatrixXd A = pattern.layers[0].apply(net.layers[0].W);
    VectorXd c = pattern.layers[0].apply(net.layers[0].b);
    for (int k = 1; k < net.depth(); ++k) {
        const auto& mask = pattern.layers[k];
        const auto& layer = net.layers[k];
        A = mask.apply(MatrixXd(layer.W * A));
        c = mask.apply(VectorXd(layer.W * c + layer.b));
    }
    return {std::move(A), std::move(c), pattern};
}

double representation_check(const Network& net, const std::vector<VectorXd>& samples) {
    if (samples.empty()) throw std::invalid_argument("representation_check: no samples");
    double worst = 0.0;
    for (const auto& x : samples) {
        const ForwardResult fr = forward(net, x);
        const AffinePiece piece = affine_piece(net, fr.pattern);
        worst = std::max(worst, (fr.value - piece(x)).lpNorm<Eigen::Infinity>());
    }
    return worst;
}

VectorXd output_map(const Network& net, const VectorXd& y) {
    if (!net.output_layer) throw std::logic_error("output_map: network has no output layer");
    if (y.size() != net.width)
        throw std::invalid_argument("output_map: vector length does not match width");
    return net.output_layer->W * y + net.output_layer->b;
}

}  // namespace relulim
