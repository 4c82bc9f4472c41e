#include "relulim/generators.hpp"

#include <cmath>
#include <limits>

#include "relulim/norms.hpp"

namespace relulim {

void SequenceSpec::validate() const {
    if (width < 1) throw std::invalid_argument("spec: width must be >= 1");
    if (input_dim < 1) throw std::invalid_argument("spec: input_dim must be >= 1");
    switch (kind) {
        case SequenceKind::IdentityPerturbation:
        case SequenceKind::ResnetLike:
            if (alpha <= 0.0) throw std::invalid_argument("spec: alpha must be > 0");
            if (scale < 0.0) throw std::invalid_argument("spec: scale must be >= 0");
            if (bias_alpha <= 0.0) throw std::invalid_argument("spec: bias decay exponent must be > 0");
            if (bias_scale < 0.0) throw std::invalid_argument("spec: bias scale must be >= 0");
            break;
        case SequenceKind::Constant:
            if (width != input_dim)
                throw std::invalid_argument("spec: constant kind requires width == input_dim");
            if (constant_W.rows() != width || constant_W.cols() != width)
                throw std::invalid_argument("spec: constant weight must be width x width");
            if (constant_b.size() != width)
                throw std::invalid_argument("spec: constant bias must have length width");
            break;
        case SequenceKind::Explicit:
            if (!explicit_net) throw std::invalid_argument("spec: explicit kind requires a network");
            explicit_net->validate();
            if (explicit_net->width != width || explicit_net->input_dim != input_dim)
                throw std::invalid_argument("spec: explicit network shape disagrees with spec");
            break;
    }
}

double perturbation_target(const SequenceSpec& spec, int n) {
    return spec.scale / std::pow(static_cast<double>(n), spec.alpha);
}

double bias_target(const SequenceSpec& spec, int n) {
    return spec.bias_scale / std::pow(static_cast<double>(n), spec.bias_alpha);
}

bool has_decay_metadata(const SequenceSpec& spec) {
    return spec.kind == SequenceKind::IdentityPerturbation || spec.kind == SequenceKind::ResnetLike;
}

double power_law_tail(double scale, double alpha, int n) {
    if (scale == 0.0) return 0.0;
    if (alpha <= 1.0) return std::numeric_limits<double>::infinity();
    return scale / ((alpha - 1.0) * std::pow(static_cast<double>(n), alpha - 1.0));
}

namespace {

// identity-like base for the first layer: ones on the main diagonal of m x d
MatrixXd embedding_identity(int rows, int cols) {
    MatrixXd base = MatrixXd::Zero(rows, cols);
    for (int i = 0; i < std::min(rows, cols); ++i) base(i, i) = 1.0;
    return base;
}

MatrixXd draw_matrix(Rng& rng, int rows, int cols, double lo, double hi) {
    MatrixXd M(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) M(i, j) = rng.uniform(lo, hi);
    return M;
}

/// Rescale so the induced norm equals the target exactly (up to fp rounding).
MatrixXd rescale_to_norm(MatrixXd M, double target, NormKind p) {
    if (target == 0.0) return MatrixXd::Zero(M.rows(), M.cols());
    double cur = induced_matrix_norm(M, p);
    if (cur < 1e-300) {
        M.setZero();
        M(0, 0) = 1.0;
        cur = 1.0;
    }
    return M * (target / cur);
}

MatrixXd draw_perturbation(const SequenceSpec& spec, Rng& rng, int rows, int cols, double target) {
    if (spec.dist == PerturbationDist::SparseOneEntry) {
        MatrixXd P = MatrixXd::Zero(rows, cols);
        const int i = static_cast<int>(rng.below(rows));
        const int j = static_cast<int>(rng.below(cols));
        const double sign = rng.uniform() < 0.5 ? -1.0 : 1.0;
        P(i, j) = sign * target;
        return P;
    }
    return rescale_to_norm(draw_matrix(rng, rows, cols, -1.0, 1.0), target, spec.norm);
}

VectorXd draw_bias(const SequenceSpec& spec, Rng& rng, int m, double target) {
    if (target == 0.0) return VectorXd::Zero(m);
    const double lo = spec.bias_sign == BiasSign::Positive ? 0.0 : -1.0;
    VectorXd b(m);
    for (int i = 0; i < m; ++i) b(i) = rng.uniform(lo, 1.0);
    double cur = vector_norm(b, spec.norm);
    if (cur < 1e-300) {
        b.setZero();
        b(0) = 1.0;
        cur = 1.0;
    }
    return b * (target / cur);
}

Layer make_layer(const SequenceSpec& spec, int n) {
    Rng rng(Rng::mix(spec.seed, static_cast<std::uint64_t>(n)));
    const int m = spec.width;
    const int in = (n == 1) ? spec.input_dim : m;
    const double ptarget = perturbation_target(spec, n);
    MatrixXd P;
    if (spec.kind == SequenceKind::ResnetLike) {
        // collapsed two-factor residual unit, rescaled as a whole
        const int k = std::max(1, m / 2);
        const MatrixXd U = draw_matrix(rng, m, k, -1.0, 1.0);
        const MatrixXd V = draw_matrix(rng, k, in, -1.0, 1.0);
        P = rescale_to_norm(U * V, ptarget, spec.norm);
    } else {
        P = draw_perturbation(spec, rng, m, in, ptarget);
    }
    Layer layer;
    layer.W = embedding_identity(m, in) + P;
    layer.b = draw_bias(spec, rng, m, bias_target(spec, n));
    return layer;
}

}  // namespace

Network generate_sequence(const SequenceSpec& spec, int depth) {
    spec.validate();
    if (depth < 1) throw std::invalid_argument("generate_sequence: depth must be >= 1");
    Network net;
    net.input_dim = spec.input_dim;
    net.width = spec.width;
    switch (spec.kind) {
        case SequenceKind::IdentityPerturbation:
        case SequenceKind::ResnetLike:
            for (int n = 1; n <= depth; ++n) net.layers.push_back(make_layer(spec, n));
            break;
        case SequenceKind::Constant:
            for (int n = 1; n <= depth; ++n) net.layers.push_back({spec.constant_W, spec.constant_b});
            break;
        case SequenceKind::Explicit:
            if (depth > spec.explicit_net->depth())
                throw std::invalid_argument("generate_sequence: explicit spec has too few layers");
            net = *spec.explicit_net;
            net.layers.resize(depth);
            net.output_layer.reset();
            break;
    }
    net.validate();
    return net;
}

}  // namespace relulim
