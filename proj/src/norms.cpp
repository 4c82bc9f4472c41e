#include "relulim/norms.hpp"

#include <cmath>

namespace relulim {

std::string to_string(NormKind p) {
    switch (p) {
        case NormKind::L1: return "l1";
        case NormKind::L2: return "l2";
        case NormKind::Linf: return "linf";
    }
    return "l1";
}

NormKind norm_kind_from_string(const std::string& s) {
    if (s == "l1") return NormKind::L1;
    if (s == "l2") return NormKind::L2;
    if (s == "linf") return NormKind::Linf;
    throw std::invalid_argument("unknown norm: " + s + " (expected l1, l2 or linf)");
}

double vector_norm(const VectorXd& v, NormKind p) {
    switch (p) {
        case NormKind::L1: return v.lpNorm<1>();
        case NormKind::L2: return v.norm();
        case NormKind::Linf: return v.size() == 0 ? 0.0 : v.lpNorm<Eigen::Infinity>();
    }
    return 0.0;
}

namespace {

double spectral_norm(const MatrixXd& A) {
    const MatrixXd G = A.transpose() * A;
    const auto n = G.rows();
    if (n == 0) return 0.0;
    VectorXd v = VectorXd::Ones(n) / std::sqrt(static_cast<double>(n));
    double lambda = 0.0;
    for (int it = 0; it < 10000; ++it) {
        VectorXd w = G * v;
        const double nw = w.norm();
        if (nw == 0.0) return 0.0;
        v = w / nw;
        const double next = v.dot(G * v);
        if (std::abs(next - lambda) <= 1e-10 * std::max(1.0, std::abs(next))) {
            lambda = next;
            break;
        }
        lambda = next;
    }
    return std::sqrt(std::max(0.0, lambda));
}

}  // namespace

double induced_matrix_norm(const MatrixXd& A, NormKind p) {
    if (A.size() == 0) return 0.0;
    switch (p) {
        case NormKind::L1: return A.cwiseAbs().colwise().sum().maxCoeff();
        case NormKind::Linf: return A.cwiseAbs().rowwise().sum().maxCoeff();
        case NormKind::L2: return spectral_norm(A);
    }
    return 0.0;
}

}  // namespace relulim
