#ifndef RELULIM_TYPES_HPP
#define RELULIM_TYPES_HPP

#include <cstdint>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace relulim {

using Eigen::MatrixXd;
using Eigen::VectorXd;

/// Thrown when an input exceeds a built-in desk-scale guardrail
/// (enumeration dimensions, brute-force sequence lengths).
class ResourceLimitError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Activation masks
// ---------------------------------------------------------------------------

/// Diagonal 0/1 matrix of size m, identified by its support set.
/// Stored as width + bitset; bit k-1 set means diagonal entry k is 1.
class ActivationMatrix {
public:
    ActivationMatrix() = default;
    ActivationMatrix(int width, std::uint64_t bits) : width_(width), bits_(bits) {
        if (width < 1 || width > 63) throw std::invalid_argument("mask width must be in [1,63]");
        if (bits >> width) throw std::invalid_argument("support index out of range");
    }

    static ActivationMatrix identity(int width) {
        return ActivationMatrix(width, (std::uint64_t{1} << width) - 1);
    }
    static ActivationMatrix empty(int width) { return ActivationMatrix(width, 0); }

    /// Build from a 1-based support index set.
    static ActivationMatrix from_support(const std::set<int>& support, int m) {
        if (m < 1 || m > 63) throw std::invalid_argument("mask width must be in [1,63]");
        std::uint64_t bits = 0;
        for (int k : support) {
            if (k < 1 || k > m) throw std::invalid_argument("support index out of range");
            bits |= std::uint64_t{1} << (k - 1);
        }
        return ActivationMatrix(m, bits);
    }

    int width() const { return width_; }
    std::uint64_t bits() const { return bits_; }
    bool active(int k) const { return (bits_ >> (k - 1)) & 1; }  // 1-based
    bool is_identity() const { return bits_ == (std::uint64_t{1} << width_) - 1; }
    bool is_empty() const { return bits_ == 0; }

    std::set<int> support() const {
        std::set<int> s;
        for (int k = 1; k <= width_; ++k)
            if (active(k)) s.insert(k);
        return s;
    }

    MatrixXd dense() const {
        MatrixXd J = MatrixXd::Zero(width_, width_);
        for (int k = 1; k <= width_; ++k)
            if (active(k)) J(k - 1, k - 1) = 1.0;
        return J;
    }

    /// Zero out the rows of v outside the support.
    VectorXd apply(const VectorXd& v) const {
        check_rows(static_cast<int>(v.size()));
        VectorXd r = v;
        for (int k = 1; k <= width_; ++k)
            if (!active(k)) r(k - 1) = 0.0;
        return r;
    }
    MatrixXd apply(const MatrixXd& M) const {
        check_rows(static_cast<int>(M.rows()));
        MatrixXd r = M;
        for (int k = 1; k <= width_; ++k)
            if (!active(k)) r.row(k - 1).setZero();
        return r;
    }

    friend bool operator==(const ActivationMatrix& a, const ActivationMatrix& b) {
        return a.width_ == b.width_ && a.bits_ == b.bits_;
    }
    friend bool operator!=(const ActivationMatrix& a, const ActivationMatrix& b) { return !(a == b); }
    friend bool operator<(const ActivationMatrix& a, const ActivationMatrix& b) {
        if (a.width_ != b.width_) return a.width_ < b.width_;
        return a.bits_ < b.bits_;
    }

private:
    void check_rows(int rows) const {
        if (rows != width_) throw std::invalid_argument("mask width does not match operand rows");
    }
    int width_ = 1;
    std::uint64_t bits_ = 0;
};

inline ActivationMatrix make_activation_matrix(const std::set<int>& support, int m) {
    return ActivationMatrix::from_support(support, m);
}

/// Support of an ordered mask product equals the intersection of supports.
inline ActivationMatrix activation_product(const std::vector<ActivationMatrix>& masks) {
    if (masks.empty()) throw std::invalid_argument("activation_product: empty list");
    std::uint64_t bits = masks.front().bits();
    const int w = masks.front().width();
    for (const auto& mk : masks) {
        if (mk.width() != w) throw std::invalid_argument("activation_product: width mismatch");
        bits &= mk.bits();
    }
    return ActivationMatrix(w, bits);
}

/// One mask per layer; identifies one affine piece of the network.
struct ActivationPattern {
    std::vector<ActivationMatrix> layers;

    ActivationPattern() = default;
    explicit ActivationPattern(std::vector<ActivationMatrix> ls) : layers(std::move(ls)) {
        validate();
    }
    void validate() const {
        if (layers.empty()) throw std::invalid_argument("pattern must have at least one layer");
        for (const auto& l : layers)
            if (l.width() != layers.front().width())
                throw std::invalid_argument("pattern layers must share one width");
    }
    int depth() const { return static_cast<int>(layers.size()); }
    int width() const { return layers.front().width(); }

    friend bool operator==(const ActivationPattern& a, const ActivationPattern& b) {
        return a.layers == b.layers;
    }
    friend bool operator<(const ActivationPattern& a, const ActivationPattern& b) {
        return a.layers < b.layers;
    }
};

// ---------------------------------------------------------------------------
// Networks
// ---------------------------------------------------------------------------

struct Layer {
    MatrixXd W;
    VectorXd b;
};

/// Finite prefix of a deep ReLU network: input dim d, width m,
/// hidden layers (W_i, b_i), optional affine output layer.
struct Network {
    int input_dim = 0;
    int width = 0;
    std::vector<Layer> layers;
    std::optional<Layer> output_layer;

    int depth() const { return static_cast<int>(layers.size()); }

    void validate() const {
        if (input_dim < 1) throw std::invalid_argument("input_dim must be >= 1");
        if (width < 1) throw std::invalid_argument("width must be >= 1");
        if (layers.empty()) throw std::invalid_argument("network needs at least one layer");
        for (std::size_t i = 0; i < layers.size(); ++i) {
            const auto& l = layers[i];
            const int in = (i == 0) ? input_dim : width;
            if (l.W.rows() != width || l.W.cols() != in)
                throw std::invalid_argument("layer " + std::to_string(i + 1) + ": bad weight shape");
            if (l.b.size() != width)
                throw std::invalid_argument("layer " + std::to_string(i + 1) + ": bad bias length");
        }
        if (output_layer) {
            if (output_layer->W.cols() != width)
                throw std::invalid_argument("output layer: bad weight shape");
            if (output_layer->b.size() != output_layer->W.rows())
                throw std::invalid_argument("output layer: bad bias length");
        }
    }
};

// ---------------------------------------------------------------------------
// Norms
// ---------------------------------------------------------------------------

/// The three supported vector norms; all are nondecreasing on
/// componentwise moduli, and their induced matrix norms satisfy
/// submultiplicativity and norm(mask) <= 1.
enum class NormKind { L1, L2, Linf };

std::string to_string(NormKind p);
NormKind norm_kind_from_string(const std::string& s);

// ---------------------------------------------------------------------------
// Sequence specifications
// ---------------------------------------------------------------------------

enum class SequenceKind { IdentityPerturbation, Constant, ResnetLike, Explicit };

enum class PerturbationDist { DenseUniform, SparseOneEntry };

enum class BiasSign { Random, Positive };

/// Generator description for an infinite weight/bias family {W_n, b_n}.
/// Realizing it to any finite depth yields a valid Network prefix,
/// deterministically given the seed (prefixes of deeper realizations agree).
struct SequenceSpec {
    SequenceKind kind = SequenceKind::IdentityPerturbation;
    std::uint64_t seed = 0;

    int width = 1;
    int input_dim = 1;

    // identity_perturbation / resnet_like: W_n = I + P_n with
    // norm(P_n) <= scale / n^alpha, norm(b_n) <= bias_scale / n^bias_alpha.
    double alpha = 2.0;
    double scale = 0.0;
    double bias_alpha = 2.0;
    double bias_scale = 0.0;
    PerturbationDist dist = PerturbationDist::DenseUniform;
    BiasSign bias_sign = BiasSign::Random;
    NormKind norm = NormKind::L1;

    // constant: one (W, b) repeated at every layer (requires width == input_dim).
    MatrixXd constant_W;
    VectorXd constant_b;

    // explicit: a finite network realized verbatim.
    std::optional<Network> explicit_net;

    void validate() const;
};

// ---------------------------------------------------------------------------
// Deterministic RNG
// ---------------------------------------------------------------------------

/// splitmix64; identical streams on every platform.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// uniform on [0, 1)
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }
    /// uniform on [lo, hi)
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    /// uniform integer in [0, n)
    std::uint64_t below(std::uint64_t n) { return next_u64() % n; }

    static std::uint64_t mix(std::uint64_t seed, std::uint64_t salt) {
        Rng r(seed ^ (0x632be59bd9b4e019ULL * (salt + 1)));
        return r.next_u64();
    }

private:
    std::uint64_t state_;
};

}  // namespace relulim

#endif  // RELULIM_TYPES_HPP
