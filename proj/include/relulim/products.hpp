#ifndef RELULIM_PRODUCTS_HPP
#define RELULIM_PRODUCTS_HPP

#include <functional>

#include "relulim/types.hpp"

namespace relulim {

/// Growth past this value (in the chosen norm) counts as divergence.
inline constexpr double kDivergenceThreshold = 1e12;

enum class LimitStatus { Converged, Diverged, Undecided };
std::string to_string(LimitStatus s);

/// Tail model for norms beyond the observed horizon.
struct DecayModel {
    enum class Kind { None, PowerLaw, Geometric };
    Kind kind = Kind::None;
    double coeff = 0.0;  // PowerLaw: a_i = coeff / i^rate; Geometric: a_i = coeff * rate^i
    double rate = 0.0;

    static DecayModel none() { return {}; }
    static DecayModel power_law(double coeff, double rate) {
        return {Kind::PowerLaw, coeff, rate};
    }
    static DecayModel geometric(double coeff, double rate) {
        return {Kind::Geometric, coeff, rate};
    }
    /// sum over i > n of a_i
    double tail(int n) const;
};

/// Running ordered product of masked weights with its Cauchy history.
struct ProductState {
    MatrixXd value;
    int depth = 0;
    std::vector<double> norm_history;  // norm(P_i), i = 2..depth, when W_i = I + P_i
    std::vector<double> diffs;         // norm(state_n - state_{n-1}), n = 2..depth
    std::vector<double> value_norms;   // norm(state_n), n = 2..depth
};

/// Running bias-accumulation series c_n = I_n W_n c_{n-1} + I_n b_n.
struct SeriesState {
    VectorXd value;
    int depth = 0;
    std::vector<double> diffs;        // norm(c_n - c_{n-1}), n = 1..depth
    std::vector<double> value_norms;  // norm(c_n), n = 1..depth
};

using MaskRule = std::function<ActivationMatrix(int layer)>;

MaskRule identity_masks(int m);
MaskRule fixed_masks(const ActivationMatrix& mask);
MaskRule random_masks(int m, std::uint64_t seed);
/// identity up to layer k, all-zero mask afterwards
MaskRule empty_after(int m, int k);

/// Ordered product over a prefix of (mask, weight) factors, 1-based
/// inclusive indices, later factors multiplying on the left.
/// An empty range (to < from) yields the identity.
MatrixXd partial_product(const std::vector<std::pair<ActivationMatrix, MatrixXd>>& factors,
                         int from, int to);

struct ProductLimitResult {
    MatrixXd value;
    LimitStatus status = LimitStatus::Undecided;
    ProductState state;
    double tail_bound_at_end = std::numeric_limits<double>::quiet_NaN();
};

/// Run the masked product of the realized sequence to n_max and judge
/// convergence by a windowed Cauchy test (last 10 step diffs <= tol).
ProductLimitResult product_limit(const SequenceSpec& seq, const MaskRule& mask_rule, NormKind p,
                                 double tol, int n_max);

struct SeriesLimitResult {
    VectorXd value;
    LimitStatus status = LimitStatus::Undecided;
    SeriesState state;
};

SeriesLimitResult series_limit(const SequenceSpec& seq, const MaskRule& mask_rule, NormKind p,
                               double tol, int n_max);

/// The exponential tail bound 2 (sum_{i>cut} a_i) exp(sum_{i>=2} a_i),
/// with a_i supplied for i = 2..N and the model covering i > N.
double tail_bound(const std::vector<double>& pnorms, int cut,
                  const DecayModel& model = DecayModel::none());

struct TailLemmaCheck {
    double lhs = 0.0;
    double rhs = 0.0;
    bool holds = false;
};

/// Brute-force check of the exponential tail inequality on a finite
/// 1-based sequence a_1..a_n at cut index p (n <= 20).
TailLemmaCheck verify_tail_lemma(const std::vector<double>& a, int p);

struct StabilizationResult {
    int index = 0;  // smallest prefix length after which the intersection is constant
    ActivationMatrix final_mask;
};

StabilizationResult stabilization_index(const std::vector<ActivationMatrix>& masks);

enum class ConditionVerdict { Satisfied, Violated, EmpiricalOnly };
std::string to_string(ConditionVerdict v);

/// Hypothesis audit for the product/series convergence theorems over a
/// finite horizon: perturbation summability, the o(1/n) tail condition
/// and bias summability.
struct ConditionReport {
    std::vector<double> pnorm;              // norm(W_n - I), n = 2..N
    std::vector<double> pnorm_partial_sum;  // running sums of the above
    std::vector<double> n_times_tail;       // n * (observed tail + model tail)
    std::vector<double> bnorm;              // norm(b_n), n = 1..N
    double sup_bnorm = 0.0;
    double sum_bnorm = 0.0;
    ConditionVerdict summable = ConditionVerdict::EmpiricalOnly;
    ConditionVerdict small_tail = ConditionVerdict::EmpiricalOnly;  // o(1/n)
    ConditionVerdict bias_summable = ConditionVerdict::EmpiricalOnly;
};

ConditionReport check_product_conditions(const SequenceSpec& seq, NormKind p, int horizon);

}  // namespace relulim

#endif
