#ifndef RELULIM_LAB_HPP
#define RELULIM_LAB_HPP

#include "relulim/eval.hpp"
#include "relulim/products.hpp"
#include "relulim/types.hpp"

namespace relulim {

/// Thrown when a probe point lies numerically on a pattern boundary.
class BoundaryProbeError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Default evaluation grid: a uniform 33^d lattice for d <= 2, 1000
/// low-discrepancy (Halton) points for d = 3 and above.
std::vector<VectorXd> default_grid(int d);

/// Log-spaced default depth schedule {1, 2, 5, ..., 500}.
std::vector<int> default_depth_schedule();

/// Structured result of a pointwise convergence experiment.
struct ConvergenceReport {
    int grid_size = 0;
    int input_dim = 0;
    std::vector<int> depths;
    std::vector<double> delta_sup;        // max_x norm_inf(N_n(x) - N_{n-1}(x)) at scheduled n
    std::vector<double> lp_estimate;      // grid L^p distance between consecutive scheduled depths
    std::vector<double> w_dist_identity;  // norm(W_n - I) at scheduled n (NaN at n = 1)
    std::vector<double> b_norm;           // norm(b_n) at scheduled n
    std::vector<double> tail_bound_col;   // analytic product tail bound at n (NaN without metadata)
    LimitStatus verdict = LimitStatus::Undecided;
    ConditionReport conditions;
    std::vector<VectorXd> limit_snapshot;  // grid values at max scheduled depth (converged runs)
};

ConvergenceReport pointwise_experiment(const SequenceSpec& spec, const std::vector<VectorXd>& grid,
                                       const std::vector<int>& depth_schedule, double tol,
                                       NormKind p = NormKind::Linf);

struct AuditReport {
    std::vector<double> w_dist;  // norm(W_n - I), n = 2..horizon
    std::vector<double> b_norm;  // norm(b_n), n = 1..horizon
    bool weight_pass = false;
    bool bias_pass = false;
    bool pass() const { return weight_pass && bias_pass; }
};

/// Trend audit of the necessary conditions W_n -> I and b_n -> 0.
AuditReport necessary_condition_audit(const SequenceSpec& spec, int horizon, double tol,
                                      NormKind p = NormKind::Linf);

struct CoefficientTrace {
    std::vector<int> depths;
    std::vector<MatrixXd> A;
    std::vector<VectorXd> c;
    bool cauchy = false;
    bool ls_checked = false;  // enough same-pattern neighbours existed to fit
    double ls_gap = 0.0;      // max deviation of the least-squares fit from the exact piece
};

/// Track the affine-piece coefficients of the probe's activation domain
/// across depths, check they form a Cauchy sequence, and cross-check the
/// exact piece against a least-squares fit over same-pattern neighbours.
CoefficientTrace region_coefficient_convergence(const SequenceSpec& spec, const VectorXd& probe,
                                                const std::vector<int>& depth_schedule,
                                                double tol, NormKind p = NormKind::Linf);

/// Monte-Carlo estimate of the L^p([0,1]^d) distance between the depth-n
/// and depth-n' realizations of the spec.
double lp_distance_estimate(const SequenceSpec& spec, int n, int n_prime, NormKind p,
                            int sample_count, std::uint64_t seed);

}  // namespace relulim

#endif
