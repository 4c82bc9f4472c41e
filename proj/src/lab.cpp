#include "relulim/lab.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "relulim/generators.hpp"
#include "relulim/norms.hpp"

namespace relulim {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double halton(int index, int base) {
    double f = 1.0, r = 0.0;
    while (index > 0) {
        f /= base;
        r += f * (index % base);
        index /= base;
    }
    return r;
}

}  // namespace

std::vector<VectorXd> default_grid(int d) {
    std::vector<VectorXd> grid;
    if (d <= 2) {
        const int n = 33;
        if (d == 1) {
            for (int i = 0; i < n; ++i) {
                VectorXd x(1);
                x << i / double(n - 1);
                grid.push_back(x);
            }
        } else {
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) {
                    VectorXd x(2);
                    x << i / double(n - 1), j / double(n - 1);
                    grid.push_back(x);
                }
        }
    } else {
        const int primes[] = {2, 3, 5, 7, 11, 13};
        for (int i = 1; i <= 1000; ++i) {
            VectorXd x(d);
            for (int k = 0; k < d; ++k) x(k) = halton(i, primes[k % 6]);
            grid.push_back(x);
        }
    }
    return grid;
}

std::vector<int> default_depth_schedule() { return {1, 2, 5, 10, 20, 50, 100, 200, 500}; }

ConvergenceReport pointwise_experiment(const SequenceSpec& spec, const std::vector<VectorXd>& grid,
                                       const std::vector<int>& depth_schedule, double tol,
                                       NormKind p) {
    if (grid.empty()) throw std::invalid_argument("pointwise_experiment: empty grid");
    if (depth_schedule.empty() || !std::is_sorted(depth_schedule.begin(), depth_schedule.end()) ||
        depth_schedule.front() < 1)
        throw std::invalid_argument("pointwise_experiment: schedule must be increasing, >= 1");
    spec.validate();

    const int max_depth = depth_schedule.back();
    const Network net = generate_sequence(spec, max_depth);
    const int m = net.width;
    const MatrixXd eye = MatrixXd::Identity(m, m);

    ConvergenceReport report;
    report.grid_size = static_cast<int>(grid.size());
    report.input_dim = spec.input_dim;
    report.depths = depth_schedule;
    report.conditions = check_product_conditions(spec, p, std::max(10, max_depth));

    const DecayModel model = has_decay_metadata(spec)
                                 ? DecayModel::power_law(spec.scale, spec.alpha)
                                 : DecayModel::none();

    // N_0 is the input embedded into R^m so depth-1 deltas are well defined
    std::vector<VectorXd> state;
    state.reserve(grid.size());
    for (const auto& x : grid) {
        VectorXd s = VectorXd::Zero(m);
        s.head(std::min<int>(m, static_cast<int>(x.size()))) =
            x.head(std::min<int>(m, static_cast<int>(x.size())));
        state.push_back(std::move(s));
    }
    std::vector<VectorXd> prev_sched = state;  // values at the previous scheduled depth
    bool blew_up = false;
    std::size_t sched_pos = 0;

    for (int n = 1; n <= max_depth && !blew_up; ++n) {
        const auto& layer = net.layers[n - 1];
        double delta = 0.0;
        for (std::size_t gi = 0; gi < state.size(); ++gi) {
            auto& s = state[gi];
            const VectorXd& in = (n == 1) ? static_cast<const VectorXd&>(grid[gi]) : s;
            VectorXd next = (layer.W * in + layer.b).cwiseMax(0.0);
            delta = std::max(delta, (next - s).lpNorm<Eigen::Infinity>());
            if (!next.allFinite() || next.lpNorm<Eigen::Infinity>() > kDivergenceThreshold)
                blew_up = true;
            s = std::move(next);
        }
        if (sched_pos < depth_schedule.size() && n == depth_schedule[sched_pos]) {
            report.delta_sup.push_back(delta);
            double lp = 0.0;
            if (p == NormKind::Linf) {
                for (std::size_t i = 0; i < state.size(); ++i)
                    lp = std::max(lp, vector_norm(state[i] - prev_sched[i], p));
            } else {
                const double pe = (p == NormKind::L1) ? 1.0 : 2.0;
                for (std::size_t i = 0; i < state.size(); ++i)
                    lp += std::pow(vector_norm(state[i] - prev_sched[i], p), pe);
                lp = std::pow(lp / state.size(), 1.0 / pe);
            }
            report.lp_estimate.push_back(lp);
            report.w_dist_identity.push_back(n == 1 ? kNaN
                                                    : induced_matrix_norm(layer.W - eye, p));
            report.b_norm.push_back(vector_norm(layer.b, p));
            report.tail_bound_col.push_back(
                model.kind == DecayModel::Kind::None
                    ? kNaN
                    : 2.0 * model.tail(n) * std::exp(model.tail(1)));
            prev_sched = state;
            ++sched_pos;
        }
    }

    if (blew_up) {
        report.verdict = LimitStatus::Diverged;
        return report;
    }

    const auto& ds = report.delta_sup;
    const std::size_t k = ds.size();
    const bool persistent = k >= 3 && ds[k - 1] >= tol && ds[k - 2] >= tol && ds[k - 3] >= tol;
    const bool settled = k >= 2 && ds[k - 1] <= tol && ds[k - 2] <= tol &&
                         ds[k - 1] <= 10.0 * std::max(ds[k - 2], tol);
    if (persistent) {
        report.verdict = LimitStatus::Diverged;
    } else if (settled || (k == 1 && ds[0] <= tol)) {
        report.verdict = LimitStatus::Converged;
        report.limit_snapshot = state;
    }
    return report;
}

namespace {

// final value below tol, and at most factor-2 upticks over the last half
bool trend_pass(const std::vector<double>& values, double tol) {
    if (values.empty()) return true;
    if (!(values.back() <= tol)) return false;
    for (std::size_t i = values.size() / 2; i + 1 < values.size(); ++i)
        if (values[i + 1] > 2.0 * values[i] && values[i + 1] > tol) return false;
    return true;
}

}  // namespace

AuditReport necessary_condition_audit(const SequenceSpec& spec, int horizon, double tol,
                                      NormKind p) {
    if (horizon < 10) throw std::invalid_argument("necessary_condition_audit: horizon must be >= 10");
    const Network net = generate_sequence(spec, horizon);
    const MatrixXd eye = MatrixXd::Identity(net.width, net.width);
    AuditReport report;
    for (int n = 2; n <= horizon; ++n)
        report.w_dist.push_back(induced_matrix_norm(net.layers[n - 1].W - eye, p));
    for (int n = 1; n <= horizon; ++n) report.b_norm.push_back(vector_norm(net.layers[n - 1].b, p));
    report.weight_pass = trend_pass(report.w_dist, tol);
    report.bias_pass = trend_pass(report.b_norm, tol);
    return report;
}

CoefficientTrace region_coefficient_convergence(const SequenceSpec& spec, const VectorXd& probe,
                                                const std::vector<int>& depth_schedule,
                                                double tol, NormKind p) {
    if (depth_schedule.empty()) throw std::invalid_argument("empty depth schedule");
    for (double v : probe)
        if (v < 0.0 || v > 1.0) throw std::invalid_argument("probe must lie in [0,1]^d");
    const int max_depth = depth_schedule.back();
    Network net = generate_sequence(spec, max_depth);

    CoefficientTrace trace;
    for (int depth : depth_schedule) {
        Network prefix = net;
        prefix.layers.resize(depth);
        double margin = 0.0;
        const ForwardResult fr = forward_with_margin(prefix, probe, margin);
        if (margin < 1e-9)
            throw BoundaryProbeError("probe lies on a pattern boundary at depth " +
                                     std::to_string(depth) + "; re-probe elsewhere");
        const AffinePiece piece = affine_piece(prefix, fr.pattern);
        trace.depths.push_back(depth);
        trace.A.push_back(piece.A);
        trace.c.push_back(piece.c);
    }

    // Cauchy over the final window of the schedule
    const std::size_t k = trace.A.size();
    if (k >= 2) {
        double last = induced_matrix_norm(trace.A[k - 1] - trace.A[k - 2], p) +
                      vector_norm(trace.c[k - 1] - trace.c[k - 2], p);
        trace.cauchy = last <= tol;
    } else {
        trace.cauchy = true;
    }

    // least-squares cross-check at the deepest scheduled depth
    const ForwardResult probe_fr = forward(net, probe);
    std::vector<VectorXd> xs;
    std::vector<VectorXd> ys;
    Rng rng(Rng::mix(spec.seed, 0x5ca1ab1eULL));
    for (int attempt = 0; attempt < 500 && xs.size() < 50; ++attempt) {
        VectorXd x = probe;
        for (int i = 0; i < x.size(); ++i)
            x(i) = std::clamp(x(i) + rng.uniform(-1e-3, 1e-3), 0.0, 1.0);
        const ForwardResult fr = forward(net, x);
        if (fr.pattern == probe_fr.pattern) {
            xs.push_back(x);
            ys.push_back(fr.value);
        }
    }
    const int d = static_cast<int>(probe.size());
    if (static_cast<int>(xs.size()) >= d + 2) {
        trace.ls_checked = true;
        // regress on centered coordinates for conditioning
        MatrixXd X(xs.size(), d + 1);
        for (std::size_t i = 0; i < xs.size(); ++i) {
            X.row(i).head(d) = (xs[i] - probe).transpose();
            X(i, d) = 1.0;
        }
        MatrixXd Y(xs.size(), net.width);
        for (std::size_t i = 0; i < xs.size(); ++i) Y.row(i) = ys[i].transpose();
        const MatrixXd coef = X.colPivHouseholderQr().solve(Y);  // (d+1) x m
        const MatrixXd A_fit = coef.topRows(d).transpose();
        const VectorXd c_fit = coef.row(d).transpose() - A_fit * probe;
        trace.ls_gap = std::max((A_fit - trace.A.back()).cwiseAbs().maxCoeff(),
                                (c_fit - trace.c.back()).cwiseAbs().maxCoeff());
    }
    return trace;
}

double lp_distance_estimate(const SequenceSpec& spec, int n, int n_prime, NormKind p,
                            int sample_count, std::uint64_t seed) {
    if (n < 1 || n_prime <= n) throw std::invalid_argument("lp_distance_estimate: need n' > n >= 1");
    if (sample_count < 100) throw std::invalid_argument("lp_distance_estimate: need >= 100 samples");
    const Network net = generate_sequence(spec, n_prime);
    Rng rng(seed);
    double acc = 0.0;
    const double pe = (p == NormKind::L1) ? 1.0 : 2.0;
    for (int s = 0; s < sample_count; ++s) {
        VectorXd x(spec.input_dim);
        for (int i = 0; i < x.size(); ++i) x(i) = rng.uniform();
        VectorXd state = x;
        VectorXd at_n;
        for (int k = 1; k <= n_prime; ++k) {
            state = (net.layers[k - 1].W * state + net.layers[k - 1].b).cwiseMax(0.0);
            if (k == n) at_n = state;
        }
        const double diff = vector_norm(state - at_n, p);
        if (p == NormKind::Linf)
            acc = std::max(acc, diff);
        else
            acc += std::pow(diff, pe);
    }
    if (p == NormKind::Linf) return acc;
    return std::pow(acc / sample_count, 1.0 / pe);
}

}  // namespace relulim
