#include "relulim/products.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "relulim/generators.hpp"
#include "relulim/norms.hpp"

namespace relulim {

std::string to_string(LimitStatus s) {
    switch (s) {
        case LimitStatus::Converged: return "converged";
        case LimitStatus::Diverged: return "diverged";
        case LimitStatus::Undecided: return "undecided";
    }
    return "undecided";
}

std::string to_string(ConditionVerdict v) {
    switch (v) {
        case ConditionVerdict::Satisfied: return "satisfied";
        case ConditionVerdict::Violated: return "violated";
        case ConditionVerdict::EmpiricalOnly: return "empirical-only";
    }
    return "empirical-only";
}

double DecayModel::tail(int n) const {
    switch (kind) {
        case Kind::None:
            return 0.0;
        case Kind::PowerLaw:
            return power_law_tail(coeff, rate, n);
        case Kind::Geometric:
            if (rate <= 0.0 || rate >= 1.0) throw std::invalid_argument("geometric rate must be in (0,1)");
            return coeff * std::pow(rate, n + 1) / (1.0 - rate);
    }
    return 0.0;
}

MaskRule identity_masks(int m) {
    return [m](int) { return ActivationMatrix::identity(m); };
}

MaskRule fixed_masks(const ActivationMatrix& mask) {
    return [mask](int) { return mask; };
}

MaskRule random_masks(int m, std::uint64_t seed) {
    return [m, seed](int layer) {
        Rng rng(Rng::mix(seed, static_cast<std::uint64_t>(layer)));
        return ActivationMatrix(m, rng.next_u64() & ((std::uint64_t{1} << m) - 1));
    };
}

MaskRule empty_after(int m, int k) {
    return [m, k](int layer) {
        return layer <= k ? ActivationMatrix::identity(m) : ActivationMatrix::empty(m);
    };
}

MatrixXd partial_product(const std::vector<std::pair<ActivationMatrix, MatrixXd>>& factors,
                         int from, int to) {
    if (factors.empty()) throw std::invalid_argument("partial_product: empty factor list");
    if (from < 1 || to > static_cast<int>(factors.size()))
        throw std::invalid_argument("partial_product: index out of range");
    const int m = factors.front().first.width();
    if (to < from) return MatrixXd::Identity(m, m);
    MatrixXd result = factors[from - 1].first.apply(factors[from - 1].second);
    for (int i = from + 1; i <= to; ++i) {
        const auto& [mask, W] = factors[i - 1];
        result = mask.apply(MatrixXd(W * result));
    }
    return result;
}

namespace {

bool window_cauchy(const std::vector<double>& diffs, double tol, std::size_t window = 10) {
    if (diffs.empty()) return true;
    const std::size_t n = std::min(window, diffs.size());
    for (std::size_t i = diffs.size() - n; i < diffs.size(); ++i)
        if (!(diffs[i] <= tol)) return false;
    return true;
}

DecayModel model_for(const SequenceSpec& seq) {
    if (has_decay_metadata(seq)) return DecayModel::power_law(seq.scale, seq.alpha);
    return DecayModel::none();
}

}  // namespace

ProductLimitResult product_limit(const SequenceSpec& seq, const MaskRule& mask_rule, NormKind p,
                                 double tol, int n_max) {
    if (tol <= 0.0) throw std::invalid_argument("product_limit: tol must be > 0");
    if (n_max < 2) throw std::invalid_argument("product_limit: n_max must be >= 2");
    const Network net = generate_sequence(seq, n_max);
    const int m = net.width;
    const MatrixXd eye = MatrixXd::Identity(m, m);

    ProductLimitResult result;
    ProductState& st = result.state;
    st.value = mask_rule(1).apply(net.layers[0].W);
    st.depth = 1;
    for (int n = 2; n <= n_max; ++n) {
        const ActivationMatrix mask = mask_rule(n);
        const MatrixXd& W = net.layers[n - 1].W;
        MatrixXd next = mask.apply(MatrixXd(W * st.value));
        st.diffs.push_back(induced_matrix_norm(next - st.value, p));
        st.norm_history.push_back(induced_matrix_norm(W - eye, p));
        st.value = std::move(next);
        st.depth = n;
        st.value_norms.push_back(induced_matrix_norm(st.value, p));
        if (st.value_norms.back() > kDivergenceThreshold) {
            result.status = LimitStatus::Diverged;
            result.value = st.value;
            return result;
        }
    }
    result.value = st.value;
    result.tail_bound_at_end = tail_bound(st.norm_history, n_max, model_for(seq));
    result.status = window_cauchy(st.diffs, tol) ? LimitStatus::Converged : LimitStatus::Undecided;
    // sustained non-Cauchy increments up to the horizon with no blow-up
    // stay undecided; blow-up alone is reported as divergence
    return result;
}

SeriesLimitResult series_limit(const SequenceSpec& seq, const MaskRule& mask_rule, NormKind p,
                               double tol, int n_max) {
    if (tol <= 0.0) throw std::invalid_argument("series_limit: tol must be > 0");
    if (n_max < 2) throw std::invalid_argument("series_limit: n_max must be >= 2");
    const Network net = generate_sequence(seq, n_max);

    SeriesLimitResult result;
    SeriesState& st = result.state;
    st.value = VectorXd::Zero(net.width);
    for (int n = 1; n <= n_max; ++n) {
        const ActivationMatrix mask = mask_rule(n);
        const auto& layer = net.layers[n - 1];
        VectorXd next = (n == 1) ? VectorXd(mask.apply(layer.b))
                                 : VectorXd(mask.apply(VectorXd(layer.W * st.value + layer.b)));
        st.diffs.push_back(vector_norm(next - st.value, p));
        st.value = std::move(next);
        st.depth = n;
        st.value_norms.push_back(vector_norm(st.value, p));
        if (st.value_norms.back() > kDivergenceThreshold) {
            result.status = LimitStatus::Diverged;
            result.value = st.value;
            return result;
        }
    }
    result.value = st.value;
    if (window_cauchy(st.diffs, tol)) {
        result.status = LimitStatus::Converged;
    } else {
        // Increments that are both above tol and not trending down signal
        // steady growth (e.g. a constant bias term); call that divergence.
        const std::size_t w = std::min<std::size_t>(10, st.diffs.size());
        double window_max = 0.0, window_min = std::numeric_limits<double>::infinity();
        for (std::size_t i = st.diffs.size() - w; i < st.diffs.size(); ++i) {
            window_max = std::max(window_max, st.diffs[i]);
            window_min = std::min(window_min, st.diffs[i]);
        }
        const bool no_decay = st.diffs.back() >= 0.99 * window_max;
        result.status = (window_min > tol && no_decay) ? LimitStatus::Diverged
                                                       : LimitStatus::Undecided;
    }
    return result;
}

double tail_bound(const std::vector<double>& pnorms, int cut, const DecayModel& model) {
    if (cut < 2) throw std::invalid_argument("tail_bound: cut must be >= 2");
    const int horizon = static_cast<int>(pnorms.size()) + 1;  // pnorms cover i = 2..horizon
    double total = model.tail(horizon);
    double tail = model.tail(std::max(horizon, cut));
    for (int i = 2; i <= horizon; ++i) {
        const double a = pnorms[i - 2];
        if (a < 0.0) throw std::invalid_argument("tail_bound: negative norm value");
        total += a;
        if (i > cut) tail += a;
    }
    return 2.0 * tail * std::exp(total);
}

TailLemmaCheck verify_tail_lemma(const std::vector<double>& a, int p) {
    const int n = static_cast<int>(a.size());
    if (n > 20) throw ResourceLimitError("verify_tail_lemma: sequence longer than 20");
    for (double v : a)
        if (v < 0.0) throw std::invalid_argument("verify_tail_lemma: negative entry");
    double sum_all = 0.0, sum_tail = 0.0;
    for (int i = 0; i < n; ++i) {
        sum_all += a[i];
        if (i + 1 > p) sum_tail += a[i];
    }
    // subsets of size >= 2 whose largest (1-based) index exceeds p
    double subset_sum = 0.0;
    for (std::uint64_t s = 1; s < (std::uint64_t{1} << n); ++s) {
        if (__builtin_popcountll(s) < 2) continue;
        const int top = 64 - __builtin_clzll(s);  // largest 1-based index in s
        if (top <= p) continue;
        double prod = 1.0;
        for (int i = 0; i < n; ++i)
            if ((s >> i) & 1) prod *= a[i];
        subset_sum += prod;
    }
    TailLemmaCheck check;
    check.lhs = sum_tail + subset_sum;
    check.rhs = sum_tail * std::exp(sum_all);
    check.holds = check.lhs <= check.rhs + 1e-12;
    return check;
}

StabilizationResult stabilization_index(const std::vector<ActivationMatrix>& masks) {
    if (masks.empty()) throw std::invalid_argument("stabilization_index: empty mask list");
    std::uint64_t inter = masks.front().bits();
    std::vector<std::uint64_t> running;
    running.reserve(masks.size());
    for (const auto& mk : masks) {
        if (mk.width() != masks.front().width())
            throw std::invalid_argument("stabilization_index: width mismatch");
        inter &= mk.bits();
        running.push_back(running.empty() ? mk.bits() : (running.back() & mk.bits()));
    }
    int index = static_cast<int>(masks.size());
    while (index > 1 && running[index - 2] == inter) --index;
    return {index, ActivationMatrix(masks.front().width(), inter)};
}

ConditionReport check_product_conditions(const SequenceSpec& seq, NormKind p, int horizon) {
    if (horizon < 10) throw std::invalid_argument("check_product_conditions: horizon must be >= 10");
    const Network net = generate_sequence(seq, horizon);
    const MatrixXd eye = MatrixXd::Identity(net.width, net.width);
    const DecayModel model = model_for(seq);

    ConditionReport report;
    double running = 0.0;
    for (int n = 2; n <= horizon; ++n) {
        const double pn = induced_matrix_norm(net.layers[n - 1].W - eye, p);
        report.pnorm.push_back(pn);
        running += pn;
        report.pnorm_partial_sum.push_back(running);
    }
    for (int n = 2; n <= horizon; ++n) {
        double tail = model.tail(horizon);
        for (int i = n + 1; i <= horizon; ++i) tail += report.pnorm[i - 2];
        report.n_times_tail.push_back(n * tail);
    }
    for (int n = 1; n <= horizon; ++n) {
        const double bn = vector_norm(net.layers[n - 1].b, p);
        report.bnorm.push_back(bn);
        report.sup_bnorm = std::max(report.sup_bnorm, bn);
        report.sum_bnorm += bn;
    }

    if (has_decay_metadata(seq)) {
        report.summable = (seq.scale == 0.0 || seq.alpha > 1.0) ? ConditionVerdict::Satisfied
                                                                : ConditionVerdict::Violated;
        report.small_tail = (seq.scale == 0.0 || seq.alpha > 2.0) ? ConditionVerdict::Satisfied
                                                                  : ConditionVerdict::Violated;
        report.bias_summable = (seq.bias_scale == 0.0 || seq.bias_alpha > 1.0)
                                   ? ConditionVerdict::Satisfied
                                   : ConditionVerdict::Violated;
    } else if (seq.kind == SequenceKind::Constant) {
        const double pn = induced_matrix_norm(seq.constant_W - eye, p);
        const double bn = vector_norm(seq.constant_b, p);
        report.summable = pn == 0.0 ? ConditionVerdict::Satisfied : ConditionVerdict::Violated;
        report.small_tail = report.summable;
        report.bias_summable = bn == 0.0 ? ConditionVerdict::Satisfied : ConditionVerdict::Violated;
    }
    return report;
}

}  // namespace relulim
