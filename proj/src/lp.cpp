#include "relulim/lp.hpp"

#include <cmath>

namespace relulim {

namespace {

constexpr double kPivotTol = 1e-11;

/// Minimal dense tableau simplex, Bland's rule, two phases.
/// Minimizes c.z subject to A z = b (b >= 0), z >= 0.
class Simplex {
public:
    Simplex(MatrixXd A, VectorXd b) : A_(std::move(A)), b_(std::move(b)) {
        nr_ = static_cast<int>(A_.rows());
        nv_ = static_cast<int>(A_.cols());
        // tableau: structural columns, artificial columns, rhs
        T_ = MatrixXd::Zero(nr_, nv_ + nr_ + 1);
        T_.leftCols(nv_) = A_;
        T_.block(0, nv_, nr_, nr_) = MatrixXd::Identity(nr_, nr_);
        T_.col(nv_ + nr_) = b_;
        basis_.resize(nr_);
        for (int i = 0; i < nr_; ++i) basis_[i] = nv_ + i;
    }

    /// Returns false when phase 1 proves infeasibility.
    bool solve(const VectorXd& cost, VectorXd& solution, double& objective) {
        // phase 1: minimize sum of artificials
        VectorXd c1 = VectorXd::Zero(nv_ + nr_);
        c1.tail(nr_).setOnes();
        run(c1, /*allow_artificial=*/true);
        if (phase_objective(c1) > 1e-8) return false;
        drive_out_artificials();

        VectorXd c2 = VectorXd::Zero(nv_ + nr_);
        c2.head(nv_) = cost;
        run(c2, /*allow_artificial=*/false);

        solution = VectorXd::Zero(nv_);
        for (int i = 0; i < nr_; ++i)
            if (basis_[i] < nv_) solution(basis_[i]) = T_(i, nv_ + nr_);
        objective = cost.dot(solution);
        return true;
    }

private:
    double phase_objective(const VectorXd& c) const {
        double v = 0.0;
        for (int i = 0; i < nr_; ++i) v += c(basis_[i]) * T_(i, nv_ + nr_);
        return v;
    }

    void run(const VectorXd& c, bool allow_artificial) {
        const int ncols = nv_ + (allow_artificial ? nr_ : 0);
        const int rhs = nv_ + nr_;
        for (int iter = 0; iter < 20000; ++iter) {
            // reduced costs: r_j = c_j - c_B . T(:, j)
            int enter = -1;
            for (int j = 0; j < ncols; ++j) {
                double rj = c(j);
                for (int i = 0; i < nr_; ++i) rj -= c(basis_[i]) * T_(i, j);
                if (rj < -1e-9) { enter = j; break; }  // Bland: first index
            }
            if (enter < 0) return;  // optimal
            int leave = -1;
            double best = 0.0;
            for (int i = 0; i < nr_; ++i) {
                if (T_(i, enter) > kPivotTol) {
                    const double ratio = T_(i, rhs) / T_(i, enter);
                    if (leave < 0 || ratio < best - 1e-15 ||
                        (std::abs(ratio - best) <= 1e-15 && basis_[i] < basis_[leave]))
                    {
                        leave = i;
                        best = ratio;
                    }
                }
            }
            if (leave < 0) return;  // unbounded; caller's programs are bounded
            pivot(leave, enter);
        }
        throw std::runtime_error("simplex: iteration cap reached");
    }

    void pivot(int row, int col) {
        T_.row(row) /= T_(row, col);
        for (int i = 0; i < nr_; ++i) {
            if (i == row) continue;
            const double f = T_(i, col);
            if (f != 0.0) T_.row(i) -= f * T_.row(row);
        }
        basis_[row] = col;
    }

    /// Replace zero-level artificial basis members with structural columns
    /// where possible so phase 2 never increases an artificial.
    void drive_out_artificials() {
        for (int i = 0; i < nr_; ++i) {
            if (basis_[i] < nv_) continue;
            int col = -1;
            for (int j = 0; j < nv_; ++j)
                if (std::abs(T_(i, j)) > 1e-9) { col = j; break; }
            if (col >= 0) pivot(i, col);
            // otherwise the row is redundant; the artificial stays at level 0
        }
    }

    MatrixXd A_;
    VectorXd b_;
    MatrixXd T_;
    std::vector<int> basis_;
    int nr_ = 0, nv_ = 0;
};

}  // namespace

InteriorCertificate certify_interior(const std::vector<HalfSpace>& constraints, int dim) {
    const int nc = static_cast<int>(constraints.size());
    // variables: x (dim), u = 1 - t, one slack per constraint, box slacks
    const int nv = dim + 1 + nc + dim;
    const int nr = nc + dim;
    MatrixXd A = MatrixXd::Zero(nr, nv);
    VectorXd b = VectorXd::Zero(nr);
    for (int i = 0; i < nc; ++i) {
        const auto& h = constraints[i];
        if (h.normal.size() != dim)
            throw std::invalid_argument("certify_interior: constraint dimension mismatch");
        A.row(i).head(dim) = h.normal.transpose();
        if (h.strict) {
            // a.x + beta >= t  ->  a.x + u - s = 1 - beta
            A(i, dim) = 1.0;
            A(i, dim + 1 + i) = -1.0;
            b(i) = 1.0 - h.offset;
        } else {
            // a.x + beta <= 0  ->  a.x + s = -beta
            A(i, dim + 1 + i) = 1.0;
            b(i) = -h.offset;
        }
    }
    for (int k = 0; k < dim; ++k) {
        A(nc + k, k) = 1.0;
        A(nc + k, dim + 1 + nc + k) = 1.0;
        b(nc + k) = 1.0;
    }
    // flip rows so b >= 0
    for (int i = 0; i < nr; ++i) {
        if (b(i) < 0.0) {
            A.row(i) = -A.row(i);
            b(i) = -b(i);
        }
    }
    VectorXd cost = VectorXd::Zero(nv);
    cost(dim) = 1.0;  // minimize u, i.e. maximize t = 1 - u

    Simplex simplex(std::move(A), std::move(b));
    VectorXd z;
    double obj = 0.0;
    InteriorCertificate cert;
    if (!simplex.solve(cost, z, obj)) return cert;  // infeasible even relaxed
    cert.feasible = true;
    cert.slack = 1.0 - obj;
    cert.witness = z.head(dim);
    return cert;
}

}  // namespace relulim
