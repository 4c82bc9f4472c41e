#include <doctest.h>

#include <cmath>

#include "relulim/norms.hpp"
#include "relulim/types.hpp"
#include "test_util.hpp"

using namespace relulim;
using testutil::random_mask;

TEST_CASE("make_activation_matrix from support") {
    CHECK(make_activation_matrix({}, 3).is_empty());
    CHECK(make_activation_matrix({1, 2, 3}, 3).is_identity());
    const auto single = make_activation_matrix({2}, 3);
    CHECK(single.support() == std::set<int>{2});
    MatrixXd dense = single.dense();
    CHECK(dense(1, 1) == 1.0);
    CHECK(dense.sum() == 1.0);
    CHECK_THROWS_AS(make_activation_matrix({4}, 3), std::invalid_argument);
    CHECK_THROWS_AS(make_activation_matrix({0}, 3), std::invalid_argument);
}

TEST_CASE("activation_product is support intersection") {
    const auto a = make_activation_matrix({1, 2}, 3);
    const auto b = make_activation_matrix({2, 3}, 3);
    CHECK(activation_product({a, b}).support() == std::set<int>{2});
    const auto id = ActivationMatrix::identity(4);
    CHECK(activation_product({id, id, id}) == id);
    CHECK(activation_product({make_activation_matrix({1, 2, 3}, 3),
                              make_activation_matrix({1, 2}, 3),
                              make_activation_matrix({1}, 3)})
              .support() == std::set<int>{1});
    CHECK_THROWS_AS(activation_product({a, ActivationMatrix::identity(4)}), std::invalid_argument);
    CHECK_THROWS_AS(activation_product({}), std::invalid_argument);
}

TEST_CASE("activation_product depends only on the set of supports") {
    Rng rng(42);
    for (int trial = 0; trial < 50; ++trial) {
        const int m = 1 + static_cast<int>(rng.below(8));
        std::vector<ActivationMatrix> masks;
        for (int i = 0; i < 5; ++i) masks.push_back(random_mask(rng, m));
        const auto forward_order = activation_product(masks);
        std::vector<ActivationMatrix> reversed(masks.rbegin(), masks.rend());
        CHECK(activation_product(reversed) == forward_order);
        auto doubled = masks;
        doubled.insert(doubled.end(), masks.begin(), masks.end());
        CHECK(activation_product(doubled) == forward_order);
    }
}

TEST_CASE("vector norms") {
    VectorXd v(2);
    v << 3, -4;
    CHECK(vector_norm(v, NormKind::L2) == doctest::Approx(5.0));
    VectorXd w(3);
    w << 1, -2, 3;
    CHECK(vector_norm(w, NormKind::L1) == doctest::Approx(6.0));
    CHECK(vector_norm(w, NormKind::Linf) == doctest::Approx(3.0));
}

namespace {

// Lower-bound oracle: max of norm(Ax)/norm(x) over basis vectors, sign
// vectors and random directions. Exact for p=1 (basis) and p=inf (signs).
double sampled_operator_norm(const MatrixXd& A, NormKind p, Rng& rng) {
    double best = 0.0;
    const int n = static_cast<int>(A.cols());
    for (int j = 0; j < n; ++j) {
        VectorXd e = VectorXd::Zero(n);
        e(j) = 1.0;
        best = std::max(best, vector_norm(A * e, p));
    }
    for (int s = 0; s < (1 << n); ++s) {
        VectorXd x(n);
        for (int j = 0; j < n; ++j) x(j) = ((s >> j) & 1) ? 1.0 : -1.0;
        best = std::max(best, vector_norm(A * x, p) / vector_norm(x, p));
    }
    for (int t = 0; t < 500; ++t) {
        VectorXd x(n);
        for (int j = 0; j < n; ++j) x(j) = rng.uniform(-1.0, 1.0);
        const double nx = vector_norm(x, p);
        if (nx > 1e-12) best = std::max(best, vector_norm(A * x, p) / nx);
    }
    return best;
}

}  // namespace

TEST_CASE("induced matrix norms match the sampling oracle") {
    MatrixXd A(2, 2);
    A << 1, -2, 3, 4;
    Rng rng(7);
    CHECK(induced_matrix_norm(A, NormKind::L1) == doctest::Approx(6.0));
    CHECK(sampled_operator_norm(A, NormKind::L1, rng) == doctest::Approx(6.0));
    CHECK(induced_matrix_norm(A, NormKind::Linf) == doctest::Approx(7.0));
    CHECK(sampled_operator_norm(A, NormKind::Linf, rng) == doctest::Approx(7.0));
    MatrixXd D = MatrixXd::Zero(2, 2);
    D(0, 0) = 3.0;
    D(1, 1) = -4.0;
    CHECK(induced_matrix_norm(D, NormKind::L2) == doctest::Approx(4.0).epsilon(1e-9));
    CHECK(induced_matrix_norm(MatrixXd::Zero(3, 3), NormKind::L2) == 0.0);
}

TEST_CASE("masks contract every induced norm") {
    Rng rng(11);
    for (int trial = 0; trial < 100; ++trial) {
        const int m = 1 + static_cast<int>(rng.below(6));
        MatrixXd A(m, m);
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j) A(i, j) = rng.uniform(-2.0, 2.0);
        const auto mask = random_mask(rng, m);
        for (NormKind p : {NormKind::L1, NormKind::L2, NormKind::Linf}) {
            CHECK(induced_matrix_norm(mask.dense(), p) <= 1.0 + 1e-12);
            CHECK(induced_matrix_norm(mask.apply(A), p) <= induced_matrix_norm(A, p) + 1e-10);
        }
    }
}

TEST_CASE("submultiplicativity on random pairs") {
    Rng rng(13);
    for (int trial = 0; trial < 200; ++trial) {
        const int m = 1 + static_cast<int>(rng.below(8));
        MatrixXd A(m, m), B(m, m);
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j) {
                A(i, j) = rng.uniform(-2.0, 2.0);
                B(i, j) = rng.uniform(-2.0, 2.0);
            }
        for (NormKind p : {NormKind::L1, NormKind::L2, NormKind::Linf}) {
            CHECK(induced_matrix_norm(A * B, p) <=
                  induced_matrix_norm(A, p) * induced_matrix_norm(B, p) + 1e-12);
        }
    }
}

TEST_CASE("norms are monotone on componentwise moduli") {
    Rng rng(17);
    for (int trial = 0; trial < 200; ++trial) {
        const int n = 1 + static_cast<int>(rng.below(8));
        VectorXd a(n), b(n);
        for (int i = 0; i < n; ++i) {
            b(i) = rng.uniform(-2.0, 2.0);
            a(i) = rng.uniform(0.0, 1.0) * b(i);  // |a_i| <= |b_i|
        }
        for (NormKind p : {NormKind::L1, NormKind::L2, NormKind::Linf})
            CHECK(vector_norm(a, p) <= vector_norm(b, p) + 1e-14);
    }
}

TEST_CASE("rng determinism") {
    Rng a(99), b(99);
    for (int i = 0; i < 10; ++i) CHECK(a.next_u64() == b.next_u64());
}
