#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "core/linalg.hpp"
#include "support/dense_ref.hpp"

using namespace pfrss;

namespace {

GridField random_field(int n, int dim, unsigned seed, double lo = -1.0, double hi = 1.0) {
    GridField u(n, dim, domain_spacing(n));
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dist(lo, hi);
    for (double& v : u.values) v = dist(rng);
    return u;
}

}  // namespace

TEST_CASE("solve_shifted with gamma 0 is the identity") {
    const int n = 16;
    TensorOperator b(OperatorKind::second_order, 2, n, domain_spacing(n));
    GridField f = random_field(n, 2, 1);
    GridField x = solve_shifted(b, 0.0, f);
    for (std::size_t i = 0; i < f.values.size(); ++i)
        CHECK(x.values[i] == doctest::Approx(f.values[i]).epsilon(1e-14));
}

TEST_CASE("constants pass through the shifted solve unchanged") {
    const int n = 12;
    TensorOperator b(OperatorKind::second_order, 2, n, domain_spacing(n));
    GridField f(n, 2, domain_spacing(n));
    for (double& v : f.values) v = 3.25;
    GridField x = solve_shifted(b, 0.7, f);
    for (double v : x.values) CHECK(v == doctest::Approx(3.25).epsilon(1e-13));
}

TEST_CASE("shifted solve matches a dense direct solve in 2d") {
    const int n = 16;
    const double h = domain_spacing(n);
    const double gamma = 0.37;
    TensorOperator b(OperatorKind::second_order, 2, n, h);
    GridField f = random_field(n, 2, 2);
    GridField x = solve_shifted(b, gamma, f);
    testing::DenseOps ops(OperatorKind::second_order, 2, n, h);
    Eigen::VectorXd expect = testing::shifted_exact(ops.b, gamma, testing::to_vec(f));
    double scale = max_abs(f);
    for (std::size_t i = 0; i < f.values.size(); ++i)
        CHECK(std::abs(x.values[i] - expect(i)) <= 1e-10 * scale);
}

TEST_CASE("shifted solve leaves a small residual") {
    const int n = 20;
    TensorOperator b(OperatorKind::second_order, 3, n, domain_spacing(n));
    GridField f = random_field(n, 3, 5);
    const double gamma = 2.5;
    GridField x = solve_shifted(b, gamma, f);
    GridField bx = b.apply(x);
    double res = 0.0;
    for (std::size_t i = 0; i < f.values.size(); ++i)
        res = std::max(res, std::abs(x.values[i] + gamma * bx.values[i] - f.values[i]));
    CHECK(res <= 1e-10 * max_abs(f));
}

TEST_CASE("shifted solve preserves the zero-mode coefficient") {
    // the eigenvalue-zero mode passes through with coefficient 1/(1+0)
    const int n = 16;
    TensorOperator b(OperatorKind::second_order, 1, n, domain_spacing(n));
    const CosineSolver& solver = *b.solver();
    GridField f = random_field(n, 1, 6);
    GridField cf = solver.to_coefficients(f);
    GridField x = solver.solve_shifted(1.7, f);
    GridField cx = solver.to_coefficients(x);
    CHECK(cx.values[0] == doctest::Approx(cf.values[0]).epsilon(1e-12));
}

TEST_CASE("cosine transform round trip is exact to rounding") {
    const int n = 48;
    TensorOperator b(OperatorKind::second_order, 2, n, domain_spacing(n));
    const CosineSolver& solver = *b.solver();
    GridField f = random_field(n, 2, 7);
    GridField back = solver.from_coefficients(solver.to_coefficients(f));
    for (std::size_t i = 0; i < f.values.size(); ++i)
        CHECK(std::abs(back.values[i] - f.values[i]) <= 1e-13 * (1.0 + max_abs(f)));
}

TEST_CASE("cosine eigenvalues are ascending and start at zero") {
    TensorOperator b(OperatorKind::second_order, 1, 33, 1.0 / 32.0);
    const auto& lam = b.solver()->eigenvalues();
    CHECK(lam[0] == 0.0);
    for (std::size_t k = 1; k < lam.size(); ++k) CHECK(lam[k] > lam[k - 1]);
}

TEST_CASE("solve_shifted rejects negative shifts and wrong kinds") {
    TensorOperator b(OperatorKind::second_order, 1, 16, domain_spacing(16));
    GridField f(16, 1, domain_spacing(16));
    CHECK_THROWS_AS(solve_shifted(b, -1.0, f), Error);
    TensorOperator a(OperatorKind::lele4, 1, 16, domain_spacing(16));
    CHECK_THROWS_AS(solve_shifted(a, 1.0, f), Error);
}

TEST_CASE("solve_shifted_squared against the dense operator") {
    const int n = 8;
    const double h = domain_spacing(n);
    const double gamma = 0.9;
    TensorOperator b(OperatorKind::second_order, 2, n, h);
    GridField f = random_field(n, 2, 8);
    GridField x = solve_shifted_squared(b, gamma, f);
    testing::DenseOps ops(OperatorKind::second_order, 2, n, h);
    const auto m = ops.b.rows();
    Eigen::MatrixXd sys = Eigen::MatrixXd::Identity(m, m) + gamma * ops.b * ops.b;
    Eigen::VectorXd expect = sys.partialPivLu().solve(testing::to_vec(f));
    for (std::size_t i = 0; i < f.values.size(); ++i)
        CHECK(std::abs(x.values[i] - expect(i)) <= 1e-10 * max_abs(f));
    // kernel fields pass through, gamma = 0 is the identity
    GridField c(n, 2, h);
    for (double& v : c.values) v = -0.6;
    GridField xc = solve_shifted_squared(b, gamma, c);
    for (double v : xc.values) CHECK(v == doctest::Approx(-0.6).epsilon(1e-13));
    GridField id = solve_shifted_squared(b, 0.0, f);
    for (std::size_t i = 0; i < f.values.size(); ++i)
        CHECK(id.values[i] == doctest::Approx(f.values[i]).epsilon(1e-14));
}

TEST_CASE("project_mean_zero removes exactly the mean") {
    const int n = 16;
    GridField f = random_field(n, 2, 9);
    GridField p = project_mean_zero(f);
    double sum = 0.0;
    for (double v : p.values) sum += v;
    CHECK(std::abs(sum) <= 1e-13 * f.values.size() * max_abs(f));
    double shift = f.values[0] - p.values[0];
    for (std::size_t i = 0; i < f.values.size(); ++i)
        CHECK(f.values[i] - p.values[i] == doctest::Approx(shift).epsilon(1e-12));
    GridField pp = project_mean_zero(p);
    for (std::size_t i = 0; i < p.values.size(); ++i)
        CHECK(pp.values[i] == doctest::Approx(p.values[i]).epsilon(1e-13));
    GridField c(n, 2, domain_spacing(n));
    for (double& v : c.values) v = 4.5;
    CHECK(max_abs(project_mean_zero(c)) <= 1e-14);
}

TEST_CASE("lagrangian solve agrees with the dense bordered system") {
    const int n = 8;
    const double h = domain_spacing(n);
    const double gamma = 0.42;
    TensorOperator b(OperatorKind::second_order, 1, n, h);
    GridField f = random_field(n, 1, 10);
    GridField delta = solve_constrained_lagrangian(b, gamma, f);
    double sum = 0.0;
    for (double v : delta.values) sum += v;
    CHECK(std::abs(sum) <= 1e-12 * (1.0 + max_abs(f)) * n);

    testing::DenseOps ops(OperatorKind::second_order, 1, n, h);
    Eigen::MatrixXd kkt(n + 1, n + 1);
    kkt.setZero();
    kkt.topLeftCorner(n, n) = Eigen::MatrixXd::Identity(n, n) + gamma * ops.b;
    for (int i = 0; i < n; ++i) {
        kkt(i, n) = 1.0 / n;
        kkt(n, i) = 1.0 / n;
    }
    Eigen::VectorXd rhs(n + 1);
    rhs.head(n) = testing::to_vec(f);
    rhs(n) = 0.0;
    Eigen::VectorXd sol = kkt.partialPivLu().solve(rhs);
    for (int i = 0; i < n; ++i)
        CHECK(std::abs(delta.values[i] - sol(i)) <= 1e-10 * (1.0 + max_abs(f)));
}

TEST_CASE("lagrangian and projection coincide for mean-zero data") {
    const int n = 16;
    TensorOperator b(OperatorKind::second_order, 1, n, domain_spacing(n));
    GridField f = project_mean_zero(random_field(n, 1, 11));
    const double gamma = 1.3;
    GridField lag = solve_constrained_lagrangian(b, gamma, f);
    GridField proj = project_mean_zero(solve_shifted(b, gamma, f));
    for (int i = 0; i < n; ++i)
        CHECK(lag.values[i] == doctest::Approx(proj.values[i]).epsilon(1e-11));
    GridField ones(n, 1, domain_spacing(n));
    for (double& v : ones.values) v = 1.0;
    CHECK(max_abs(solve_constrained_lagrangian(b, gamma, ones)) <= 1e-12);
}

TEST_CASE("shift dominance holds on the resolved modes") {
    const int n = 16;
    TensorOperator b(OperatorKind::second_order, 1, n, domain_spacing(n));
    const CosineSolver& solver = *b.solver();
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    for (int trial = 0; trial < 50; ++trial) {
        GridField coeff(n, 1, domain_spacing(n));
        for (int k = 0; k < n / 2; ++k) coeff.values[k] = dist(rng);
        GridField u = solver.from_coefficients(coeff);
        double gamma = 0.1 + trial * 0.05;
        GridField bu = b.apply(u);
        double q = dot(u, u) + gamma * dot(bu, u);
        CHECK(q >= dot(u, u) * (1.0 - 1e-12));
    }
}

TEST_CASE("hypothesis constants for matched operators") {
    const int n = 16;
    const double h = domain_spacing(n);
    TensorOperator b(OperatorKind::second_order, 1, n, h);
    HypothesisH same = estimate_hypothesis_h(b, b);
    CHECK(same.alpha == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(same.beta == doctest::Approx(1.0).epsilon(1e-9));
    // scaling the spacing by 1/sqrt(2) doubles the operator exactly
    TensorOperator twice(OperatorKind::second_order, 1, n, h / std::sqrt(2.0));
    HypothesisH doubled = estimate_hypothesis_h(twice, b);
    CHECK(doubled.alpha == doctest::Approx(2.0).epsilon(1e-9));
    CHECK(doubled.beta == doctest::Approx(2.0).epsilon(1e-9));
}

TEST_CASE("compact versus second-order equivalence constants") {
    const int n = 32;
    const double h = 1.0 / 31.0;
    TensorOperator a(OperatorKind::lele4, 1, n, h);
    TensorOperator b(OperatorKind::second_order, 1, n, h);
    HypothesisH hh = estimate_hypothesis_h(a, b);
    CHECK(hh.alpha > 0.0);
    CHECK(hh.alpha <= hh.beta);
    // value recorded from the dense study; the compact spectrum dominates the
    // second-order one at the high modes
    CHECK(hh.beta == doctest::Approx(2.4393).epsilon(0.01));
    CHECK(hh.rho_A > 0.0);
    CHECK(hh.lambda_min_A == doctest::Approx(M_PI * M_PI).epsilon(0.01));
    CHECK(hh.lambda_min_B == doctest::Approx(M_PI * M_PI).epsilon(0.01));
    CHECK(hh.asymmetry_A > 0.0);
    CHECK(hh.asymmetry_A == doctest::Approx(0.2984).epsilon(0.05));  // boundary rows drive it
    CHECK(hh.asymmetry_B < 0.1);
}

TEST_CASE("equivalence bound controls the quadratic forms on smooth fields") {
    const int n = 16;
    const double h = domain_spacing(n);
    TensorOperator a(OperatorKind::cs2, 1, n, h);
    TensorOperator b(OperatorKind::second_order, 1, n, h);
    HypothesisH hh = estimate_hypothesis_h(a, b);
    const CosineSolver& solver = *b.solver();
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    for (int trial = 0; trial < 100; ++trial) {
        GridField coeff(n, 1, h);
        for (int k = 1; k < n / 2; ++k) coeff.values[k] = dist(rng);  // mean-zero, resolved modes
        GridField u = solver.from_coefficients(coeff);
        double qa = dot(a.apply(u), u);
        double qb = dot(b.apply(u), u);
        CHECK(hh.beta * qb >= qa * (1.0 - 1e-10));
    }
}

TEST_CASE("diagnostic size cap is enforced") {
    TensorOperator a(OperatorKind::cs2, 3, 17, domain_spacing(17));
    TensorOperator b(OperatorKind::second_order, 3, 17, domain_spacing(17));
    CHECK_THROWS_AS(estimate_hypothesis_h(a, b), Error);  // 17^3 > 4096
}
