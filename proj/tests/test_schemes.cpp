#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "core/diagnostics.hpp"
#include "core/schemes.hpp"
#include "support/dense_ref.hpp"

using namespace pfrss;

namespace {

GridField random_field(int n, int dim, unsigned seed, double amp = 1.0) {
    GridField u(n, dim, domain_spacing(n));
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dist(-amp, amp);
    for (double& v : u.values) v = dist(rng);
    return u;
}

GridField constant_field(int n, int dim, double value) {
    GridField u(n, dim, domain_spacing(n));
    for (double& v : u.values) v = value;
    return u;
}

double max_diff(const GridField& a, const Eigen::VectorXd& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.values.size(); ++i)
        m = std::max(m, std::abs(a.values[i] - b(i)));
    return m;
}

SchemeConfig base_cfg(double dt, double tau, double eps) {
    SchemeConfig c;
    c.dt = dt;
    c.tau = tau;
    c.epsilon = eps;
    return c;
}

}  // namespace

TEST_CASE("heat step with tau 0 is forward euler") {
    const int n = 16;
    const double h = domain_spacing(n);
    TensorOperator a(OperatorKind::cs2, 1, n, h);
    TensorOperator b(OperatorKind::second_order, 1, n, h);
    SchemeConfig cfg = base_cfg(1e-3, 0.0, 0.1);
    GridField u = random_field(n, 1, 1);
    GridField au = a.apply(u);
    GridField next = heat_rss_euler_step(u, a, b, cfg);
    for (int i = 0; i < n; ++i)
        CHECK(next.values[i] == doctest::Approx(u.values[i] - cfg.dt * au.values[i]).epsilon(1e-13));
    GridField cn = heat_rss_cn_step(u, a, b, cfg);
    for (int i = 0; i < n; ++i) CHECK(cn.values[i] == doctest::Approx(next.values[i]).epsilon(1e-13));
}

TEST_CASE("constant fields are fixed points of the heat schemes") {
    const int n = 12;
    const double h = domain_spacing(n);
    TensorOperator a(OperatorKind::cs2, 2, n, h);
    TensorOperator b(OperatorKind::second_order, 2, n, h);
    SchemeConfig cfg = base_cfg(0.05, 2.0, 0.1);
    GridField u = constant_field(n, 2, 0.7);
    GridField e = heat_rss_euler_step(u, a, b, cfg);
    CHECK(max_abs(project_mean_zero(e)) <= 1e-12);
    CHECK(mean(e) == doctest::Approx(0.7).epsilon(1e-13));
    GridField c = heat_rss_cn_step(u, a, b, cfg);
    CHECK(max_abs(project_mean_zero(c)) <= 1e-12);
    GridField adi = heat_rss_adi_step(u, a, b, cfg);
    CHECK(mean(adi) == doctest::Approx(0.7).epsilon(1e-13));
    CHECK(max_abs(project_mean_zero(adi)) <= 1e-12);
}

TEST_CASE("projection keeps the mean exactly for the stabilized steps") {
    const int n = 16;
    const double h = domain_spacing(n);
    TensorOperator a(OperatorKind::lele4, 2, n, h);
    TensorOperator b(OperatorKind::second_order, 2, n, h);
    SchemeConfig cfg = base_cfg(0.01, 2.0, 0.1);
    cfg.project_mean = true;
    GridField u = random_field(n, 2, 2);
    double m0 = mean(u);
    CHECK(mean(heat_rss_euler_step(u, a, b, cfg)) == doctest::Approx(m0).epsilon(1e-13));
    CHECK(mean(heat_rss_cn_step(u, a, b, cfg)) == doctest::Approx(m0).epsilon(1e-13));
    GridField uprev = random_field(n, 2, 22);
    double mg = mean(u);
    CHECK(mean(heat_rss_gear_step(uprev, u, a, b, cfg)) == doctest::Approx(mg).epsilon(1e-13));
}

TEST_CASE("gear pair is second order in time") {
    // with tau = 1 and B = A the scheme is the classical two-step method
    const int n = 24;
    const double h = domain_spacing(n);
    TensorOperator a(OperatorKind::second_order, 1, n, h);
    SchemeConfig cfg = base_cfg(1.0, 1.0, 0.1);
    GridField u0(n, 1, h);
    for (int i = 0; i < n; ++i) u0.values[i] = std::exp(std::cos(2.0 * M_PI * i * h));
    auto run = [&](double dt) {
        cfg.dt = dt;
        GridField prev = u0, cur = heat_rss_euler_step(u0, a, a, cfg);
        double t = dt;
        while (t < 0.01 - 1e-12) {
            GridField next = heat_rss_gear_step(prev, cur, a, a, cfg);
            prev = cur;
            cur = next;
            t += dt;
        }
        return cur;
    };
    GridField ref = run(1e-3 / 16.0);
    double e1 = 0.0, e2 = 0.0;
    GridField r1 = run(1e-3), r2 = run(5e-4);
    for (int i = 0; i < n; ++i) {
        e1 = std::max(e1, std::abs(r1.values[i] - ref.values[i]));
        e2 = std::max(e2, std::abs(r2.values[i] - ref.values[i]));
    }
    double order = std::log2(e1 / e2);
    CHECK(order > 1.7);
    CHECK(order < 2.3);
}

TEST_CASE("adi in one dimension coincides with the euler step") {
    const int n = 16;
    const double h = domain_spacing(n);
    TensorOperator a(OperatorKind::cs2, 1, n, h);
    TensorOperator b(OperatorKind::second_order, 1, n, h);
    SchemeConfig cfg = base_cfg(0.01, 2.0, 0.1);
    GridField u = random_field(n, 1, 3);
    GridField adi = heat_rss_adi_step(u, a, b, cfg);
    GridField eul = heat_rss_euler_step(u, a, b, cfg);
    for (int i = 0; i < n; ++i) CHECK(adi.values[i] == doctest::Approx(eul.values[i]).epsilon(1e-12));
    GridField s = heat_rss_strang_step(u, a, b, cfg);
    for (int i = 0; i < n; ++i) CHECK(s.values[i] == doctest::Approx(eul.values[i]).epsilon(1e-12));
}

TEST_CASE("adi tracks the unsplit step to splitting accuracy") {
    const int n = 16;
    const double h = domain_spacing(n);
    TensorOperator a(OperatorKind::cs2, 2, n, h);
    TensorOperator b(OperatorKind::second_order, 2, n, h);
    GridField u(n, 2, h);
    std::size_t idx = 0;
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i, ++idx)
            u.values[idx] = std::cos(M_PI * i * h) * std::cos(2.0 * M_PI * j * h);
    auto gap = [&](double dt) {
        SchemeConfig cfg = base_cfg(dt, 2.0, 0.1);
        GridField adi = heat_rss_adi_step(u, a, b, cfg);
        GridField unsplit = heat_rss_euler_step(u, a, b, cfg);
        double g = 0.0;
        for (std::size_t k = 0; k < u.values.size(); ++k)
            g = std::max(g, std::abs(adi.values[k] - unsplit.values[k]));
        return g;
    };
    double g1 = gap(1e-3), g2 = gap(5e-4);
    CHECK(g1 < 0.05);       // a small O(dt) splitting gap at dt = 1e-3
    CHECK(g1 / g2 > 2.5);   // and it shrinks with the step size
}

TEST_CASE("stabilized heat variants decay the quadratic form at any step size") {
    const int n = 16;
    const double h = domain_spacing(n);
    TensorOperator a(OperatorKind::cs2, 2, n, h);
    TensorOperator b(OperatorKind::second_order, 2, n, h);
    HypothesisH hh = estimate_hypothesis_h(a, b);
    GridField u0(n, 2, h);
    std::size_t idx = 0;
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i, ++idx)
            u0.values[idx] = 0.7 * std::cos(2.0 * M_PI * i * h) * std::cos(M_PI * j * h) +
                             0.2 * std::cos(3.0 * M_PI * i * h);
    for (double dt : {1e-4, 1e-2, 1.0, 100.0}) {
        SchemeConfig cfg = base_cfg(dt, 1.2 * hh.beta, 0.1);
        GridField ue = u0, uc = u0, ua = u0, us = u0;
        GridField gear_prev = u0;
        GridField ug = heat_rss_euler_step(u0, a, b, cfg);
        std::vector<double> ee, ec, eg, ea, es;
        auto quad = [&](const GridField& v) { return dot(a.apply(v), v); };
        for (int k = 0; k < 100; ++k) {
            ue = heat_rss_euler_step(ue, a, b, cfg);
            ee.push_back(quad(ue));
            uc = heat_rss_cn_step(uc, a, b, cfg);
            ec.push_back(quad(uc));
            GridField gn = heat_rss_gear_step(gear_prev, ug, a, b, cfg);
            gear_prev = ug;
            ug = gn;
            eg.push_back(quad(ug));
            ua = heat_rss_adi_step(ua, a, b, cfg);
            ea.push_back(quad(ua));
            us = heat_rss_strang_step(us, a, b, cfg);
            es.push_back(quad(us));
        }
        CHECK(verify_monotone(ee, Direction::decreasing).ok);
        CHECK(verify_monotone(ec, Direction::decreasing).ok);
        CHECK(verify_monotone(eg, Direction::decreasing).ok);
        CHECK(verify_monotone(ea, Direction::decreasing).ok);
        CHECK(verify_monotone(es, Direction::decreasing).ok);
    }
}

TEST_CASE("well states are fixed points of the nonlinear schemes") {
    const int n = 12;
    const double h = domain_spacing(n);
    TensorOperator a(OperatorKind::cs2, 2, n, h);
    TensorOperator b(OperatorKind::second_order, 2, n, h);
    SchemeConfig cfg = base_cfg(1e-3, 2.0, 0.1);
    for (double value : {1.0, -1.0}) {
        GridField u = constant_field(n, 2, value);
        GridField imex = ac_rss_imex_step(u, a, b, cfg);
        CHECK(max_abs(project_mean_zero(imex)) <= 1e-12);
        CHECK(mean(imex) == doctest::Approx(value).epsilon(1e-12));
        CHECK(mean(ac_df_step(u, a, b, cfg).u) == doctest::Approx(value).epsilon(1e-12));
        CHECK(mean(ac_convex_split_step(u, a, b, cfg).u) == doctest::Approx(value).epsilon(1e-12));
        GridField sp = ac_splitting_step(u, a, b, cfg);
        CHECK(mean(sp) == doctest::Approx(value).epsilon(1e-12));
        CHECK(max_abs(project_mean_zero(sp)) <= 1e-12);
        CHState ch{u, ch_initial_mu(u, a, cfg)};
        CHECK(max_abs(ch.mu) <= 1e-12);
        CHState next = ch_rss_imex_step(ch, a, b, cfg);
        CHECK(mean(next.u) == doctest::Approx(value).epsilon(1e-12));
        CHECK(max_abs(project_mean_zero(next.u)) <= 1e-12);
    }
}

TEST_CASE("closed-form well update") {
    CHECK(double_well_closed_form(0.0, 0.25) == 0.0);
    CHECK(double_well_closed_form(1.0, 0.25) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(double_well_closed_form(-1.0, 0.25) == doctest::Approx(-1.0).epsilon(1e-15));
    CHECK(double_well_closed_form(0.5, 0.25) ==
          doctest::Approx(0.5 / std::sqrt(0.4375)).epsilon(1e-14));
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> xdist(-3.0, 3.0), gdist(0.01, 5.0);
    for (int i = 0; i < 200; ++i) {
        double x = xdist(rng);
        double g = std::exp(-2.0 * gdist(rng));
        CHECK(std::abs(double_well_closed_form(x, g)) <= std::max(1.0, std::abs(x)) + 1e-15);
    }
}

TEST_CASE("secant scheme approaches the imex step as dt shrinks") {
    const int n = 16;
    const double h = domain_spacing(n);
    TensorOperator a(OperatorKind::cs2, 1, n, h);
    TensorOperator b(OperatorKind::second_order, 1, n, h);
    GridField u(n, 1, h);
    for (int i = 0; i < n; ++i) u.values[i] = 0.8 * std::cos(2.0 * M_PI * i * h);
    auto gap = [&](double dt) {
        SchemeConfig cfg = base_cfg(dt, 2.0, 0.5);
        GridField imex = ac_rss_imex_step(u, a, b, cfg);
        GridField df = ac_df_step(u, a, b, cfg).u;
        double g = 0.0;
        for (int i = 0; i < n; ++i) g = std::max(g, std::abs(imex.values[i] - df.values[i]));
        return g;
    };
    double g1 = gap(5e-4), g2 = gap(2.5e-4);
    CHECK(g1 / g2 > 3.0);  // the difference vanishes at second order
    CHECK(g1 / g2 < 5.0);
}

TEST_CASE("nonlinear schemes report convergence failures") {
    const int n = 12;
    const double h = domain_spacing(n);
    TensorOperator a(OperatorKind::cs2, 1, n, h);
    TensorOperator b(OperatorKind::second_order, 1, n, h);
    SchemeConfig cfg = base_cfg(1.0, 2.0, 0.05);  // dt/eps^2 = 400, far beyond contraction
    cfg.max_fixed_point_iters = 10;
    GridField u = random_field(n, 1, 7, 0.9);
    CHECK_THROWS_AS(ac_df_step(u, a, b, cfg), Error);
    CHECK_THROWS_AS(ac_convex_split_step(u, a, b, cfg), Error);
}

TEST_CASE("unconditional energy decay of the secant and split schemes") {
    const int n = 16;
    const double h = domain_spacing(n);
    TensorOperator a(OperatorKind::cs2, 1, n, h);
    TensorOperator b(OperatorKind::second_order, 1, n, h);
    HypothesisH hh = estimate_hypothesis_h(a, b);
    DoubleWell well(2.0);  // wide interface keeps the inner fixed point contracting
    GridField u0(n, 1, h);
    for (int i = 0; i < n; ++i) u0.values[i] = 0.8 * std::cos(3.0 * M_PI * i * h);
    for (double dt : {1e-3, 1e-2, 1e-1, 1.0}) {
        SchemeConfig cfg = base_cfg(dt, 0.75 * hh.beta, well.epsilon);
        GridField u = u0, v = u0;
        std::vector<double> df_energy, cs_energy;
        for (int k = 0; k < 40; ++k) {
            u = ac_df_step(u, a, b, cfg).u;
            df_energy.push_back(ac_energy(u, a, well));
            v = ac_convex_split_step(v, a, b, cfg).u;
            cs_energy.push_back(ac_energy(v, a, well));
        }
        CHECK(verify_monotone(df_energy, Direction::decreasing).ok);
        CHECK(verify_monotone(cs_energy, Direction::decreasing).ok);
    }
}

TEST_CASE("steady states are shared across the allen-cahn steppers") {
    const int n = 16;
    const double h = domain_spacing(n);
    TensorOperator a(OperatorKind::cs2, 1, n, h);
    TensorOperator b(OperatorKind::second_order, 1, n, h);
    SchemeConfig cfg = base_cfg(5e-3, 2.0, 0.4);
    GridField u(n, 1, h);
    for (int i = 0; i < n; ++i) u.values[i] = std::tanh((i * h - 0.5) / cfg.epsilon);
    for (int k = 0; k < 20000; ++k) u = ac_rss_imex_step(u, a, b, cfg);
    GridField res = a.apply(u);
    for (int i = 0; i < n; ++i) res.values[i] += well_prime(u.values[i]) / (cfg.epsilon * cfg.epsilon);
    double rnorm = max_abs(res);
    CHECK(rnorm < 1e-8);
    double move_tol = 2.0 * cfg.dt * rnorm + 1e-12;
    GridField v1 = ac_rss_imex_step(u, a, b, cfg);
    GridField v2 = ac_df_step(u, a, b, cfg).u;
    GridField v3 = ac_convex_split_step(u, a, b, cfg).u;
    for (int i = 0; i < n; ++i) {
        CHECK(std::abs(v1.values[i] - u.values[i]) <= move_tol);
        CHECK(std::abs(v2.values[i] - u.values[i]) <= move_tol);
        CHECK(std::abs(v3.values[i] - u.values[i]) <= move_tol);
    }
}

TEST_CASE("splitting output never exceeds the linear stage bound") {
    const int n = 16;
    const double h = domain_spacing(n);
    TensorOperator a(OperatorKind::cs2, 2, n, h);
    TensorOperator b(OperatorKind::second_order, 2, n, h);
    SchemeConfig cfg = base_cfg(1e-3, 2.0, 0.05);
    GridField u = random_field(n, 2, 8, 1.4);
    GridField rhs = a.apply(u);
    for (double& v : rhs.values) v *= -cfg.dt;
    GridField delta = solve_shifted(b, cfg.tau * cfg.dt, rhs);
    GridField star = u;
    for (std::size_t i = 0; i < star.values.size(); ++i) star.values[i] += delta.values[i];
    GridField out = ac_splitting_step(u, a, b, cfg);
    CHECK(max_abs(out) <= std::max(1.0, max_abs(star)) + 1e-14);
}

TEST_CASE("segmentation step degenerates to splitting when the weight vanishes") {
    const int n = 16;
    const double h = domain_spacing(n);
    TensorOperator a(OperatorKind::lele4, 2, n, h);
    TensorOperator b(OperatorKind::second_order, 2, n, h);
    SchemeConfig cfg = base_cfg(1e-4, 1.0, 0.05);
    cfg.lambda = 0.0;
    SegmentationProblem prob;
    prob.f0 = random_field(n, 2, 9, 0.4);
    for (double& v : prob.f0.values) v = 0.5 + v;
    prob.lambda = 0.0;
    prob.epsilon = cfg.epsilon;
    GridField phi = random_field(n, 2, 10, 0.8);
    SegmentationResult seg = ac_segmentation_step(phi, a, b, prob, cfg);
    GridField split = ac_splitting_step(phi, a, b, cfg);
    for (std::size_t i = 0; i < phi.values.size(); ++i)
        CHECK(seg.phi.values[i] == doctest::Approx(split.values[i]).epsilon(1e-12));
    // a constant image pins both averages to its value; iterates stay bounded
    SegmentationProblem flat;
    flat.f0 = constant_field(n, 2, 0.5);
    flat.lambda = 10.0;
    flat.epsilon = cfg.epsilon;
    cfg.lambda = 10.0;
    GridField bounded = random_field(n, 2, 11, 0.99);
    for (int k = 0; k < 20; ++k) {
        SegmentationResult r = ac_segmentation_step(bounded, a, b, flat, cfg);
        CHECK(r.c1 == doctest::Approx(r.c2).epsilon(1e-9));
        bounded = r.phi;
        CHECK(max_abs(bounded) <= 1.0 + 1e-12);
    }
}

TEST_CASE("cahn-hilliard pattern step conserves mass exactly") {
    const int n = 24;
    const double h = domain_spacing(n);
    TensorOperator a(OperatorKind::cs2, 2, n, h);
    TensorOperator b(OperatorKind::second_order, 2, n, h);
    SchemeConfig cfg = base_cfg(1e-5, 4.0, 0.05);
    cfg.project_mean = true;
    GridField u = random_field(n, 2, 12, 0.8);
    CHState s{u, ch_initial_mu(u, a, cfg)};
    double m0 = quadrature(s.u);
    for (int k = 0; k < 50; ++k) s = ch_rss_imex_step(s, a, b, cfg);
    CHECK(std::abs(quadrature(s.u) - m0) <= 1e-12 * (1.0 + std::abs(m0)) * 50);
}

TEST_CASE("first inner iterate of the secant variant is the pattern step") {
    const int n = 8;
    const double h = domain_spacing(n);
    TensorOperator a(OperatorKind::cs2, 2, n, h);
    TensorOperator b(OperatorKind::second_order, 2, n, h);
    SchemeConfig cfg = base_cfg(1e-4, 3.0, 0.2);
    cfg.project_mean = true;
    cfg.max_fixed_point_iters = 1;
    cfg.fixed_point_tol = 1e300;  // accept the first iterate
    GridField u = random_field(n, 2, 13, 0.7);
    CHState s{u, ch_initial_mu(u, a, cfg)};
    CHState one = ch_nlrss_step(s, a, b, cfg).state;
    CHState imex = ch_rss_imex_step(s, a, b, cfg);
    for (std::size_t i = 0; i < u.values.size(); ++i) {
        CHECK(one.u.values[i] == doctest::Approx(imex.u.values[i]).epsilon(1e-13));
        CHECK(one.mu.values[i] == doctest::Approx(imex.mu.values[i]).epsilon(1e-13));
    }
}

TEST_CASE("secant cahn-hilliard decays the energy over a step sweep") {
    const int n = 16;
    const double h = domain_spacing(n);
    TensorOperator a(OperatorKind::cs2, 1, n, h);
    TensorOperator b(OperatorKind::second_order, 1, n, h);
    HypothesisH hh = estimate_hypothesis_h(a, b);
    DoubleWell well(0.2);
    GridField u0(n, 1, h);
    for (int i = 0; i < n; ++i) u0.values[i] = 0.8 * std::cos(3.0 * M_PI * i * h);
    for (double dt : {1e-4, 1e-3}) {
        SchemeConfig cfg = base_cfg(dt, 1.1 * hh.beta, well.epsilon);
        cfg.project_mean = true;
        CHState s{u0, ch_initial_mu(u0, a, cfg)};
        std::vector<double> energy;
        int iters_seen = 0;
        for (int k = 0; k < 40; ++k) {
            CHStepResult r = ch_nlrss_step(s, a, b, cfg);
            s = r.state;
            iters_seen = std::max(iters_seen, r.iterations);
            energy.push_back(ch_energy(s.u, a, well));
        }
        CHECK(iters_seen >= 2);
        CHECK(verify_monotone(energy, Direction::decreasing).ok);
    }
}

TEST_CASE("inpainting step reduces to the pattern step without fidelity") {
    const int n = 12;
    const double h = domain_spacing(n);
    TensorOperator a(OperatorKind::cs2, 2, n, h);
    TensorOperator b(OperatorKind::second_order, 2, n, h);
    SchemeConfig cfg = base_cfg(1e-5, 4.0, 0.1);
    cfg.lambda0 = 7.0;  // irrelevant where the mask vanishes
    cfg.project_mean = false;
    InpaintingProblem prob;
    prob.g = random_field(n, 2, 14, 0.9);
    prob.mask = constant_field(n, 2, 0.0);
    prob.lambda0 = cfg.lambda0;
    GridField u = random_field(n, 2, 15, 0.9);
    CHState s{u, ch_initial_mu(u, a, cfg)};
    CHState inp = ch_inpainting_step(s, a, b, prob, cfg);
    CHState pat = ch_rss_imex_step(s, a, b, cfg);
    for (std::size_t i = 0; i < u.values.size(); ++i) {
        CHECK(inp.u.values[i] == doctest::Approx(pat.u.values[i]).epsilon(1e-9));
        CHECK(inp.mu.values[i] == doctest::Approx(pat.mu.values[i]).epsilon(1e-9));
    }
}

TEST_CASE("matched data is a fixed point of the inpainting step") {
    const int n = 12;
    const double h = domain_spacing(n);
    TensorOperator a(OperatorKind::cs2, 2, n, h);
    TensorOperator b(OperatorKind::second_order, 2, n, h);
    SchemeConfig cfg = base_cfg(1e-6, 4.0, 0.1);
    cfg.lambda0 = 1e5;
    InpaintingProblem prob;
    prob.g = constant_field(n, 2, 1.0);
    prob.mask = constant_field(n, 2, 1.0);
    prob.lambda0 = cfg.lambda0;
    CHState s{prob.g, constant_field(n, 2, 0.0)};
    CHState next = ch_inpainting_step(s, a, b, prob, cfg);
    CHECK(max_abs(project_mean_zero(next.u)) <= 1e-12);
    CHECK(mean(next.u) == doctest::Approx(1.0).epsilon(1e-12));
    // with a disagreeing state the fidelity forcing changes the mass
    CHState off{constant_field(n, 2, 0.5), constant_field(n, 2, 0.0)};
    CHState pushed = ch_inpainting_step(off, a, b, prob, cfg);
    CHECK(std::abs(quadrature(pushed.u) - quadrature(off.u)) > 1e-8);
}

TEST_CASE("workspace parameter guard") {
    const int n = 10;
    const double h = domain_spacing(n);
    TensorOperator b(OperatorKind::second_order, 2, n, h);
    TensorOperator a(OperatorKind::cs2, 2, n, h);
    SchemeConfig cfg = base_cfg(1e-5, 4.0, 0.1);
    cfg.lambda0 = 100.0;
    InpaintingProblem prob{constant_field(n, 2, 0.5), constant_field(n, 2, 1.0), cfg.lambda0};
    InpaintingWorkspace ws(b, prob, cfg);
    CHState s{prob.g, constant_field(n, 2, 0.0)};
    CHECK_NOTHROW(ch_inpainting_step(s, a, b, prob, cfg, &ws));
    cfg.dt *= 2.0;
    CHECK_THROWS_AS(ch_inpainting_step(s, a, b, prob, cfg, &ws), Error);
}

TEST_CASE("auxiliary variable stays consistent with its update equation") {
    const int n = 12;
    const double h = domain_spacing(n);
    const double hd = h * h;
    TensorOperator a(OperatorKind::cs2, 2, n, h);
    TensorOperator b(OperatorKind::second_order, 2, n, h);
    SchemeConfig cfg = base_cfg(1e-4, 6.0, 0.1);
    cfg.C0 = 1.0;
    cfg.project_mean = false;
    GridField u = random_field(n, 2, 16, 0.8);
    SAVState s = sav_initial_state(u, a, cfg);
    SAVState next = ch_rss_sav_step(s, a, b, cfg);
    double r = sav_auxiliary(s.u, cfg.well(), cfg.C0);
    double acc = 0.0;
    for (std::size_t i = 0; i < u.values.size(); ++i)
        acc += well_prime(s.u.values[i]) / (2.0 * r) * (next.u.values[i] - s.u.values[i]);
    CHECK(next.s == doctest::Approx(s.s + hd * acc).epsilon(1e-12));
    // the mu update equation holds with the eliminated scalar
    GridField du = next.u;
    for (std::size_t i = 0; i < du.values.size(); ++i) du.values[i] -= s.u.values[i];
    GridField bdu = b.apply(du);
    GridField au = a.apply(s.u);
    double worst = 0.0;
    for (std::size_t i = 0; i < du.values.size(); ++i) {
        double expect = s.mu.values[i] + cfg.tau * bdu.values[i] + au.values[i] - s.mu.values[i] +
                        next.s / r * well_prime(s.u.values[i]);
        worst = std::max(worst, std::abs(next.mu.values[i] - expect));
    }
    CHECK(worst <= 1e-11 * (1.0 + max_abs(s.mu)));
}

TEST_CASE("sav scheme freezes the scalar at the wells") {
    const int n = 12;
    const double h = domain_spacing(n);
    TensorOperator a(OperatorKind::cs2, 2, n, h);
    TensorOperator b(OperatorKind::second_order, 2, n, h);
    SchemeConfig cfg = base_cfg(1e-4, 5.0, 0.1);
    GridField u = constant_field(n, 2, 1.0);
    SAVState s = sav_initial_state(u, a, cfg);
    SAVState next = ch_rss_sav_step(s, a, b, cfg);
    CHECK(next.s == doctest::Approx(s.s).epsilon(1e-13));
    CHECK(max_abs(project_mean_zero(next.u)) <= 1e-12);
}

TEST_CASE("three-dimensional steps match their dense references") {
    const int n = 8;
    const double h = domain_spacing(n);
    testing::DenseOps ops(OperatorKind::cs2, 3, n, h);
    TensorOperator a(OperatorKind::cs2, 3, n, h);
    TensorOperator b(OperatorKind::second_order, 3, n, h);
    for (int trial = 0; trial < 3; ++trial) {
        GridField u = random_field(n, 3, 900 + trial, 0.9);
        GridField mu = random_field(n, 3, 950 + trial, 0.9);
        Eigen::VectorXd uv = testing::to_vec(u);
        SchemeConfig cfg = base_cfg(1e-3, 2.0, 0.25);
        cfg.project_mean = true;
        CHECK(max_diff(heat_rss_euler_step(u, a, b, cfg),
                       testing::ref_heat_euler(ops, uv, cfg.dt, cfg.tau, true)) < 1e-10);
        CHECK(max_diff(heat_rss_adi_step(u, a, b, cfg),
                       testing::ref_heat_adi(ops, uv, cfg.dt, cfg.tau, true)) < 1e-10);
        CHECK(max_diff(heat_rss_strang_step(u, a, b, cfg),
                       testing::ref_heat_strang(ops, uv, cfg.dt, cfg.tau, true)) < 1e-10);
        CHState got = ch_rss_imex_step({u, mu}, a, b, cfg);
        testing::RefCH want =
            testing::ref_ch_rss_imex(ops, {uv, testing::to_vec(mu)}, cfg.dt, cfg.tau, cfg.epsilon, true);
        CHECK(max_diff(got.u, want.u) < 1e-10);
        CHECK(max_diff(got.mu, want.mu) < 1e-10);
    }
}

TEST_CASE("every scheme step matches its dense reference") {
    const int n = 8;
    const double h = domain_spacing(n);
    const double eps = 0.25;
    for (int dim : {1, 2}) {
        testing::DenseOps ops(OperatorKind::cs2, dim, n, h);
        TensorOperator a(OperatorKind::cs2, dim, n, h);
        TensorOperator b(OperatorKind::second_order, dim, n, h);
        const double hd = std::pow(h, dim);
        for (int trial = 0; trial < 20; ++trial) {
            unsigned seed = 100 * dim + trial;
            GridField u = random_field(n, dim, seed, 0.9);
            Eigen::VectorXd uv = testing::to_vec(u);
            SchemeConfig cfg = base_cfg(2e-3, 1.7, eps);
            cfg.lambda = 5.0;
            cfg.lambda0 = 40.0;
            cfg.C0 = 1.0;

            CHECK(max_diff(heat_rss_euler_step(u, a, b, cfg),
                           testing::ref_heat_euler(ops, uv, cfg.dt, cfg.tau, false)) < 1e-10);
            CHECK(max_diff(heat_rss_cn_step(u, a, b, cfg),
                           testing::ref_heat_cn(ops, uv, cfg.dt, cfg.tau, false)) < 1e-10);
            GridField uprev = random_field(n, dim, seed + 7000, 0.9);
            CHECK(max_diff(heat_rss_gear_step(uprev, u, a, b, cfg),
                           testing::ref_heat_gear(ops, testing::to_vec(uprev), uv, cfg.dt, cfg.tau,
                                                  false)) < 1e-10);
            CHECK(max_diff(heat_rss_adi_step(u, a, b, cfg),
                           testing::ref_heat_adi(ops, uv, cfg.dt, cfg.tau, false)) < 1e-10);
            CHECK(max_diff(heat_rss_strang_step(u, a, b, cfg),
                           testing::ref_heat_strang(ops, uv, cfg.dt, cfg.tau, false)) < 1e-10);
            CHECK(max_diff(ac_imex_step(u, a, cfg), testing::ref_ac_imex(ops, uv, cfg.dt, eps)) < 1e-10);
            CHECK(max_diff(ac_rss_imex_step(u, a, b, cfg),
                           testing::ref_ac_rss_imex(ops, uv, cfg.dt, cfg.tau, eps)) < 1e-10);
            CHECK(max_diff(ac_df_step(u, a, b, cfg).u,
                           testing::ref_ac_df(ops, uv, cfg.dt, cfg.tau, eps, cfg.fixed_point_tol,
                                              cfg.max_fixed_point_iters)) < 1e-10);
            CHECK(max_diff(ac_convex_split_step(u, a, b, cfg).u,
                           testing::ref_ac_convex(ops, uv, cfg.dt, cfg.tau, eps, cfg.fixed_point_tol,
                                                  cfg.max_fixed_point_iters)) < 1e-10);
            CHECK(max_diff(ac_splitting_step(u, a, b, cfg),
                           testing::ref_ac_splitting(ops, uv, cfg.dt, cfg.tau, eps, false)) < 1e-10);

            if (dim == 2) {
                GridField f0 = random_field(n, dim, seed + 1000, 0.4);
                for (double& v : f0.values) v += 0.5;
                SegmentationProblem seg{f0, cfg.lambda, eps};
                CHECK(max_diff(ac_segmentation_step(u, a, b, seg, cfg).phi,
                               testing::ref_ac_segmentation(ops, uv, testing::to_vec(f0), cfg.lambda,
                                                            cfg.dt, cfg.tau, eps)) < 1e-10);
            }

            GridField mu = random_field(n, dim, seed + 2000, 0.9);
            testing::RefCH rs{uv, testing::to_vec(mu)};
            CHState cs{u, mu};
            for (bool project : {false, true}) {
                cfg.project_mean = project;
                CHState got = ch_rss_imex_step(cs, a, b, cfg);
                testing::RefCH want = testing::ref_ch_rss_imex(ops, rs, cfg.dt, cfg.tau, eps, project);
                CHECK(max_diff(got.u, want.u) < 1e-10);
                CHECK(max_diff(got.mu, want.mu) < 1e-10);
                CHState got_nl = ch_nlrss_step(cs, a, b, cfg).state;
                testing::RefCH want_nl =
                    testing::ref_ch_nlrss(ops, rs, cfg.dt, cfg.tau, eps, project, cfg.fixed_point_tol,
                                          cfg.max_fixed_point_iters);
                CHECK(max_diff(got_nl.u, want_nl.u) < 1e-10);
            }
            cfg.project_mean = false;

            if (dim == 2) {
                GridField g = random_field(n, dim, seed + 3000, 0.9);
                GridField mask(n, dim, h);
                std::mt19937_64 mrng(seed + 4000);
                for (double& v : mask.values) v = (mrng() & 1) ? 1.0 : 0.0;
                InpaintingProblem prob{g, mask, cfg.lambda0};
                CHState got = ch_inpainting_step(cs, a, b, prob, cfg);
                testing::RefCH want =
                    testing::ref_ch_inpaint(ops, rs, testing::to_vec(g), testing::to_vec(mask),
                                            cfg.lambda0, cfg.dt, cfg.tau, eps);
                CHECK(max_diff(got.u, want.u) < 1e-10);
                CHECK(max_diff(got.mu, want.mu) < 1e-10);
            }

            for (bool project : {false, true}) {
                cfg.project_mean = project;
                SAVState sstate{u, mu, sav_auxiliary(u, cfg.well(), cfg.C0)};
                SAVState got = ch_rss_sav_step(sstate, a, b, cfg);
                testing::RefSAV want = testing::ref_ch_sav(ops, {uv, testing::to_vec(mu), sstate.s},
                                                           cfg.dt, cfg.tau, cfg.C0, hd, project);
                CHECK(max_diff(got.u, want.u) < 1e-10);
                CHECK(max_diff(got.mu, want.mu) < 1e-10);
                CHECK(std::abs(got.s - want.s) < 1e-10);
            }
        }
    }
}
