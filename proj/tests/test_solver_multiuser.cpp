#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Eigenvalues>

#include <jcas/solver_multiuser.hpp>

#include "support/helpers.hpp"

using namespace jcas;
using jcas_test::random_channels;
using jcas_test::rel_err;

namespace {

constexpr double kLn2 = 0.6931471805599453;

SensingOperators default_ops(int nt, int nr) {
    return build_operators(ArrayConfig(nt, nr, 0.5), Target(0.0, cx(1, 0), 1.0));
}

MultiuserProblem make_problem(std::uint64_t seed, int k, int nt, double p_tx, double alpha) {
    return MultiuserProblem(random_channels(seed, k, nt), default_ops(nt, nt), p_tx, alpha);
}

ChannelSet explicit_channels(const std::vector<CVector>& h) {
    ChannelSet cs;
    cs.h = h;
    cs.sigma_c2 = 1.0;
    cs.config_hash = "explicit";
    return cs;
}

UplinkSolution uplink_of(std::vector<double> q) {
    UplinkSolution up;
    up.order = UplinkSolution::identity_order(static_cast<int>(q.size()));
    up.q = std::move(q);
    return up;
}

/// Test-local capacity oracle: projected gradient ascent of
/// log2 det(I + sum q_i g_i g_i^H) over the simplex {q >= 0, sum q <= P}.
double capacity_by_projected_gradient(const ChannelSet& cs, double p_tx) {
    const auto g = normalized_channels(cs);
    const int k = static_cast<int>(g.size());
    const int nt = static_cast<int>(g.front().size());
    std::vector<double> q(static_cast<std::size_t>(k), p_tx / k);

    const auto project = [&](std::vector<double>& v) {
        for (double& x : v) x = std::max(0.0, x);
        double total = 0.0;
        for (double x : v) total += x;
        if (total <= p_tx) return;
        // bisection on the water level tau with sum max(v - tau, 0) = p_tx
        double lo = 0.0, hi = 0.0;
        for (double x : v) hi = std::max(hi, x);
        for (int it = 0; it < 100; ++it) {
            const double mid = 0.5 * (lo + hi);
            double s = 0.0;
            for (double x : v) s += std::max(0.0, x - mid);
            (s > p_tx ? lo : hi) = mid;
        }
        for (double& x : v) x = std::max(0.0, x - hi);
    };

    for (int it = 0; it < 4000; ++it) {
        CMatrix z = CMatrix::Identity(nt, nt);
        for (int i = 0; i < k; ++i)
            z += q[static_cast<std::size_t>(i)] *
                 (g[static_cast<std::size_t>(i)] * g[static_cast<std::size_t>(i)].adjoint());
        const auto solver = z.ldlt();
        std::vector<double> grad(static_cast<std::size_t>(k));
        for (int i = 0; i < k; ++i)
            grad[static_cast<std::size_t>(i)] =
                (g[static_cast<std::size_t>(i)].adjoint() * solver.solve(g[static_cast<std::size_t>(i)]))(0)
                    .real() /
                kLn2;
        const double step = p_tx * 0.5;
        for (int i = 0; i < k; ++i) q[static_cast<std::size_t>(i)] += step * grad[static_cast<std::size_t>(i)];
        project(q);
    }
    return mac_sum_rate(cs, uplink_of(q));
}

} // namespace

TEST_CASE("per-user update: water level below the channel shuts the user off") {
    CVector h(1);
    h << cx(1, 0);
    const ChannelSet cs = explicit_channels({h});
    const UplinkSolution up = uplink_of({0.0});
    const auto [dl, state] = mac_to_bc(cs, up);
    const CMatrix m = CMatrix::Zero(1, 1);
    // Sigma^2 = ||h_e||^2 / beta = 1/beta; beta = 2 > 1/ln2 means phi* < 0.
    const auto q = per_user_update(state, cs, up, 0, 0.0, 2.0, m);
    REQUIRE(q.has_value());
    CHECK(*q == 0.0);
}

TEST_CASE("per-user update closed form at alpha=0, beta=1, unit gain") {
    CVector h(1);
    h << cx(1, 0);
    const ChannelSet cs = explicit_channels({h});
    const UplinkSolution up = uplink_of({0.0});
    const auto [dl, state] = mac_to_bc(cs, up);
    const auto q = per_user_update(state, cs, up, 0, 0.0, 1.0, CMatrix::Zero(1, 1));
    REQUIRE(q.has_value());
    CHECK(*q == doctest::Approx(1.0 / kLn2 - 1.0).epsilon(1e-12));
}

TEST_CASE("per-user update recovers interference-free water-filling") {
    CVector h(2);
    h << cx(1.5, 0), cx(0, 0.5);
    const ChannelSet cs = explicit_channels({h});
    const UplinkSolution up = uplink_of({0.0});
    const auto [dl, state] = mac_to_bc(cs, up);
    const double beta = 1e-3;
    const auto q = per_user_update(state, cs, up, 0, 0.0, beta, CMatrix::Zero(2, 2));
    REQUIRE(q.has_value());
    const double expected = 1.0 / (beta * kLn2) - 1.0 / h.squaredNorm();
    CHECK(rel_err(*q, expected) < 1e-10);
}

TEST_CASE("per-user update signals beta too small") {
    CVector h(1);
    h << cx(1, 0);
    const ChannelSet cs = explicit_channels({h});
    const UplinkSolution up = uplink_of({0.0});
    const auto [dl, state] = mac_to_bc(cs, up);
    CMatrix m(1, 1);
    m << cx(10.0, 0.0); // sensing gain 10 at alpha=1 exceeds beta=1
    CHECK_FALSE(per_user_update(state, cs, up, 0, 1.0, 1.0, m).has_value());
}

TEST_CASE("a converged pass is a fixed point") {
    const MultiuserProblem problem = make_problem(3, 3, 4, 10.0, 0.0);
    const FixedBetaResult r = solve_fixed_beta(problem, 0.05);
    REQUIRE(r.converged);
    const auto again = block_coordinate_pass(problem, r.uplink, 0.05);
    REQUIRE(again.has_value());
    for (std::size_t i = 0; i < r.uplink.q.size(); ++i)
        CHECK(std::abs(again->q[i] - r.uplink.q[i]) < 1e-10);
}

TEST_CASE("orthogonal users decouple into independent updates") {
    CVector h1(2), h2(2);
    h1 << cx(2, 0), cx(0, 0);
    h2 << cx(0, 0), cx(1, 0);
    const ChannelSet cs = explicit_channels({h1, h2});
    const MultiuserProblem problem(cs, default_ops(2, 2), 10.0, 0.0);
    const double beta = 0.2;
    const auto pass = block_coordinate_pass(problem, uplink_of({0.0, 0.0}), beta);
    REQUIRE(pass.has_value());
    for (int i = 0; i < 2; ++i) {
        const double g2 = cs.h[static_cast<std::size_t>(i)].squaredNorm();
        const double expected = std::max(0.0, 1.0 / (beta * kLn2) - 1.0 / g2);
        CHECK(rel_err(pass->q[static_cast<std::size_t>(i)], expected) < 1e-10);
    }
}

TEST_CASE("huge beta spends no power; power is nonincreasing in beta") {
    const MultiuserProblem problem = make_problem(5, 3, 4, 10.0, 0.3);
    const FixedBetaResult big = solve_fixed_beta(problem, 1e9);
    CHECK(big.total_power == 0.0);
    const FixedBetaResult a = solve_fixed_beta(problem, 2000.0);
    const FixedBetaResult b = solve_fixed_beta(problem, 2200.0);
    REQUIRE(!a.beta_too_small);
    REQUIRE(!b.beta_too_small);
    CHECK(b.total_power <= a.total_power * (1.0 + 1e-9));
}

TEST_CASE("single-user fixed-beta power matches analytic water-filling") {
    const MultiuserProblem problem = make_problem(7, 1, 4, 10.0, 0.0);
    const double g2 = normalized_channels(problem.channels)[0].squaredNorm();
    const double beta = 0.01;
    const FixedBetaResult r = solve_fixed_beta(problem, beta);
    const double expected = std::max(0.0, 1.0 / (beta * kLn2) - 1.0 / g2);
    CHECK(rel_err(r.total_power, expected) < 1e-9);
}

TEST_CASE("dual Lagrangian is nondecreasing across passes") {
    SplitMix64 gen(101);
    for (int trial = 0; trial < 12; ++trial) {
        const int k = 1 + static_cast<int>(gen.next_u64() % 3);
        const MultiuserProblem problem =
            make_problem(200 + static_cast<std::uint64_t>(trial), k, 4, 10.0,
                         0.5 * gen.next_double());
        for (double beta : {3.0, 30.0, 300.0}) {
            const FixedBetaResult r = solve_fixed_beta(problem, beta);
            if (r.beta_too_small) continue;
            for (std::size_t i = 1; i < r.lagrangian_trace.size(); ++i) {
                const double prev = r.lagrangian_trace[i - 1];
                CHECK(r.lagrangian_trace[i] >= prev - 1e-9 * std::max(1.0, std::abs(prev)));
            }
        }
    }
}

TEST_CASE("find_beta meets the budget and is monotone in the budget") {
    const MultiuserProblem p10 = make_problem(11, 3, 4, 10.0, 0.0);
    const FindBetaResult r10 = find_beta(p10);
    REQUIRE(r10.budget_met);
    CHECK(std::abs(r10.at_beta.total_power - 10.0) <= 1e-5);

    const MultiuserProblem p20 = make_problem(11, 3, 4, 20.0, 0.0);
    const FindBetaResult r20 = find_beta(p20);
    REQUIRE(r20.budget_met);
    CHECK(r20.beta < r10.beta);
}

TEST_CASE("find_beta matches the analytic single-user multiplier at alpha=0") {
    const MultiuserProblem problem = make_problem(13, 1, 4, 10.0, 0.0);
    const double g2 = normalized_channels(problem.channels)[0].squaredNorm();
    const FindBetaResult r = find_beta(problem);
    REQUIRE(r.budget_met);
    const double expected = (1.0 / kLn2) / (10.0 + 1.0 / g2);
    CHECK(rel_err(r.beta, expected) < 1e-6);
}

TEST_CASE("alpha=0 solve matches an independent capacity maximizer") {
    for (std::uint64_t seed : {31ull, 32ull, 33ull}) {
        const MultiuserProblem problem = make_problem(seed, 3, 4, 10.0, 0.0);
        const MultiuserResult r = solve_multiuser(problem);
        const double oracle = capacity_by_projected_gradient(problem.channels, 10.0);
        CHECK(r.mi_bits >= oracle - 1e-4 * std::abs(oracle));
        CHECK(rel_err(r.mi_bits, oracle) < 1e-4);
    }
}

TEST_CASE("alpha=1 puts the budget on the dominant sensing user") {
    // User 0 carries the broadside direction (top eigenvector of M); user 1 is
    // nearly orthogonal to the sensing subspace.
    CVector h1(4), h2(4);
    h1 << cx(1, 0), cx(1, 0), cx(1, 0), cx(1, 0);
    h2 << cx(0.3, 0), cx(-0.3, 0.02), cx(0.3, 0), cx(-0.3, -0.02);
    const ChannelSet cs = explicit_channels({h1, h2});
    const MultiuserProblem problem(cs, default_ops(4, 4), 10.0, 1.0);
    const MultiuserResult r = solve_multiuser(problem);
    CHECK(r.uplink.q[0] >= 0.9 * 10.0);
    CHECK(r.power_used() <= 10.0 * (1.0 + 1e-7));
    // and the result beats (or matches) every vertex
    for (int j = 0; j < 2; ++j) {
        std::vector<double> qv{0.0, 0.0};
        qv[static_cast<std::size_t>(j)] = 10.0;
        UplinkSolution up = uplink_of(qv);
        CHECK(r.report.final_objective >=
              uplink_weighted_objective(problem, up) * (1.0 - 1e-9));
    }
}

TEST_CASE("reported objective agrees with the returned covariances") {
    // final_objective is evaluated on the solver's fast uplink path; fi and
    // mi_bits come from the full transform of the returned solution.
    SplitMix64 gen(211);
    for (int trial = 0; trial < 6; ++trial) {
        const MultiuserProblem problem =
            make_problem(400 + static_cast<std::uint64_t>(trial),
                         1 + static_cast<int>(gen.next_u64() % 4), 5, 10.0, gen.next_double());
        const MultiuserResult r = solve_multiuser(problem);
        const double from_covariances = r.weighted_objective(problem.alpha);
        CHECK(rel_err(r.report.final_objective, from_covariances) < 1e-9);
        const double via_uplink = uplink_weighted_objective(problem, r.uplink);
        CHECK(rel_err(via_uplink, from_covariances) < 1e-9);
    }
}

TEST_CASE("construction rejects empty channel sets and bad weights") {
    ChannelSet empty;
    empty.sigma_c2 = 1.0;
    CHECK_THROWS_AS(MultiuserProblem(empty, default_ops(4, 4), 1.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(make_problem(1, 2, 4, -1.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(make_problem(1, 2, 4, 1.0, 1.5), std::invalid_argument);
}

TEST_CASE("budget is tight for interior alpha and covariances are rank one") {
    const MultiuserProblem problem = make_problem(17, 3, 5, 10.0, 0.5);
    const MultiuserResult r = solve_multiuser(problem);
    CHECK(rel_err(r.power_used(), 10.0) < 1e-6);
    for (const CMatrix& cov : r.downlink.R) {
        Eigen::SelfAdjointEigenSolver<CMatrix> es(cov, Eigen::EigenvaluesOnly);
        const double lam1 = es.eigenvalues().maxCoeff();
        if (lam1 < 1e-12) continue;
        CHECK(es.eigenvalues()(es.eigenvalues().size() - 2) / lam1 <= 1e-8);
    }
    CHECK(r.r0.norm() == 0.0);
}

TEST_CASE("scaling channels by s and power by 1/s^2 leaves MI invariant") {
    const MultiuserProblem base = make_problem(19, 3, 4, 10.0, 0.0);
    const double s = 3.0;
    ChannelSet scaled = base.channels;
    for (CVector& h : scaled.h) h *= s;
    const MultiuserProblem other(scaled, base.ops, 10.0 / (s * s), 0.0);
    const MultiuserResult r1 = solve_multiuser(base);
    const MultiuserResult r2 = solve_multiuser(other);
    CHECK(rel_err(r1.mi_bits, r2.mi_bits) < 1e-8);
}

TEST_CASE("baseline with grid size 2 evaluates the single rho = 1/2 split") {
    const MultiuserProblem problem = make_problem(23, 2, 4, 10.0, 0.7);
    const MultiuserResult r = solve_suboptimal_baseline(problem, 2);
    CHECK(rel_err(r.r0.trace().real(), 5.0) < 1e-9);
    CHECK(rel_err(r.power_used(), 10.0) < 1e-6);
}

TEST_CASE("baseline FI at alpha=1 is bounded by the total-power Rayleigh quotient") {
    const MultiuserProblem problem = make_problem(29, 3, 4, 10.0, 1.0);
    Eigen::SelfAdjointEigenSolver<CMatrix> es(problem.ops.M, Eigen::EigenvaluesOnly);
    const double bound = 10.0 * es.eigenvalues().maxCoeff();
    for (int grid : {2, 5}) {
        const MultiuserResult r = solve_suboptimal_baseline(problem, grid);
        CHECK(r.fi <= bound * (1.0 + 1e-9));
    }
}

TEST_CASE("baseline rejects degenerate grids") {
    const MultiuserProblem problem = make_problem(29, 2, 4, 10.0, 0.5);
    CHECK_THROWS_AS(solve_suboptimal_baseline(problem, 1), std::invalid_argument);
}
