// SPDX-License-Identifier: Apache-2.0
//
// jcas-pareto: joint communication and sensing beamforming library
// Copyright (c) 2026 the jcas-pareto authors

#include "jcas/solver_multiuser.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

namespace jcas {

namespace {

constexpr double kLn2 = 0.6931471805599453;
constexpr double kQTol = 1e-9;      // fixed-point tolerance on uplink powers
constexpr int kMaxPasses = 500;
constexpr int kMaxExpansions = 200;
constexpr int kMaxBisections = 200;

double closed_form_q(double alpha, double beta, double sensing_gain, double eff_gain) {
    const double d = beta - alpha * sensing_gain;
    if (!(d > 0.0)) return -1.0; // sentinel: unbounded
    const double phi = std::max(0.0, (1.0 - alpha) / kLn2 - d / eff_gain);
    return phi / d;
}

/// R_x of the transform, no bookkeeping; tolerant of extreme powers (the
/// bisection probes betas far from the optimum).
CMatrix transform_rx(const std::vector<CVector>& g, const std::vector<double>& q,
                     const std::vector<int>& order) {
    const int k = static_cast<int>(g.size());
    const int nt = static_cast<int>(g.front().size());
    std::vector<CMatrix> t_of_pos(static_cast<std::size_t>(k));
    CMatrix suffix = CMatrix::Identity(nt, nt);
    for (int t = k - 1; t >= 0; --t) {
        t_of_pos[static_cast<std::size_t>(t)] = suffix;
        const int u = order[static_cast<std::size_t>(t)];
        suffix += q[static_cast<std::size_t>(u)] *
                  (g[static_cast<std::size_t>(u)] * g[static_cast<std::size_t>(u)].adjoint());
    }
    CMatrix rx = CMatrix::Zero(nt, nt);
    for (int t = 0; t < k; ++t) {
        const int i = order[static_cast<std::size_t>(t)];
        if (q[static_cast<std::size_t>(i)] <= 0.0) continue;
        const CMatrix t_mh = hermitian_inv_sqrt(t_of_pos[static_cast<std::size_t>(t)]);
        const double s = 1.0 + std::max(0.0, (g[static_cast<std::size_t>(i)].adjoint() * rx *
                                              g[static_cast<std::size_t>(i)])(0).real());
        CVector v = t_mh * g[static_cast<std::size_t>(i)];
        const double vn2 = v.squaredNorm();
        if (vn2 <= 0.0) continue;
        const CVector c_h = (std::sqrt(s) / std::sqrt(vn2)) * (t_mh * v);
        rx += q[static_cast<std::size_t>(i)] * (c_h * c_h.adjoint());
    }
    return rx;
}

double mac_rate_bits(const std::vector<CVector>& g, const std::vector<double>& q) {
    const int nt = static_cast<int>(g.front().size());
    CMatrix z = CMatrix::Identity(nt, nt);
    for (std::size_t i = 0; i < g.size(); ++i)
        if (q[i] > 0.0) z += q[i] * (g[i] * g[i].adjoint());
    Eigen::SelfAdjointEigenSolver<CMatrix> es(z, Eigen::EigenvaluesOnly);
    double bits = 0.0;
    for (Eigen::Index e = 0; e < es.eigenvalues().size(); ++e)
        bits += std::log2(std::max(es.eigenvalues()(e), 1e-300));
    return bits;
}

struct Evaluator {
    const MultiuserProblem& problem;
    std::vector<CVector> g;
    std::vector<int> order;

    explicit Evaluator(const MultiuserProblem& p)
        : problem(p), g(normalized_channels(p.channels)),
          order(UplinkSolution::identity_order(p.channels.n_users())) {}

    double fi(const std::vector<double>& q) const {
        return (problem.ops.M * transform_rx(g, q, order)).trace().real();
    }
    double mi(const std::vector<double>& q) const { return mac_rate_bits(g, q); }
    double objective(const std::vector<double>& q) const {
        const double a = problem.alpha;
        double v = 0.0;
        if (a > 0.0) v += a * fi(q);
        if (a < 1.0) v += (1.0 - a) * mi(q);
        return v;
    }
    double lagrangian(const std::vector<double>& q, double beta) const {
        double total = 0.0;
        for (double qi : q) total += qi;
        return objective(q) - beta * (total - problem.p_tx);
    }
};

double total_of(const std::vector<double>& q) {
    double t = 0.0;
    for (double v : q) t += v;
    return t;
}

/// Golden-section maximization after a coarse scan; f need not be unimodal.
template <typename F>
std::pair<double, double> line_max(const F& f, double lo, double hi, int coarse = 16,
                                   int golden = 32) {
    double best_t = lo, best_v = f(lo);
    for (int i = 1; i <= coarse; ++i) {
        const double t = lo + (hi - lo) * static_cast<double>(i) / coarse;
        const double v = f(t);
        if (v > best_v) {
            best_v = v;
            best_t = t;
        }
    }
    const double step = (hi - lo) / coarse;
    double a = std::max(lo, best_t - step), b = std::min(hi, best_t + step);
    const double gr = 0.6180339887498949;
    double c = b - gr * (b - a), d = a + gr * (b - a);
    double fc = f(c), fd = f(d);
    for (int i = 0; i < golden; ++i) {
        if (fc > fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - gr * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + gr * (b - a);
            fd = f(d);
        }
    }
    const double t = 0.5 * (a + b);
    const double v = f(t);
    if (v >= best_v) return {t, v};
    return {best_t, best_v};
}

struct PolishOutcome {
    std::vector<double> q;
    double value = 0.0;
    bool settled = false; // a full sweep produced no further improvement
};

/// Exact block-coordinate ascent on the true objective: pairwise power
/// transfers plus budget top-up, each step a 1-D line maximization. Monotone
/// by construction.
PolishOutcome pairwise_polish(const Evaluator& ev, std::vector<double> q, int max_sweeps = 8) {
    const int k = static_cast<int>(q.size());
    const double p_tx = ev.problem.p_tx;
    double total = total_of(q);
    if (total > p_tx && total > 0.0) {
        const double scale = p_tx / total;
        for (double& v : q) v *= scale;
        total = p_tx;
    }
    double best = ev.objective(q);
    bool settled = false;
    const auto improves = [&](double v) { return v > best + 1e-12 * std::max(1.0, std::abs(best)); };
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        bool improved = false;
        total = total_of(q);
        if (total < p_tx - 1e-11 * std::max(1.0, p_tx)) {
            for (int i = 0; i < k; ++i) {
                const double room = p_tx - total;
                auto f = [&](double t) {
                    std::vector<double> qq = q;
                    qq[static_cast<std::size_t>(i)] += t;
                    return ev.objective(qq);
                };
                const auto [t, v] = line_max(f, 0.0, room);
                if (improves(v)) {
                    q[static_cast<std::size_t>(i)] += t;
                    best = v;
                    improved = true;
                    total = total_of(q);
                }
            }
        }
        for (int i = 0; i < k; ++i) {
            for (int j = i + 1; j < k; ++j) {
                const double budget = q[static_cast<std::size_t>(i)] + q[static_cast<std::size_t>(j)];
                if (budget <= 0.0) continue;
                auto f = [&](double t) {
                    std::vector<double> qq = q;
                    qq[static_cast<std::size_t>(i)] = budget - t;
                    qq[static_cast<std::size_t>(j)] = t;
                    return ev.objective(qq);
                };
                const auto [t, v] = line_max(f, 0.0, budget);
                if (improves(v)) {
                    q[static_cast<std::size_t>(i)] = budget - t;
                    q[static_cast<std::size_t>(j)] = t;
                    best = v;
                    improved = true;
                }
            }
        }
        if (!improved) {
            settled = true;
            break;
        }
    }
    return {std::move(q), best, settled};
}

} // namespace

MultiuserProblem::MultiuserProblem(ChannelSet cs, SensingOperators sensing, double power,
                                   double weight)
    : channels(std::move(cs)), ops(std::move(sensing)), p_tx(power), alpha(weight) {
    if (channels.n_users() < 1)
        throw std::invalid_argument("MultiuserProblem: at least one user channel is required");
    if (!(p_tx > 0.0)) throw std::invalid_argument("MultiuserProblem: p_tx must be > 0");
    if (!(alpha >= 0.0 && alpha <= 1.0))
        throw std::invalid_argument("MultiuserProblem: alpha must lie in [0, 1]");
    if (ops.M.rows() != channels.n_tx())
        throw std::invalid_argument("MultiuserProblem: sensing operators do not match n_tx");
}

double MultiuserResult::power_used() const {
    double p = downlink.R_x.size() > 0 ? downlink.R_x.trace().real() : 0.0;
    if (r0.size() > 0) p += r0.trace().real();
    return p;
}

std::optional<double> per_user_update(const BlockCoordState& state, const ChannelSet& cs,
                                      const UplinkSolution& up, int user, double alpha,
                                      double beta, const CMatrix& M) {
    const CVector& c_h = state.c.at(static_cast<std::size_t>(user));
    const double sensing_gain = (c_h.adjoint() * M * c_h)(0).real();
    const double eff_gain = effective_channel(cs, up, user).squaredNorm();
    const double q = closed_form_q(alpha, beta, sensing_gain, eff_gain);
    if (q < 0.0) return std::nullopt;
    return q;
}

std::optional<UplinkSolution> block_coordinate_pass(const MultiuserProblem& problem,
                                                    const UplinkSolution& up, double beta) {
    const auto g = normalized_channels(problem.channels);
    const int k = problem.channels.n_users();
    const int nt = problem.channels.n_tx();
    UplinkSolution cur = up;

    // Z = I + sum_j q_j g_j g_j^H over all users, updated as powers change.
    CMatrix z = CMatrix::Identity(nt, nt);
    for (int j = 0; j < k; ++j)
        z += cur.q[static_cast<std::size_t>(j)] *
             (g[static_cast<std::size_t>(j)] * g[static_cast<std::size_t>(j)].adjoint());

    CMatrix r_prefix = CMatrix::Zero(nt, nt);
    for (int t = 0; t < k; ++t) {
        const int i = cur.order[static_cast<std::size_t>(t)];
        CMatrix t_mat = CMatrix::Identity(nt, nt);
        for (int s = t + 1; s < k; ++s) {
            const int u = cur.order[static_cast<std::size_t>(s)];
            t_mat += cur.q[static_cast<std::size_t>(u)] *
                     (g[static_cast<std::size_t>(u)] * g[static_cast<std::size_t>(u)].adjoint());
        }
        const CMatrix t_mh = hermitian_inv_sqrt(t_mat);
        const double s_lvl = 1.0 + std::max(0.0, (g[static_cast<std::size_t>(i)].adjoint() *
                                                  r_prefix * g[static_cast<std::size_t>(i)])(0)
                                                     .real());
        CVector v = t_mh * g[static_cast<std::size_t>(i)];
        const double vn = v.norm();
        const CVector f = fix_phase(v / vn);
        const CVector c_h = std::sqrt(s_lvl) * (t_mh * f);
        const double sensing_gain = (c_h.adjoint() * problem.ops.M * c_h)(0).real();

        CMatrix a_m = z - cur.q[static_cast<std::size_t>(i)] *
                              (g[static_cast<std::size_t>(i)] * g[static_cast<std::size_t>(i)].adjoint());
        a_m = 0.5 * (a_m + a_m.adjoint());
        const double eff_gain =
            (g[static_cast<std::size_t>(i)].adjoint() * a_m.ldlt().solve(g[static_cast<std::size_t>(i)]))(0)
                .real();

        const double q_new = closed_form_q(problem.alpha, beta, sensing_gain, eff_gain);
        if (q_new < 0.0) return std::nullopt;
        z += (q_new - cur.q[static_cast<std::size_t>(i)]) *
             (g[static_cast<std::size_t>(i)] * g[static_cast<std::size_t>(i)].adjoint());
        cur.q[static_cast<std::size_t>(i)] = q_new;
        r_prefix += (q_new * s_lvl / (vn * vn)) *
                    ((t_mh * v) * (t_mh * v).adjoint()); // R_i = q S (T^-1 g)(T^-1 g)^H / (g^H T^-1 g)
    }
    return cur;
}

FixedBetaResult solve_fixed_beta(const MultiuserProblem& problem, double beta) {
    if (!(beta > 0.0)) throw std::invalid_argument("solve_fixed_beta: beta must be > 0");
    Evaluator ev(problem);
    FixedBetaResult res;
    res.uplink.q.assign(static_cast<std::size_t>(problem.channels.n_users()), 0.0);
    res.uplink.order = UplinkSolution::identity_order(problem.channels.n_users());
    for (int pass = 0; pass < kMaxPasses; ++pass) {
        auto next = block_coordinate_pass(problem, res.uplink, beta);
        res.passes = pass + 1;
        if (!next) {
            res.beta_too_small = true;
            return res;
        }
        const double lagr = ev.lagrangian(next->q, beta);
        if (!res.lagrangian_trace.empty()) {
            const double prev = res.lagrangian_trace.back();
            if (lagr < prev - 1e-9 * std::max(1.0, std::abs(prev))) {
                // The closed-form update is ascent only while the frozen
                // sensing gains track the iterate; stop at the first dip and
                // keep the previous (better) iterate.
                break;
            }
        }
        double delta = 0.0;
        for (std::size_t i = 0; i < next->q.size(); ++i)
            delta = std::max(delta, std::abs(next->q[i] - res.uplink.q[i]));
        res.uplink = std::move(*next);
        res.lagrangian_trace.push_back(lagr);
        if (delta < kQTol) {
            res.converged = true;
            break;
        }
    }
    res.total_power = total_of(res.uplink.q);
    return res;
}

FindBetaResult find_beta(const MultiuserProblem& problem) {
    const double p_tx = problem.p_tx;
    const auto feasible = [&](const FixedBetaResult& r) {
        return !r.beta_too_small && r.total_power <= p_tx;
    };
    const auto met = [&](const FixedBetaResult& r) {
        return feasible(r) && std::abs(r.total_power - p_tx) <= 1e-6 * p_tx;
    };

    FindBetaResult out;
    double hi = 1.0;
    FixedBetaResult r_hi = solve_fixed_beta(problem, hi);
    int n = 0;
    while (!feasible(r_hi)) {
        if (++n > kMaxExpansions)
            throw std::runtime_error(
                "find_beta: no feasible upper bracket after 200 doublings (last beta " +
                std::to_string(hi) + ", power " + std::to_string(r_hi.total_power) + ")");
        hi *= 2.0;
        r_hi = solve_fixed_beta(problem, hi);
    }
    if (met(r_hi)) {
        out.beta = hi;
        out.at_beta = std::move(r_hi);
        out.budget_met = true;
        return out;
    }

    double lo = hi / 2.0;
    FixedBetaResult r_lo = solve_fixed_beta(problem, lo);
    n = 0;
    while (feasible(r_lo) && r_lo.total_power < p_tx) {
        if (met(r_lo)) {
            out.beta = lo;
            out.at_beta = std::move(r_lo);
            out.budget_met = true;
            return out;
        }
        if (lo < 1e-280 || ++n > 1000) {
            // Budget unreachable at any beta (e.g. alpha = 1, where the
            // closed form shuts every user off). Return the feasible side.
            out.beta = lo;
            out.at_beta = std::move(r_lo);
            out.budget_met = false;
            return out;
        }
        lo /= 2.0;
        r_lo = solve_fixed_beta(problem, lo);
    }

    for (int b = 0; b < kMaxBisections; ++b) {
        if (met(r_hi)) break;
        const double mid = 0.5 * (lo + hi);
        if (!(mid > lo && mid < hi)) break;
        FixedBetaResult r_mid = solve_fixed_beta(problem, mid);
        ++out.bisections;
        if (feasible(r_mid)) {
            hi = mid;
            r_hi = std::move(r_mid);
        } else {
            lo = mid;
        }
        if ((hi - lo) <= 1e-15 * hi) break;
    }
    out.beta = hi;
    out.budget_met = met(r_hi);
    out.at_beta = std::move(r_hi);
    return out;
}

double uplink_weighted_objective(const MultiuserProblem& problem, const UplinkSolution& up) {
    Evaluator ev(problem);
    return ev.objective(up.q);
}

MultiuserResult solve_multiuser(const MultiuserProblem& problem) {
    Evaluator ev(problem);
    const int k = problem.channels.n_users();

    FindBetaResult dual = find_beta(problem);

    std::vector<std::vector<double>> candidates;
    candidates.push_back(dual.at_beta.uplink.q);
    if (problem.alpha > 0.0) {
        for (int j = 0; j < k; ++j) {
            std::vector<double> v(static_cast<std::size_t>(k), 0.0);
            v[static_cast<std::size_t>(j)] = problem.p_tx;
            candidates.push_back(std::move(v));
        }
        candidates.emplace_back(static_cast<std::size_t>(k), problem.p_tx / k);
    }

    // Polish the dual solution and the best other starting point.
    std::vector<std::pair<double, std::size_t>> ranked;
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        std::vector<double> capped = candidates[i];
        const double tot = total_of(capped);
        if (tot > problem.p_tx && tot > 0.0)
            for (double& v : capped) v *= problem.p_tx / tot;
        ranked.emplace_back(ev.objective(capped), i);
        candidates[i] = std::move(capped);
    }
    // stable: ties keep candidate order (dual first, then users by index)
    std::stable_sort(ranked.begin(), ranked.end(),
                     [](const auto& a, const auto& b) { return a.first > b.first; });

    std::vector<std::size_t> to_polish{0};
    const std::size_t extra = k <= 4 ? 2 : 1;
    for (const auto& [val, idx] : ranked) {
        if (to_polish.size() > extra) break;
        if (idx != 0) to_polish.push_back(idx);
    }

    std::vector<double> best_q = candidates[ranked.front().second];
    double best_v = ranked.front().first;
    bool polish_settled = true;
    for (std::size_t idx : to_polish) {
        PolishOutcome polished = pairwise_polish(ev, candidates[idx]);
        if (polished.value > best_v) {
            best_v = polished.value;
            best_q = std::move(polished.q);
            polish_settled = polished.settled;
        }
    }

    MultiuserResult res;
    res.uplink.q = best_q;
    res.uplink.order = ev.order;
    auto [dl, state] = mac_to_bc(problem.channels, res.uplink);
    res.downlink = std::move(dl);
    res.r0 = CMatrix::Zero(problem.channels.n_tx(), problem.channels.n_tx());
    res.beta = dual.beta;
    res.mi_bits = 0.0;
    for (double r : res.downlink.per_user_rate_bits) res.mi_bits += r;
    res.fi = (problem.ops.M * res.downlink.R_x).trace().real();
    res.report.outer_iterations = dual.at_beta.passes;
    res.report.beta_bisections = dual.bisections;
    res.report.converged = polish_settled;
    res.report.final_objective = best_v;
    res.report.objective_trace = dual.at_beta.lagrangian_trace;
    return res;
}

MultiuserResult solve_suboptimal_baseline(const MultiuserProblem& problem, int power_grid_size) {
    if (power_grid_size < 2)
        throw std::invalid_argument("solve_suboptimal_baseline: power_grid_size must be >= 2");
    Eigen::SelfAdjointEigenSolver<CMatrix> es(problem.ops.M);
    const Eigen::Index last = es.eigenvalues().size() - 1;
    const CVector u = fix_phase(es.eigenvectors().col(last));

    MultiuserResult best;
    double best_value = -std::numeric_limits<double>::infinity();
    for (int step = 1; step < power_grid_size; ++step) {
        const double rho = static_cast<double>(step) / power_grid_size;
        MultiuserProblem comm(problem.channels, problem.ops, (1.0 - rho) * problem.p_tx, 0.0);
        MultiuserResult r = solve_multiuser(comm);
        r.r0 = (rho * problem.p_tx) * (u * u.adjoint());
        r.fi = (problem.ops.M * (r.downlink.R_x + r.r0)).trace().real();
        const double value = r.weighted_objective(problem.alpha);
        if (value > best_value) {
            best_value = value;
            best = std::move(r);
        }
    }
    best.report.final_objective = best_value;
    return best;
}

} // namespace jcas
