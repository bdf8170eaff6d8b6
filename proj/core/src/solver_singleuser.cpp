// SPDX-License-Identifier: Apache-2.0
//
// jcas-pareto: joint communication and sensing beamforming library
// Copyright (c) 2026 the jcas-pareto authors

#include "jcas/solver_singleuser.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

#include "jcas/duality.hpp"

namespace jcas {

namespace {

constexpr double kLn2 = 0.6931471805599453;

double spectral_norm(const CMatrix& m) {
    Eigen::SelfAdjointEigenSolver<CMatrix> es(m, Eigen::EigenvaluesOnly);
    double v = 0.0;
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i)
        v = std::max(v, std::abs(es.eigenvalues()(i)));
    return v;
}

double clamped_power(const Eigen::VectorXd& sigma, double mu, double eirp) {
    double total = 0.0;
    for (Eigen::Index i = 0; i < sigma.size(); ++i)
        total += std::clamp(sigma(i) - mu, 0.0, eirp);
    return total;
}

} // namespace

SingleUserProblem::SingleUserProblem(CVector h_in, double sigma2, SensingOperators sensing,
                                     double power, double eirp_cap, double weight)
    : h(std::move(h_in)), sigma_c2(sigma2), ops(std::move(sensing)), p_tx(power),
      eirp(eirp_cap), alpha(weight) {
    if (h.size() < 1) throw std::invalid_argument("SingleUserProblem: empty channel");
    if (!(sigma_c2 > 0.0)) throw std::invalid_argument("SingleUserProblem: sigma_c2 must be > 0");
    if (!(p_tx > 0.0)) throw std::invalid_argument("SingleUserProblem: p_tx must be > 0");
    if (!(eirp > 0.0)) throw std::invalid_argument("SingleUserProblem: eirp must be > 0");
    if (!(alpha >= 0.0 && alpha <= 1.0))
        throw std::invalid_argument("SingleUserProblem: alpha must lie in [0, 1]");
    if (ops.M.rows() != h.size())
        throw std::invalid_argument("SingleUserProblem: sensing operators do not match n_tx");
    K_mat = (h * h.adjoint()) / sigma_c2;
}

ProjectionResult project_spectrum(const Eigen::VectorXd& sigma, double p_tx, double eirp) {
    ProjectionResult out;
    out.lambdas.resize(sigma.size());
    double mu = 0.0;
    // The 1e-12 slack keeps re-projection of an on-budget spectrum an exact
    // identity (the power residual tolerance of the mu search).
    if (clamped_power(sigma, 0.0, eirp) > p_tx + 1e-12) {
        double lo = 0.0, hi = sigma.maxCoeff();
        for (int i = 0; i < 200; ++i) {
            const double mid = 0.5 * (lo + hi);
            if (clamped_power(sigma, mid, eirp) > p_tx)
                lo = mid;
            else
                hi = mid;
            if (std::abs(clamped_power(sigma, hi, eirp) - p_tx) <= 1e-12 && (hi - lo) < 1e-15 * std::max(1.0, hi))
                break;
        }
        mu = hi;
        // Snap: the power residual is piecewise linear in mu with unit slope
        // per free entry; one Newton correction lands within 1e-12.
        int free_entries = 0;
        for (Eigen::Index i = 0; i < sigma.size(); ++i) {
            const double l = sigma(i) - mu;
            if (l > 0.0 && l < eirp) ++free_entries;
        }
        if (free_entries > 0) {
            const double resid = clamped_power(sigma, mu, eirp) - p_tx;
            mu += resid / free_entries;
            if (mu < 0.0) mu = 0.0;
        }
    }
    out.mu = mu;
    for (Eigen::Index i = 0; i < sigma.size(); ++i) {
        const double l = std::clamp(sigma(i) - mu, 0.0, eirp);
        out.lambdas(i) = l;
        if (l >= eirp) out.active_upper.push_back(static_cast<int>(i));
        if (l <= 0.0) out.active_lower.push_back(static_cast<int>(i));
    }
    return out;
}

double ProjectionKkt::max_residual() const {
    return std::max({stationarity, trace_complementarity, upper_complementarity,
                     lower_complementarity, primal_budget, dual_feasibility, box});
}

ProjectionKkt projection_kkt(const Eigen::VectorXd& sigma, const ProjectionResult& proj,
                             double p_tx, double eirp) {
    ProjectionKkt out;
    const Eigen::Index n = sigma.size();
    double trace = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        const double l = proj.lambdas(i);
        const double x = std::max(0.0, sigma(i) - proj.mu - eirp); // multiplier of lambda <= eirp
        const double y = std::max(0.0, proj.mu - sigma(i));        // multiplier of lambda >= 0
        out.stationarity = std::max(out.stationarity, std::abs(l - sigma(i) - y + x + proj.mu));
        out.upper_complementarity = std::max(out.upper_complementarity, std::abs(x * (l - eirp)));
        out.lower_complementarity = std::max(out.lower_complementarity, std::abs(y * l));
        out.dual_feasibility = std::max(out.dual_feasibility, std::max(-x, -y));
        out.box = std::max({out.box, -l, l - eirp});
        trace += l;
    }
    out.trace_complementarity = std::abs(proj.mu * (trace - p_tx));
    out.primal_budget = std::max(0.0, trace - p_tx);
    out.dual_feasibility = std::max(out.dual_feasibility, -proj.mu);
    return out;
}

double objective(const SingleUserProblem& problem, const CMatrix& R_x) {
    require_hermitian(R_x, 1e-8, "objective");
    const double fi = (problem.ops.M * R_x).trace().real();
    const double snr = (problem.K_mat * R_x).trace().real();
    return problem.alpha * fi + (1.0 - problem.alpha) * std::log2(1.0 + snr);
}

CMatrix gradient(const SingleUserProblem& problem, const CMatrix& R_x) {
    require_hermitian(R_x, 1e-8, "gradient");
    const double snr = (problem.K_mat * R_x).trace().real();
    return problem.alpha * problem.ops.M +
           ((1.0 - problem.alpha) / kLn2 / (1.0 + snr)) * problem.K_mat;
}

CMatrix project_covariance(const CMatrix& m, double p_tx, double eirp) {
    Eigen::SelfAdjointEigenSolver<CMatrix> es(0.5 * (m + m.adjoint()));
    const Eigen::Index n = m.rows();
    // non-increasing spectral order, deterministic eigenvector phases
    Eigen::VectorXd sigma(n);
    CMatrix basis(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        sigma(i) = es.eigenvalues()(n - 1 - i);
        basis.col(i) = fix_phase(es.eigenvectors().col(n - 1 - i));
    }
    const ProjectionResult proj = project_spectrum(sigma, p_tx, eirp);
    CMatrix out = basis * proj.lambdas.asDiagonal() * basis.adjoint();
    return 0.5 * (out + out.adjoint());
}

PgdResult pgd_solve(const SingleUserProblem& problem, const PgdConfig& cfg) {
    const Eigen::Index n = problem.h.size();
    double step0 = cfg.step_init;
    if (step0 <= 0.0) {
        step0 = 1.0 / (2.0 * problem.alpha * spectral_norm(problem.ops.M) +
                       2.0 * (1.0 - problem.alpha) * spectral_norm(problem.K_mat) / kLn2 + 1e-12);
    }

    PgdResult out;
    CMatrix r = CMatrix::Zero(n, n);
    double e_cur = objective(problem, r);
    out.report.objective_trace.push_back(e_cur);
    out.report.converged = false;

    // The trial step doubles after every un-backtracked acceptance; the
    // compact feasible set makes large steps safe (the projection absorbs
    // them) and the log-rate term needs them once tr(K R) is large.
    double delta_trial = step0;
    const double delta_cap = 1e12 * step0;

    int it = 0;
    for (; it < cfg.max_iters; ++it) {
        const CMatrix g = gradient(problem, r);
        const CMatrix full = project_covariance(r + step0 * g, problem.p_tx, problem.eirp);
        const double resid = (full - r).norm() / step0;

        double delta = delta_trial;
        CMatrix next = project_covariance(r + delta * g, problem.p_tx, problem.eirp);
        double e_next = objective(problem, next);
        bool accepted = false;
        bool backtracked = false;
        for (int bt = 0; bt < 80; ++bt) {
            const double gain = (g * (next - r)).trace().real();
            if (e_next >= e_cur + cfg.armijo_c * gain || gain <= 0.0) {
                accepted = true;
                break;
            }
            backtracked = true;
            delta *= cfg.backtrack_factor;
            next = project_covariance(r + delta * g, problem.p_tx, problem.eirp);
            e_next = objective(problem, next);
        }
        if (!accepted || e_next < e_cur) {
            // No feasible ascent left at machine resolution.
            out.report.converged = resid <= 1e-5;
            break;
        }
        delta_trial = backtracked ? std::max(step0, delta)
                                  : std::min(delta_cap, 2.0 * delta_trial);

        const double move = (next - r).norm();
        r = next;
        out.report.objective_trace.push_back(e_next);
        const double diff = e_next - e_cur;
        e_cur = e_next;

        if (std::abs(diff) < cfg.tol || move <= 1e-14 * (1.0 + r.norm())) {
            // Objective has stalled; require projected-gradient stationarity
            // before declaring convergence.
            const CMatrix probe = project_covariance(r + step0 * gradient(problem, r),
                                                     problem.p_tx, problem.eirp);
            const double kkt = (probe - r).norm() / step0;
            if (kkt <= 1e-6 * std::max(1.0, gradient(problem, r).norm()) || move == 0.0) {
                out.report.converged = true;
                ++it;
                break;
            }
        }
    }

    out.report.outer_iterations = it;
    out.report.final_objective = e_cur;
    out.R_x = r;
    const CMatrix probe = project_covariance(r + step0 * gradient(problem, r), problem.p_tx,
                                             problem.eirp);
    out.kkt_residual = (probe - r).norm() / step0;
    return out;
}

} // namespace jcas
