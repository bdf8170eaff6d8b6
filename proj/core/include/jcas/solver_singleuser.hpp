// SPDX-License-Identifier: Apache-2.0
//
// jcas-pareto: joint communication and sensing beamforming library
// Copyright (c) 2026 the jcas-pareto authors

#ifndef JCAS_SOLVER_SINGLEUSER_HPP
#define JCAS_SOLVER_SINGLEUSER_HPP

#include <vector>

#include "jcas/array_sensing.hpp"
#include "jcas/solver_report.hpp"

namespace jcas {

/// Single-user design problem: maximize
///   alpha * tr(M R_x) + (1 - alpha) * log2(1 + tr(K R_x))
/// over Hermitian PSD R_x with tr(R_x) <= p_tx and R_x <= eirp * I,
/// where K = h h^H / sigma_c2.
struct SingleUserProblem {
    CVector h;
    double sigma_c2 = 1.0;
    SensingOperators ops;
    double p_tx = 1.0;
    double eirp = 1.0; // per-eigenvalue cap; eirp * n_tx < p_tx just means the
                       // trace budget can never bind
    double alpha = 0.0;
    CMatrix K_mat;     // h h^H / sigma_c2, built at construction

    SingleUserProblem(CVector h_in, double sigma2, SensingOperators sensing, double power,
                      double eirp_cap, double weight);
};

struct PgdConfig {
    double step_init = 0.0; // 0 = auto: 1 / (2a||M|| + 2(1-a)||K||/ln2 + eps)
    int max_iters = 5000;
    double tol = 1e-9;           // absolute stop on the objective increment
    double backtrack_factor = 0.5;
    double armijo_c = 1e-4;
};

/// Projection of a (possibly signed) spectrum onto {0 <= lambda <= eirp,
/// sum lambda <= p_tx}: lambda_i = clamp(sigma_i - mu, 0, eirp) with mu the
/// smallest nonnegative multiplier meeting the trace budget.
struct ProjectionResult {
    Eigen::VectorXd lambdas;
    double mu = 0.0;
    std::vector<int> active_upper; // entries clamped at eirp
    std::vector<int> active_lower; // entries clamped at 0
};

/// All KKT residuals of the spectral projection (stationarity, primal and
/// dual feasibility, complementary slackness); every entry should be ~0.
struct ProjectionKkt {
    double stationarity = 0.0;         // ||lambda - sigma - y + x + mu|| (max norm)
    double trace_complementarity = 0.0; // |mu * (sum lambda - p_tx)|
    double upper_complementarity = 0.0; // |tr X^H (Lambda - eirp I)|
    double lower_complementarity = 0.0; // |tr Y^H Lambda|
    double primal_budget = 0.0;         // max(0, sum lambda - p_tx)
    double dual_feasibility = 0.0;      // max(0, -mu, -min x, -min y)
    double box = 0.0;                   // violation of 0 <= lambda <= eirp

    double max_residual() const;
};

ProjectionResult project_spectrum(const Eigen::VectorXd& sigma, double p_tx, double eirp);

ProjectionKkt projection_kkt(const Eigen::VectorXd& sigma, const ProjectionResult& proj,
                             double p_tx, double eirp);

double objective(const SingleUserProblem& problem, const CMatrix& R_x);

/// Hermitian ascent direction G with d/dt objective(R + t D) = tr(G D) for
/// Hermitian D: G = alpha M + ((1-alpha)/ln 2) K / (1 + tr(K R_x)). (The
/// printed form carries a Wirtinger factor 2; the finite-difference contract
/// above fixes the constant to 1.)
CMatrix gradient(const SingleUserProblem& problem, const CMatrix& R_x);

/// Projection of a Hermitian matrix onto the feasible set: eigendecompose,
/// spectrum sorted non-increasing, project_spectrum, recompose in the same
/// eigenbasis.
CMatrix project_covariance(const CMatrix& m, double p_tx, double eirp);

struct PgdResult {
    CMatrix R_x;
    SolverReport report;
    double kkt_residual = 0.0; // ||Pi(R + d G) - R||_F / d at the returned point
};

PgdResult pgd_solve(const SingleUserProblem& problem, const PgdConfig& cfg = {});

} // namespace jcas

#endif
