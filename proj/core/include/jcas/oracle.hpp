// SPDX-License-Identifier: Apache-2.0
//
// jcas-pareto: joint communication and sensing beamforming library
// Copyright (c) 2026 the jcas-pareto authors

#ifndef JCAS_ORACLE_HPP
#define JCAS_ORACLE_HPP

#include <cstdint>
#include <functional>

#include "jcas/solver_multiuser.hpp"
#include "jcas/solver_singleuser.hpp"

// Deliberately slow, simple verifiers used by tests and the `verify` CLI
// command. They share domain types with the solvers but never the solver
// code paths: the multiuser oracle evaluates the MAC->BC covariances through
// plain linear solves (no square roots, no phase conventions), and the
// Monte-Carlo Fisher estimate works from the radar likelihood alone.

namespace jcas {
namespace oracle {

struct OracleBudget {
    long max_grid_points = 20'000'000;
    long max_mc_samples = 2'000'000;
    std::uint64_t rng_seed = 1;
};

/// Central finite difference of a scalar matrix functional along a Hermitian
/// direction; step_h <= 0 selects the default h = 1e-6 * (1 + ||R||_F).
double fd_gradient(const std::function<double(const CMatrix&)>& objective, const CMatrix& R,
                   const CMatrix& direction, double step_h = 0.0);

/// Empirical Fisher information of [theta_r, gamma_r, gamma_r*] from
/// score-function outer products: per sample, draw x ~ CN(0, R_x) (known to
/// the receiver) and fresh noise z, form the likelihood scores, and average
/// conj(s) s^T. Converges to the analytic Fisher matrix.
Eigen::Matrix3cd mc_fisher(const ArrayConfig& array, const Target& tgt, const CMatrix& R_x,
                           long n_samples, std::uint64_t seed);

struct GridOptimum {
    std::vector<double> q;
    double objective = 0.0;
    long evaluated = 0;
};

/// Exhaustive evaluation of the weighted objective over the discretized
/// power simplex sum(q) <= p_tx, K <= 3, grid <= 300 points per axis.
/// Throws when the point count exceeds budget.max_grid_points.
GridOptimum simplex_grid_opt(const MultiuserProblem& problem, int grid_per_axis,
                             const OracleBudget& budget = {});

/// True when no random feasible spectrum among n_samples draws is closer to
/// sigma than the projection output (beyond 1e-12).
bool feasible_sampler_projection_check(const Eigen::VectorXd& sigma, double p_tx, double eirp,
                                       long n_samples, std::uint64_t seed);

} // namespace oracle
} // namespace jcas

#endif
