// SPDX-License-Identifier: Apache-2.0
//
// jcas-pareto: joint communication and sensing beamforming library
// Copyright (c) 2026 the jcas-pareto authors

#ifndef JCAS_SOLVER_MULTIUSER_HPP
#define JCAS_SOLVER_MULTIUSER_HPP

#include <optional>

#include "jcas/duality.hpp"
#include "jcas/solver_report.hpp"

namespace jcas {

/// Weighted multiuser design problem: maximize
///   alpha * tr(M R_x) + (1 - alpha) * sum-rate(bits)
/// over uplink powers on the simplex sum(q) <= p_tx, mapped to downlink
/// covariances through the MAC->BC transform.
struct MultiuserProblem {
    ChannelSet channels;
    SensingOperators ops;
    double p_tx = 1.0;
    double alpha = 0.0;

    MultiuserProblem(ChannelSet cs, SensingOperators sensing, double power, double weight);
};

struct MultiuserResult {
    UplinkSolution uplink;
    DownlinkCovariances downlink;
    CMatrix r0;            // dedicated sensing covariance; zero except for the baseline
    double beta = 0.0;     // power-budget multiplier
    double mi_bits = 0.0;
    double fi = 0.0;       // tr(M (R_x + r0))
    SolverReport report;

    double power_used() const;
    double weighted_objective(double alpha) const { return alpha * fi + (1.0 - alpha) * mi_bits; }
};

struct FixedBetaResult {
    UplinkSolution uplink;
    double total_power = 0.0;
    bool beta_too_small = false; // Lagrangian unbounded at this beta
    bool converged = false;
    int passes = 0;
    std::vector<double> lagrangian_trace; // dual Lagrangian after each pass
};

/// Closed-form water-filling update for one user at multiplier beta, with
/// the sensing gain s_i = c_i M c_i^H and effective channel taken from the
/// current state. Empty when beta <= alpha * s_i (Lagrangian unbounded).
std::optional<double> per_user_update(const BlockCoordState& state, const ChannelSet& cs,
                                      const UplinkSolution& up, int user, double alpha,
                                      double beta, const CMatrix& M);

/// One Gauss-Seidel sweep over users in up.order: effective channel and c_i
/// are refreshed before every user update. Empty on beta_too_small.
std::optional<UplinkSolution> block_coordinate_pass(const MultiuserProblem& problem,
                                                    const UplinkSolution& up, double beta);

/// Iterates block_coordinate_pass from q = 0 to a fixed point
/// (max |dq| < 1e-9, at most 500 passes).
FixedBetaResult solve_fixed_beta(const MultiuserProblem& problem, double beta);

struct FindBetaResult {
    double beta = 0.0;
    FixedBetaResult at_beta;
    int bisections = 0;
    bool budget_met = false; // |total_power - p_tx| <= 1e-6 * p_tx
};

/// Bisection on beta against the total power spent by solve_fixed_beta. The
/// power curve can jump across a critical beta (the sensing gains feed back
/// into the water levels); in that case the feasible-side solution is
/// returned with budget_met = false and solve_multiuser completes the budget
/// in its coordinate-polish phase. Throws std::runtime_error when no upper
/// bracket exists after 200 doublings.
FindBetaResult find_beta(const MultiuserProblem& problem);

/// Exact weighted objective of an uplink power vector (through the
/// transform): alpha * tr(M R_x(q)) + (1-alpha) * mac_sum_rate(q).
double uplink_weighted_objective(const MultiuserProblem& problem, const UplinkSolution& up);

/// Full solve: the dual phase (find_beta), then exact block-coordinate polish
/// (pairwise power transfers with 1-D line maximization of the true
/// objective) over a small candidate set (dual solution, single-user
/// vertices, uniform split). Returns the best candidate mapped through
/// mac_to_bc.
MultiuserResult solve_multiuser(const MultiuserProblem& problem);

/// K+1-beam heuristic baseline: a dedicated sensing beam R_0 along the top
/// eigenvector of M carrying rho * p_tx, communication solved at alpha = 0
/// with the remaining budget; best rho over {1/g, ..., (g-1)/g}.
MultiuserResult solve_suboptimal_baseline(const MultiuserProblem& problem, int power_grid_size);

} // namespace jcas

#endif
