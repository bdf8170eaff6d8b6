// SPDX-License-Identifier: Apache-2.0
//
// jcas-pareto: joint communication and sensing beamforming library
// Copyright (c) 2026 the jcas-pareto authors

#ifndef JCAS_PARETO_HPP
#define JCAS_PARETO_HPP

#include <optional>
#include <string>

#include "jcas/solver_multiuser.hpp"
#include "jcas/solver_singleuser.hpp"

namespace jcas {

enum class Scenario { multiuser, multiuser_suboptimal, singleuser };

std::string to_string(Scenario s);
Scenario scenario_from_string(const std::string& s);

/// One grid cell of a sweep. EIRP is only meaningful for the single-user
/// scenario; seed selects the channel realization.
struct CellParams {
    int k = 1;
    int n_tx = 10;
    int n_rx = 10;
    double p_tx_dbm = 30.0;
    double eirp_dbm = 27.78;
    std::uint64_t seed = 1;
};

/// Sweep description: alphas (ascending, in [0,1]) crossed with the named
/// parameter lists. Channels come from an inline seed per cell, or from a
/// channel file (single-cell sweeps only).
struct SweepSpec {
    std::vector<double> alphas;
    Scenario scenario = Scenario::multiuser;
    std::vector<int> k_list{4};
    std::vector<int> n_tx_list{10};
    std::vector<int> n_rx_list{10};
    std::vector<double> p_tx_dbm_list{30.0};
    std::vector<double> eirp_dbm_list{27.78};
    std::vector<std::uint64_t> seed_list{1};
    std::string channel_file; // optional; overrides seeded generation

    // Fixed (non-swept) model parameters.
    double theta_r = 0.0;
    cx gamma_r{1.0, 0.0};
    double sigma_r2 = 1.0;
    double sigma_c2 = 1.0;
    int n_paths = 6;
    double pathloss_exponent = 3.2;
    double ref_distance_m = 1.0;
    double ref_loss = 1.0;
    double user_distance_m = 1.0;
    double spacing_over_wavelength = 0.5;
    int baseline_power_grid = 5; // multiuser_suboptimal only
    PgdConfig pgd;

    void validate() const;
};

struct ParetoPoint {
    double alpha = 0.0;
    double mi_bits = 0.0;
    double fi = 0.0;
    double power_used = 0.0;
    CellParams cell;
    std::string channel_hash;
    SolverReport report;
    bool ok = true;
    std::string error; // set when the point's solve failed

    double weighted(double a) const { return a * fi + (1.0 - a) * mi_bits; }
};

/// Runs the sweep: channels are generated once per cell and reused across
/// alphas, points are solved in deterministic (cell, alpha) order, and within
/// each cell every point is re-selected as the argmax of its own weighted
/// objective over all of the cell's solutions (each solution is feasible at
/// every alpha, so pooling can only improve the frontier).
std::vector<ParetoPoint> run_sweep(const SweepSpec& spec);

struct FrontierDiagnostics {
    bool monotone = true;
    // (alpha_low, alpha_high, metric) triples for each violated adjacent pair
    std::vector<std::tuple<double, double, std::string>> violations;
};

/// Checks FI nondecreasing and MI nonincreasing along ascending alpha within
/// one cell (relative tolerance 1e-6). Failed points are skipped.
FrontierDiagnostics frontier_check(const std::vector<ParetoPoint>& cell_points);

} // namespace jcas

#endif
