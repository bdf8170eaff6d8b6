// SPDX-License-Identifier: Apache-2.0
//
// jcas-pareto: joint communication and sensing beamforming library
// Copyright (c) 2026 the jcas-pareto authors

#include "jcas/pareto.hpp"

#include <algorithm>

#include "jcas/units.hpp"

namespace jcas {

std::string to_string(Scenario s) {
    switch (s) {
        case Scenario::multiuser: return "multiuser";
        case Scenario::multiuser_suboptimal: return "multiuser_suboptimal";
        case Scenario::singleuser: return "singleuser";
    }
    return "unknown";
}

Scenario scenario_from_string(const std::string& s) {
    if (s == "multiuser") return Scenario::multiuser;
    if (s == "multiuser_suboptimal") return Scenario::multiuser_suboptimal;
    if (s == "singleuser") return Scenario::singleuser;
    throw std::invalid_argument("unknown scenario: " + s);
}

void SweepSpec::validate() const {
    if (alphas.empty()) throw std::invalid_argument("SweepSpec: alphas must be nonempty");
    for (std::size_t i = 0; i < alphas.size(); ++i) {
        if (!(alphas[i] >= 0.0 && alphas[i] <= 1.0))
            throw std::invalid_argument("SweepSpec: alphas must lie in [0, 1]");
        if (i > 0 && alphas[i] < alphas[i - 1])
            throw std::invalid_argument("SweepSpec: alphas must be sorted ascending");
    }
    for (int k : k_list)
        if (k < 1 || k > 8) throw std::invalid_argument("SweepSpec: K must lie in [1, 8]");
    for (int n : n_tx_list)
        if (n < 1 || n > 24) throw std::invalid_argument("SweepSpec: n_tx must lie in [1, 24]");
    for (int n : n_rx_list)
        if (n < 1 || n > 24) throw std::invalid_argument("SweepSpec: n_rx must lie in [1, 24]");
    if (scenario == Scenario::singleuser)
        for (int k : k_list)
            if (k != 1) throw std::invalid_argument("SweepSpec: singleuser scenario requires K = 1");
    if (!channel_file.empty() &&
        (k_list.size() != 1 || n_tx_list.size() != 1 || seed_list.size() != 1))
        throw std::invalid_argument("SweepSpec: a channel file fixes the cell; grids not allowed");
    if (baseline_power_grid < 2)
        throw std::invalid_argument("SweepSpec: baseline_power_grid must be >= 2");
}

namespace {

ChannelSet cell_channels(const SweepSpec& spec, const CellParams& cell, const ArrayConfig& array) {
    if (!spec.channel_file.empty()) return load_channels(spec.channel_file, array.n_tx);
    ChannelConfig cfg;
    cfg.n_users = cell.k;
    cfg.n_paths = spec.n_paths;
    cfg.pathloss_exponent = spec.pathloss_exponent;
    cfg.ref_distance_m = spec.ref_distance_m;
    cfg.ref_loss = spec.ref_loss;
    cfg.user_distances_m.assign(static_cast<std::size_t>(cell.k), spec.user_distance_m);
    cfg.rng_seed = cell.seed;
    cfg.sigma_c2 = spec.sigma_c2;
    return generate_channels(cfg, array);
}

ParetoPoint solve_point(const SweepSpec& spec, const CellParams& cell, const ChannelSet& cs,
                        const SensingOperators& ops, double alpha) {
    ParetoPoint pt;
    pt.alpha = alpha;
    pt.cell = cell;
    pt.channel_hash = cs.config_hash;
    const double p_tx = dbm_to_mw(cell.p_tx_dbm);
    try {
        switch (spec.scenario) {
            case Scenario::multiuser: {
                MultiuserProblem problem(cs, ops, p_tx, alpha);
                MultiuserResult r = solve_multiuser(problem);
                pt.mi_bits = r.mi_bits;
                pt.fi = r.fi;
                pt.power_used = r.power_used();
                pt.report = r.report;
                break;
            }
            case Scenario::multiuser_suboptimal: {
                MultiuserProblem problem(cs, ops, p_tx, alpha);
                MultiuserResult r = solve_suboptimal_baseline(problem, spec.baseline_power_grid);
                pt.mi_bits = r.mi_bits;
                pt.fi = r.fi;
                pt.power_used = r.power_used();
                pt.report = r.report;
                break;
            }
            case Scenario::singleuser: {
                if (cs.n_users() != 1)
                    throw std::invalid_argument("singleuser scenario requires exactly one channel");
                SingleUserProblem problem(cs.h.front(), cs.sigma_c2, ops, p_tx,
                                          dbm_to_mw(cell.eirp_dbm), alpha);
                PgdResult r = pgd_solve(problem, spec.pgd);
                pt.mi_bits = std::log2(1.0 + (problem.K_mat * r.R_x).trace().real());
                pt.fi = (ops.M * r.R_x).trace().real();
                pt.power_used = r.R_x.trace().real();
                pt.report = r.report;
                break;
            }
        }
    } catch (const std::exception& e) {
        pt.ok = false;
        pt.error = e.what();
        pt.report.converged = false;
    }
    return pt;
}

/// Re-select each alpha's point as the best of the cell's solutions under
/// that alpha's weighting; every solution is feasible at every alpha.
void pool_cell(std::vector<ParetoPoint>& pts) {
    std::vector<ParetoPoint> donors;
    for (const ParetoPoint& p : pts)
        if (p.ok) donors.push_back(p);
    if (donors.empty()) return;
    for (ParetoPoint& p : pts) {
        if (!p.ok) continue;
        const ParetoPoint* best = &p;
        double best_v = p.weighted(p.alpha);
        for (const ParetoPoint& d : donors) {
            const double v = d.weighted(p.alpha);
            // exact argmax (ties broken toward higher FI) keeps the selected
            // frontier monotone in alpha
            if (v > best_v || (v == best_v && d.fi > best->fi)) {
                best_v = v;
                best = &d;
            }
        }
        if (best != &p) {
            const double alpha = p.alpha;
            p.mi_bits = best->mi_bits;
            p.fi = best->fi;
            p.power_used = best->power_used;
            p.report = best->report;
            p.alpha = alpha;
        }
    }
}

} // namespace

std::vector<ParetoPoint> run_sweep(const SweepSpec& spec) {
    spec.validate();
    std::vector<ParetoPoint> out;
    for (int k : spec.k_list)
        for (int nt : spec.n_tx_list)
            for (int nr : spec.n_rx_list)
                for (double ptx : spec.p_tx_dbm_list)
                    for (double eirp : spec.eirp_dbm_list)
                        for (std::uint64_t seed : spec.seed_list) {
                            CellParams cell{k, nt, nr, ptx, eirp, seed};
                            const ArrayConfig array(nt, nr, spec.spacing_over_wavelength);
                            const Target tgt(spec.theta_r, spec.gamma_r, spec.sigma_r2);
                            const SensingOperators ops = build_operators(array, tgt);
                            std::vector<ParetoPoint> cell_pts;
                            try {
                                const ChannelSet cs = cell_channels(spec, cell, array);
                                for (double alpha : spec.alphas)
                                    cell_pts.push_back(solve_point(spec, cell, cs, ops, alpha));
                            } catch (const std::exception& e) {
                                for (double alpha : spec.alphas) {
                                    ParetoPoint pt;
                                    pt.alpha = alpha;
                                    pt.cell = cell;
                                    pt.ok = false;
                                    pt.error = e.what();
                                    cell_pts.push_back(pt);
                                }
                            }
                            pool_cell(cell_pts);
                            out.insert(out.end(), cell_pts.begin(), cell_pts.end());
                        }
    return out;
}

FrontierDiagnostics frontier_check(const std::vector<ParetoPoint>& cell_points) {
    FrontierDiagnostics diag;
    const ParetoPoint* prev = nullptr;
    for (const ParetoPoint& p : cell_points) {
        if (!p.ok) continue;
        if (prev) {
            const double fi_tol = 1e-6 * std::max({std::abs(prev->fi), std::abs(p.fi), 1e-300});
            const double mi_tol =
                1e-6 * std::max({std::abs(prev->mi_bits), std::abs(p.mi_bits), 1e-300});
            if (p.fi < prev->fi - fi_tol) {
                diag.monotone = false;
                diag.violations.emplace_back(prev->alpha, p.alpha, "fi");
            }
            if (p.mi_bits > prev->mi_bits + mi_tol) {
                diag.monotone = false;
                diag.violations.emplace_back(prev->alpha, p.alpha, "mi");
            }
        }
        prev = &p;
    }
    return diag;
}

} // namespace jcas
