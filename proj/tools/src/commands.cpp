// SPDX-License-Identifier: Apache-2.0
//
// jcas-pareto: joint communication and sensing beamforming library
// Copyright (c) 2026 the jcas-pareto authors

#include "commands.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>

#include <json.hpp>

#include <jcas/oracle.hpp>
#include <jcas/rng.hpp>
#include <jcas/units.hpp>

namespace jcas_cli {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

std::string fmt_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string timestamp_utc() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    char buf[64];
    std::tm tm_utc{};
    gmtime_r(&t, &tm_utc);
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
    return buf;
}

std::string cell_id(const jcas::ParetoPoint& p) {
    return "K" + std::to_string(p.cell.k) + "_nt" + std::to_string(p.cell.n_tx) + "_nr" +
           std::to_string(p.cell.n_rx) + "_p" + fmt_double(p.cell.p_tx_dbm) + "_e" +
           fmt_double(p.cell.eirp_dbm) + "_s" + std::to_string(p.cell.seed);
}

void write_svg_scatter(const std::string& path, const std::vector<jcas::ParetoPoint>& points) {
    double fi_max = 1e-12, mi_max = 1e-12;
    for (const auto& p : points) {
        if (!p.ok) continue;
        fi_max = std::max(fi_max, p.fi);
        mi_max = std::max(mi_max, p.mi_bits);
    }
    const int w = 640, h = 480, margin = 50;
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path);
    out << "<svg xmlns='http://www.w3.org/2000/svg' width='" << w << "' height='" << h << "'>\n";
    out << "<rect width='100%' height='100%' fill='white'/>\n";
    out << "<line x1='" << margin << "' y1='" << h - margin << "' x2='" << w - margin << "' y2='"
        << h - margin << "' stroke='black'/>\n";
    out << "<line x1='" << margin << "' y1='" << margin << "' x2='" << margin << "' y2='"
        << h - margin << "' stroke='black'/>\n";
    out << "<text x='" << w / 2 << "' y='" << h - 12 << "' font-size='12'>Fisher information</text>\n";
    out << "<text x='12' y='" << h / 2 << "' font-size='12' transform='rotate(-90 12 " << h / 2
        << ")'>Mutual information (bits)</text>\n";
    for (const auto& p : points) {
        if (!p.ok) continue;
        const double x = margin + (w - 2 * margin) * (p.fi / fi_max);
        const double y = h - margin - (h - 2 * margin) * (p.mi_bits / mi_max);
        out << "<circle cx='" << x << "' cy='" << y << "' r='3' fill='steelblue'/>\n";
    }
    out << "</svg>\n";
}

json complex_vector_json(const jcas::CVector& v) {
    json out = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back({v(i).real(), v(i).imag()});
    return out;
}

json complex_matrix_json(const jcas::CMatrix& m) {
    json out = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back({m(i, j).real(), m(i, j).imag()});
        out.push_back(std::move(row));
    }
    return out;
}

json sensing_json(const jcas::SensingOperators& ops) {
    json out;
    out["a_vec"] = complex_vector_json(ops.a_vec);
    out["b_vec"] = complex_vector_json(ops.b_vec);
    out["a_dot"] = complex_vector_json(ops.a_dot);
    out["b_dot"] = complex_vector_json(ops.b_dot);
    out["A"] = complex_matrix_json(ops.A);
    out["A_dot"] = complex_matrix_json(ops.A_dot);
    out["M"] = complex_matrix_json(ops.M);
    return out;
}

json row_json(const std::string& scenario, const jcas::ParetoPoint& p) {
    json r;
    r["scenario"] = scenario;
    r["k"] = p.cell.k;
    r["n_tx"] = p.cell.n_tx;
    r["n_rx"] = p.cell.n_rx;
    r["p_tx_dbm"] = p.cell.p_tx_dbm;
    r["eirp_dbm"] = p.cell.eirp_dbm;
    r["seed"] = p.cell.seed;
    r["alpha"] = p.alpha;
    r["mi_bits"] = p.mi_bits;
    r["fi"] = p.fi;
    r["power_used"] = p.power_used;
    r["converged"] = p.ok && p.report.converged;
    r["iterations"] = p.report.outer_iterations;
    r["channel_hash"] = p.channel_hash;
    if (!p.ok) r["error"] = p.error;
    return r;
}

struct Check {
    std::string name;
    std::string group;
    bool pass = false;
    double tolerance = 0.0;
    double measured = 0.0;
};

void run_group(std::vector<Check>& checks, const VerifyBudget& b, const std::string& group);

} // namespace

std::vector<std::string> cmd_channels_gen(const RunConfig& cfg, const std::string& out_path) {
    std::vector<std::string> written;
    const bool single = cfg.k_list.size() == 1 && cfg.n_tx_list.size() == 1;
    for (int k : cfg.k_list)
        for (int nt : cfg.n_tx_list) {
            const jcas::ArrayConfig array(nt, nt, cfg.spacing_over_wavelength);
            const jcas::ChannelConfig ccfg = cfg.channel_config(k);
            const jcas::ChannelSet cs = jcas::generate_channels(ccfg, array);
            std::string path = out_path;
            if (!single)
                path += "_K" + std::to_string(k) + "_nt" + std::to_string(nt) + ".json";
            jcas::save_channels(cs, ccfg, array, path);
            written.push_back(path);
        }
    return written;
}

ParetoOutputs cmd_pareto(const RunConfig& cfg) {
    const jcas::SweepSpec spec = cfg.sweep_spec();
    const std::vector<jcas::ParetoPoint> points = jcas::run_sweep(spec);

    const fs::path dir(cfg.resolved_out_dir());
    std::error_code ec;
    fs::create_directories(dir, ec);

    ParetoOutputs out;
    out.rows = static_cast<int>(points.size());

    // results table
    out.csv_path = (dir / cfg.csv_name).string();
    {
        std::ofstream csv(out.csv_path);
        if (!csv) throw std::runtime_error("cannot open " + out.csv_path);
        csv << "scenario,k,n_tx,n_rx,p_tx_dbm,eirp_dbm,seed,alpha,mi_bits,fi,power_used,"
               "converged,iterations\n";
        for (const auto& p : points) {
            if (!p.ok) {
                ++out.failed_rows;
                out.all_converged = false;
            } else if (!p.report.converged) {
                out.all_converged = false;
            }
            csv << cfg.scenario << ',' << p.cell.k << ',' << p.cell.n_tx << ',' << p.cell.n_rx
                << ',' << fmt_double(p.cell.p_tx_dbm) << ',' << fmt_double(p.cell.eirp_dbm) << ','
                << p.cell.seed << ',' << fmt_double(p.alpha) << ',' << fmt_double(p.mi_bits) << ','
                << fmt_double(p.fi) << ',' << fmt_double(p.power_used) << ','
                << ((p.ok && p.report.converged) ? 1 : 0) << ',' << p.report.outer_iterations
                << '\n';
        }
    }

    // run record
    out.record_path = (dir / cfg.record_name).string();
    {
        json record;
        record["format_version"] = 1;
        record["tool"] = "jcas";
        record["timestamp"] = timestamp_utc();
        record["config"] = json::parse(cfg.to_json_string());
        json hashes = json::object();
        for (const auto& p : points) hashes[cell_id(p)] = p.channel_hash;
        record["channel_hashes"] = hashes;
        json sensing = json::object();
        for (int nt : cfg.n_tx_list)
            for (int nr : cfg.n_rx_list) {
                const jcas::ArrayConfig array(nt, nr, cfg.spacing_over_wavelength);
                const jcas::Target tgt(cfg.theta_r_rad, cfg.gamma_r,
                                       jcas::dbm_to_mw(cfg.sigma_r2_dbm));
                sensing["nt" + std::to_string(nt) + "_nr" + std::to_string(nr)] =
                    sensing_json(jcas::build_operators(array, tgt));
            }
        record["sensing_operators"] = sensing;
        json rows = json::array();
        for (const auto& p : points) rows.push_back(row_json(cfg.scenario, p));
        record["rows"] = rows;
        std::ofstream rec(out.record_path);
        if (!rec) throw std::runtime_error("cannot open " + out.record_path);
        rec << record.dump(2) << "\n";
    }

    // plot data: one (fi, mi) polyline per cell, alpha-ordered
    if (!cfg.plot_name.empty()) {
        out.plot_path = (dir / cfg.plot_name).string();
        std::ofstream plot(out.plot_path);
        if (!plot) throw std::runtime_error("cannot open " + out.plot_path);
        plot << "cell,alpha,fi,mi_bits\n";
        for (const auto& p : points) {
            if (!p.ok) continue;
            plot << cell_id(p) << ',' << fmt_double(p.alpha) << ',' << fmt_double(p.fi) << ','
                 << fmt_double(p.mi_bits) << '\n';
        }
    }
    if (!cfg.svg_name.empty()) {
        out.svg_path = (dir / cfg.svg_name).string();
        write_svg_scatter(out.svg_path, points);
    }
    return out;
}

namespace {

void check_fisher(std::vector<Check>& checks, const VerifyBudget& b) {
    const jcas::ArrayConfig array(2, 2, 0.5);
    const jcas::Target tgt(0.4, jcas::cx(0.8, 0.3), 1.0);
    const jcas::SensingOperators ops = jcas::build_operators(array, tgt);
    jcas::SplitMix64 gen(b.seed);
    jcas::CMatrix base(2, 2);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) base(i, j) = gen.next_complex_normal();
    const jcas::CMatrix r = base * base.adjoint();
    const Eigen::Matrix3cd truth = jcas::fisher_matrix(ops, tgt, r).j;
    const Eigen::Matrix3cd est = jcas::oracle::mc_fisher(array, tgt, r, b.mc_samples, b.seed + 1);
    double worst = 0.0;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            if (std::abs(truth(i, j)) <= 1e-6) continue;
            worst = std::max(worst, std::abs(est(i, j) - truth(i, j)) / std::abs(truth(i, j)));
        }
    checks.push_back({"mc_fisher_entrywise", "fisher", worst <= 0.03, 0.03, worst});
    checks.push_back({"fisher_structural_zero", "fisher", truth(1, 2) == jcas::cx(0, 0), 0.0,
                      std::abs(truth(1, 2))});
}

void check_gradient(std::vector<Check>& checks, const VerifyBudget& b) {
    jcas::SplitMix64 gen(b.seed + 2);
    const int nt = 4;
    const jcas::SensingOperators ops =
        jcas::build_operators(jcas::ArrayConfig(nt, nt, 0.5), jcas::Target(0.0, jcas::cx(1, 0), 1.0));
    double worst = 0.0;
    for (int trial = 0; trial < b.instances; ++trial) {
        jcas::ChannelConfig ccfg;
        ccfg.n_users = 1;
        ccfg.rng_seed = b.seed + 100 + static_cast<std::uint64_t>(trial);
        const jcas::ChannelSet cs = jcas::generate_channels(ccfg, jcas::ArrayConfig(nt, nt, 0.5));
        const jcas::SingleUserProblem p(cs.h[0], cs.sigma_c2, ops, 10.0, 20.0, gen.next_double());
        jcas::CMatrix base(nt, nt);
        for (int i = 0; i < nt; ++i)
            for (int j = 0; j < nt; ++j) base(i, j) = gen.next_complex_normal();
        const jcas::CMatrix r = base * base.adjoint();
        const jcas::CMatrix g = jcas::gradient(p, r);
        for (int d = 0; d < 5; ++d) {
            jcas::CMatrix dm(nt, nt);
            for (int i = 0; i < nt; ++i)
                for (int j = 0; j < nt; ++j) dm(i, j) = gen.next_complex_normal();
            const jcas::CMatrix dir = 0.5 * (dm + dm.adjoint());
            const double analytic = (g * dir).trace().real();
            const double fd = jcas::oracle::fd_gradient(
                [&](const jcas::CMatrix& x) { return jcas::objective(p, 0.5 * (x + x.adjoint())); },
                r, dir);
            worst = std::max(worst, std::abs(analytic - fd) / std::max(1.0, std::abs(fd)));
        }
    }
    checks.push_back({"gradient_finite_difference", "gradient", worst <= 1e-5, 1e-5, worst});
}

void check_projection(std::vector<Check>& checks, const VerifyBudget& b) {
    Eigen::VectorXd sigma(4);
    sigma << 0.9, 0.5, 0.2, 0.05;
    const jcas::ProjectionResult hand = jcas::project_spectrum(sigma, 1.0, 0.6);
    Eigen::VectorXd expected(4);
    expected << 0.6, 0.35, 0.05, 0.0;
    const double hand_err =
        std::max((hand.lambdas - expected).cwiseAbs().maxCoeff(), std::abs(hand.mu - 0.15));
    checks.push_back({"projection_hand_example", "projection", hand_err <= 1e-10, 1e-10, hand_err});

    jcas::SplitMix64 gen(b.seed + 3);
    double worst_kkt = 0.0;
    bool dominance = true;
    for (int inst = 0; inst < b.instances; ++inst) {
        const int n = 2 + static_cast<int>(gen.next_u64() % 4);
        Eigen::VectorXd s(n);
        for (int i = 0; i < n; ++i) s(i) = 3.0 * (gen.next_double() - 0.3);
        const double p = 0.5 + 2.0 * gen.next_double();
        const double e = 0.2 + gen.next_double();
        const jcas::ProjectionResult proj = jcas::project_spectrum(s, p, e);
        worst_kkt = std::max(worst_kkt, jcas::projection_kkt(s, proj, p, e).max_residual());
        if (!jcas::oracle::feasible_sampler_projection_check(
                s, p, e, std::min<long>(b.mc_samples, 100000),
                b.seed + 500 + static_cast<std::uint64_t>(inst)))
            dominance = false;
    }
    checks.push_back({"projection_kkt_residuals", "projection", worst_kkt <= 1e-8, 1e-8, worst_kkt});
    checks.push_back({"projection_sampler_dominance", "projection", dominance, 1e-12,
                      dominance ? 0.0 : 1.0});
}

void check_duality(std::vector<Check>& checks, const VerifyBudget& b) {
    jcas::SplitMix64 gen(b.seed + 4);
    double worst_rate = 0.0, worst_power = 0.0;
    for (int inst = 0; inst < b.instances; ++inst) {
        const int k = 1 + static_cast<int>(gen.next_u64() % 4);
        const int nt = std::max(k, 2 + static_cast<int>(gen.next_u64() % 7));
        jcas::ChannelConfig ccfg;
        ccfg.n_users = k;
        ccfg.rng_seed = b.seed + 700 + static_cast<std::uint64_t>(inst);
        const jcas::ChannelSet cs = jcas::generate_channels(ccfg, jcas::ArrayConfig(nt, nt, 0.5));
        jcas::UplinkSolution up;
        up.order = jcas::UplinkSolution::identity_order(k);
        up.q.resize(static_cast<std::size_t>(k));
        double total = 0.0;
        for (double& v : up.q) {
            v = 10.0 * gen.next_double();
            total += v;
        }
        const auto [dl, state] = jcas::mac_to_bc(cs, up);
        const double mac = jcas::mac_sum_rate(cs, up);
        const double bc = jcas::bc_sum_rate(cs, dl, up.order);
        worst_rate = std::max(worst_rate, std::abs(bc - mac) / std::max(1.0, std::abs(mac)));
        worst_power =
            std::max(worst_power, std::abs(dl.R_x.trace().real() - total) / std::max(1.0, total));
    }
    checks.push_back({"duality_rate_conservation", "duality", worst_rate <= 1e-8, 1e-8, worst_rate});
    checks.push_back({"duality_power_conservation", "duality", worst_power <= 1e-8, 1e-8,
                      worst_power});
}

void check_simplex(std::vector<Check>& checks, const VerifyBudget& b) {
    jcas::ChannelConfig ccfg;
    ccfg.n_users = 2;
    ccfg.rng_seed = b.seed + 5;
    const jcas::ChannelSet cs = jcas::generate_channels(ccfg, jcas::ArrayConfig(3, 3, 0.5));
    const jcas::SensingOperators ops =
        jcas::build_operators(jcas::ArrayConfig(3, 3, 0.5), jcas::Target(0.0, jcas::cx(1, 0), 1.0));
    double worst_gap = -1e300;
    for (double alpha : {0.0, 0.5, 1.0}) {
        const jcas::MultiuserProblem problem(cs, ops, 10.0, alpha);
        const jcas::MultiuserResult r = jcas::solve_multiuser(problem);
        const jcas::oracle::GridOptimum grid = jcas::oracle::simplex_grid_opt(problem, b.grid_per_axis);
        worst_gap = std::max(worst_gap, (grid.objective - r.report.final_objective) /
                                            std::max(1.0, std::abs(grid.objective)));
    }
    const double slack = 1e-3;
    checks.push_back({"solver_vs_simplex_grid", "simplex", worst_gap <= slack, slack, worst_gap});
}

void run_group(std::vector<Check>& checks, const VerifyBudget& b, const std::string& group) {
    if (group == "fisher") check_fisher(checks, b);
    else if (group == "gradient") check_gradient(checks, b);
    else if (group == "projection") check_projection(checks, b);
    else if (group == "duality") check_duality(checks, b);
    else if (group == "simplex") check_simplex(checks, b);
    else throw std::invalid_argument("unknown verify group: " + group);
}

} // namespace

bool cmd_verify(const VerifyBudget& budget, const std::string& report_path, std::ostream& log) {
    std::vector<Check> checks;
    const std::vector<std::string> all{"fisher", "gradient", "projection", "duality", "simplex"};
    if (budget.only.empty()) {
        for (const std::string& g : all) run_group(checks, budget, g);
    } else {
        run_group(checks, budget, budget.only);
    }

    bool all_pass = true;
    json report;
    report["checks"] = json::array();
    for (const Check& c : checks) {
        all_pass = all_pass && c.pass;
        log << (c.pass ? "[PASS] " : "[FAIL] ") << c.group << "/" << c.name
            << "  measured=" << fmt_double(c.measured) << " tolerance=" << fmt_double(c.tolerance)
            << "\n";
        json jc;
        jc["name"] = c.name;
        jc["group"] = c.group;
        jc["pass"] = c.pass;
        jc["tolerance"] = c.tolerance;
        jc["measured"] = c.measured;
        report["checks"].push_back(jc);
    }
    report["all_pass"] = all_pass;
    if (!report_path.empty()) {
        std::ofstream out(report_path);
        if (!out) throw std::runtime_error("cannot open " + report_path);
        out << report.dump(2) << "\n";
    }
    return all_pass;
}

} // namespace jcas_cli
