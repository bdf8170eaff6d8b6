// SPDX-License-Identifier: Apache-2.0
//
// jcas-pareto: joint communication and sensing beamforming library
// Copyright (c) 2026 the jcas-pareto authors

#include "config.hpp"

#include <cstdlib>
#include <fstream>

#include <json.hpp>

#include <jcas/units.hpp>

namespace jcas_cli {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) {
    throw ConfigError(path + ": " + what);
}

double as_number(const json& j, const std::string& path) {
    if (!j.is_number()) fail(path, "expected a number, got " + std::string(j.type_name()));
    return j.get<double>();
}

int as_int(const json& j, const std::string& path) {
    if (!j.is_number_integer()) fail(path, "expected an integer, got " + std::string(j.type_name()));
    return j.get<int>();
}

std::string as_string(const json& j, const std::string& path) {
    if (!j.is_string()) fail(path, "expected a string, got " + std::string(j.type_name()));
    return j.get<std::string>();
}

template <typename T, typename F>
std::vector<T> as_list(const json& j, const std::string& path, F&& convert) {
    std::vector<T> out;
    if (j.is_array()) {
        int idx = 0;
        for (const auto& item : j) out.push_back(convert(item, path + "[" + std::to_string(idx++) + "]"));
    } else {
        out.push_back(convert(j, path));
    }
    if (out.empty()) fail(path, "list must not be empty");
    return out;
}

void apply_object(RunConfig& cfg, const json& root);

void apply_entry(RunConfig& cfg, const std::string& path, const json& v) {
    const auto num = [&](const json& j, const std::string& p) { return as_number(j, p); };
    const auto integer = [&](const json& j, const std::string& p) { return as_int(j, p); };
    const auto u64 = [&](const json& j, const std::string& p) -> std::uint64_t {
        if (!j.is_number_integer() && !j.is_number_unsigned())
            fail(p, "expected an integer seed, got " + std::string(j.type_name()));
        return j.get<std::uint64_t>();
    };

    if (path == "array.spacing_over_wavelength") cfg.spacing_over_wavelength = as_number(v, path);
    else if (path == "target.theta_r_rad") cfg.theta_r_rad = as_number(v, path);
    else if (path == "target.gamma_r") {
        if (!v.is_array() || v.size() != 2) fail(path, "expected [re, im]");
        cfg.gamma_r = jcas::cx(as_number(v[0], path), as_number(v[1], path));
    } else if (path == "target.sigma_r2_dbm") cfg.sigma_r2_dbm = as_number(v, path);
    else if (path == "channel.n_paths") cfg.n_paths = as_int(v, path);
    else if (path == "channel.pathloss_exponent") cfg.pathloss_exponent = as_number(v, path);
    else if (path == "channel.ref_distance_m") cfg.ref_distance_m = as_number(v, path);
    else if (path == "channel.ref_loss") cfg.ref_loss = as_number(v, path);
    else if (path == "channel.user_distance_m") cfg.user_distance_m = as_number(v, path);
    else if (path == "channel.rng_seed") cfg.rng_seed = u64(v, path);
    else if (path == "channel.sigma_c2_dbm") cfg.sigma_c2_dbm = as_number(v, path);
    else if (path == "channel.pathloss_convention") cfg.pathloss_convention = as_string(v, path);
    else if (path == "sweep.scenario") cfg.scenario = as_string(v, path);
    else if (path == "sweep.alphas") cfg.alphas = as_list<double>(v, path, num);
    else if (path == "sweep.alpha_count") cfg.alpha_count = as_int(v, path);
    else if (path == "sweep.k") cfg.k_list = as_list<int>(v, path, integer);
    else if (path == "sweep.n_tx") cfg.n_tx_list = as_list<int>(v, path, integer);
    else if (path == "sweep.n_rx") cfg.n_rx_list = as_list<int>(v, path, integer);
    else if (path == "sweep.p_tx_dbm") cfg.p_tx_dbm_list = as_list<double>(v, path, num);
    else if (path == "sweep.eirp_dbm") cfg.eirp_dbm_list = as_list<double>(v, path, num);
    else if (path == "sweep.seed") cfg.seed_list = as_list<std::uint64_t>(v, path, u64);
    else if (path == "sweep.channel_file") cfg.channel_file = as_string(v, path);
    else if (path == "sweep.baseline_power_grid") cfg.baseline_power_grid = as_int(v, path);
    else if (path == "pgd.step_init") cfg.pgd.step_init = as_number(v, path);
    else if (path == "pgd.max_iters") cfg.pgd.max_iters = as_int(v, path);
    else if (path == "pgd.tol") cfg.pgd.tol = as_number(v, path);
    else if (path == "pgd.backtrack_factor") cfg.pgd.backtrack_factor = as_number(v, path);
    else if (path == "pgd.armijo_c") cfg.pgd.armijo_c = as_number(v, path);
    else if (path == "output.dir") cfg.out_dir = as_string(v, path);
    else if (path == "output.csv") cfg.csv_name = as_string(v, path);
    else if (path == "output.record") cfg.record_name = as_string(v, path);
    else if (path == "output.plot_data") cfg.plot_name = as_string(v, path);
    else if (path == "output.svg") cfg.svg_name = as_string(v, path);
    else if (path == "output.strict") {
        if (!v.is_boolean()) fail(path, "expected a boolean");
        cfg.strict = v.get<bool>();
    } else fail(path, "unknown configuration key");
}

void apply_object(RunConfig& cfg, const json& root) {
    if (!root.is_object()) throw ConfigError("config root: expected a JSON object");
    for (const auto& [section, body] : root.items()) {
        if (!body.is_object())
            fail(section, "expected an object of settings");
        for (const auto& [key, value] : body.items()) apply_entry(cfg, section + "." + key, value);
    }
}

} // namespace

std::string RunConfig::resolved_out_dir() const {
    if (!out_dir.empty()) return out_dir;
    if (const char* env = std::getenv("JCAS_OUT_DIR"); env && *env) return env;
    return ".";
}

jcas::SweepSpec RunConfig::sweep_spec() const {
    jcas::SweepSpec spec;
    if (!alphas.empty()) {
        spec.alphas = alphas;
    } else {
        if (alpha_count < 2) throw ConfigError("sweep.alpha_count: must be >= 2");
        for (int i = 0; i < alpha_count; ++i)
            spec.alphas.push_back(static_cast<double>(i) / (alpha_count - 1));
    }
    spec.scenario = jcas::scenario_from_string(scenario);
    spec.k_list = k_list;
    spec.n_tx_list = n_tx_list;
    spec.n_rx_list = n_rx_list;
    spec.p_tx_dbm_list = p_tx_dbm_list;
    spec.eirp_dbm_list = eirp_dbm_list;
    spec.seed_list = seed_list;
    spec.channel_file = channel_file;
    spec.theta_r = theta_r_rad;
    spec.gamma_r = gamma_r;
    spec.sigma_r2 = jcas::dbm_to_mw(sigma_r2_dbm);
    spec.sigma_c2 = jcas::dbm_to_mw(sigma_c2_dbm);
    spec.n_paths = n_paths;
    spec.pathloss_exponent = pathloss_exponent;
    spec.ref_distance_m = ref_distance_m;
    spec.ref_loss = ref_loss;
    spec.user_distance_m = user_distance_m;
    spec.spacing_over_wavelength = spacing_over_wavelength;
    spec.baseline_power_grid = baseline_power_grid;
    spec.pgd = pgd;
    spec.validate();
    return spec;
}

jcas::ChannelConfig RunConfig::channel_config(int k) const {
    jcas::ChannelConfig cfg;
    cfg.n_users = k;
    cfg.n_paths = n_paths;
    cfg.pathloss_exponent = pathloss_exponent;
    cfg.ref_distance_m = ref_distance_m;
    cfg.ref_loss = ref_loss;
    cfg.user_distances_m.assign(static_cast<std::size_t>(k), user_distance_m);
    cfg.rng_seed = rng_seed;
    cfg.sigma_c2 = jcas::dbm_to_mw(sigma_c2_dbm);
    if (pathloss_convention == "attenuation")
        cfg.pathloss_convention = jcas::PathLossConvention::attenuation;
    else if (pathloss_convention == "printed")
        cfg.pathloss_convention = jcas::PathLossConvention::printed;
    else
        throw ConfigError("channel.pathloss_convention: must be 'attenuation' or 'printed'");
    cfg.validate();
    return cfg;
}

std::string RunConfig::to_json_string() const {
    json j;
    j["array"]["spacing_over_wavelength"] = spacing_over_wavelength;
    j["target"]["theta_r_rad"] = theta_r_rad;
    j["target"]["gamma_r"] = {gamma_r.real(), gamma_r.imag()};
    j["target"]["sigma_r2_dbm"] = sigma_r2_dbm;
    j["channel"]["n_paths"] = n_paths;
    j["channel"]["pathloss_exponent"] = pathloss_exponent;
    j["channel"]["ref_distance_m"] = ref_distance_m;
    j["channel"]["ref_loss"] = ref_loss;
    j["channel"]["user_distance_m"] = user_distance_m;
    j["channel"]["rng_seed"] = rng_seed;
    j["channel"]["sigma_c2_dbm"] = sigma_c2_dbm;
    j["channel"]["pathloss_convention"] = pathloss_convention;
    j["sweep"]["scenario"] = scenario;
    if (!alphas.empty()) j["sweep"]["alphas"] = alphas;
    j["sweep"]["alpha_count"] = alpha_count;
    j["sweep"]["k"] = k_list;
    j["sweep"]["n_tx"] = n_tx_list;
    j["sweep"]["n_rx"] = n_rx_list;
    j["sweep"]["p_tx_dbm"] = p_tx_dbm_list;
    j["sweep"]["eirp_dbm"] = eirp_dbm_list;
    j["sweep"]["seed"] = seed_list;
    j["sweep"]["channel_file"] = channel_file;
    j["sweep"]["baseline_power_grid"] = baseline_power_grid;
    j["pgd"]["step_init"] = pgd.step_init;
    j["pgd"]["max_iters"] = pgd.max_iters;
    j["pgd"]["tol"] = pgd.tol;
    j["pgd"]["backtrack_factor"] = pgd.backtrack_factor;
    j["pgd"]["armijo_c"] = pgd.armijo_c;
    j["output"]["dir"] = out_dir;
    j["output"]["csv"] = csv_name;
    j["output"]["record"] = record_name;
    j["output"]["plot_data"] = plot_name;
    j["output"]["svg"] = svg_name;
    j["output"]["strict"] = strict;
    return j.dump(2);
}

std::vector<double> parse_alpha_csv(const std::string& csv) {
    std::vector<double> out;
    std::size_t pos = 0;
    while (pos <= csv.size()) {
        const std::size_t next = csv.find(',', pos);
        const std::string tok =
            csv.substr(pos, next == std::string::npos ? std::string::npos : next - pos);
        try {
            std::size_t used = 0;
            const double v = std::stod(tok, &used);
            if (used != tok.size()) throw std::invalid_argument(tok);
            out.push_back(v);
        } catch (const std::exception&) {
            throw ConfigError("--alphas: '" + tok + "' is not a number");
        }
        if (next == std::string::npos) break;
        pos = next + 1;
    }
    if (out.empty()) throw ConfigError("--alphas: empty list");
    return out;
}

RunConfig load_config(const std::string& path, const std::vector<std::string>& overrides) {
    RunConfig cfg;
    if (!path.empty()) {
        std::ifstream in(path);
        if (!in) throw ConfigError("cannot open config file " + path);
        json root;
        try {
            in >> root;
        } catch (const json::exception& e) {
            throw ConfigError("config file " + path + " is not valid JSON: " + e.what());
        }
        apply_object(cfg, root);
    }
    for (const std::string& ov : overrides) {
        const auto eq = ov.find('=');
        if (eq == std::string::npos)
            throw ConfigError("override '" + ov + "' must look like key.path=value");
        const std::string key = ov.substr(0, eq);
        const std::string raw = ov.substr(eq + 1);
        json value = json::parse(raw, nullptr, false);
        if (value.is_discarded()) value = raw; // plain strings need no quotes
        apply_entry(cfg, key, value);
    }
    return cfg;
}

} // namespace jcas_cli
