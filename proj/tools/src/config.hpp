// SPDX-License-Identifier: Apache-2.0
//
// jcas-pareto: joint communication and sensing beamforming library
// Copyright (c) 2026 the jcas-pareto authors

#ifndef JCAS_TOOLS_CONFIG_HPP
#define JCAS_TOOLS_CONFIG_HPP

#include <stdexcept>
#include <string>
#include <vector>

#include <jcas/pareto.hpp>

namespace jcas_cli {

/// Configuration problems carry the dotted path of the offending field.
class ConfigError : public std::runtime_error {
  public:
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Fully resolved run configuration. dBm fields are converted to linear mW
/// exactly once, when the SweepSpec / ChannelConfig are materialized.
struct RunConfig {
    // array
    double spacing_over_wavelength = 0.5;

    // target
    double theta_r_rad = 0.0;
    jcas::cx gamma_r{1.0, 0.0};
    double sigma_r2_dbm = 0.0;

    // channel
    int n_paths = 6;
    double pathloss_exponent = 3.2;
    double ref_distance_m = 1.0;
    double ref_loss = 1.0;
    double user_distance_m = 1.0;
    std::uint64_t rng_seed = 1;
    double sigma_c2_dbm = 0.0;
    std::string pathloss_convention = "attenuation";

    // sweep
    std::string scenario = "multiuser";
    std::vector<double> alphas;      // empty means uniform grid of alpha_count
    int alpha_count = 41;
    std::vector<int> k_list{4};
    std::vector<int> n_tx_list{10};
    std::vector<int> n_rx_list{10};
    std::vector<double> p_tx_dbm_list{30.0};
    std::vector<double> eirp_dbm_list{27.78};
    std::vector<std::uint64_t> seed_list{1};
    std::string channel_file;
    int baseline_power_grid = 5;

    // pgd
    jcas::PgdConfig pgd;

    // output
    std::string out_dir; // empty: $JCAS_OUT_DIR or "."
    std::string csv_name = "pareto.csv";
    std::string record_name = "run_record.json";
    std::string plot_name;  // empty: skip
    std::string svg_name;   // empty: skip
    bool strict = false;    // nonzero exit on solver non-convergence

    std::string resolved_out_dir() const;
    jcas::SweepSpec sweep_spec() const;
    jcas::ChannelConfig channel_config(int k) const;

    /// Serialized resolved configuration (for run records and hashing).
    std::string to_json_string() const;
};

/// Loads JSON from path (empty path = all defaults) and applies dotted-path
/// overrides of the form "a.b.c=value" where value parses as JSON when
/// possible. Unknown keys and type mismatches raise ConfigError naming the
/// field.
RunConfig load_config(const std::string& path, const std::vector<std::string>& overrides);

/// "0,0.5,1" -> {0.0, 0.5, 1.0}; used by the --alphas flag.
std::vector<double> parse_alpha_csv(const std::string& csv);

} // namespace jcas_cli

#endif
