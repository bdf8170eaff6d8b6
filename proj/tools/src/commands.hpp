// SPDX-License-Identifier: Apache-2.0
//
// jcas-pareto: joint communication and sensing beamforming library
// Copyright (c) 2026 the jcas-pareto authors

#ifndef JCAS_TOOLS_COMMANDS_HPP
#define JCAS_TOOLS_COMMANDS_HPP

#include <iosfwd>
#include <string>

#include "config.hpp"

namespace jcas_cli {

// Exit codes shared by the CLI surface.
inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitNonConvergence = 2;
inline constexpr int kExitIo = 3;

/// `channels gen`: writes one channel file per (K, n_tx) cell of the sweep
/// grid; out_path names the file for a single-cell grid and a prefix
/// otherwise. Returns the files written.
std::vector<std::string> cmd_channels_gen(const RunConfig& cfg, const std::string& out_path);

struct ParetoOutputs {
    std::string csv_path;
    std::string record_path;
    std::string plot_path; // empty when disabled
    std::string svg_path;  // empty when disabled
    int rows = 0;
    int failed_rows = 0;
    bool all_converged = true;
};

/// `pareto`: runs the configured sweep, writes the CSV results table, the
/// JSON run record and optional plot data. Output bytes are a pure function
/// of the config, apart from the record's timestamp field.
ParetoOutputs cmd_pareto(const RunConfig& cfg);

struct VerifyBudget {
    long mc_samples = 100000;
    int grid_per_axis = 120;
    int instances = 20;
    std::uint64_t seed = 1;
    std::string only; // empty = every group
};

/// `verify`: runs the oracle suite (groups: fisher, gradient, projection,
/// duality, simplex) and writes a JSON report. Returns true when every check
/// passed.
bool cmd_verify(const VerifyBudget& budget, const std::string& report_path, std::ostream& log);

} // namespace jcas_cli

#endif
