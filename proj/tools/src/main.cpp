// SPDX-License-Identifier: Apache-2.0
//
// jcas-pareto: joint communication and sensing beamforming library
// Copyright (c) 2026 the jcas-pareto authors

#include <iostream>

#include <CLI11.hpp>

#include <jcas/channel_model.hpp>

#include "commands.hpp"

using namespace jcas_cli;

int main(int argc, char** argv) {
    CLI::App app{"Pareto boundaries between communication sum rate and sensing Fisher "
                 "information for a joint MIMO base station"};
    app.require_subcommand(1);

    std::string config_path;
    std::vector<std::string> overrides;
    std::string out_dir;
    std::string alphas_csv;
    std::uint64_t seed_flag = 0;
    bool seed_given = false;
    bool strict = false;
    app.add_option("--config", config_path, "JSON configuration file");
    app.add_option("--set", overrides, "override a dotted config path, e.g. sweep.k=[1,4]");
    app.add_option("--out", out_dir, "output directory (default $JCAS_OUT_DIR or .)");
    app.add_option("--alphas", alphas_csv, "comma-separated alpha grid, e.g. 0,0.5,1");
    app.add_option("--seed", seed_flag, "override the channel seed")->each([&](const std::string&) {
        seed_given = true;
    });
    app.add_flag("--strict", strict, "exit 2 when any solve fails to converge");

    auto* channels = app.add_subcommand("channels", "channel realization utilities");
    channels->fallthrough();
    channels->require_subcommand(1);
    std::string channels_out = "channels.json";
    auto* gen = channels->add_subcommand("gen", "generate and persist a channel realization");
    gen->fallthrough();
    gen->add_option("--out-file", channels_out, "channel file path");

    auto* pareto = app.add_subcommand("pareto", "sweep alpha and emit the Pareto results table");
    pareto->fallthrough();

    auto* verify = app.add_subcommand("verify", "run the independent oracle suite");
    verify->fallthrough();
    VerifyBudget budget;
    std::string report_path = "verify_report.json";
    verify->add_option("--only", budget.only, "run one group: fisher|gradient|projection|duality|simplex");
    verify->add_option("--mc-samples", budget.mc_samples, "Monte-Carlo sample budget");
    verify->add_option("--grid", budget.grid_per_axis, "simplex grid points per axis");
    verify->add_option("--instances", budget.instances, "random instances per check");
    verify->add_option("--verify-seed", budget.seed, "oracle RNG seed");
    verify->add_option("--report", report_path, "JSON report path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitValidation;
    }

    try {
        RunConfig cfg = load_config(config_path, overrides);
        if (!out_dir.empty()) cfg.out_dir = out_dir;
        if (!alphas_csv.empty()) cfg.alphas = parse_alpha_csv(alphas_csv);
        if (seed_given) {
            cfg.rng_seed = seed_flag;
            cfg.seed_list = {seed_flag};
        }
        if (strict) cfg.strict = true;

        if (gen->parsed()) {
            const auto files = cmd_channels_gen(cfg, channels_out);
            for (const auto& f : files) std::cout << "wrote " << f << "\n";
            return kExitOk;
        }
        if (pareto->parsed()) {
            const ParetoOutputs out = cmd_pareto(cfg);
            std::cout << "wrote " << out.csv_path << " (" << out.rows << " rows";
            if (out.failed_rows > 0) std::cout << ", " << out.failed_rows << " failed";
            std::cout << ")\n";
            std::cout << "wrote " << out.record_path << "\n";
            if (!out.plot_path.empty()) std::cout << "wrote " << out.plot_path << "\n";
            if (!out.svg_path.empty()) std::cout << "wrote " << out.svg_path << "\n";
            if (cfg.strict && !out.all_converged) {
                std::cerr << "strict mode: at least one solve did not converge\n";
                return kExitNonConvergence;
            }
            return kExitOk;
        }
        if (verify->parsed()) {
            const bool ok = cmd_verify(budget, report_path, std::cout);
            std::cout << (ok ? "verification passed" : "verification FAILED") << ", report at "
                      << report_path << "\n";
            return ok ? kExitOk : kExitValidation;
        }
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const std::invalid_argument& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const jcas::ChannelFileError& e) {
        std::cerr << "channel file error: " << e.what() << "\n";
        return kExitIo;
    } catch (const std::ios_base::failure& e) {
        std::cerr << "I/O error: " << e.what() << "\n";
        return kExitIo;
    } catch (const std::runtime_error& e) {
        const std::string msg = e.what();
        const bool io_like = msg.find("cannot open") != std::string::npos ||
                             msg.find("write failed") != std::string::npos;
        std::cerr << (io_like ? "I/O error: " : "error: ") << msg << "\n";
        return io_like ? kExitIo : kExitValidation;
    }
    return kExitOk;
}
