// SPDX-License-Identifier: Apache-2.0
//
// jcas-pareto: joint communication and sensing beamforming library
// Copyright (c) 2026 the jcas-pareto authors

#include "jcas/channel_model.hpp"

#include <fstream>

#include <json.hpp>

#include "jcas/rng.hpp"

namespace jcas {

namespace {

std::uint64_t fnv1a64(const std::string& s) {
    std::uint64_t h = 0xCBF29CE484222325ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001B3ull;
    }
    return h;
}

std::string hex64(std::uint64_t v) {
    static const char* digits = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[i] = digits[v & 0xF];
        v >>= 4;
    }
    return out;
}

nlohmann::json config_to_json(const ChannelConfig& cfg, const ArrayConfig& array) {
    nlohmann::json j;
    j["n_users"] = cfg.n_users;
    j["n_paths"] = cfg.n_paths;
    j["pathloss_exponent"] = cfg.pathloss_exponent;
    j["ref_distance_m"] = cfg.ref_distance_m;
    j["ref_loss"] = cfg.ref_loss;
    std::vector<double> dists;
    for (int i = 0; i < cfg.n_users; ++i) dists.push_back(cfg.distance_of(i));
    j["user_distances_m"] = dists;
    j["sigma_c2"] = cfg.sigma_c2;
    j["pathloss_convention"] =
        cfg.pathloss_convention == PathLossConvention::attenuation ? "attenuation" : "printed";
    j["n_tx"] = array.n_tx;
    j["spacing_over_wavelength"] = array.spacing_over_wavelength;
    return j;
}

} // namespace

void ChannelConfig::validate() const {
    if (n_users < 1) throw std::invalid_argument("ChannelConfig: n_users must be >= 1");
    if (n_paths < 1) throw std::invalid_argument("ChannelConfig: n_paths must be >= 1");
    if (!(ref_distance_m > 0.0)) throw std::invalid_argument("ChannelConfig: ref_distance_m must be > 0");
    if (!(ref_loss > 0.0)) throw std::invalid_argument("ChannelConfig: ref_loss must be > 0");
    if (!(sigma_c2 > 0.0)) throw std::invalid_argument("ChannelConfig: sigma_c2 must be > 0");
    if (!user_distances_m.empty() && static_cast<int>(user_distances_m.size()) != n_users)
        throw std::invalid_argument("ChannelConfig: user_distances_m length must equal n_users");
    for (double d : user_distances_m)
        if (!(d > 0.0)) throw std::invalid_argument("ChannelConfig: user distances must be > 0");
}

double ChannelConfig::distance_of(int user) const {
    if (user_distances_m.empty()) return ref_distance_m;
    return user_distances_m.at(static_cast<std::size_t>(user));
}

double path_loss(const ChannelConfig& cfg, double d_m) {
    if (!(d_m > 0.0)) throw std::invalid_argument("path_loss: distance must be > 0");
    const double ratio = d_m / cfg.ref_distance_m;
    const double sign = cfg.pathloss_convention == PathLossConvention::attenuation ? -1.0 : 1.0;
    return cfg.ref_loss * std::pow(ratio, sign * cfg.pathloss_exponent);
}

CVector channel_from_paths(const ArrayConfig& array, const std::vector<cx>& gains,
                           const std::vector<double>& angles_rad, double p_loss) {
    if (gains.size() != angles_rad.size())
        throw std::invalid_argument("channel_from_paths: gains/angles size mismatch");
    CVector h = CVector::Zero(array.n_tx);
    for (std::size_t q = 0; q < gains.size(); ++q)
        h += gains[q] * steering_vector(array, array.n_tx, angles_rad[q]);
    return std::sqrt(p_loss) * h;
}

ChannelSet generate_channels(const ChannelConfig& cfg, const ArrayConfig& array) {
    cfg.validate();
    ChannelSet cs;
    cs.sigma_c2 = cfg.sigma_c2;
    cs.seed = cfg.rng_seed;
    cs.config_hash = config_digest(cfg, array);
    cs.h.reserve(static_cast<std::size_t>(cfg.n_users));
    for (int i = 0; i < cfg.n_users; ++i) {
        std::vector<cx> gains(static_cast<std::size_t>(cfg.n_paths));
        std::vector<double> angles(static_cast<std::size_t>(cfg.n_paths));
        for (int q = 0; q < cfg.n_paths; ++q) {
            SplitMix64 gen = substream(cfg.rng_seed, static_cast<std::uint64_t>(i),
                                       static_cast<std::uint64_t>(q));
            angles[static_cast<std::size_t>(q)] = 2.0 * M_PI * gen.next_double();
            gains[static_cast<std::size_t>(q)] = gen.next_complex_normal();
        }
        CVector h = channel_from_paths(array, gains, angles, path_loss(cfg, cfg.distance_of(i)));
        if (!h.allFinite() || h.norm() == 0.0)
            throw std::runtime_error("generate_channels: degenerate channel draw");
        cs.h.push_back(std::move(h));
    }
    return cs;
}

std::string config_digest(const ChannelConfig& cfg, const ArrayConfig& array) {
    return hex64(fnv1a64(config_to_json(cfg, array).dump()));
}

void save_channels(const ChannelSet& cs, const ChannelConfig& cfg, const ArrayConfig& array,
                   const std::string& path) {
    nlohmann::json body;
    body["version"] = 1;
    body["seed"] = cs.seed;
    body["config"] = config_to_json(cfg, array);
    body["sigma_c2"] = cs.sigma_c2;
    body["config_hash"] = cs.config_hash;
    nlohmann::json rows = nlohmann::json::array();
    for (const CVector& h : cs.h) {
        nlohmann::json row = nlohmann::json::array();
        for (Eigen::Index n = 0; n < h.size(); ++n)
            row.push_back({h(n).real(), h(n).imag()});
        rows.push_back(std::move(row));
    }
    body["h"] = std::move(rows);

    // checksum over the canonicalized body (sorted keys, shortest floats)
    nlohmann::json file = body;
    file["checksum"] = hex64(fnv1a64(body.dump()));

    std::ofstream out(path);
    if (!out) throw std::runtime_error("save_channels: cannot open " + path);
    out << file.dump(2) << "\n";
    if (!out) throw std::runtime_error("save_channels: write failed for " + path);
}

ChannelSet load_channels(const std::string& path, int expected_n_tx) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("load_channels: cannot open " + path);
    nlohmann::json file;
    try {
        in >> file;
    } catch (const nlohmann::json::exception& e) {
        throw ChannelFileError("load_channels: malformed JSON in " + path + ": " + e.what());
    }
    for (const char* field : {"version", "seed", "config", "h", "checksum"})
        if (!file.contains(field))
            throw ChannelFileError("load_channels: missing field '" + std::string(field) + "' in " +
                                   path);
    if (file["version"].get<int>() != 1)
        throw ChannelFileError("load_channels: unsupported schema version in " + path);
    const std::string checksum = file["checksum"].get<std::string>();
    nlohmann::json body = file;
    body.erase("checksum");
    if (checksum != hex64(fnv1a64(body.dump())))
        throw ChannelFileError("load_channels: checksum mismatch in " + path);

    ChannelSet cs;
    cs.seed = body["seed"].get<std::uint64_t>();
    cs.sigma_c2 = body["sigma_c2"].get<double>();
    cs.config_hash = body["config_hash"].get<std::string>();
    for (const auto& row : body["h"]) {
        CVector h(static_cast<Eigen::Index>(row.size()));
        Eigen::Index n = 0;
        for (const auto& entry : row) {
            if (!entry.is_array() || entry.size() != 2)
                throw ChannelFileError("load_channels: complex entries must be [re, im]");
            h(n++) = cx(entry[0].get<double>(), entry[1].get<double>());
        }
        cs.h.push_back(std::move(h));
    }
    if (cs.h.empty()) throw ChannelFileError("load_channels: no channel vectors in " + path);
    for (const CVector& h : cs.h)
        if (h.size() != cs.h.front().size())
            throw ChannelFileError("load_channels: ragged channel matrix in " + path);
    if (expected_n_tx >= 0 && cs.n_tx() != expected_n_tx)
        throw ChannelFileError("load_channels: file has n_tx=" + std::to_string(cs.n_tx()) +
                               " but the requested array has n_tx=" + std::to_string(expected_n_tx));
    return cs;
}

} // namespace jcas
