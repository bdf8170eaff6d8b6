// SPDX-License-Identifier: Apache-2.0
//
// jcas-pareto: joint communication and sensing beamforming library
// Copyright (c) 2026 the jcas-pareto authors

#ifndef JCAS_CHANNEL_MODEL_HPP
#define JCAS_CHANNEL_MODEL_HPP

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "jcas/array_sensing.hpp"

namespace jcas {

/// Distinguishes data/schema problems in channel files from plain I/O errors.
class ChannelFileError : public std::runtime_error {
  public:
    explicit ChannelFileError(const std::string& msg) : std::runtime_error(msg) {}
};

enum class PathLossConvention {
    attenuation, // P0 * (d/d0)^-eta, the physically meaningful reading
    printed      // P0 * (d/d0)^+eta, literal form for fidelity runs
};

/// Multipath downlink channel model: K single-antenna users, Q_p paths per
/// user, i.i.d. CN(0,1) path gains, path angles uniform on [0, 2*pi), and
/// distance-dependent path loss.
struct ChannelConfig {
    int n_users = 1;                      // K
    int n_paths = 6;                      // Q_p
    double pathloss_exponent = 3.2;       // eta
    double ref_distance_m = 1.0;          // d_0
    double ref_loss = 1.0;                // P_0, linear
    std::vector<double> user_distances_m; // size K; defaults to d_0 everywhere
    std::uint64_t rng_seed = 1;
    double sigma_c2 = 1.0;                // communication noise variance, linear mW
    PathLossConvention pathloss_convention = PathLossConvention::attenuation;

    void validate() const;
    double distance_of(int user) const;
};

/// One channel realization. Vectors are raw (not noise-normalized); the
/// duality layer divides by sigma_c at the point of use. Immutable after
/// generation and safe to share across threads.
struct ChannelSet {
    std::vector<CVector> h; // K vectors of length n_tx
    double sigma_c2 = 1.0;
    std::uint64_t seed = 0;
    std::string config_hash; // hex digest of the generating config

    int n_users() const { return static_cast<int>(h.size()); }
    int n_tx() const { return h.empty() ? 0 : static_cast<int>(h.front().size()); }
};

double path_loss(const ChannelConfig& cfg, double d_m);

/// Deterministic function of (cfg, array): one RNG substream per (user, path).
ChannelSet generate_channels(const ChannelConfig& cfg, const ArrayConfig& array);

/// Deterministic single-channel assembly from explicit path gains and angles;
/// generate_channels draws its randomness and delegates here.
CVector channel_from_paths(const ArrayConfig& array, const std::vector<cx>& gains,
                           const std::vector<double>& angles_rad, double p_loss);

/// Versioned JSON with complex entries as [re, im], an embedded config hash
/// and a checksum over the canonicalized body. Round trips bit-exactly.
void save_channels(const ChannelSet& cs, const ChannelConfig& cfg, const ArrayConfig& array,
                   const std::string& path);

/// expected_n_tx < 0 skips the dimension check.
ChannelSet load_channels(const std::string& path, int expected_n_tx = -1);

/// Canonical hex hash of the generating configuration (part of provenance).
std::string config_digest(const ChannelConfig& cfg, const ArrayConfig& array);

} // namespace jcas

#endif
