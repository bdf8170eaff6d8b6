// SPDX-License-Identifier: Apache-2.0
//
// jcas-pareto: joint communication and sensing beamforming library
// Copyright (c) 2026 the jcas-pareto authors

#ifndef JCAS_DUALITY_HPP
#define JCAS_DUALITY_HPP

#include <vector>

#include "jcas/channel_model.hpp"

namespace jcas {

/// Scalar uplink powers Q_i (users have one antenna) plus the encoding order
/// under which the MAC<->BC correspondence is taken. order[t] is the user
/// processed at position t; the default is ascending user index.
struct UplinkSolution {
    std::vector<double> q;
    std::vector<int> order;

    static std::vector<int> identity_order(int k);
};

/// Per-user downlink covariances from the MAC->BC transform. Each R_i is rank
/// one by construction; R_x is their sum; rates are the per-user dirty-paper
/// terms in bits under the solution's encoding order.
struct DownlinkCovariances {
    std::vector<CMatrix> R;
    CMatrix R_x;
    std::vector<double> per_user_rate_bits;
};

/// Intermediates of the user-by-user transform, kept for diagnostics and for
/// the sensing gains s_i = c_i M c_i^H used by the multiuser solver.
struct BlockCoordState {
    std::vector<CMatrix> T;  // T_i = I + sum_{later l} g_l q_l g_l^H
    std::vector<double> S;   // S_i = 1 + g_i^H (sum_{earlier l} R_l) g_i
    std::vector<CVector> f;  // unit vectors, largest entry rotated real-positive
    std::vector<CVector> c;  // c_i^H columns; R_i = q_i * c_i^H c_i
};

/// Numerical failure of the transform (ill-conditioned T_i).
class TransformError : public std::runtime_error {
  public:
    explicit TransformError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Channels scaled by 1/sigma_c so every identity-plus-Gram formula carries
/// an implicit unit noise.
std::vector<CVector> normalized_channels(const ChannelSet& cs);

/// log2 det(I + sum_i g_i q_i g_i^H), bits.
double mac_sum_rate(const ChannelSet& cs, const UplinkSolution& up);

/// Dirty-paper sum rate of explicit covariances under the given order; also
/// fills per-user terms when per_user != nullptr.
double bc_sum_rate(const ChannelSet& cs, const DownlinkCovariances& dl,
                   const std::vector<int>& order, std::vector<double>* per_user = nullptr);

/// h_ei = A_M^{-1/2} g_i with A_M = I + sum_{j != i} g_j q_j g_j^H.
CVector effective_channel(const ChannelSet& cs, const UplinkSolution& up, int user);

/// User-by-user MAC->BC covariance transform. Preserves the sum power and the
/// per-user rates. Throws TransformError when some T_i has condition number
/// beyond 1e12.
std::pair<DownlinkCovariances, BlockCoordState> mac_to_bc(const ChannelSet& cs,
                                                          const UplinkSolution& up);

/// Hermitian inverse square root by eigendecomposition, eigenvalues clamped
/// at 1e-14 below which the matrix is treated as singular.
CMatrix hermitian_inv_sqrt(const CMatrix& m);

/// Deterministic phase convention: rotates v so its largest-magnitude entry
/// is real positive.
CVector fix_phase(const CVector& v);

} // namespace jcas

#endif
