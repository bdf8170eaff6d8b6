// SPDX-License-Identifier: Apache-2.0
//
// jcas-pareto: joint communication and sensing beamforming library
// Copyright (c) 2026 the jcas-pareto authors

#include "jcas/duality.hpp"

#include <Eigen/Eigenvalues>

namespace jcas {

namespace {

void check_dims(const ChannelSet& cs, const UplinkSolution& up) {
    if (static_cast<int>(up.q.size()) != cs.n_users())
        throw std::invalid_argument("uplink solution size does not match channel set");
    if (static_cast<int>(up.order.size()) != cs.n_users())
        throw std::invalid_argument("encoding order size does not match channel set");
    std::vector<bool> seen(up.order.size(), false);
    for (int u : up.order) {
        if (u < 0 || u >= cs.n_users() || seen[static_cast<std::size_t>(u)])
            throw std::invalid_argument("encoding order is not a permutation");
        seen[static_cast<std::size_t>(u)] = true;
    }
    for (double qi : up.q)
        if (!(qi >= 0.0)) throw std::invalid_argument("uplink powers must be nonnegative");
}

} // namespace

std::vector<int> UplinkSolution::identity_order(int k) {
    std::vector<int> order(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) order[static_cast<std::size_t>(i)] = i;
    return order;
}

std::vector<CVector> normalized_channels(const ChannelSet& cs) {
    const double inv_sigma = 1.0 / std::sqrt(cs.sigma_c2);
    std::vector<CVector> g;
    g.reserve(cs.h.size());
    for (const CVector& h : cs.h) g.push_back(inv_sigma * h);
    return g;
}

double mac_sum_rate(const ChannelSet& cs, const UplinkSolution& up) {
    check_dims(cs, up);
    const auto g = normalized_channels(cs);
    const int nt = cs.n_tx();
    CMatrix Z = CMatrix::Identity(nt, nt);
    for (std::size_t i = 0; i < g.size(); ++i) Z += up.q[i] * (g[i] * g[i].adjoint());
    // log2 det via LDLT of the Hermitian positive definite Z
    Eigen::SelfAdjointEigenSolver<CMatrix> es(Z, Eigen::EigenvaluesOnly);
    double bits = 0.0;
    for (Eigen::Index k = 0; k < es.eigenvalues().size(); ++k)
        bits += std::log2(std::max(es.eigenvalues()(k), 1e-300));
    return bits;
}

double bc_sum_rate(const ChannelSet& cs, const DownlinkCovariances& dl,
                   const std::vector<int>& order, std::vector<double>* per_user) {
    const auto g = normalized_channels(cs);
    const int k = cs.n_users();
    if (static_cast<int>(dl.R.size()) != k)
        throw std::invalid_argument("bc_sum_rate: covariance count does not match channel set");
    if (per_user) per_user->assign(static_cast<std::size_t>(k), 0.0);
    const int nt = cs.n_tx();
    CMatrix acc = CMatrix::Zero(nt, nt);
    double total = 0.0;
    for (int t = 0; t < k; ++t) {
        const int i = order.at(static_cast<std::size_t>(t));
        const double den = 1.0 + (g[static_cast<std::size_t>(i)].adjoint() * acc *
                                  g[static_cast<std::size_t>(i)])(0).real();
        acc += dl.R[static_cast<std::size_t>(i)];
        const double num = 1.0 + (g[static_cast<std::size_t>(i)].adjoint() * acc *
                                  g[static_cast<std::size_t>(i)])(0).real();
        const double rate = std::log2(num / den);
        if (per_user) (*per_user)[static_cast<std::size_t>(i)] = rate;
        total += rate;
    }
    return total;
}

CVector effective_channel(const ChannelSet& cs, const UplinkSolution& up, int user) {
    check_dims(cs, up);
    const auto g = normalized_channels(cs);
    const int nt = cs.n_tx();
    CMatrix A_M = CMatrix::Identity(nt, nt);
    for (int j = 0; j < cs.n_users(); ++j)
        if (j != user) A_M += up.q[static_cast<std::size_t>(j)] *
                              (g[static_cast<std::size_t>(j)] * g[static_cast<std::size_t>(j)].adjoint());
    return hermitian_inv_sqrt(A_M) * g[static_cast<std::size_t>(user)];
}

CMatrix hermitian_inv_sqrt(const CMatrix& m) {
    Eigen::SelfAdjointEigenSolver<CMatrix> es(m);
    Eigen::VectorXd inv_sqrt = es.eigenvalues();
    for (Eigen::Index i = 0; i < inv_sqrt.size(); ++i)
        inv_sqrt(i) = 1.0 / std::sqrt(std::max(inv_sqrt(i), 1e-14));
    return es.eigenvectors() * inv_sqrt.asDiagonal() * es.eigenvectors().adjoint();
}

CVector fix_phase(const CVector& v) {
    Eigen::Index imax = 0;
    double best = -1.0;
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        const double a = std::abs(v(i));
        if (a > best) {
            best = a;
            imax = i;
        }
    }
    if (best == 0.0) return v;
    const cx rot = std::conj(v(imax)) / std::abs(v(imax));
    return rot * v;
}

std::pair<DownlinkCovariances, BlockCoordState> mac_to_bc(const ChannelSet& cs,
                                                          const UplinkSolution& up) {
    check_dims(cs, up);
    const auto g = normalized_channels(cs);
    const int k = cs.n_users();
    const int nt = cs.n_tx();

    DownlinkCovariances dl;
    dl.R.assign(static_cast<std::size_t>(k), CMatrix::Zero(nt, nt));
    BlockCoordState st;
    st.T.assign(static_cast<std::size_t>(k), CMatrix());
    st.S.assign(static_cast<std::size_t>(k), 1.0);
    st.f.assign(static_cast<std::size_t>(k), CVector());
    st.c.assign(static_cast<std::size_t>(k), CVector());

    // Suffix interference matrices: T at position t sees users later in the order.
    CMatrix suffix = CMatrix::Identity(nt, nt);
    std::vector<CMatrix> T_of_pos(static_cast<std::size_t>(k));
    for (int t = k - 1; t >= 0; --t) {
        T_of_pos[static_cast<std::size_t>(t)] = suffix;
        const int u = up.order[static_cast<std::size_t>(t)];
        suffix += up.q[static_cast<std::size_t>(u)] *
                  (g[static_cast<std::size_t>(u)] * g[static_cast<std::size_t>(u)].adjoint());
    }

    CMatrix r_prefix = CMatrix::Zero(nt, nt);
    for (int t = 0; t < k; ++t) {
        const int i = up.order[static_cast<std::size_t>(t)];
        const CMatrix& T = T_of_pos[static_cast<std::size_t>(t)];
        Eigen::SelfAdjointEigenSolver<CMatrix> es(T);
        const double cond = es.eigenvalues()(es.eigenvalues().size() - 1) /
                            std::max(es.eigenvalues()(0), 1e-300);
        if (!(cond < 1e12))
            throw TransformError("mac_to_bc: T_" + std::to_string(i) +
                                 " condition number " + std::to_string(cond) + " exceeds 1e12");
        Eigen::VectorXd inv_sqrt = es.eigenvalues();
        for (Eigen::Index e = 0; e < inv_sqrt.size(); ++e)
            inv_sqrt(e) = 1.0 / std::sqrt(std::max(inv_sqrt(e), 1e-14));
        const CMatrix T_mh = es.eigenvectors() * inv_sqrt.asDiagonal() * es.eigenvectors().adjoint();

        const double S = 1.0 + std::max(0.0, (g[static_cast<std::size_t>(i)].adjoint() * r_prefix *
                                              g[static_cast<std::size_t>(i)])(0).real());
        const CVector v = std::sqrt(S) * (T_mh * g[static_cast<std::size_t>(i)]);
        const CVector f = fix_phase(v / v.norm());
        const CVector c_h = std::sqrt(S) * (T_mh * f); // c_i^H as a column

        dl.R[static_cast<std::size_t>(i)] = up.q[static_cast<std::size_t>(i)] * (c_h * c_h.adjoint());
        r_prefix += dl.R[static_cast<std::size_t>(i)];

        st.T[static_cast<std::size_t>(i)] = T;
        st.S[static_cast<std::size_t>(i)] = S;
        st.f[static_cast<std::size_t>(i)] = f;
        st.c[static_cast<std::size_t>(i)] = c_h;
    }
    dl.R_x = r_prefix;
    bc_sum_rate(cs, dl, up.order, &dl.per_user_rate_bits);
    return {std::move(dl), std::move(st)};
}

} // namespace jcas
