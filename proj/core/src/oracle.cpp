// SPDX-License-Identifier: Apache-2.0
//
// jcas-pareto: joint communication and sensing beamforming library
// Copyright (c) 2026 the jcas-pareto authors

#include "jcas/oracle.hpp"

#include <Eigen/Eigenvalues>

#include "jcas/rng.hpp"

namespace jcas {
namespace oracle {

namespace {

CVector draw_cn(SplitMix64& gen, Eigen::Index n) {
    CVector v(n);
    for (Eigen::Index i = 0; i < n; ++i) v(i) = gen.next_complex_normal();
    return v;
}

/// FI of the transform image at uplink powers q, via direct linear solves:
/// R_i = q_i S_i (T_i^{-1} g_i)(T_i^{-1} g_i)^H / (g_i^H T_i^{-1} g_i).
double transform_fi(const std::vector<CVector>& g, const std::vector<double>& q,
                    const CMatrix& M) {
    const int k = static_cast<int>(g.size());
    const int nt = static_cast<int>(g.front().size());
    double fi = 0.0;
    CMatrix r_sum = CMatrix::Zero(nt, nt);
    for (int i = 0; i < k; ++i) {
        if (q[static_cast<std::size_t>(i)] <= 0.0) continue;
        CMatrix t = CMatrix::Identity(nt, nt);
        for (int l = i + 1; l < k; ++l)
            t += q[static_cast<std::size_t>(l)] *
                 (g[static_cast<std::size_t>(l)] * g[static_cast<std::size_t>(l)].adjoint());
        const CVector w = t.fullPivLu().solve(g[static_cast<std::size_t>(i)]); // T^{-1} g
        const double gain = (g[static_cast<std::size_t>(i)].adjoint() * w)(0).real();
        const double s = 1.0 + std::max(0.0, (g[static_cast<std::size_t>(i)].adjoint() * r_sum *
                                              g[static_cast<std::size_t>(i)])(0).real());
        const CMatrix r_i = (q[static_cast<std::size_t>(i)] * s / gain) * (w * w.adjoint());
        fi += (M * r_i).trace().real();
        r_sum += r_i;
    }
    return fi;
}

double logdet_rate_bits(const std::vector<CVector>& g, const std::vector<double>& q) {
    const int nt = static_cast<int>(g.front().size());
    CMatrix z = CMatrix::Identity(nt, nt);
    for (std::size_t i = 0; i < g.size(); ++i)
        if (q[i] > 0.0) z += q[i] * (g[i] * g[i].adjoint());
    const auto lu = z.fullPivLu();
    double bits = 0.0;
    for (Eigen::Index i = 0; i < nt; ++i)
        bits += std::log2(std::abs(lu.matrixLU()(i, i)));
    return bits;
}

} // namespace

double fd_gradient(const std::function<double(const CMatrix&)>& objective, const CMatrix& R,
                   const CMatrix& direction, double step_h) {
    const double h = step_h > 0.0 ? step_h : 1e-6 * (1.0 + R.norm());
    return (objective(R + h * direction) - objective(R - h * direction)) / (2.0 * h);
}

Eigen::Matrix3cd mc_fisher(const ArrayConfig& array, const Target& tgt, const CMatrix& R_x,
                           long n_samples, std::uint64_t seed) {
    const SensingOperators ops = build_operators(array, tgt);
    const Eigen::Index nt = R_x.rows();

    // R_x^{1/2} for transmit draws, negative eigenvalues clipped at zero.
    Eigen::SelfAdjointEigenSolver<CMatrix> es(0.5 * (R_x + R_x.adjoint()));
    Eigen::VectorXd roots = es.eigenvalues();
    for (Eigen::Index i = 0; i < roots.size(); ++i) roots(i) = std::sqrt(std::max(roots(i), 0.0));
    const CMatrix sqrt_r = es.eigenvectors() * roots.asDiagonal() * es.eigenvectors().adjoint();

    const double inv_sr2 = 1.0 / tgt.sigma_r2;
    const double noise_scale = std::sqrt(tgt.sigma_r2);
    Eigen::Matrix3cd acc = Eigen::Matrix3cd::Zero();
    SplitMix64 gen = substream(seed, 0xF15Eull, 0);
    for (long s = 0; s < n_samples; ++s) {
        const CVector x = sqrt_r * draw_cn(gen, nt);
        const CVector z = noise_scale * draw_cn(gen, ops.b_vec.size());
        const CVector ax = ops.A * x;
        const CVector adx = ops.A_dot * x;
        const cx z_adx = (z.adjoint() * adx)(0);
        const cx s_theta(2.0 * inv_sr2 * (tgt.gamma_r * z_adx).real(), 0.0);
        const cx s_gamma = inv_sr2 * (z.adjoint() * ax)(0);
        Eigen::Vector3cd score;
        score << s_theta, s_gamma, std::conj(s_gamma);
        acc += score.conjugate() * score.transpose();
    }
    return acc / static_cast<double>(n_samples);
}

GridOptimum simplex_grid_opt(const MultiuserProblem& problem, int grid_per_axis,
                             const OracleBudget& budget) {
    const int k = problem.channels.n_users();
    if (k > 3) throw std::invalid_argument("simplex_grid_opt: K <= 3 only");
    if (grid_per_axis < 1 || grid_per_axis > 300)
        throw std::invalid_argument("simplex_grid_opt: grid_per_axis must be in [1, 300]");
    const auto g = normalized_channels(problem.channels);
    const double p = problem.p_tx;
    const double a = problem.alpha;

    long points = 1;
    for (int i = 0; i < k; ++i) points *= (grid_per_axis + 1);
    if (points > budget.max_grid_points)
        throw std::runtime_error("simplex_grid_opt: grid exceeds the point budget");

    GridOptimum best;
    best.objective = -std::numeric_limits<double>::infinity();
    std::vector<double> q(static_cast<std::size_t>(k), 0.0);
    const auto eval = [&]() {
        double v = 0.0;
        if (a > 0.0) v += a * transform_fi(g, q, problem.ops.M);
        if (a < 1.0) v += (1.0 - a) * logdet_rate_bits(g, q);
        ++best.evaluated;
        if (v > best.objective) {
            best.objective = v;
            best.q = q;
        }
    };

    const double h = p / grid_per_axis;
    for (int i1 = 0; i1 <= grid_per_axis; ++i1) {
        q[0] = i1 * h;
        if (k == 1) {
            eval();
            continue;
        }
        for (int i2 = 0; i2 + i1 <= grid_per_axis; ++i2) {
            q[1] = i2 * h;
            if (k == 2) {
                eval();
                continue;
            }
            for (int i3 = 0; i3 + i2 + i1 <= grid_per_axis; ++i3) {
                q[2] = i3 * h;
                eval();
            }
        }
    }
    return best;
}

bool feasible_sampler_projection_check(const Eigen::VectorXd& sigma, double p_tx, double eirp,
                                       long n_samples, std::uint64_t seed) {
    if (n_samples > 1'000'000)
        throw std::invalid_argument("feasible_sampler_projection_check: n_samples <= 1e6");
    const ProjectionResult proj = project_spectrum(sigma, p_tx, eirp);
    const double proj_dist2 = (proj.lambdas - sigma).squaredNorm();
    SplitMix64 gen = substream(seed, 0x9Dull, 1);
    Eigen::VectorXd cand(sigma.size());
    for (long s = 0; s < n_samples; ++s) {
        double total = 0.0;
        for (Eigen::Index i = 0; i < cand.size(); ++i) {
            cand(i) = eirp * gen.next_double();
            total += cand(i);
        }
        if (total > p_tx) cand *= p_tx / total;
        if ((cand - sigma).squaredNorm() < proj_dist2 - 1e-12) return false;
    }
    return true;
}

} // namespace oracle
} // namespace jcas
