// SPDX-License-Identifier: Apache-2.0
//
// jcas-pareto: joint communication and sensing beamforming library
// Copyright (c) 2026 the jcas-pareto authors

#include "jcas/array_sensing.hpp"

#include <stdexcept>

namespace jcas {

ArrayConfig::ArrayConfig(int nt, int nr, double d_over_lambda)
    : n_tx(nt), n_rx(nr), spacing_over_wavelength(d_over_lambda) {
    if (n_tx < 1 || n_rx < 1)
        throw std::invalid_argument("ArrayConfig: antenna counts must be >= 1");
    if (!(spacing_over_wavelength > 0.0))
        throw std::invalid_argument("ArrayConfig: spacing_over_wavelength must be > 0");
    wavenumber_scaled = 2.0 * M_PI * spacing_over_wavelength;
}

Target::Target(double theta, cx gamma, double sr2) : theta_r(theta), gamma_r(gamma), sigma_r2(sr2) {
    if (!(sigma_r2 > 0.0))
        throw std::invalid_argument("Target: sigma_r2 must be > 0");
}

void require_hermitian(const CMatrix& R, double rel_tol, const char* what) {
    const double scale = R.norm();
    const double asym = (R - R.adjoint()).norm();
    if (asym > rel_tol * std::max(scale, 1e-300))
        throw std::invalid_argument(std::string(what) + ": matrix is not Hermitian");
}

CVector steering_vector(const ArrayConfig& cfg, int n_elems, double theta) {
    if (n_elems < 1) throw std::invalid_argument("steering_vector: n_elems must be >= 1");
    const double phase_step = cfg.wavenumber_scaled * std::sin(theta);
    CVector a(n_elems);
    const double center = 0.5 * static_cast<double>(n_elems - 1);
    for (int m = 0; m < n_elems; ++m) {
        const double phi = (static_cast<double>(m) - center) * phase_step;
        a(m) = cx(std::cos(phi), std::sin(phi));
    }
    return a;
}

CVector steering_derivative(const ArrayConfig& cfg, int n_elems, double theta) {
    if (n_elems < 1) throw std::invalid_argument("steering_derivative: n_elems must be >= 1");
    const CVector a = steering_vector(cfg, n_elems, theta);
    const double slope = cfg.wavenumber_scaled * std::cos(theta);
    CVector da(n_elems);
    const double center = 0.5 * static_cast<double>(n_elems - 1);
    for (int m = 0; m < n_elems; ++m) {
        const double coeff = (static_cast<double>(m) - center) * slope;
        da(m) = a(m) * cx(0.0, coeff);
    }
    return da;
}

SensingOperators build_operators(const ArrayConfig& cfg, const Target& tgt) {
    SensingOperators ops;
    ops.a_vec = steering_vector(cfg, cfg.n_tx, tgt.theta_r);
    ops.b_vec = steering_vector(cfg, cfg.n_rx, tgt.theta_r);
    ops.a_dot = steering_derivative(cfg, cfg.n_tx, tgt.theta_r);
    ops.b_dot = steering_derivative(cfg, cfg.n_rx, tgt.theta_r);

    ops.A = ops.b_vec * ops.a_vec.transpose();
    ops.A_dot = ops.b_dot * ops.a_vec.transpose() + ops.b_vec * ops.a_dot.transpose();

    const double g2 = std::norm(tgt.gamma_r);
    CMatrix M = (2.0 * g2 / tgt.sigma_r2) * (ops.A_dot.adjoint() * ops.A_dot) +
                (2.0 / tgt.sigma_r2) * (ops.A.adjoint() * ops.A);
    ops.M = 0.5 * (M + M.adjoint());
    return ops;
}

FisherMatrix fisher_matrix(const SensingOperators& ops, const Target& tgt, const CMatrix& R) {
    require_hermitian(R, 1e-8, "fisher_matrix");
    const double inv_sr2 = 1.0 / tgt.sigma_r2;
    const double g2 = std::norm(tgt.gamma_r);

    const cx tr_dRd = (ops.A_dot * R * ops.A_dot.adjoint()).trace();
    const cx tr_aRa = (ops.A * R * ops.A.adjoint()).trace();
    const cx tr_aRd = (ops.A * R * ops.A_dot.adjoint()).trace();
    const cx tr_dRa = (ops.A_dot * R * ops.A.adjoint()).trace();

    FisherMatrix fi;
    Eigen::Matrix3cd& j = fi.j;
    j.setZero();
    j(0, 0) = 2.0 * g2 * inv_sr2 * tr_dRd.real();
    j(1, 1) = inv_sr2 * tr_aRa.real();
    j(2, 2) = j(1, 1);
    j(0, 1) = std::conj(tgt.gamma_r) * tr_aRd * inv_sr2;
    j(1, 0) = std::conj(j(0, 1));
    j(0, 2) = tgt.gamma_r * tr_dRa * inv_sr2;
    j(2, 0) = std::conj(j(0, 2));
    return fi;
}

double fisher_trace_objective(const SensingOperators& ops, const CMatrix& R_x) {
    require_hermitian(R_x, 1e-8, "fisher_trace_objective");
    return (ops.M * R_x).trace().real();
}

} // namespace jcas
