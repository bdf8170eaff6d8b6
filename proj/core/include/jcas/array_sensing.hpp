// SPDX-License-Identifier: Apache-2.0
//
// jcas-pareto: joint communication and sensing beamforming library
// Copyright (c) 2026 the jcas-pareto authors

#ifndef JCAS_ARRAY_SENSING_HPP
#define JCAS_ARRAY_SENSING_HPP

#include <complex>
#include <Eigen/Dense>

namespace jcas {

using cx = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;

/// Uniform linear arrays at the base station: n_tx transmit and n_rx receive
/// elements with spacing d, phase reference at the array center.
struct ArrayConfig {
    int n_tx = 1;
    int n_rx = 1;
    double spacing_over_wavelength = 0.5; // d / lambda
    double wavenumber_scaled = 0.0;       // k = 2*pi*d/lambda, derived

    ArrayConfig() { wavenumber_scaled = 2.0 * M_PI * spacing_over_wavelength; }
    ArrayConfig(int nt, int nr, double d_over_lambda);
};

/// Point sensing object: angle, reflection coefficient (radar cross section
/// and round-trip loss folded in) and radar noise variance in linear mW.
struct Target {
    double theta_r = 0.0;
    cx gamma_r{1.0, 0.0};
    double sigma_r2 = 1.0;

    Target() = default;
    Target(double theta, cx gamma, double sr2);
};

/// Array response operators for one target: steering vectors a, b, their
/// angle derivatives, the rank-one target response direction A = b a^T, its
/// derivative A_dot, and the sensing quadratic-form matrix
///   M = (2|gamma|^2/sigma_r^2) A_dot^H A_dot + (2/sigma_r^2) A^H A
/// so that the Fisher-trace objective is tr(M R_x).
struct SensingOperators {
    CVector a_vec;  // length n_tx
    CVector b_vec;  // length n_rx
    CVector a_dot;
    CVector b_dot;
    CMatrix A;      // n_rx x n_tx
    CMatrix A_dot;  // n_rx x n_tx
    CMatrix M;      // n_tx x n_tx, Hermitian PSD
};

/// 3x3 Fisher information matrix for the parameter vector
/// v = [theta_r, gamma_r, gamma_r*]. Hermitian PSD with structural zeros at
/// (2,3)/(3,2).
struct FisherMatrix {
    Eigen::Matrix3cd j;
};

/// Centered-reference steering vector: entry m = exp(j (m - (n-1)/2) k sin(theta)).
CVector steering_vector(const ArrayConfig& cfg, int n_elems, double theta);

/// Entrywise derivative of steering_vector with respect to theta:
/// entry m = a_m * j (m - (n-1)/2) k cos(theta).
CVector steering_derivative(const ArrayConfig& cfg, int n_elems, double theta);

SensingOperators build_operators(const ArrayConfig& cfg, const Target& tgt);

/// Fisher information of [theta_r, gamma_r, gamma_r*] for transmit covariance
/// R (Hermitian PSD, n_tx x n_tx). Rejects R with Hermitian asymmetry beyond
/// 1e-8 relative.
FisherMatrix fisher_matrix(const SensingOperators& ops, const Target& tgt, const CMatrix& R);

/// tr(M R_x); equals fisher_matrix(ops, tgt, R_x).j.trace() exactly.
double fisher_trace_objective(const SensingOperators& ops, const CMatrix& R_x);

/// Shared validation helper: throws std::invalid_argument when R deviates
/// from Hermitian by more than rel_tol relative to its norm.
void require_hermitian(const CMatrix& R, double rel_tol, const char* what);

} // namespace jcas

#endif
