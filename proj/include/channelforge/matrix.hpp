#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "channelforge/error.hpp"

namespace channelforge {

using Complex = std::complex<double>;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;
using RVec = Eigen::VectorXd;

/// Numeric thresholds shared across the library. Every predicate and
/// contract check takes its tolerance from here unless the caller
/// overrides it explicitly.
struct ToleranceConfig {
    double unitary = 1e-10;
    double hermitian = 1e-10;
    double psd = 1e-9;              ///< eigenvalue clamp threshold for PSD inputs
    double trace_one = 1e-8;
    double trace_preserving = 1e-8;
    double admissible_norm = 1e-8;  ///< op_norm(A) may exceed 1 by at most this
    double zero_operator = 1e-12;   ///< operators below this norm are pruned
    double choi_rank = 1e-12;       ///< eigenvalue cutoff when extracting Kraus operators
};

const ToleranceConfig& tolerances();

/// Result of the singular value decomposition m = left * diag(s) * right.
/// `right` is the factor applied first, `left` last; both are unitary and
/// the singular values are sorted descending.
struct SvdResult {
    CMat left;
    RVec singular_values;
    CMat right;
};

SvdResult svd(const CMat& m);

/// Largest singular value.
double op_norm(const CMat& m);

/// Squared largest singular value; cheaper than op_norm for 2x2 inputs,
/// which dominate the optimizer's inner loop.
double op_norm_sq(const CMat& m);

/// Hermitian eigendecomposition with eigenvalues sorted descending and
/// orthonormal eigenvector columns. Throws on non-Hermitian input.
struct EigResult {
    RVec eigenvalues;
    CMat eigenvectors;
};

EigResult herm_eig(const CMat& h, double hermitian_tol = tolerances().hermitian);

/// Principal square root of a positive semidefinite matrix. Eigenvalues in
/// [-clamp_tol, 0) are clamped to zero; anything below -clamp_tol is an error.
CMat psd_sqrt(const CMat& p, double clamp_tol = tolerances().psd);

/// Uhlmann fidelity F = Tr sqrt(sqrt(rho) sigma sqrt(rho)) between two
/// density matrices.
double fidelity(const CMat& rho, const CMat& sigma);

bool is_unitary(const CMat& m, double tol = tolerances().unitary);
bool is_hermitian(const CMat& m, double tol = tolerances().hermitian);
bool is_psd(const CMat& m, double tol = tolerances().psd);

CMat kron(const CMat& a, const CMat& b);
CMat dagger(const CMat& m);

/// Row-major flattening of a matrix into a column vector and its inverse.
CVec vec_row_major(const CMat& m);
CMat unvec_row_major(const CVec& v, Eigen::Index rows, Eigen::Index cols);

double max_abs(const CMat& m);
double max_abs_diff(const CMat& a, const CMat& b);

/// Von Neumann entropy (base 2) of a probability vector; entries below
/// 1e-15 contribute zero.
double shannon_entropy(const RVec& probs);

}  // namespace channelforge
