#include "channelforge/matrix.hpp"

#include <algorithm>
#include <cmath>

namespace channelforge {

const ToleranceConfig& tolerances() {
    static const ToleranceConfig config{};
    return config;
}

SvdResult svd(const CMat& m) {
    Eigen::JacobiSVD<CMat> solver(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
    if (solver.info() != Eigen::Success) {
        throw Error(ErrorCode::Numeric, "singular value decomposition did not converge");
    }
    SvdResult result;
    result.left = solver.matrixU();
    result.singular_values = solver.singularValues();
    result.right = solver.matrixV().adjoint();
    return result;
}

double op_norm(const CMat& m) {
    return std::sqrt(op_norm_sq(m));
}

double op_norm_sq(const CMat& m) {
    if (m.rows() == 2 && m.cols() == 2) {
        // Closed form from the 2x2 Gram matrix: its trace is the squared
        // Frobenius norm and its determinant is |det m|^2.
        const double fro = m.squaredNorm();
        const double det = std::norm(m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0));
        const double disc = std::max(fro * fro - 4.0 * det, 0.0);
        return 0.5 * (fro + std::sqrt(disc));
    }
    const CMat gram = m.cols() <= m.rows() ? CMat(m.adjoint() * m) : CMat(m * m.adjoint());
    Eigen::SelfAdjointEigenSolver<CMat> solver(gram, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) {
        throw Error(ErrorCode::Numeric, "eigenvalue computation failed in op_norm");
    }
    return std::max(solver.eigenvalues().maxCoeff(), 0.0);
}

EigResult herm_eig(const CMat& h, double hermitian_tol) {
    if (!is_hermitian(h, hermitian_tol)) {
        throw Error(ErrorCode::BadArgument, "herm_eig requires a Hermitian matrix");
    }
    Eigen::SelfAdjointEigenSolver<CMat> solver(h);
    if (solver.info() != Eigen::Success) {
        throw Error(ErrorCode::Numeric, "Hermitian eigendecomposition did not converge");
    }
    // Eigen sorts ascending; flip to descending.
    const Eigen::Index n = h.rows();
    EigResult result;
    result.eigenvalues = solver.eigenvalues().reverse();
    result.eigenvectors = solver.eigenvectors().rowwise().reverse();
    (void)n;
    return result;
}

CMat psd_sqrt(const CMat& p, double clamp_tol) {
    EigResult eig = herm_eig(p);
    RVec roots(eig.eigenvalues.size());
    for (Eigen::Index k = 0; k < eig.eigenvalues.size(); ++k) {
        const double lambda = eig.eigenvalues[k];
        if (lambda < -clamp_tol) {
            throw Error(ErrorCode::BadArgument, "psd_sqrt input is not positive semidefinite");
        }
        roots[k] = std::sqrt(std::max(lambda, 0.0));
    }
    return eig.eigenvectors * roots.asDiagonal() * eig.eigenvectors.adjoint();
}

double fidelity(const CMat& rho, const CMat& sigma) {
    if (rho.rows() != sigma.rows() || rho.cols() != sigma.cols() || rho.rows() != rho.cols()) {
        throw Error(ErrorCode::BadArgument, "fidelity requires square matrices of equal dimension");
    }
    const ToleranceConfig& tol = tolerances();
    if (!is_psd(rho, tol.psd) || !is_psd(sigma, tol.psd)) {
        throw Error(ErrorCode::BadArgument, "fidelity requires positive semidefinite states");
    }
    if (std::abs(rho.trace().real() - 1.0) > tol.trace_one ||
        std::abs(sigma.trace().real() - 1.0) > tol.trace_one) {
        throw Error(ErrorCode::BadArgument, "fidelity requires unit-trace states");
    }
    const CMat root = psd_sqrt(rho);
    const CMat inner = root * sigma * root;
    EigResult eig = herm_eig((inner + inner.adjoint()) / 2.0);
    double sum = 0.0;
    for (Eigen::Index k = 0; k < eig.eigenvalues.size(); ++k) {
        sum += std::sqrt(std::max(eig.eigenvalues[k], 0.0));
    }
    return sum;
}

bool is_unitary(const CMat& m, double tol) {
    if (m.rows() != m.cols()) {
        return false;
    }
    const CMat gram = m.adjoint() * m;
    return max_abs_diff(gram, CMat::Identity(m.rows(), m.cols())) <= tol;
}

bool is_hermitian(const CMat& m, double tol) {
    if (m.rows() != m.cols()) {
        return false;
    }
    return max_abs_diff(m, m.adjoint()) <= tol;
}

bool is_psd(const CMat& m, double tol) {
    if (!is_hermitian(m, tol)) {
        return false;
    }
    Eigen::SelfAdjointEigenSolver<CMat> solver((m + m.adjoint()) / 2.0, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) {
        return false;
    }
    return solver.eigenvalues().minCoeff() >= -tol;
}

CMat kron(const CMat& a, const CMat& b) {
    CMat out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

CMat dagger(const CMat& m) {
    return m.adjoint();
}

CVec vec_row_major(const CMat& m) {
    CVec v(m.rows() * m.cols());
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            v[i * m.cols() + j] = m(i, j);
        }
    }
    return v;
}

CMat unvec_row_major(const CVec& v, Eigen::Index rows, Eigen::Index cols) {
    if (v.size() != rows * cols) {
        throw Error(ErrorCode::BadArgument, "unvec_row_major: size mismatch");
    }
    CMat m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i) {
        for (Eigen::Index j = 0; j < cols; ++j) {
            m(i, j) = v[i * cols + j];
        }
    }
    return m;
}

double max_abs(const CMat& m) {
    return m.cwiseAbs().maxCoeff();
}

double max_abs_diff(const CMat& a, const CMat& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw Error(ErrorCode::BadArgument, "max_abs_diff: shape mismatch");
    }
    return (a - b).cwiseAbs().maxCoeff();
}

double shannon_entropy(const RVec& probs) {
    double h = 0.0;
    for (Eigen::Index k = 0; k < probs.size(); ++k) {
        const double p = probs[k];
        if (p > 1e-15) {
            h -= p * std::log2(p);
        }
    }
    return h;
}

}  // namespace channelforge
