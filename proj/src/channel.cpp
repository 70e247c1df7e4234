#include "channelforge/channel.hpp"

#include <cmath>
#include <sstream>

namespace channelforge {

namespace {

void prune_zero_operators(KrausSet& k) {
    const double cutoff = tolerances().zero_operator;
    std::vector<CMat> kept;
    kept.reserve(k.operators.size());
    for (const CMat& op : k.operators) {
        if (op.norm() >= cutoff) {
            kept.push_back(op);
        }
    }
    if (!kept.empty()) {
        k.operators = std::move(kept);
    }
}

void check_dimension(const KrausSet& k, const CMat& rho) {
    if (rho.rows() != k.d || rho.cols() != k.d) {
        throw Error(ErrorCode::BadArgument, "state dimension does not match channel dimension");
    }
}

}  // namespace

ValidationReport validate(const KrausSet& k) {
    ValidationReport report;
    report.d = k.d;
    report.operator_count = k.operators.size();
    if (k.d < 1 || k.operators.empty()) {
        return report;
    }
    const ToleranceConfig& tol = tolerances();
    CMat completion = CMat::Zero(k.d, k.d);
    report.all_admissible = true;
    for (const CMat& op : k.operators) {
        if (op.rows() != k.d || op.cols() != k.d) {
            return report;
        }
        completion += op.adjoint() * op;
        const double norm = op_norm(op);
        report.operator_norms.push_back(norm);
        if (norm > 1.0 + tol.admissible_norm) {
            report.all_admissible = false;
        }
    }
    report.tp_residual = max_abs_diff(completion, CMat::Identity(k.d, k.d));
    report.trace_preserving = report.tp_residual <= tol.trace_preserving;
    report.pass = report.trace_preserving && report.all_admissible;
    return report;
}

void require_valid(const KrausSet& k) {
    const ValidationReport report = validate(k);
    if (!report.pass) {
        std::ostringstream msg;
        msg << "invalid Kraus set: tp_residual=" << report.tp_residual
            << " operators=" << report.operator_count << " d=" << report.d;
        throw Error(ErrorCode::InvalidChannel, msg.str());
    }
}

CVec maximally_entangled_vector(int d) {
    CVec psi = CVec::Zero(static_cast<Eigen::Index>(d) * d);
    const double amp = 1.0 / std::sqrt(static_cast<double>(d));
    for (int i = 0; i < d; ++i) {
        psi[static_cast<Eigen::Index>(i) * d + i] = amp;
    }
    return psi;
}

ChoiState kraus_to_choi(const KrausSet& k) {
    require_valid(k);
    const int d = k.d;
    CMat j = CMat::Zero(static_cast<Eigen::Index>(d) * d, static_cast<Eigen::Index>(d) * d);
    for (const CMat& op : k.operators) {
        const CVec w = vec_row_major(op);
        j.noalias() += w * w.adjoint();
    }
    j /= static_cast<double>(d);
    return ChoiState{d, std::move(j)};
}

KrausSet choi_to_kraus(const ChoiState& j, double rank_tol) {
    const int d = j.d;
    if (j.matrix.rows() != static_cast<Eigen::Index>(d) * d || j.matrix.rows() != j.matrix.cols()) {
        throw Error(ErrorCode::BadArgument, "Choi matrix has wrong dimensions");
    }
    if (!is_psd(j.matrix, tolerances().psd)) {
        throw Error(ErrorCode::BadArgument, "Choi matrix is not positive semidefinite");
    }
    const EigResult eig = herm_eig((j.matrix + j.matrix.adjoint()) / 2.0);
    KrausSet k;
    k.d = d;
    const double root_d = std::sqrt(static_cast<double>(d));
    for (Eigen::Index idx = 0; idx < eig.eigenvalues.size(); ++idx) {
        const double lambda = eig.eigenvalues[idx];
        if (lambda <= rank_tol) {
            continue;
        }
        const CVec psi_bar = std::sqrt(lambda) * eig.eigenvectors.col(idx);
        k.operators.push_back(root_d * unvec_row_major(psi_bar, d, d));
    }
    if (k.operators.empty()) {
        throw Error(ErrorCode::BadArgument, "Choi matrix has no eigenvalues above rank_tol");
    }
    return k;
}

int choi_rank(const ChoiState& j, double rank_tol) {
    const EigResult eig = herm_eig((j.matrix + j.matrix.adjoint()) / 2.0);
    int rank = 0;
    for (Eigen::Index idx = 0; idx < eig.eigenvalues.size(); ++idx) {
        if (eig.eigenvalues[idx] > rank_tol) {
            ++rank;
        }
    }
    return rank;
}

KrausSet mix_kraus(const KrausSet& k, const CMat& u) {
    const Eigen::Index n = static_cast<Eigen::Index>(k.operators.size());
    if (u.cols() != n) {
        throw Error(ErrorCode::BadArgument, "mixing matrix column count must equal the set size");
    }
    if (u.rows() < u.cols() ||
        max_abs_diff(u.adjoint() * u, CMat::Identity(n, n)) > tolerances().unitary * 10.0) {
        throw Error(ErrorCode::BadArgument, "mixing matrix is not an isometry");
    }
    KrausSet mixed;
    mixed.d = k.d;
    mixed.operators.reserve(static_cast<std::size_t>(u.rows()));
    for (Eigen::Index i = 0; i < u.rows(); ++i) {
        CMat b = CMat::Zero(k.d, k.d);
        for (Eigen::Index jj = 0; jj < n; ++jj) {
            b += u(i, jj) * k.operators[static_cast<std::size_t>(jj)];
        }
        mixed.operators.push_back(std::move(b));
    }
    return mixed;
}

CMat apply_channel(const KrausSet& k, const CMat& rho) {
    check_dimension(k, rho);
    CMat out = CMat::Zero(k.d, k.d);
    for (const CMat& op : k.operators) {
        out.noalias() += op * rho * op.adjoint();
    }
    return out;
}

CMat channel_on_identity(const KrausSet& k) {
    CMat out = CMat::Zero(k.d, k.d);
    for (const CMat& op : k.operators) {
        out.noalias() += op * op.adjoint();
    }
    return out;
}

KrausSet conjugate_channel(const KrausSet& k, const CMat& u) {
    if (!is_unitary(u) || u.rows() != k.d) {
        throw Error(ErrorCode::BadArgument, "conjugate_channel requires a d x d unitary");
    }
    KrausSet out;
    out.d = k.d;
    for (const CMat& op : k.operators) {
        out.operators.push_back(u * op * u.adjoint());
    }
    return out;
}

CMat trace_out_output(const CMat& j, int d) {
    CMat out = CMat::Zero(d, d);
    for (int r = 0; r < d; ++r) {
        for (int rp = 0; rp < d; ++rp) {
            Complex sum = 0.0;
            for (int s = 0; s < d; ++s) {
                sum += j(static_cast<Eigen::Index>(s) * d + r, static_cast<Eigen::Index>(s) * d + rp);
            }
            out(r, rp) = sum;
        }
    }
    return out;
}

CMat trace_out_reference(const CMat& j, int d) {
    CMat out = CMat::Zero(d, d);
    for (int s = 0; s < d; ++s) {
        for (int sp = 0; sp < d; ++sp) {
            Complex sum = 0.0;
            for (int r = 0; r < d; ++r) {
                sum += j(static_cast<Eigen::Index>(s) * d + r, static_cast<Eigen::Index>(sp) * d + r);
            }
            out(s, sp) = sum;
        }
    }
    return out;
}

bool is_valid_choi(const ChoiState& j) {
    const int d = j.d;
    if (d < 1 || j.matrix.rows() != static_cast<Eigen::Index>(d) * d ||
        j.matrix.rows() != j.matrix.cols()) {
        return false;
    }
    const ToleranceConfig& tol = tolerances();
    if (!is_psd(j.matrix, tol.psd)) {
        return false;
    }
    if (std::abs(j.matrix.trace().real() - 1.0) > tol.trace_one) {
        return false;
    }
    const CMat marginal = trace_out_output(j.matrix, d);
    const CMat uniform = CMat::Identity(d, d) / static_cast<double>(d);
    return max_abs_diff(marginal, uniform) <= tol.trace_preserving;
}

EnsembleDecomposition ensemble_from_kraus(const KrausSet& k) {
    const double root_d = std::sqrt(static_cast<double>(k.d));
    EnsembleDecomposition ensemble;
    for (const CMat& op : k.operators) {
        const CVec psi_bar = vec_row_major(op) / root_d;
        const double weight = psi_bar.squaredNorm();
        if (weight < tolerances().zero_operator) {
            continue;
        }
        ensemble.weights.push_back(weight);
        ensemble.states.push_back(psi_bar / std::sqrt(weight));
    }
    return ensemble;
}

KrausSet kraus_from_ensemble(int d, const EnsembleDecomposition& ensemble) {
    if (ensemble.weights.size() != ensemble.states.size()) {
        throw Error(ErrorCode::BadArgument, "ensemble weights and states differ in length");
    }
    KrausSet k;
    k.d = d;
    const double root_d = std::sqrt(static_cast<double>(d));
    for (std::size_t i = 0; i < ensemble.states.size(); ++i) {
        const CVec psi_bar = std::sqrt(ensemble.weights[i]) * ensemble.states[i];
        k.operators.push_back(root_d * unvec_row_major(psi_bar, d, d));
    }
    return k;
}

KrausSet make_amplitude_damping(double eps) {
    if (eps < 0.0 || eps > 1.0) {
        throw Error(ErrorCode::BadArgument, "amplitude damping parameter must lie in [0, 1]");
    }
    KrausSet k;
    k.d = 2;
    CMat decay = CMat::Zero(2, 2);
    decay(0, 1) = std::sqrt(eps);
    CMat keep = CMat::Zero(2, 2);
    keep(0, 0) = 1.0;
    keep(1, 1) = std::sqrt(1.0 - eps);
    k.operators.push_back(std::move(decay));
    k.operators.push_back(std::move(keep));
    prune_zero_operators(k);
    return k;
}

KrausSet make_constant_output_mix(double p, double s) {
    if (p < 0.0 || p > 1.0 || s < 0.0 || s > 1.0) {
        throw Error(ErrorCode::BadArgument, "constant-output parameters must lie in [0, 1]");
    }
    const int d = 2;
    const CVec psi = maximally_entangled_vector(d);
    CMat tau = CMat::Zero(2, 2);
    tau(0, 0) = s;
    tau(1, 1) = 1.0 - s;
    const CMat j = (1.0 - p) * (psi * psi.adjoint()) +
                   p * kron(tau, CMat::Identity(2, 2) / 2.0);
    KrausSet k = choi_to_kraus(ChoiState{d, j});
    prune_zero_operators(k);
    return k;
}

KrausSet make_random_unitary_channel(const std::vector<std::pair<double, CMat>>& pairs) {
    if (pairs.empty()) {
        throw Error(ErrorCode::BadArgument, "random-unitary channel needs at least one pair");
    }
    double total = 0.0;
    const Eigen::Index d = pairs.front().second.rows();
    KrausSet k;
    k.d = static_cast<int>(d);
    for (const auto& [q, u] : pairs) {
        if (q < -1e-12) {
            throw Error(ErrorCode::BadArgument, "random-unitary weights must be nonnegative");
        }
        if (u.rows() != d || !is_unitary(u, 1e-9)) {
            throw Error(ErrorCode::BadArgument, "random-unitary member is not unitary");
        }
        total += q;
        k.operators.push_back(std::sqrt(std::max(q, 0.0)) * u);
    }
    if (std::abs(total - 1.0) > 1e-10) {
        throw Error(ErrorCode::BadArgument, "random-unitary weights must sum to one");
    }
    prune_zero_operators(k);
    return k;
}

KrausSet make_identity_channel(int d) {
    if (d < 1) {
        throw Error(ErrorCode::BadArgument, "identity channel dimension must be positive");
    }
    KrausSet k;
    k.d = d;
    k.operators.push_back(CMat::Identity(d, d));
    return k;
}

KrausSet make_depolarizing(double p) {
    if (p < 0.0 || p > 1.0) {
        throw Error(ErrorCode::BadArgument, "depolarizing parameter must lie in [0, 1]");
    }
    CMat id = CMat::Identity(2, 2);
    CMat x = CMat::Zero(2, 2);
    x(0, 1) = 1.0;
    x(1, 0) = 1.0;
    CMat y = CMat::Zero(2, 2);
    y(0, 1) = Complex(0.0, -1.0);
    y(1, 0) = Complex(0.0, 1.0);
    CMat z = CMat::Identity(2, 2);
    z(1, 1) = -1.0;
    return make_random_unitary_channel({{1.0 - 3.0 * p / 4.0, id},
                                        {p / 4.0, x},
                                        {p / 4.0, y},
                                        {p / 4.0, z}});
}

}  // namespace channelforge
