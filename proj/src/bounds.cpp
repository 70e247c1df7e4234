#include "channelforge/bounds.hpp"

#include <cmath>
#include <sstream>

#include "channelforge/ensemble_search.hpp"

namespace channelforge {

namespace {

const CMat& spin_flip_matrix() {
    static const CMat s = [] {
        CMat m = CMat::Zero(4, 4);
        m(0, 3) = -1.0;
        m(1, 2) = 1.0;
        m(2, 1) = 1.0;
        m(3, 0) = -1.0;
        return m;
    }();
    return s;
}

void require_two_qubits(Eigen::Index rows, Eigen::Index cols) {
    if (rows != 4 || cols != 4) {
        throw Error(ErrorCode::BadArgument, "two-qubit state required");
    }
}

}  // namespace

double triangle_bound(const KrausSet& k) {
    require_valid(k);
    return 1.0 / op_norm(channel_on_identity(k));
}

CMat spin_flip(const CMat& rho) {
    require_two_qubits(rho.rows(), rho.cols());
    const CMat& s = spin_flip_matrix();
    return s * rho.conjugate() * s;
}

double concurrence_pure(const CVec& psi) {
    if (psi.size() != 4) {
        throw Error(ErrorCode::BadArgument, "two-qubit state required");
    }
    const Complex overlap = psi.transpose() * spin_flip_matrix() * psi;
    return std::abs(overlap);
}

double concurrence_convex_roof(const CMat& rho) {
    require_two_qubits(rho.rows(), rho.cols());
    const CMat root = psd_sqrt((rho + rho.adjoint()) / 2.0);
    const CMat inner = root * spin_flip(rho) * root;
    const EigResult eig = herm_eig((inner + inner.adjoint()) / 2.0);
    double value = 0.0;
    for (Eigen::Index i = 0; i < 4; ++i) {
        const double lambda = std::sqrt(std::max(eig.eigenvalues[i], 0.0));
        value += i == 0 ? lambda : -lambda;
    }
    return std::max(value, 0.0);
}

double concurrence_concave_roof(const CMat& rho) {
    require_two_qubits(rho.rows(), rho.cols());
    return fidelity(rho, spin_flip(rho));
}

std::pair<double, double> concurrence_bounds_psucc(const ChoiState& j) {
    if (j.d != 2) {
        throw Error(ErrorCode::BadArgument, "concurrence bounds are defined for qubit channels");
    }
    const double f = concurrence_concave_roof(j.matrix);
    const double ub = 1.0 / (2.0 - f);
    const double lb = 1.0 / (1.0 + std::sqrt(std::max(1.0 - f * f, 0.0)));
    return {lb, ub};
}

double geometric_entanglement_pure(const CVec& psi, int d) {
    if (psi.size() != static_cast<Eigen::Index>(d) * d) {
        throw Error(ErrorCode::BadArgument, "state dimension must be d^2");
    }
    const CMat schmidt = unvec_row_major(psi, d, d);
    const double top = op_norm(schmidt);
    return 1.0 - top * top;
}

double eg_concave_roof_from_sigma(double sigma, int d) {
    if (sigma < 1.0 - 1e-9 || sigma > static_cast<double>(d) + 1e-9) {
        throw Error(ErrorCode::BadArgument, "stochasticity must lie in [1, d]");
    }
    return 1.0 - sigma / static_cast<double>(d);
}

double h_d(double p, int d) {
    if (d < 2) {
        throw Error(ErrorCode::BadArgument, "h_d needs d >= 2");
    }
    const double lo = 1.0 / static_cast<double>(d);
    if (p < lo - 1e-12 || p > 1.0 + 1e-12) {
        throw Error(ErrorCode::BadArgument, "h_d argument outside [1/d, 1]");
    }
    p = std::min(std::max(p, lo), 1.0);
    double h = 0.0;
    if (p > 0.0) {
        h -= p * std::log2(p);
    }
    const double rest = 1.0 - p;
    if (rest > 1e-300) {
        h -= rest * std::log2(rest / static_cast<double>(d - 1));
    }
    return h;
}

double h_d_inverse(double y, int d) {
    if (d < 2) {
        throw Error(ErrorCode::BadArgument, "h_d_inverse needs d >= 2");
    }
    const double top = std::log2(static_cast<double>(d));
    if (y < -1e-12 || y > top + 1e-12) {
        throw Error(ErrorCode::BadArgument, "h_d_inverse argument outside [0, log2 d]");
    }
    y = std::min(std::max(y, 0.0), top);
    // h_d is monotonically decreasing on [1/d, 1], so plain bisection works.
    double lo = 1.0 / static_cast<double>(d);
    double hi = 1.0;
    while (hi - lo > 1e-12) {
        const double mid = 0.5 * (lo + hi);
        if (h_d(mid, d) > y) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

double assistance_estimate(const ChoiState& j, const OptimizerOptions& options) {
    const int d = j.d;
    if (!is_psd(j.matrix, tolerances().psd) ||
        std::abs(j.matrix.trace().real() - 1.0) > tolerances().trace_one) {
        throw Error(ErrorCode::BadArgument, "assistance estimate needs a density matrix");
    }
    const EigResult eig = herm_eig((j.matrix + j.matrix.adjoint()) / 2.0);
    std::vector<CMat> basis;
    for (Eigen::Index idx = 0; idx < eig.eigenvalues.size(); ++idx) {
        const double lambda = eig.eigenvalues[idx];
        if (lambda <= tolerances().choi_rank) {
            continue;
        }
        basis.push_back(unvec_row_major(CVec(std::sqrt(lambda) * eig.eigenvectors.col(idx)), d, d));
    }
    if (basis.empty()) {
        return 0.0;
    }
    const int rank = static_cast<int>(basis.size());
    const int n_out =
        options.n_out > 0 ? std::max(options.n_out, rank) : std::max(rank, std::min(rank * rank, 16));

    // Maximizing the average reduced entropy = minimizing its negative. The
    // cap log2(d) is attained by ensembles of maximally entangled states, so
    // it serves as the floor for the early exit.
    EnsembleObjective objective;
    objective.branch_cost = [](const CMat& b) {
        const double weight = b.squaredNorm();
        if (weight < 1e-18) {
            return 0.0;
        }
        Eigen::JacobiSVD<CMat> svd_only(b);
        RVec probs = svd_only.singularValues();
        probs = probs.cwiseProduct(probs) / weight;
        return -weight * shannon_entropy(probs);
    };
    objective.floor = -std::log2(static_cast<double>(d));
    objective.floor_slack = 1e-10;

    const EnsembleSearchResult search =
        minimize_ensemble_cost(basis, n_out, objective, options);
    return std::min(-search.value, std::log2(static_cast<double>(d)));
}

std::pair<double, double> assistance_bounds_psucc(double ea, int d) {
    const double top = std::log2(static_cast<double>(d));
    if (ea < -1e-9 || ea > top + 1e-9) {
        throw Error(ErrorCode::BadArgument, "assistance value outside [0, log2 d]");
    }
    ea = std::min(std::max(ea, 0.0), top);
    const double ub = std::exp2(ea) / static_cast<double>(d);
    const double lb = 1.0 / (static_cast<double>(d) * h_d_inverse(ea, d));
    return {lb, ub};
}

BoundsReport full_report(const KrausSet& k, const RealizationPlan& plan,
                         const OptimizerOptions& options) {
    BoundsReport report;
    report.extremal_lb = 1.0 / static_cast<double>(k.d);
    report.extremal_ub = 1.0;
    report.triangle_ub = triangle_bound(k);
    report.p_succ = plan.p_succ;
    report.sigma = plan.sigma;
    report.certified_optimal = plan.certified_optimal;

    const ChoiState j = kraus_to_choi(k);
    if (k.d == 2) {
        const auto [lb, ub] = concurrence_bounds_psucc(j);
        report.concurrence_lb = lb;
        report.concurrence_ub = ub;
    }
    report.assistance_value = assistance_estimate(j, options);
    report.assistance_exact = false;
    const auto [alb, aub] = assistance_bounds_psucc(report.assistance_value, k.d);
    report.assistance_lb = alb;
    report.assistance_ub = aub;

    if (plan.certified_optimal) {
        const double slack = 1e-6;
        const bool lb_ok =
            report.p_succ >= report.extremal_lb - slack &&
            report.p_succ >= report.assistance_lb - slack &&
            (!report.concurrence_lb || report.p_succ >= *report.concurrence_lb - slack);
        const bool ub_ok =
            report.p_succ <= report.extremal_ub + slack &&
            report.p_succ <= report.triangle_ub + slack &&
            (!report.concurrence_ub || report.p_succ <= *report.concurrence_ub + slack);
        if (!lb_ok || !ub_ok) {
            std::ostringstream msg;
            msg << "certified p_succ " << report.p_succ << " escapes its exact bounds";
            throw Error(ErrorCode::Numeric, msg.str());
        }
    }
    return report;
}

}  // namespace channelforge
