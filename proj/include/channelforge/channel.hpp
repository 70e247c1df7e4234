#pragma once

#include <utility>
#include <vector>

#include "channelforge/matrix.hpp"

namespace channelforge {

/// Operator-sum representation of a channel on a d-dimensional system.
/// The set is trace preserving when sum_i A_i^dag A_i = I.
struct KrausSet {
    int d = 0;
    std::vector<CMat> operators;
};

struct ValidationReport {
    int d = 0;
    std::size_t operator_count = 0;
    double tp_residual = 0.0;               ///< max-entry norm of sum A^dag A - I
    std::vector<double> operator_norms;
    bool trace_preserving = false;
    bool all_admissible = false;
    bool pass = false;
};

/// Choi state of a channel: (Lambda (x) I) applied to the maximally
/// entangled state, with output (x) reference index ordering.
struct ChoiState {
    int d = 0;
    CMat matrix;
};

/// Pure-state ensemble {p_i, psi_i} for a d^2-dimensional bipartite state.
struct EnsembleDecomposition {
    std::vector<double> weights;
    std::vector<CVec> states;
};

ValidationReport validate(const KrausSet& k);

/// Throws ErrorCode::InvalidChannel when validate(k) fails.
void require_valid(const KrausSet& k);

CVec maximally_entangled_vector(int d);

ChoiState kraus_to_choi(const KrausSet& k);

/// Extracts a Kraus set from the spectral decomposition of a Choi state,
/// keeping eigenvalues above rank_tol.
KrausSet choi_to_kraus(const ChoiState& j, double rank_tol = tolerances().choi_rank);

int choi_rank(const ChoiState& j, double rank_tol = tolerances().choi_rank);

/// Mixes a Kraus set by an isometry u (columns orthonormal, column count
/// equal to the set size): B_i = sum_j u(i,j) A_j.
KrausSet mix_kraus(const KrausSet& k, const CMat& u);

CMat apply_channel(const KrausSet& k, const CMat& rho);

/// Lambda(I) = sum_i A_i A_i^dag.
CMat channel_on_identity(const KrausSet& k);

/// Conjugated channel rho -> U Lambda(U^dag rho U) U^dag.
KrausSet conjugate_channel(const KrausSet& k, const CMat& u);

/// Partial traces of a d^2 x d^2 bipartite matrix in output (x) reference
/// ordering. trace_out_output leaves the reference side and vice versa.
CMat trace_out_output(const CMat& j, int d);
CMat trace_out_reference(const CMat& j, int d);

bool is_valid_choi(const ChoiState& j);

EnsembleDecomposition ensemble_from_kraus(const KrausSet& k);
KrausSet kraus_from_ensemble(int d, const EnsembleDecomposition& ensemble);

// --- named channel constructors -----------------------------------------

/// Decay channel: with probability eps the excited state |1> drops to |0>.
KrausSet make_amplitude_damping(double eps);

/// rho -> (1-p) rho + p Tr(rho) tau with tau = diag(s, 1-s); built from the
/// closed-form Choi state. Non-diagonal tau is reachable via
/// conjugate_channel.
KrausSet make_constant_output_mix(double p, double s);

/// Convex mixture of unitary conjugations sum_i q_i U_i rho U_i^dag.
KrausSet make_random_unitary_channel(const std::vector<std::pair<double, CMat>>& pairs);

KrausSet make_identity_channel(int d);

/// Qubit depolarizing channel via the four Paulis with weights
/// (1 - 3p/4, p/4, p/4, p/4).
KrausSet make_depolarizing(double p);

}  // namespace channelforge
