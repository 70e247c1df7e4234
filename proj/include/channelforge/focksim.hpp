#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "channelforge/optics.hpp"

namespace channelforge {

/// A single photon over m modes, written as the amplitude for the photon to
/// occupy each mode. Photon-number-preserving networks keep one excitation,
/// so this vector is the whole state space.
struct SinglePhotonState {
    int m = 0;
    CVec amplitudes;

    static SinglePhotonState basis(int m, int mode);
};

SinglePhotonState evolve(const OpticalNetwork& net, const SinglePhotonState& psi);

struct PostselectResult {
    CVec logical;         ///< unnormalized encoding-mode amplitudes
    double success_prob = 0.0;
};

/// Vacuum postselection on every ancilla mode. Failure probability is the
/// weight the photon carries outside the encoding.
PostselectResult postselect_vacuum(const SinglePhotonState& psi, int d);

/// Logical operator realized by the network under vacuum postselection:
/// the top-left d x d block of the network unitary.
CMat effective_kraus(const OpticalNetwork& net, int d);

struct DeterministicCheck {
    CMat choi;              ///< normalized Choi state of the realized channel
    double p_succ_sim = 0.0;
};

/// Rebuilds the realized map from the compiled networks and verifies the
/// success probability is input independent. Throws PlanInconsistent when
/// the per-basis-state success probabilities disagree beyond 1e-9.
DeterministicCheck effective_channel_choi(const RealizationPlan& plan,
                                          std::span<const OpticalNetwork> networks);

/// One sampled run of the switched scheme.
struct SwitchOutcome {
    int branch_index = 0;
    bool detected_vacuum = false;
    CVec logical;  ///< normalized conditional state when detected_vacuum
};

struct MonteCarloReport {
    double p_hat = 0.0;
    double std_err = 0.0;
    long long shots = 0;
    std::uint64_t seed = 0;
    CMat rho_hat;
};

/// Threshold-detector Monte Carlo of the switched scheme: per shot, sample a
/// branch, a pure component of rho_in, the photon's output location, and
/// postselect on no ancilla click. Shot streams are keyed by (seed, shot), so
/// results do not depend on execution order.
MonteCarloReport monte_carlo(const RealizationPlan& plan,
                             std::span<const OpticalNetwork> networks,
                             const CMat& rho_in, long long shots, std::uint64_t seed);

}  // namespace channelforge
