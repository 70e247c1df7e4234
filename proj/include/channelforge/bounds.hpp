#pragma once

#include <optional>
#include <utility>

#include "channelforge/channel.hpp"
#include "channelforge/realization.hpp"

namespace channelforge {

/// Bracketing information for the optimal success probability of one
/// channel. Concurrence bounds exist only for qubit channels; assistance
/// bounds are marked estimate-based unless the assistance value was supplied
/// analytically.
struct BoundsReport {
    double extremal_lb = 0.0;  ///< 1/d
    double extremal_ub = 1.0;
    double triangle_ub = 1.0;
    std::optional<double> concurrence_lb;
    std::optional<double> concurrence_ub;
    double assistance_value = 0.0;
    double assistance_lb = 0.0;
    double assistance_ub = 1.0;
    bool assistance_exact = false;
    double p_succ = 0.0;
    double sigma = 0.0;
    bool certified_optimal = false;
};

/// Upper bound 1 / ||Lambda(I)|| on the success probability; equals 1
/// exactly for unital channels.
double triangle_bound(const KrausSet& k);

/// Two-qubit spin flip (sigma_y x sigma_y) rho* (sigma_y x sigma_y).
CMat spin_flip(const CMat& rho);

/// |<psi~|psi>| for a normalized two-qubit pure state.
double concurrence_pure(const CVec& psi);

/// Wootters closed form max{0, l1 - l2 - l3 - l4}.
double concurrence_convex_roof(const CMat& rho);

/// Concave roof of the concurrence, F(rho, rho~).
double concurrence_concave_roof(const CMat& rho);

/// (lower, upper) bounds on p_succ for a qubit channel from the concave-roof
/// concurrence of its Choi state.
std::pair<double, double> concurrence_bounds_psucc(const ChoiState& j);

/// 1 minus the largest squared Schmidt coefficient of a bipartite pure state
/// on C^d (x) C^d.
double geometric_entanglement_pure(const CVec& psi, int d);

/// Concave-roof geometric entanglement of the Choi state implied by a
/// stochasticity value: 1 - sigma / d.
double eg_concave_roof_from_sigma(double sigma, int d);

/// Entropy of the distribution (p, (1-p)/(d-1), ..., (1-p)/(d-1)).
double h_d(double p, int d);

/// Inverse of h_d on [1/d, 1], by bisection.
double h_d_inverse(double y, int d);

/// Lower estimate of the entanglement of assistance of a bipartite state,
/// maximizing the average reduced entropy over pure ensembles with the same
/// isometry search used for the stochasticity.
double assistance_estimate(const ChoiState& j, const OptimizerOptions& options = {});

/// (lower, upper) bounds on p_succ from an assistance value.
std::pair<double, double> assistance_bounds_psucc(double ea, int d);

/// Collects every applicable bound for the channel of a computed plan.
/// Exact-method bounds must bracket a certified plan's p_succ within 1e-6;
/// a violation throws. The estimate-based assistance upper bound is reported
/// but not enforced, since an underestimated assistance value understates it.
BoundsReport full_report(const KrausSet& k, const RealizationPlan& plan,
                         const OptimizerOptions& options = {});

}  // namespace channelforge
