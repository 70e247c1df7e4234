#pragma once

#include <utility>
#include <vector>

#include "channelforge/channel.hpp"
#include "channelforge/ensemble_search.hpp"

namespace channelforge {

struct PlanBranch {
    double probability = 0.0;
    CMat kraus_tilde;  ///< rescaled operator with unit operator norm
};

/// Executable switching plan: apply branch i with probability p_i, realize
/// its rescaled operator, and postselect. Satisfies
/// sqrt(p_i) A~_i = sqrt(p_succ) A_i branch by branch, so the conditional
/// output reproduces the target channel with input-independent success
/// probability p_succ = 1 / sigma.
struct RealizationPlan {
    int d = 0;
    std::vector<PlanBranch> branches;
    double p_succ = 0.0;
    double sigma = 0.0;
    bool certified_optimal = false;
};

struct StochasticityResult {
    KrausSet decomposition;
    double sigma = 0.0;
    SearchTrace trace;
};

/// Optimal switching probabilities for a fixed decomposition:
/// p_succ = 1 / sum_i ||A_i||^2, p_i proportional to ||A_i||^2,
/// A~_i = A_i / ||A_i||.
std::pair<double, RealizationPlan> psucc_fixed(const KrausSet& k);

/// Searches the unitary mixing freedom for the decomposition minimizing
/// sum_i ||B_i||^2. The result never exceeds the input decomposition's value
/// and never undercuts ||Lambda(I)|| beyond slack.
StochasticityResult minimize_stochasticity(const KrausSet& k,
                                           const OptimizerOptions& options = {});

/// True when sigma matches the triangle lower bound ||Lambda(I)|| within
/// tol, which proves the decomposition optimal.
bool certify(double sigma, const KrausSet& k, double tol = 1e-6);

/// minimize_stochasticity followed by psucc_fixed on the winner.
RealizationPlan plan_channel(const KrausSet& k, const OptimizerOptions& options = {});

}  // namespace channelforge
