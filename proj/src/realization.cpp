#include "channelforge/realization.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace channelforge {

namespace {

int default_n_out(const KrausSet& k) {
    const int n = static_cast<int>(k.operators.size());
    const int rank = choi_rank(kraus_to_choi(k));
    return std::max(n, std::min(rank * rank, 16));
}

}  // namespace

std::pair<double, RealizationPlan> psucc_fixed(const KrausSet& k) {
    require_valid(k);
    double sigma = 0.0;
    std::vector<double> norms;
    norms.reserve(k.operators.size());
    for (const CMat& op : k.operators) {
        const double norm = op_norm(op);
        if (norm < tolerances().zero_operator) {
            throw Error(ErrorCode::BadArgument,
                        "psucc_fixed requires zero operators to be pruned first");
        }
        norms.push_back(norm);
        sigma += norm * norm;
    }
    RealizationPlan plan;
    plan.d = k.d;
    plan.sigma = sigma;
    plan.p_succ = 1.0 / sigma;
    plan.branches.reserve(k.operators.size());
    for (std::size_t i = 0; i < k.operators.size(); ++i) {
        PlanBranch branch;
        branch.probability = norms[i] * norms[i] / sigma;
        branch.kraus_tilde = k.operators[i] / norms[i];
        plan.branches.push_back(std::move(branch));
    }
    return {plan.p_succ, plan};
}

StochasticityResult minimize_stochasticity(const KrausSet& k, const OptimizerOptions& options) {
    require_valid(k);
    const int n = static_cast<int>(k.operators.size());
    int n_out = options.n_out > 0 ? options.n_out : default_n_out(k);
    if (n_out < n) {
        throw Error(ErrorCode::BadArgument, "n_out is smaller than the input decomposition");
    }

    EnsembleObjective objective;
    objective.branch_cost = [](const CMat& b) { return op_norm_sq(b); };
    objective.floor = op_norm(channel_on_identity(k));
    objective.floor_slack = 1e-7;

    EnsembleSearchResult search = minimize_ensemble_cost(k.operators, n_out, objective, options);

    StochasticityResult result;
    result.decomposition.d = k.d;
    for (CMat& branch : search.branches) {
        if (branch.norm() >= tolerances().zero_operator) {
            result.decomposition.operators.push_back(std::move(branch));
        }
    }
    if (result.decomposition.operators.empty()) {
        throw Error(ErrorCode::Optimizer, "optimizer returned an empty decomposition");
    }
    result.sigma = search.value;
    result.trace = std::move(search.trace);
    return result;
}

bool certify(double sigma, const KrausSet& k, double tol) {
    const double floor = op_norm(channel_on_identity(k));
    return std::abs(sigma - floor) <= tol;
}

RealizationPlan plan_channel(const KrausSet& k, const OptimizerOptions& options) {
    StochasticityResult best = minimize_stochasticity(k, options);
    auto [p_succ, plan] = psucc_fixed(best.decomposition);
    plan.certified_optimal = certify(plan.sigma, k);
    const double lower = 1.0 / static_cast<double>(k.d) - 1e-9;
    if (plan.p_succ < lower || plan.p_succ > 1.0 + 1e-9) {
        std::ostringstream msg;
        msg << "success probability " << plan.p_succ << " escapes [1/d, 1]";
        throw Error(ErrorCode::Optimizer, msg.str());
    }
    return plan;
}

}  // namespace channelforge
