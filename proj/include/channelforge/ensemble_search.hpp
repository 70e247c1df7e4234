#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <vector>

#include "channelforge/matrix.hpp"

namespace channelforge {

inline constexpr std::uint64_t kDefaultSeed = 12345;

struct OptimizerOptions {
    std::uint64_t seed = kDefaultSeed;
    int restarts = 32;
    int max_iterations = 2000;      ///< rotation sweeps per restart
    double improvement_tol = 1e-10;
    int improvement_window = 50;    ///< sweeps without improvement before stopping
    int n_out = 0;                  ///< 0: rank^2 capped at 16 (never below the input size)
    int threads = 0;                ///< 0: CHANNELFORGE_THREADS or hardware concurrency
};

struct RestartDiagnostics {
    int index = 0;
    double value = 0.0;
    int iterations = 0;
};

struct SearchTrace {
    std::vector<RestartDiagnostics> restarts;
    int best_restart = -1;
    bool reached_floor = false;
};

/// Additive objective over the branches of a decomposition. When a floor is
/// known (a proven lower bound on the total), the search stops as soon as it
/// is reached within floor_slack.
struct EnsembleObjective {
    std::function<double(const CMat&)> branch_cost;
    double floor = -std::numeric_limits<double>::infinity();
    double floor_slack = 1e-7;
};

struct EnsembleSearchResult {
    std::vector<CMat> branches;
    double value = 0.0;
    SearchTrace trace;
};

/// Minimizes sum_i cost(B_i) over all decompositions B_i = sum_j u(i,j) A_j
/// with u an n_out x n isometry (n the basis size). The unitary freedom is
/// explored through seeded restarts, each refined by line searches along the
/// two-mode rotation generators of the unitary group; restart 0 always starts
/// from the input decomposition itself, so the result is never worse than it.
EnsembleSearchResult minimize_ensemble_cost(const std::vector<CMat>& basis,
                                            int n_out,
                                            const EnsembleObjective& objective,
                                            const OptimizerOptions& options);

/// Effective worker count after applying the CHANNELFORGE_THREADS cap.
int resolve_thread_count(int requested);

}  // namespace channelforge
