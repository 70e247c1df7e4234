#include "channelforge.h"

#include <cstring>
#include <mutex>
#include <optional>
#include <string>

#include "channelforge/bounds.hpp"
#include "channelforge/channel.hpp"
#include "channelforge/ensemble_search.hpp"
#include "channelforge/focksim.hpp"
#include "channelforge/json_io.hpp"
#include "channelforge/optics.hpp"
#include "channelforge/realization.hpp"

using namespace channelforge;

struct cf_channel {
    KrausSet kraus;
};

struct cf_plan {
    KrausSet channel;
    RealizationPlan plan;
    OptimizerOptions options;
    std::vector<OpticalNetwork> networks;  // compiled on first use
    std::optional<BoundsReport> bounds;
    std::mutex lazy_mutex;
};

namespace {

thread_local std::string t_last_error;

cf_status status_from(const Error& e) {
    t_last_error = e.what();
    switch (e.code()) {
        case ErrorCode::Parse:
            return CF_ERROR_PARSE;
        case ErrorCode::InvalidChannel:
            return CF_ERROR_INVALID_CHANNEL;
        case ErrorCode::Optimizer:
            return CF_ERROR_OPTIMIZER;
        case ErrorCode::Inadmissible:
            return CF_ERROR_INADMISSIBLE;
        case ErrorCode::PlanInconsistent:
            return CF_ERROR_PLAN_INCONSISTENT;
        case ErrorCode::BadArgument:
            return CF_ERROR_BAD_ARGUMENT;
        case ErrorCode::Numeric:
            return CF_ERROR_NUMERIC;
        case ErrorCode::Io:
            return CF_ERROR_IO;
    }
    return CF_ERROR_NUMERIC;
}

template <typename F>
cf_status guarded(F&& body) {
    try {
        body();
        return CF_OK;
    } catch (const Error& e) {
        return status_from(e);
    } catch (const std::exception& e) {
        t_last_error = e.what();
        return CF_ERROR_NUMERIC;
    }
}

char* copy_string(const std::string& text) {
    char* out = new char[text.size() + 1];
    std::memcpy(out, text.c_str(), text.size() + 1);
    return out;
}

cf_status require(bool condition, const char* message) {
    if (condition) {
        return CF_OK;
    }
    t_last_error = message;
    return CF_ERROR_BAD_ARGUMENT;
}

OptimizerOptions resolve_options(const cf_analyze_options* options) {
    OptimizerOptions resolved;
    if (options != nullptr) {
        resolved.seed = options->seed;
        if (options->restarts > 0) {
            resolved.restarts = options->restarts;
        }
        if (options->max_iterations > 0) {
            resolved.max_iterations = options->max_iterations;
        }
        if (options->n_out > 0) {
            resolved.n_out = options->n_out;
        }
        if (options->threads > 0) {
            resolved.threads = options->threads;
        }
    }
    return resolved;
}

void ensure_networks(cf_plan* plan) {
    std::lock_guard<std::mutex> lock(plan->lazy_mutex);
    if (plan->networks.empty()) {
        plan->networks = compile_plan(plan->plan);
    }
}

}  // namespace

extern "C" {

cf_status cf_channel_from_json(const char* json_text, cf_channel** out_channel) {
    if (cf_status bad = require(json_text && out_channel, "null argument"); bad != CF_OK) {
        return bad;
    }
    return guarded([&] {
        *out_channel = new cf_channel{channel_from_json(parse_json(json_text))};
    });
}

cf_status cf_channel_from_file(const char* path, cf_channel** out_channel) {
    if (cf_status bad = require(path && out_channel, "null argument"); bad != CF_OK) {
        return bad;
    }
    return guarded([&] {
        *out_channel = new cf_channel{channel_from_json(parse_json(read_text_file(path)))};
    });
}

cf_status cf_channel_from_builtin(const char* spec, cf_channel** out_channel) {
    if (cf_status bad = require(spec && out_channel, "null argument"); bad != CF_OK) {
        return bad;
    }
    return guarded([&] { *out_channel = new cf_channel{channel_from_builtin(spec)}; });
}

void cf_channel_free(cf_channel* channel) {
    delete channel;
}

int cf_channel_dim(const cf_channel* channel) {
    return channel ? channel->kraus.d : 0;
}

int cf_channel_operator_count(const cf_channel* channel) {
    return channel ? static_cast<int>(channel->kraus.operators.size()) : 0;
}

cf_status cf_channel_json(const cf_channel* channel, char** out_json) {
    if (cf_status bad = require(channel && out_json, "null argument"); bad != CF_OK) {
        return bad;
    }
    return guarded([&] { *out_json = copy_string(dump_json(channel_to_json(channel->kraus))); });
}

cf_status cf_channel_validate(const cf_channel* channel, int* out_pass, char** out_report_json) {
    if (cf_status bad = require(channel != nullptr, "null channel"); bad != CF_OK) {
        return bad;
    }
    return guarded([&] {
        const ValidationReport report = validate(channel->kraus);
        if (out_pass) {
            *out_pass = report.pass ? 1 : 0;
        }
        if (out_report_json) {
            *out_report_json = copy_string(dump_json(validation_to_json(report)));
        }
    });
}

void cf_analyze_options_init(cf_analyze_options* options) {
    if (!options) {
        return;
    }
    const OptimizerOptions defaults;
    options->seed = defaults.seed;
    options->restarts = defaults.restarts;
    options->max_iterations = defaults.max_iterations;
    options->n_out = 0;
    options->threads = 0;
}

cf_status cf_analyze(const cf_channel* channel, const cf_analyze_options* options,
                     cf_plan** out_plan) {
    if (cf_status bad = require(channel && out_plan, "null argument"); bad != CF_OK) {
        return bad;
    }
    return guarded([&] {
        auto plan = std::make_unique<cf_plan>();
        plan->channel = channel->kraus;
        plan->options = resolve_options(options);
        plan->plan = plan_channel(plan->channel, plan->options);
        *out_plan = plan.release();
    });
}

void cf_plan_free(cf_plan* plan) {
    delete plan;
}

double cf_plan_p_succ(const cf_plan* plan) {
    return plan ? plan->plan.p_succ : 0.0;
}

double cf_plan_sigma(const cf_plan* plan) {
    return plan ? plan->plan.sigma : 0.0;
}

int cf_plan_certified(const cf_plan* plan) {
    return plan && plan->plan.certified_optimal ? 1 : 0;
}

int cf_plan_branch_count(const cf_plan* plan) {
    return plan ? static_cast<int>(plan->plan.branches.size()) : 0;
}

cf_status cf_plan_json(const cf_plan* plan, char** out_json) {
    if (cf_status bad = require(plan && out_json, "null argument"); bad != CF_OK) {
        return bad;
    }
    return guarded([&] { *out_json = copy_string(dump_json(plan_to_json(plan->plan))); });
}

cf_status cf_plan_bounds_json(const cf_plan* plan, char** out_json) {
    if (cf_status bad = require(plan && out_json, "null argument"); bad != CF_OK) {
        return bad;
    }
    cf_plan* mutable_plan = const_cast<cf_plan*>(plan);
    return guarded([&] {
        {
            std::lock_guard<std::mutex> lock(mutable_plan->lazy_mutex);
            if (!mutable_plan->bounds) {
                mutable_plan->bounds =
                    full_report(plan->channel, plan->plan, plan->options);
            }
        }
        *out_json = copy_string(dump_json(bounds_to_json(*mutable_plan->bounds)));
    });
}

cf_status cf_plan_network_json(const cf_plan* plan, int branch, char** out_json) {
    if (cf_status bad = require(plan && out_json, "null argument"); bad != CF_OK) {
        return bad;
    }
    if (cf_status bad = require(branch >= 0 && branch < cf_plan_branch_count(plan),
                                "branch index out of range");
        bad != CF_OK) {
        return bad;
    }
    cf_plan* mutable_plan = const_cast<cf_plan*>(plan);
    return guarded([&] {
        ensure_networks(mutable_plan);
        const OpticalNetwork& net = mutable_plan->networks[static_cast<std::size_t>(branch)];
        const CMat realized = effective_kraus(net, plan->plan.d);
        if (max_abs_diff(realized, plan->plan.branches[static_cast<std::size_t>(branch)].kraus_tilde) >
            1e-9) {
            throw Error(ErrorCode::Numeric, "compiled network failed its self-check");
        }
        *out_json = copy_string(dump_json(network_to_json(net)));
    });
}

cf_status cf_plan_verify(const cf_plan* plan, double* out_choi_error, double* out_p_succ_sim) {
    if (cf_status bad = require(plan != nullptr, "null plan"); bad != CF_OK) {
        return bad;
    }
    cf_plan* mutable_plan = const_cast<cf_plan*>(plan);
    return guarded([&] {
        ensure_networks(mutable_plan);
        const DeterministicCheck check =
            effective_channel_choi(plan->plan, mutable_plan->networks);
        const ChoiState target = kraus_to_choi(plan->channel);
        if (out_choi_error) {
            *out_choi_error = max_abs_diff(check.choi, target.matrix);
        }
        if (out_p_succ_sim) {
            *out_p_succ_sim = check.p_succ_sim;
        }
    });
}

cf_status cf_plan_simulate_json(const cf_plan* plan, long long shots, uint64_t seed,
                                char** out_json) {
    if (cf_status bad = require(plan && out_json, "null argument"); bad != CF_OK) {
        return bad;
    }
    cf_plan* mutable_plan = const_cast<cf_plan*>(plan);
    return guarded([&] {
        ensure_networks(mutable_plan);
        const int d = plan->plan.d;
        const CMat mixed = CMat::Identity(d, d) / static_cast<double>(d);
        const MonteCarloReport report =
            monte_carlo(plan->plan, mutable_plan->networks, mixed, shots, seed);
        *out_json = copy_string(dump_json(simulation_to_json(report)));
    });
}

const char* cf_last_error(void) {
    return t_last_error.c_str();
}

void cf_string_free(char* text) {
    delete[] text;
}

const char* cf_version(void) {
    return "0.1.0";
}

}  // extern "C"
