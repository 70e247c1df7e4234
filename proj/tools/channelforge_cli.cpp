// Command-line frontend for the channelforge shared library. Everything goes
// through the public C API; the JSON documents it returns are written
// verbatim, so library and CLI artifacts are byte-identical.

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "channelforge.h"

namespace {

using nlohmann::json;

constexpr std::uint64_t kDefaultSeed = 12345;

int exit_code_for(cf_status status) {
    switch (status) {
        case CF_OK:
            return 0;
        case CF_ERROR_PARSE:
        case CF_ERROR_BAD_ARGUMENT:
        case CF_ERROR_IO:
            return 1;
        case CF_ERROR_INVALID_CHANNEL:
            return 2;
        case CF_ERROR_OPTIMIZER:
        case CF_ERROR_NUMERIC:
            return 3;
        case CF_ERROR_INADMISSIBLE:
            return 4;
        case CF_ERROR_PLAN_INCONSISTENT:
            return 5;
    }
    return 1;
}

[[noreturn]] void fail(cf_status status) {
    std::cerr << "error: " << cf_last_error() << "\n";
    std::exit(exit_code_for(status));
}

void check(cf_status status) {
    if (status != CF_OK) {
        fail(status);
    }
}

std::string take_string(char* text) {
    std::string out = text ? text : "";
    cf_string_free(text);
    return out;
}

struct ChannelDeleter {
    void operator()(cf_channel* c) const { cf_channel_free(c); }
};
struct PlanDeleter {
    void operator()(cf_plan* p) const { cf_plan_free(p); }
};
using ChannelHandle = std::unique_ptr<cf_channel, ChannelDeleter>;
using PlanHandle = std::unique_ptr<cf_plan, PlanDeleter>;

struct CommonOptions {
    std::string input_path;
    std::string builtin_spec;
    std::string out_path;
    std::string format = "json";
    std::uint64_t seed = kDefaultSeed;
    int restarts = 0;
    long long shots = 100000;
};

void add_channel_source(CLI::App* cmd, CommonOptions& opts) {
    auto* input = cmd->add_option("--input", opts.input_path, "channel JSON file");
    auto* builtin = cmd->add_option("--builtin", opts.builtin_spec,
                                    "builtin spec: ad:<eps>, constmix:<p>:<s>, id:<d>, "
                                    "depol:<p>, ru:<file>");
    input->excludes(builtin);
    builtin->excludes(input);
}

ChannelHandle load_channel(const CommonOptions& opts) {
    if (opts.input_path.empty() == opts.builtin_spec.empty()) {
        std::cerr << "error: exactly one of --input or --builtin is required\n";
        std::exit(1);
    }
    cf_channel* channel = nullptr;
    if (!opts.input_path.empty()) {
        check(cf_channel_from_file(opts.input_path.c_str(), &channel));
    } else {
        check(cf_channel_from_builtin(opts.builtin_spec.c_str(), &channel));
    }
    return ChannelHandle(channel);
}

PlanHandle analyze_channel(const cf_channel* channel, const CommonOptions& opts) {
    cf_analyze_options analyze_opts;
    cf_analyze_options_init(&analyze_opts);
    analyze_opts.seed = opts.seed;
    if (opts.restarts > 0) {
        analyze_opts.restarts = opts.restarts;
    }
    cf_plan* plan = nullptr;
    check(cf_analyze(channel, &analyze_opts, &plan));
    return PlanHandle(plan);
}

void emit(const CommonOptions& opts, const std::string& text) {
    if (opts.out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(opts.out_path, std::ios::binary);
    if (!out) {
        std::cerr << "error: could not open \"" << opts.out_path << "\" for writing\n";
        std::exit(1);
    }
    out << text;
}

void require_json_format(const CommonOptions& opts, const char* subcommand) {
    if (opts.format != "json") {
        std::cerr << "error: " << subcommand << " only supports --format json\n";
        std::exit(1);
    }
}

std::string format_double(double value) {
    char buffer[64];
    std::snprintf(buffer, sizeof(buffer), "%.12g", value);
    return buffer;
}

int run_validate(const CommonOptions& opts) {
    ChannelHandle channel = load_channel(opts);
    require_json_format(opts, "validate");
    int pass = 0;
    char* report = nullptr;
    check(cf_channel_validate(channel.get(), &pass, &report));
    const std::string text = take_string(report);
    emit(opts, text);
    if (!pass) {
        const json doc = json::parse(text);
        std::cerr << "validation failed: tp_residual = "
                  << format_double(doc["tp_residual"].get<double>()) << "\n";
        return 2;
    }
    return 0;
}

int run_analyze(const CommonOptions& opts) {
    ChannelHandle channel = load_channel(opts);
    require_json_format(opts, "analyze");
    PlanHandle plan = analyze_channel(channel.get(), opts);

    char* plan_text = nullptr;
    check(cf_plan_json(plan.get(), &plan_text));
    char* bounds_text = nullptr;
    check(cf_plan_bounds_json(plan.get(), &bounds_text));

    json doc;
    doc["plan"] = json::parse(take_string(plan_text));
    doc["bounds"] = json::parse(take_string(bounds_text));
    emit(opts, doc.dump(2) + "\n");

    if (!opts.out_path.empty()) {
        const json& bounds = doc["bounds"];
        std::cout << "p_succ = " << format_double(cf_plan_p_succ(plan.get()))
                  << "  sigma = " << format_double(cf_plan_sigma(plan.get()))
                  << "  certified = " << (cf_plan_certified(plan.get()) ? "true" : "false")
                  << "\n";
        std::cout << "triangle_ub = "
                  << format_double(bounds["triangle"]["ub"].get<double>());
        if (bounds.contains("concurrence")) {
            std::cout << "  concurrence = ["
                      << format_double(bounds["concurrence"]["lb"].get<double>()) << ", "
                      << format_double(bounds["concurrence"]["ub"].get<double>()) << "]";
        }
        std::cout << "  assistance = ["
                  << format_double(bounds["assistance"]["lb"].get<double>()) << ", "
                  << format_double(bounds["assistance"]["ub"].get<double>()) << "] ("
                  << bounds["assistance"]["method"].get<std::string>() << ")\n";
    }
    return 0;
}

int run_compile(const CommonOptions& opts) {
    ChannelHandle channel = load_channel(opts);
    require_json_format(opts, "compile");
    PlanHandle plan = analyze_channel(channel.get(), opts);
    const int branches = cf_plan_branch_count(plan.get());

    if (opts.out_path.empty()) {
        json doc;
        doc["networks"] = json::array();
        for (int b = 0; b < branches; ++b) {
            char* net_text = nullptr;
            check(cf_plan_network_json(plan.get(), b, &net_text));
            doc["networks"].push_back(json::parse(take_string(net_text)));
        }
        std::cout << doc.dump(2) << "\n";
        return 0;
    }

    std::error_code ec;
    std::filesystem::create_directories(opts.out_path, ec);
    if (ec) {
        std::cerr << "error: could not create directory \"" << opts.out_path << "\"\n";
        return 1;
    }
    for (int b = 0; b < branches; ++b) {
        char* net_text = nullptr;
        check(cf_plan_network_json(plan.get(), b, &net_text));
        const std::filesystem::path path =
            std::filesystem::path(opts.out_path) / ("network_branch_" + std::to_string(b) + ".json");
        std::ofstream out(path, std::ios::binary);
        out << take_string(net_text);
        if (!out) {
            std::cerr << "error: failed writing \"" << path.string() << "\"\n";
            return 1;
        }
        std::cout << path.string() << "\n";
    }
    return 0;
}

int run_simulate(const CommonOptions& opts) {
    ChannelHandle channel = load_channel(opts);
    require_json_format(opts, "simulate");
    PlanHandle plan = analyze_channel(channel.get(), opts);

    double choi_error = 0.0;
    double p_succ_sim = 0.0;
    check(cf_plan_verify(plan.get(), &choi_error, &p_succ_sim));

    char* report_text = nullptr;
    check(cf_plan_simulate_json(plan.get(), opts.shots, opts.seed, &report_text));
    const std::string text = take_string(report_text);
    emit(opts, text);

    const json report = json::parse(text);
    std::cerr << "p_hat = " << format_double(report["p_hat"].get<double>()) << " +/- "
              << format_double(report["stderr"].get<double>())
              << "  (analytic p_succ = " << format_double(cf_plan_p_succ(plan.get()))
              << ", deterministic p_succ = " << format_double(p_succ_sim)
              << ", choi error = " << format_double(choi_error) << ")\n";
    return 0;
}

struct CurveOptions {
    std::string family = "ad";
    int steps = 21;
    int s_steps = 3;
};

json bounds_for(const cf_plan* plan) {
    char* bounds_text = nullptr;
    check(cf_plan_bounds_json(plan, &bounds_text));
    return json::parse(take_string(bounds_text));
}

int run_curve(const CommonOptions& opts, const CurveOptions& curve) {
    if (opts.format != "csv" && opts.format != "json") {
        std::cerr << "error: curve supports --format csv or json\n";
        return 1;
    }
    if (curve.steps < 2 || (curve.family == "constmix" && curve.s_steps < 2)) {
        std::cerr << "error: curve needs at least 2 steps per axis\n";
        return 1;
    }
    if (curve.family != "ad" && curve.family != "constmix") {
        std::cerr << "error: unknown curve family \"" << curve.family
                  << "\" (expected ad or constmix)\n";
        return 1;
    }

    struct Row {
        std::vector<double> params;
        double p_exact = 0.0;
        double conc_ub = 0.0;
        double conc_lb = 0.0;
        bool certified = false;
    };
    std::vector<Row> rows;

    const auto analyze_spec = [&](const std::string& spec, std::vector<double> params) {
        cf_channel* raw = nullptr;
        check(cf_channel_from_builtin(spec.c_str(), &raw));
        ChannelHandle channel(raw);
        PlanHandle plan = analyze_channel(channel.get(), opts);
        const json bounds = bounds_for(plan.get());
        Row row;
        row.params = std::move(params);
        row.p_exact = cf_plan_p_succ(plan.get());
        row.conc_ub = bounds["concurrence"]["ub"].get<double>();
        row.conc_lb = bounds["concurrence"]["lb"].get<double>();
        row.certified = cf_plan_certified(plan.get()) != 0;
        rows.push_back(std::move(row));
    };

    if (curve.family == "ad") {
        for (int i = 0; i < curve.steps; ++i) {
            const double eps = static_cast<double>(i) / (curve.steps - 1);
            analyze_spec("ad:" + std::to_string(eps), {eps});
        }
    } else {
        for (int i = 0; i < curve.steps; ++i) {
            const double p = static_cast<double>(i) / (curve.steps - 1);
            for (int k = 0; k < curve.s_steps; ++k) {
                const double s = 0.5 + 0.5 * static_cast<double>(k) / (curve.s_steps - 1);
                analyze_spec("constmix:" + std::to_string(p) + ":" + std::to_string(s), {p, s});
            }
        }
    }

    const bool two_params = curve.family == "constmix";
    if (opts.format == "csv") {
        std::string text = two_params ? "p,s,p_exact,conc_ub,conc_lb,certified\n"
                                      : "eps,p_exact,conc_ub,conc_lb,certified\n";
        for (const Row& row : rows) {
            for (double param : row.params) {
                text += format_double(param) + ",";
            }
            text += format_double(row.p_exact) + "," + format_double(row.conc_ub) + "," +
                    format_double(row.conc_lb) + "," + (row.certified ? "1" : "0") + "\n";
        }
        emit(opts, text);
    } else {
        json doc = json::array();
        for (const Row& row : rows) {
            json entry;
            if (two_params) {
                entry["p"] = row.params[0];
                entry["s"] = row.params[1];
            } else {
                entry["eps"] = row.params[0];
            }
            entry["p_exact"] = row.p_exact;
            entry["conc_ub"] = row.conc_ub;
            entry["conc_lb"] = row.conc_lb;
            entry["certified"] = row.certified;
            doc.push_back(std::move(entry));
        }
        emit(opts, doc.dump(2) + "\n");
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Stochastic linear-optics realization of qudit channels"};
    app.require_subcommand(1);

    CommonOptions opts;
    CurveOptions curve;

    const auto add_common = [&](CLI::App* cmd, bool with_channel) {
        if (with_channel) {
            add_channel_source(cmd, opts);
        }
        cmd->add_option("--seed", opts.seed, "optimizer / sampler seed")
            ->default_val(kDefaultSeed);
        cmd->add_option("--restarts", opts.restarts, "optimizer restarts (default 32)");
        cmd->add_option("--out", opts.out_path, "output path");
        cmd->add_option("--format", opts.format, "json or csv");
    };

    CLI::App* validate = app.add_subcommand("validate", "check trace preservation");
    add_common(validate, true);
    CLI::App* analyze = app.add_subcommand(
        "analyze", "optimal switching plan, stochasticity and bounds");
    add_common(analyze, true);
    CLI::App* compile = app.add_subcommand(
        "compile", "beamsplitter/phase-shifter network per plan branch");
    add_common(compile, true);
    CLI::App* simulate =
        app.add_subcommand("simulate", "Monte Carlo of the switched scheme");
    add_common(simulate, true);
    simulate->add_option("--shots", opts.shots, "Monte Carlo shots")->default_val(100000);
    CLI::App* curve_cmd =
        app.add_subcommand("curve", "parameter sweep with concurrence bounds");
    add_common(curve_cmd, false);
    curve_cmd->add_option("--family", curve.family, "ad or constmix")->default_val("ad");
    curve_cmd->add_option("--steps", curve.steps, "grid points on the primary axis")
        ->default_val(21);
    curve_cmd->add_option("--s-steps", curve.s_steps, "grid points on the s axis (constmix)")
        ->default_val(3);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    if (curve_cmd->parsed() && opts.format == "json" && curve_cmd->count("--format") == 0) {
        opts.format = "csv";
    }

    if (validate->parsed()) {
        return run_validate(opts);
    }
    if (analyze->parsed()) {
        return run_analyze(opts);
    }
    if (compile->parsed()) {
        return run_compile(opts);
    }
    if (simulate->parsed()) {
        return run_simulate(opts);
    }
    if (curve_cmd->parsed()) {
        return run_curve(opts, curve);
    }
    return 1;
}
