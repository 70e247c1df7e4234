#include "channelforge/json_io.hpp"

#include <fstream>
#include <sstream>

namespace channelforge {

namespace {

double number_field(const Json& j, const char* key) {
    if (!j.contains(key) || !j[key].is_number()) {
        throw Error(ErrorCode::Parse, std::string("missing or non-numeric field \"") + key + "\"");
    }
    return j[key].get<double>();
}

int int_field(const Json& j, const char* key) {
    if (!j.contains(key) || !j[key].is_number_integer()) {
        throw Error(ErrorCode::Parse, std::string("missing or non-integer field \"") + key + "\"");
    }
    return j[key].get<int>();
}

Json real_part_grid(const CMat& m, bool imaginary) {
    Json rows = Json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        Json row = Json::array();
        for (Eigen::Index jj = 0; jj < m.cols(); ++jj) {
            row.push_back(imaginary ? m(i, jj).imag() : m(i, jj).real());
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

double parse_real(const std::string& text, const std::string& what) {
    try {
        std::size_t used = 0;
        const double value = std::stod(text, &used);
        if (used != text.size()) {
            throw std::invalid_argument(text);
        }
        return value;
    } catch (const std::exception&) {
        throw Error(ErrorCode::Parse, "could not parse " + what + " from \"" + text + "\"");
    }
}

}  // namespace

Json matrix_to_json(const CMat& m) {
    Json j;
    j["re"] = real_part_grid(m, false);
    j["im"] = real_part_grid(m, true);
    return j;
}

CMat matrix_from_json(const Json& j) {
    if (!j.is_object() || !j.contains("re") || !j.contains("im")) {
        throw Error(ErrorCode::Parse, "matrix must be an object with \"re\" and \"im\" grids");
    }
    const Json& re = j["re"];
    const Json& im = j["im"];
    if (!re.is_array() || !im.is_array() || re.empty() || re.size() != im.size()) {
        throw Error(ErrorCode::Parse, "matrix grids must be equal-shaped non-empty arrays");
    }
    const std::size_t rows = re.size();
    const std::size_t cols = re[0].is_array() ? re[0].size() : 0;
    if (cols == 0) {
        throw Error(ErrorCode::Parse, "matrix rows must be non-empty arrays");
    }
    CMat m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    for (std::size_t i = 0; i < rows; ++i) {
        if (!re[i].is_array() || re[i].size() != cols || !im[i].is_array() || im[i].size() != cols) {
            throw Error(ErrorCode::Parse, "matrix grids must be rectangular and aligned");
        }
        for (std::size_t c = 0; c < cols; ++c) {
            if (!re[i][c].is_number() || !im[i][c].is_number()) {
                throw Error(ErrorCode::Parse, "matrix entries must be numbers");
            }
            m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c)) =
                Complex(re[i][c].get<double>(), im[i][c].get<double>());
        }
    }
    return m;
}

Json channel_to_json(const KrausSet& k) {
    Json j;
    j["d"] = k.d;
    Json ops = Json::array();
    for (const CMat& op : k.operators) {
        ops.push_back(matrix_to_json(op));
    }
    j["kraus"] = std::move(ops);
    return j;
}

KrausSet channel_from_json(const Json& j) {
    if (!j.is_object()) {
        throw Error(ErrorCode::Parse, "channel document must be a JSON object");
    }
    const int d = int_field(j, "d");
    if (d < 1) {
        throw Error(ErrorCode::Parse, "channel dimension must be positive");
    }
    const bool has_kraus = j.contains("kraus");
    const bool has_choi = j.contains("choi");
    if (has_kraus == has_choi) {
        throw Error(ErrorCode::Parse, "channel document needs exactly one of \"kraus\" or \"choi\"");
    }
    if (has_kraus) {
        if (!j["kraus"].is_array() || j["kraus"].empty()) {
            throw Error(ErrorCode::Parse, "\"kraus\" must be a non-empty array of matrices");
        }
        KrausSet k;
        k.d = d;
        for (const Json& op : j["kraus"]) {
            CMat m = matrix_from_json(op);
            if (m.rows() != d || m.cols() != d) {
                throw Error(ErrorCode::Parse, "Kraus operators must be d x d");
            }
            k.operators.push_back(std::move(m));
        }
        return k;
    }
    CMat choi = matrix_from_json(j["choi"]);
    if (choi.rows() != static_cast<Eigen::Index>(d) * d || choi.rows() != choi.cols()) {
        throw Error(ErrorCode::Parse, "Choi matrix must be d^2 x d^2");
    }
    return choi_to_kraus(ChoiState{d, std::move(choi)});
}

Json plan_to_json(const RealizationPlan& plan) {
    Json j;
    j["p_succ"] = plan.p_succ;
    j["sigma"] = plan.sigma;
    j["certified_optimal"] = plan.certified_optimal;
    j["d"] = plan.d;
    Json branches = Json::array();
    for (const PlanBranch& branch : plan.branches) {
        Json b;
        b["p"] = branch.probability;
        b["kraus_tilde"] = matrix_to_json(branch.kraus_tilde);
        branches.push_back(std::move(b));
    }
    j["branches"] = std::move(branches);
    return j;
}

RealizationPlan plan_from_json(const Json& j) {
    RealizationPlan plan;
    plan.p_succ = number_field(j, "p_succ");
    plan.sigma = number_field(j, "sigma");
    plan.d = int_field(j, "d");
    if (!j.contains("certified_optimal") || !j["certified_optimal"].is_boolean()) {
        throw Error(ErrorCode::Parse, "missing boolean field \"certified_optimal\"");
    }
    plan.certified_optimal = j["certified_optimal"].get<bool>();
    if (!j.contains("branches") || !j["branches"].is_array() || j["branches"].empty()) {
        throw Error(ErrorCode::Parse, "plan needs a non-empty \"branches\" array");
    }
    for (const Json& b : j["branches"]) {
        PlanBranch branch;
        branch.probability = number_field(b, "p");
        if (!b.contains("kraus_tilde")) {
            throw Error(ErrorCode::Parse, "plan branch needs \"kraus_tilde\"");
        }
        branch.kraus_tilde = matrix_from_json(b["kraus_tilde"]);
        plan.branches.push_back(std::move(branch));
    }
    return plan;
}

Json network_to_json(const OpticalNetwork& net) {
    Json j;
    j["m"] = net.m;
    j["encoding"] = net.encoding;
    Json elements = Json::array();
    for (const OpticalElement& e : net.elements) {
        Json el;
        if (e.kind == OpticalElement::Kind::Beamsplitter) {
            el["kind"] = "bs";
            el["modes"] = Json::array({e.mode_a, e.mode_b});
            el["theta"] = e.theta;
            el["phi"] = e.phi;
        } else {
            el["kind"] = "ps";
            el["mode"] = e.mode_a;
            el["phi"] = e.phi;
        }
        elements.push_back(std::move(el));
    }
    j["elements"] = std::move(elements);
    return j;
}

OpticalNetwork network_from_json(const Json& j) {
    OpticalNetwork net;
    net.m = int_field(j, "m");
    net.encoding = int_field(j, "encoding");
    if (net.m < 1 || net.encoding < 0 || net.encoding > net.m) {
        throw Error(ErrorCode::Parse, "network mode counts are inconsistent");
    }
    if (!j.contains("elements") || !j["elements"].is_array()) {
        throw Error(ErrorCode::Parse, "network needs an \"elements\" array");
    }
    for (const Json& el : j["elements"]) {
        if (!el.contains("kind") || !el["kind"].is_string()) {
            throw Error(ErrorCode::Parse, "element needs a \"kind\"");
        }
        const std::string kind = el["kind"].get<std::string>();
        if (kind == "bs") {
            if (!el.contains("modes") || !el["modes"].is_array() || el["modes"].size() != 2) {
                throw Error(ErrorCode::Parse, "beamsplitter needs \"modes\": [i, j]");
            }
            const int a = el["modes"][0].get<int>();
            const int b = el["modes"][1].get<int>();
            if (a < 0 || b < 0 || a >= net.m || b >= net.m || a == b) {
                throw Error(ErrorCode::Parse, "beamsplitter modes out of range");
            }
            net.elements.push_back(OpticalElement::beamsplitter(
                a, b, number_field(el, "theta"), number_field(el, "phi")));
        } else if (kind == "ps") {
            const int mode = int_field(el, "mode");
            if (mode < 0 || mode >= net.m) {
                throw Error(ErrorCode::Parse, "phase shifter mode out of range");
            }
            net.elements.push_back(OpticalElement::phase_shifter(mode, number_field(el, "phi")));
        } else {
            throw Error(ErrorCode::Parse, "unknown element kind \"" + kind + "\"");
        }
    }
    return net;
}

Json validation_to_json(const ValidationReport& report) {
    Json j;
    j["d"] = report.d;
    j["operator_count"] = report.operator_count;
    j["tp_residual"] = report.tp_residual;
    j["operator_norms"] = report.operator_norms;
    j["trace_preserving"] = report.trace_preserving;
    j["all_admissible"] = report.all_admissible;
    j["pass"] = report.pass;
    return j;
}

ValidationReport validation_from_json(const Json& j) {
    ValidationReport report;
    report.d = int_field(j, "d");
    report.operator_count = j.at("operator_count").get<std::size_t>();
    report.tp_residual = number_field(j, "tp_residual");
    report.operator_norms = j.at("operator_norms").get<std::vector<double>>();
    report.trace_preserving = j.at("trace_preserving").get<bool>();
    report.all_admissible = j.at("all_admissible").get<bool>();
    report.pass = j.at("pass").get<bool>();
    return report;
}

Json bounds_to_json(const BoundsReport& report) {
    Json j;
    j["extremal"] = {{"lb", report.extremal_lb}, {"ub", report.extremal_ub}, {"method", "exact"}};
    j["triangle"] = {{"ub", report.triangle_ub}, {"method", "exact"}};
    if (report.concurrence_lb && report.concurrence_ub) {
        j["concurrence"] = {{"lb", *report.concurrence_lb},
                            {"ub", *report.concurrence_ub},
                            {"method", "exact"}};
    }
    j["assistance"] = {{"ea", report.assistance_value},
                       {"lb", report.assistance_lb},
                       {"ub", report.assistance_ub},
                       {"method", report.assistance_exact ? "exact" : "estimate"}};
    j["p_succ"] = report.p_succ;
    j["sigma"] = report.sigma;
    j["certified_optimal"] = report.certified_optimal;
    return j;
}

BoundsReport bounds_from_json(const Json& j) {
    BoundsReport report;
    report.extremal_lb = number_field(j.at("extremal"), "lb");
    report.extremal_ub = number_field(j.at("extremal"), "ub");
    report.triangle_ub = number_field(j.at("triangle"), "ub");
    if (j.contains("concurrence")) {
        report.concurrence_lb = number_field(j["concurrence"], "lb");
        report.concurrence_ub = number_field(j["concurrence"], "ub");
    }
    report.assistance_value = number_field(j.at("assistance"), "ea");
    report.assistance_lb = number_field(j.at("assistance"), "lb");
    report.assistance_ub = number_field(j.at("assistance"), "ub");
    report.assistance_exact = j.at("assistance").at("method").get<std::string>() == "exact";
    report.p_succ = number_field(j, "p_succ");
    report.sigma = number_field(j, "sigma");
    report.certified_optimal = j.at("certified_optimal").get<bool>();
    return report;
}

Json simulation_to_json(const MonteCarloReport& report) {
    Json j;
    j["p_hat"] = report.p_hat;
    j["stderr"] = report.std_err;
    j["shots"] = report.shots;
    j["seed"] = report.seed;
    j["rho_hat"] = matrix_to_json(report.rho_hat);
    return j;
}

MonteCarloReport simulation_from_json(const Json& j) {
    MonteCarloReport report;
    report.p_hat = number_field(j, "p_hat");
    report.std_err = number_field(j, "stderr");
    report.shots = j.at("shots").get<long long>();
    report.seed = j.at("seed").get<std::uint64_t>();
    report.rho_hat = matrix_from_json(j.at("rho_hat"));
    return report;
}

std::string dump_json(const Json& j) {
    return j.dump(2) + "\n";
}

Json parse_json(const std::string& text) {
    try {
        return Json::parse(text);
    } catch (const Json::parse_error& e) {
        std::ostringstream msg;
        msg << "JSON syntax error at byte " << e.byte << ": " << e.what();
        throw Error(ErrorCode::Parse, msg.str());
    }
}

KrausSet channel_from_builtin(const std::string& spec) {
    std::vector<std::string> parts;
    std::size_t start = 0;
    while (true) {
        const std::size_t colon = spec.find(':', start);
        if (colon == std::string::npos) {
            parts.push_back(spec.substr(start));
            break;
        }
        parts.push_back(spec.substr(start, colon - start));
        start = colon + 1;
    }
    const std::string& family = parts[0];
    if (family == "ad" && parts.size() == 2) {
        return make_amplitude_damping(parse_real(parts[1], "damping parameter"));
    }
    if (family == "constmix" && parts.size() == 3) {
        return make_constant_output_mix(parse_real(parts[1], "mixing probability"),
                                        parse_real(parts[2], "output weight"));
    }
    if (family == "id" && parts.size() == 2) {
        return make_identity_channel(static_cast<int>(parse_real(parts[1], "dimension")));
    }
    if (family == "depol" && parts.size() == 2) {
        return make_depolarizing(parse_real(parts[1], "depolarizing parameter"));
    }
    if (family == "ru" && parts.size() >= 2) {
        const std::string path = spec.substr(3);
        const Json doc = parse_json(read_text_file(path));
        if (!doc.contains("pairs") || !doc["pairs"].is_array() || doc["pairs"].empty()) {
            throw Error(ErrorCode::Parse, "random-unitary file needs a \"pairs\" array");
        }
        std::vector<std::pair<double, CMat>> pairs;
        for (const Json& entry : doc["pairs"]) {
            pairs.emplace_back(number_field(entry, "q"), matrix_from_json(entry.at("u")));
        }
        return make_random_unitary_channel(pairs);
    }
    throw Error(ErrorCode::Parse,
                "unknown builtin channel \"" + spec +
                    "\"; expected ad:<eps>, constmix:<p>:<s>, id:<d>, depol:<p> or ru:<file>");
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(ErrorCode::Io, "could not open \"" + path + "\" for reading");
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw Error(ErrorCode::Io, "could not open \"" + path + "\" for writing");
    }
    out << content;
    if (!out) {
        throw Error(ErrorCode::Io, "failed while writing \"" + path + "\"");
    }
}

}  // namespace channelforge
