#include "evostab/config.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>

#include "evostab/errors.hpp"

namespace evostab {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

Json parse_scalar(const std::string& text) {
    if (text == "true") return true;
    if (text == "false") return false;
    try {
        std::size_t used = 0;
        const double v = std::stod(text, &used);
        // non-finite values stay strings ("inf" exponents); JSON cannot
        // round-trip them as numbers
        if (used == text.size() && std::isfinite(v)) return v;
    } catch (const std::exception&) {
    }
    return text;
}

void insert_dotted(Json& root, const std::string& key, const Json& value) {
    Json* node = &root;
    std::size_t pos = 0;
    while (true) {
        const auto dot = key.find('.', pos);
        const std::string part = key.substr(pos, dot == std::string::npos ? dot : dot - pos);
        if (part.empty()) throw ConfigError("empty key segment in '" + key + "'");
        if (dot == std::string::npos) {
            (*node)[part] = value;
            return;
        }
        node = &(*node)[part];
        pos = dot + 1;
    }
}

} // namespace

Json parse_config_text(const std::string& text) {
    for (char ch : text) {
        if (std::isspace(static_cast<unsigned char>(ch))) continue;
        if (ch == '{') {
            try {
                return Json::parse(text);
            } catch (const Json::parse_error& e) {
                throw ConfigError(std::string("config JSON parse error: ") + e.what());
            }
        }
        break;
    }
    Json root = Json::object();
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty())
            throw ConfigError("config line " + std::to_string(lineno) + ": empty key or value");
        insert_dotted(root, key, parse_scalar(value));
    }
    return root;
}

Json load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str());
}

std::string config_hash(const Json& cfg) {
    const std::string dump = cfg.dump();
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : dump) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

Grid grid_from_config(const Json& cfg) {
    if (!cfg.contains("grid") || !cfg["grid"].contains("T") || !cfg["grid"].contains("dt"))
        throw ConfigError("config needs grid.T and grid.dt");
    const double T = cfg["grid"]["T"].get<double>();
    const double dt = cfg["grid"]["dt"].get<double>();
    if (!(T > 0.0) || !(dt > 0.0) || dt > T)
        throw ConfigError("grid requires T > 0, dt > 0, dt <= T");
    return Grid::over(0.0, T, dt);
}

MildSolveConfig solver_from_config(const Json& cfg, double default_dt) {
    MildSolveConfig s;
    s.dt = default_dt;
    if (cfg.contains("solver")) {
        const Json& j = cfg["solver"];
        if (j.contains("dt")) s.dt = j["dt"].get<double>();
        if (j.contains("max_iters")) s.max_picard_iters = j["max_iters"].get<std::size_t>();
        if (j.contains("tol")) s.fixed_point_tol = j["tol"].get<double>();
        if (j.contains("chunk")) s.chunk_length = j["chunk"].get<double>();
    }
    if (!(s.dt > 0.0) || !(s.fixed_point_tol > 0.0) || s.max_picard_iters == 0 ||
        !(s.chunk_length > 0.0))
        throw ConfigError("solver fields must be positive");
    return s;
}

Exponent exponent_from(const Json& v) {
    if (v.is_string()) return Exponent::parse(v.get<std::string>());
    if (v.is_number()) {
        const double p = v.get<double>();
        return std::isfinite(p) ? Exponent::finite(p) : Exponent::inf();
    }
    throw ConfigError("exponent must be a number or \"inf\"");
}

ModelBundle build_model(const Json& cfg, const MildSolveConfig& solver) {
    if (!cfg.contains("model") || !cfg["model"].contains("kind"))
        throw ConfigError("config needs model.kind");
    const Json& m = cfg["model"];
    const std::string kind = m["kind"].get<std::string>();

    ModelBundle out;
    out.kind = kind;

    const std::string g_name = m.value("g", std::string("none"));
    const double g_param = m.value("g_param", 1.0);

    if (kind == "closed_form_linear") {
        const double rate = m.value("rate", 1.0);
        out.dim = 1;
        out.linear_part = scalar_exponential_family(rate);
        if (g_name == "none") {
            out.family = *out.linear_part;
        } else {
            const ScalarReaction g = reaction_preset(g_name, g_param);
            out.reaction = Nonlinearity{
                [g](double t, const State& x) { return State{g.evaluate(t, x[0])}; },
                g.lipschitz_L, g.vanishes_at_zero};
            out.family = generate_family(*out.linear_part, *out.reaction, solver);
        }
        return out;
    }
    if (kind == "scalar_h") {
        out.dim = 1;
        out.field = scalar_field_preset(m.value("h", std::string("constant")),
                                        m.value("h_param", 0.0));
        out.family = scalar_flow_family(out.field);
        return out;
    }
    if (kind == "spectral_heat") {
        const auto n_modes = m.value("n_modes", std::size_t{16});
        out.dim = n_modes;
        out.heat = std::make_shared<SpectralHeatModel>(n_modes, reaction_preset(g_name, g_param));
        out.linear_part = out.heat->linear_family();
        out.reaction = out.heat->nemytsky();
        out.family = out.heat->mild_family(solver);
        return out;
    }
    throw ConfigError("unknown model.kind: " + kind);
}

Json signal_to_json(const SampledSignal& s) {
    Json values = Json::array();
    for (std::size_t k = 0; k < s.nodes(); ++k) {
        Json node = Json::array();
        for (std::size_t c = 0; c < s.dim(); ++c) node.push_back(s.at(k, c));
        values.push_back(std::move(node));
    }
    return Json{{"t0", s.t0()}, {"dt", s.dt()}, {"values", std::move(values)}};
}

SampledSignal signal_from_json(const Json& j) {
    const auto& values = j.at("values");
    if (!values.is_array() || values.empty()) throw ConfigError("signal JSON needs values");
    const std::size_t dim = values.front().size();
    SampledSignal s(Grid(j.at("t0").get<double>(), j.at("dt").get<double>(), values.size()), dim);
    for (std::size_t k = 0; k < values.size(); ++k) {
        State v = values[k].get<State>();
        s.set_node(k, v);
    }
    return s;
}

namespace {

Json exponent_to_json(const Exponent& e) {
    if (e.is_inf()) return "inf";
    return e.value();
}

} // namespace

Json report_to_json(const AdmissibilityReport& rep) {
    Json j{{"p", exponent_to_json(rep.p)},
           {"q", exponent_to_json(rep.q)},
           {"K_estimate", rep.K_estimate},
           {"n_test_pairs", rep.n_test_pairs},
           {"seed", rep.seed},
           {"horizon", rep.horizon},
           {"ratios", rep.ratios},
           {"estimate_note", rep.estimate_note},
           {"witness", Json{{"f", signal_to_json(rep.witness_f)},
                            {"g", signal_to_json(rep.witness_g)}}}};
    if (rep.psi_witness) j["psi_witness"] = signal_to_json(*rep.psi_witness);
    return j;
}

Json report_to_json(const StabilityCertificate& cert) {
    Json j{{"N", cert.N},
           {"nu", cert.nu},
           {"provenance", cert.provenance == StabilityCertificate::Provenance::theoretical
                              ? "theoretical"
                              : "empirical"}};
    if (cert.audit) {
        j["audit"] = Json{{"M", cert.audit->M},
                          {"omega", cert.audit->omega},
                          {"K", cert.audit->K},
                          {"C", cert.audit->C},
                          {"d", cert.audit->d},
                          {"c", cert.audit->c},
                          {"p", exponent_to_json(cert.audit->p)},
                          {"q", exponent_to_json(cert.audit->q)},
                          {"gauge_exponent", cert.audit->gauge_exponent}};
    }
    return j;
}

Json report_to_json(const StabilityClassification& cls) {
    Json samples = Json::array();
    for (const auto& s : cls.samples)
        samples.push_back(Json{{"gap", s.gap}, {"value", s.value}});
    return Json{{"uniformly_exponentially_stable", cls.uniformly_exponentially_stable},
                {"uniformly_stable", cls.uniformly_stable},
                {"asymptotically_stable", cls.asymptotically_stable},
                {"fitted_N", cls.fitted_N},
                {"fitted_nu", cls.fitted_nu},
                {"fit_slope", cls.fit_slope},
                {"fit_max_residual", cls.fit_max_residual},
                {"max_estimate", cls.max_estimate},
                {"samples", std::move(samples)}};
}

Json report_to_json(const L1LinfCharacterization& rep) {
    return Json{{"admissibility", report_to_json(rep.admissibility)},
                {"psi_green_sup", rep.psi_green_sup},
                {"input_witness_ok", rep.input_witness_ok},
                {"lip_bounded", rep.lip_bounded},
                {"lip_bound_N", rep.lip_bound_N},
                {"growth_slope", rep.growth_slope},
                {"witness_gap", rep.witness_gap},
                {"pair_bound_violation", rep.pair_bound_violation},
                {"pair_bound_ok", rep.pair_bound_ok},
                {"passed", rep.passed}};
}

Json report_to_json(const BoundednessReport& rep) {
    return Json{{"hypothesis_ok", rep.hypothesis_ok},
                {"zero_defect", rep.zero_defect},
                {"zero_witness_gap", rep.zero_witness_gap},
                {"bound_holds", rep.bound_holds},
                {"max_excess", rep.max_excess}};
}

Json report_to_json(const LipschitzEstimate& est) {
    return Json{{"t", est.t},         {"s", est.s},
                {"value", est.value}, {"n_pairs", est.n_pairs},
                {"seed", est.seed},   {"ratios", est.ratios}};
}

} // namespace evostab
