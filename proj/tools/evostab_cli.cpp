// Batch front door: load a model config, run one command, write CSV signals
// and JSON reports into the output directory.
//
// Exit statuses: 0 ok, 2 invalid config, 3 numeric failure, 4 hypothesis
// violation.

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "CLI11.hpp"

#include "evostab/acceptance_suite.hpp"
#include "evostab/config.hpp"
#include "evostab/errors.hpp"
#include "evostab/lp.hpp"

namespace fs = std::filesystem;
using namespace evostab;

namespace {

struct RunContext {
    Json cfg;
    std::string hash;
    fs::path out_dir;
    std::uint64_t seed = 0;
    Grid grid{0.0, 1.0, 2};
    MildSolveConfig solver;
    std::chrono::steady_clock::time_point started = std::chrono::steady_clock::now();
    Json manifest = Json::object();

    void write_json(const std::string& name, const Json& j) {
        std::ofstream out(out_dir / name);
        out << j.dump(2) << "\n";
        manifest["outputs"].push_back(name);
    }

    void write_signal_csv(const std::string& name, const SampledSignal& s) {
        std::ofstream out(out_dir / name);
        write_csv(out, s);
        manifest["outputs"].push_back(name);
    }

    void finish(const std::string& command) {
        manifest["command"] = command;
        manifest["config_hash"] = hash;
        manifest["seed"] = seed;
        manifest["elapsed_seconds"] =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
        manifest["timestamp"] = static_cast<long long>(
            std::chrono::duration_cast<std::chrono::seconds>(
                std::chrono::system_clock::now().time_since_epoch())
                .count());
        std::ofstream out(out_dir / "run_manifest.json");
        out << manifest.dump(2) << "\n";
    }
};

State parse_initial_state(const Json& cfg, std::size_t dim) {
    State x0(dim, 0.0);
    if (dim >= 1) x0[0] = 1.0; // default: unit first component
    if (!cfg.contains("simulate") || !cfg["simulate"].contains("x0")) return x0;
    const Json& v = cfg["simulate"]["x0"];
    if (v.is_number()) {
        x0.assign(dim, 0.0);
        x0[0] = v.get<double>();
        return x0;
    }
    const std::string text = v.get<std::string>();
    if (text.rfind("mode:", 0) == 0) {
        const auto k = static_cast<std::size_t>(std::stoul(text.substr(5)));
        if (k >= dim) throw ConfigError("simulate.x0 mode index out of range");
        x0.assign(dim, 0.0);
        x0[k] = 1.0;
        return x0;
    }
    // comma-separated components
    x0.clear();
    std::istringstream in(text);
    std::string cell;
    while (std::getline(in, cell, ',')) x0.push_back(std::stod(cell));
    if (x0.size() != dim) throw ConfigError("simulate.x0 has wrong dimension");
    return x0;
}

void cmd_simulate(RunContext& ctx) {
    const ModelBundle model = build_model(ctx.cfg, ctx.solver);
    const double t0 = ctx.cfg.contains("simulate") ? ctx.cfg["simulate"].value("t0", 0.0) : 0.0;
    const State x0 = parse_initial_state(ctx.cfg, model.dim);

    if (model.linear_part && model.reaction) {
        // generated model: certify the discrete-equation defect as we go
        const Grid g(t0, ctx.grid.dt, ctx.grid.n);
        const MildSolution sol =
            solve_mild_on_grid(*model.linear_part, *model.reaction, x0, g, ctx.solver);
        ctx.write_signal_csv("trajectory.csv", sol.path);
        ctx.manifest["residual"] = sol.residual;
        ctx.manifest["iterations"] = sol.iterations;
    } else {
        const Trajectory traj = trajectory(model.family, t0, x0, ctx.grid);
        ctx.write_signal_csv("trajectory.csv", traj.path);
    }
}

SampledSignal green_input(const RunContext& ctx, const ModelBundle& model) {
    std::string spec = "zero";
    if (ctx.cfg.contains("green")) spec = ctx.cfg["green"].value("input", std::string("zero"));
    if (spec == "zero") return SampledSignal(ctx.grid, model.dim);
    if (spec == "bandlimited") return band_limited_signal(ctx.grid, model.dim, ctx.seed);
    if (spec.rfind("indicator:", 0) == 0) {
        std::istringstream in(spec.substr(10));
        std::string a, b, amp;
        std::getline(in, a, ':');
        std::getline(in, b, ':');
        std::getline(in, amp, ':');
        State amplitude(model.dim, 0.0);
        amplitude[0] = amp.empty() ? 1.0 : std::stod(amp);
        return indicator_signal(ctx.grid, std::stod(a), std::stod(b), amplitude);
    }
    if (spec.rfind("csv:", 0) == 0) {
        std::ifstream in(spec.substr(4));
        if (!in) throw ConfigError("cannot open green.input CSV " + spec.substr(4));
        return read_csv(in);
    }
    throw ConfigError("unknown green.input: " + spec);
}

void cmd_green(RunContext& ctx) {
    const ModelBundle model = build_model(ctx.cfg, ctx.solver);
    const SampledSignal f = green_input(ctx, model);
    ctx.write_signal_csv("green.csv", green_apply(model.family, f));
}

void cmd_admissibility(RunContext& ctx) {
    const ModelBundle model = build_model(ctx.cfg, ctx.solver);
    Exponent p = Exponent::finite(2.0), q = Exponent::finite(2.0);
    std::size_t pairs = 36;
    if (ctx.cfg.contains("admissibility")) {
        const Json& a = ctx.cfg["admissibility"];
        if (a.contains("p")) p = exponent_from(a["p"]);
        if (a.contains("q")) q = exponent_from(a["q"]);
        if (a.contains("pairs")) pairs = a["pairs"].get<std::size_t>();
    }
    const AdmissibilityReport rep =
        estimate_admissibility(model.family, p, q, ctx.grid, pairs, ctx.seed);
    Json j = report_to_json(rep);
    j["config_hash"] = ctx.hash;
    ctx.write_json("admissibility_report.json", j);
    std::cout << "K estimate (lower bound) for (L^" << p.str() << ", L^" << q.str()
              << "): " << rep.K_estimate << "\n";
}

void cmd_certify(RunContext& ctx) {
    const ModelBundle model = build_model(ctx.cfg, ctx.solver);
    if (!ctx.cfg.contains("certify"))
        throw ConfigError("certify needs a [certify] section with K or report");
    const Json& c = ctx.cfg["certify"];

    double K = 0.0;
    if (c.contains("K")) {
        K = c["K"].get<double>();
    } else if (c.contains("report")) {
        std::ifstream in(c["report"].get<std::string>());
        if (!in)
            throw ConfigError("cannot open admissibility report '" +
                              c["report"].get<std::string>() +
                              "'; run the admissibility command first");
        Json rep = Json::parse(in);
        K = rep.at("K_estimate").get<double>();
    } else {
        throw ConfigError("certify needs certify.K or certify.report "
                          "(run the admissibility command first)");
    }

    const Exponent p = c.contains("p") ? exponent_from(c["p"]) : Exponent::finite(2.0);
    const Exponent q = c.contains("q") ? exponent_from(c["q"]) : Exponent::finite(2.0);
    const double M = c.value("M", model.family.growth.M);
    const double omega = std::max(c.value("omega", model.family.growth.omega), 1e-6);

    const StabilityCertificate cert = certify_exponential_stability(K, M, omega, p, q);
    Json j = report_to_json(cert);
    j["config_hash"] = ctx.hash;
    ctx.write_json("certificate.json", j);

    const auto& a = *cert.audit;
    std::cout << "derivation trace\n"
              << "  inputs:         K = " << K << ", M = " << M << ", omega = " << omega
              << ", (p, q) = (" << p.str() << ", " << q.str() << ")\n"
              << "  uniform bound:  C = (K+1) M^2 e^{2 omega} + M e^{omega} = " << a.C << "\n"
              << "  decay window:   solve a_p(d) b_q(d) = 4 K C^2 = " << 4.0 * K * a.C * a.C
              << "  (gauge exponent " << a.gauge_exponent << ")  =>  d = " << a.d << "\n"
              << "  halving:        seminorm at the window <= c = " << a.c << "\n"
              << "  rate:           nu = ln(1/c) / d = " << cert.nu << "\n"
              << "  amplitude:      N = C / c = " << cert.N << "\n";
}

void cmd_classify(RunContext& ctx) {
    const ModelBundle model = build_model(ctx.cfg, ctx.solver);
    const double tol =
        ctx.cfg.contains("classify") ? ctx.cfg["classify"].value("tol", 1e-3) : 1e-3;
    const StabilityClassification cls = classify_stability(
        model.family, ctx.grid, StateSampler{model.dim, 1.0}, tol, ctx.seed);
    Json j = report_to_json(cls);
    j["config_hash"] = ctx.hash;
    ctx.write_json("classification.json", j);
    std::cout << "uniformly exponentially stable: "
              << (cls.uniformly_exponentially_stable ? "yes" : "no")
              << " | uniformly stable: " << (cls.uniformly_stable ? "yes" : "no")
              << " | asymptotically stable: " << (cls.asymptotically_stable ? "yes" : "no")
              << "\n";
    if (cls.uniformly_exponentially_stable)
        std::cout << "fitted N = " << cls.fitted_N << ", nu = " << cls.fitted_nu << "\n";
}

int cmd_reproduce(RunContext& ctx, const std::string& bundle) {
    const auto ids = reproduce_bundle_criteria(bundle);
    Json rows = Json::array();
    bool all_ok = true;
    for (int id : ids) {
        const CriterionResult res = run_acceptance_criterion(id);
        all_ok = all_ok && res.passed;
        std::cout << (res.passed ? "[PASS] " : "[FAIL] ") << res.id << ". " << res.name
                  << " — " << res.detail << " (" << res.seconds << " s)\n";
        rows.push_back(Json{{"id", res.id},
                            {"name", res.name},
                            {"passed", res.passed},
                            {"detail", res.detail}});
    }
    Json j{{"bundle", bundle}, {"results", rows}, {"all_passed", all_ok}};
    j["config_hash"] = ctx.hash;
    ctx.write_json("reproduce_report.json", j);
    return all_ok ? 0 : 3;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"evolution-family stability toolkit"};
    app.require_subcommand(0, 1);

    std::string config_path, out_dir, command, bundle = "all";
    std::uint64_t seed_flag = 0;
    bool seed_set = false;

    app.add_option("--config", config_path, "path to the run configuration");
    app.add_option("--out", out_dir, "output directory (overrides config)");
    app.add_option("--seed", seed_flag, "seed override")->each([&](const std::string&) {
        seed_set = true;
    });
    app.add_option("--command", command, "command name (alternative to subcommands)");

    auto* sim = app.add_subcommand("simulate", "solve the model and write the trajectory");
    auto* grn = app.add_subcommand("green", "apply the Green transform to an input signal");
    auto* adm = app.add_subcommand("admissibility", "estimate the (L^p, L^q) constant K");
    auto* cer = app.add_subcommand("certify", "derive an exponential-stability certificate");
    auto* cls = app.add_subcommand("classify", "classify stability from sampled seminorms");
    auto* rep = app.add_subcommand("reproduce", "run a verification bundle");
    rep->add_option("bundle", bundle, "bundle id (default: all)");
    for (auto* sub : {sim, grn, adm, cer, cls, rep}) sub->fallthrough();

    CLI11_PARSE(app, argc, argv);

#ifdef _OPENMP
    if (const char* threads = std::getenv("EVOSTAB_THREADS"))
        omp_set_num_threads(std::max(1, std::atoi(threads)));
#endif

    try {
        if (sim->parsed()) command = "simulate";
        else if (grn->parsed()) command = "green";
        else if (adm->parsed()) command = "admissibility";
        else if (cer->parsed()) command = "certify";
        else if (cls->parsed()) command = "classify";
        else if (rep->parsed()) command = "reproduce";
        if (command.empty()) throw ConfigError("no command given (see --help)");

        RunContext ctx;
        if (command == "reproduce" && config_path.empty()) {
            ctx.cfg = Json::object();
        } else {
            ctx.cfg = load_config_file(config_path);
        }
        ctx.hash = config_hash(ctx.cfg);
        ctx.seed = seed_set ? seed_flag : ctx.cfg.value("seed", std::uint64_t{1});
        if (seed_set) ctx.cfg["seed"] = ctx.seed; // the hash covers the effective config
        ctx.hash = config_hash(ctx.cfg);

        std::string dir = out_dir;
        if (dir.empty() && ctx.cfg.contains("output_dir"))
            dir = ctx.cfg["output_dir"].get<std::string>();
        if (const char* env = std::getenv("EVOSTAB_OUT")) dir = env;
        if (dir.empty()) dir = "out";
        ctx.out_dir = dir;
        fs::create_directories(ctx.out_dir);
        ctx.manifest["outputs"] = Json::array();

        if (command != "reproduce") {
            ctx.grid = grid_from_config(ctx.cfg);
            ctx.solver = solver_from_config(ctx.cfg, ctx.grid.dt);
        }

        int status = 0;
        if (command == "simulate") cmd_simulate(ctx);
        else if (command == "green") cmd_green(ctx);
        else if (command == "admissibility") cmd_admissibility(ctx);
        else if (command == "certify") cmd_certify(ctx);
        else if (command == "classify") cmd_classify(ctx);
        else if (command == "reproduce") status = cmd_reproduce(ctx, bundle);
        else throw ConfigError("unknown command: " + command);

        ctx.finish(command);
        return status;
    } catch (const ConfigError& e) {
        std::cerr << "invalid config: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "invalid config: " << e.what() << "\n";
        return 2;
    } catch (const HypothesisError& e) {
        std::cerr << "hypothesis violation: " << e.what() << "\n";
        return 4;
    } catch (const std::domain_error& e) {
        std::cerr << "hypothesis violation: " << e.what() << "\n";
        return 4;
    } catch (const ConvergenceError& e) {
        std::cerr << "numeric failure: " << e.what() << " (last residual " << e.last_residual
                  << ")\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "numeric failure: " << e.what() << "\n";
        return 3;
    }
}
