#include "orbitforge/cli.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "experiments.hpp"
#include "orbitforge/io.hpp"
#include "orbitforge/jacobian.hpp"
#include "orbitforge/linalg.hpp"
#include "orbitforge/orbit.hpp"

namespace orbitforge::cli {

namespace {

Real parse_real(const std::string& text, const std::string& what) {
    try {
        std::size_t used = 0;
        Real v = std::stod(text, &used);
        if (used == text.size()) return v;
    } catch (const std::exception&) {
    }
    throw UsageError("cannot parse " + what + ": '" + text + "'");
}

std::string trim(std::string s) {
    const auto first = s.find_first_not_of(" \t");
    if (first == std::string::npos) return "";
    const auto last = s.find_last_not_of(" \t");
    return s.substr(first, last - first + 1);
}

std::vector<std::string> split(const std::string& text) {
    std::vector<std::string> parts;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) parts.push_back(trim(item));
    if (parts.empty() || std::any_of(parts.begin(), parts.end(), [](const std::string& p) { return p.empty(); }))
        throw UsageError("empty entry in list '" + text + "'");
    return parts;
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw UsageError("cannot write " + path);
    f << content;
}

// Polynomial from --roots (kept as roots) or --coeffs (descending, leading first).
MonicPolynomial polynomial_from(const std::string& roots, const std::string& coeffs) {
    if (!roots.empty() && !coeffs.empty()) throw UsageError("give either --roots or --coeffs, not both");
    if (!roots.empty()) return from_roots(parse_complex_list(roots));
    if (coeffs.empty()) throw UsageError("one of --roots or --coeffs is required");
    auto c = parse_complex_list(coeffs);
    if (c.size() < 2) throw UsageError("--coeffs needs degree at least 1");
    if (c.front() == Scalar{}) throw UsageError("leading coefficient must be nonzero");
    std::vector<Scalar> lower;
    for (std::size_t k = c.size() - 1; k >= 1; --k) lower.push_back(c[k] / c.front());
    return MonicPolynomial::from_coefficients(std::move(lower));
}

struct MapFlags {
    std::string rule = "ea";
    std::string schedule = "jacobi";
    std::string roots;
    std::string coeffs;

    void add_to(CLI::App* app) {
        app->add_option("--rule", rule, "Update rule: ws or ea")->capture_default_str();
        app->add_option("--schedule", schedule, "jacobi, gauss-seidel or cyclic-shift")->capture_default_str();
        app->add_option("--roots", roots, "Comma-separated roots, e.g. 1,-1,0.5+2i");
        app->add_option("--coeffs", coeffs, "Comma-separated coefficients, leading first");
    }
    IterationMap map() const { return IterationMap(parse_rule(rule), parse_schedule(schedule), polynomial()); }
    MonicPolynomial polynomial() const { return polynomial_from(roots, coeffs); }
};

Configuration configuration_from(const std::string& text, const MonicPolynomial& p) {
    Configuration c(parse_point_list(text));
    if (c.size() != static_cast<std::size_t>(p.degree()))
        throw UsageError("configuration has " + std::to_string(c.size()) + " entries, degree is " +
                         std::to_string(p.degree()));
    return c;
}

int emit_report(const Json& report, const std::string& path, std::ostream& out) {
    const std::string text = dump_json(report) + "\n";
    if (!path.empty()) write_file(path, text);
    out << text;
    return 0;
}

Json check_list(const std::vector<Check>& checks) {
    Json out = Json::array();
    for (const auto& c : checks) out.push_back(Json{{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
    return out;
}

}  // namespace

Scalar parse_complex(const std::string& raw) {
    const std::string text = trim(raw);
    if (text.empty()) throw UsageError("empty complex number");
    if (text.back() != 'i') return {parse_real(text, "complex number"), 0};
    const std::string body = text.substr(0, text.size() - 1);
    // Split before the sign that starts the imaginary part (not an exponent sign).
    std::size_t split = std::string::npos;
    for (std::size_t k = body.size(); k-- > 1;) {
        if ((body[k] == '+' || body[k] == '-') && body[k - 1] != 'e' && body[k - 1] != 'E') {
            split = k;
            break;
        }
    }
    const std::string re = split == std::string::npos ? "" : body.substr(0, split);
    std::string im = split == std::string::npos ? body : body.substr(split);
    if (im.empty() || im == "+") im = "1";
    if (im == "-") im = "-1";
    return {re.empty() ? 0.0 : parse_real(re, "real part of '" + text + "'"),
            parse_real(im, "imaginary part of '" + text + "'")};
}

ProjectivePoint parse_point(const std::string& raw) {
    const std::string text = trim(raw);
    if (text == "inf" || text == "infinity") return ProjectivePoint::infinity();
    const Scalar z = parse_complex(text);
    if (!is_finite(z)) throw UsageError("non-finite value '" + text + "'");
    return ProjectivePoint::affine(z);
}

std::vector<Scalar> parse_complex_list(const std::string& text) {
    std::vector<Scalar> out;
    for (const auto& part : split(text)) {
        const Scalar z = parse_complex(part);
        if (!is_finite(z)) throw UsageError("non-finite value '" + part + "'");
        out.push_back(z);
    }
    return out;
}

std::vector<ProjectivePoint> parse_point_list(const std::string& text) {
    std::vector<ProjectivePoint> out;
    for (const auto& part : split(text)) out.push_back(parse_point(part));
    return out;
}

UpdateRule parse_rule(const std::string& text) {
    if (text == "ws" || text == "weierstrass") return UpdateRule::Weierstrass;
    if (text == "ea" || text == "ehrlich-aberth") return UpdateRule::EhrlichAberth;
    throw UsageError("unknown rule '" + text + "' (ws or ea)");
}

Schedule parse_schedule(const std::string& text) {
    if (text == "jacobi") return Schedule::Jacobi;
    if (text == "gauss-seidel") return Schedule::GaussSeidel;
    if (text == "cyclic-shift") return Schedule::CyclicShift;
    throw UsageError("unknown schedule '" + text + "' (jacobi, gauss-seidel or cyclic-shift)");
}

std::uint64_t effective_seed(std::uint64_t fallback) {
    if (const char* env = std::getenv("ORBITFORGE_SEED"); env && *env) {
        try {
            std::size_t used = 0;
            auto v = std::stoull(env, &used);
            if (used == std::string(env).size()) return v;
        } catch (const std::exception&) {
        }
        throw UsageError("ORBITFORGE_SEED must be a non-negative integer");
    }
    return fallback;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Simultaneous polynomial root-finding iterations and their periodic orbits", "orbitforge"};
    app.require_subcommand(1);

    // root-find
    auto* rf = app.add_subcommand("root-find", "Run a root finder to convergence");
    MapFlags rf_map;
    rf_map.add_to(rf);
    std::string rf_init, rf_out;
    Real rf_tol = 1e-14;
    int rf_max_iter = 500;
    rf->add_option("--init", rf_init, "Initial configuration (default: perturbed circle)");
    rf->add_option("--tol", rf_tol, "Relative movement tolerance")->capture_default_str();
    rf->add_option("--max-iter", rf_max_iter, "Iteration limit")->capture_default_str()->check(CLI::PositiveNumber);
    rf->add_option("--out", rf_out, "Also write the JSON report here");

    // paper
    auto* paper = app.add_subcommand("paper", "Run a reproduction experiment with its checks");
    std::string experiment, manifest_path, out_dir, json_path, csv_path;
    std::uint64_t seed = 20240611;
    std::map<std::string, std::string> flag_values;
    paper->add_option("name", experiment, "harmonic-cycles, jacobian, ea-divergence, gsw-cycles, gsw-divergence, "
                                          "trace-law or embedding");
    paper->add_option("--manifest", manifest_path, "JSON manifest: name, parameters, seed, outputs");
    paper->add_option("--seed", seed, "Random seed (ORBITFORGE_SEED overrides)");
    paper->add_option("--out-dir", out_dir, "Write <name>.json and <name>.csv here");
    paper->add_option("--out", json_path, "JSON report path");
    paper->add_option("--csv", csv_path, "Trace CSV path");
    bool print_json = false;
    paper->add_flag("--json", print_json, "Print the JSON report instead of the check lines");
    for (const char* key : {"lambda", "lambda-preset", "degree", "roots", "samples", "polys", "starts", "max-iter"})
        paper->add_option(std::string("--") + key, flag_values[key], "Experiment parameter");

    // iterate
    auto* it = app.add_subcommand("iterate", "Iterate a map and record the orbit");
    MapFlags it_map;
    it_map.add_to(it);
    std::string it_init, it_out, it_csv, it_mode = "any";
    int it_max_iter = kDefaultMaxIterations;
    Real it_threshold = kDivergenceThreshold;
    it->add_option("--init", it_init, "Start configuration; inf allowed")->required();
    it->add_option("--max-iter", it_max_iter)->capture_default_str()->check(CLI::PositiveNumber);
    it->add_option("--threshold", it_threshold, "Divergence threshold")->capture_default_str();
    it->add_option("--mode", it_mode, "Divergence mode: any or every")->capture_default_str();
    it->add_option("--out", it_out, "Also write the JSON trace here");
    it->add_option("--csv", it_csv, "Write the trace as CSV");

    // jacobian
    auto* jac = app.add_subcommand("jacobian", "Differentiate one application of a map");
    MapFlags jac_map;
    jac_map.add_to(jac);
    std::string jac_at, jac_method = "dual", jac_charts = "auto";
    jac->add_option("--at", jac_at, "Configuration; inf allowed")->required();
    jac->add_option("--method", jac_method, "dual or fd")->capture_default_str();
    jac->add_option("--charts", jac_charts, "auto (invert points near infinity) or affine")->capture_default_str();

    // cycles
    auto* cyc = app.add_subcommand("cycles", "Harmonic two-cycles of Jacobi Ehrlich-Aberth for a quartic");
    std::string cyc_roots, cyc_coeffs;
    cyc->add_option("--roots", cyc_roots, "Four distinct roots");
    cyc->add_option("--coeffs", cyc_coeffs, "Coefficients, leading first");

    // embed-check
    auto* emb = app.add_subcommand("embed-check", "Compare a map with its extension by extra roots");
    MapFlags emb_map;
    emb_map.add_to(emb);
    std::string emb_at, emb_extra;
    Real emb_tol = 1e-9;
    emb->add_option("--at", emb_at, "Configuration")->required();
    emb->add_option("--extra", emb_extra, "Extra roots appended to the configuration")->required();
    emb->add_option("--tol", emb_tol, "Chordal tolerance")->capture_default_str();

    try {
        app.parse(std::vector<std::string>(args.rbegin(), args.rend()));
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }

    try {
        if (rf->parsed()) {
            RootFindOptions options;
            const MonicPolynomial p = rf_map.polynomial();
            options.rule = parse_rule(rf_map.rule);
            options.schedule = parse_schedule(rf_map.schedule);
            options.tol = rf_tol;
            options.max_iter = rf_max_iter;
            if (!rf_init.empty()) options.init = configuration_from(rf_init, p);
            const auto result = root_find(p, options);
            Json report = {{"command", "root-find"},
                           {"rule", std::string(to_string(options.rule))},
                           {"schedule", std::string(to_string(options.schedule))},
                           {"polynomial", to_json(p)},
                           {"result", to_json(result)}};
            emit_report(report, rf_out, out);
            return result.status == OrbitStatus::Converged ? 0 : 1;
        }

        if (paper->parsed()) {
            Parameters params;
            std::string name = experiment;
            Json outputs;
            if (!manifest_path.empty()) {
                std::ifstream f(manifest_path);
                if (!f) throw UsageError("cannot read manifest " + manifest_path);
                Json manifest;
                try {
                    manifest = Json::parse(f);
                } catch (const Json::exception& e) {
                    throw UsageError(std::string("bad manifest: ") + e.what());
                }
                if (name.empty()) name = manifest.value("name", "");
                if (manifest.contains("seed")) seed = manifest["seed"].get<std::uint64_t>();
                if (manifest.contains("parameters"))
                    for (auto& [k, v] : manifest["parameters"].items())
                        params[k] = v.is_string() ? v.get<std::string>() : v.dump();
                if (manifest.contains("outputs")) outputs = manifest["outputs"];
            }
            for (const auto& [k, v] : flag_values)
                if (!v.empty()) params[k] = v;
            if (name.empty()) throw UsageError("paper needs an experiment name");
            const std::uint64_t used_seed = effective_seed(seed);

            ExperimentOutcome outcome = run_experiment(name, params, used_seed);
            bool passed = std::all_of(outcome.checks.begin(), outcome.checks.end(), [](const Check& c) { return c.passed; });
            Json report = {{"experiment", name},
                           {"seed", used_seed},
                           {"parameters", params},
                           {"passed", passed},
                           {"checks", check_list(outcome.checks)},
                           {"result", outcome.result}};

            std::string jpath = json_path, cpath = csv_path;
            if (outputs.is_object()) {
                if (jpath.empty()) jpath = outputs.value("json", "");
                if (cpath.empty()) cpath = outputs.value("csv", "");
            }
            if (!out_dir.empty()) {
                std::filesystem::create_directories(out_dir);
                if (jpath.empty()) jpath = (std::filesystem::path(out_dir) / (name + ".json")).string();
                if (cpath.empty()) cpath = (std::filesystem::path(out_dir) / (name + ".csv")).string();
            }
            const std::string text = dump_json(report) + "\n";
            if (!jpath.empty()) write_file(jpath, text);
            if (!cpath.empty() && outcome.trace) {
                std::ostringstream csv;
                write_trace_csv(csv, *outcome.trace);
                write_file(cpath, csv.str());
            }
            if (print_json) {
                out << text;
            } else {
                for (const auto& c : outcome.checks)
                    out << (c.passed ? "PASS " : "FAIL ") << name << ": " << c.name
                        << (c.detail.empty() ? "" : " (" + c.detail + ")") << "\n";
            }
            return passed ? 0 : 1;
        }

        if (it->parsed()) {
            const MonicPolynomial p = it_map.polynomial();
            const IterationMap map = it_map.map();
            const Configuration start = configuration_from(it_init, p);
            if (it_mode != "any" && it_mode != "every") throw UsageError("--mode must be any or every");
            OrbitOptions options{it_max_iter, it_threshold,
                                 it_mode == "any" ? DivergenceMode::AnyComponent : DivergenceMode::EveryComponent, 1e-12};
            const auto trace = iterate_orbit(map, start, options);
            if (!it_csv.empty()) {
                std::ostringstream csv;
                write_trace_csv(csv, trace);
                write_file(it_csv, csv.str());
            }
            Json report = {{"command", "iterate"},
                           {"rule", std::string(to_string(map.rule()))},
                           {"schedule", std::string(to_string(map.schedule()))},
                           {"divergence_mode", std::string(to_string(options.mode))},
                           {"threshold", to_json(it_threshold)},
                           {"polynomial", to_json(p)},
                           {"trace", to_json(trace)}};
            emit_report(report, it_out, out);
            return trace.status == OrbitStatus::Indeterminate ? 1 : 0;
        }

        if (jac->parsed()) {
            const IterationMap map = jac_map.map();
            const Configuration at = configuration_from(jac_at, jac_map.polynomial());
            const Configuration image = map(at);
            ChartBasis charts, out_charts;
            if (jac_charts == "auto") {
                charts = ChartBasis::for_configuration(at);
                out_charts = ChartBasis::for_configuration(image);
            } else if (jac_charts == "affine") {
                charts = out_charts = ChartBasis::affine(at.size());
            } else {
                throw UsageError("--charts must be auto or affine");
            }
            Matrix j;
            if (jac_method == "dual") {
                j = jacobian_dual(map, at, charts, out_charts);
            } else if (jac_method == "fd") {
                j = jacobian_fd(map, at, charts, out_charts);
            } else {
                throw UsageError("--method must be dual or fd");
            }
            auto names = [](const ChartBasis& b) {
                Json list = Json::array();
                for (std::size_t i = 0; i < b.size(); ++i) list.push_back(b[i] == ChartKind::Affine ? "affine" : "inverted");
                return list;
            };
            Json report = {{"command", "jacobian"},
                           {"method", jac_method},
                           {"point", to_json(at)},
                           {"image", to_json(image)},
                           {"charts", names(charts)},
                           {"image_charts", names(out_charts)},
                           {"jacobian", to_json(j)}};
            // Eigenvalues only mean something when both sides use the same charts.
            if (charts.kinds() == out_charts.kinds()) {
                report["trace"] = to_json(j.trace());
                report["eigenvalues"] = to_json(eigenvalues(j));
            }
            return emit_report(report, "", out);
        }
        if (cyc->parsed()) {
            const MonicPolynomial p = polynomial_from(cyc_roots, cyc_coeffs);
            if (p.degree() != 4) throw UsageError("cycles needs a quartic");
            const auto cycles = enumerate_harmonic_two_cycles(p);
            std::vector<Configuration> points;
            Json list = Json::array();
            for (const auto& c : cycles) {
                points.push_back(c.points.front());
                Json entry = to_json(c);
                const auto tc = trace_check(c);
                entry["trace"] = to_json(tc.trace);
                entry["return_error"] = to_json(cycle_return_error(c));
                list.push_back(entry);
            }
            Json report = {{"command", "cycles"},
                           {"polynomial", to_json(p)},
                           {"count", cycles.size()},
                           {"distinct", count_distinct_configurations(points)},
                           {"cycles", list}};
            return emit_report(report, "", out);
        }

        if (emb->parsed()) {
            const MonicPolynomial p = emb_map.polynomial();
            const Configuration at = configuration_from(emb_at, p);
            const auto extra = parse_complex_list(emb_extra);
            const auto check = verify_embedding(parse_rule(emb_map.rule), parse_schedule(emb_map.schedule), p, at, extra);
            Json report = {{"command", "embed-check"},
                           {"lifted_image", to_json(check.lifted_image)},
                           {"embedded_image", to_json(check.embedded_image)},
                           {"distance", to_json(check.distance)},
                           {"passed", check.distance <= emb_tol}};
            emit_report(report, "", out);
            return check.distance <= emb_tol ? 0 : 1;
        }
    } catch (const UsageError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const NumericError& e) {
        err << "numerical failure: " << e.what() << "\n";
        return 1;
    }
    return 2;
}

}  // namespace orbitforge::cli
