#include "experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <numbers>
#include <random>

#include "orbitforge/cli.hpp"
#include "orbitforge/embedding.hpp"
#include "orbitforge/gsw.hpp"
#include "orbitforge/harmonic.hpp"
#include "orbitforge/manifold.hpp"

namespace orbitforge::cli {

namespace {

std::string format(const char* fmt, ...) {
    char buf[256];
    va_list args;
    va_start(args, fmt);
    std::vsnprintf(buf, sizeof buf, fmt, args);
    va_end(args);
    return buf;
}

std::mt19937_64 engine_for(std::uint64_t seed, std::uint64_t index) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
    return std::mt19937_64(seq);
}

Real unit(std::mt19937_64& engine) { return static_cast<Real>(engine() >> 11) * 0x1.0p-53; }

int int_param(const Parameters& params, const std::string& key, int fallback, int lo, int hi) {
    auto it = params.find(key);
    if (it == params.end()) return fallback;
    try {
        std::size_t used = 0;
        int v = std::stoi(it->second, &used);
        if (used != it->second.size() || v < lo || v > hi) throw std::invalid_argument(key);
        return v;
    } catch (const std::exception&) {
        throw UsageError("--" + key + " must be an integer in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
    }
}

std::optional<std::string> param(const Parameters& params, const std::string& key) {
    auto it = params.find(key);
    if (it == params.end()) return std::nullopt;
    return it->second;
}

Configuration swap_pairs(const Configuration& x) { return Configuration({x[1], x[0], x[3], x[2]}); }

// Largest entrywise relative difference, with entries below 1e-8 of the
// matrix scale compared against that floor instead.
Real matrix_relative_error(const Matrix& reference, const Matrix& computed) {
    const Real floor = 1e-8 * std::max<Real>(reference.max_abs(), 1e-300);
    Real worst = 0;
    for (std::size_t r = 0; r < reference.rows(); ++r)
        for (std::size_t c = 0; c < reference.cols(); ++c)
            worst = std::max(worst, std::abs(reference(r, c) - computed(r, c)) / std::max(std::abs(reference(r, c)), floor));
    return worst;
}

Scalar random_lambda(std::mt19937_64& engine) {
    for (;;) {
        const Real modulus = 0.3 + 2.7 * unit(engine);
        const Real angle = 2 * std::numbers::pi * unit(engine);
        const Scalar lambda = std::polar(modulus, angle);
        bool near_forbidden = false;
        for (Scalar w : {Scalar{1}, Scalar{-1}, Scalar{0, 1}, Scalar{0, -1}})
            near_forbidden = near_forbidden || std::abs(lambda - w) < 0.05;
        if (!near_forbidden) return lambda;
    }
}

// ---------------------------------------------------------------------------

ExperimentOutcome harmonic_cycles(const Parameters& params, std::uint64_t seed) {
    ExperimentOutcome outcome;
    const Scalar lambda = param(params, "lambda") ? parse_complex(*param(params, "lambda")) : Scalar{2};
    const int polys = int_param(params, "polys", 10, 0, 1000);
    const MonicPolynomial p = parallelogram_family(lambda);
    const IterationMap map(UpdateRule::EhrlichAberth, Schedule::Jacobi, p);
    const Scalar i{0, 1};

    Json configs = Json::array();
    const std::vector<std::pair<std::string, Configuration>> cases{
        {"(l, -l, il, -il)", Configuration::from_affine(std::vector<Scalar>{lambda, -lambda, i * lambda, -i * lambda})},
        {"(l, -l, 0, inf)", harmonic_base_point(lambda)}};
    for (const auto& [label, x] : cases) {
        Real distance = configuration_distance(map(x), swap_pairs(x));
        outcome.checks.push_back({"swap " + label, distance <= 1e-10, format("chordal %.3g", distance)});
        configs.push_back({{"configuration", to_json(x)}, {"swap_distance", to_json(distance)}});
    }

    Json polynomials = Json::array();
    int good = 0;
    for (int k = 0; k < polys; ++k) {
        const MonicPolynomial q = from_roots(random_roots(seed, static_cast<std::uint64_t>(k), 4));
        const auto cycles = enumerate_harmonic_two_cycles(q);
        std::vector<Configuration> points;
        Real worst_return = 0;
        for (const auto& c : cycles) {
            points.push_back(c.points.front());
            worst_return = std::max(worst_return, cycle_return_error(c));
        }
        const std::size_t distinct = count_distinct_configurations(points);
        if (cycles.size() == 24 && distinct == 24 && worst_return <= 1e-8) ++good;
        polynomials.push_back({{"polynomial", to_json(q)},
                               {"cycles", cycles.size()},
                               {"distinct", distinct},
                               {"max_return_error", to_json(worst_return)}});
    }
    outcome.checks.push_back({"24 distinct two-cycles per random quartic", good == polys,
                              format("%d of %d polynomials", good, polys)});
    outcome.result = {{"lambda", to_json(lambda)}, {"configurations", configs}, {"random_quartics", polynomials}};
    return outcome;
}

ExperimentOutcome jacobian_experiment(const Parameters& params, std::uint64_t seed) {
    ExperimentOutcome outcome;
    const std::string preset = param(params, "lambda-preset").value_or(param(params, "lambda") ? "" : "paper");
    Scalar lambda;
    if (preset == "paper") {
        lambda = reference_lambda();
    } else if (preset == "two") {
        lambda = Scalar{2};
    } else if (preset.empty()) {
        lambda = parse_complex(*param(params, "lambda"));
    } else {
        throw UsageError("--lambda-preset must be paper or two");
    }
    const int samples = int_param(params, "samples", 20, 0, 10000);

    const MonicPolynomial p = parallelogram_family(lambda);
    const auto cycle = analyze_permutation_cycle(IterationMap(UpdateRule::EhrlichAberth, Schedule::Jacobi, p),
                                                 harmonic_base_point(lambda), harmonic_base_charts());
    const Matrix analytic = jacobian_analytic_harmonic(lambda);
    const Real error = matrix_relative_error(analytic, cycle.jacobian);
    outcome.checks.push_back({"closed-form matrix matches the differentiated map", error <= 1e-5,
                              format("relative %.3g", error)});

    const auto closed = harmonic_eigensystem(lambda);
    Real residual = 0;
    for (std::size_t k = 0; k < 4; ++k) {
        auto v = closed.eigenvectors.column(k);
        auto av = analytic * v;
        for (std::size_t r = 0; r < 4; ++r) av[r] -= closed.eigenvalues[k] * v[r];
        residual = std::max(residual, vector_norm(av) / vector_norm(v));
    }
    outcome.checks.push_back({"closed-form eigenpairs", residual <= 1e-8, format("residual %.3g", residual)});

    if (preset == "paper") {
        const std::vector<Scalar> expected{-63.0, 61.2529526, -2.2529526, 0.0};
        std::vector<Scalar> remaining = cycle.eigenvalues;
        bool ok = true;
        std::string detail;
        for (const auto& e : expected) {
            auto it = std::min_element(remaining.begin(), remaining.end(),
                                       [&](Scalar a, Scalar b) { return std::abs(a - e) < std::abs(b - e); });
            const Real err = std::abs(*it - e);
            ok = ok && err <= (e == Scalar{} ? 1e-8 : 1e-5);
            detail += format("%s%.10g:%.2g", detail.empty() ? "" : " ", e.real(), err);
            remaining.erase(it);
        }
        outcome.checks.push_back({"eigenvalues {-63, 61.2529526, -2.2529526, 0}", ok, detail});
    }

    Real worst = 0;
    auto engine = engine_for(seed, 7);
    for (int s = 0; s < samples; ++s) {
        const Scalar l = random_lambda(engine);
        const auto c = analyze_permutation_cycle(
            IterationMap(UpdateRule::EhrlichAberth, Schedule::Jacobi, parallelogram_family(l)), harmonic_base_point(l),
            harmonic_base_charts());
        worst = std::max(worst, matrix_relative_error(jacobian_analytic_harmonic(l), c.jacobian));
    }
    outcome.checks.push_back({format("closed-form matrix at %d random lambda", samples), worst <= 1e-5,
                              format("relative %.3g", worst)});

    outcome.result = {{"lambda", to_json(lambda)},
                      {"analytic", to_json(analytic)},
                      {"cycle", to_json(cycle)},
                      {"closed_form_eigenvalues",
                       to_json(std::vector<Scalar>(closed.eigenvalues.begin(), closed.eigenvalues.end()))},
                      {"discriminant", to_json(closed.discriminant)}};
    return outcome;
}

ExperimentOutcome ea_divergence(const Parameters& params, std::uint64_t) {
    ExperimentOutcome outcome;
    EaDivergenceOptions options;
    const int degree = int_param(params, "degree", 5, 4, 64);
    options.max_iter = int_param(params, "max-iter", kDefaultMaxIterations, 1, 10000000);
    const auto run = ea_divergence_run(degree, options);

    const bool near = std::all_of(run.trace.cycle_distance.begin(), run.trace.cycle_distance.end(),
                                  [](Real d) { return d < 0.1; });
    outcome.checks.push_back({"diverged (any component)", run.trace.status == OrbitStatus::Diverged,
                              format("%s after %d steps, norm %.3g", std::string(to_string(run.trace.status)).c_str(),
                                     run.trace.iterations, run.trace.affine_norms.back())});
    outcome.checks.push_back({"stays within 0.1 of the two-cycle", near,
                              format("final distance %.3g", run.trace.cycle_distance.back())});
    outcome.checks.push_back({"distance to the cycle non-increasing", run.monotone, ""});
    outcome.checks.push_back({"extra coordinates pinned", run.pinned_error <= 1e-9,
                              format("max deviation %.3g", run.pinned_error)});

    outcome.result = {{"degree", degree},
                      {"lambda", to_json(run.probe.lambda)},
                      {"probe_delta", run.probe.delta},
                      {"eigenvalues", to_json(run.probe.eigenvalues)},
                      {"stable_index", run.probe.stable_index},
                      {"extras", to_json(run.extras)},
                      {"polynomial", to_json(run.polynomial)},
                      {"start", to_json(run.trace.states.front())},
                      {"trace", to_json(run.trace)}};
    outcome.trace = run.trace;
    return outcome;
}

ExperimentOutcome gsw_cycles(const Parameters& params, std::uint64_t seed) {
    ExperimentOutcome outcome;
    GswSolveOptions options;
    options.seed = seed;
    options.starts = int_param(params, "starts", options.starts, 1, 100000);
    const auto solved = solve_gsw_z3_cycles(options);
    const auto factors = gsw_lambda_factors();

    outcome.checks.push_back({"18 solutions", solved.solutions.size() == 18,
                              format("%zu solutions", solved.solutions.size())});
    Real worst_residual = 0, worst_lambda = 0;
    bool quadratic_zero = true;
    for (const auto& s : solved.solutions) {
        worst_residual = std::max(worst_residual, s.residual);
        const auto& f = factors[static_cast<std::size_t>(s.factor)];
        worst_lambda = std::max(worst_lambda, std::abs(f.evaluate(s.lambda) / f.evaluate_derivative(s.lambda)));
        if (s.factor == 2) quadratic_zero = quadratic_zero && s.has_zero_coordinate();
    }
    outcome.checks.push_back({"residuals below 1e-10", !solved.solutions.empty() && worst_residual < 1e-10,
                              format("max %.3g", worst_residual)});
    outcome.checks.push_back({"lambda values are factor roots", worst_lambda <= 1e-9,
                              format("Newton correction %.3g", worst_lambda)});
    outcome.checks.push_back({"quadratic-factor cycles have a zero coordinate", quadratic_zero, ""});

    Json phi = Json::array();
    bool found = false, transverse_ok = true;
    Real transverse_error = 0, spread = 0;
    for (const auto& s : solved.solutions) {
        if (s.has_zero_coordinate()) continue;
        const auto report = classify_phi_cycle(s);
        transverse_error = std::max(transverse_error, report.transverse_error);
        spread = std::max(spread, report.transverse_spread);
        transverse_ok = transverse_ok && report.transverse_error <= 1e-8 && report.transverse_spread <= 1e-9;
        found = found || (std::abs(s.lambda) < 1 && report.classification == Stability::Repelling);
        phi.push_back(to_json(report));
    }
    outcome.checks.push_back({"a |lambda| < 1 cycle with nonzero coordinates is phi-repelling", found, ""});
    outcome.checks.push_back({"transverse eigenvalue equals lambda for two cubics", transverse_ok,
                              format("error %.3g, spread %.3g", transverse_error, spread)});

    Json lambdas = Json::array();
    for (const auto& l : solved.lambdas)
        lambdas.push_back({{"lambda", to_json(l.lambda)},
                           {"factor", l.factor},
                           {"solutions", l.solutions},
                           {"failed_starts", l.failed_starts}});
    Json solutions = Json::array();
    for (const auto& s : solved.solutions) solutions.push_back(to_json(s));
    outcome.result = {{"starts_per_lambda", options.starts},
                      {"lambdas", lambdas},
                      {"empty_lambdas", to_json(solved.empty_lambdas)},
                      {"solutions", solutions},
                      {"phi_cycles", phi}};
    return outcome;
}

ExperimentOutcome gsw_divergence(const Parameters& params, std::uint64_t seed) {
    ExperimentOutcome outcome;
    std::vector<Scalar> roots;
    if (auto r = param(params, "roots")) {
        roots = parse_complex_list(*r);
        if (roots.size() < 3) throw UsageError("--roots needs at least three roots");
    } else {
        const int degree = int_param(params, "degree", 4, 3, 5);
        const Real h = std::sqrt(3.0) / 2;
        roots = {Scalar{1}, Scalar{-0.5, h}, Scalar{-0.5, -h}};
        const Scalar extra[] = {Scalar{5}, Scalar{-7}};
        for (int k = 3; k < degree; ++k) roots.push_back(extra[k - 3]);
    }
    GswEmbeddedOptions options;
    options.max_iter = int_param(params, "max-iter", kDefaultMaxIterations, 1, 10000000);
    GswSolveOptions solve;
    solve.seed = seed;
    const auto cycle = select_divergence_cycle(solve_gsw_z3_cycles(solve));
    const auto run = gsw_embedded_run(roots, {0, 1, 2}, cycle, options);

    Real smallest = std::numeric_limits<Real>::infinity();
    for (std::size_t i = 0; i < 3; ++i) smallest = std::min(smallest, run.trace.states.back()[i].affine_modulus());
    outcome.checks.push_back({"first three coordinates exceed 1e8",
                              run.trace.status == OrbitStatus::Diverged && smallest > 1e8,
                              format("%s after %d steps, smallest %.3g", std::string(to_string(run.trace.status)).c_str(),
                                     run.base.trace.iterations, smallest)});
    outcome.checks.push_back({"embedded orbit verified stepwise", run.max_step_mismatch <= 1e-6,
                              format("relative mismatch %.3g", run.max_step_mismatch)});
    outcome.checks.push_back({"extra coordinates pinned", run.pinned_error <= 1e-9,
                              format("max deviation %.3g", run.pinned_error)});

    outcome.result = {{"roots", to_json(roots)},
                      {"cycle", to_json(cycle)},
                      {"cubic", to_json(run.cubic)},
                      {"extras", to_json(run.extras)},
                      {"tail_start", run.tail_start},
                      {"max_step_mismatch", to_json(run.max_step_mismatch)},
                      {"trace", to_json(run.trace)}};
    outcome.trace = run.trace;
    return outcome;
}

ExperimentOutcome trace_law(const Parameters& params, std::uint64_t seed) {
    ExperimentOutcome outcome;
    const int polys = int_param(params, "polys", 10, 1, 1000);
    Real trace_dev = 0, diag_dev = 0;
    int cycles = 0;
    bool attracting = false;
    Json per = Json::array();
    for (int k = 0; k < polys; ++k) {
        const MonicPolynomial q = from_roots(random_roots(seed, static_cast<std::uint64_t>(k), 4));
        Real t_local = 0, d_local = 0;
        for (const auto& c : enumerate_harmonic_two_cycles(q)) {
            const auto check = trace_check(c);
            t_local = std::max(t_local, std::abs(check.trace + 4.0));
            for (const auto& d : check.diagonal) d_local = std::max(d_local, std::abs(d + 1.0));
            attracting = attracting || c.classification == Stability::Attracting;
            ++cycles;
        }
        trace_dev = std::max(trace_dev, t_local);
        diag_dev = std::max(diag_dev, d_local);
        per.push_back({{"polynomial", to_json(q)}, {"trace_deviation", to_json(t_local)}, {"diagonal_deviation", to_json(d_local)}});
    }
    outcome.checks.push_back({"trace -4", trace_dev <= 1e-6, format("%d cycles, max deviation %.3g", cycles, trace_dev)});
    outcome.checks.push_back({"diagonal entries -1", diag_dev <= 1e-6, format("max deviation %.3g", diag_dev)});
    outcome.checks.push_back({"no cycle attracting", !attracting, ""});
    outcome.result = {{"cycles", cycles}, {"polynomials", per}};
    return outcome;
}

ExperimentOutcome embedding(const Parameters& params, std::uint64_t seed) {
    ExperimentOutcome outcome;
    const int samples = int_param(params, "samples", 100, 1, 100000);
    Real jea = 0, gsw = 0;
    int skipped = 0;
    for (int k = 0; k < samples; ++k) {
        const auto roots = random_roots(seed, 1000 + static_cast<std::uint64_t>(k), 4);
        const auto x = Configuration::from_affine(random_roots(seed, 2000 + static_cast<std::uint64_t>(k), 4));
        const auto alpha = random_roots(seed, 3000 + static_cast<std::uint64_t>(k), 1);
        const MonicPolynomial p = from_roots(roots);
        try {
            jea = std::max(jea, verify_embedding(UpdateRule::EhrlichAberth, Schedule::Jacobi, p, x, alpha).distance);
            gsw = std::max(gsw, verify_embedding(UpdateRule::Weierstrass, Schedule::GaussSeidel, p, x, alpha).distance);
        } catch (const NumericError&) {
            ++skipped;
        }
    }
    outcome.checks.push_back({"Jacobi Ehrlich-Aberth commutes with the embedding", jea <= 1e-9,
                              format("max chordal %.3g over %d instances", jea, samples - skipped)});
    outcome.checks.push_back({"Gauss-Seidel Weierstrass commutes with the embedding", gsw <= 1e-9,
                              format("max chordal %.3g", gsw)});
    bool rejected = false;
    try {
        const std::vector<Scalar> dup{Scalar{1, 1}};
        embed_configuration(Configuration::from_affine(std::vector<Scalar>{Scalar{1, 1}, Scalar{2}}), dup);
    } catch (const NumericError& e) {
        rejected = e.kind() == ErrorKind::CoincidenceWithExtra;
    }
    outcome.checks.push_back({"coinciding extra value rejected", rejected, ""});
    outcome.result = {{"samples", samples}, {"skipped", skipped}, {"jacobi_ea_distance", to_json(jea)},
                      {"gauss_seidel_ws_distance", to_json(gsw)}};
    return outcome;
}

}  // namespace

std::vector<Scalar> random_roots(std::uint64_t seed, std::uint64_t index, std::size_t count) {
    auto engine = engine_for(seed, index);
    std::vector<Scalar> roots;
    while (roots.size() < count) {
        const Scalar z = std::polar(2 * std::sqrt(unit(engine)), 2 * std::numbers::pi * unit(engine));
        if (std::all_of(roots.begin(), roots.end(), [&](Scalar r) { return std::abs(r - z) >= 0.2; })) roots.push_back(z);
    }
    return roots;
}

const std::vector<std::string>& experiment_names() {
    static const std::vector<std::string> names{"harmonic-cycles", "jacobian",  "ea-divergence", "gsw-cycles",
                                                "gsw-divergence",  "trace-law", "embedding"};
    return names;
}

ExperimentOutcome run_experiment(const std::string& name, const Parameters& params, std::uint64_t seed) {
    if (name == "harmonic-cycles") return harmonic_cycles(params, seed);
    if (name == "jacobian") return jacobian_experiment(params, seed);
    if (name == "ea-divergence") return ea_divergence(params, seed);
    if (name == "gsw-cycles") return gsw_cycles(params, seed);
    if (name == "gsw-divergence") return gsw_divergence(params, seed);
    if (name == "trace-law") return trace_law(params, seed);
    if (name == "embedding") return embedding(params, seed);
    throw UsageError("unknown experiment: " + name);
}

}  // namespace orbitforge::cli
