#include "orbitforge/orbit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace orbitforge {

std::string_view to_string(OrbitStatus status) {
    switch (status) {
        case OrbitStatus::Converged: return "Converged";
        case OrbitStatus::Diverged: return "Diverged";
        case OrbitStatus::Indeterminate: return "Indeterminate";
        case OrbitStatus::MaxIterations: return "MaxIterations";
    }
    return "?";
}

std::string_view to_string(DivergenceMode mode) {
    return mode == DivergenceMode::AnyComponent ? "any-component" : "every-component";
}

void OrbitTrace::record(const Configuration& state) {
    Real norm = 0;
    std::vector<bool> flags;
    flags.reserve(state.size());
    for (const auto& p : state) {
        norm = std::max(norm, p.affine_modulus());
        flags.push_back(p.is_infinity());
    }
    states.push_back(state);
    affine_norms.push_back(norm);
    infinite.push_back(std::move(flags));
}

bool detect_divergence(const Configuration& state, DivergenceMode mode, Real threshold) {
    if (state.size() == 0) return false;
    Real lo = std::numeric_limits<Real>::infinity(), hi = 0;
    for (const auto& p : state) {
        if (p.is_infinity()) return false;
        Real m = p.affine_modulus();
        lo = std::min(lo, m);
        hi = std::max(hi, m);
    }
    return mode == DivergenceMode::AnyComponent ? hi > threshold : lo > threshold;
}

bool detect_divergence(const OrbitTrace& trace, DivergenceMode mode, Real threshold) {
    return !trace.states.empty() && detect_divergence(trace.states.back(), mode, threshold);
}

OrbitTrace iterate_orbit(const StepFunction& step, const Configuration& start, const OrbitOptions& options) {
    OrbitTrace trace;
    trace.record(start);
    trace.status = OrbitStatus::MaxIterations;
    for (int k = 0; k < options.max_iter; ++k) {
        if (detect_divergence(trace.states.back(), options.mode, options.divergence_threshold)) {
            trace.status = OrbitStatus::Diverged;
            break;
        }
        Configuration next;
        try {
            next = step(trace.states.back());
        } catch (const NumericError& e) {
            trace.status = OrbitStatus::Indeterminate;
            trace.failure = e.what();
            break;
        }
        trace.record(next);
        if (configuration_distance(next, trace.states[trace.states.size() - 2]) < options.convergence_tol) {
            trace.status = OrbitStatus::Converged;
            break;
        }
    }
    if (trace.status == OrbitStatus::MaxIterations &&
        detect_divergence(trace.states.back(), options.mode, options.divergence_threshold))
        trace.status = OrbitStatus::Diverged;
    trace.iterations = static_cast<int>(trace.states.size()) - 1;
    return trace;
}

OrbitTrace iterate_orbit(const IterationMap& map, const Configuration& start, const OrbitOptions& options) {
    return iterate_orbit([&map](const Configuration& c) { return map(c); }, start, options);
}

std::vector<Scalar> match_roots(const std::vector<Scalar>& approximations, const std::vector<Scalar>& targets) {
    const std::size_t n = approximations.size();
    if (targets.size() != n) fail(ErrorKind::DimensionMismatch, "root counts differ");
    auto cost = [&](const std::vector<std::size_t>& perm) {
        Real worst = 0;
        for (std::size_t k = 0; k < n; ++k) worst = std::max(worst, std::abs(approximations[k] - targets[perm[k]]));
        return worst;
    };
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::vector<std::size_t> best = perm;
    if (n <= 8) {
        Real best_cost = cost(perm);
        while (std::next_permutation(perm.begin(), perm.end())) {
            Real c = cost(perm);
            if (c < best_cost) {
                best_cost = c;
                best = perm;
            }
        }
    } else {
        // Greedy nearest assignment for large degrees.
        std::vector<bool> used(n, false);
        for (std::size_t k = 0; k < n; ++k) {
            std::size_t pick = n;
            for (std::size_t j = 0; j < n; ++j)
                if (!used[j] && (pick == n || std::abs(approximations[k] - targets[j]) <
                                                  std::abs(approximations[k] - targets[pick])))
                    pick = j;
            used[pick] = true;
            best[k] = pick;
        }
    }
    std::vector<Scalar> out(n);
    for (std::size_t k = 0; k < n; ++k) out[k] = targets[best[k]];
    return out;
}

RootFindResult root_find(const MonicPolynomial& p, const RootFindOptions& options) {
    const IterationMap map(options.rule, options.schedule, p);
    Configuration z = options.init ? *options.init : default_initial_configuration(p);
    if (z.size() != static_cast<std::size_t>(p.degree()))
        fail(ErrorKind::DimensionMismatch, "initial configuration size differs from degree");

    RootFindResult result;
    result.status = OrbitStatus::MaxIterations;
    for (int k = 0; k < options.max_iter; ++k) {
        Configuration next;
        try {
            next = map(z);
        } catch (const NumericError& e) {
            result.status = OrbitStatus::Indeterminate;
            result.failure = e.what();
            break;
        }
        ++result.iterations;
        bool settled = true;
        for (std::size_t i = 0; i < z.size() && settled; ++i) {
            // Cyclic shift rotates coordinates, so compare the matching slot.
            std::size_t j = options.schedule == Schedule::CyclicShift ? (i + z.size() - 1) % z.size() : i;
            const auto& a = z[i];
            const auto& b = next[j];
            if (a.is_infinity() || b.is_infinity()) {
                settled = chordal_distance(a, b) <= options.tol;
            } else {
                Scalar after = b.affine_value();
                settled = std::abs(after - a.affine_value()) <= options.tol * std::max<Real>(1, std::abs(after));
            }
        }
        z = std::move(next);
        if (settled) {
            result.status = OrbitStatus::Converged;
            break;
        }
    }
    result.approximations = z;
    Real residual = 0;
    bool finite = true;
    for (const auto& c : z) {
        if (c.is_infinity()) {
            finite = false;
            residual = std::numeric_limits<Real>::infinity();
        } else {
            residual = std::max(residual, std::abs(eval(p, c.affine_value())));
        }
    }
    result.residual = residual;
    if (finite && p.has_roots()) {
        auto approx = z.affine_values();
        auto matched = match_roots(approx, *p.roots());
        Real err = 0;
        for (std::size_t k = 0; k < approx.size(); ++k) err = std::max(err, std::abs(approx[k] - matched[k]));
        result.matched_roots = std::move(matched);
        result.match_error = err;
    }
    return result;
}

}  // namespace orbitforge
