#include "orbitforge/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

namespace orbitforge {

namespace {

std::string format_real(Real x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

void emit(std::string& out, const Json& j, int indent, int depth) {
    auto newline = [&](int d) {
        if (indent < 0) return;
        out += '\n';
        out.append(static_cast<std::size_t>(indent * d), ' ');
    };
    switch (j.type()) {
        case Json::value_t::object: {
            if (j.empty()) {
                out += "{}";
                return;
            }
            out += '{';
            bool first = true;
            for (auto it = j.begin(); it != j.end(); ++it) {
                if (!first) out += ',';
                first = false;
                newline(depth + 1);
                out += Json(it.key()).dump();
                out += indent < 0 ? ":" : ": ";
                emit(out, it.value(), indent, depth + 1);
            }
            newline(depth);
            out += '}';
            return;
        }
        case Json::value_t::array: {
            if (j.empty()) {
                out += "[]";
                return;
            }
            // Arrays of scalars stay on one line.
            bool flat = std::all_of(j.begin(), j.end(), [](const Json& x) { return x.is_primitive(); });
            out += '[';
            bool first = true;
            for (const auto& x : j) {
                if (!first) out += flat && indent >= 0 ? ", " : ",";
                first = false;
                if (!flat) newline(depth + 1);
                emit(out, x, indent, depth + 1);
            }
            if (!flat) newline(depth);
            out += ']';
            return;
        }
        case Json::value_t::number_float: {
            Real x = j.get<Real>();
            out += std::isfinite(x) ? format_real(x) : Json(format_real(x)).dump();
            return;
        }
        default:
            out += j.dump();
    }
}

}  // namespace

Json to_json(Real x) {
    if (!std::isfinite(x)) return format_real(x);
    return x;
}

Json to_json(Scalar z) { return Json::array({to_json(z.real()), to_json(z.imag())}); }

Json to_json(const ProjectivePoint& p) {
    if (p.is_infinity()) return "inf";
    return to_json(p.affine_value());
}

Json to_json(const Configuration& c) {
    Json out = Json::array();
    for (const auto& p : c) out.push_back(to_json(p));
    return out;
}

Json to_json(const std::vector<Scalar>& v) {
    Json out = Json::array();
    for (const auto& z : v) out.push_back(to_json(z));
    return out;
}

Json to_json(const Matrix& m) {
    Json out = Json::array();
    for (std::size_t r = 0; r < m.rows(); ++r) {
        Json row = Json::array();
        for (std::size_t c = 0; c < m.cols(); ++c) row.push_back(to_json(m(r, c)));
        out.push_back(row);
    }
    return out;
}

Json to_json(const MonicPolynomial& p) {
    Json out;
    out["degree"] = p.degree();
    out["coefficients"] = to_json(p.coefficients());
    if (p.has_roots()) out["roots"] = to_json(*p.roots());
    return out;
}

Json to_json(const OrbitTrace& trace, bool include_states) {
    Json out;
    out["status"] = std::string(to_string(trace.status));
    out["iterations"] = trace.iterations;
    if (!trace.failure.empty()) out["failure"] = trace.failure;
    Json norms = Json::array();
    for (auto x : trace.affine_norms) norms.push_back(to_json(x));
    out["affine_norms"] = norms;
    if (!trace.cycle_distance.empty()) {
        Json d = Json::array();
        for (auto x : trace.cycle_distance) d.push_back(to_json(x));
        out["cycle_distance"] = d;
    }
    if (include_states) {
        Json states = Json::array();
        for (const auto& s : trace.states) states.push_back(to_json(s));
        out["states"] = states;
    }
    return out;
}

Json to_json(const RootFindResult& result) {
    Json out;
    out["status"] = std::string(to_string(result.status));
    out["iterations"] = result.iterations;
    out["approximations"] = to_json(result.approximations);
    out["residual"] = to_json(result.residual);
    if (result.matched_roots) out["matched_roots"] = to_json(*result.matched_roots);
    if (result.match_error) out["match_error"] = to_json(*result.match_error);
    if (!result.failure.empty()) out["failure"] = result.failure;
    return out;
}

Json to_json(const CycleReport& report) {
    Json out;
    out["rule"] = std::string(to_string(report.map.rule()));
    out["schedule"] = std::string(to_string(report.map.schedule()));
    out["period"] = report.period;
    Json points = Json::array();
    for (const auto& c : report.points) points.push_back(to_json(c));
    out["points"] = points;
    if (report.permutation) out["permutation"] = *report.permutation;
    Json charts = Json::array();
    for (std::size_t i = 0; i < report.charts.size(); ++i)
        charts.push_back(report.charts[i] == ChartKind::Affine ? "affine" : "inverted");
    out["charts"] = charts;
    out["jacobian"] = to_json(report.jacobian);
    out["eigenvalues"] = to_json(report.eigenvalues);
    out["classification"] = std::string(to_string(report.classification));
    return out;
}

Json to_json(const GswSolution& solution) {
    Json out;
    out["lambda"] = to_json(solution.lambda);
    out["factor"] = solution.factor;
    out["z"] = to_json(std::vector<Scalar>(solution.z.begin(), solution.z.end()));
    out["residual"] = to_json(solution.residual);
    out["zero_coordinate"] = solution.has_zero_coordinate();
    return out;
}

Json to_json(const PhiCycleReport& report) {
    Json out;
    out["solution"] = to_json(report.solution);
    out["chart"] = report.chart;
    out["jacobian"] = to_json(report.jacobian);
    out["eigenvalues"] = to_json(report.eigenvalues);
    out["classification"] = std::string(to_string(report.classification));
    out["mu"] = to_json(report.mu);
    out["scaling_error"] = to_json(report.scaling_error);
    Json transverse = Json::array();
    for (const auto& t : report.transverse) {
        Json e;
        e["polynomial"] = to_json(t.p);
        e["eigenvalue"] = to_json(t.eigenvalue);
        e["off_block"] = to_json(t.off_block);
        transverse.push_back(e);
    }
    out["transverse"] = transverse;
    out["transverse_error"] = to_json(report.transverse_error);
    out["transverse_spread"] = to_json(report.transverse_spread);
    return out;
}

std::string dump_json(const Json& j, int indent) {
    std::string out;
    emit(out, j, indent, 0);
    return out;
}

void write_trace_csv(std::ostream& out, const OrbitTrace& trace) {
    const std::size_t n = trace.states.empty() ? 0 : trace.states.front().size();
    out << "iteration";
    for (std::size_t i = 1; i <= n; ++i) out << ",z" << i << "_re,z" << i << "_im,z" << i << "_mod,z" << i << "_inverted";
    out << '\n';
    for (std::size_t k = 0; k < trace.states.size(); ++k) {
        out << k;
        for (const auto& p : trace.states[k]) {
            if (p.is_infinity()) {
                out << ",inf,0,inf,1";
                continue;
            }
            const Scalar z = p.affine_value();
            out << ',' << format_real(z.real()) << ',' << format_real(z.imag()) << ',' << format_real(std::abs(z)) << ','
                << (distance_to_infinity(p) < 0.5 ? 1 : 0);
        }
        out << '\n';
    }
}

}  // namespace orbitforge
