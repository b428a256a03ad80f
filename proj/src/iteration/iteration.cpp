#include "orbitforge/iteration.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace orbitforge {

Configuration Configuration::from_affine(std::span<const Scalar> values) {
    std::vector<ProjectivePoint> pts;
    pts.reserve(values.size());
    for (const Scalar& v : values) pts.push_back(ProjectivePoint::affine(v));
    return Configuration(std::move(pts));
}

Configuration Configuration::from_homogeneous(std::span<const Homogeneous<Scalar>> values) {
    std::vector<ProjectivePoint> pts;
    pts.reserve(values.size());
    for (const auto& h : values) pts.push_back(orbitforge::from_homogeneous(h));
    return Configuration(std::move(pts));
}

std::vector<Homogeneous<Scalar>> Configuration::homogeneous() const {
    std::vector<Homogeneous<Scalar>> out;
    out.reserve(points_.size());
    for (const auto& p : points_) out.push_back(p.homogeneous());
    return out;
}

std::vector<Scalar> Configuration::affine_values() const {
    std::vector<Scalar> out;
    out.reserve(points_.size());
    for (const auto& p : points_) out.push_back(p.affine_value());
    return out;
}

Real configuration_distance(const Configuration& a, const Configuration& b) {
    if (a.size() != b.size()) fail(ErrorKind::DimensionMismatch, "configurations of different length");
    Real d = 0;
    for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, chordal_distance(a[i], b[i]));
    return d;
}

std::string_view to_string(UpdateRule rule) {
    return rule == UpdateRule::Weierstrass ? "weierstrass" : "ehrlich-aberth";
}

std::string_view to_string(Schedule schedule) {
    switch (schedule) {
        case Schedule::Jacobi: return "jacobi";
        case Schedule::GaussSeidel: return "gauss-seidel";
        case Schedule::CyclicShift: return "cyclic-shift";
    }
    return "?";
}

namespace {

void check_index(std::size_t i, const Configuration& config) {
    if (i >= config.size()) fail(ErrorKind::DimensionMismatch, "coordinate index out of range");
}

void check_degree(const MonicPolynomial& p, const Configuration& config) {
    if (static_cast<std::size_t>(p.degree()) != config.size())
        fail(ErrorKind::DimensionMismatch, "configuration size differs from degree");
}

}  // namespace

Scalar weierstrass_step(const MonicPolynomial& p, std::size_t i, const Configuration& config) {
    check_degree(p, config);
    check_index(i, config);
    const auto h = config.homogeneous();
    return detail::weierstrass<Scalar>(p, i, std::span<const Homogeneous<Scalar>>(h));
}

Scalar ea_step_affine(const MonicPolynomial& p, std::size_t i, const Configuration& config) {
    check_degree(p, config);
    check_index(i, config);
    for (const auto& c : config)
        if (c.is_infinity()) fail(ErrorKind::InfiniteCoordinate, "affine Ehrlich-Aberth step needs finite input");
    const std::vector<Scalar> z = config.affine_values();
    const Scalar zi = z[i];

    auto close = [&](Scalar a, Scalar b) {
        Real scale = std::max<Real>({1, std::abs(a), std::abs(b)});
        return std::abs(a - b) <= kCoincidenceTolerance * scale;
    };

    int coincidences = 0;
    Scalar sum{};
    Real size = 0;
    if (p.has_roots()) {
        for (const Scalar& a : *p.roots()) {
            if (close(zi, a)) {
                ++coincidences;
                continue;
            }
            Scalar t = Scalar{1} / (zi - a);
            sum += t;
            size += std::abs(t);
        }
    } else {
        Scalar pz = p.evaluate(zi);
        if (std::abs(pz) <= kCoincidenceTolerance * p.magnitude_scale(zi)) {
            ++coincidences;
        } else {
            Scalar t = p.evaluate_derivative(zi) / pz;
            sum += t;
            size += std::abs(t);
        }
    }
    for (std::size_t j = 0; j < z.size(); ++j) {
        if (j == i) continue;
        if (close(zi, z[j])) {
            ++coincidences;
            continue;
        }
        Scalar t = Scalar{1} / (zi - z[j]);
        sum -= t;
        size += std::abs(t);
    }
    if (coincidences >= 2) fail(ErrorKind::IndeterminateStep, "coordinate lies on two diagonals");
    if (coincidences == 1) return zi;
    if (std::abs(sum) <= kCoincidenceTolerance * size)
        fail(ErrorKind::ResultAtInfinity, "Ehrlich-Aberth step lands at infinity");
    return zi - Scalar{1} / sum;
}

namespace {

// Direct evaluation at z_i = infinity: sum of finite roots minus sum of the
// other coordinates, or infinity if exactly one of them is infinite.
std::optional<ProjectivePoint> ea_at_infinity(std::span<const ProjectivePoint> roots, std::size_t i,
                                              const Configuration& config) {
    int infinite = 0;
    Scalar total{};
    for (const auto& r : roots) {
        if (r.is_infinity()) ++infinite;
        else total += r.affine_value();
    }
    for (std::size_t j = 0; j < config.size(); ++j) {
        if (j == i) continue;
        if (config[j].is_infinity()) ++infinite;
        else total -= config[j].affine_value();
    }
    if (infinite >= 2) fail(ErrorKind::IndeterminatePoint, "coordinate lies on the intersection of two diagonals");
    if (infinite == 1) return ProjectivePoint::infinity();
    return ProjectivePoint::affine(total);
}

}  // namespace

ProjectivePoint ea_step_projective(std::span<const ProjectivePoint> roots, std::size_t i,
                                   const Configuration& config) {
    if (roots.size() != config.size()) fail(ErrorKind::DimensionMismatch, "root count differs from configuration size");
    check_index(i, config);
    int at_infinity = 0;
    for (const auto& r : roots) at_infinity += r.is_infinity() ? 1 : 0;
    if (at_infinity > 1) fail(ErrorKind::UnsupportedInput, "at most one root may lie at infinity");
    if (config[i].is_infinity()) {
        if (auto direct = ea_at_infinity(roots, i, config)) return *direct;
    }
    std::vector<Homogeneous<Scalar>> hr;
    hr.reserve(roots.size());
    for (const auto& r : roots) hr.push_back(r.homogeneous());
    const auto h = config.homogeneous();
    return from_homogeneous(
        detail::ea_projective<Scalar>(hr, i, std::span<const Homogeneous<Scalar>>(h), kProjectiveCoincidenceTolerance));
}

ProjectivePoint ea_step_projective(const MonicPolynomial& p, std::size_t i, const Configuration& config) {
    check_degree(p, config);
    std::vector<ProjectivePoint> roots;
    if (p.has_roots()) {
        for (const Scalar& r : *p.roots()) roots.push_back(ProjectivePoint::affine(r));
        return ea_step_projective(roots, i, config);
    }
    check_index(i, config);
    const IterationMap map(UpdateRule::EhrlichAberth, Schedule::Jacobi, p);
    return from_homogeneous(map.step<Scalar>(i, config.homogeneous()));
}

Configuration default_initial_configuration(const MonicPolynomial& p) {
    const auto& c = p.coefficients();
    const std::size_t n = c.size();
    const Scalar center = -c[n - 1] / static_cast<Real>(n);
    Real radius = 0;
    for (std::size_t k = 0; k < n; ++k) {
        Real m = std::abs(c[k]);
        if (m > 0) radius = std::max(radius, std::pow(m, 1.0 / static_cast<Real>(n - k)));
    }
    if (radius == 0) radius = 1;
    std::vector<Scalar> z;
    z.reserve(n);
    for (std::size_t k = 0; k < n; ++k) {
        // Slight irregularity in radius breaks symmetric stalls.
        Real angle = 2 * std::numbers::pi * static_cast<Real>(k) / static_cast<Real>(n) + 0.4;
        Real r = radius * (1 + 0.01 * static_cast<Real>(k % 3));
        z.push_back(center + std::polar(r, angle));
    }
    return Configuration::from_affine(z);
}

std::vector<Scalar> solve_roots(const MonicPolynomial& p) {
    if (p.has_roots()) return *p.roots();
    const std::size_t n = static_cast<std::size_t>(p.degree());
    std::vector<Scalar> z = default_initial_configuration(p).affine_values();
    if (n == 1) return {-p.coefficients()[0]};
    for (int iter = 0; iter < 1000; ++iter) {
        Real movement = 0;
        std::vector<Scalar> next(n);
        for (std::size_t i = 0; i < n; ++i) {
            try {
                next[i] = ea_step_affine(p, i, Configuration::from_affine(z));
            } catch (const NumericError&) {
                next[i] = z[i] + Scalar{1e-8, 1e-8} * std::max<Real>(1, std::abs(z[i]));
            }
            movement = std::max(movement, std::abs(next[i] - z[i]) / std::max<Real>(1, std::abs(z[i])));
        }
        z = std::move(next);
        if (movement < 1e-15) break;
    }
    return z;
}

namespace detail {

Scalar conjugation_center(std::span<const Homogeneous<Scalar>> data) {
    // Golden-angle spiral candidates; pick the one farthest from all data.
    constexpr int kCandidates = 24;
    const Real golden = std::numbers::pi * (3 - std::sqrt(5.0));
    Scalar best{};
    Real best_gap = -1;
    for (int k = 0; k < kCandidates; ++k) {
        Real radius = 0.4 + 0.15 * static_cast<Real>(k % 7);
        Scalar c = std::polar(radius, golden * static_cast<Real>(k) + 0.3);
        Real gap = 1;
        for (const auto& d : data) gap = std::min(gap, chordal_between(Homogeneous<Scalar>{c, Scalar{1}}, d));
        if (gap > best_gap) {
            best_gap = gap;
            best = c;
        }
    }
    return best;
}

}  // namespace detail

IterationMap::IterationMap(UpdateRule rule, Schedule schedule, MonicPolynomial p)
    : IterationMap(rule, schedule, std::optional<MonicPolynomial>(p), {}, static_cast<std::size_t>(p.degree())) {
    if (rule == UpdateRule::EhrlichAberth && polynomial_->has_roots())
        for (const Scalar& r : *polynomial_->roots()) roots_.push_back({r, Scalar{1}});
}

IterationMap::IterationMap(UpdateRule rule, Schedule schedule, std::optional<MonicPolynomial> p,
                           std::vector<Homogeneous<Scalar>> roots, std::size_t dimension)
    : rule_(rule), schedule_(schedule), polynomial_(std::move(p)), roots_(std::move(roots)), dimension_(dimension) {}

IterationMap IterationMap::ehrlich_aberth(std::vector<ProjectivePoint> roots, Schedule schedule) {
    if (roots.empty()) fail(ErrorKind::EmptyRootList, "no roots");
    int at_infinity = 0;
    std::vector<Homogeneous<Scalar>> h;
    std::vector<Scalar> finite;
    for (const auto& r : roots) {
        if (r.is_infinity()) ++at_infinity;
        else finite.push_back(r.affine_value());
        h.push_back(r.homogeneous());
    }
    if (at_infinity > 1) fail(ErrorKind::UnsupportedInput, "at most one root may lie at infinity");
    std::optional<MonicPolynomial> p;
    if (at_infinity == 0) p = MonicPolynomial::from_roots(finite);
    return IterationMap(UpdateRule::EhrlichAberth, schedule, std::move(p), std::move(h), roots.size());
}

IterationMap IterationMap::with_post_permutation(std::vector<std::size_t> permutation) const {
    if (permutation.size() != dimension_) fail(ErrorKind::DimensionMismatch, "permutation length");
    std::vector<bool> seen(dimension_, false);
    for (std::size_t k : permutation) {
        if (k >= dimension_ || seen[k]) fail(ErrorKind::PreconditionViolated, "not a permutation");
        seen[k] = true;
    }
    IterationMap copy = *this;
    copy.permutation_ = std::move(permutation);
    return copy;
}

Configuration IterationMap::operator()(const Configuration& config) const {
    return Configuration::from_homogeneous(apply<Scalar>(config.homogeneous()));
}

Configuration apply_schedule(UpdateRule rule, Schedule schedule, const MonicPolynomial& p,
                             const Configuration& config) {
    return IterationMap(rule, schedule, p)(config);
}

namespace {

template <std::size_t N>
void require_nonzero(const std::array<Scalar, N>& v, const char* what) {
    Real m = 0;
    for (const auto& x : v) m = std::max(m, std::abs(x));
    if (m == 0 || !std::isfinite(m)) fail(ErrorKind::IndeterminatePoint, what);
}

template <std::size_t N>
std::array<Scalar, N> checked_image(const std::array<Scalar, N>& raw) {
    Real m = 0;
    for (const auto& x : raw) m = std::max(m, std::abs(x));
    if (m < 1e-12) fail(ErrorKind::IndeterminatePoint, "image vanishes: point of indeterminacy");
    return normalize_homogeneous(raw);
}

}  // namespace

std::array<Scalar, 4> rp_homogeneous(const MonicPolynomial& p, const std::array<Scalar, 4>& point) {
    if (p.degree() != 3) fail(ErrorKind::UnsupportedInput, "R_p on P^3 is defined for cubics only");
    require_nonzero(point, "zero vector is not a projective point");
    return checked_image(rp_raw(p, normalize_homogeneous(point)));
}

std::array<Scalar, 3> phi_map(const std::array<Scalar, 3>& point) {
    require_nonzero(point, "zero vector is not a projective point");
    return checked_image(phi_raw(normalize_homogeneous(point)));
}

Real projective_distance(std::span<const Scalar> a, std::span<const Scalar> b) {
    if (a.size() != b.size()) fail(ErrorKind::DimensionMismatch, "projective spaces differ");
    // |a ^ b| / (|a| |b|) via the Lagrange identity over all 2x2 minors.
    Real na = 0, nb = 0, wedge = 0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        na += std::norm(a[k]);
        nb += std::norm(b[k]);
        for (std::size_t l = k + 1; l < a.size(); ++l) wedge += std::norm(a[k] * b[l] - a[l] * b[k]);
    }
    return std::sqrt(wedge / (na * nb));
}

}  // namespace orbitforge
