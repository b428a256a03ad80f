#include "orbitforge/jacobian.hpp"

namespace orbitforge {

ChartBasis ChartBasis::for_configuration(const Configuration& config, Real threshold) {
    std::vector<ChartKind> kinds;
    kinds.reserve(config.size());
    for (const auto& p : config)
        kinds.push_back(distance_to_infinity(p) < threshold ? ChartKind::Inverted : ChartKind::Affine);
    return ChartBasis(std::move(kinds));
}

std::vector<Scalar> ChartBasis::coordinates(const Configuration& config) const {
    if (config.size() != kinds_.size()) fail(ErrorKind::DimensionMismatch, "chart basis size");
    std::vector<Scalar> out;
    out.reserve(config.size());
    for (std::size_t i = 0; i < config.size(); ++i) out.push_back(project<Scalar>(i, config[i].homogeneous()));
    return out;
}

Configuration ChartBasis::configuration(const std::vector<Scalar>& coords) const {
    if (coords.size() != kinds_.size()) fail(ErrorKind::DimensionMismatch, "chart basis size");
    std::vector<ProjectivePoint> pts;
    pts.reserve(coords.size());
    for (std::size_t i = 0; i < coords.size(); ++i) pts.push_back(from_homogeneous(lift<Scalar>(i, coords[i])));
    return Configuration(std::move(pts));
}

Matrix jacobian_dual(const IterationMap& map, const Configuration& point, const ChartBasis& charts) {
    return jacobian_dual(ChartedMap(map, charts), charts.coordinates(point));
}

Matrix jacobian_fd(const IterationMap& map, const Configuration& point, const ChartBasis& charts) {
    return jacobian_fd(ChartedMap(map, charts), charts.coordinates(point));
}

Matrix jacobian_dual(const IterationMap& map, const Configuration& point, const ChartBasis& charts,
                     const ChartBasis& out_charts) {
    return jacobian_dual(ChartedMap(map, charts, out_charts), charts.coordinates(point));
}

Matrix jacobian_fd(const IterationMap& map, const Configuration& point, const ChartBasis& charts,
                   const ChartBasis& out_charts) {
    return jacobian_fd(ChartedMap(map, charts, out_charts), charts.coordinates(point));
}

}  // namespace orbitforge
