#pragma once

#include <cstdint>
#include <cstdlib>
#include <random>

#include "orbitforge/projective.hpp"

namespace orbitforge::testing {

// Seeded generators for property tests. ORBITFORGE_SEED overrides the default
// so a failing run can be replayed.
inline std::uint64_t test_seed() {
    if (const char* env = std::getenv("ORBITFORGE_SEED")) return std::strtoull(env, nullptr, 10);
    return 20240611;
}

class Gen {
  public:
    explicit Gen(std::uint64_t salt = 0) : engine_(test_seed() ^ (salt * 0x9E3779B97F4A7C15ULL)) {}

    Real uniform(Real lo, Real hi) {
        // Bits to double by hand: the distribution classes are not portable.
        Real u = static_cast<Real>(engine_() >> 11) * 0x1.0p-53;
        return lo + (hi - lo) * u;
    }

    int integer(int lo, int hi) { return lo + static_cast<int>(engine_() % static_cast<std::uint64_t>(hi - lo + 1)); }

    Scalar scalar(Real radius = 3) { return {uniform(-radius, radius), uniform(-radius, radius)}; }

    Scalar unit_scale_scalar() {
        Scalar s = scalar(1);
        while (std::abs(s) < 0.1) s = scalar(1);
        return s;
    }

    ProjectivePoint point() {
        // Mostly affine, sometimes huge or infinite.
        int kind = integer(0, 9);
        if (kind == 0) return ProjectivePoint::infinity();
        if (kind == 1) return ProjectivePoint(scalar(1), Scalar{uniform(1e-3, 1e-1)});
        return ProjectivePoint::affine(scalar());
    }

    MobiusMap mobius() {
        for (;;) {
            Scalar a = scalar(2), b = scalar(2), c = scalar(2), d = scalar(2);
            Scalar det = a * d - b * c;
            if (std::abs(det) > 0.5) return {a, b, c, d};
        }
    }

    std::mt19937_64& engine() { return engine_; }

  private:
    std::mt19937_64 engine_;
};

}  // namespace orbitforge::testing
