#pragma once

#include <cstdint>
#include <functional>

#include "viscore/moebius.hpp"
#include "viscore/sphere_grid.hpp"

namespace viscore {

enum class MeasureMethod { kernel, rays, closed_form };

struct HarmonicEstimate {
    double value = 0;                              // in [0,1] up to error
    MeasureMethod method = MeasureMethod::kernel;
    double error = 0;    // deterministic bound (kernel), 3 sigma (rays)
    size_t count = 0;    // cells or ray samples
    uint64_t seed = 0;   // rays only
};

// Visual measure density against normalized spherical area:
//   ((1 - |y|^2) / |y - zeta|^2)^2
double visual_kernel(const BallPoint& y, const Vec3& zeta);

// Quadrature of the kernel over a cell region: 2x2 subcell midpoints, one
// level of 4-way subdivision where the kernel varies too much per cell or
// near the kernel peak.  Refuses |y| > 1 - 1e-6 (use rays or caps there).
HarmonicEstimate measure_kernel(const BallPoint& y, const CellRegion& region,
                                const SphereRaster& raster);

// same quadrature over whole cells, without building a region
HarmonicEstimate measure_kernel_cells(const BallPoint& y, std::span<const int> cells,
                                      const SphereRaster& raster);

// Monte Carlo over geodesic rays: fraction of uniformly random directions
// whose ray endpoint satisfies the membership predicate.  Counter-based
// seeding: equal (seed, n) gives equal output regardless of chunking.
HarmonicEstimate measure_rays(const BallPoint& y,
                              const std::function<bool(const SpherePoint&)>& member,
                              size_t n, uint64_t seed);

// Exact value for round caps: pull the cap back by the inverse basepoint
// translation; the pullback is again a cap, and the measure from the origin
// is its normalized area (1 - cos theta') / 2.
double cap_measure(const BallPoint& y, const Cap& cap);

}  // namespace viscore
