#include "viscore/harmonic.hpp"

#include <cmath>
#include <stdexcept>

namespace viscore {

namespace {

constexpr double kQuadratureEdge = 1e-6;   // refuse |y| > 1 - this
constexpr double kSubdivIndicator = 2e-6;  // absolute contribution indicator
constexpr double kErrorSafety = 1.5;

}  // namespace

double visual_kernel(const BallPoint& y, const Vec3& zeta) {
    double num = 1.0 - y.v.norm2();
    double den = (y.v - zeta).norm2();
    double q = num / den;
    return q * q;
}

namespace {

struct KernelAccumulator {
    const BallPoint& y;
    const SphereRaster& raster;
    bool has_pole;
    Vec3 pole;
    double win_cos;
    double integral = 0, indicator = 0;

    KernelAccumulator(const BallPoint& y_, const SphereRaster& r_) : y(y_), raster(r_) {
        double ny = y.v.norm();
        if (ny > 1.0 - kQuadratureEdge)
            throw std::range_error(
                "measure_kernel: point too close to the boundary; use measure_rays or "
                "cap_measure");
        has_pole = ny > 1e-9;
        pole = has_pole ? y.v.normalized() : Vec3{0, 0, 1};
        win_cos = has_pole ? std::cos(std::min(M_PI, 2.0 * (1.0 - ny))) : 2.0;
    }

    void add(int cell, uint8_t mask) {
        const auto& subc = raster.subcenters[cell];
        const auto& suba = raster.subareas[cell];
        double vals[4];
        double mean = 0, wsum = 0, contrib = 0;
        for (int k = 0; k < 4; ++k) {
            if (!(mask & (1 << k))) continue;
            vals[k] = visual_kernel(y, subc[k]);
            contrib += vals[k] * suba[k];
            mean += vals[k] * suba[k];
            wsum += suba[k];
        }
        if (wsum == 0) return;
        mean /= wsum;
        double center_val = visual_kernel(y, raster.centers[cell]);
        double ind = std::abs(mean - center_val) * wsum;

        bool near_pole = has_pole && raster.centers[cell].dot(pole) >= win_cos;
        if (near_pole || ind > kSubdivIndicator * 4.0 * M_PI) {
            // one level of 4-way subdivision on the included subcells
            contrib = 0;
            ind = 0;
            for (int k = 0; k < 4; ++k) {
                if (!(mask & (1 << k))) continue;
                double bu = 0.5 * (k & 1), bv = 0.5 * (k >> 1);
                double m4 = 0;
                for (int s = 0; s < 4; ++s) {
                    Vec3 p = raster.grid_point(cell, bu + 0.125 + 0.25 * (s & 1),
                                               bv + 0.125 + 0.25 * (s >> 1));
                    m4 += visual_kernel(y, p);
                }
                m4 *= 0.25;
                contrib += m4 * suba[k];
                ind += std::abs(m4 - vals[k]) * suba[k];
            }
        }
        integral += contrib;
        indicator += ind;
    }

    HarmonicEstimate finish(size_t count) const {
        HarmonicEstimate est;
        est.method = MeasureMethod::kernel;
        est.value = integral / (4.0 * M_PI);
        est.error = kErrorSafety * indicator / (4.0 * M_PI) + 1e-9;
        est.count = count;
        // when the kernel peak is narrower than the node spacing it can fall
        // between nodes entirely; charge the mass near the peak to the bound
        double ny = y.v.norm();
        if (has_pole && 2.0 * (1.0 - ny) < raster.cell_angle)
            est.error += cap_measure(y, Cap{pole, 1.5 * raster.cell_angle});
        return est;
    }
};

}  // namespace

HarmonicEstimate measure_kernel(const BallPoint& y, const CellRegion& region,
                                const SphereRaster& raster) {
    KernelAccumulator acc(y, raster);
    for (const CellRegion::Item& it : region.items) acc.add(it.cell, it.mask);
    return acc.finish(region.items.size());
}

HarmonicEstimate measure_kernel_cells(const BallPoint& y, std::span<const int> cells,
                                      const SphereRaster& raster) {
    KernelAccumulator acc(y, raster);
    for (int cell : cells) acc.add(cell, CellRegion::kFull);
    return acc.finish(cells.size());
}

HarmonicEstimate measure_rays(const BallPoint& y,
                              const std::function<bool(const SpherePoint&)>& member,
                              size_t n, uint64_t seed) {
    if (n == 0) throw std::invalid_argument("measure_rays: need at least one sample");
    MoebiusMap t = ball_translation(y);
    CounterRng rng{seed};
    constexpr uint64_t kStream = 0x52415953;  // ray direction stream

    size_t hits = 0;
    for (size_t i = 0; i < n; ++i) {
        Vec3 dir = rng.unit_vector(kStream, i);
        if (member(t.apply(SpherePoint::from_unit(dir)))) ++hits;
    }
    double p = (double)hits / (double)n;

    HarmonicEstimate est;
    est.method = MeasureMethod::rays;
    est.value = p;
    est.error = std::max(3.0 * std::sqrt(p * (1.0 - p) / (double)n), 3.0 / (double)n);
    est.count = n;
    est.seed = seed;
    return est;
}

double cap_measure(const BallPoint& y, const Cap& cap) {
    if (!(cap.theta > 0.0 && cap.theta < M_PI))
        throw std::invalid_argument("cap_measure: half-angle must be in (0, pi)");
    MoebiusMap t_inv = ball_translation(y).inverse();
    MappedCap pulled = map_cap(t_inv, cap);
    return 0.5 * (1.0 - std::cos(pulled.cap.theta));
}

}  // namespace viscore
