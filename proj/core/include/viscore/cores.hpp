#pragma once

#include <optional>

#include "viscore/harmonic.hpp"
#include "viscore/sphere_grid.hpp"

namespace viscore {

// Membership query against the filtered components of a chart.  `all` is the
// visual hull; `jordan_only` the W-hull (quasifuchsian-side components only);
// an explicit label list gives the X-hulls of the combination theorems.
struct HullQuery {
    enum class Filter { all, jordan_only, labels };

    const ComponentChart* chart = nullptr;
    Filter filter = Filter::all;
    std::vector<int> labels;
    double tau = 0.02;
    size_t ray_fallback_n = 20000;  // used when y is outside kernel range; 0 = refuse
    uint64_t seed = 1;

    std::vector<int> filtered_labels() const;  // validates explicit labels
};

// Per-component measures at y plus the mass of the marked cells.  Uses kernel
// quadrature while the kernel peak stays resolvable at the raster scale and a
// single labeled ray sweep beyond that.
struct VisualEvaluation {
    std::vector<HarmonicEstimate> components;  // in filtered-label order
    HarmonicEstimate marked;
    bool by_rays = false;
};
VisualEvaluation evaluate_visual(const BallPoint& y, const HullQuery& q);

// Inside iff every filtered component has measure <= 1/2 - tau (up to the
// estimate error) AND the marked mass cannot hide a half-measure component
// (one-sided raster bias: true components extend under the marked cells).
// Outside iff some component exceeds 1/2 + tau.
Verdict visual_member(const BallPoint& y, const HullQuery& q);

// per-component measures at y, same evaluation policy
std::vector<HarmonicEstimate> component_measures(const BallPoint& y, const HullQuery& q);

// Support-function view of the sampled limit set in the Klein chart, where
// hyperbolic convexity is Euclidean convexity.  Sampled limit sets under-fill
// the true hull, so Outside verdicts near the boundary stay soft (tau).
struct ConvexHullSamples {
    std::vector<Vec3> points;        // Klein coordinates (unit vectors)
    std::vector<Vec3> dirs;          // precomputed support directions
    std::vector<double> support;     // support values per direction
    std::vector<Vec3> extreme;       // support-attaining points
    int rank = 0;                    // affine rank; 2 flags a planar limit set
    bool planar() const { return rank == 2; }

    static ConvexHullSamples build(const std::vector<SpherePoint>& limit_samples);
    // signed Euclidean distance (Klein units) from x to the hull boundary,
    // positive inside; evaluated by direction search plus local descent
    double signed_depth(const Vec3& x) const;
};

Verdict convex_member(const BallPoint& y, const ConvexHullSamples& hull, double tau);

// Point on the geodesic between boundary points in distinct components where
// the first component's measure crosses 1/2 (bisection on arclength).
struct HalfLevelPoint {
    BallPoint point;
    double h;  // measured value at the point
};
HalfLevelPoint half_level(const SpherePoint& xi1, const SpherePoint& xi2, int label,
                          const ComponentChart& chart, double tol = 1e-3);

// planar slice through the ball for rendering and CSV export
struct SlicePlane {
    Vec3 base{0, 0, 0};
    Vec3 u{1, 0, 0}, v{0, 1, 0};  // orthonormal
};

enum class SliceState : char { V = 0, C_only = 1, outside = 2, uncertain = 3 };

struct SliceResult {
    int res = 0;
    double window = 0;
    std::vector<SliceState> states;  // res x res, row-major, row = v index
    std::vector<Vec3> points;        // ball coordinates of pixel centers
    std::vector<double> visual_margin, convex_margin;
};

SliceResult slice_classify(const SlicePlane& plane, double window, int res,
                           const HullQuery& q, const ConvexHullSamples& hull);

// Sampled restatement of the core inclusion: no point may be visual-Inside
// and convex-Outside with both margins positive.
struct SubsetCheckReport {
    size_t requested = 0, found = 0, attempts = 0;
    bool vacuous = false;  // no interior point found at this resolution
    struct Violation {
        Vec3 point;
        double visual_margin, convex_margin;
    };
    std::vector<Violation> violations;
    bool pass() const { return violations.empty(); }
};
SubsetCheckReport check_v_subset_c(const HullQuery& q, const ConvexHullSamples& hull,
                                   size_t count, uint64_t seed,
                                   double probe_radius = 2.0);

// Constructive emptiness dichotomy: a 1/2-level witness when the chart has
// two or more components, a sampled h ~ 1 certificate when it has one, the
// trivial full certificate when the domain of discontinuity is empty.
struct EmptinessResult {
    enum class Kind { witness, empty_certificate, full_certificate };
    Kind kind = Kind::full_certificate;
    std::optional<HalfLevelPoint> witness;
    double min_h_omega = 1.0;
    bool certified = true;  // empty_certificate only: min_h >= 1 - tau_empty
    size_t samples = 0;
};
EmptinessResult emptiness_probe(const ComponentChart& chart, size_t sample_count,
                                uint64_t seed, double tau_empty = 0.1,
                                double probe_radius = 0.75,
                                double half_level_tol = 1e-3);

}  // namespace viscore
