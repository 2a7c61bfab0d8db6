#pragma once

#include <array>
#include <memory>
#include <vector>

#include "viscore/moebius.hpp"

namespace viscore {

// Equiangular cube-sphere partition: 6 faces, n x n cells each.  Near-uniform
// cell areas (max/min about 1.4) keep quadrature weights well conditioned.
struct SphereRaster {
    int n = 0;
    std::vector<Vec3> centers;                     // per cell
    std::vector<double> areas;                     // spherical, sum to 4*pi
    std::vector<std::array<int, 4>> neighbors;     // edge-adjacent, seam-stitched
    std::vector<std::array<Vec3, 4>> subcenters;   // 2x2 quadrature points per cell
    std::vector<std::array<double, 4>> subareas;   // exact quadrant areas, sum = cell area
    std::vector<std::array<int, 4>> corner_ids;    // shared-vertex ids, ccw order
    std::vector<Vec3> vertices;                    // by corner id

    double cell_angle = 0;  // nominal angular cell width, pi/(2n)
    double cell_diag = 0;   // nominal cell diagonal

    size_t size() const { return centers.size(); }
    int locate(const Vec3& unit) const;  // exact partition lookup

    // point at fractional position (fu, fv) in [0,1]^2 of a cell, in the
    // face-angle coordinates the grid is built on
    Vec3 grid_point(int cell, double fu, double fv) const;
};

std::shared_ptr<const SphereRaster> build_raster(int n);

// Subset of cells with optional 2x2 subcell resolution at region boundaries:
// bit k of mask selects subcell k.  Integration weights follow the mask.
struct CellRegion {
    static constexpr uint8_t kFull = 0x0F;
    struct Item {
        int cell;
        uint8_t mask;
    };
    std::vector<Item> items;

    double area(const SphereRaster& r) const;
};

CellRegion region_all(const SphereRaster& r);
// Cells meeting a cap; boundary-straddling cells enter with subcell masks.
CellRegion region_cap(const SphereRaster& r, const Cap& cap);

// cell marked iff a sample lies in it or its center is within `dilation_rad`
std::vector<char> mark_limit_cells(const SphereRaster& r,
                                   const std::vector<SpherePoint>& samples,
                                   double dilation_rad);

enum class JordanFlag { yes, no, uncertain };

struct ComponentInfo {
    int id;
    std::vector<int> cells;
    std::vector<int> boundary_cells;  // cells with a marked neighbor
    std::vector<int> rep_cells;       // deep-interior representatives
    double area = 0;
    JordanFlag jordan = JordanFlag::uncertain;
    int euler_characteristic = 0;
};

// Connected components of the unmarked cells; approximates the components of
// the domain of discontinuity from outside (marked cells over-cover the limit
// set, so component areas are one-sided underestimates).
struct ComponentChart {
    std::shared_ptr<const SphereRaster> raster;
    std::vector<char> marked;
    std::vector<int> label;  // per cell; -1 on marked cells
    std::vector<int> marked_cells;
    std::vector<ComponentInfo> components;
    double marked_area = 0;

    CellRegion component_region(int id) const;
    CellRegion marked_region() const;
    int label_of(const SpherePoint& p) const { return label[raster->locate(p.unit)]; }
};

ComponentChart label_components(std::shared_ptr<const SphereRaster> raster,
                                std::vector<char> marked);

JordanFlag jordan_flag(const ComponentChart& chart, int id);

// Where a Moebius map sends each component, decided on sampled interior points.
struct LabelImage {
    enum class Status { mapped, ambiguous, into_marked };
    Status status = Status::ambiguous;
    int target = -1;
    double fraction = 0;  // mass of the winning label
};
std::vector<LabelImage> component_image(const ComponentChart& chart, const MoebiusMap& f);

enum class VerdictState { Inside, Outside, Uncertain };

struct Verdict {
    VerdictState state = VerdictState::Uncertain;
    double margin = 0;  // > 0 exactly when the state is decisive

    bool inside() const { return state == VerdictState::Inside; }
    bool outside() const { return state == VerdictState::Outside; }
};

// Containment of points in the closure of a component, with slack in cells.
Verdict closure_contains(const ComponentChart& chart, int id,
                         const std::vector<SpherePoint>& points, int slack);

}  // namespace viscore
