#include "viscore/sphere_grid.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <set>
#include <stdexcept>

namespace viscore {

namespace {

struct FaceFrame {
    Vec3 n, eu, ev;
};

const FaceFrame kFaces[6] = {
    {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}},    // +X
    {{-1, 0, 0}, {0, -1, 0}, {0, 0, 1}},  // -X
    {{0, 1, 0}, {-1, 0, 0}, {0, 0, 1}},   // +Y
    {{0, -1, 0}, {1, 0, 0}, {0, 0, 1}},   // -Y
    {{0, 0, 1}, {1, 0, 0}, {0, 1, 0}},    // +Z
    {{0, 0, -1}, {1, 0, 0}, {0, -1, 0}},  // -Z
};

Vec3 face_point(int f, double alpha, double beta) {
    const FaceFrame& fr = kFaces[f];
    return (fr.n + std::tan(alpha) * fr.eu + std::tan(beta) * fr.ev).normalized();
}

// signed solid angle of a spherical triangle (Van Oosterom-Strackee)
double triangle_solid_angle(const Vec3& a, const Vec3& b, const Vec3& c) {
    double num = a.dot(b.cross(c));
    double den = 1.0 + a.dot(b) + b.dot(c) + c.dot(a);
    return 2.0 * std::atan2(num, den);
}

}  // namespace

Vec3 SphereRaster::grid_point(int cell, double fu, double fv) const {
    int f = cell / (n * n);
    int i = (cell / n) % n;
    int j = cell % n;
    double h = M_PI_2 / n;
    return face_point(f, -M_PI_4 + (i + fu) * h, -M_PI_4 + (j + fv) * h);
}

int SphereRaster::locate(const Vec3& u) const {
    double ax = std::abs(u.x), ay = std::abs(u.y), az = std::abs(u.z);
    int f;
    if (ax >= ay && ax >= az)
        f = u.x >= 0 ? 0 : 1;
    else if (ay >= az)
        f = u.y >= 0 ? 2 : 3;
    else
        f = u.z >= 0 ? 4 : 5;
    const FaceFrame& fr = kFaces[f];
    double w = u.dot(fr.n);
    double alpha = std::atan(u.dot(fr.eu) / w);
    double beta = std::atan(u.dot(fr.ev) / w);
    double h = M_PI_2 / n;
    int i = std::clamp((int)std::floor((alpha + M_PI_4) / h), 0, n - 1);
    int j = std::clamp((int)std::floor((beta + M_PI_4) / h), 0, n - 1);
    return (f * n + i) * n + j;
}

std::shared_ptr<const SphereRaster> build_raster(int n) {
    if (n < 2) throw std::invalid_argument("build_raster: resolution must be >= 2");
    auto raster = std::make_shared<SphereRaster>();
    SphereRaster& r = *raster;
    r.n = n;
    size_t ncells = 6 * (size_t)n * n;
    r.centers.resize(ncells);
    r.areas.resize(ncells);
    r.neighbors.resize(ncells);
    r.subcenters.resize(ncells);
    r.subareas.resize(ncells);
    r.corner_ids.resize(ncells);
    r.cell_angle = M_PI_2 / n;
    r.cell_diag = r.cell_angle * std::sqrt(2.0);

    double h = M_PI_2 / n;
    ToleranceSet<3> vertex_ids(1e-9, 1e-5);
    auto grid_angle = [&](int k) { return -M_PI_4 + k * h; };

    for (int f = 0; f < 6; ++f) {
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) {
                size_t id = ((size_t)f * n + i) * n + j;
                double a0 = grid_angle(i), a1 = grid_angle(i + 1);
                double b0 = grid_angle(j), b1 = grid_angle(j + 1);
                double ac = 0.5 * (a0 + a1), bc = 0.5 * (b0 + b1);
                r.centers[id] = face_point(f, ac, bc);

                Vec3 c00 = face_point(f, a0, b0), c10 = face_point(f, a1, b0);
                Vec3 c11 = face_point(f, a1, b1), c01 = face_point(f, a0, b1);

                double q = h / 4.0;
                r.subcenters[id] = {face_point(f, ac - q, bc - q), face_point(f, ac + q, bc - q),
                                    face_point(f, ac - q, bc + q), face_point(f, ac + q, bc + q)};

                // exact quadrant areas; they tile the cell, so sums stay exact
                auto quad_area = [&](double u0, double u1, double v0, double v1) {
                    Vec3 p00 = face_point(f, u0, v0), p10 = face_point(f, u1, v0);
                    Vec3 p11 = face_point(f, u1, v1), p01 = face_point(f, u0, v1);
                    return std::abs(triangle_solid_angle(p00, p10, p11)) +
                           std::abs(triangle_solid_angle(p00, p11, p01));
                };
                r.subareas[id] = {quad_area(a0, ac, b0, bc), quad_area(ac, a1, b0, bc),
                                  quad_area(a0, ac, bc, b1), quad_area(ac, a1, bc, b1)};
                r.areas[id] = r.subareas[id][0] + r.subareas[id][1] + r.subareas[id][2] +
                              r.subareas[id][3];

                const Vec3 corners[4] = {c00, c10, c11, c01};
                for (int k = 0; k < 4; ++k) {
                    auto [vid, inserted] =
                        vertex_ids.insert({corners[k].x, corners[k].y, corners[k].z});
                    if (inserted) r.vertices.push_back(corners[k]);
                    r.corner_ids[id][k] = vid;
                }
            }
        }
    }

    // Seam-aware adjacency: reflect the center through each edge midpoint and
    // locate the landing cell.  Exact for this partition at any n >= 2.
    for (int f = 0; f < 6; ++f) {
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) {
                size_t id = ((size_t)f * n + i) * n + j;
                double a0 = grid_angle(i), a1 = grid_angle(i + 1);
                double b0 = grid_angle(j), b1 = grid_angle(j + 1);
                double ac = 0.5 * (a0 + a1), bc = 0.5 * (b0 + b1);
                Vec3 mids[4] = {face_point(f, a0, bc), face_point(f, a1, bc),
                                face_point(f, ac, b0), face_point(f, ac, b1)};
                const Vec3& c = r.centers[id];
                for (int k = 0; k < 4; ++k) {
                    Vec3 q = (2.0 * c.dot(mids[k])) * mids[k] - c;
                    r.neighbors[id][k] = r.locate(q);
                }
            }
        }
    }
    return raster;
}

double CellRegion::area(const SphereRaster& r) const {
    double a = 0;
    for (const Item& it : items) {
        if (it.mask == kFull) {
            a += r.areas[it.cell];
        } else {
            for (int k = 0; k < 4; ++k)
                if (it.mask & (1 << k)) a += r.subareas[it.cell][k];
        }
    }
    return a;
}

CellRegion region_all(const SphereRaster& r) {
    CellRegion reg;
    reg.items.reserve(r.size());
    for (size_t i = 0; i < r.size(); ++i) reg.items.push_back({(int)i, CellRegion::kFull});
    return reg;
}

CellRegion region_cap(const SphereRaster& r, const Cap& cap) {
    CellRegion reg;
    double ct = std::cos(cap.theta);
    for (size_t i = 0; i < r.size(); ++i) {
        double lo = 1.0, hi = -1.0;
        for (int k = 0; k < 4; ++k) {
            double d = cap.center.dot(r.vertices[r.corner_ids[i][k]]);
            lo = std::min(lo, d);
            hi = std::max(hi, d);
        }
        if (lo >= ct) {
            reg.items.push_back({(int)i, CellRegion::kFull});
        } else if (hi >= ct) {
            // straddling cell: admit subcells by their own centers
            uint8_t mask = 0;
            for (int k = 0; k < 4; ++k)
                if (cap.center.dot(r.subcenters[i][k]) >= ct) mask |= (uint8_t)(1 << k);
            if (mask) reg.items.push_back({(int)i, mask});
        }
    }
    return reg;
}

std::vector<char> mark_limit_cells(const SphereRaster& r,
                                   const std::vector<SpherePoint>& samples,
                                   double dilation_rad) {
    if (samples.empty()) throw std::invalid_argument("mark_limit_cells: no samples");
    std::vector<char> marked(r.size(), 0);
    double cr = std::cos(dilation_rad);
    std::vector<int> stamp(r.size(), -1);
    std::deque<int> queue;
    for (size_t s = 0; s < samples.size(); ++s) {
        const Vec3& p = samples[s].unit;
        int home = r.locate(p);
        marked[home] = 1;
        // grow outward while cells stay within the dilation radius
        queue.clear();
        queue.push_back(home);
        stamp[home] = (int)s;
        while (!queue.empty()) {
            int c = queue.front();
            queue.pop_front();
            for (int nb : r.neighbors[c]) {
                if (stamp[nb] == (int)s) continue;
                stamp[nb] = (int)s;
                if (r.centers[nb].dot(p) >= cr) {
                    marked[nb] = 1;
                    queue.push_back(nb);
                }
            }
        }
    }
    return marked;
}

namespace {

JordanFlag compute_jordan(const SphereRaster& r, ComponentInfo& comp) {
    // Euler characteristic of the closed cell subcomplex
    std::set<int> verts;
    std::map<std::pair<int, int>, int> edge_use;
    for (int cell : comp.cells) {
        const auto& ids = r.corner_ids[cell];
        for (int k = 0; k < 4; ++k) {
            verts.insert(ids[k]);
            int u = ids[k], v = ids[(k + 1) % 4];
            edge_use[{std::min(u, v), std::max(u, v)}]++;
        }
    }
    long V = (long)verts.size();
    long E = (long)edge_use.size();
    long F = (long)comp.cells.size();
    comp.euler_characteristic = (int)(V - E + F);

    // boundary edges must form one cycle: every incident vertex has degree 2
    // and the edge set is connected
    std::map<int, std::vector<int>> boundary_adj;
    long nboundary = 0;
    for (const auto& [e, uses] : edge_use) {
        if (uses != 1) continue;
        ++nboundary;
        boundary_adj[e.first].push_back(e.second);
        boundary_adj[e.second].push_back(e.first);
    }
    bool single_cycle = nboundary > 0;
    for (const auto& [v, adj] : boundary_adj)
        if (adj.size() != 2) single_cycle = false;
    if (single_cycle) {
        std::set<int> seen;
        std::deque<int> q{boundary_adj.begin()->first};
        seen.insert(boundary_adj.begin()->first);
        while (!q.empty()) {
            int v = q.front();
            q.pop_front();
            for (int w : boundary_adj[v])
                if (seen.insert(w).second) q.push_back(w);
        }
        single_cycle = seen.size() == boundary_adj.size();
    }

    bool is_jordan = comp.euler_characteristic == 1 && single_cycle;
    if ((long)comp.cells.size() < 8) return JordanFlag::uncertain;  // resolution limit
    return is_jordan ? JordanFlag::yes : JordanFlag::no;
}

}  // namespace

ComponentChart label_components(std::shared_ptr<const SphereRaster> raster,
                                std::vector<char> marked) {
    const SphereRaster& r = *raster;
    ComponentChart chart;
    chart.raster = raster;
    chart.marked = std::move(marked);
    chart.label.assign(r.size(), -1);

    for (size_t i = 0; i < r.size(); ++i)
        if (chart.marked[i]) {
            chart.marked_area += r.areas[i];
            chart.marked_cells.push_back((int)i);
        }

    int next = 0;
    for (size_t start = 0; start < r.size(); ++start) {
        if (chart.marked[start] || chart.label[start] >= 0) continue;
        ComponentInfo comp;
        comp.id = next;
        std::deque<int> q{(int)start};
        chart.label[start] = next;
        while (!q.empty()) {
            int c = q.front();
            q.pop_front();
            comp.cells.push_back(c);
            comp.area += r.areas[c];
            bool bdry = false;
            for (int nb : r.neighbors[c]) {
                if (chart.marked[nb]) {
                    bdry = true;
                    continue;
                }
                if (chart.label[nb] < 0) {
                    chart.label[nb] = next;
                    q.push_back(nb);
                }
            }
            if (bdry) comp.boundary_cells.push_back(c);
        }
        std::sort(comp.cells.begin(), comp.cells.end());
        std::sort(comp.boundary_cells.begin(), comp.boundary_cells.end());
        chart.components.push_back(std::move(comp));
        ++next;
    }

    // interior depth by multi-source BFS from the boundary; deep cells make
    // good representatives for image and membership sampling
    std::vector<int> depth(r.size(), -1);
    for (ComponentInfo& comp : chart.components) {
        std::deque<int> q;
        if (comp.boundary_cells.empty()) {
            // component without boundary (whole sphere): depth from cell 0
            q.push_back(comp.cells.front());
            depth[comp.cells.front()] = 0;
        }
        for (int c : comp.boundary_cells) {
            depth[c] = 0;
            q.push_back(c);
        }
        while (!q.empty()) {
            int c = q.front();
            q.pop_front();
            for (int nb : r.neighbors[c])
                if (chart.label[nb] == comp.id && depth[nb] < 0) {
                    depth[nb] = depth[c] + 1;
                    q.push_back(nb);
                }
        }
        std::vector<int> order = comp.cells;
        std::stable_sort(order.begin(), order.end(),
                         [&](int a, int b) { return depth[a] > depth[b]; });
        size_t take = std::min<size_t>(32, order.size());
        comp.rep_cells.assign(order.begin(), order.begin() + take);
        comp.jordan = compute_jordan(r, comp);
    }
    return chart;
}

CellRegion ComponentChart::component_region(int id) const {
    CellRegion reg;
    const ComponentInfo& comp = components.at(id);
    reg.items.reserve(comp.cells.size());
    for (int c : comp.cells) reg.items.push_back({c, CellRegion::kFull});
    return reg;
}

CellRegion ComponentChart::marked_region() const {
    CellRegion reg;
    for (size_t c = 0; c < marked.size(); ++c)
        if (marked[c]) reg.items.push_back({(int)c, CellRegion::kFull});
    return reg;
}

JordanFlag jordan_flag(const ComponentChart& chart, int id) {
    return chart.components.at(id).jordan;
}

std::vector<LabelImage> component_image(const ComponentChart& chart, const MoebiusMap& f) {
    const SphereRaster& r = *chart.raster;
    std::vector<LabelImage> out(chart.components.size());
    for (const ComponentInfo& comp : chart.components) {
        const std::vector<int>& probe =
            comp.rep_cells.empty() ? comp.cells : comp.rep_cells;
        std::map<int, int> tally;  // label (or -1 marked) -> hits
        for (int cell : probe) {
            SpherePoint img = f.apply(SpherePoint::from_unit(r.centers[cell]));
            tally[chart.label[r.locate(img.unit)]]++;
        }
        int total = (int)probe.size();
        int best_label = -1, best = 0, marked_hits = 0;
        for (auto [lbl, hits] : tally) {
            if (lbl < 0) {
                marked_hits = hits;
                continue;
            }
            if (hits > best) {
                best = hits;
                best_label = lbl;
            }
        }
        LabelImage& li = out[comp.id];
        li.fraction = total ? (double)best / total : 0.0;
        if (li.fraction >= 0.95) {
            li.status = LabelImage::Status::mapped;
            li.target = best_label;
        } else if (marked_hits > total / 20) {
            li.status = LabelImage::Status::into_marked;
        } else {
            li.status = LabelImage::Status::ambiguous;
        }
    }
    return out;
}

Verdict closure_contains(const ComponentChart& chart, int id,
                         const std::vector<SpherePoint>& points, int slack) {
    const SphereRaster& r = *chart.raster;
    int limit = 2 * slack + 1;
    int worst_inside = 0;       // max distance-to-component over points
    int best_outside = -1;      // strongest depth witness inside another label
    std::vector<int> stamp(r.size(), -1);
    std::vector<int> dist(r.size());
    int run = 0;

    for (const SpherePoint& p : points) {
        int home = r.locate(p.unit);
        // bounded BFS to the nearest cell of the target component; the stamp
        // keeps per-point state without touching the whole raster
        ++run;
        std::deque<int> q{home};
        stamp[home] = run;
        dist[home] = 0;
        int found = -1;
        while (!q.empty()) {
            int c = q.front();
            q.pop_front();
            if (chart.label[c] == id) {
                found = dist[c];
                break;
            }
            if (dist[c] >= limit) continue;
            for (int nb : r.neighbors[c])
                if (stamp[nb] != run) {
                    stamp[nb] = run;
                    dist[nb] = dist[c] + 1;
                    q.push_back(nb);
                }
        }
        if (found < 0) found = limit + 1;
        worst_inside = std::max(worst_inside, found);

        int lbl = chart.label[home];
        if (lbl >= 0 && lbl != id && found >= 2 * slack) {
            best_outside = std::max(best_outside, found - 2 * slack);
        }
    }

    Verdict v;
    if (best_outside >= 0) {
        v.state = VerdictState::Outside;
        v.margin = best_outside + 1;
    } else if (worst_inside <= slack) {
        v.state = VerdictState::Inside;
        v.margin = slack - worst_inside + 1;
    } else {
        v.state = VerdictState::Uncertain;
        v.margin = 0;
    }
    return v;
}

}  // namespace viscore
