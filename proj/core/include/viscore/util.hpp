#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <string>
#include <unordered_map>
#include <vector>

namespace viscore {

struct Vec3 {
    double x = 0, y = 0, z = 0;

    Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
    Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
    Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
    Vec3 operator-() const { return {-x, -y, -z}; }

    double dot(const Vec3& o) const { return x * o.x + y * o.y + z * o.z; }
    Vec3 cross(const Vec3& o) const {
        return {y * o.z - z * o.y, z * o.x - x * o.z, x * o.y - y * o.x};
    }
    double norm2() const { return dot(*this); }
    double norm() const { return std::sqrt(norm2()); }
    Vec3 normalized() const {
        double n = norm();
        return {x / n, y / n, z / n};
    }
};

inline Vec3 operator*(double s, const Vec3& v) { return v * s; }

// angle between unit vectors, clamped against rounding
inline double angular_distance(const Vec3& a, const Vec3& b) {
    double c = a.dot(b);
    if (c > 1.0) c = 1.0;
    if (c < -1.0) c = -1.0;
    return std::acos(c);
}

// Deduplication of points in R^D at a fixed tolerance (max-norm).  Boxes of
// width `box` are hashed; a query probes every box the tol-ball around the
// point can touch, so near-boundary pairs are never missed.
template <int D>
class ToleranceSet {
public:
    explicit ToleranceSet(double tol, double box = 0.0)
        : tol_(tol), box_(box > 0 ? box : tol * 8.0) {}

    // returns index of an existing point within tol, or -1
    int find(const std::array<double, D>& p) const {
        std::array<long long, 2> cand[D];
        int ncand[D];
        for (int d = 0; d < D; ++d) {
            long long lo = (long long)std::floor((p[d] - tol_) / box_);
            long long hi = (long long)std::floor((p[d] + tol_) / box_);
            cand[d][0] = lo;
            cand[d][1] = hi;
            ncand[d] = (hi == lo) ? 1 : 2;
        }
        int idx[D] = {};
        while (true) {
            uint64_t h = 1469598103934665603ull;
            for (int d = 0; d < D; ++d) {
                h ^= (uint64_t)cand[d][idx[d]];
                h *= 1099511628211ull;
            }
            auto it = buckets_.find(h);
            if (it != buckets_.end()) {
                for (int i : it->second) {
                    bool close = true;
                    for (int d = 0; d < D; ++d)
                        if (std::abs(points_[i][d] - p[d]) > tol_) { close = false; break; }
                    if (close) return i;
                }
            }
            int d = 0;
            for (; d < D; ++d) {
                if (++idx[d] < ncand[d]) break;
                idx[d] = 0;
            }
            if (d == D) break;
        }
        return -1;
    }

    // inserts if no point within tol; returns (index, inserted)
    std::pair<int, bool> insert(const std::array<double, D>& p) {
        int found = find(p);
        if (found >= 0) return {found, false};
        int id = (int)points_.size();
        points_.push_back(p);
        uint64_t h = 1469598103934665603ull;
        for (int d = 0; d < D; ++d) {
            h ^= (uint64_t)(long long)std::floor(p[d] / box_);
            h *= 1099511628211ull;
        }
        buckets_[h].push_back(id);
        return {id, true};
    }

    size_t size() const { return points_.size(); }

private:
    double tol_, box_;
    std::vector<std::array<double, D>> points_;
    std::unordered_map<uint64_t, std::vector<int>> buckets_;
};

// Counter-based generator: value depends only on (seed, stream, counter), so
// sampling loops can be chunked or reordered without changing results.
inline uint64_t splitmix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

struct CounterRng {
    uint64_t seed;

    uint64_t bits(uint64_t stream, uint64_t counter) const {
        return splitmix64(splitmix64(seed ^ 0x6a09e667f3bcc909ull) ^
                          splitmix64(stream * 0x9e3779b97f4a7c15ull + counter));
    }
    // uniform in [0,1)
    double uniform(uint64_t stream, uint64_t counter) const {
        return (bits(stream, counter) >> 11) * 0x1.0p-53;
    }
    // uniform direction on the unit sphere
    Vec3 unit_vector(uint64_t stream, uint64_t counter) const {
        double z = 2.0 * uniform(stream, 2 * counter) - 1.0;
        double phi = 2.0 * M_PI * uniform(stream, 2 * counter + 1);
        double r = std::sqrt(std::max(0.0, 1.0 - z * z));
        return {r * std::cos(phi), r * std::sin(phi), z};
    }
};

// fixed 9-significant-digit float format used by every CSV/report writer
inline std::string fmt_g9(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

}  // namespace viscore
