#pragma once

#include <complex>
#include <span>
#include <vector>

#include "viscore/util.hpp"

namespace viscore {

using Complex = std::complex<double>;

// Point on the sphere at infinity, kept in both charts: extended complex
// number (stereographic) and unit 3-vector.  Convention: 0 -> south pole
// (0,0,-1), infinity -> north pole (0,0,1).
struct SpherePoint {
    Complex value{0.0, 0.0};
    bool infinite = false;
    Vec3 unit{0, 0, -1};

    static SpherePoint from_complex(Complex z);
    static SpherePoint from_unit(const Vec3& v);
    static SpherePoint at_infinity();
};

Vec3 stereo(Complex z);
Vec3 stereo_north();  // image of infinity
SpherePoint stereo_inv(const Vec3& v);

// Interior point of hyperbolic 3-space in the Poincare ball, |v| < 1 strictly.
struct BallPoint {
    Vec3 v;

    BallPoint() : v{0, 0, 0} {}
    explicit BallPoint(const Vec3& p);  // throws std::domain_error at |p| >= 1

    // projective (Klein) chart: hyperbolic convexity = Euclidean convexity
    Vec3 klein() const {
        double s = 2.0 / (1.0 + v.norm2());
        return v * s;
    }
};

// Upper half-space chart (z, t), t > 0; hosts the isometric action.
struct HalfSpacePoint {
    Complex z;
    double t = 1.0;
};

HalfSpacePoint to_half(const BallPoint& y);
BallPoint to_ball(const HalfSpacePoint& p);

double hyperbolic_distance(const BallPoint& p, const BallPoint& q);

enum class MapClass { identity, parabolic, elliptic, loxodromic };

// Normalized 2x2 complex matrix acting on the sphere as a Moebius map and on
// H^3 by Poincare extension.  Always det = 1 with the sign canonicalized:
// first entry of (a,b,c,d) with |entry| > 1e-12 has Re >= 0 (Im >= 0 on ties).
struct MoebiusMap {
    Complex a{1, 0}, b{0, 0}, c{0, 0}, d{1, 0};

    static MoebiusMap make(Complex a, Complex b, Complex c, Complex d);
    static MoebiusMap identity() { return MoebiusMap{}; }

    MoebiusMap inverse() const;
    Complex trace2() const {
        Complex t = a + d;
        return t * t;
    }

    Complex apply(Complex z) const;           // finite input, may return huge values
    SpherePoint apply(const SpherePoint& p) const;
};

MoebiusMap operator*(const MoebiusMap& f, const MoebiusMap& g);  // acts as f o g

// max-norm distance between canonical representatives
double moebius_distance(const MoebiusMap& f, const MoebiusMap& g);

MapClass classify(const MoebiusMap& f);

struct FixedPoints {
    SpherePoint first;   // attracting first for loxodromic maps
    SpherePoint second;
    bool single = false;  // parabolic
};
FixedPoints fixed_points(const MoebiusMap& f);  // throws on identity input

// Poincare extension, evaluated in the half-space chart (quaternionic formula)
// and conjugated to the ball by the fixed Cayley map.  Throws std::range_error
// if the evaluation leaves the representable range near the boundary.
HalfSpacePoint apply_half(const MoebiusMap& f, const HalfSpacePoint& p);
BallPoint apply_ball(const MoebiusMap& f, const BallPoint& y);

// Isometry with T_y(0) = y; boundary action parameterizes the geodesic rays
// from y (ray toward direction v ends at T_y(v)).
MoebiusMap ball_translation(const BallPoint& y);

SpherePoint ray_endpoint(const BallPoint& y, const Vec3& direction);

// Isometry of the equatorial-plane copy of H^2: maps the plane {y3 = 0} to
// itself and the ball origin to (Re w, Im w, 0).  Requires |w| < 1.
MoebiusMap equator_translation(Complex w);

// Loxodromic with given attracting/repelling fixed points (finite, distinct),
// translation length > 0 and optional rotation angle.
MoebiusMap make_loxodromic(Complex attracting, Complex repelling,
                           double length, double twist = 0.0);

// Closed round cap on the sphere: {x : x . center >= cos(theta)}.
struct Cap {
    Vec3 center{0, 0, 1};
    double theta = 1.0;  // angular radius in (0, pi)

    bool contains(const Vec3& u) const { return center.dot(u) >= std::cos(theta); }
    bool contains(const SpherePoint& p) const { return contains(p.unit); }
};

struct PlaneFit {
    Vec3 normal;      // unit
    double offset;    // plane n.x = offset
    double residual;  // max |n.p - offset| over inputs
};
PlaneFit fit_plane(std::span<const Vec3> points);

struct MappedCap {
    Cap cap;
    double fit_residual;
};
// Image of a round cap under a Moebius map (circles map to circles).
MappedCap map_cap(const MoebiusMap& f, const Cap& cap, int boundary_samples = 12);

// Geodesic with both endpoints on the sphere at infinity, unit-speed
// parameterized; at(s) runs from xi1 (s -> -inf) to xi2 (s -> +inf).
class BoundaryGeodesic {
public:
    BoundaryGeodesic(const SpherePoint& xi1, const SpherePoint& xi2);
    BallPoint at(double s) const;

private:
    bool vertical_;
    bool from_infinity_ = false;
    Complex base_, mid_, dir_;
    double radius_ = 1.0;
};

}  // namespace viscore
