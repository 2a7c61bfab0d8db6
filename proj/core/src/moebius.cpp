#include "viscore/moebius.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace viscore {

namespace {

constexpr double kSignTol = 1e-12;
constexpr double kClassifyTol = 1e-9;

bool finite(Complex z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

}  // namespace

// ---------------------------------------------------------------------------
// sphere chart

Vec3 stereo(Complex z) {
    double n = std::norm(z);
    if (n <= 1.0) {
        double s = 1.0 / (1.0 + n);
        return {2.0 * z.real() * s, 2.0 * z.imag() * s, (n - 1.0) * s};
    }
    // evaluate through w = 1/z so |z| near infinity stays finite
    Complex w = 1.0 / z;
    double m = std::norm(w);
    double s = 1.0 / (1.0 + m);
    return {2.0 * w.real() * s, -2.0 * w.imag() * s, (1.0 - m) * s};
}

Vec3 stereo_north() { return {0, 0, 1}; }

SpherePoint stereo_inv(const Vec3& v) {
    SpherePoint p;
    p.unit = v;
    double denom = 1.0 - v.z;
    if (denom < 1e-154) {
        p.infinite = true;
        p.value = Complex(0, 0);
        return p;
    }
    p.value = Complex(v.x / denom, v.y / denom);
    p.infinite = false;
    return p;
}

SpherePoint SpherePoint::from_complex(Complex z) {
    SpherePoint p;
    if (!finite(z)) return at_infinity();
    p.value = z;
    p.infinite = false;
    p.unit = stereo(z);
    return p;
}

SpherePoint SpherePoint::from_unit(const Vec3& v) { return stereo_inv(v.normalized()); }

SpherePoint SpherePoint::at_infinity() {
    SpherePoint p;
    p.infinite = true;
    p.value = Complex(0, 0);
    p.unit = stereo_north();
    return p;
}

// ---------------------------------------------------------------------------
// interior charts

BallPoint::BallPoint(const Vec3& p) : v(p) {
    if (!(p.norm2() < 1.0))
        throw std::domain_error("BallPoint: |v| must be < 1");
}

HalfSpacePoint to_half(const BallPoint& y) {
    const Vec3& v = y.v;
    double denom = v.x * v.x + v.y * v.y + (1.0 - v.z) * (1.0 - v.z);
    HalfSpacePoint p;
    p.z = Complex(2.0 * v.x / denom, 2.0 * v.y / denom);
    p.t = (1.0 - v.norm2()) / denom;
    return p;
}

BallPoint to_ball(const HalfSpacePoint& p) {
    double x = p.z.real(), y = p.z.imag(), t = p.t;
    if (!std::isfinite(x) || !std::isfinite(y) || !std::isfinite(t) || t <= 0.0)
        throw std::range_error("to_ball: half-space point out of range");
    double denom = x * x + y * y + (t + 1.0) * (t + 1.0);
    double n2 = x * x + y * y + t * t;
    Vec3 v{2.0 * x / denom, 2.0 * y / denom, (n2 - 1.0) / denom};
    if (!(v.norm2() < 1.0))
        throw std::range_error("to_ball: rounding pushed the point onto the boundary");
    return BallPoint(v);
}

double hyperbolic_distance(const BallPoint& p, const BallPoint& q) {
    double num = 2.0 * (p.v - q.v).norm2();
    double den = (1.0 - p.v.norm2()) * (1.0 - q.v.norm2());
    return std::acosh(1.0 + num / den);
}

// ---------------------------------------------------------------------------
// MoebiusMap

namespace {

// canonical representative of the +-matrix ambiguity
void canonicalize_sign(MoebiusMap& m) {
    const Complex* entries[4] = {&m.a, &m.b, &m.c, &m.d};
    for (const Complex* e : entries) {
        if (std::abs(*e) <= kSignTol) continue;
        bool flip;
        if (std::abs(e->real()) > kSignTol)
            flip = e->real() < 0.0;
        else
            flip = e->imag() < 0.0;
        if (flip) {
            m.a = -m.a; m.b = -m.b; m.c = -m.c; m.d = -m.d;
        }
        break;
    }
}

}  // namespace

MoebiusMap MoebiusMap::make(Complex a, Complex b, Complex c, Complex d) {
    Complex det = a * d - b * c;
    if (!finite(det) || std::abs(det) < 1e-30)
        throw std::invalid_argument("MoebiusMap: singular matrix");
    Complex s = std::sqrt(det);
    MoebiusMap m{a / s, b / s, c / s, d / s};
    canonicalize_sign(m);
    return m;
}

MoebiusMap MoebiusMap::inverse() const {
    MoebiusMap m{d, -b, -c, a};  // det-1 adjugate
    canonicalize_sign(m);
    return m;
}

MoebiusMap operator*(const MoebiusMap& f, const MoebiusMap& g) {
    // operands are det-1 by construction, so the product is det-1 up to
    // rounding; recomputing ad - bc here would cancel catastrophically for
    // large entries, so only the sign is canonicalized
    MoebiusMap m{f.a * g.a + f.b * g.c, f.a * g.b + f.b * g.d,
                 f.c * g.a + f.d * g.c, f.c * g.b + f.d * g.d};
    canonicalize_sign(m);
    return m;
}

double moebius_distance(const MoebiusMap& f, const MoebiusMap& g) {
    double m = std::abs(f.a - g.a);
    m = std::max(m, std::abs(f.b - g.b));
    m = std::max(m, std::abs(f.c - g.c));
    m = std::max(m, std::abs(f.d - g.d));
    return m;
}

Complex MoebiusMap::apply(Complex z) const {
    if (std::abs(z) <= 1.0) return (a * z + b) / (c * z + d);
    Complex u = 1.0 / z;
    return (a + b * u) / (c + d * u);
}

SpherePoint MoebiusMap::apply(const SpherePoint& p) const {
    Complex w;
    if (p.infinite) {
        if (std::abs(c) < 1e-300) return SpherePoint::at_infinity();
        w = a / c;
    } else if (std::norm(p.value) <= 1.0) {
        Complex den = c * p.value + d;
        if (std::abs(den) < 1e-300) return SpherePoint::at_infinity();
        w = (a * p.value + b) / den;
    } else {
        Complex u = 1.0 / p.value;
        Complex den = c + d * u;
        if (std::abs(den) < 1e-300) return SpherePoint::at_infinity();
        w = (a + b * u) / den;
    }
    if (!finite(w)) return SpherePoint::at_infinity();
    return SpherePoint::from_complex(w);
}

MapClass classify(const MoebiusMap& f) {
    MoebiusMap id = MoebiusMap::identity();
    if (moebius_distance(f, id) <= kClassifyTol) return MapClass::identity;

    Complex t2 = f.trace2();
    if (std::abs(t2.imag()) <= kClassifyTol) {
        double re = t2.real();
        if (std::abs(re - 4.0) <= kClassifyTol) return MapClass::parabolic;
        if (re >= -kClassifyTol && re < 4.0) return MapClass::elliptic;
    }
    return MapClass::loxodromic;
}

FixedPoints fixed_points(const MoebiusMap& f) {
    MapClass cls = classify(f);
    if (cls == MapClass::identity)
        throw std::invalid_argument("fixed_points: identity has no isolated fixed points");

    FixedPoints out;
    if (std::abs(f.c) <= 1e-14) {
        // fixed points of z -> (a/d) z + b/d: infinity, and b/(d-a) when a != d
        if (std::abs(f.d - f.a) <= 1e-12) {
            out.first = SpherePoint::at_infinity();
            out.single = true;
            return out;
        }
        SpherePoint inf = SpherePoint::at_infinity();
        SpherePoint fin = SpherePoint::from_complex(f.b / (f.d - f.a));
        if (cls == MapClass::loxodromic && std::abs(f.a) < std::abs(f.d)) {
            out.first = fin;   // |multiplier at infinity| = |d/a| > 1 repels
            out.second = inf;
        } else {
            out.first = inf;
            out.second = fin;
        }
        return out;
    }

    Complex B = f.d - f.a;
    Complex disc = f.trace2() - 4.0;
    if (cls == MapClass::parabolic) {
        out.first = SpherePoint::from_complex((f.a - f.d) / (2.0 * f.c));
        out.single = true;
        return out;
    }
    Complex s = std::sqrt(disc);
    // root order chosen to avoid cancellation, partner via Vieta
    Complex bb = (B.real() * s.real() + B.imag() * s.imag()) >= 0.0 ? B + s : B - s;
    Complex z1, z2;
    if (std::abs(bb) < 1e-30) {
        z1 = std::sqrt(f.b / f.c);
        z2 = -z1;
    } else {
        z1 = -bb / (2.0 * f.c);
        z2 = (-f.b / f.c) / z1;  // product of roots = -b/c
    }
    if (cls == MapClass::loxodromic) {
        double d1 = std::abs(f.c * z1 + f.d);  // |f'(z)| = 1/|cz+d|^2
        if (d1 < 1.0) std::swap(z1, z2);
    }
    out.first = SpherePoint::from_complex(z1);
    out.second = SpherePoint::from_complex(z2);
    return out;
}

// ---------------------------------------------------------------------------
// Poincare extension

HalfSpacePoint apply_half(const MoebiusMap& f, const HalfSpacePoint& p) {
    Complex w = f.c * p.z + f.d;
    double D = std::norm(w) + std::norm(f.c) * p.t * p.t;
    if (!std::isfinite(D) || D <= 0.0)
        throw std::range_error("apply_half: evaluation overflow near the boundary");
    Complex zn = (f.a * p.z + f.b) * std::conj(w) + f.a * std::conj(f.c) * p.t * p.t;
    HalfSpacePoint out;
    out.z = zn / D;
    out.t = p.t / D;
    if (!finite(out.z) || !std::isfinite(out.t) || out.t <= 0.0)
        throw std::range_error("apply_half: evaluation overflow near the boundary");
    return out;
}

BallPoint apply_ball(const MoebiusMap& f, const BallPoint& y) {
    return to_ball(apply_half(f, to_half(y)));
}

MoebiusMap ball_translation(const BallPoint& y) {
    HalfSpacePoint h = to_half(y);
    double r = std::sqrt(h.t);
    return MoebiusMap::make(Complex(r, 0), h.z / r, Complex(0, 0), Complex(1.0 / r, 0));
}

SpherePoint ray_endpoint(const BallPoint& y, const Vec3& direction) {
    return ball_translation(y).apply(SpherePoint::from_unit(direction));
}

MoebiusMap equator_translation(Complex w) {
    double n = std::norm(w);
    if (!(n < 1.0)) throw std::domain_error("equator_translation: |w| must be < 1");
    double s = std::sqrt(1.0 - n);
    return MoebiusMap::make(Complex(1.0 / s, 0), w / s, std::conj(w) / s, Complex(1.0 / s, 0));
}

MoebiusMap make_loxodromic(Complex attracting, Complex repelling, double length, double twist) {
    if (length <= 0.0) throw std::invalid_argument("make_loxodromic: length must be > 0");
    Complex p = attracting, q = repelling;
    if (std::abs(p - q) < 1e-12)
        throw std::invalid_argument("make_loxodromic: fixed points coincide");
    Complex k = std::exp(Complex(length / 2.0, twist / 2.0));
    Complex ik = 1.0 / k;
    Complex den = p - q;
    return MoebiusMap::make((p * k - q * ik) / den, p * q * (ik - k) / den,
                            (k - ik) / den, (p * ik - q * k) / den);
}

// ---------------------------------------------------------------------------
// circles and caps

namespace {

// smallest-eigenvalue eigenvector of a symmetric 3x3 matrix (cyclic Jacobi)
Vec3 min_eigenvector(double m[3][3]) {
    double v[3][3] = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
    for (int sweep = 0; sweep < 32; ++sweep) {
        double off = std::abs(m[0][1]) + std::abs(m[0][2]) + std::abs(m[1][2]);
        if (off < 1e-18) break;
        for (int p = 0; p < 2; ++p) {
            for (int q = p + 1; q < 3; ++q) {
                if (std::abs(m[p][q]) < 1e-24) continue;
                double theta = 0.5 * std::atan2(2.0 * m[p][q], m[q][q] - m[p][p]);
                double c = std::cos(theta), s = std::sin(theta);
                for (int k = 0; k < 3; ++k) {
                    double mkp = m[k][p], mkq = m[k][q];
                    m[k][p] = c * mkp - s * mkq;
                    m[k][q] = s * mkp + c * mkq;
                }
                for (int k = 0; k < 3; ++k) {
                    double mpk = m[p][k], mqk = m[q][k];
                    m[p][k] = c * mpk - s * mqk;
                    m[q][k] = s * mpk + c * mqk;
                }
                for (int k = 0; k < 3; ++k) {
                    double vkp = v[k][p], vkq = v[k][q];
                    v[k][p] = c * vkp - s * vkq;
                    v[k][q] = s * vkp + c * vkq;
                }
            }
        }
    }
    int best = 0;
    for (int i = 1; i < 3; ++i)
        if (m[i][i] < m[best][best]) best = i;
    return Vec3{v[0][best], v[1][best], v[2][best]}.normalized();
}

}  // namespace

PlaneFit fit_plane(std::span<const Vec3> points) {
    if (points.size() < 3) throw std::invalid_argument("fit_plane: need >= 3 points");
    Vec3 m{0, 0, 0};
    for (const Vec3& p : points) m = m + p;
    m = m * (1.0 / (double)points.size());
    double cov[3][3] = {};
    for (const Vec3& p : points) {
        Vec3 d = p - m;
        double e[3] = {d.x, d.y, d.z};
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) cov[i][j] += e[i] * e[j];
    }
    PlaneFit fit;
    fit.normal = min_eigenvector(cov);
    fit.offset = fit.normal.dot(m);
    fit.residual = 0.0;
    for (const Vec3& p : points)
        fit.residual = std::max(fit.residual, std::abs(fit.normal.dot(p) - fit.offset));
    return fit;
}

MappedCap map_cap(const MoebiusMap& f, const Cap& cap, int boundary_samples) {
    Vec3 n = cap.center;
    Vec3 any = std::abs(n.z) < 0.9 ? Vec3{0, 0, 1} : Vec3{1, 0, 0};
    Vec3 e1 = n.cross(any).normalized();
    Vec3 e2 = n.cross(e1);
    double ct = std::cos(cap.theta), st = std::sin(cap.theta);

    std::vector<Vec3> images;
    images.reserve(boundary_samples);
    for (int k = 0; k < boundary_samples; ++k) {
        double phi = 2.0 * M_PI * k / boundary_samples;
        Vec3 bp = ct * n + st * (std::cos(phi) * e1 + std::sin(phi) * e2);
        images.push_back(f.apply(SpherePoint::from_unit(bp)).unit);
    }
    PlaneFit fit = fit_plane(images);

    Vec3 marker = f.apply(SpherePoint::from_unit(n)).unit;  // image of cap interior
    Vec3 normal = fit.normal;
    double offset = fit.offset;
    if (normal.dot(marker) < offset) {
        normal = -normal;
        offset = -offset;
    }
    offset = std::clamp(offset, -1.0, 1.0);
    MappedCap out;
    out.cap.center = normal;
    out.cap.theta = std::acos(offset);
    out.fit_residual = fit.residual;
    return out;
}

// ---------------------------------------------------------------------------
// geodesics

BoundaryGeodesic::BoundaryGeodesic(const SpherePoint& xi1, const SpherePoint& xi2) {
    if (xi1.infinite || xi2.infinite) {
        vertical_ = true;
        from_infinity_ = xi1.infinite;
        base_ = xi1.infinite ? xi2.value : xi1.value;
        if (xi1.infinite && xi2.infinite)
            throw std::invalid_argument("BoundaryGeodesic: endpoints coincide at infinity");
        return;
    }
    if (std::abs(xi1.value - xi2.value) < 1e-14)
        throw std::invalid_argument("BoundaryGeodesic: endpoints coincide");
    vertical_ = false;
    mid_ = 0.5 * (xi1.value + xi2.value);
    Complex diff = xi2.value - xi1.value;
    radius_ = 0.5 * std::abs(diff);
    dir_ = diff / std::abs(diff);
}

BallPoint BoundaryGeodesic::at(double s) const {
    HalfSpacePoint p;
    if (vertical_) {
        p.z = base_;
        p.t = from_infinity_ ? std::exp(-s) : std::exp(s);
    } else {
        p.z = mid_ + radius_ * std::tanh(s) * dir_;
        p.t = radius_ / std::cosh(s);
    }
    return to_ball(p);
}

}  // namespace viscore
