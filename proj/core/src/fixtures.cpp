#include "viscore/fixtures.hpp"

#include <cmath>

namespace viscore::fixtures {

namespace {

// octagon side-pairing translation length: 2 acosh(1 + sqrt(2))
const double kOctCosh = 1.0 + std::sqrt(2.0);
const double kOctSinh = std::sqrt(2.0 + 2.0 * std::sqrt(2.0));

Complex chart_value(const Vec3& dir) { return SpherePoint::from_unit(dir).value; }

Vec3 tilt_from(const Vec3& axis, const Vec3& toward, double angle) {
    Vec3 t = (toward - axis * toward.dot(axis)).normalized();
    return (axis * std::cos(angle) + t * std::sin(angle)).normalized();
}

// Schottky piece geometry: fixed points 0.3 rad to either side of the cap
// center; translation length trades pairing-disk size against limit-set depth
const double kSchottkyTilt = 0.30;
const double kSchottkyLength = 3.0;

// cyclic_north geometry: the strongest certifiable placement given the
// octagon cap budget; the pushed lower-disk images stay below raster scale
const double kNorthTilt = 0.30;
const double kNorthLength = 2.3;

const double kStraddleAtt = 0.30;      // polar angle of attracting fixed point
const double kStraddleAzimuth = 0.30;  // repelling fixed point sits ON the limit circle
const double kStraddleLength = 2.2;
const double kStraddleTwist = 1.0;  // transversal crossing at the repelling point

}  // namespace

std::shared_ptr<const GroupSpec> octagon_group() {
    std::vector<Generator> gens;
    const char* labels[4] = {"a", "b", "c", "d"};
    for (int k = 0; k < 4; ++k) {
        Complex phase = std::exp(Complex(0, k * M_PI / 4.0));
        gens.push_back({labels[k],
                        MoebiusMap::make(Complex(kOctCosh, 0), kOctSinh * phase,
                                         kOctSinh * std::conj(phase), Complex(kOctCosh, 0))});
    }
    return std::make_shared<GroupSpec>(GroupSpec::raw("octagon", std::move(gens)));
}

std::shared_ptr<const GroupSpec> schottky_piece_a() {
    Vec3 axis{1, 0, 0};
    Vec3 p = tilt_from(axis, {0, 0, 1}, kSchottkyTilt);
    Vec3 q = tilt_from(axis, {0, 0, -1}, kSchottkyTilt);
    MoebiusMap a = make_loxodromic(chart_value(p), chart_value(q), kSchottkyLength);
    return std::make_shared<GroupSpec>(GroupSpec::raw("schottky-a", {{"a", a}}));
}

std::shared_ptr<const GroupSpec> schottky_piece_b() {
    Vec3 axis{-1, 0, 0};
    Vec3 p = tilt_from(axis, {0, 1, 0}, kSchottkyTilt);
    Vec3 q = tilt_from(axis, {0, -1, 0}, kSchottkyTilt);
    MoebiusMap b = make_loxodromic(chart_value(p), chart_value(q), kSchottkyLength);
    return std::make_shared<GroupSpec>(GroupSpec::raw("schottky-b", {{"b", b}}));
}

std::shared_ptr<const GroupSpec> cyclic_north() {
    Vec3 axis{0, 0, 1};
    Vec3 p = tilt_from(axis, {1, 0, 0}, kNorthTilt);
    Vec3 q = tilt_from(axis, {-1, 0, 0}, kNorthTilt);
    MoebiusMap g = make_loxodromic(chart_value(p), chart_value(q), kNorthLength);
    return std::make_shared<GroupSpec>(GroupSpec::raw("cyclic-north", {{"g", g}}));
}

std::shared_ptr<const GroupSpec> cyclic_straddling() {
    Vec3 p = Vec3{std::sin(kStraddleAtt), 0, std::cos(kStraddleAtt)};
    Vec3 q = Vec3{std::cos(kStraddleAzimuth), std::sin(kStraddleAzimuth), 0};
    MoebiusMap g =
        make_loxodromic(chart_value(p), chart_value(q), kStraddleLength, kStraddleTwist);
    return std::make_shared<GroupSpec>(GroupSpec::raw("cyclic-straddling", {{"g", g}}));
}

Cap schottky_cap_a() { return Cap{{1, 0, 0}, 0.55}; }
Cap schottky_cap_b() { return Cap{{-1, 0, 0}, 0.55}; }
Cap freecomb_cap_octagon() { return Cap{{0, 0, -1}, M_PI - 1.10}; }
Cap freecomb_cap_cyclic() { return Cap{{0, 0, 1}, 1.00}; }

Fixture octagon() {
    Fixture f;
    f.name = "octagon";
    f.group = octagon_group();
    f.res = 32;
    f.depth = 4;
    f.dilation_cells = 0.5;
    f.probe_radius = 0.9;
    return f;
}

Fixture schottky() {
    Fixture f;
    f.name = "schottky";
    CombineResult c = klein_combine_free(schottky_piece_a(), schottky_piece_b(),
                                         schottky_cap_a(), schottky_cap_b(), 4, "schottky");
    f.group = c.group;
    f.certified = true;
    f.certificate = c.certificate;
    f.res = 32;
    f.depth = 6;
    f.dilation_cells = 1.5;
    f.probe_radius = 0.75;
    return f;
}

Fixture free_combination() {
    Fixture f;
    f.name = "freecomb";
    CombineResult c = klein_combine_free(octagon_group(), cyclic_north(),
                                         freecomb_cap_octagon(), freecomb_cap_cyclic(), 4,
                                         "freecomb");
    f.group = c.group;
    f.certified = true;
    f.certificate = c.certificate;
    f.res = 32;
    f.depth = 4;
    f.dilation_cells = 0.5;
    f.embed_depth = 3;
    f.probe_radius = 0.9;
    f.sub_side = SummandSide::left;
    return f;
}

Fixture free_combination_corrupted() {
    Fixture f;
    f.name = "freecomb_corrupt";
    // provenance without a certificate: the straddling letter makes the
    // ping-pong containment impossible by construction
    f.group = std::make_shared<GroupSpec>(
        GroupSpec::free_product("freecomb_corrupt", octagon_group(), cyclic_straddling()));
    f.res = 32;
    f.depth = 4;
    f.dilation_cells = 0.5;
    f.embed_depth = 1;
    f.probe_radius = 1.5;
    f.sub_side = SummandSide::left;
    return f;
}

Fixture by_name(const std::string& name) {
    if (name == "octagon") return octagon();
    if (name == "schottky") return schottky();
    if (name == "freecomb") return free_combination();
    if (name == "freecomb_corrupt") return free_combination_corrupted();
    throw std::invalid_argument("unknown fixture: " + name);
}

std::vector<std::string> names() {
    return {"octagon", "schottky", "freecomb", "freecomb_corrupt"};
}

}  // namespace viscore::fixtures

namespace viscore {

BuiltFixture build_fixture(const Fixture& f, int res_override) {
    BuiltFixture b;
    b.fixture = f;
    int res = res_override > 0 ? res_override : f.res;
    b.raster = build_raster(res);
    b.limit_samples = sample_limit_set(*f.group, f.depth);
    b.dilation_rad = f.dilation_cells * b.raster->cell_diag;
    b.chart = label_components(b.raster, mark_limit_cells(*b.raster, b.limit_samples,
                                                          b.dilation_rad));
    b.hull = ConvexHullSamples::build(b.limit_samples);
    return b;
}

}  // namespace viscore
