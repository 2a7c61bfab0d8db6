#include "viscore/suites.hpp"

#include <algorithm>
#include <cmath>
#include <json.hpp>

namespace viscore {

using ordered_json = nlohmann::ordered_json;

namespace {

Vec3 tilt_from_axis(const Vec3& axis, const Vec3& toward, double angle) {
    Vec3 t = (toward - axis * toward.dot(axis)).normalized();
    return (axis * std::cos(angle) + t * std::sin(angle)).normalized();
}

}  // namespace

namespace {

constexpr uint64_t kStreamPlane = 0x504c414e;
constexpr double kPlaneLateral = 1.5;   // lateral window on the invariant plane
constexpr double kPlaneMinDist = 0.2;   // standoff band of the equality check
constexpr double kPlaneMaxDist = 1.2;
constexpr double kInteriorProbeRadius = 1.0;

SuiteCheck check(std::string name, bool pass, std::string detail = "") {
    return {std::move(name), pass ? SuiteCheck::Status::pass : SuiteCheck::Status::fail,
            std::move(detail)};
}

SuiteCheck inconclusive(std::string name, std::string detail) {
    return {std::move(name), SuiteCheck::Status::inconclusive, std::move(detail)};
}

// ---------------------------------------------------------------------------
// cores suite

void run_subset_check(const std::string& label, const BuiltFixture& b,
                      const SuiteOptions& opt, SuiteResult& out) {
    HullQuery q = b.hull_query();
    SubsetCheckReport rep = check_v_subset_c(q, b.hull, opt.subset_samples, opt.seed,
                                             b.fixture.probe_radius);
    std::string detail = "found=" + std::to_string(rep.found) +
                         " attempts=" + std::to_string(rep.attempts) +
                         " violations=" + std::to_string(rep.violations.size());
    if (rep.vacuous) {
        out.checks.push_back(check(label + "_v_subset_c", true, "vacuous (no interior): " + detail));
        return;
    }
    if (rep.found < rep.requested) {
        out.checks.push_back(inconclusive(label + "_v_subset_c", "partial: " + detail));
        return;
    }
    out.checks.push_back(check(label + "_v_subset_c", rep.pass(), detail));
}

SuiteResult suite_cores(const SuiteOptions& opt) {
    SuiteResult out;
    out.suite = "cores";

    BuiltFixture oct = build_fixture(fixtures::octagon(), opt.res_override);
    BuiltFixture fc = build_fixture(fixtures::free_combination(), opt.res_override);
    run_subset_check("octagon", oct, opt, out);
    run_subset_check("freecomb", fc, opt, out);

    // totally geodesic equality case: the invariant plane is never Outside
    // either hull; points >= 0.2 off the plane are Outside both
    HullQuery q = oct.hull_query();
    CounterRng rng{opt.seed};
    size_t on_bad = 0, off_bad = 0;
    for (uint64_t i = 0; i < opt.plane_samples; ++i) {
        BallPoint p = plane_offset_point(rng, kStreamPlane, i, kPlaneLateral, 0.0);
        if (visual_member(p, q).outside() || convex_member(p, oct.hull, q.tau).outside())
            ++on_bad;
    }
    out.checks.push_back(check("octagon_plane_never_outside", on_bad == 0,
                               std::to_string(on_bad) + "/" +
                                   std::to_string(opt.plane_samples) + " misclassified"));
    for (uint64_t i = 0; i < opt.plane_samples; ++i) {
        double d = kPlaneMinDist +
                   (kPlaneMaxDist - kPlaneMinDist) * rng.uniform(kStreamPlane + 1, 2 * i);
        if (rng.uniform(kStreamPlane + 1, 2 * i + 1) < 0.5) d = -d;
        BallPoint p = plane_offset_point(rng, kStreamPlane + 2, i, kPlaneLateral, d);
        Verdict vis = visual_member(p, q);
        Verdict cvx = convex_member(p, oct.hull, q.tau);
        if (!(vis.outside() && vis.margin > 0 && cvx.outside() && cvx.margin > 0)) ++off_bad;
    }
    out.checks.push_back(check("octagon_standoff_outside_both", off_bad == 0,
                               std::to_string(off_bad) + "/" +
                                   std::to_string(opt.plane_samples) + " not outside"));
    return out;
}

// ---------------------------------------------------------------------------
// emptiness suite

SuiteResult suite_emptiness(const SuiteOptions& opt) {
    SuiteResult out;
    out.suite = "emptiness";

    BuiltFixture sch = build_fixture(fixtures::schottky(), opt.res_override);
    EmptinessResult er = emptiness_probe(sch.chart, opt.emptiness_samples, opt.seed, 0.1,
                                         sch.fixture.probe_radius);
    bool empty_ok = er.kind == EmptinessResult::Kind::empty_certificate && er.certified;
    out.checks.push_back(check("schottky_empty_certificate", empty_ok,
                               "min_h=" + fmt_g9(er.min_h_omega)));

    for (const char* name : {"octagon", "freecomb"}) {
        BuiltFixture b = build_fixture(fixtures::by_name(name), opt.res_override);
        if (b.chart.components.size() < 2) {
            out.checks.push_back(check(std::string(name) + "_witness", false,
                                       "expected >= 2 components"));
            continue;
        }
        try {
            EmptinessResult w = emptiness_probe(b.chart, opt.emptiness_samples, opt.seed);
            bool ok = w.kind == EmptinessResult::Kind::witness && w.witness &&
                      std::abs(w.witness->h - 0.5) <= 1e-3;
            out.checks.push_back(check(std::string(name) + "_witness", ok,
                                       w.witness ? "h=" + fmt_g9(w.witness->h) : "no witness"));
        } catch (const std::runtime_error& e) {
            out.checks.push_back(inconclusive(std::string(name) + "_witness", e.what()));
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// embedding suite

struct SubChart {
    std::shared_ptr<const SphereRaster> raster;
    std::vector<SpherePoint> samples;
    ComponentChart chart;
    double dilation_rad;
};

SubChart build_sub_chart(const Fixture& parent, int res_override) {
    SubChart sc;
    int res = res_override > 0 ? res_override : parent.res;
    sc.raster = build_raster(res);
    const GroupSpec& sub = parent.sub_side == SummandSide::left ? *parent.group->left
                                                                : *parent.group->right;
    sc.samples = sample_limit_set(sub, 4);
    sc.dilation_rad = parent.dilation_cells * sc.raster->cell_diag;
    sc.chart = label_components(sc.raster,
                                mark_limit_cells(*sc.raster, sc.samples, sc.dilation_rad));
    return sc;
}

SuiteResult suite_embedding(const SuiteOptions& opt) {
    SuiteResult out;
    out.suite = "embedding";

    Fixture fc = fixtures::free_combination();
    SubChart sc = build_sub_chart(fc, opt.res_override);
    EmbeddingContext ctx;
    ctx.group = fc.group;
    ctx.side = fc.sub_side;
    ctx.chart_sub = &sc.chart;
    ctx.sub_samples = sc.samples;
    ctx.dilation_rad = sc.dilation_rad;
    ctx.tau = fc.tau;
    ctx.seed = opt.seed;

    EmbeddingReport nice = nicely_qf_embedded(ctx, fc.embed_depth);
    out.checks.push_back(check("freecomb_nicely_qf_embedded", nice.pass() && !nice.vacuous(),
                               "gammas=" + std::to_string(nice.rows.size())));

    EmbeddingReport prec = precisely_qf_embedded(ctx, fc.embed_depth);
    bool same_components = prec.pass() && prec.rows.size() == nice.rows.size();
    for (size_t i = 0; same_components && i < prec.rows.size(); ++i)
        same_components = prec.rows[i].component == nice.rows[i].component;
    out.checks.push_back(check("freecomb_nicely_implies_precisely", same_components,
                               "component assignments must agree"));

    InteriorEmbeddingReport ir = verify_interior_embedding(
        ctx, fc.embed_depth, opt.interior_samples, opt.seed, kInteriorProbeRadius);
    if (ir.found == 0) {
        out.checks.push_back(check("freecomb_interior_embedding", true,
                                   "vacuous (raster hull interior empty here)"));
    } else if (ir.partial) {
        out.checks.push_back(inconclusive("freecomb_interior_embedding",
                                          "found " + std::to_string(ir.found) + "/" +
                                              std::to_string(ir.requested)));
    } else {
        out.checks.push_back(check("freecomb_interior_embedding", ir.pass(),
                                   "violations=" + std::to_string(ir.violations.size()) +
                                       " min_image_max_h=" +
                                       fmt_g9(ir.min_image_max_measure)));
    }

    if (nice.pass() && !nice.vacuous()) {
        CoreEmbeddingReport cr = verify_core_embedding(ctx, fc.embed_depth, nice,
                                                       opt.core_samples, opt.seed);
        if (cr.inconclusive)
            out.checks.push_back(inconclusive("freecomb_core_embedding",
                                              "no bracketing geodesic found"));
        else
            out.checks.push_back(check("freecomb_core_embedding", cr.pass(),
                                       "points=" + std::to_string(cr.found) +
                                           " bracket_failures=" +
                                           std::to_string(cr.bracket_failures) +
                                           " violations=" +
                                           std::to_string(cr.violations.size())));
    } else {
        out.checks.push_back(inconclusive("freecomb_core_embedding",
                                          "nicely report did not pass"));
    }

    // negative control: the straddling letter must break the containment at
    // depth 1 already
    Fixture bad = fixtures::free_combination_corrupted();
    SubChart bsc = build_sub_chart(bad, opt.res_override);
    EmbeddingContext bctx;
    bctx.group = bad.group;
    bctx.side = bad.sub_side;
    bctx.chart_sub = &bsc.chart;
    bctx.sub_samples = bsc.samples;
    bctx.dilation_rad = bsc.dilation_rad;
    bctx.tau = bad.tau;
    EmbeddingReport corrupt = precisely_qf_embedded(bctx, 1);
    out.checks.push_back(check("corrupted_fails_at_depth_1",
                               !corrupt.vacuous() && !corrupt.pass(),
                               "gammas=" + std::to_string(corrupt.rows.size())));
    return out;
}

// ---------------------------------------------------------------------------
// combination suite

std::vector<SpherePoint> circle_points(const Vec3& center, double theta, int count) {
    Vec3 any = std::abs(center.z) < 0.9 ? Vec3{0, 0, 1} : Vec3{1, 0, 0};
    Vec3 e1 = center.cross(any).normalized();
    Vec3 e2 = center.cross(e1);
    std::vector<SpherePoint> pts;
    pts.reserve(count);
    for (int k = 0; k < count; ++k) {
        double phi = 2.0 * M_PI * k / count;
        pts.push_back(SpherePoint::from_unit(std::cos(theta) * center +
                                             std::sin(theta) *
                                                 (std::cos(phi) * e1 + std::sin(phi) * e2)));
    }
    return pts;
}

SuiteResult suite_combination(const SuiteOptions& opt) {
    SuiteResult out;
    out.suite = "combination";
    int res = opt.res_override > 0 ? opt.res_override : 32;

    // schottky: certificate granted and the combined group is free of rank 2
    // (1 + 4 + 12 freely reduced words at length <= 2)
    Fixture sch = fixtures::schottky();
    out.checks.push_back(check("schottky_certificate", sch.certified,
                               "margins " + fmt_g9(sch.certificate.left.worst_margin) + " / " +
                                   fmt_g9(sch.certificate.right.worst_margin)));
    size_t n2 = enumerate_elements(*sch.group, 2).size();
    out.checks.push_back(check("schottky_free_rank2_count", n2 == 17,
                               "length<=2 elements: " + std::to_string(n2)));

    // freecomb: certificate granted; component census stable under refinement
    Fixture fc = fixtures::free_combination();
    out.checks.push_back(check("freecomb_certificate", fc.certified,
                               "margins " + fmt_g9(fc.certificate.left.worst_margin) + " / " +
                                   fmt_g9(fc.certificate.right.worst_margin)));
    BuiltFixture b32 = build_fixture(fc, res);
    BuiltFixture b64 = build_fixture(fc, 2 * res);
    out.checks.push_back(check("freecomb_component_census",
                               b32.chart.components.size() >= 2 &&
                                   b32.chart.components.size() == b64.chart.components.size(),
                               std::to_string(b32.chart.components.size()) + " vs " +
                                   std::to_string(b64.chart.components.size()) +
                                   " at doubled resolution"));

    // type I hypotheses on synthetic data: a quasifuchsian-like circle chart
    // with limit sets placed on the two sides
    auto raster = build_raster(res);
    double r_mark = 1.5 * raster->cell_diag;
    ComponentChart phi_chart = label_components(
        raster, mark_limit_cells(*raster, circle_points({0, 0, 1}, M_PI / 2, 720), r_mark));
    std::vector<SpherePoint> upper = circle_points({0, 0, 1}, 0.6, 48);
    std::vector<SpherePoint> lower = circle_points({0, 0, -1}, 0.6, 48);
    HypothesisReport ci = check_combination_I(upper, lower, phi_chart);
    out.checks.push_back(check("combination_I_synthetic_pass", ci.pass(), ""));
    HypothesisReport ci_bad = check_combination_I(upper, upper, phi_chart);
    out.checks.push_back(check("combination_I_same_side_fails", !ci_bad.pass(), ""));

    // type II hypotheses on a synthetic two-disk chart with a conjugating map
    {
        std::vector<SpherePoint> marks = circle_points({1, 0, 0}, 0.5, 360);
        std::vector<SpherePoint> marks2 = circle_points({-1, 0, 0}, 0.5, 360);
        marks.insert(marks.end(), marks2.begin(), marks2.end());
        ComponentChart disks = label_components(raster,
                                                mark_limit_cells(*raster, marks, r_mark));
        int delta = disks.label_of(SpherePoint::from_unit({1, 0, 0}));
        int delta_p = disks.label_of(SpherePoint::from_unit({-1, 0, 0}));
        Complex at_a = SpherePoint::from_unit({1, 0, 0}).value;
        Complex at_b = SpherePoint::from_unit({-1, 0, 0}).value;
        MoebiusMap h = make_loxodromic(at_a, at_b, 0.6);
        GroupSpec g1 = GroupSpec::raw("synthetic-stab", {{"h", h}});
        // strong conjugator: everything off its small repelling disk (inside
        // the delta' disk) lands next to the shared attracting point in delta
        Vec3 rep = tilt_from_axis({-1, 0, 0}, {0, 0, 1}, 0.3);
        MoebiusMap gamma = make_loxodromic(at_a, SpherePoint::from_unit(rep).value, 10.0);
        std::vector<SpherePoint> lambda1 = {SpherePoint::from_complex(at_a),
                                            SpherePoint::from_complex(at_b)};
        bool valid = delta >= 0 && delta_p >= 0 && delta != delta_p;
        if (!valid) {
            out.checks.push_back(check("combination_II_synthetic_pass", false,
                                       "synthetic chart did not separate the disks"));
        } else {
            HypothesisReport cii =
                check_combination_II(g1, delta, delta_p, gamma, disks, lambda1, 2);
            std::string detail;
            for (const auto& item : cii.items)
                if (!item.pass) detail += item.name + " ";
            out.checks.push_back(check("combination_II_synthetic_pass", cii.pass(), detail));
            // h itself sends the limit set to both sides, failing the side condition
            HypothesisReport cii_bad =
                check_combination_II(g1, delta, delta_p, h, disks, lambda1, 2);
            bool side_failed = false;
            for (const auto& item : cii_bad.items)
                if (item.name == "gamma_lambda_one_side" && !item.pass) side_failed = true;
            out.checks.push_back(check("combination_II_straddle_fails", side_failed, ""));
        }
    }
    return out;
}

}  // namespace

BallPoint plane_offset_point(const CounterRng& rng, uint64_t stream, uint64_t ctr,
                             double lateral_radius, double distance) {
    double rmax = std::tanh(lateral_radius / 2.0);
    double rho = rmax * std::sqrt(rng.uniform(stream, 2 * ctr));
    double phi = 2.0 * M_PI * rng.uniform(stream, 2 * ctr + 1);
    MoebiusMap slide = equator_translation(std::polar(rho, phi));
    Vec3 start{0, 0, std::tanh(distance / 2.0)};
    return apply_ball(slide, BallPoint(start));
}

bool SuiteResult::passed() const {
    for (const auto& c : checks)
        if (c.status != SuiteCheck::Status::pass) return false;
    return true;
}

bool SuiteResult::inconclusive() const {
    bool any = false;
    for (const auto& c : checks) {
        if (c.status == SuiteCheck::Status::fail) return false;
        if (c.status == SuiteCheck::Status::inconclusive) any = true;
    }
    return any;
}

SuiteResult run_suite(const std::string& name, const SuiteOptions& opt) {
    if (name == "cores") return suite_cores(opt);
    if (name == "emptiness") return suite_emptiness(opt);
    if (name == "embedding") return suite_embedding(opt);
    if (name == "combination") return suite_combination(opt);
    throw std::invalid_argument("unknown suite: " + name);
}

std::vector<SuiteResult> run_verify(const std::string& suite_or_all, const SuiteOptions& opt) {
    std::vector<SuiteResult> out;
    if (suite_or_all == "all") {
        for (const char* s : {"cores", "emptiness", "embedding", "combination"})
            out.push_back(run_suite(s, opt));
    } else {
        out.push_back(run_suite(suite_or_all, opt));
    }
    return out;
}

int verify_exit_code(const std::vector<SuiteResult>& results) {
    bool any_fail = false, any_inconclusive = false;
    for (const auto& r : results)
        for (const auto& c : r.checks) {
            if (c.status == SuiteCheck::Status::fail) any_fail = true;
            if (c.status == SuiteCheck::Status::inconclusive) any_inconclusive = true;
        }
    if (any_fail) return 1;
    if (any_inconclusive) return 3;
    return 0;
}

std::string verify_report_json(const std::vector<SuiteResult>& results,
                               const SuiteOptions& opt) {
    ordered_json j;
    j["seed"] = opt.seed;
    j["resolution_override"] = opt.res_override;
    j["suites"] = ordered_json::array();
    for (const auto& r : results) {
        ordered_json s;
        s["suite"] = r.suite;
        s["checks"] = ordered_json::array();
        for (const auto& c : r.checks) {
            ordered_json e;
            e["name"] = c.name;
            e["status"] = c.status == SuiteCheck::Status::pass ? "pass"
                         : c.status == SuiteCheck::Status::fail ? "fail"
                                                                : "inconclusive";
            e["detail"] = c.detail;
            s["checks"].push_back(e);
        }
        j["suites"].push_back(s);
    }
    j["exit_code"] = verify_exit_code(results);
    return j.dump(2) + "\n";
}

}  // namespace viscore
