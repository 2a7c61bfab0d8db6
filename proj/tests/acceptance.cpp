// Acceptance gate: one pass/fail line per criterion, nonzero exit on failure.
#include <cstdio>
#include <cstring>
#include <string>
#include <vector>

#include "viscore/io.hpp"
#include "viscore/suites.hpp"

using namespace viscore;

namespace {

int g_failures = 0;

void report(int criterion, bool pass, const std::string& what, const std::string& detail) {
    std::printf("[%s] criterion %2d: %s (%s)\n", pass ? "PASS" : "FAIL", criterion,
                what.c_str(), detail.c_str());
    std::fflush(stdout);
    if (!pass) ++g_failures;
}

CellRegion hemisphere_region(const SphereRaster& r) {
    CellRegion reg;
    for (size_t c = 0; c < r.size(); ++c)
        if (r.centers[c].z > 0) reg.items.push_back({(int)c, CellRegion::kFull});
    return reg;
}

// mass of the subcells left undecided along a rasterized cap boundary
double straddle_band(const BallPoint& y, const CellRegion& region, const SphereRaster& r) {
    CellRegion residual;
    for (const auto& it : region.items)
        if (it.mask != CellRegion::kFull)
            residual.items.push_back({it.cell, (uint8_t)(~it.mask & CellRegion::kFull)});
    return measure_kernel(y, residual, r).value;
}

void criterion_1() {
    auto r = build_raster(32);
    BallPoint origin;
    double full = measure_kernel(origin, region_all(*r), *r).value;
    double hemi = measure_kernel(origin, hemisphere_region(*r), *r).value;
    double cap = measure_kernel(origin, region_cap(*r, Cap{{0, 0, 1}, M_PI / 3}), *r).value;
    bool ok = std::abs(full - 1.0) <= 1e-6 && std::abs(hemi - 0.5) <= 2e-3 &&
              std::abs(cap - 0.25) <= 2e-3;
    char buf[128];
    std::snprintf(buf, sizeof buf, "full=%.8f hemi=%.5f cap=%.5f", full, hemi, cap);
    report(1, ok, "measure normalization and symmetry at n=32", buf);
}

void criterion_2() {
    BuiltFixture oct = build_fixture(fixtures::octagon());
    BuiltFixture fc = build_fixture(fixtures::free_combination());
    CounterRng rng{202};
    int agree = 0;
    const int total = 20;
    for (uint64_t i = 0; i < total; ++i) {
        const BuiltFixture& b = (i % 2 == 0) ? oct : fc;
        const ComponentChart& chart = b.chart;
        int id = (int)(rng.uniform(0, i) * chart.components.size());
        BallPoint y(rng.unit_vector(1, i) * (0.36 * rng.uniform(2, i)));
        HarmonicEstimate k = measure_kernel(y, chart.component_region(id), *chart.raster);
        HarmonicEstimate rays = measure_rays(
            y, [&](const SpherePoint& p) { return chart.label_of(p) == id; }, 100000,
            500 + i);
        if (std::abs(k.value - rays.value) <= k.error + rays.error) ++agree;
    }
    report(2, agree >= 19, "kernel and ray estimators agree on fixture components",
           std::to_string(agree) + "/20 within combined error");
}

void criterion_3() {
    auto raster = build_raster(32);
    CounterRng rng{303};
    int pullback_ok = 0, kernel_ok = 0;
    const int total = 50;
    for (uint64_t i = 0; i < total; ++i) {
        Complex p(2 * rng.uniform(0, 2 * i) - 1, 2 * rng.uniform(0, 2 * i + 1) - 1);
        Complex q = p + std::polar(1.0 + rng.uniform(1, i), 6.28 * rng.uniform(2, i));
        MoebiusMap g = make_loxodromic(p, q, 0.3 + 1.2 * rng.uniform(3, i));
        Cap cap{rng.unit_vector(4, i), 0.4 + 1.8 * rng.uniform(5, i)};

        BallPoint y;
        BallPoint gy;
        bool placed = false;
        for (uint64_t t = 0; t < 40 && !placed; ++t) {
            y = BallPoint(rng.unit_vector(6, 50 * i + t) * (0.6 * rng.uniform(7, 50 * i + t)));
            gy = apply_ball(g, y);
            placed = gy.v.norm() < 0.7;  // keep both endpoints in quadrature range
        }
        if (!placed) continue;

        MappedCap moved = map_cap(g, cap);
        if (std::abs(cap_measure(y, cap) - cap_measure(gy, moved.cap)) <= 1e-8) ++pullback_ok;

        CellRegion r1 = region_cap(*raster, cap);
        CellRegion r2 = region_cap(*raster, moved.cap);
        HarmonicEstimate k1 = measure_kernel(y, r1, *raster);
        HarmonicEstimate k2 = measure_kernel(gy, r2, *raster);
        double allowance = straddle_band(y, r1, *raster) + straddle_band(gy, r2, *raster);
        if (std::abs(k1.value - k2.value) <= k1.error + k2.error + allowance) ++kernel_ok;
    }
    report(3, pullback_ok == total && kernel_ok >= 45, "visual measure is isometry invariant",
           "pullback " + std::to_string(pullback_ok) + "/50 at 1e-8, kernel " +
               std::to_string(kernel_ok) + "/50 within combined error");
}

void criterion_4() {
    Fixture f = fixtures::schottky();
    bool ok = true;
    std::string detail;
    for (int res : {32, 64}) {
        BuiltFixture b = build_fixture(f, res);
        ok = ok && b.chart.components.size() == 1;
        EmptinessResult er = emptiness_probe(b.chart, 100, 404, 0.1, f.probe_radius);
        ok = ok && er.kind == EmptinessResult::Kind::empty_certificate && er.certified &&
             er.min_h_omega >= 0.9;
        detail += "n=" + std::to_string(res) + " min_h=" + fmt_g9(er.min_h_omega) + " ";
    }
    report(4, ok, "empty direction: connected domain has an empty visual hull", detail);
}

void criterion_5() {
    bool ok = true;
    int tested = 0;
    std::string detail;
    for (const std::string& name : fixtures::names()) {
        BuiltFixture b = build_fixture(fixtures::by_name(name));
        if (b.chart.components.size() < 2) continue;
        ++tested;
        EmptinessResult er = emptiness_probe(b.chart, 20, 505);
        bool good = er.kind == EmptinessResult::Kind::witness && er.witness &&
                    std::abs(er.witness->h - 0.5) <= 1e-3;
        ok = ok && good;
        detail += name + (good ? " ok " : " BAD ");
    }
    report(5, ok && tested >= 2, "nonempty direction: half-level witnesses", detail);
}

void criterion_6() {
    bool ok = true;
    std::string detail;
    for (const char* name : {"octagon", "freecomb"}) {
        BuiltFixture b = build_fixture(fixtures::by_name(name));
        SubsetCheckReport rep =
            check_v_subset_c(b.hull_query(), b.hull, 200, 606, b.fixture.probe_radius);
        bool good = rep.found == 200 && rep.violations.empty();
        ok = ok && good;
        detail += std::string(name) + " found=" + std::to_string(rep.found) +
                  " violations=" + std::to_string(rep.violations.size()) + " ";
    }
    report(6, ok, "visual hull sampled inside the convex hull at tau=0.02", detail);
}

void criterion_7() {
    BuiltFixture b = build_fixture(fixtures::octagon());
    HullQuery q = b.hull_query();
    CounterRng rng{707};
    int on_bad = 0, off_bad = 0;
    for (uint64_t i = 0; i < 100; ++i) {
        BallPoint p = plane_offset_point(rng, 1, i, 1.5, 0.0);
        if (visual_member(p, q).outside() || convex_member(p, b.hull, q.tau).outside())
            ++on_bad;
    }
    for (uint64_t i = 0; i < 100; ++i) {
        double d = 0.2 + 1.0 * rng.uniform(2, 2 * i);
        if (rng.uniform(2, 2 * i + 1) < 0.5) d = -d;
        BallPoint p = plane_offset_point(rng, 3, i, 1.5, d);
        Verdict vis = visual_member(p, q);
        Verdict cvx = convex_member(p, b.hull, q.tau);
        if (!(vis.outside() && vis.margin > 0 && cvx.outside() && cvx.margin > 0)) ++off_bad;
    }
    report(7, on_bad == 0 && off_bad == 0, "totally geodesic equality case on the octagon",
           std::to_string(on_bad) + "/100 plane misclassified, " + std::to_string(off_bad) +
               "/100 standoff not outside");
}

void criterion_8() {
    Fixture fc = fixtures::free_combination();
    auto raster = build_raster(fc.res);
    std::vector<SpherePoint> sub_samples = sample_limit_set(*fc.group->left, 4);
    double dil = fc.dilation_cells * raster->cell_diag;
    ComponentChart sub_chart =
        label_components(raster, mark_limit_cells(*raster, sub_samples, dil));

    EmbeddingContext ctx;
    ctx.group = fc.group;
    ctx.side = fc.sub_side;
    ctx.chart_sub = &sub_chart;
    ctx.sub_samples = sub_samples;
    ctx.dilation_rad = dil;
    ctx.tau = fc.tau;

    EmbeddingReport nice = nicely_qf_embedded(ctx, 3);
    InteriorEmbeddingReport interior = verify_interior_embedding(ctx, 3, 200, 808, 1.0);
    CoreEmbeddingReport core = verify_core_embedding(ctx, 3, nice, 50, 808);

    Fixture bad = fixtures::free_combination_corrupted();
    std::vector<SpherePoint> bad_samples = sample_limit_set(*bad.group->left, 4);
    ComponentChart bad_chart =
        label_components(raster, mark_limit_cells(*raster, bad_samples, dil));
    EmbeddingContext bctx = ctx;
    bctx.group = bad.group;
    bctx.chart_sub = &bad_chart;
    bctx.sub_samples = bad_samples;
    EmbeddingReport corrupt = precisely_qf_embedded(bctx, 1);

    bool ok = nice.pass() && !nice.vacuous() && interior.found == 200 &&
              interior.violations.empty() && core.found == 50 && core.violations.empty() &&
              !corrupt.vacuous() && !corrupt.pass();
    report(8, ok, "QF-embedding predicates and embedding verifiers at depth 3",
           "nicely=" + std::string(nice.pass() ? "pass" : "fail") +
               " interior=" + std::to_string(interior.found) + "pts/" +
               std::to_string(interior.violations.size()) + "viol core=" +
               std::to_string(core.found) + "pts/" + std::to_string(core.violations.size()) +
               "viol corrupted_fails=" + (corrupt.pass() ? "no" : "yes"));
}

// criteria 9 and 10 share the suite runs
void criteria_9_and_10() {
    SuiteOptions opt;
    opt.seed = 909;
    std::vector<SuiteResult> first = run_verify("all", opt);
    std::vector<SuiteResult> second = run_verify("all", opt);
    std::string rep1 = verify_report_json(first, opt);
    std::string rep2 = verify_report_json(second, opt);

    BuiltFixture sch = build_fixture(fixtures::schottky(), 16);
    HullQuery q = sch.hull_query();
    q.seed = 909;
    SliceResult s1 = slice_classify(SlicePlane{}, 0.9, 61, q, sch.hull);
    SliceResult s2 = slice_classify(SlicePlane{}, 0.9, 61, q, sch.hull);
    bool slice_same = render_slice(s1).rgb == render_slice(s2).rgb &&
                      slice_csv(s1) == slice_csv(s2);
    report(9, rep1 == rep2 && slice_same, "verify and slice runs are byte-deterministic",
           rep1 == rep2 ? "reports identical" : "reports differ");

    // refinement stability: component counts and suite verdicts at doubled n
    bool counts_ok = true;
    std::string detail;
    for (const std::string& name : fixtures::names()) {
        size_t c32 = build_fixture(fixtures::by_name(name)).chart.components.size();
        size_t c64 = build_fixture(fixtures::by_name(name), 64).chart.components.size();
        counts_ok = counts_ok && c32 == c64;
        detail += name + "=" + std::to_string(c32) + "/" + std::to_string(c64) + " ";
    }
    SuiteOptions opt64 = opt;
    opt64.res_override = 64;
    std::vector<SuiteResult> refined = run_verify("all", opt64);
    bool verdicts_ok = refined.size() == first.size();
    for (size_t s = 0; verdicts_ok && s < refined.size(); ++s) {
        verdicts_ok = refined[s].checks.size() == first[s].checks.size();
        for (size_t c = 0; verdicts_ok && c < refined[s].checks.size(); ++c)
            verdicts_ok = refined[s].checks[c].status == first[s].checks[c].status &&
                          refined[s].checks[c].name == first[s].checks[c].name;
    }
    report(10, counts_ok && verdicts_ok,
           "component counts and suite verdicts stable from n=32 to n=64",
           detail + (verdicts_ok ? "verdicts match" : "verdicts differ"));
}

}  // namespace

int main() {
    criterion_1();
    criterion_2();
    criterion_3();
    criterion_4();
    criterion_5();
    criterion_6();
    criterion_7();
    criterion_8();
    criteria_9_and_10();
    std::printf("%s: %d criterion(s) failed\n", g_failures == 0 ? "ACCEPTED" : "REJECTED",
                g_failures);
    return g_failures == 0 ? 0 : 1;
}
