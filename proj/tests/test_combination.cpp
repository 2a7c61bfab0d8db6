#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "viscore/combination.hpp"
#include "viscore/fixtures.hpp"

using namespace viscore;

namespace {

struct SubChart {
    std::shared_ptr<const SphereRaster> raster;
    std::vector<SpherePoint> samples;
    ComponentChart chart;
    double dilation;
};

SubChart octagon_chart(int res = 32) {
    SubChart sc;
    sc.raster = build_raster(res);
    sc.samples = sample_limit_set(*fixtures::octagon_group(), 4);
    sc.dilation = 0.5 * sc.raster->cell_diag;
    sc.chart =
        label_components(sc.raster, mark_limit_cells(*sc.raster, sc.samples, sc.dilation));
    return sc;
}

EmbeddingContext context_for(const Fixture& f, const SubChart& sc) {
    EmbeddingContext ctx;
    ctx.group = f.group;
    ctx.side = f.sub_side;
    ctx.chart_sub = &sc.chart;
    ctx.sub_samples = sc.samples;
    ctx.dilation_rad = sc.dilation;
    ctx.tau = f.tau;
    return ctx;
}

}  // namespace

TEST_CASE("free combination over disjoint caps") {
    SUBCASE("two cyclic pieces give a certified rank-2 free group") {
        CombineResult c = klein_combine_free(fixtures::schottky_piece_a(),
                                             fixtures::schottky_piece_b(),
                                             fixtures::schottky_cap_a(),
                                             fixtures::schottky_cap_b(), 4);
        CHECK(c.certificate.left.worst_margin > 0);
        CHECK(c.certificate.right.worst_margin > 0);
        CHECK(c.group->kind == GroupSpec::Kind::free_product);
        CHECK(enumerate_elements(*c.group, 2).size() == 17);
    }
    SUBCASE("overlapping caps are rejected") {
        CHECK_THROWS_AS(klein_combine_free(fixtures::schottky_piece_a(),
                                           fixtures::schottky_piece_b(),
                                           Cap{{1, 0, 0}, 2.0}, Cap{{-1, 0, 0}, 2.0}, 3),
                        std::invalid_argument);
    }
    SUBCASE("containment failures deny the certificate") {
        // weak translations cannot push the cap complement inside the cap
        auto weak_a = std::make_shared<GroupSpec>(GroupSpec::raw(
            "weak-a",
            {{"a", make_loxodromic(SpherePoint::from_unit({1, 0, 0.1}).value,
                                   SpherePoint::from_unit({1, 0, -0.1}).value, 0.2)}}));
        CHECK_THROWS_AS(klein_combine_free(weak_a, fixtures::schottky_piece_b(),
                                           fixtures::schottky_cap_a(),
                                           fixtures::schottky_cap_b(), 3),
                        CertificateDenied);
    }
    SUBCASE("escaping limit samples deny the certificate") {
        CHECK_THROWS_AS(klein_combine_free(fixtures::schottky_piece_a(),
                                           fixtures::schottky_piece_b(),
                                           Cap{{0, 0, 1}, 0.4}, fixtures::schottky_cap_b(), 3),
                        CertificateDenied);
    }
}

TEST_CASE("type I hypothesis checks on synthetic data") {
    auto raster = build_raster(32);
    std::vector<SpherePoint> circle;
    for (int k = 0; k < 720; ++k) {
        double phi = 2.0 * M_PI * k / 720;
        circle.push_back(SpherePoint::from_unit({std::cos(phi), std::sin(phi), 0}));
    }
    ComponentChart phi_chart =
        label_components(raster, mark_limit_cells(*raster, circle, 1.5 * raster->cell_diag));

    auto ring = [](double z, int n) {
        std::vector<SpherePoint> pts;
        double r = std::sqrt(1.0 - z * z);
        for (int k = 0; k < n; ++k) {
            double phi = 2.0 * M_PI * k / n;
            pts.push_back(SpherePoint::from_unit({r * std::cos(phi), r * std::sin(phi), z}));
        }
        return pts;
    };
    CHECK(check_combination_I(ring(0.8, 48), ring(-0.8, 48), phi_chart).pass());
    CHECK(!check_combination_I(ring(0.8, 48), ring(0.6, 48), phi_chart).pass());

    // a one-component chart cannot satisfy the two-sided hypothesis
    ComponentChart one = label_components(
        raster, mark_limit_cells(*raster, ring(0.95, 64), 1.5 * raster->cell_diag));
    CHECK(!check_combination_I(ring(0.8, 48), ring(-0.8, 48), one).pass());
}

TEST_CASE("type II hypothesis checks reject equal components") {
    SubChart sc = octagon_chart(16);
    MoebiusMap gamma = make_loxodromic({0.5, 0}, {-0.5, 0}, 1.0);
    CHECK_THROWS_AS(check_combination_II(*fixtures::octagon_group(), 0, 0, gamma, sc.chart,
                                         sc.samples, 1),
                    std::invalid_argument);
}

TEST_CASE("QF-embedding predicates on the free combination") {
    Fixture fc = fixtures::free_combination();
    SubChart sc = octagon_chart();
    EmbeddingContext ctx = context_for(fc, sc);

    EmbeddingReport nice = nicely_qf_embedded(ctx, 2);
    CHECK(!nice.vacuous());
    CHECK(nice.pass());
    for (const auto& row : nice.rows) {
        CHECK(row.component >= 0);
        CHECK(row.jordan == JordanFlag::yes);
        CHECK(row.boundary_miss);
        CHECK(row.boundary_clearance >= 2.0 * ctx.dilation_rad);
    }

    SUBCASE("nicely implies precisely with the same components") {
        EmbeddingReport prec = precisely_qf_embedded(ctx, 2);
        CHECK(prec.pass());
        REQUIRE(prec.rows.size() == nice.rows.size());
        for (size_t i = 0; i < prec.rows.size(); ++i)
            CHECK(prec.rows[i].component == nice.rows[i].component);
    }
    SUBCASE("depth monotonicity: a deeper pass never unwinds a shallow one") {
        EmbeddingReport l1 = nicely_qf_embedded(ctx, 1);
        EmbeddingReport l3 = nicely_qf_embedded(ctx, 3);
        CHECK(l3.pass());
        CHECK(l1.pass());
        CHECK(l1.rows.size() < l3.rows.size());
    }
    SUBCASE("the whole group is vacuously embedded") {
        EmbeddingContext whole = ctx;
        whole.side = SummandSide::whole;
        EmbeddingReport rep = nicely_qf_embedded(whole, 3);
        CHECK(rep.vacuous());
        CHECK(rep.pass());
    }
}

TEST_CASE("corrupted combination fails at depth one") {
    Fixture bad = fixtures::free_combination_corrupted();
    SubChart sc = octagon_chart();
    EmbeddingContext ctx = context_for(bad, sc);
    EmbeddingReport rep = precisely_qf_embedded(ctx, 1);
    CHECK(!rep.vacuous());
    CHECK(!rep.pass());
}

TEST_CASE("interior embedding verifier") {
    Fixture fc = fixtures::free_combination();
    SubChart sc = octagon_chart();
    EmbeddingContext ctx = context_for(fc, sc);

    InteriorEmbeddingReport rep = verify_interior_embedding(ctx, 2, 25, 11, 1.0);
    CHECK(rep.found == 25);
    CHECK(rep.pass());
    CHECK(rep.min_image_max_measure > 0.5);  // some side always exceeds one half
}

TEST_CASE("core embedding verifier") {
    Fixture fc = fixtures::free_combination();
    SubChart sc = octagon_chart();
    EmbeddingContext ctx = context_for(fc, sc);
    EmbeddingReport nice = nicely_qf_embedded(ctx, 2);
    REQUIRE(nice.pass());

    CoreEmbeddingReport rep = verify_core_embedding(ctx, 2, nice, 8, 13);
    CHECK(!rep.inconclusive);
    CHECK(rep.found == 8);
    CHECK(rep.pass());

    SUBCASE("refuses to run without a passing nicely report") {
        Fixture bad = fixtures::free_combination_corrupted();
        EmbeddingContext bctx = context_for(bad, sc);
        EmbeddingReport broken = nicely_qf_embedded(bctx, 1);
        CHECK(!broken.pass());
        CHECK_THROWS_AS(verify_core_embedding(bctx, 1, broken, 4, 13),
                        std::invalid_argument);
    }
}
