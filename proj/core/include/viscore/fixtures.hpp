#pragma once

#include "viscore/combination.hpp"
#include "viscore/cores.hpp"

namespace viscore {

// A shipped group together with the run profile its checks are calibrated at.
// dilation is given in cell diagonals so it scales 1:1 under refinement.
struct Fixture {
    std::string name;
    std::shared_ptr<const GroupSpec> group;
    int res = 32;
    int depth = 4;                // word depth for limit sampling
    double dilation_cells = 0.5;  // marking radius in cell diagonals
    double tau = 0.02;
    int embed_depth = 3;          // truncation depth of the coset quantifier
    double probe_radius = 1.5;    // hyperbolic radius of sampling windows
    SummandSide sub_side = SummandSide::left;
    bool certified = false;
    PingPongCertificate certificate;
};

namespace fixtures {

// cocompact Fuchsian group of the regular hyperbolic octagon: four hyperbolic
// translations along the diagonals, limit set the unit circle
std::shared_ptr<const GroupSpec> octagon_group();

// cyclic pieces used by the combined fixtures
std::shared_ptr<const GroupSpec> schottky_piece_a();
std::shared_ptr<const GroupSpec> schottky_piece_b();
std::shared_ptr<const GroupSpec> cyclic_north();
std::shared_ptr<const GroupSpec> cyclic_straddling();  // negative control

// caps backing the certified combinations
Cap schottky_cap_a();
Cap schottky_cap_b();
Cap freecomb_cap_octagon();
Cap freecomb_cap_cyclic();

Fixture octagon();
Fixture schottky();            // rank-2 free group over disjoint caps
Fixture free_combination();    // octagon * cyclic_north, certified
Fixture free_combination_corrupted();  // provenance kept, certificate impossible

Fixture by_name(const std::string& name);
std::vector<std::string> names();

}  // namespace fixtures

// Fixture with its raster, limit samples, chart and sampled convex hull built
// at the profile resolution (or an override).
struct BuiltFixture {
    Fixture fixture;
    std::shared_ptr<const SphereRaster> raster;
    std::vector<SpherePoint> limit_samples;
    ComponentChart chart;
    ConvexHullSamples hull;
    double dilation_rad = 0;

    HullQuery hull_query() const {
        HullQuery q;
        q.chart = &chart;
        q.tau = fixture.tau;
        return q;
    }
    EmbeddingContext embedding_context(const ComponentChart& sub_chart,
                                       const std::vector<SpherePoint>& sub_samples,
                                       double sub_dilation) const {
        EmbeddingContext ctx;
        ctx.group = fixture.group;
        ctx.side = fixture.sub_side;
        ctx.chart_sub = &sub_chart;
        ctx.sub_samples = sub_samples;
        ctx.dilation_rad = sub_dilation;
        ctx.tau = fixture.tau;
        return ctx;
    }
};

BuiltFixture build_fixture(const Fixture& f, int res_override = 0);

}  // namespace viscore
