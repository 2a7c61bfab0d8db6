#include "viscore/combination.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace viscore {

namespace {

constexpr uint64_t kStreamInterior = 0x494e5452;
constexpr uint64_t kStreamCorePick = 0x434f5245;

BallPoint sample_ball(const CounterRng& rng, uint64_t stream, uint64_t ctr, double rho) {
    double rmax = std::tanh(rho / 2.0);
    Vec3 dir = rng.unit_vector(stream, 2 * ctr);
    double r = rmax * std::cbrt(rng.uniform(stream, 2 * ctr + 1));
    return BallPoint(dir * r);
}

// containment margin of a mapped cap inside a target cap (angular slack)
double cap_containment_margin(const Cap& inner, const Cap& outer) {
    return outer.theta - (angular_distance(inner.center, outer.center) + inner.theta);
}

PingPongCertificate::SummandRecord check_summand(const GroupSpec& g, const Cap& cap,
                                                 int depth,
                                                 const std::vector<SpherePoint>& lambda) {
    for (const SpherePoint& p : lambda)
        if (!cap.contains(p))
            throw CertificateDenied("klein_combine_free: limit sample of " + g.name +
                                    " escapes its cap");

    Cap complement{-cap.center, M_PI - cap.theta};
    PingPongCertificate::SummandRecord rec;
    rec.cap = cap;
    rec.boundary_samples = 24;
    rec.worst_margin = M_PI;

    for (const GroupElement& e : enumerate_elements(g, depth)) {
        if (e.word.empty()) continue;
        MappedCap img = map_cap(e.matrix, complement, (int)rec.boundary_samples);
        double margin = cap_containment_margin(img.cap, cap);
        rec.worst_margin = std::min(rec.worst_margin, margin);
        ++rec.elements_checked;
        if (margin <= 0.0)
            throw CertificateDenied("klein_combine_free: element " + g.word_string(e.word) +
                                    " of " + g.name + " breaks cap containment (margin " +
                                    fmt_g9(margin) + ")");
    }
    if (rec.elements_checked == 0)
        throw CertificateDenied("klein_combine_free: summand " + g.name +
                                " has no nontrivial elements to certify");
    return rec;
}

}  // namespace

std::vector<SpherePoint> summand_limit_samples(const GroupSpec& g, int depth) {
    try {
        return sample_limit_set(g, depth);
    } catch (const std::invalid_argument&) {
        // elementary summand: the limit set is the generators' fixed points
        std::vector<SpherePoint> out;
        for (const auto& gen : g.generators) {
            if (classify(gen.map) == MapClass::identity) continue;
            FixedPoints fp = fixed_points(gen.map);
            out.push_back(fp.first);
            if (!fp.single) out.push_back(fp.second);
        }
        if (out.empty())
            throw std::invalid_argument("summand_limit_samples: trivial summand " + g.name);
        return out;
    }
}

CombineResult klein_combine_free(std::shared_ptr<const GroupSpec> g1,
                                 std::shared_ptr<const GroupSpec> g2, const Cap& b1,
                                 const Cap& b2, int cert_depth, const std::string& name) {
    double separation = angular_distance(b1.center, b2.center) - b1.theta - b2.theta;
    if (separation <= 0.0)
        throw std::invalid_argument("klein_combine_free: caps overlap (separation " +
                                    fmt_g9(separation) + ")");

    CombineResult out;
    out.certificate.cap_separation = separation;
    out.certificate.depth = cert_depth;
    out.certificate.left = check_summand(*g1, b1, cert_depth, summand_limit_samples(*g1, cert_depth));
    out.certificate.right = check_summand(*g2, b2, cert_depth, summand_limit_samples(*g2, cert_depth));

    std::string combined_name = name.empty() ? g1->name + "*" + g2->name : name;
    out.group = std::make_shared<GroupSpec>(
        GroupSpec::free_product(combined_name, std::move(g1), std::move(g2)));
    return out;
}

HypothesisReport check_combination_I(const std::vector<SpherePoint>& lambda1,
                                     const std::vector<SpherePoint>& lambda2,
                                     const ComponentChart& chart_phi, int slack) {
    HypothesisReport rep;

    bool two_jordan = chart_phi.components.size() == 2 &&
                      chart_phi.components[0].jordan == JordanFlag::yes &&
                      chart_phi.components[1].jordan == JordanFlag::yes;
    rep.items.push_back({"phi_two_jordan_components", two_jordan,
                         "components=" + std::to_string(chart_phi.components.size())});

    auto locate_side = [&](const std::vector<SpherePoint>& lambda) {
        for (const auto& comp : chart_phi.components)
            if (closure_contains(chart_phi, comp.id, lambda, slack).inside()) return comp.id;
        return -1;
    };
    int side1 = locate_side(lambda1);
    int side2 = locate_side(lambda2);
    rep.items.push_back({"lambda1_one_side", side1 >= 0, "component=" + std::to_string(side1)});
    rep.items.push_back({"lambda2_one_side", side2 >= 0, "component=" + std::to_string(side2)});
    rep.items.push_back({"different_sides", side1 >= 0 && side2 >= 0 && side1 != side2,
                         std::to_string(side1) + " vs " + std::to_string(side2)});
    return rep;
}

HypothesisReport check_combination_II(const GroupSpec& g1, int delta, int delta_prime,
                                      const MoebiusMap& gamma, const ComponentChart& chart1,
                                      const std::vector<SpherePoint>& lambda1, int depth,
                                      int slack) {
    if (delta == delta_prime)
        throw std::invalid_argument("check_combination_II: components must be distinct");

    HypothesisReport rep;
    bool jordan = chart1.components.at(delta).jordan == JordanFlag::yes &&
                  chart1.components.at(delta_prime).jordan == JordanFlag::yes;
    rep.items.push_back({"components_jordan", jordan, ""});

    // non-conjugacy at finite depth: no sampled word carries delta to delta'
    std::string witness;
    std::vector<GroupElement> words = enumerate_elements(g1, depth);
    for (const GroupElement& e : words) {
        if (e.word.empty()) continue;
        std::vector<LabelImage> img = component_image(chart1, e.matrix);
        if (img[delta].status == LabelImage::Status::mapped && img[delta].target == delta_prime) {
            witness = g1.word_string(e.word);
            break;
        }
    }
    rep.items.push_back({"no_conjugating_word_at_depth", witness.empty(),
                         witness.empty() ? "depth=" + std::to_string(depth) : witness});

    // gamma conjugates the sampled stabilizer of delta' into that of delta
    size_t stab_checked = 0, stab_ok = 0;
    MoebiusMap gamma_inv = gamma.inverse();
    for (const GroupElement& e : words) {
        if (e.word.empty()) continue;
        std::vector<LabelImage> img = component_image(chart1, e.matrix);
        if (!(img[delta_prime].status == LabelImage::Status::mapped &&
              img[delta_prime].target == delta_prime))
            continue;
        ++stab_checked;
        MoebiusMap conj = gamma * e.matrix * gamma_inv;
        std::vector<LabelImage> cimg = component_image(chart1, conj);
        if (cimg[delta].status == LabelImage::Status::mapped && cimg[delta].target == delta)
            ++stab_ok;
    }
    rep.items.push_back({"gamma_conjugates_stabilizer", stab_checked > 0 && stab_ok == stab_checked,
                         std::to_string(stab_ok) + "/" + std::to_string(stab_checked)});

    // side condition: gamma pushes the limit set into the closure of one of
    // the two distinguished components
    std::vector<SpherePoint> pushed;
    pushed.reserve(lambda1.size());
    for (const SpherePoint& p : lambda1) pushed.push_back(gamma.apply(p));
    bool side = closure_contains(chart1, delta, pushed, slack).inside() ||
                closure_contains(chart1, delta_prime, pushed, slack).inside();
    rep.items.push_back({"gamma_lambda_one_side", side, ""});
    return rep;
}

// ---------------------------------------------------------------------------
// QF-embedding predicates

namespace {

EmbeddingReport run_embedding(const EmbeddingContext& ctx, int depth, bool nicely) {
    if (!ctx.chart_sub) throw std::invalid_argument("EmbeddingContext: no summand chart");
    EmbeddingReport rep;
    rep.depth = depth;
    rep.nicely = nicely;

    const ComponentChart& chart = *ctx.chart_sub;
    const SphereRaster& raster = *chart.raster;

    for (const GroupElement& e : coset_representatives(*ctx.group, ctx.side, depth)) {
        GammaRecord row;
        row.word = e.word;
        row.word_str = ctx.group->word_string(e.word);

        std::vector<SpherePoint> images;
        images.reserve(ctx.sub_samples.size());
        for (const SpherePoint& p : ctx.sub_samples) images.push_back(e.matrix.apply(p));

        // locate the component whose closure holds every pushed sample
        for (const auto& comp : chart.components) {
            Verdict v = closure_contains(chart, comp.id, images, ctx.slack);
            if (v.inside()) {
                row.component = comp.id;
                row.containment = v;
                row.jordan = comp.jordan;
                break;
            }
        }
        row.pass = row.component >= 0 && row.jordan == JordanFlag::yes;

        if (nicely && row.component >= 0) {
            // boundary-miss witness: a boundary cell of the located component
            // at angular distance >= 2 dilation radii from all pushed samples
            double best = 0;
            for (int cell : chart.components[row.component].boundary_cells) {
                const Vec3& c = raster.centers[cell];
                double nearest = M_PI;
                for (const SpherePoint& img : images)
                    nearest = std::min(nearest, angular_distance(c, img.unit));
                best = std::max(best, nearest);
            }
            row.boundary_clearance = best;
            row.boundary_miss = best >= 2.0 * ctx.dilation_rad;
            row.pass = row.pass && row.boundary_miss;
        }
        rep.rows.push_back(std::move(row));
    }
    return rep;
}

}  // namespace

EmbeddingReport precisely_qf_embedded(const EmbeddingContext& ctx, int depth) {
    return run_embedding(ctx, depth, false);
}

EmbeddingReport nicely_qf_embedded(const EmbeddingContext& ctx, int depth) {
    return run_embedding(ctx, depth, true);
}

// ---------------------------------------------------------------------------
// embedding verifiers

InteriorEmbeddingReport verify_interior_embedding(const EmbeddingContext& ctx, int depth,
                                                  size_t samples, uint64_t seed,
                                                  double probe_radius,
                                                  double interior_margin) {
    InteriorEmbeddingReport rep;
    rep.requested = samples;

    HullQuery q;
    q.chart = ctx.chart_sub;
    q.filter = HullQuery::Filter::all;
    q.tau = ctx.tau;
    q.seed = seed;
    q.ray_fallback_n = ctx.ray_n;

    std::vector<GroupElement> reps = coset_representatives(*ctx.group, ctx.side, depth);
    CounterRng rng{seed};
    size_t max_attempts = std::max<size_t>(400 * samples, 10000);

    size_t give_up_empty = 20000;  // interior evidently empty at this resolution
    for (uint64_t i = 0; i < max_attempts && rep.found < samples; ++i) {
        if (rep.found == 0 && i >= give_up_empty) break;
        ++rep.attempts;
        BallPoint x = sample_ball(rng, kStreamInterior, i, probe_radius);
        Verdict v = visual_member(x, q);
        if (!v.inside() || v.margin < interior_margin) continue;
        ++rep.found;

        for (const GroupElement& g : reps) {
            BallPoint gx;
            try {
                gx = apply_ball(g.matrix, x);
            } catch (const std::range_error&) {
                ++rep.far_images;  // essentially on the boundary; never interior
                continue;
            }
            VisualEvaluation ev = evaluate_visual(gx, q);
            double max_plus = 0, max_val = 0;
            for (const auto& m : ev.components) {
                max_plus = std::max(max_plus, m.value + m.error);
                max_val = std::max(max_val, m.value);
            }
            // account the marked mass toward the mechanism statistic: a true
            // component reaches under the marked cells
            rep.min_image_max_measure =
                std::min(rep.min_image_max_measure, max_val + ev.marked.value);
            bool hidden = ev.marked.value + ev.marked.error >= 0.5 - q.tau;
            bool image_inside = max_plus <= 0.5 - q.tau && !hidden;
            if (image_inside && ((0.5 - q.tau) - max_plus) >= interior_margin)
                rep.violations.push_back({x.v, gx.v, ctx.group->word_string(g.word),
                                          (0.5 - q.tau) - max_plus});
        }
    }
    rep.partial = rep.found < rep.requested;
    return rep;
}

CoreEmbeddingReport verify_core_embedding(const EmbeddingContext& ctx, int depth,
                                          const EmbeddingReport& nicely, size_t samples,
                                          uint64_t seed, double level_tol,
                                          double same_level_tol) {
    if (!nicely.nicely || !nicely.pass())
        throw std::invalid_argument(
            "verify_core_embedding: requires a passing nicely-QF-embedded report");
    const ComponentChart& chart = *ctx.chart_sub;
    if (chart.components.size() < 2)
        throw std::invalid_argument("verify_core_embedding: summand chart has one component");

    CoreEmbeddingReport rep;
    rep.requested = samples;

    HullQuery q;
    q.chart = ctx.chart_sub;
    q.tau = ctx.tau;
    q.seed = seed;
    q.ray_fallback_n = ctx.ray_n;

    std::vector<GroupElement> reps = coset_representatives(*ctx.group, ctx.side, depth);
    CounterRng rng{seed};
    size_t ncomp = chart.components.size();

    for (uint64_t i = 0; rep.found < samples && i < 20 * samples + 40; ++i) {
        // random geodesic between two distinct components
        size_t c1 = (size_t)(rng.uniform(kStreamCorePick, 3 * i) * ncomp);
        size_t c2 = (size_t)(rng.uniform(kStreamCorePick, 3 * i + 1) * (ncomp - 1));
        if (c2 >= c1) ++c2;
        const ComponentInfo& comp1 = chart.components[c1];
        const ComponentInfo& comp2 = chart.components[c2];
        double u = rng.uniform(kStreamCorePick, 3 * i + 2);
        int cell1 = comp1.rep_cells[(size_t)(u * comp1.rep_cells.size())];
        int cell2 = comp2.rep_cells[(size_t)(splitmix64(i) % comp2.rep_cells.size())];

        HalfLevelPoint lvl;
        try {
            lvl = half_level(SpherePoint::from_unit(chart.raster->centers[cell1]),
                             SpherePoint::from_unit(chart.raster->centers[cell2]),
                             comp1.id, chart, level_tol);
        } catch (const std::runtime_error&) {
            ++rep.bracket_failures;
            continue;
        }
        ++rep.found;

        for (const GroupElement& g : reps) {
            BallPoint gx;
            try {
                gx = apply_ball(g.matrix, lvl.point);
            } catch (const std::range_error&) {
                continue;
            }
            VisualEvaluation ev = evaluate_visual(gx, q);
            double max_plus = 0;
            for (const auto& m : ev.components)
                max_plus = std::max(max_plus, m.value + m.error);
            bool hidden = ev.marked.value + ev.marked.error >= 0.5 - q.tau;
            if (max_plus <= 0.5 - q.tau && !hidden) {
                rep.violations.push_back({lvl.point.v, gx.v, ctx.group->word_string(g.word),
                                          "image is hull-interior"});
                continue;
            }
            const HarmonicEstimate& same = ev.components[comp1.id];
            if (std::abs(same.value - 0.5) <= same_level_tol &&
                same.error <= same_level_tol)
                rep.violations.push_back({lvl.point.v, gx.v, ctx.group->word_string(g.word),
                                          "image returns to the same 1/2 level"});
        }
    }
    rep.inconclusive = rep.found == 0;
    return rep;
}

}  // namespace viscore
