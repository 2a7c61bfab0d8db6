#pragma once

#include "viscore/cores.hpp"
#include "viscore/group.hpp"

namespace viscore {

// Finite discreteness evidence for a free (Klein) combination: one closed cap
// per summand, with sampled verification that every nontrivial summand element
// maps the complement of its cap into the cap.
struct PingPongCertificate {
    struct SummandRecord {
        Cap cap;
        size_t elements_checked = 0;
        size_t boundary_samples = 0;
        double worst_margin = 0;  // angular clearance; positive when granted
    };
    SummandRecord left, right;
    double cap_separation = 0;  // angular gap between the closed caps
    int depth = 0;
};

class CertificateDenied : public std::runtime_error {
public:
    explicit CertificateDenied(const std::string& what) : std::runtime_error(what) {}
};

struct CombineResult {
    std::shared_ptr<const GroupSpec> group;
    PingPongCertificate certificate;
};

// Free combination over disjoint caps.  Refuses overlapping caps, limit
// samples escaping their cap, or any sampled containment failure.
CombineResult klein_combine_free(std::shared_ptr<const GroupSpec> g1,
                                 std::shared_ptr<const GroupSpec> g2, const Cap& b1,
                                 const Cap& b2, int cert_depth,
                                 const std::string& name = "");

// limit samples for a summand; falls back to generator fixed points when the
// summand is elementary (cyclic factors have two-point limit sets)
std::vector<SpherePoint> summand_limit_samples(const GroupSpec& g, int depth);

struct CheckItem {
    std::string name;
    bool pass = false;
    std::string detail;
};

struct HypothesisReport {
    std::vector<CheckItem> items;
    bool pass() const {
        for (const auto& i : items)
            if (!i.pass) return false;
        return true;
    }
};

// Type I hypotheses on sampled data: the shared-subgroup chart shows two
// Jordan components and the two limit sets sit in closures of different ones.
HypothesisReport check_combination_I(const std::vector<SpherePoint>& lambda1,
                                     const std::vector<SpherePoint>& lambda2,
                                     const ComponentChart& chart_phi, int slack = 2);

// Type II hypotheses at finite depth: no word of g1 up to `depth` maps delta
// to delta_prime, gamma conjugates the sampled stabilizer of delta_prime into
// the stabilizer of delta, and gamma sends the limit set to one side.
HypothesisReport check_combination_II(const GroupSpec& g1, int delta, int delta_prime,
                                      const MoebiusMap& gamma, const ComponentChart& chart1,
                                      const std::vector<SpherePoint>& lambda1, int depth,
                                      int slack = 2);

// Shared inputs of the QF-embedding predicates and embedding verifiers: the
// combined group with provenance, the distinguished summand, and the summand's
// own chart and limit samples.
struct EmbeddingContext {
    std::shared_ptr<const GroupSpec> group;
    SummandSide side = SummandSide::left;
    const ComponentChart* chart_sub = nullptr;
    std::vector<SpherePoint> sub_samples;
    double dilation_rad = 0;  // dilation used to build chart_sub
    int slack = 2;
    double tau = 0.02;
    uint64_t seed = 1;
    size_t ray_n = 4000;  // ray budget for image points beyond kernel resolution
};

struct GammaRecord {
    Word word;
    std::string word_str;
    int component = -1;  // located component of the summand chart
    Verdict containment;
    JordanFlag jordan = JordanFlag::uncertain;
    bool boundary_miss = false;      // some boundary cell far from every image
    double boundary_clearance = 0;   // best cell-to-image angular distance
    bool pass = false;
};

struct EmbeddingReport {
    int depth = 0;
    bool nicely = false;
    std::vector<GammaRecord> rows;
    bool vacuous() const { return rows.empty(); }
    bool pass() const {
        for (const auto& r : rows)
            if (!r.pass) return false;
        return true;
    }
};

// For each coset representative at the given depth, locate a component whose
// closure contains the pushed limit set and require it to be Jordan.
EmbeddingReport precisely_qf_embedded(const EmbeddingContext& ctx, int depth);
// Additionally requires a boundary cell at angular distance >= 2 dilation
// radii from every pushed limit sample (the boundary-miss witness).
EmbeddingReport nicely_qf_embedded(const EmbeddingContext& ctx, int depth);

// Sampled check that coset representatives move the open visual hull off
// itself: no interior point may map to an interior point.
struct InteriorEmbeddingReport {
    size_t requested = 0, found = 0, attempts = 0;
    bool partial = false;  // fewer interior samples than requested
    size_t far_images = 0;          // images beyond evaluation range
    double min_image_max_measure = 1.0;  // mechanism: should stay above 1/2
    struct Violation {
        Vec3 x, gx;
        std::string gamma;
        double margin;
    };
    std::vector<Violation> violations;
    bool pass() const { return violations.empty(); }
};
InteriorEmbeddingReport verify_interior_embedding(const EmbeddingContext& ctx, int depth,
                                                  size_t samples, uint64_t seed,
                                                  double probe_radius = 1.5,
                                                  double interior_margin = 0.0);

// Same at the hull boundary: 1/2-level points sampled along geodesics between
// distinct components must not map to interior points nor back onto the same
// component's 1/2 level.  Requires a passing nicely-embedded report.
struct CoreEmbeddingReport {
    size_t requested = 0, found = 0;
    size_t bracket_failures = 0;
    bool inconclusive = false;  // no bracketing geodesic found at all
    struct Violation {
        Vec3 x, gx;
        std::string gamma;
        std::string reason;
    };
    std::vector<Violation> violations;
    bool pass() const { return !inconclusive && violations.empty(); }
};
CoreEmbeddingReport verify_core_embedding(const EmbeddingContext& ctx, int depth,
                                          const EmbeddingReport& nicely, size_t samples,
                                          uint64_t seed, double level_tol = 1e-3,
                                          double same_level_tol = 5e-3);

}  // namespace viscore
