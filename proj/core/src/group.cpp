#include "viscore/group.hpp"

#include <algorithm>
#include <set>

namespace viscore {

namespace {

constexpr double kMatrixDedupTol = 1e-8;
constexpr double kAngularDedupTol = 1e-6;

std::array<double, 8> matrix_key(const MoebiusMap& m) {
    return {m.a.real(), m.a.imag(), m.b.real(), m.b.imag(),
            m.c.real(), m.c.imag(), m.d.real(), m.d.imag()};
}

}  // namespace

GroupSpec GroupSpec::raw(std::string name, std::vector<Generator> gens) {
    GroupSpec g;
    g.name = std::move(name);
    g.generators = std::move(gens);
    std::set<std::string> labels;
    for (const auto& gen : g.generators)
        if (!labels.insert(gen.label).second)
            throw std::invalid_argument("GroupSpec: duplicate generator label " + gen.label);
    return g;
}

GroupSpec GroupSpec::free_product(std::string name, std::shared_ptr<const GroupSpec> l,
                                  std::shared_ptr<const GroupSpec> r) {
    std::vector<Generator> gens = l->generators;
    gens.insert(gens.end(), r->generators.begin(), r->generators.end());
    GroupSpec g = raw(std::move(name), std::move(gens));
    g.kind = Kind::free_product;
    g.left = std::move(l);
    g.right = std::move(r);
    g.left_count = g.left->generators.size();
    return g;
}

GroupSpec GroupSpec::hnn(std::string name, std::shared_ptr<const GroupSpec> base,
                         std::string stable_label, const MoebiusMap& stable) {
    std::vector<Generator> gens = base->generators;
    gens.push_back({std::move(stable_label), stable});
    GroupSpec g = raw(std::move(name), std::move(gens));
    g.kind = Kind::hnn;
    g.base = std::move(base);
    return g;
}

bool GroupSpec::letter_in_summand(Letter l, SummandSide side) const {
    size_t idx = (size_t)(std::abs((int)l) - 1);
    switch (side) {
        case SummandSide::whole: return true;
        case SummandSide::left: return idx < left_count;
        case SummandSide::right: return idx >= left_count;
        case SummandSide::base: return idx + 1 < generators.size();
    }
    return false;
}

std::string GroupSpec::word_string(const Word& w) const {
    if (w.empty()) return "1";
    std::string out;
    for (Letter l : w) {
        if (!out.empty()) out += ' ';
        out += generators[(size_t)(std::abs((int)l) - 1)].label;
        if (l < 0) out += "^-1";
    }
    return out;
}

namespace {

// letter visit order: g0, g0^-1, g1, g1^-1, ...  BFS in this order makes the
// first occurrence of a matrix the shortest-then-lexicographic representative.
Letter letter_at_rank(int rank) {
    int idx = rank / 2 + 1;
    return (Letter)(rank % 2 == 0 ? idx : -idx);
}

struct Enumerator {
    const GroupSpec& g;
    std::vector<MoebiusMap> letter_maps;  // rank-indexed

    explicit Enumerator(const GroupSpec& spec) : g(spec) {
        for (size_t i = 0; i < g.letter_count(); ++i) {
            letter_maps.push_back(g.generators[i].map);
            letter_maps.push_back(g.generators[i].map.inverse());
        }
    }
    const MoebiusMap& map_for(Letter l) const {
        return letter_maps[2 * (size_t)(std::abs((int)l) - 1) + (l < 0 ? 1 : 0)];
    }
};

}  // namespace

std::vector<GroupElement> enumerate_elements(const GroupSpec& g, int max_len, size_t budget) {
    Enumerator en(g);
    std::vector<GroupElement> out;
    ToleranceSet<8> seen(kMatrixDedupTol);

    out.push_back({Word{}, MoebiusMap::identity()});
    seen.insert(matrix_key(out[0].matrix));

    size_t generated = 1;
    size_t level_begin = 0, level_end = 1;
    int nranks = 2 * (int)g.letter_count();
    for (int len = 1; len <= max_len; ++len) {
        for (size_t i = level_begin; i < level_end; ++i) {
            for (int r = 0; r < nranks; ++r) {
                Letter l = letter_at_rank(r);
                const Word& w = out[i].word;
                if (!w.empty() && w.back() == (Letter)(-l)) continue;  // free reduction
                if (++generated > budget) throw BudgetExceeded(generated);
                MoebiusMap m = out[i].matrix * en.map_for(l);
                auto [idx, inserted] = seen.insert(matrix_key(m));
                (void)idx;
                if (!inserted) continue;  // duplicate element, keep first (lex-least) word
                Word nw = w;
                nw.push_back(l);
                out.push_back({std::move(nw), m});
            }
        }
        level_begin = level_end;
        level_end = out.size();
        if (level_begin == level_end) break;
    }
    return out;
}

std::vector<SpherePoint> sample_limit_set(const GroupSpec& g, int max_len, size_t cap) {
    // elementary groups have no useful limit set to sample
    std::vector<std::pair<Vec3, Vec3>> pairs;
    for (const auto& gen : g.generators) {
        if (classify(gen.map) != MapClass::loxodromic) continue;
        FixedPoints fp = fixed_points(gen.map);
        pairs.emplace_back(fp.first.unit, fp.second.unit);
    }
    bool nonelementary = false;
    for (size_t i = 0; i < pairs.size() && !nonelementary; ++i)
        for (size_t j = i + 1; j < pairs.size(); ++j) {
            bool same = (angular_distance(pairs[i].first, pairs[j].first) < 1e-9 &&
                         angular_distance(pairs[i].second, pairs[j].second) < 1e-9) ||
                        (angular_distance(pairs[i].first, pairs[j].second) < 1e-9 &&
                         angular_distance(pairs[i].second, pairs[j].first) < 1e-9);
            if (!same) { nonelementary = true; break; }
        }
    if (!nonelementary)
        throw std::invalid_argument(
            "sample_limit_set: group is elementary (needs two loxodromic generators "
            "with distinct fixed-point pairs)");

    std::vector<GroupElement> elements = enumerate_elements(g, max_len);

    // basepoint on the limit set keeps the whole orbit on the limit set
    SpherePoint base;
    for (const auto& gen : g.generators)
        if (classify(gen.map) == MapClass::loxodromic) {
            base = fixed_points(gen.map).first;
            break;
        }

    std::vector<SpherePoint> samples;
    ToleranceSet<3> seen(kAngularDedupTol);
    auto add = [&](const SpherePoint& p) {
        if (samples.size() >= cap) return;
        auto [idx, inserted] = seen.insert({p.unit.x, p.unit.y, p.unit.z});
        (void)idx;
        if (inserted) samples.push_back(p);
    };

    for (const auto& e : elements) {
        if (e.word.empty()) continue;
        if (classify(e.matrix) == MapClass::loxodromic)
            add(fixed_points(e.matrix).first);
        if ((int)e.word.size() == max_len)
            add(e.matrix.apply(base));
    }
    return samples;
}

std::vector<GroupElement> coset_representatives(const GroupSpec& g, SummandSide side,
                                                int max_len, size_t budget) {
    if (side == SummandSide::whole) return {};
    if (g.kind == GroupSpec::Kind::raw)
        throw std::invalid_argument(
            "coset_representatives: raw construction has no decidable summand membership");
    if (g.kind == GroupSpec::Kind::free_product && side == SummandSide::base)
        throw std::invalid_argument("coset_representatives: base selector needs an HNN group");
    if (g.kind == GroupSpec::Kind::hnn && side != SummandSide::base)
        throw std::invalid_argument("coset_representatives: HNN groups expose the base summand");

    std::vector<GroupElement> out;
    for (auto& e : enumerate_elements(g, max_len, budget)) {
        if (e.word.empty()) continue;
        bool mixed = false;
        for (Letter l : e.word)
            if (!g.letter_in_summand(l, side)) { mixed = true; break; }
        if (!mixed) continue;
        // normal-form prefix: one representative per coset = empty trailing run
        if (g.letter_in_summand(e.word.back(), side)) continue;
        out.push_back(std::move(e));
    }
    return out;
}

}  // namespace viscore
