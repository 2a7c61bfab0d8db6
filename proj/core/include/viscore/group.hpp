#pragma once

#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "viscore/moebius.hpp"

namespace viscore {

// Letters are 1-based generator indices, negated for inverses.
using Letter = int16_t;
using Word = std::vector<Letter>;

struct Generator {
    std::string label;
    MoebiusMap map;
};

enum class SummandSide { left, right, base, whole };

// Finitely generated group given by generator matrices.  Construction
// provenance (free product / HNN) makes summand membership and coset
// enumeration a syntactic decision on normal forms; raw groups refuse both.
struct GroupSpec {
    enum class Kind { raw, free_product, hnn };

    std::string name;
    std::vector<Generator> generators;
    Kind kind = Kind::raw;
    std::shared_ptr<const GroupSpec> left;   // free_product summands
    std::shared_ptr<const GroupSpec> right;
    std::shared_ptr<const GroupSpec> base;   // hnn base; stable letter is the last generator
    size_t left_count = 0;                   // generators [0, left_count) come from `left`

    static GroupSpec raw(std::string name, std::vector<Generator> gens);

    // combined spec with provenance, no geometric checks (see klein_combine_free
    // for the certified constructor)
    static GroupSpec free_product(std::string name, std::shared_ptr<const GroupSpec> l,
                                  std::shared_ptr<const GroupSpec> r);
    static GroupSpec hnn(std::string name, std::shared_ptr<const GroupSpec> base,
                         std::string stable_label, const MoebiusMap& stable);

    size_t letter_count() const { return generators.size(); }
    bool letter_in_summand(Letter l, SummandSide side) const;
    std::string word_string(const Word& w) const;
};

struct GroupElement {
    Word word;          // freely reduced
    MoebiusMap matrix;  // product of lettered generators
};

class BudgetExceeded : public std::runtime_error {
public:
    explicit BudgetExceeded(size_t n)
        : std::runtime_error("word enumeration budget exceeded at " + std::to_string(n) +
                             " words"),
          count(n) {}
    size_t count;
};

// All freely reduced words of length <= max_len, breadth-first (shortest then
// lexicographic), deduplicated by canonical-matrix distance <= 1e-8.  The kept
// representative of a duplicate is the lexicographically least word.
std::vector<GroupElement> enumerate_elements(const GroupSpec& g, int max_len,
                                             size_t budget = 500000);

// Attracting fixed points of loxodromic elements of length <= max_len plus the
// orbit of a limit basepoint under length == max_len words, deduplicated at
// angular resolution 1e-6.  Rejects elementary groups.
std::vector<SpherePoint> sample_limit_set(const GroupSpec& g, int max_len,
                                          size_t cap = 200000);

// One representative per left coset of the selected summand, detected on the
// normal form: mixed words whose trailing summand run is empty.  Length <=
// max_len; identity never appears.  `whole` returns the empty set.
std::vector<GroupElement> coset_representatives(const GroupSpec& g, SummandSide side,
                                                int max_len, size_t budget = 500000);

}  // namespace viscore
