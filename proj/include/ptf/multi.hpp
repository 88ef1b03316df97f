#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ptf/arboreal.hpp"

namespace ptf {

using Index = std::uint32_t;

// Finite-support assignment of trees to indices; a forcing condition.
struct Multitree {
    std::map<Index, Tree> comp;

    bool empty() const { return comp.empty(); }
    bool has(Index xi) const { return comp.count(xi) != 0; }
    const Tree& at(Index xi) const { return comp.at(xi); }
    std::vector<Index> support() const;

    friend std::strong_ordering operator<=>(const Multitree&, const Multitree&) = default;
    friend bool operator==(const Multitree&, const Multitree&) = default;
};

// Finite assignment of arboreal forcings to indices; a factor catalog.
struct Multiforcing {
    std::map<Index, ArborealForcing> comp;

    bool empty() const { return comp.empty(); }
    bool has(Index xi) const { return comp.count(xi) != 0; }
    const ArborealForcing& at(Index xi) const { return comp.at(xi); }
    std::vector<Index> support() const;
    bool clopen_generated() const;

    friend bool operator==(const Multiforcing&, const Multiforcing&) = default;
};

bool mt_member(const Multiforcing& pi, const Multitree& p, std::uint32_t depth);

// q <= p: support grows, components shrink.
bool mleq(const Multitree& q, const Multitree& p);

// Somewhere almost disjoint; over regular multiforcings this is
// incompatibility.
bool sad(const Multitree& p, const Multitree& q);

// Union of compatible assignments; overlapping indices must carry equal
// trees.
Multitree mt_union(const Multitree& a, const Multitree& b);

// Restriction of the assignment to the given index set.
Multitree mt_restrict(const Multitree& p, const std::vector<Index>& keep);

// A common extension with member components, or nullopt; components of the
// result are members of the ambient multiforcing below both arguments.
std::optional<Multitree> meet_member(const Multiforcing& pi, const Multitree& a,
                                     const Multitree& b);

// Finite R within MT(pi) whose cubes partition [p] cap [q].
std::optional<std::vector<Multitree>> meet_cover(const Multiforcing& pi, const Multitree& p,
                                                 const Multitree& q, std::uint32_t depth);

Multiforcing cw_union(const Multiforcing& a, const Multiforcing& b);
Multiforcing cw_union_seq(const std::vector<Multiforcing>& seq);

RefinementVerdict mrefines(const Multiforcing& pi, const Multiforcing& rho, std::uint32_t depth);

// All multitrees assembled from component generators, every support subset;
// the canonical finite quantification domain for MT(pi).
std::vector<Multitree> generating_family(const Multiforcing& pi, std::size_t cap = 200000);

// ---- cube algebra over equal supports -------------------------------------

// [c] \ [v] as a finite list of cubes (supports all equal to c's).
std::vector<Multitree> cube_subtract(const Multitree& c, const Multitree& v);

// Greedy equal-support finite subcover of [u] from D, or nullopt.
std::optional<std::vector<Multitree>> sqfv(const Multitree& u, const std::vector<Multitree>& D,
                                           std::uint64_t budget = 1u << 20);

// ---- dense sets of multitrees ---------------------------------------------

// A set of multitrees given by a decidable membership predicate plus a
// constructive density witness search. Open (downward closed) by contract.
class MultitreeSet {
public:
    virtual ~MultitreeSet() = default;
    virtual const std::string& id() const = 0;
    virtual bool member(const Multitree& x) const = 0;
    // w <= x with w in the set and member components; nullopt when the
    // bounded search fails.
    virtual std::optional<Multitree> refine_into(const Multitree& x) const = 0;
};

using MultitreeSetPtr = std::shared_ptr<const MultitreeSet>;

// Density of D over the generating family: refine_into succeeds on every
// family element.
bool dense_over_family(const MultitreeSet& D, const Multiforcing& pi);

// Pre-density of an explicit list over the family of pi (every family element
// is compatible with a list element).
bool predense_over_family(const std::vector<Multitree>& list, const Multiforcing& pi,
                          std::uint32_t depth);

// ---- sealing --------------------------------------------------------------

// The support shape of the u-part in the sealing clause: which fusion
// generator index k serves each index xi.
struct UShape {
    std::map<Index, std::uint32_t> k_of;
    friend std::strong_ordering operator<=>(const UShape&, const UShape&) = default;
    friend bool operator==(const UShape&, const UShape&) = default;
};

// Witness recorded by a sealing/avoidance task: at freeze level `level` the
// multitree q answers the clause for (p, shape).
struct SealWitness {
    std::string set_id;
    Multitree p;
    UShape shape;
    std::uint32_t level = 0;
    Multitree q;
};

// Definition-ssl clause (*) verdict on rho sealing D over pi: for every
// family p and every generator-assembled u in MT(rho) with disjoint support
// there must be q <= p, support disjoint from u, such that the level slices
// of the chain trees give an equal-support D-subcover of [u]. Witnesses are
// consulted when present and re-verified; without a usable witness a bounded
// fallback search runs.
RefinementVerdict mseals(const Multiforcing& pi, const MultitreeSet& D, const Multiforcing& rho,
                         std::uint32_t depth, const std::vector<SealWitness>& witnesses = {},
                         std::uint64_t budget = 1u << 22);

}  // namespace ptf
