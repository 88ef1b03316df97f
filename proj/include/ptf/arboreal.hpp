#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ptf/tree.hpp"

namespace ptf {

// An arboreal forcing, stored by its generator list; the restriction closure
// is virtual (a member is any restriction of a generator). Density-style
// checks quantify over the stored generators, which is the forcing's meaning
// at this scale.
struct ArborealForcing {
    std::vector<Tree> generators;  // canonical order, deduplicated

    void canonicalize();
    bool clopen_generated() const;
    std::uint32_t max_proj_depth() const;

    friend bool operator==(const ArborealForcing&, const ArborealForcing&) = default;
};

// The Cohen forcing truncated to cone generators T[s], lh(s) <= stem_bound.
ArborealForcing cohen(std::uint32_t stem_bound = 2);

// Deduplicated clopen members (restrictions of generators) with restriction
// strings of length <= max_lh. Requires clopen generators.
std::vector<ClopenTree> clopen_members(const ArborealForcing& P, std::uint32_t max_lh);

// Membership of t in the virtual closure: t equals some generator restricted
// to a string of length <= depth.
bool forcing_member(const ArborealForcing& P, const Tree& t, std::uint32_t depth);

// A member of Q below T (generator or a generator restricted at `depth`),
// or nullopt.
std::optional<Tree> member_below(const ArborealForcing& Q, const Tree& T, std::uint32_t depth);

// Finite decomposition of [C] into members of P contained in C, or nullopt
// when C is not a finite union of members.
std::optional<std::vector<ClopenTree>> clg_decompose(const ArborealForcing& P, const ClopenTree& C);

bool clg_member(const ArborealForcing& P, const ClopenTree& C);

// The least member of P below C (first element of the decomposition).
std::optional<ClopenTree> member_within(const ArborealForcing& P, const ClopenTree& C);

bool is_regular(const ArborealForcing& P, std::uint32_t depth);

// The unique generating antichain when it exists.
std::optional<std::vector<Tree>> is_special(const ArborealForcing& P, std::uint32_t depth);

struct RefinementVerdict {
    bool holds = true;
    std::uint32_t depth = 0;
    struct Failure {
        std::string clause;  // fm1 | fm3 | fm4 | dom | seal
        std::string witness;
    };
    std::vector<Failure> failures;

    void fail(std::string clause, std::string witness) {
        holds = false;
        failures.push_back({std::move(clause), std::move(witness)});
    }
};

// Definition-fm verdict on P refined by Q, decided at `depth`.
RefinementVerdict refines(const ArborealForcing& P, const ArborealForcing& Q, std::uint32_t depth);

// P sealed by Q over the set D of trees: refines plus a finite D-subcover of
// every generator of Q.
RefinementVerdict seals(const ArborealForcing& P, const std::vector<Tree>& D,
                        const ArborealForcing& Q, std::uint32_t depth);

// For non-almost-disjoint members of a regular forcing, the intersection is
// a member of clg(P) and hence a compatibility witness.
std::optional<ClopenTree> compat_witness(const ArborealForcing& P, const Tree& S, const Tree& T);

// Finite D' within D with [T] covered, greedy in canonical order.
std::optional<std::vector<Tree>> sqf_cover(const Tree& T, const std::vector<Tree>& D,
                                           std::uint32_t depth);

// Decided-at-depth test that [S] cap [T] is clopen in [S]: every level-depth
// piece of S is inside T or almost disjoint from T.
bool clopen_in(const Tree& S, const Tree& T, std::uint32_t depth);

// A full cone hanging at some level-`level` node. Its absence certifies that
// no member of a shallow forcing (structural depth <= level) is contained in
// the tree: the member-level half of the non-absorption clause.
bool has_full_cone_at(const ClopenTree& T, std::uint32_t level);

}  // namespace ptf
