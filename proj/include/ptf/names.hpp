#pragma once

#include <cstdint>
#include <optional>
#include <tuple>
#include <utility>
#include <vector>

#include "ptf/dense.hpp"
#include "ptf/multi.hpp"

namespace ptf {

// A real name: finitely many (multitree, n, i) triples with the cross-bit
// somewhere-almost-disjointness requirement, truncated at a horizon.
struct RealName {
    std::uint32_t horizon = 0;
    std::vector<std::tuple<Multitree, std::uint32_t, int>> triples;

    void canonicalize();
    std::vector<Multitree> K(std::uint32_t n, int i) const;
    std::vector<Multitree> Kn(std::uint32_t n) const;

    friend bool operator==(const RealName&, const RealName&) = default;
};

// The cross-sad invariant of a real name.
bool is_real_name(const RealName& c);

// The canonical name of the principal generic real at xi: K[n][i] holds the
// one multitree fixing bit n of the xi-component to i.
RealName principal_name(Index xi, std::uint32_t horizon);

// Names the bitwise complement of the principal real; non-principal at xi.
RealName flipped_principal_name(Index xi, std::uint32_t horizon);

// The clopen tree {t : lh(t) <= n or t(n) = i}.
ClopenTree bit_fixing_tree(std::uint32_t n, int i);

// Whether every K_n lies inside MT(pi); recorded per name, both cases are
// accepted everywhere.
bool name_within(const RealName& c, const Multiforcing& pi, std::uint32_t depth);

// The pi-cone of K_n inside the generating family.
std::vector<Multitree> cone_set(const RealName& c, const Multiforcing& pi, std::uint32_t n,
                                std::uint32_t depth);

// pi-completeness: every cone K_n^pi pre-dense, checked over the family.
bool is_complete(const RealName& c, const Multiforcing& pi, std::uint32_t depth);

bool directly_forces_value(const Multitree& p, const RealName& c, std::uint32_t n, int i);
bool directly_forces_prefix(const Multitree& p, const RealName& c, const BitString& s);
bool directly_forces_avoid(const Multitree& p, const RealName& c, const Tree& T);

// The longest s with all bits below lh(s) directly forced by p.
BitString max_forced_prefix(const Multitree& p, const RealName& c);

// A value decision below p; least witness. Throws SearchBudgetExceeded when
// no deciding extension is found (incompleteness of c or budget too small).
std::pair<int, Multitree> decide_value(const Multiforcing& pi, const RealName& c,
                                       const Multitree& p, std::uint32_t n);

// s in T and q <= p directly forcing c not in [T|s].
std::pair<BitString, Multitree> force_avoid(const Multiforcing& pi, const RealName& c,
                                            const Multitree& p, const Tree& T);

bool is_nonprincipal(const RealName& c, const Multiforcing& pi, Index xi, std::uint32_t depth,
                     std::uint64_t budget = 1u << 16);

// {p : p directly forces c(n)=0 or c(n)=1}; dense for complete names.
MultitreeSetPtr decides_set(const RealName& c, const Multiforcing& pi, std::uint32_t n,
                            std::uint32_t depth);

// The pi-cone K_n^pi as a dense set object.
MultitreeSetPtr cone_dense_set(const RealName& c, const Multiforcing& pi, std::uint32_t n,
                               std::uint32_t depth);

// D(c,Q;pi) of the avoidance definition: conditions with xi in the support
// directly forcing c out of [Q].
MultitreeSetPtr avoid_dense_set(const RealName& c, const Multiforcing& pi, Index xi, Tree Q,
                                const std::string& id = "", std::uint64_t budget = 1u << 14);

// D_xi(c;pi) of the non-principality definition.
MultitreeSetPtr nonprincipal_dense_set(const RealName& c, const Multiforcing& pi, Index xi,
                                       std::uint64_t budget = 1u << 14);

// rho seals c over pi: every cone K_n^pi is sealed, n below the horizon.
RefinementVerdict name_sealed(const Multiforcing& pi, const RealName& c, const Multiforcing& rho,
                              std::uint32_t depth, const std::vector<SealWitness>& witnesses = {});

}  // namespace ptf
