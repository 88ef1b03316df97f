#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "ptf/multi.hpp"

namespace ptf {

// Seeded instance generators shared by the test suites and the acceptance
// runner.
using Rng = std::mt19937_64;

inline std::uint64_t pick(Rng& rng, std::uint64_t bound) {  // uniform in [0, bound)
    return std::uniform_int_distribution<std::uint64_t>(0, bound - 1)(rng);
}

BitString random_bitstring(Rng& rng, std::uint32_t len);

// A random canonical clopen tree of depth at most max_depth.
ClopenTree random_clopen(Rng& rng, std::uint32_t max_depth);

// A random proper-or-equal clopen subtree keeping the level-freeze slices of
// the argument above `freeze`.
ClopenTree random_subtree_below(Rng& rng, const ClopenTree& T, std::uint32_t freeze,
                                std::uint32_t extra_depth);

// A forcing generated by a random antichain: partition classes of a random
// stem set at a common depth.
ArborealForcing random_special_forcing(Rng& rng, std::uint32_t depth, std::uint32_t parts);

// A forcing with arbitrary random clopen generators (regular since all
// branch sets are clopen).
ArborealForcing random_clopen_forcing(Rng& rng, std::uint32_t max_gens, std::uint32_t max_depth);

Multiforcing random_multiforcing(Rng& rng, const std::vector<Index>& indices,
                                 std::uint32_t max_gens, std::uint32_t max_depth,
                                 bool special_only);

Multitree random_family_member(Rng& rng, const Multiforcing& pi);

// A random <=c-decreasing chain with strictly increasing freeze levels whose
// final element freezes every split needed by the splitting tasks up to
// split_budget.
std::vector<std::pair<std::uint32_t, ClopenTree>> random_lec_chain(Rng& rng, std::uint32_t steps,
                                                                   std::uint32_t split_budget);

// A random open dense set over MT(pi): either everything below-or-apart from
// a random pivot, or the downclosure of the full-support generator grid.
MultitreeSetPtr random_open_dense(Rng& rng, const Multiforcing& pi, std::uint32_t depth);

}  // namespace ptf
