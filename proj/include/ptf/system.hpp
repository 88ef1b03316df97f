#pragma once

#include <cstdint>
#include <map>
#include <utility>

#include "ptf/multi.hpp"

namespace ptf {

using SysKey = std::pair<Index, std::uint32_t>;  // (xi, k)

// A finite assignment of clg-members to (xi, k) pairs; the engine's working
// object.
struct System {
    std::map<SysKey, ClopenTree> comp;

    bool has(SysKey key) const { return comp.count(key) != 0; }
    const ClopenTree& at(SysKey key) const { return comp.at(key); }

    friend bool operator==(const System&, const System&) = default;
};

// Values lie in clg(pi(xi)) and keys inside |pi| x omega.
bool sys_valid(const Multiforcing& pi, const System& phi);

// <n,phi> <=c <m,psi>: support grows, every old entry extends in the pair
// order with the level-m slice frozen.
bool sys_lec(std::uint32_t n, const System& phi, std::uint32_t m, const System& psi);

// Lemma-syn normalization at level n: every level-n piece of every entry is
// shrunk to a proper member of the component forcing; same n.
System syn_normalize(const Multiforcing& pi, std::uint32_t n, System phi);

}  // namespace ptf
