#include "ptf/system.hpp"

#include "ptf/errors.hpp"

namespace ptf {

bool sys_valid(const Multiforcing& pi, const System& phi) {
    for (const auto& [key, tree] : phi.comp) {
        if (!pi.has(key.first)) return false;
        if (!clg_member(pi.at(key.first), tree)) return false;
    }
    return true;
}

bool sys_lec(std::uint32_t n, const System& phi, std::uint32_t m, const System& psi) {
    if (m > n) return false;
    for (const auto& [key, tree] : psi.comp) {
        if (!phi.has(key)) return false;
        if (!lec(n, phi.at(key), m, tree)) return false;
    }
    return true;
}

System syn_normalize(const Multiforcing& pi, std::uint32_t n, System phi) {
    for (auto& [key, tree] : phi.comp) {
        const ArborealForcing& P = pi.at(key.first);
        for (const auto& s : tree.slice(n)) {
            ClopenTree piece = tree.restrict_to(s);
            if (forcing_member(P, Tree(piece), piece.depth() + P.max_proj_depth())) continue;
            auto m = member_within(P, piece);
            if (!m) throw RegularityViolated("syn_normalize: piece outside clg");
            tree = splice(tree, s, *m, n);
        }
    }
    return phi;
}

}  // namespace ptf
