#include "ptf/gen.hpp"

#include <algorithm>

#include "ptf/dense.hpp"
#include "ptf/errors.hpp"

namespace ptf {

BitString random_bitstring(Rng& rng, std::uint32_t len) {
    BitString s;
    for (std::uint32_t i = 0; i < len; ++i) s = s.append(static_cast<int>(pick(rng, 2)));
    return s;
}

ClopenTree random_clopen(Rng& rng, std::uint32_t max_depth) {
    std::uint32_t depth = static_cast<std::uint32_t>(pick(rng, max_depth + 1));
    std::vector<BitString> stems;
    for (const auto& s : all_strings(depth))
        if (pick(rng, 2)) stems.push_back(s);
    if (stems.empty()) stems.push_back(random_bitstring(rng, depth));
    return ClopenTree(depth, std::move(stems));
}

ClopenTree random_subtree_below(Rng& rng, const ClopenTree& T, std::uint32_t freeze,
                                std::uint32_t extra_depth) {
    std::uint32_t depth = std::max(T.depth(), freeze) + extra_depth;
    auto frozen = T.slice(freeze);
    std::vector<BitString> keep;
    for (const auto& u : frozen) {
        // keep at least one stem under every frozen node
        auto under = T.restrict_to(u).slice(depth);
        std::size_t forced = pick(rng, under.size());
        for (std::size_t i = 0; i < under.size(); ++i)
            if (i == forced || pick(rng, 2)) keep.push_back(under[i]);
    }
    return ClopenTree(depth, std::move(keep));
}

ArborealForcing random_special_forcing(Rng& rng, std::uint32_t depth, std::uint32_t parts) {
    std::vector<BitString> pool = all_strings(depth);
    std::shuffle(pool.begin(), pool.end(), rng);
    std::size_t take = 1 + pick(rng, pool.size());
    std::uint32_t groups = 1 + static_cast<std::uint32_t>(pick(rng, parts));
    std::vector<std::vector<BitString>> buckets(groups);
    for (std::size_t i = 0; i < take; ++i) buckets[i % groups].push_back(pool[i]);
    ArborealForcing out;
    for (const auto& b : buckets)
        if (!b.empty()) out.generators.emplace_back(ClopenTree(depth, b));
    out.canonicalize();
    return out;
}

ArborealForcing random_clopen_forcing(Rng& rng, std::uint32_t max_gens, std::uint32_t max_depth) {
    ArborealForcing out;
    std::uint32_t count = 1 + static_cast<std::uint32_t>(pick(rng, max_gens));
    for (std::uint32_t i = 0; i < count; ++i)
        out.generators.emplace_back(random_clopen(rng, max_depth));
    out.canonicalize();
    return out;
}

Multiforcing random_multiforcing(Rng& rng, const std::vector<Index>& indices,
                                 std::uint32_t max_gens, std::uint32_t max_depth,
                                 bool special_only) {
    Multiforcing out;
    for (Index xi : indices) {
        if (special_only || pick(rng, 2))
            out.comp.emplace(xi, random_special_forcing(rng, std::max(1u, max_depth),
                                                        std::max(1u, max_gens)));
        else
            out.comp.emplace(xi, random_clopen_forcing(rng, max_gens, max_depth));
    }
    return out;
}

Multitree random_family_member(Rng& rng, const Multiforcing& pi) {
    Multitree out;
    for (const auto& [xi, P] : pi.comp) {
        if (pick(rng, 2)) continue;
        out.comp.emplace(xi, P.generators[pick(rng, P.generators.size())]);
    }
    return out;
}

std::vector<std::pair<std::uint32_t, ClopenTree>> random_lec_chain(Rng& rng, std::uint32_t steps,
                                                                   std::uint32_t split_budget) {
    std::vector<std::pair<std::uint32_t, ClopenTree>> chain;
    ClopenTree cur = random_clopen(rng, 2);
    std::uint32_t n = 1 + static_cast<std::uint32_t>(pick(rng, 2));
    chain.emplace_back(n, cur);
    for (std::uint32_t j = 1; j < steps; ++j) {
        std::uint32_t extra = 1 + static_cast<std::uint32_t>(pick(rng, 2));
        ClopenTree next = random_subtree_below(rng, cur, n, extra);
        n += extra;
        chain.emplace_back(n, next);
        cur = next;
    }
    // final element: freeze every split the splitting tasks may ask about
    std::uint32_t top = std::max(n + 1, std::max(cur.depth(), split_budget) + 2);
    chain.emplace_back(top, cur);
    return chain;
}

MultitreeSetPtr random_open_dense(Rng& rng, const Multiforcing& pi, std::uint32_t depth) {
    if (pick(rng, 2)) {
        Multitree pivot = random_family_member(rng, pi);
        return std::make_shared<BelowOrSadSet>("dense:pivot", pi, pivot);
    }
    // the downclosure of the full-support generator grid
    std::vector<Multitree> base{Multitree{}};
    for (const auto& [xi, P] : pi.comp) {
        std::vector<Multitree> next;
        for (const auto& b : base)
            for (const auto& g : P.generators) {
                Multitree r = b;
                r.comp.emplace(xi, g);
                next.push_back(std::move(r));
            }
        base.swap(next);
    }
    return std::make_shared<DownclosureSet>("dense:grid", pi, std::move(base),
                                            /*require_mt=*/false, depth);
}

}  // namespace ptf
