#pragma once

#include <set>
#include <string>
#include <vector>

#include "ptf/clopen.hpp"
#include "ptf/gen.hpp"

namespace ptf::testing {

// Independent membership oracle, straight from the stem-based definition and
// computed on plain strings: t is a node iff t is a prefix of a stem (when
// short enough) or extends a stem.
inline bool oracle_member(std::uint32_t depth, const std::vector<std::string>& stems,
                          const std::string& t) {
    if (t.size() <= depth) {
        for (const auto& s : stems)
            if (s.compare(0, t.size(), t) == 0) return true;
        return false;
    }
    for (const auto& s : stems)
        if (t.compare(0, depth, s) == 0) return true;
    (void)depth;
    return false;
}

// The level-D slice of a tree as a set of strings, via the oracle path.
inline std::set<std::string> oracle_slice(const ClopenTree& T, std::uint32_t level) {
    std::vector<std::string> stems;
    for (const auto& s : T.stems()) stems.push_back(s.str());
    std::set<std::string> out;
    for (const auto& t : all_strings(level))
        if (oracle_member(T.depth(), stems, t.str())) out.insert(t.str());
    return out;
}

// Branch-set comparison of clopen trees at a level covering both depths.
inline bool oracle_same_branches(const ClopenTree& A, const ClopenTree& B, std::uint32_t level) {
    return oracle_slice(A, level) == oracle_slice(B, level);
}

// All canonical clopen trees of depth up to `depth` (every nonempty stem set,
// canonicalized and deduplicated).
inline std::vector<ClopenTree> all_clopen_trees(std::uint32_t depth) {
    std::set<ClopenTree> out;
    auto strings = all_strings(depth);
    for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << strings.size()); ++mask) {
        std::vector<BitString> stems;
        for (std::size_t i = 0; i < strings.size(); ++i)
            if (mask & (std::uint64_t{1} << i)) stems.push_back(strings[i]);
        out.insert(ClopenTree(depth, stems));
    }
    return {out.begin(), out.end()};
}

}  // namespace ptf::testing
