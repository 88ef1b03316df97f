#include "ptf/tree.hpp"

#include <algorithm>

#include "ptf/errors.hpp"

namespace ptf {

bool chain_valid(const std::vector<std::pair<std::uint32_t, ClopenTree>>& chain) {
    if (chain.empty()) return false;
    for (std::size_t j = 0; j + 1 < chain.size(); ++j) {
        if (chain[j + 1].first <= chain[j].first) return false;
        if (!lec(chain[j + 1].first, chain[j + 1].second, chain[j].first, chain[j].second))
            return false;
    }
    return true;
}

FusionTree fuse(std::vector<std::pair<std::uint32_t, ClopenTree>> chain,
                const std::vector<BitString>& required_tasks) {
    if (chain.empty()) throw EmptyInput();
    if (!chain_valid(chain)) throw ChainNotDecreasing("fuse");
    FusionTree out;
    out.chain = std::move(chain);
    const ClopenTree& last = out.last();
    std::uint32_t exact = out.exactness();
    for (const auto& t : required_tasks) {
        FusionTree::LogEntry e;
        e.task = t;
        if (!last.contains(t)) {
            e.absent = true;
            e.witness = t;
            e.step = static_cast<std::uint32_t>(out.chain.size() - 1);
        } else {
            BitString s = last.least_split_above(t);
            if (s.length() + 1 > exact) throw TaskUnmet(t.str());
            e.witness = s;
            std::uint32_t step = 0;
            while (out.chain[step].first < s.length() + 1) ++step;
            e.step = step;
        }
        out.log.push_back(e);
    }
    std::sort(out.log.begin(), out.log.end());
    return out;
}

void Tree::require_exact(std::uint32_t level, const char* ctx) const {
    auto e = exactness();
    if (e && level > *e) throw DepthExceeded(ctx);
}

bool Tree::contains(const BitString& t) const {
    require_exact(t.length(), "contains");
    return projection().contains(t);
}

std::vector<BitString> Tree::slice(std::uint32_t level) const {
    require_exact(level, "slice");
    return projection().slice(level);
}

Tree Tree::restrict_to(const BitString& s) const {
    if (is_clopen()) return Tree(projection().restrict_to(s));
    require_exact(s.length(), "restrict");
    if (!projection().contains(s)) throw StringNotInTree(s.str());
    const FusionTree& f = fusion();
    FusionTree out;
    out.chain.reserve(f.chain.size());
    for (const auto& [n, T] : f.chain) out.chain.emplace_back(n, T.restrict_to(s));
    const ClopenTree& last = out.last();
    for (const auto& e : f.log) {
        if (e.absent || (last.contains(e.witness.append(0)) && last.contains(e.witness.append(1)))) {
            out.log.push_back(e);
        } else if (!last.contains(e.task)) {
            FusionTree::LogEntry absent = e;
            absent.absent = true;
            absent.witness = e.task;
            out.log.push_back(absent);
        }
        // otherwise the certificate did not survive the restriction; dropped
    }
    return Tree(out);
}

// Each tree must be exact across its own stored structure; beyond that the
// clopen projection determines every deeper level.
bool tree_subset(const Tree& a, const Tree& b) {
    a.require_exact(a.projection().depth(), "tree_subset");
    b.require_exact(b.projection().depth(), "tree_subset");
    return a.projection().subset_of(b.projection());
}

bool almost_disjoint(const Tree& a, const Tree& b) {
    a.require_exact(a.projection().depth(), "almost_disjoint");
    b.require_exact(b.projection().depth(), "almost_disjoint");
    return almost_disjoint(a.projection(), b.projection());
}

bool lec(std::uint32_t n, const Tree& T, std::uint32_t m, const Tree& S) {
    T.require_exact(std::max(n, T.projection().depth()), "lec");
    S.require_exact(std::max(m, S.projection().depth()), "lec");
    return lec(n, T.projection(), m, S.projection());
}

}  // namespace ptf
