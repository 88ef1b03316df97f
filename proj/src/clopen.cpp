#include "ptf/clopen.hpp"

#include <algorithm>

#include "ptf/errors.hpp"

namespace ptf {

namespace {

constexpr std::uint32_t kMaxDepth = 24;

std::vector<std::uint64_t> lift(const std::vector<std::uint64_t>& codes, std::uint32_t from,
                                std::uint32_t to) {
    if (from == to) return codes;
    std::uint32_t shift = to - from;
    std::vector<std::uint64_t> out;
    out.reserve(codes.size() << shift);
    for (std::uint64_t c : codes)
        for (std::uint64_t j = 0; j < (std::uint64_t{1} << shift); ++j) out.push_back((c << shift) | j);
    return out;  // stays sorted
}

}  // namespace

ClopenTree::ClopenTree(std::uint32_t depth, std::vector<std::uint64_t> codes, bool canonicalize)
    : depth_(depth), stems_(std::move(codes)) {
    if (canonicalize) reduce();
}

ClopenTree::ClopenTree(std::uint32_t depth, std::vector<BitString> stems) : depth_(depth) {
    if (depth > kMaxDepth) throw Error("clopen tree too deep");
    if (stems.empty()) throw EmptyInput();
    stems_.reserve(stems.size());
    for (const auto& s : stems) {
        if (s.length() != depth) throw Error("stem length differs from depth");
        stems_.push_back(s.code());
    }
    std::sort(stems_.begin(), stems_.end());
    stems_.erase(std::unique(stems_.begin(), stems_.end()), stems_.end());
    reduce();
}

void ClopenTree::reduce() {
    while (depth_ > 0) {
        bool paired = stems_.size() % 2 == 0;
        for (std::size_t i = 0; paired && i < stems_.size(); i += 2)
            paired = (stems_[i] ^ 1u) == stems_[i + 1];
        if (!paired) break;
        std::vector<std::uint64_t> up;
        up.reserve(stems_.size() / 2);
        for (std::size_t i = 0; i < stems_.size(); i += 2) up.push_back(stems_[i] >> 1);
        stems_.swap(up);
        --depth_;
    }
}

ClopenTree ClopenTree::cone(const BitString& s) {
    return ClopenTree(s.length(), std::vector<std::uint64_t>{s.code()}, true);
}

std::vector<BitString> ClopenTree::stems() const {
    std::vector<BitString> out;
    out.reserve(stems_.size());
    for (std::uint64_t c : stems_) out.emplace_back(depth_, c);
    return out;
}

bool ClopenTree::contains(const BitString& t) const {
    if (t.length() <= depth_) {
        std::uint32_t shift = depth_ - t.length();
        for (std::uint64_t c : stems_)
            if ((c >> shift) == t.code()) return true;
        return false;
    }
    std::uint64_t p = t.code() >> (t.length() - depth_);
    return std::binary_search(stems_.begin(), stems_.end(), p);
}

std::vector<std::uint64_t> ClopenTree::codes_at(std::uint32_t level) const {
    if (level >= depth_) return lift(stems_, depth_, level);
    std::uint32_t shift = depth_ - level;
    std::vector<std::uint64_t> out;
    out.reserve(stems_.size());
    for (std::uint64_t c : stems_) out.push_back(c >> shift);
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::vector<BitString> ClopenTree::slice(std::uint32_t level) const {
    if (level > kMaxDepth) throw Error("slice level too deep");
    auto codes = codes_at(level);
    std::vector<BitString> out;
    out.reserve(codes.size());
    for (std::uint64_t c : codes) out.emplace_back(level, c);
    return out;
}

std::size_t ClopenTree::slice_size(std::uint32_t level) const {
    if (level >= depth_) return stems_.size() << (level - depth_);
    return codes_at(level).size();
}

ClopenTree ClopenTree::restrict_to(const BitString& s) const {
    if (!contains(s)) throw StringNotInTree(s.str());
    if (s.length() >= depth_) return cone(s);
    std::uint32_t shift = depth_ - s.length();
    std::vector<std::uint64_t> keep;
    for (std::uint64_t c : stems_)
        if ((c >> shift) == s.code()) keep.push_back(c);
    return ClopenTree(depth_, std::move(keep), true);
}

bool ClopenTree::subset_of(const ClopenTree& other) const {
    std::uint32_t d = std::max(depth_, other.depth_);
    auto a = codes_at(d);
    auto b = other.codes_at(d);
    return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

BitString ClopenTree::least_split_above(const BitString& t) const {
    if (!contains(t)) throw StringNotInTree(t.str());
    if (t.length() >= depth_) return t;  // full cone above the stems
    // Breadth-first over nodes extending t up to the depth.
    std::vector<BitString> frontier{t};
    for (std::uint32_t l = t.length(); l <= depth_; ++l) {
        std::vector<BitString> next;
        for (const auto& node : frontier) {
            bool c0 = contains(node.append(0));
            bool c1 = contains(node.append(1));
            if (c0 && c1) return node;
            if (c0) next.push_back(node.append(0));
            if (c1) next.push_back(node.append(1));
        }
        frontier.swap(next);
    }
    throw Error("no split found (unreachable for canonical trees)");
}

std::optional<ClopenTree> intersect(const ClopenTree& a, const ClopenTree& b) {
    std::uint32_t d = std::max(a.depth_, b.depth_);
    auto x = a.codes_at(d);
    auto y = b.codes_at(d);
    std::vector<std::uint64_t> out;
    std::set_intersection(x.begin(), x.end(), y.begin(), y.end(), std::back_inserter(out));
    if (out.empty()) return std::nullopt;
    return ClopenTree(d, std::move(out), true);
}

std::optional<ClopenTree> difference(const ClopenTree& a, const ClopenTree& b) {
    std::uint32_t d = std::max(a.depth_, b.depth_);
    auto x = a.codes_at(d);
    auto y = b.codes_at(d);
    std::vector<std::uint64_t> out;
    std::set_difference(x.begin(), x.end(), y.begin(), y.end(), std::back_inserter(out));
    if (out.empty()) return std::nullopt;
    return ClopenTree(d, std::move(out), true);
}

ClopenTree union_of(const std::vector<ClopenTree>& trees) {
    if (trees.empty()) throw EmptyInput();
    std::uint32_t d = 0;
    for (const auto& t : trees) d = std::max(d, t.depth_);
    std::vector<std::uint64_t> out;
    for (const auto& t : trees) {
        auto c = t.codes_at(d);
        out.insert(out.end(), c.begin(), c.end());
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return ClopenTree(d, std::move(out), true);
}

bool almost_disjoint(const ClopenTree& a, const ClopenTree& b) {
    std::uint32_t d = std::max(a.depth_, b.depth_);
    auto x = a.codes_at(d);
    auto y = b.codes_at(d);
    std::vector<std::uint64_t> out;
    std::set_intersection(x.begin(), x.end(), y.begin(), y.end(), std::back_inserter(out));
    return out.empty();
}

bool slice_equal(const ClopenTree& a, const ClopenTree& b, std::uint32_t level) {
    std::uint32_t d = std::max(a.depth_, b.depth_);
    if (level >= d) return a.codes_at(d) == b.codes_at(d);
    return a.codes_at(level) == b.codes_at(level);
}

bool lec(std::uint32_t n, const ClopenTree& T, std::uint32_t m, const ClopenTree& S) {
    return m <= n && T.subset_of(S) && slice_equal(T, S, m);
}

ClopenTree splice(const ClopenTree& S, const BitString& u, const ClopenTree& T, std::uint32_t n) {
    if (u.length() != n) throw PreconditionViolated("splice: lh(u) != n");
    if (!S.contains(u)) throw PreconditionViolated("splice: u not in S");
    if (!T.subset_of(S.restrict_to(u))) throw PreconditionViolated("splice: T not below S|u");
    std::vector<ClopenTree> parts{T};
    for (const auto& v : S.slice(n))
        if (v != u) parts.push_back(S.restrict_to(v));
    return union_of(parts);
}

ClopenTree remove_cone(const ClopenTree& T, const BitString& w) {
    auto rest = difference(T, ClopenTree::cone(w));
    if (!rest) throw PreconditionViolated("remove_cone would empty the tree");
    return *rest;
}

namespace {

// One step of the pairwise-disjointing argument: shrink comparable pieces to
// almost disjoint nonempty subtrees.
std::pair<ClopenTree, ClopenTree> disjoint_pieces(const ClopenTree& A, const ClopenTree& B) {
    if (A == B) {
        auto sl = A.slice(A.depth() + 1);  // at least two strings
        return {A.restrict_to(sl[0]), B.restrict_to(sl[1])};
    }
    std::uint32_t d = std::max(A.depth(), B.depth());
    for (const auto& a : A.slice(d))
        if (!B.contains(a)) return {A.restrict_to(a), B};
    for (const auto& b : B.slice(d))
        if (!A.contains(b)) return {A, B.restrict_to(b)};
    throw Error("disjoint_pieces: equal branch sets escaped canonical equality");
}

}  // namespace

std::pair<ClopenTree, ClopenTree> shrink_disjoint(std::uint32_t n, const ClopenTree& T,
                                                  const ClopenTree& T2) {
    ClopenTree S = T, S2 = T2;
    for (const auto& u : T.slice(n)) {
        for (const auto& v : T2.slice(n)) {
            ClopenTree A = S.restrict_to(u);
            ClopenTree B = S2.restrict_to(v);
            if (almost_disjoint(A, B)) continue;
            auto [A2, B2] = disjoint_pieces(A, B);
            S = splice(S, u, A2, n);
            S2 = splice(S2, v, B2, n);
        }
    }
    return {S, S2};
}

}  // namespace ptf
