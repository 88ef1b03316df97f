#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "ptf/bitstring.hpp"

namespace ptf {

// Exact representation of a perfect tree with clopen branch set: a depth d
// and a nonempty set of stems of length d; the tree holds every prefix of a
// stem and every extension of a stem. Always kept canonical: whenever every
// stem's sibling is also a stem, the depth is reduced, so equal branch sets
// have equal representations.
class ClopenTree {
public:
    ClopenTree() : depth_(0), stems_{0} {}  // the full tree 2^<omega

    ClopenTree(std::uint32_t depth, std::vector<BitString> stems);

    static ClopenTree full() { return ClopenTree(); }
    static ClopenTree cone(const BitString& s);

    std::uint32_t depth() const { return depth_; }
    std::size_t stem_count() const { return stems_.size(); }
    std::vector<BitString> stems() const;

    bool contains(const BitString& t) const;

    // T cap 2^level, in lexicographic order.
    std::vector<BitString> slice(std::uint32_t level) const;
    std::size_t slice_size(std::uint32_t level) const;

    // T restricted to s; throws StringNotInTree when s is not a node.
    ClopenTree restrict_to(const BitString& s) const;

    // [this] subset of [other].
    bool subset_of(const ClopenTree& other) const;

    // Shortest s extending t with both children in the tree.
    BitString least_split_above(const BitString& t) const;

    friend std::strong_ordering operator<=>(const ClopenTree& a, const ClopenTree& b) {
        if (auto c = a.depth_ <=> b.depth_; c != 0) return c;
        return a.stems_ <=> b.stems_;
    }
    friend bool operator==(const ClopenTree& a, const ClopenTree& b) = default;

    friend std::optional<ClopenTree> intersect(const ClopenTree& a, const ClopenTree& b);
    friend std::optional<ClopenTree> difference(const ClopenTree& a, const ClopenTree& b);
    friend ClopenTree union_of(const std::vector<ClopenTree>& trees);
    friend bool almost_disjoint(const ClopenTree& a, const ClopenTree& b);
    friend bool slice_equal(const ClopenTree& a, const ClopenTree& b, std::uint32_t level);

private:
    ClopenTree(std::uint32_t depth, std::vector<std::uint64_t> codes, bool canonicalize);
    std::vector<std::uint64_t> codes_at(std::uint32_t level) const;
    void reduce();

    std::uint32_t depth_;
    std::vector<std::uint64_t> stems_;  // sorted, unique stem codes of length depth_
};

std::optional<ClopenTree> intersect(const ClopenTree& a, const ClopenTree& b);
std::optional<ClopenTree> difference(const ClopenTree& a, const ClopenTree& b);
ClopenTree union_of(const std::vector<ClopenTree>& trees);  // throws EmptyInput
bool almost_disjoint(const ClopenTree& a, const ClopenTree& b);
bool slice_equal(const ClopenTree& a, const ClopenTree& b, std::uint32_t level);

// The extension order on pairs: <n,T> <=c <m,S> iff m <= n, T subset S and
// T cap 2^m = S cap 2^m.
bool lec(std::uint32_t n, const ClopenTree& T, std::uint32_t m, const ClopenTree& S);

// Replace the part of S above u (a level-n node) by T, keeping every other
// level-n part; the result extends <n,S> in <=c.
ClopenTree splice(const ClopenTree& S, const BitString& u, const ClopenTree& T, std::uint32_t n);

// Remove the cone above w; throws PreconditionViolated when that would empty
// the tree.
ClopenTree remove_cone(const ClopenTree& T, const BitString& w);

// Shrink both trees below their frozen level-n slices until the branch sets
// are disjoint. Ties are broken by the least witness strings.
std::pair<ClopenTree, ClopenTree> shrink_disjoint(std::uint32_t n, const ClopenTree& T,
                                                  const ClopenTree& T2);

}  // namespace ptf
