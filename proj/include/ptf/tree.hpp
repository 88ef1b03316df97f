#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <variant>
#include <vector>

#include "ptf/clopen.hpp"

namespace ptf {

// A finite <=c-decreasing chain of clopen trees with strictly increasing
// freeze levels. Membership answers are exact up to the last freeze level;
// the genericity log certifies, per recorded string t, a frozen split above
// t (or t's absence), so that any <=c-continuation of the chain keeps it.
struct FusionTree {
    struct LogEntry {
        BitString task;     // the string t of the splitting set D_t
        BitString witness;  // s with t prefix_of s and both children frozen; t itself when t is absent
        std::uint32_t step;
        bool absent = false;  // true when t was not in the tree at all

        friend std::strong_ordering operator<=>(const LogEntry&, const LogEntry&) = default;
        friend bool operator==(const LogEntry&, const LogEntry&) = default;
    };

    std::vector<std::pair<std::uint32_t, ClopenTree>> chain;
    std::vector<LogEntry> log;

    const ClopenTree& last() const { return chain.back().second; }
    std::uint32_t exactness() const { return chain.back().first; }

    friend std::strong_ordering operator<=>(const FusionTree&, const FusionTree&) = default;
    friend bool operator==(const FusionTree&, const FusionTree&) = default;
};

// Validates the chain and derives the genericity log for the required
// splitting tasks. Errors: ChainNotDecreasing, TaskUnmet(t).
FusionTree fuse(std::vector<std::pair<std::uint32_t, ClopenTree>> chain,
                const std::vector<BitString>& required_tasks);

bool chain_valid(const std::vector<std::pair<std::uint32_t, ClopenTree>>& chain);

// Either representation, with the exactness-depth contract: nullopt means
// exact at every depth (clopen), a value bounds the levels that may be
// consulted.
class Tree {
public:
    Tree() : v_(ClopenTree::full()) {}
    Tree(ClopenTree t) : v_(std::move(t)) {}
    Tree(FusionTree t) : v_(std::move(t)) {}

    bool is_clopen() const { return std::holds_alternative<ClopenTree>(v_); }
    bool is_fusion() const { return std::holds_alternative<FusionTree>(v_); }

    const FusionTree& fusion() const { return std::get<FusionTree>(v_); }

    // The exact clopen view: the tree itself, or the last chain element.
    const ClopenTree& projection() const {
        if (is_clopen()) return std::get<ClopenTree>(v_);
        return std::get<FusionTree>(v_).last();
    }

    std::optional<std::uint32_t> exactness() const {
        if (is_clopen()) return std::nullopt;
        return std::get<FusionTree>(v_).exactness();
    }

    // Throws DepthExceeded when a level beyond the exactness bound would be
    // consulted.
    void require_exact(std::uint32_t level, const char* ctx) const;

    bool contains(const BitString& t) const;
    std::vector<BitString> slice(std::uint32_t level) const;
    Tree restrict_to(const BitString& s) const;

    friend std::strong_ordering operator<=>(const Tree& a, const Tree& b) {
        if (auto c = a.v_.index() <=> b.v_.index(); c != 0) return c;
        if (a.is_clopen()) return std::get<ClopenTree>(a.v_) <=> std::get<ClopenTree>(b.v_);
        return std::get<FusionTree>(a.v_) <=> std::get<FusionTree>(b.v_);
    }
    friend bool operator==(const Tree& a, const Tree& b) = default;

private:
    std::variant<ClopenTree, FusionTree> v_;
};

// [a] subset of [b] decided on projections; exact up to the arguments'
// exactness bounds, which must reach the projections' structure.
bool tree_subset(const Tree& a, const Tree& b);

// [a] cap [b] empty, decided on the clopen projections.
bool almost_disjoint(const Tree& a, const Tree& b);

bool lec(std::uint32_t n, const Tree& T, std::uint32_t m, const Tree& S);

}  // namespace ptf
