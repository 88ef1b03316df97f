#pragma once

#include <memory>
#include <string>
#include <vector>

#include "ptf/multi.hpp"

namespace ptf {

// Downward closure of an explicit base list, optionally intersected with
// MT(pi); the cone sets K_n^pi are this with base K_n.
class DownclosureSet final : public MultitreeSet {
public:
    DownclosureSet(std::string id, Multiforcing pi, std::vector<Multitree> base,
                   bool require_mt, std::uint32_t depth)
        : id_(std::move(id)), pi_(std::move(pi)), base_(std::move(base)),
          require_mt_(require_mt), depth_(depth) {}

    const std::string& id() const override { return id_; }

    bool member(const Multitree& x) const override {
        if (require_mt_ && !mt_member(pi_, x, depth_)) return false;
        for (const auto& b : base_)
            if (mleq(x, b)) return true;
        return false;
    }

    std::optional<Multitree> refine_into(const Multitree& x) const override {
        if (member(x)) return x;
        for (const auto& b : base_)
            if (auto w = meet_member(pi_, x, b)) return w;
        return std::nullopt;
    }

    const std::vector<Multitree>& base() const { return base_; }
    bool require_mt() const { return require_mt_; }
    std::uint32_t depth() const { return depth_; }

private:
    std::string id_;
    Multiforcing pi_;
    std::vector<Multitree> base_;
    bool require_mt_;
    std::uint32_t depth_;
};

// Everything below the pivot together with everything incompatible with it;
// open dense in MT(pi) for any pivot.
class BelowOrSadSet final : public MultitreeSet {
public:
    BelowOrSadSet(std::string id, Multiforcing pi, Multitree pivot)
        : id_(std::move(id)), pi_(std::move(pi)), pivot_(std::move(pivot)) {}

    const std::string& id() const override { return id_; }

    bool member(const Multitree& x) const override { return mleq(x, pivot_) || sad(x, pivot_); }

    std::optional<Multitree> refine_into(const Multitree& x) const override {
        if (member(x)) return x;
        if (auto w = meet_member(pi_, x, pivot_)) return w;
        return std::nullopt;
    }

    const Multitree& pivot() const { return pivot_; }

private:
    std::string id_;
    Multiforcing pi_;
    Multitree pivot_;
};

// The whole forcing MT(pi); seals trivially.
class MtAllSet final : public MultitreeSet {
public:
    MtAllSet(std::string id, Multiforcing pi, std::uint32_t depth)
        : id_(std::move(id)), pi_(std::move(pi)), depth_(depth) {}

    const std::string& id() const override { return id_; }
    bool member(const Multitree& x) const override { return mt_member(pi_, x, depth_); }
    std::optional<Multitree> refine_into(const Multitree& x) const override { return x; }

private:
    std::string id_;
    Multiforcing pi_;
    std::uint32_t depth_;
};

// Finite intersection; inputs must be open for the sequential refinement to
// be sound.
class IntersectionSet final : public MultitreeSet {
public:
    IntersectionSet(std::string id, std::vector<MultitreeSetPtr> parts)
        : id_(std::move(id)), parts_(std::move(parts)) {}

    const std::string& id() const override { return id_; }

    bool member(const Multitree& x) const override {
        for (const auto& d : parts_)
            if (!d->member(x)) return false;
        return true;
    }

    std::optional<Multitree> refine_into(const Multitree& x) const override {
        Multitree cur = x;
        for (const auto& d : parts_) {
            auto w = d->refine_into(cur);
            if (!w) return std::nullopt;
            cur = *w;
        }
        if (!member(cur)) return std::nullopt;
        return cur;
    }

    const std::vector<MultitreeSetPtr>& parts() const { return parts_; }

private:
    std::string id_;
    std::vector<MultitreeSetPtr> parts_;
};

// Conditions whose xi-component already descended into the given layer: the
// multitree cone of one layer of an increasing sequence.
class LayerConeSet final : public MultitreeSet {
public:
    LayerConeSet(std::string id, ArborealForcing layer, Index xi, std::uint32_t depth)
        : id_(std::move(id)), layer_(std::move(layer)), xi_(xi), depth_(depth) {}

    const std::string& id() const override { return id_; }

    bool member(const Multitree& x) const override {
        if (!x.has(xi_)) return false;
        for (const auto& g : layer_.generators)
            if (tree_subset(x.at(xi_), g)) return true;
        return false;
    }

    std::optional<Multitree> refine_into(const Multitree& x) const override {
        if (member(x)) return x;
        if (!x.has(xi_)) {
            Multitree w = x;
            w.comp.emplace(xi_, layer_.generators.at(0));
            return w;
        }
        const Tree& t = x.at(xi_);
        // a fine component descends: some restriction of it sits inside a
        // layer generator
        std::uint32_t cap = depth_;
        if (auto e = t.exactness()) cap = std::min(cap, *e);
        cap = std::max(cap, t.projection().depth());
        for (std::uint32_t l = 0; l <= cap; ++l)
            for (const auto& s : t.projection().slice(l)) {
                Tree piece = t.restrict_to(s);
                for (const auto& g : layer_.generators)
                    if (tree_subset(piece, g)) {
                        Multitree w = x;
                        w.comp.at(xi_) = piece;
                        return w;
                    }
            }
        // a coarse component absorbs: some layer member sits inside it
        for (const auto& g : layer_.generators) {
            ArborealForcing single;
            single.generators = {g};
            std::uint32_t d = depth_;
            if (auto e = g.exactness()) d = std::min(d, *e);
            if (auto m = member_below(single, t, d)) {
                Multitree w = x;
                w.comp.at(xi_) = *m;
                return w;
            }
        }
        return std::nullopt;
    }

    const ArborealForcing& layer() const { return layer_; }
    Index xi() const { return xi_; }
    std::uint32_t depth() const { return depth_; }

private:
    std::string id_;
    ArborealForcing layer_;
    Index xi_;
    std::uint32_t depth_;
};

}  // namespace ptf
