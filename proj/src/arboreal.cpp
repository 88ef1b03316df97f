#include "ptf/arboreal.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "ptf/errors.hpp"

namespace ptf {

void ArborealForcing::canonicalize() {
    std::sort(generators.begin(), generators.end());
    generators.erase(std::unique(generators.begin(), generators.end()), generators.end());
}

bool ArborealForcing::clopen_generated() const {
    return std::all_of(generators.begin(), generators.end(),
                       [](const Tree& t) { return t.is_clopen(); });
}

std::uint32_t ArborealForcing::max_proj_depth() const {
    std::uint32_t d = 0;
    for (const auto& g : generators) d = std::max(d, g.projection().depth());
    return d;
}

ArborealForcing cohen(std::uint32_t stem_bound) {
    ArborealForcing P;
    for (std::uint32_t l = 0; l <= stem_bound; ++l)
        for (const auto& s : all_strings(l)) P.generators.emplace_back(ClopenTree::cone(s));
    P.canonicalize();
    return P;
}

// Members are enumerated on the clopen projections; for fusion generators the
// restriction level is capped by the exactness bound.
std::vector<ClopenTree> clopen_members(const ArborealForcing& P, std::uint32_t max_lh) {
    std::set<ClopenTree> out;
    for (const auto& g : P.generators) {
        const ClopenTree& G = g.projection();
        std::uint32_t top = std::max(max_lh, G.depth());
        if (auto e = g.exactness()) top = std::min(top, *e);
        for (std::uint32_t l = 0; l <= top; ++l)
            for (const auto& u : G.slice(l)) out.insert(G.restrict_to(u));
    }
    return {out.begin(), out.end()};
}

namespace {

// If t equals a restriction G|u then u is a prefix of the meet of t's stems,
// so only those strings need trying.
BitString stem_meet(const ClopenTree& t) {
    auto stems = t.stems();
    BitString lcp = stems.front();
    for (const auto& s : stems)
        while (!lcp.prefix_of(s)) lcp = lcp.prefix(lcp.length() - 1);
    return lcp;
}

}  // namespace

bool forcing_member(const ArborealForcing& P, const Tree& t, std::uint32_t depth) {
    BitString lcp = stem_meet(t.projection());
    for (const auto& g : P.generators) {
        if (g == t) return true;
        std::uint32_t top = std::min(depth, lcp.length());
        if (auto e = g.exactness(); e && *e < top) top = *e;
        for (std::uint32_t l = 0; l <= top; ++l) {
            BitString u = lcp.prefix(l);
            if (!g.projection().contains(u)) break;
            if (g.restrict_to(u) == t) return true;
        }
    }
    return false;
}

std::optional<Tree> member_below(const ArborealForcing& Q, const Tree& T, std::uint32_t depth) {
    for (const auto& g : Q.generators) {
        if (tree_subset(g, T)) return g;
        g.require_exact(depth, "member_below");
        const ClopenTree& proj = g.projection();
        const ClopenTree& target = T.projection();
        for (const auto& s : proj.slice(depth))
            if (proj.restrict_to(s).subset_of(target)) return g.restrict_to(s);
    }
    return std::nullopt;
}

std::optional<std::vector<ClopenTree>> clg_decompose(const ArborealForcing& P,
                                                     const ClopenTree& C) {
    // [C] is a finite union of members exactly when the generators cover its
    // branches; then the pieces G|u over stems u of C decompose it.
    std::vector<ClopenTree> cover;
    for (const auto& u : C.stems()) {
        std::optional<ClopenTree> residual = ClopenTree::cone(u);
        for (const auto& g : P.generators) {
            if (!residual) break;
            const ClopenTree& G = g.projection();
            if (!G.contains(u)) continue;
            ClopenTree piece = G.restrict_to(u);
            if (almost_disjoint(*residual, piece)) continue;
            cover.push_back(piece);
            residual = difference(*residual, piece);
        }
        if (residual) return std::nullopt;
    }
    std::sort(cover.begin(), cover.end());
    cover.erase(std::unique(cover.begin(), cover.end()), cover.end());
    return cover;
}

bool clg_member(const ArborealForcing& P, const ClopenTree& C) {
    return clg_decompose(P, C).has_value();
}

std::optional<ClopenTree> member_within(const ArborealForcing& P, const ClopenTree& C) {
    for (const auto& g : P.generators) {
        auto I = intersect(C, g.projection());
        if (!I) continue;
        // a stem of the intersection at the generator's depth or below names
        // a member whole cone sits inside C
        std::uint32_t d = std::max(I->depth(), g.projection().depth());
        BitString w = I->slice(d).front();
        return g.projection().restrict_to(w);
    }
    return std::nullopt;
}

bool clopen_in(const Tree& S, const Tree& T, std::uint32_t depth) {
    S.require_exact(depth, "clopen_in");
    std::uint32_t dT = std::max(depth, T.projection().depth());
    T.require_exact(dT, "clopen_in");
    const ClopenTree& s_proj = S.projection();
    const ClopenTree& t_proj = T.projection();
    for (const auto& s : s_proj.slice(depth)) {
        ClopenTree piece = s_proj.restrict_to(s);
        if (!piece.subset_of(t_proj) && !almost_disjoint(piece, t_proj)) return false;
    }
    return true;
}

bool has_full_cone_at(const ClopenTree& T, std::uint32_t level) {
    if (T.depth() <= level) return true;
    std::uint32_t shift = T.depth() - level;
    std::uint64_t full = std::uint64_t{1} << shift;
    std::uint64_t run = 0;
    std::uint64_t prev = 0;
    bool first = true;
    for (const auto& s : T.stems()) {
        std::uint64_t head = s.code() >> shift;
        if (first || head != prev) {
            run = 1;
            prev = head;
            first = false;
        } else if (++run == full) {
            return true;
        }
    }
    return false;
}

bool is_regular(const ArborealForcing& P, std::uint32_t depth) {
    const auto& g = P.generators;
    for (std::size_t i = 0; i < g.size(); ++i)
        for (std::size_t j = i + 1; j < g.size(); ++j)
            if (!clopen_in(g[i], g[j], depth) && !clopen_in(g[j], g[i], depth)) return false;
    return true;
}

std::optional<std::vector<Tree>> is_special(const ArborealForcing& P, std::uint32_t depth) {
    const auto& g = P.generators;
    std::vector<Tree> maximal;
    for (const auto& t : g) {
        bool dominated = false;
        for (const auto& other : g)
            if (!(other == t) && tree_subset(t, other)) {
                dominated = true;
                break;
            }
        if (!dominated) maximal.push_back(t);
    }
    for (std::size_t i = 0; i < maximal.size(); ++i)
        for (std::size_t j = i + 1; j < maximal.size(); ++j)
            if (!almost_disjoint(maximal[i], maximal[j])) return std::nullopt;
    // Every generator must arise as a restriction of some maximal tree.
    for (const auto& t : g) {
        bool generated = false;
        for (const auto& a : maximal) {
            if (a == t) {
                generated = true;
                break;
            }
            if (!tree_subset(t, a)) continue;
            std::uint32_t top = std::max(t.projection().depth(), a.projection().depth());
            if (auto e = a.exactness(); e && *e < top) top = std::min(top, *e);
            top = std::min(top, depth);
            for (std::uint32_t l = 0; l <= top && !generated; ++l)
                for (const auto& u : a.projection().slice(l))
                    if (a.restrict_to(u) == t) {
                        generated = true;
                        break;
                    }
            if (generated) break;
        }
        if (!generated) return std::nullopt;
    }
    return maximal;
}

std::optional<std::vector<Tree>> sqf_cover(const Tree& T, const std::vector<Tree>& D,
                                           std::uint32_t depth) {
    T.require_exact(std::min(depth, T.projection().depth()), "sqf_cover");
    std::optional<ClopenTree> residual = T.projection();
    std::vector<Tree> cover;
    for (const auto& S : D) {
        if (!residual) break;
        if (almost_disjoint(*residual, S.projection())) continue;
        cover.push_back(S);
        residual = difference(*residual, S.projection());
    }
    if (residual) return std::nullopt;
    return cover;
}

RefinementVerdict refines(const ArborealForcing& P, const ArborealForcing& Q,
                          std::uint32_t depth) {
    RefinementVerdict v;
    v.depth = depth;
    for (const auto& T : P.generators)
        if (!member_below(Q, T, depth))
            v.fail("fm1", "no member of the refinement below generator");
    for (const auto& Qg : Q.generators)
        if (!sqf_cover(Qg, P.generators, depth)) v.fail("fm3", "generator not finitely covered");
    for (const auto& Qg : Q.generators) {
        for (const auto& T : P.generators) {
            if (!clopen_in(Qg, T, depth)) v.fail("fm4", "intersection not clopen in refinement tree");
            if (tree_subset(T, Qg)) v.fail("fm4", "old tree contained in refinement tree");
        }
        if (has_full_cone_at(Qg.projection(), depth))
            v.fail("fm4", "member-level absorption: full cone at the check depth");
    }
    return v;
}

RefinementVerdict seals(const ArborealForcing& P, const std::vector<Tree>& D,
                        const ArborealForcing& Q, std::uint32_t depth) {
    RefinementVerdict v = refines(P, Q, depth);
    for (const auto& Qg : Q.generators)
        if (!sqf_cover(Qg, D, depth)) v.fail("seal", "generator not covered by the sealed set");
    return v;
}

std::optional<ClopenTree> compat_witness(const ArborealForcing& P, const Tree& S, const Tree& T) {
    if (almost_disjoint(S, T)) return std::nullopt;
    auto w = intersect(S.projection(), T.projection());
    if (!w) return std::nullopt;  // unreachable after the a.d. test
    if (!clg_member(P, *w)) throw RegularityViolated("intersection not in clg(P)");
    return w;
}

}  // namespace ptf
