#include "ptf/multi.hpp"

#include <algorithm>

#include "ptf/errors.hpp"

namespace ptf {

std::vector<Index> Multitree::support() const {
    std::vector<Index> out;
    out.reserve(comp.size());
    for (const auto& [xi, t] : comp) out.push_back(xi);
    return out;
}

std::vector<Index> Multiforcing::support() const {
    std::vector<Index> out;
    out.reserve(comp.size());
    for (const auto& [xi, p] : comp) out.push_back(xi);
    return out;
}

bool Multiforcing::clopen_generated() const {
    return std::all_of(comp.begin(), comp.end(),
                       [](const auto& kv) { return kv.second.clopen_generated(); });
}

bool mt_member(const Multiforcing& pi, const Multitree& p, std::uint32_t depth) {
    for (const auto& [xi, t] : p.comp) {
        if (!pi.has(xi)) return false;
        if (!forcing_member(pi.at(xi), t, depth)) return false;
    }
    return true;
}

bool mleq(const Multitree& q, const Multitree& p) {
    for (const auto& [xi, t] : p.comp) {
        if (!q.has(xi)) return false;
        if (!tree_subset(q.at(xi), t)) return false;
    }
    return true;
}

bool sad(const Multitree& p, const Multitree& q) {
    for (const auto& [xi, t] : p.comp) {
        if (!q.has(xi)) continue;
        if (almost_disjoint(t, q.at(xi))) return true;
    }
    return false;
}

Multitree mt_union(const Multitree& a, const Multitree& b) {
    Multitree out = a;
    for (const auto& [xi, t] : b.comp) {
        auto it = out.comp.find(xi);
        if (it == out.comp.end()) {
            out.comp.emplace(xi, t);
        } else if (!(it->second == t)) {
            throw PreconditionViolated("mt_union: conflicting assignment at a common index");
        }
    }
    return out;
}

Multitree mt_restrict(const Multitree& p, const std::vector<Index>& keep) {
    Multitree out;
    for (Index xi : keep) {
        auto it = p.comp.find(xi);
        if (it != p.comp.end()) out.comp.emplace(xi, it->second);
    }
    return out;
}

std::optional<Multitree> meet_member(const Multiforcing& pi, const Multitree& a,
                                     const Multitree& b) {
    if (sad(a, b)) return std::nullopt;
    Multitree out;
    for (const auto& [xi, t] : a.comp) {
        if (!pi.has(xi)) return std::nullopt;
        if (b.has(xi)) {
            auto inter = intersect(t.projection(), b.at(xi).projection());
            if (!inter) return std::nullopt;
            auto m = member_within(pi.at(xi), *inter);
            if (!m) return std::nullopt;
            out.comp.emplace(xi, Tree(*m));
        } else {
            out.comp.emplace(xi, t);
        }
    }
    for (const auto& [xi, t] : b.comp) {
        if (out.has(xi)) continue;
        if (!pi.has(xi)) return std::nullopt;
        auto m = member_within(pi.at(xi), t.projection());
        if (!m) return std::nullopt;
        out.comp.emplace(xi, Tree(*m));
    }
    return out;
}

std::optional<std::vector<Multitree>> meet_cover(const Multiforcing& pi, const Multitree& p,
                                                 const Multitree& q, std::uint32_t depth) {
    if (sad(p, q)) throw PreconditionViolated("meet_cover: arguments are sad");
    std::vector<Index> indices;
    std::vector<std::vector<Tree>> choices;
    auto add = [&](Index xi, std::vector<Tree> ts) {
        indices.push_back(xi);
        choices.push_back(std::move(ts));
    };
    for (const auto& [xi, t] : p.comp) {
        if (!q.has(xi)) {
            add(xi, {t});
            continue;
        }
        auto inter = intersect(t.projection(), q.at(xi).projection());
        if (!inter) throw PreconditionViolated("meet_cover: empty intersection escaped sad test");
        auto dec = clg_decompose(pi.at(xi), *inter);
        if (!dec) throw RegularityViolated("meet_cover: intersection not in clg");
        std::vector<Tree> ts;
        for (const auto& m : *dec) ts.emplace_back(m);
        add(xi, std::move(ts));
    }
    for (const auto& [xi, t] : q.comp)
        if (!p.has(xi)) add(xi, {t});
    std::vector<Multitree> out{Multitree{}};
    for (std::size_t i = 0; i < indices.size(); ++i) {
        std::vector<Multitree> next;
        next.reserve(out.size() * choices[i].size());
        for (const auto& base : out)
            for (const auto& t : choices[i]) {
                Multitree r = base;
                r.comp.emplace(indices[i], t);
                next.push_back(std::move(r));
            }
        out.swap(next);
        if (out.size() > 100000) throw SearchBudgetExceeded("meet_cover product");
    }
    (void)depth;
    return out;
}

Multiforcing cw_union(const Multiforcing& a, const Multiforcing& b) {
    Multiforcing out = a;
    for (const auto& [xi, P] : b.comp) {
        auto it = out.comp.find(xi);
        if (it == out.comp.end()) {
            out.comp.emplace(xi, P);
        } else {
            auto& gens = it->second.generators;
            gens.insert(gens.end(), P.generators.begin(), P.generators.end());
            it->second.canonicalize();
        }
    }
    return out;
}

Multiforcing cw_union_seq(const std::vector<Multiforcing>& seq) {
    Multiforcing out;
    for (const auto& m : seq) out = cw_union(out, m);
    return out;
}

RefinementVerdict mrefines(const Multiforcing& pi, const Multiforcing& rho, std::uint32_t depth) {
    RefinementVerdict v;
    v.depth = depth;
    for (const auto& [xi, P] : pi.comp) {
        if (!rho.has(xi)) {
            v.fail("dom", "index " + std::to_string(xi) + " missing from refinement");
            continue;
        }
        RefinementVerdict c = refines(P, rho.at(xi), depth);
        for (auto& f : c.failures)
            v.fail("xi=" + std::to_string(xi) + ":" + f.clause, std::move(f.witness));
    }
    return v;
}

std::vector<Multitree> generating_family(const Multiforcing& pi, std::size_t cap) {
    std::vector<Index> idx = pi.support();
    if (idx.size() >= 16) throw BudgetRejected("generating_family: too many indices");
    std::vector<Multitree> out;
    for (std::uint32_t mask = 0; mask < (1u << idx.size()); ++mask) {
        std::vector<Multitree> partial{Multitree{}};
        for (std::size_t i = 0; i < idx.size(); ++i) {
            if (!(mask & (1u << i))) continue;
            const auto& gens = pi.at(idx[i]).generators;
            std::vector<Multitree> next;
            next.reserve(partial.size() * gens.size());
            for (const auto& base : partial)
                for (const auto& g : gens) {
                    Multitree r = base;
                    r.comp.emplace(idx[i], g);
                    next.push_back(std::move(r));
                }
            partial.swap(next);
        }
        for (auto& p : partial) {
            out.push_back(std::move(p));
            if (out.size() > cap) throw BudgetRejected("generating_family: cap exceeded");
        }
    }
    return out;
}

std::vector<Multitree> cube_subtract(const Multitree& c, const Multitree& v) {
    if (c.support() != v.support())
        throw PreconditionViolated("cube_subtract: unequal supports");
    std::map<Index, ClopenTree> inters;
    for (const auto& [xi, t] : c.comp) {
        auto in = intersect(t.projection(), v.at(xi).projection());
        if (!in) return {c};
        inters.emplace(xi, *in);
    }
    std::vector<Multitree> pieces;
    std::vector<Index> idx = c.support();
    for (std::size_t i = 0; i < idx.size(); ++i) {
        auto diff = difference(c.at(idx[i]).projection(), v.at(idx[i]).projection());
        if (!diff) continue;
        Multitree piece;
        for (std::size_t j = 0; j < i; ++j) piece.comp.emplace(idx[j], Tree(inters.at(idx[j])));
        piece.comp.emplace(idx[i], Tree(*diff));
        for (std::size_t j = i + 1; j < idx.size(); ++j) piece.comp.emplace(idx[j], c.at(idx[j]));
        pieces.push_back(std::move(piece));
    }
    return pieces;
}

std::optional<std::vector<Multitree>> sqfv(const Multitree& u, const std::vector<Multitree>& D,
                                           std::uint64_t budget) {
    std::vector<Multitree> residuals{u};
    std::vector<Multitree> used;
    std::uint64_t work = 0;
    for (const auto& v : D) {
        if (residuals.empty()) break;
        if (v.support() != u.support()) continue;  // clause 1 of the finite-cover relation
        bool touches = false;
        std::vector<Multitree> next;
        for (const auto& r : residuals) {
            if (sad(r, v)) {
                next.push_back(r);
                continue;
            }
            touches = true;
            auto pieces = cube_subtract(r, v);
            next.insert(next.end(), pieces.begin(), pieces.end());
            if ((work += pieces.size() + 1) > budget) throw SearchBudgetExceeded("sqfv");
        }
        if (touches) used.push_back(v);
        residuals.swap(next);
    }
    if (!residuals.empty()) return std::nullopt;
    return used;
}

bool dense_over_family(const MultitreeSet& D, const Multiforcing& pi) {
    for (const auto& p : generating_family(pi)) {
        auto w = D.refine_into(p);
        if (!w || !mleq(*w, p) || !D.member(*w)) return false;
    }
    return true;
}

bool predense_over_family(const std::vector<Multitree>& list, const Multiforcing& pi,
                          std::uint32_t depth) {
    (void)depth;
    for (const auto& p : generating_family(pi)) {
        bool hit = false;
        for (const auto& x : list)
            if (meet_member(pi, p, x)) {
                hit = true;
                break;
            }
        if (!hit) return false;
    }
    return true;
}

namespace {

struct UCase {
    Multitree u;
    UShape shape;
};

std::vector<UCase> u_cases(const Multiforcing& pi, const Multiforcing& rho) {
    std::vector<Index> idx;
    for (const auto& [xi, P] : pi.comp)
        if (rho.has(xi)) idx.push_back(xi);
    std::vector<UCase> out{UCase{}};
    for (Index xi : idx) {
        const auto& gens = rho.at(xi).generators;
        std::vector<UCase> next = out;  // the branch where xi is absent
        for (const auto& c : out)
            for (std::uint32_t k = 0; k < gens.size(); ++k) {
                UCase e = c;
                e.u.comp.emplace(xi, gens[k]);
                e.shape.k_of[xi] = k;
                next.push_back(std::move(e));
            }
        out.swap(next);
        if (out.size() > 20000) throw BudgetRejected("mseals: too many u cases");
    }
    return out;
}

// The chain element of a fusion generator frozen at the given level.
const ClopenTree* chain_at_level(const Tree& gen, std::uint32_t level) {
    if (!gen.is_fusion()) return nullptr;
    for (const auto& [n, T] : gen.fusion().chain)
        if (n == level) return &T;
    return nullptr;
}

}  // namespace

RefinementVerdict mseals(const Multiforcing& pi, const MultitreeSet& D, const Multiforcing& rho,
                         std::uint32_t depth, const std::vector<SealWitness>& witnesses,
                         std::uint64_t budget) {
    RefinementVerdict v = mrefines(pi, rho, depth);
    if (!v.holds) return v;
    std::uint64_t work = 0;
    auto charge = [&](std::uint64_t w, const std::string& ctx) {
        if ((work += w) > budget) throw SearchBudgetExceeded("mseals at " + ctx);
    };

    // Verifies one (p, u) case against a concrete (level, q) candidate.
    auto check_candidate = [&](const Multitree& p, const UCase& uc, std::uint32_t level,
                               const Multitree& q) -> bool {
        if (!mleq(q, p)) return false;
        for (const auto& [xi, t] : q.comp)
            if (uc.u.has(xi)) return false;
        if (!mt_member(pi, q, depth)) return false;
        // Collect the frozen chain trees serving the u components.
        std::map<Index, const ClopenTree*> frozen;
        for (const auto& [xi, t] : uc.u.comp) {
            const ClopenTree* C = chain_at_level(t, level);
            if (!C) return false;
            if (!t.projection().subset_of(*C)) return false;
            frozen[xi] = C;
        }
        // Every level-slice combination must give a member of D cup q.
        std::vector<Index> idx = uc.u.support();
        std::vector<std::vector<BitString>> slices;
        std::size_t total = 1;
        for (Index xi : idx) {
            slices.push_back(frozen[xi]->slice(level));
            total *= slices.back().size();
        }
        charge(total + 1, "cover enumeration");
        std::vector<std::size_t> counter(idx.size(), 0);
        for (std::size_t it = 0; it < total; ++it) {
            Multitree piece;
            std::size_t rem = it;
            for (std::size_t i = 0; i < idx.size(); ++i) {
                std::size_t c = rem % slices[i].size();
                rem /= slices[i].size();
                piece.comp.emplace(idx[i], Tree(frozen[idx[i]]->restrict_to(slices[i][c])));
            }
            if (!mt_member(pi, piece, depth)) return false;
            if (!D.member(mt_union(piece, q))) return false;
        }
        return true;
    };

    auto family = generating_family(pi);
    auto cases = u_cases(pi, rho);
    for (const auto& p : family) {
        for (const auto& uc : cases) {
            bool overlap = false;
            for (const auto& [xi, t] : uc.u.comp)
                if (p.has(xi)) {
                    overlap = true;
                    break;
                }
            if (overlap) continue;
            charge(1, "case loop");

            bool ok = false;
            if (uc.u.empty()) {
                // The empty-u case reduces to density of D below p.
                auto w = D.refine_into(p);
                ok = w && mleq(*w, p) && D.member(*w);
            }
            if (!ok) {
                for (const auto& wit : witnesses) {
                    if (wit.set_id != D.id() || !(wit.shape == uc.shape) || !(wit.p == p)) continue;
                    if (check_candidate(p, uc, wit.level, wit.q)) {
                        ok = true;
                        break;
                    }
                }
            }
            if (!ok && !uc.u.empty()) {
                // Bounded fallback: try q = p (and a density refinement of p)
                // at every common freeze level of the involved chains.
                std::vector<std::uint32_t> levels;
                const Tree& first = uc.u.comp.begin()->second;
                if (first.is_fusion())
                    for (const auto& [n, T] : first.fusion().chain) levels.push_back(n);
                std::vector<Multitree> qs{p};
                if (auto w = D.refine_into(p)) {
                    bool disj = true;
                    for (const auto& [xi, t] : w->comp)
                        if (uc.u.has(xi)) disj = false;
                    if (disj) qs.push_back(*w);
                }
                for (std::uint32_t n : levels) {
                    for (const auto& q : qs)
                        if (check_candidate(p, uc, n, q)) {
                            ok = true;
                            break;
                        }
                    if (ok) break;
                }
            }
            if (!ok) {
                std::string w = "p={";
                for (Index xi : p.support()) w += std::to_string(xi) + ",";
                w += "} u={";
                for (const auto& [xi, k] : uc.shape.k_of)
                    w += std::to_string(xi) + ":k" + std::to_string(k) + ",";
                w += "}";
                v.fail("ssl", w);
            }
        }
    }
    return v;
}

}  // namespace ptf
