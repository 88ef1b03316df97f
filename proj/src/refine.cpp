#include "ptf/refine.hpp"

#include <algorithm>
#include <random>

#include "ptf/errors.hpp"

namespace ptf {

std::pair<Multiforcing, RefinementTrace> generic_refine(const Multiforcing& pi, TaskList& tasks,
                                                        const RunConfig& cfg) {
    RefinementTrace trace;
    trace.config = cfg;
    Multiforcing rho;
    if (pi.empty()) return {rho, trace};
    if (!pi.clopen_generated())
        throw PreconditionViolated("generic_refine: input components must be clopen-generated");

    std::vector<DenseTaskPtr> order = tasks.tasks;
    std::stable_sort(order.begin(), order.end(),
                     [](const DenseTaskPtr& a, const DenseTaskPtr& b) {
                         return a->phase() < b->phase();
                     });
    std::mt19937_64 rng(cfg.seed);
    for (auto it = order.begin(); it != order.end();) {
        auto jt = it;
        while (jt != order.end() && (*jt)->phase() == (*it)->phase()) ++jt;
        std::shuffle(it, jt, rng);
        it = jt;
    }

    // Phases that share one freeze level (and so one chain element): the
    // tasks inside a group only shrink trees at or below the group level, and
    // their certificates are stable under the later shrinks of the group.
    auto group_of = [](int phase) {
        switch (phase) {
            case 2: case 3: return 2;                      // syn, narrow
            case 4: case 5: case 6: return 3;              // narrow.seal, seals, avoidance
            case 7: case 8: case 9: case 10: case 11: return 4;  // narrow.shrink .. escape
            default: return 20 + phase;                    // singleton groups
        }
    };

    std::uint32_t n = 0;
    System phi;
    for (std::size_t i = 0; i < order.size();) {
        std::size_t j = i;
        while (j < order.size() && group_of(order[j]->phase()) == group_of(order[i]->phase()))
            ++j;
        std::uint32_t level = n + 1;
        std::uint32_t top = level;
        System cur = phi;
        std::string ids;
        for (std::size_t t = i; t < j; ++t) {
            auto r = order[t]->extend(level, cur);
            if (!r) throw TaskStuck(order[t]->id());
            if (r->first < level || !sys_lec(r->first, r->second, n, phi))
                throw Error("task broke the decreasing chain: " + order[t]->id());
            top = std::max(top, r->first);
            cur = std::move(r->second);
            ids += (t == i ? "" : "+") + order[t]->id();
        }
        for (std::size_t t = i; t < j; ++t)
            if (!order[t]->member(top, cur))
                throw Error("task failed its own membership: " + order[t]->id());
        n = top;
        phi = std::move(cur);
        for (const auto& [key, tree] : phi.comp)
            if (!trace.j_of.count(key))
                trace.j_of[key] = static_cast<std::uint32_t>(trace.steps.size());
        trace.steps.emplace_back(n, phi);
        trace.task_at_step.push_back(ids);
        i = j;
    }
    for (auto& task : order) task->record(trace);

    std::vector<BitString> required;
    if (cfg.enable_split)
        for (std::uint32_t l = 0; l <= cfg.split_budget; ++l)
            for (const auto& s : all_strings(l)) required.push_back(s);

    for (const auto& [xi, P] : pi.comp) {
        ArborealForcing Q;
        for (std::uint32_t k = 0; k < cfg.kmax; ++k) {
            SysKey key{xi, k};
            auto it = trace.j_of.find(key);
            if (it == trace.j_of.end()) continue;
            std::vector<std::pair<std::uint32_t, ClopenTree>> chain;
            for (std::size_t j = it->second; j < trace.steps.size(); ++j)
                chain.emplace_back(trace.steps[j].first, trace.steps[j].second.at(key));
            Q.generators.emplace_back(fuse(std::move(chain), required));
        }
        rho.comp.emplace(xi, std::move(Q));
    }
    return {rho, trace};
}

bool trace_valid(const Multiforcing& pi, const RefinementTrace& trace) {
    const auto& steps = trace.steps;
    for (std::size_t j = 0; j + 1 < steps.size(); ++j) {
        if (steps[j + 1].first <= steps[j].first) return false;
        if (!sys_lec(steps[j + 1].first, steps[j + 1].second, steps[j].first, steps[j].second))
            return false;
    }
    for (const auto& [key, tree] : steps.empty() ? System{}.comp : steps[0].second.comp)
        if (!pi.has(key.first)) return false;
    return true;
}

namespace {

// The split audit: every required string is either absent from the final
// tree or carries a logged witness whose split is frozen.
bool split_audit(const FusionTree& f, std::uint32_t split_budget, std::string& note) {
    const ClopenTree& last = f.last();
    for (std::uint32_t l = 0; l <= split_budget; ++l)
        for (const auto& t : all_strings(l)) {
            if (!last.contains(t)) continue;
            bool ok = false;
            for (const auto& e : f.log) {
                if (!(e.task == t) || e.absent) continue;
                if (t.prefix_of(e.witness) && e.witness.length() + 1 <= f.exactness() &&
                    last.contains(e.witness.append(0)) && last.contains(e.witness.append(1))) {
                    ok = true;
                    break;
                }
            }
            if (!ok) {
                note = "no frozen split above " + t.str();
                return false;
            }
        }
    return true;
}

std::vector<std::pair<SysKey, const Tree*>> budget_trees(const Multiforcing& rho) {
    std::vector<std::pair<SysKey, const Tree*>> out;
    for (const auto& [xi, Q] : rho.comp)
        for (std::uint32_t k = 0; k < Q.generators.size(); ++k)
            out.push_back({{xi, k}, &Q.generators[k]});
    return out;
}

}  // namespace

Report verify_dj(const Multiforcing& pi, const Multiforcing& rho, const RefinementTrace& trace,
                 std::uint32_t depth,
                 const std::map<Index, std::vector<std::vector<Tree>>>& arboreal_pool,
                 const std::vector<Multiforcing>& chain) {
    Report rep;

    auto& c1 = rep.add("dj-i");
    if (pi.support() != rho.support()) {
        c1.holds = false;
        c1.notes.push_back("domain mismatch");
    }
    for (const auto& [xi, Q] : rho.comp) {
        if (Q.generators.empty()) {
            c1.holds = false;
            c1.notes.push_back("xi=" + std::to_string(xi) + ": no generators");
            continue;
        }
        if (!is_special(Q, depth)) {
            c1.holds = false;
            c1.notes.push_back("xi=" + std::to_string(xi) + ": not special");
        }
        for (const auto& g : Q.generators) {
            if (!g.is_fusion()) continue;
            if (!chain_valid(g.fusion().chain)) {
                c1.holds = false;
                c1.notes.push_back("xi=" + std::to_string(xi) + ": invalid fusion chain");
            }
            std::string note;
            if (!split_audit(g.fusion(), trace.config.split_budget, note)) {
                c1.holds = false;
                c1.notes.push_back("xi=" + std::to_string(xi) + ": " + note);
            }
        }
    }
    RefinementVerdict mr = mrefines(pi, rho, depth);
    if (!mr.holds) {
        c1.holds = false;
        for (const auto& f : mr.failures) c1.notes.push_back(f.clause + ": " + f.witness);
    }

    auto& c2 = rep.add("dj-ii");
    auto trees = budget_trees(rho);
    for (std::size_t i = 0; i < trees.size(); ++i)
        for (std::size_t j = i + 1; j < trees.size(); ++j)
            if (!almost_disjoint(*trees[i].second, *trees[j].second)) {
                c2.holds = false;
                c2.notes.push_back(
                    "xi=" + std::to_string(trees[i].first.first) + ",k=" +
                    std::to_string(trees[i].first.second) + " meets xi=" +
                    std::to_string(trees[j].first.first) + ",k=" +
                    std::to_string(trees[j].first.second));
            }

    auto& c3 = rep.add("dj-iii");
    for (const auto& [xi, Q] : rho.comp)
        for (const auto& S : Q.generators)
            for (const auto& T : pi.at(xi).generators) {
                if (!clopen_in(S, T, depth)) {
                    c3.holds = false;
                    c3.notes.push_back("xi=" + std::to_string(xi) + ": undecided intersection");
                }
                if (tree_subset(T, S)) {
                    c3.holds = false;
                    c3.notes.push_back("xi=" + std::to_string(xi) + ": old tree inside new");
                }
            }

    auto& c4 = rep.add("dj-iv");
    for (const auto& [xi, P] : pi.comp)
        for (const auto& T : P.generators)
            if (!member_below(rho.at(xi), T, depth)) {
                c4.holds = false;
                c4.notes.push_back("xi=" + std::to_string(xi) + ": no new member below old tree");
            }
    if (!c3.holds) {
        c4.holds = false;
        c4.notes.push_back("openness inherited from dj-iii failure");
    }

    auto& c5 = rep.add("dj-v");
    for (const auto& [xi, sets] : arboreal_pool) {
        if (!rho.has(xi)) continue;
        for (std::size_t i = 0; i < sets.size(); ++i) {
            RefinementVerdict sv = seals(pi.at(xi), sets[i], rho.at(xi), depth);
            if (!sv.holds) {
                c5.holds = false;
                c5.notes.push_back("xi=" + std::to_string(xi) + ": set " + std::to_string(i) +
                                   " not sealed");
            }
        }
    }

    if (!chain.empty()) {
        auto& c6 = rep.add("dj-vi");
        for (std::size_t a = 0; a < chain.size(); ++a) {
            RefinementVerdict v = mrefines(chain[a], rho, depth);
            if (!v.holds) {
                c6.holds = false;
                c6.notes.push_back("layer " + std::to_string(a) + " not refined");
            }
        }
    }
    return rep;
}

Report verify_uu4(const Multiforcing& pi, const MultitreeSet& D, const Multiforcing& rho,
                  const RefinementTrace& trace, std::uint32_t depth) {
    Report rep;
    auto& c0 = rep.add("uu4-dense-input");
    if (!dense_over_family(D, pi)) {
        c0.holds = false;
        c0.notes.push_back("input set not open dense over the family");
    }
    auto& c1 = rep.add("uu4-seals");
    RefinementVerdict v = mseals(pi, D, rho, depth, trace.seal_witnesses);
    if (!v.holds) {
        c1.holds = false;
        for (const auto& f : v.failures) c1.notes.push_back(f.clause + ": " + f.witness);
    }
    auto& c2 = rep.add("uu4-predense-union");
    Multiforcing uni = cw_union(pi, rho);
    for (const auto& p : generating_family(uni)) {
        auto w = D.refine_into(p);
        if (!w || !mleq(*w, p) || !D.member(*w)) {
            c2.holds = false;
            c2.notes.push_back("family condition with no compatible member of the set");
            break;
        }
    }
    return rep;
}

Report verify_avoidance(const Multiforcing& pi, const RealName& c, Index xi,
                        const Multiforcing& rho, const RefinementTrace& trace,
                        std::uint32_t depth) {
    if (!is_nonprincipal(c, pi, xi, depth))
        throw PreconditionViolated("verify_avoidance: name is not non-principal at xi");
    Report rep;
    const auto& gens = rho.at(xi).generators;
    for (std::uint32_t K = 0; K < gens.size(); ++K) {
        auto& cl = rep.add("avoid-k" + std::to_string(K));
        auto D = avoid_dense_set(c, pi, xi, gens[K],
                                 "avoid:xi" + std::to_string(xi) + ":k" + std::to_string(K));
        RefinementVerdict v = mseals(pi, *D, rho, depth, trace.seal_witnesses);
        if (!v.holds) {
            cl.holds = false;
            for (const auto& f : v.failures) cl.notes.push_back(f.clause + ": " + f.witness);
        }
    }
    return rep;
}

}  // namespace ptf
