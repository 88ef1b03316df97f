// Acceptance runner: every criterion prints one PASS/FAIL line; the binary
// exits nonzero when any criterion fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <set>
#include <vector>

#include "helpers.hpp"
#include "ptf/errors.hpp"
#include "ptf/extlab.hpp"
#include "ptf/json_io.hpp"

using namespace ptf;
using namespace ptf::testing;

namespace {

struct Outcome {
    bool pass = true;
    std::string note;
    void fail(const std::string& n) {
        pass = false;
        if (note.empty()) note = n;
    }
    void require(bool ok, const std::string& n) {
        if (!ok) fail(n);
    }
};

std::map<Index, std::vector<std::vector<Tree>>> gen_pool(const Multiforcing& pi) {
    std::map<Index, std::vector<std::vector<Tree>>> pool;
    for (const auto& [xi, P] : pi.comp) pool[xi].push_back(P.generators);
    return pool;
}

RunConfig engine_cfg(std::uint64_t seed, std::uint32_t depth, std::uint32_t kmax,
                     std::uint32_t split) {
    RunConfig cfg;
    cfg.seed = seed;
    cfg.depth = depth;
    cfg.kmax = kmax;
    cfg.split_budget = split;
    return cfg;
}

// ---- 1: fusion soundness ---------------------------------------------------
Outcome c1_fusion() {
    Outcome o;
    Rng rng(1001);
    std::vector<BitString> req;
    for (std::uint32_t l = 0; l <= 2; ++l)
        for (const auto& t : all_strings(l)) req.push_back(t);
    for (int it = 0; it < 500; ++it) {
        auto chain = random_lec_chain(rng, 3, 2);
        FusionTree f = fuse(chain, req);
        for (const auto& [n, T] : chain)
            o.require(lec(n, f.last(), n, T), "lec against a chain element failed");
        for (const auto& e : f.log) {
            if (e.absent) {
                o.require(!f.last().contains(e.task), "absent log entry wrong");
            } else {
                o.require(e.task.prefix_of(e.witness) && e.witness.length() + 1 <= f.exactness() &&
                              f.last().contains(e.witness.append(0)) &&
                              f.last().contains(e.witness.append(1)),
                          "split witness not frozen");
            }
        }
    }
    return o;
}

// ---- 2: regular compatibility ----------------------------------------------
Outcome c2_compat() {
    Outcome o;
    Rng rng(1002);
    for (int it = 0; it < 500; ++it) {
        ArborealForcing P = random_clopen_forcing(rng, 4, 3);
        o.require(is_regular(P, 4), "clopen forcing not regular");
        for (const auto& S : P.generators)
            for (const auto& T : P.generators) {
                if (almost_disjoint(S, T)) continue;
                auto w = compat_witness(P, S, T);
                if (!w) {
                    o.fail("no witness for a compatible pair");
                    continue;
                }
                // independent slice-enumeration oracle at depth 4
                std::set<std::string> ws = oracle_slice(*w, 4);
                std::set<std::string> both;
                for (const auto& s : oracle_slice(S.projection(), 4))
                    if (oracle_slice(T.projection(), 4).count(s)) both.insert(s);
                o.require(ws == both, "witness branches differ from the intersection");
                o.require(clg_member(P, *w), "witness outside clg");
            }
    }
    return o;
}

// ---- 3: surgery lemmas -----------------------------------------------------
Outcome c3_surgery() {
    Outcome o;
    Rng rng(1003);
    for (int it = 0; it < 500; ++it) {
        // splice postconditions
        ClopenTree S = random_clopen(rng, 3);
        std::uint32_t n = std::min<std::uint32_t>(S.depth() + 1, 3);
        auto slice = S.slice(n);
        BitString u = slice[pick(rng, slice.size())];
        ClopenTree T = random_subtree_below(rng, S.restrict_to(u), n, 1 + pick(rng, 2));
        ClopenTree S2 = splice(S, u, T, n);
        o.require(lec(n, S2, n, S), "splice broke the pair order");
        o.require(S2.restrict_to(u) == T, "splice did not install the new piece");
        for (const auto& v : slice)
            if (!(v == u))
                o.require(S2.restrict_to(v) == S.restrict_to(v), "splice touched another piece");

        // piece normalisation: every level piece a member afterwards
        ArborealForcing P = random_special_forcing(rng, 2, 3);
        std::vector<ClopenTree> parts;
        for (const auto& g : P.generators)
            if (pick(rng, 2)) parts.push_back(g.projection());
        if (parts.empty()) parts.push_back(P.generators[0].projection());
        ClopenTree C = union_of(parts);
        Multiforcing amb;
        amb.comp.emplace(0, P);
        System sys;
        sys.comp.emplace(SysKey{0, 0}, C);
        std::uint32_t m = C.depth() + 1;
        System norm = syn_normalize(amb, m, sys);
        const ClopenTree& N = norm.at({0, 0});
        o.require(lec(m, N, m, C), "normalisation broke the pair order");
        for (const auto& s : N.slice(m))
            o.require(forcing_member(P, Tree(N.restrict_to(s)), 8), "piece not a member");

        // pairwise disjointing at a frozen level
        ClopenTree A = random_clopen(rng, 2);
        ClopenTree B = random_clopen(rng, 2);
        std::uint32_t lev = pick(rng, 2);
        auto [X, Y] = shrink_disjoint(lev, A, B);
        o.require(lec(lev, X, lev, A) && lec(lev, Y, lev, B), "shrink broke the pair order");
        for (const auto& s : oracle_slice(X, lev + 4))
            o.require(!oracle_slice(Y, lev + 4).count(s), "branches still meet");
    }
    return o;
}

// ---- 4: the refinement theorem ---------------------------------------------
Outcome c4_dj() {
    Outcome o;
    Rng rng(1004);
    for (std::uint64_t run = 0; run < 100 && o.pass; ++run) {
        std::vector<Index> idx;
        std::uint32_t count = 1 + pick(rng, 3);
        for (Index xi = 0; xi < count; ++xi) idx.push_back(xi);
        Multiforcing pi = random_multiforcing(rng, idx, 6, 2, false);
        RunConfig cfg = engine_cfg(run, 10, 3, 3);
        TaskList tasks = mandatory_tasks(pi, {}, {}, {}, gen_pool(pi), cfg);
        auto [rho, trace] = generic_refine(pi, tasks, cfg);
        Report rep = verify_dj(pi, rho, trace, cfg.depth, gen_pool(pi));
        for (const auto& c : rep.clauses)
            o.require(c.holds, "run " + std::to_string(run) + " clause " + c.id +
                                   (c.notes.empty() ? "" : ": " + c.notes[0]));
    }
    // clause (vi) on chained runs
    for (std::uint64_t run = 0; run < 20 && o.pass; ++run) {
        RunConfig cfg = engine_cfg(2000 + run, 8, 2, 2);
        MfSequence seq;
        seq = step_extend(seq, {}, {}, {}, {0}, cfg);
        cfg.seed += 17;
        seq = step_extend(seq, {}, {}, {}, {0, 1}, cfg);
        // re-verify the last step against the chain it refined
        std::vector<Multiforcing> chain(seq.terms.begin(), seq.terms.end() - 1);
        Multiforcing input = clopenize(extend_domain(cw_union_seq(chain), {0, 1}));
        Report rep = verify_dj(input, seq.terms.back(), seq.certs.back().trace, cfg.depth,
                               gen_pool(input), chain);
        for (const auto& c : rep.clauses)
            o.require(c.holds, "chained run " + std::to_string(run) + " clause " + c.id);
    }
    return o;
}

// ---- 5: sealing open dense sets --------------------------------------------
Outcome c5_seal() {
    Outcome o;
    Rng rng(1005);
    for (std::uint64_t run = 0; run < 50 && o.pass; ++run) {
        Multiforcing pi = random_multiforcing(rng, {0, 1}, 3, 1, true);
        RunConfig cfg = engine_cfg(run, 6, 2, 2);
        std::vector<MultitreeSetPtr> pool = {random_open_dense(rng, pi, cfg.depth),
                                             random_open_dense(rng, pi, cfg.depth)};
        TaskList tasks = mandatory_tasks(pi, {}, pool, {}, gen_pool(pi), cfg);
        auto [rho, trace] = generic_refine(pi, tasks, cfg);
        for (const auto& D : pool) {
            Report rep = verify_uu4(pi, *D, rho, trace, cfg.depth);
            for (const auto& c : rep.clauses)
                o.require(c.holds, "run " + std::to_string(run) + " " + D->id() + " " + c.id);
        }
    }
    return o;
}

// ---- 6: sealing names ------------------------------------------------------
Outcome c6_names() {
    Outcome o;
    Rng rng(1006);
    for (std::uint64_t run = 0; run < 50 && o.pass; ++run) {
        Multiforcing pi = random_multiforcing(rng, {0, 1}, 3, 1, true);
        RunConfig cfg = engine_cfg(run, 6, 2, 2);
        std::vector<RealName> names = {principal_name(0, 3), flipped_principal_name(1, 3)};
        for (const auto& c : names)
            o.require(is_complete(c, pi, cfg.depth), "input name not complete");
        TaskList tasks = mandatory_tasks(pi, names, {}, {}, gen_pool(pi), cfg);
        auto [rho, trace] = generic_refine(pi, tasks, cfg);
        Multiforcing uni = clopenize(cw_union(pi, rho));
        for (const auto& c : names) {
            RefinementVerdict v = name_sealed(pi, c, rho, cfg.depth, trace.seal_witnesses);
            o.require(v.holds, "run " + std::to_string(run) + " name not sealed" +
                                   (v.failures.empty() ? "" : ": " + v.failures[0].clause));
            o.require(is_complete(c, uni, cfg.depth), "completeness lost in the union");
        }
    }
    return o;
}

// ---- 7: avoidance end to end -----------------------------------------------
Outcome c7_avoid() {
    Outcome o;
    Rng rng(1007);
    for (std::uint64_t run = 0; run < 30 && o.pass; ++run) {
        Multiforcing pi;
        pi.comp.emplace(0, cohen(1));
        pi.comp.emplace(1, random_special_forcing(rng, 1, 2));
        RunConfig cfg = engine_cfg(run, 6, 2, 2);
        RealName c = flipped_principal_name(0, cfg.depth);
        o.require(is_nonprincipal(c, pi, 0, cfg.depth), "name unexpectedly principal");
        TaskList tasks = mandatory_tasks(pi, {}, {}, {{c, 0}}, gen_pool(pi), cfg);
        auto [rho, trace] = generic_refine(pi, tasks, cfg);
        Report rep = verify_avoidance(pi, c, 0, rho, trace, cfg.depth);
        for (const auto& cl : rep.clauses)
            o.require(cl.holds, "run " + std::to_string(run) + " " + cl.id);
        if (!o.pass) break;

        Multiforcing uni = clopenize(cw_union(pi, rho));
        const auto& gens = rho.at(0).generators;
        for (std::uint64_t fs = 0; fs < 10; ++fs) {
            // the avoidance sets are met first, while the condition is fat;
            // the value decisions follow in a seeded order
            std::vector<MultitreeSetPtr> dense;
            for (std::uint32_t K = 0; K < gens.size(); ++K)
                dense.push_back(avoid_dense_set(c, uni, 0, gens[K],
                                                "favoid:k" + std::to_string(K)));
            std::vector<MultitreeSetPtr> decides;
            for (std::uint32_t n = 0; n < c.horizon; ++n)
                decides.push_back(decides_set(c, uni, n, cfg.depth));
            Rng frng(fs);
            std::shuffle(decides.begin(), decides.end(), frng);
            dense.insert(dense.end(), decides.begin(), decides.end());
            FiniteFilter G = build_filter(uni, dense, fs, 1u << 16, false, false);
            auto bits = eval_name(c, G);
            std::uint32_t len = 0;
            while (len < bits.size() && bits[len]) ++len;
            o.require(len > 0, "no evaluated prefix");
            BitString prefix;
            for (std::uint32_t i = 0; i < len; ++i) prefix = prefix.append(*bits[i]);
            for (const auto& Q : gens) {
                bool escapes = false;
                for (std::uint32_t l = 1; l <= len && !escapes; ++l)
                    escapes = !Q.projection().contains(prefix.prefix(l));
                o.require(escapes, "evaluated prefix stayed inside a new tree");
            }
        }
    }
    return o;
}

// ---- 8: principality boundary ----------------------------------------------
Outcome c8_principal() {
    Outcome o;
    Rng rng(1008);
    for (int it = 0; it < 100; ++it) {
        Multiforcing pi = random_multiforcing(rng, {0, 1}, 2, 1, true);
        pi.comp.at(0) = cohen(1);  // independent Cohen components at 0 and 1
        pi.comp.at(1) = cohen(1);
        RealName c = principal_name(0, 3);
        o.require(!is_nonprincipal(c, pi, 0, 4), "principal name passed at its own index");
        o.require(is_nonprincipal(c, pi, 1, 4), "principal name failed at a fresh index");
    }
    return o;
}

// ---- 9: ablation necessity -------------------------------------------------
Outcome c9_ablation() {
    Outcome o;
    for (const std::string family : {"split", "adpairs"}) {
        bool any_failure = false;
        Rng rng(1009);
        for (std::uint64_t run = 0; run < 20 && !any_failure; ++run) {
            Multiforcing pi = random_multiforcing(rng, {0, 1}, 3, 2, false);
            RunConfig cfg = engine_cfg(run, 6, 2, 2);
            apply_ablation(cfg, family);
            TaskList tasks = mandatory_tasks(pi, {}, {}, {}, gen_pool(pi), cfg);
            auto [rho, trace] = generic_refine(pi, tasks, cfg);
            Report rep = verify_dj(pi, rho, trace, cfg.depth, gen_pool(pi));
            any_failure = !rep.all_hold();
        }
        o.require(any_failure, "ablating " + family + " left every run green");
    }
    return o;
}

// ---- 10: permutation invariance ----------------------------------------------
std::vector<SealWitness> permute_witnesses(const Permutation& h,
                                           const std::vector<SealWitness>& ws) {
    std::vector<SealWitness> out;
    for (const auto& w : ws) {
        SealWitness pw;
        pw.set_id = w.set_id;
        pw.p = perm_apply(h, w.p);
        for (const auto& [xi, k] : w.shape.k_of) pw.shape.k_of[h.apply(xi)] = k;
        pw.level = w.level;
        pw.q = perm_apply(h, w.q);
        out.push_back(pw);
    }
    return out;
}

Outcome c10_perm() {
    Outcome o;
    Rng rng(1010);

    // a few engine runs for the relation-level invariances
    for (std::uint64_t run = 0; run < 5; ++run) {
        Multiforcing pi = random_multiforcing(rng, {0, 1}, 2, 1, true);
        RunConfig cfg = engine_cfg(run, 6, 2, 2);
        Multitree pivot = random_family_member(rng, pi);
        MultitreeSetPtr D = std::make_shared<BelowOrSadSet>("dpivot", pi, pivot);
        TaskList tasks = mandatory_tasks(pi, {}, {D}, {}, gen_pool(pi), cfg);
        auto [rho, trace] = generic_refine(pi, tasks, cfg);
        Permutation h({{0, 3}, {1, 5}});
        Multiforcing hpi = perm_apply(h, pi);
        Multiforcing hrho = perm_apply(h, rho);
        o.require(mrefines(pi, rho, cfg.depth).holds == mrefines(hpi, hrho, cfg.depth).holds,
                  "refinement not invariant");
        MultitreeSetPtr hD =
            std::make_shared<BelowOrSadSet>("dpivot", hpi, perm_apply(h, pivot));
        bool s1 = mseals(pi, *D, rho, cfg.depth, trace.seal_witnesses).holds;
        bool s2 = mseals(hpi, *hD, hrho, cfg.depth,
                         permute_witnesses(h, trace.seal_witnesses))
                      .holds;
        o.require(s1 == s2, "sealing not invariant");
    }

    for (int it = 0; it < 300; ++it) {
        Index a = static_cast<Index>(pick(rng, 3));
        Index b = static_cast<Index>(3 + pick(rng, 3));
        Permutation h(std::vector<std::pair<Index, Index>>{{a, b}});
        // involution
        for (Index xi = 0; xi < 8; ++xi)
            o.require(h.apply(h.apply(xi)) == xi, "not an involution");

        Multiforcing pi = random_multiforcing(rng, {0, 1, 2}, 2, 2, false);
        Multitree p = random_family_member(rng, pi);
        Multitree q = random_family_member(rng, pi);
        o.require(mleq(p, q) == mleq(perm_apply(h, p), perm_apply(h, q)), "order not invariant");
        o.require(sad(p, q) == sad(perm_apply(h, p), perm_apply(h, q)), "sad not invariant");
        o.require(mt_member(pi, p, 4) == mt_member(perm_apply(h, pi), perm_apply(h, p), 4),
                  "membership not invariant");

        RealName c = principal_name(static_cast<Index>(pick(rng, 3)), 2);
        RealName hc = perm_apply(h, c);
        o.require(is_real_name(hc), "permuted name invalid");
        o.require(is_complete(c, pi, 4) == is_complete(hc, perm_apply(h, pi), 4),
                  "completeness not invariant");
        Index xi = static_cast<Index>(pick(rng, 3));
        o.require(is_nonprincipal(c, pi, xi, 4) ==
                      is_nonprincipal(hc, perm_apply(h, pi), h.apply(xi), 4),
                  "principality not invariant");
    }
    return o;
}

// ---- 11: the membership criterion --------------------------------------------
Outcome c11_xik3() {
    Outcome o;
    for (std::uint64_t run = 0; run < 20 && o.pass; ++run) {
        RunConfig cfg = engine_cfg(3000 + run, 6, 2, 2);
        MfSequence seq;
        seq = step_extend(seq, {}, {}, {}, {0}, cfg);
        cfg.seed += 5;
        seq = step_extend(seq, {}, {}, {}, {0, 1}, cfg);
        cfg.seed += 7;
        seq = step_extend(seq, {}, {}, {}, {0, 1}, cfg);

        Multiforcing uni = clopenize(cw_union_seq(seq.terms));
        std::vector<MultitreeSetPtr> dense;
        for (std::size_t i = 0; i < seq.terms.size(); ++i)
            dense.push_back(std::make_shared<LayerConeSet>("layer" + std::to_string(i),
                                                           seq.terms[i].at(0), 0, cfg.depth));
        FiniteFilter G = build_filter(uni, dense, run, 1u << 16, false);
        BitString through = extract_real(G, 0, 4);
        o.require(check_xik3(seq, 0, through), "through real failed the criterion");

        BitString escaping = build_escaping_real(seq, seq.terms.size() - 1, 0, cfg.depth);
        o.require(!check_xik3(seq, 0, escaping), "escaping real passed the criterion");
    }
    return o;
}

// ---- 12: determinism and round trips -----------------------------------------
Outcome c12_determinism() {
    Outcome o;
    {
        Multiforcing pi;
        pi.comp.emplace(0, cohen(1));
        pi.comp.emplace(1, cohen(1));
        RunConfig cfg = engine_cfg(42, 6, 2, 2);
        TaskList t1 = mandatory_tasks(pi, {principal_name(0, 2)}, {}, {}, gen_pool(pi), cfg);
        auto [r1, tr1] = generic_refine(pi, t1, cfg);
        TaskList t2 = mandatory_tasks(pi, {principal_name(0, 2)}, {}, {}, gen_pool(pi), cfg);
        auto [r2, tr2] = generic_refine(pi, t2, cfg);
        o.require(to_json(r1).dump() == to_json(r2).dump(), "refinement bytes differ");
        o.require(to_json(tr1).dump() == to_json(tr2).dump(), "trace bytes differ");
    }
    Rng rng(1012);
    for (int it = 0; it < 1000; ++it) {
        BitString s = random_bitstring(rng, pick(rng, 8));
        o.require(bitstring_from_json(to_json(s)) == s, "bitstring round trip");
        ClopenTree t = random_clopen(rng, 3);
        o.require(clopen_from_json(to_json(t)) == t, "clopen round trip");
        ArborealForcing P = random_clopen_forcing(rng, 3, 2);
        o.require(forcing_from_json(to_json(P)) == P, "forcing round trip");
        Multiforcing pi = random_multiforcing(rng, {0, 2}, 2, 2, false);
        o.require(multiforcing_from_json(to_json(pi)) == pi, "multiforcing round trip");
        Multitree p = random_family_member(rng, pi);
        o.require(multitree_from_json(to_json(p)) == p, "multitree round trip");
        RealName c = principal_name(static_cast<Index>(pick(rng, 4)), 1 + pick(rng, 3));
        o.require(name_from_json(to_json(c)) == c, "name round trip");
        Permutation h({{static_cast<Index>(pick(rng, 3)), static_cast<Index>(3 + pick(rng, 3))}});
        o.require(permutation_from_json(to_json(h)) == h, "permutation round trip");
    }
    {
        RunConfig cfg = engine_cfg(7, 5, 2, 2);
        MfSequence a = step_extend({}, {}, {}, {}, {0}, cfg);
        MfSequence b = step_extend({}, {}, {}, {}, {0}, cfg);
        o.require(to_json(a).dump() == to_json(b).dump(), "sequence bytes differ");
        MfSequence c = sequence_from_json(to_json(a));
        o.require(c.terms == a.terms, "sequence round trip");
    }
    return o;
}

}  // namespace

int main(int argc, char** argv) {
    struct Criterion {
        int id;
        const char* name;
        std::function<Outcome()> run;
    };
    std::vector<Criterion> table = {
        {1, "fusion-soundness", c1_fusion},
        {2, "regular-compatibility", c2_compat},
        {3, "surgery-lemmas", c3_surgery},
        {4, "refinement-theorem", c4_dj},
        {5, "sealing-dense-sets", c5_seal},
        {6, "sealing-names", c6_names},
        {7, "avoidance-end-to-end", c7_avoid},
        {8, "principality-boundary", c8_principal},
        {9, "ablation-necessity", c9_ablation},
        {10, "permutation-invariance", c10_perm},
        {11, "membership-criterion", c11_xik3},
        {12, "determinism-roundtrip", c12_determinism},
    };

    int only = argc > 1 ? std::atoi(argv[1]) : 0;
    bool all_pass = true;
    for (const auto& c : table) {
        if (only && c.id != only) continue;
        auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o.fail(std::string("exception: ") + e.what());
        }
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::printf("%s %2d %-24s %7.2fs%s%s\n", o.pass ? "PASS" : "FAIL", c.id, c.name, secs,
                    o.note.empty() ? "" : "  -- ", o.note.c_str());
        std::fflush(stdout);
        all_pass &= o.pass;
    }
    return all_pass ? 0 : 1;
}
