#include <doctest.h>

#include "helpers.hpp"
#include "ptf/errors.hpp"
#include "ptf/extlab.hpp"

using namespace ptf;
using namespace ptf::testing;

namespace {
BitString bs(const char* s) { return BitString::parse(s); }

RunConfig small_cfg(std::uint64_t seed) {
    RunConfig cfg;
    cfg.seed = seed;
    cfg.depth = 6;
    cfg.kmax = 2;
    cfg.split_budget = 2;
    return cfg;
}

MfSequence three_steps(std::uint64_t seed) {
    MfSequence seq;
    RunConfig cfg = small_cfg(seed);
    seq = step_extend(seq, {}, {}, {}, {0}, cfg);
    cfg.seed += 1;
    seq = step_extend(seq, {}, {}, {}, {0, 1}, cfg);
    cfg.seed += 2;
    seq = step_extend(seq, {}, {}, {}, {0, 1}, cfg);
    return seq;
}
}  // namespace

TEST_CASE("extend_domain") {
    Multiforcing pi;
    pi.comp.emplace(0, cohen(1));
    CHECK(extend_domain(pi, {0}) == pi);
    Multiforcing padded = extend_domain(pi, {0, 7});
    CHECK(padded.has(7));
    CHECK(padded.at(7) == cohen(1));
    Multitree p;
    p.comp.emplace(7, Tree(ClopenTree::cone(bs("0"))));
    CHECK(mt_member(padded, p, 4));
    CHECK_THROWS_AS(extend_domain(padded, {7}), DomainNotSuperset);
}

TEST_CASE("step_extend grows a valid increasing sequence") {
    MfSequence seq = three_steps(11);
    REQUIRE(seq.terms.size() == 4);  // seed term + three refinements
    CHECK(seq.terms[1].has(0));
    CHECK(seq.terms[2].has(1));
    CHECK(sequence_valid(seq, 6));
    CHECK(seq.certs[1].crucial);

    // the tail layers stay dense in the union: below every family condition
    // of the whole union there is a member built from the last layer
    Multiforcing uni = clopenize(cw_union_seq(seq.terms));
    const Multiforcing& last = seq.terms.back();
    for (const auto& p : generating_family(uni)) {
        bool ok = true;
        for (const auto& [xi, t] : p.comp) {
            if (!member_below(last.at(xi), t, 6)) ok = false;
        }
        CHECK(ok);
    }
}

TEST_CASE("telescoping: a set sealed at one step stays pre-dense in the union") {
    Rng rng(71);
    Multiforcing pi;
    pi.comp.emplace(0, random_special_forcing(rng, 1, 2));
    MfSequence seq;
    RunConfig cfg = small_cfg(13);
    seq.terms.push_back(pi);
    seq.certs.push_back({});
    auto D = random_open_dense(rng, pi, cfg.depth);
    seq = step_extend(seq, {}, {D}, {}, {0}, cfg);

    Multiforcing uni = clopenize(cw_union_seq(seq.terms));
    for (const auto& p : generating_family(uni)) {
        auto w = D->refine_into(p);
        REQUIRE(w);
        CHECK(mleq(*w, p));
        CHECK(D->member(*w));
    }
}

TEST_CASE("build_filter and evaluation") {
    Multiforcing pi;
    pi.comp.emplace(0, cohen(1));

    FiniteFilter trivial = build_filter(pi, {}, 0);
    REQUIRE(trivial.chain.size() == 1);
    CHECK(trivial.chain[0] == Multitree{});

    RealName c = principal_name(0, 3);
    std::vector<MultitreeSetPtr> dense;
    for (std::uint32_t n = 0; n < 3; ++n) dense.push_back(decides_set(c, pi, n, 6));
    FiniteFilter G = build_filter(pi, dense, 7);
    CHECK(G.met.size() == 3);
    auto bits = eval_name(c, G);
    for (std::uint32_t n = 0; n < 3; ++n) CHECK(bits[n].has_value());

    // the filter decides three bits of the principal real, and the name
    // evaluation agrees with the extracted real
    BitString x = extract_real(G, 0, 3);
    for (std::uint32_t n = 0; n < 3; ++n) CHECK(*bits[n] == x.bit(n));

    // a name with empty horizon evaluates to the empty prefix
    RealName empty;
    CHECK(eval_name(empty, G).empty());
}

TEST_CASE("eval against a filter fixing a cone") {
    Multiforcing pi;
    pi.comp.emplace(0, cohen(3));
    RealName c = principal_name(0, 3);
    FiniteFilter G;
    G.chain.push_back(Multitree{});
    Multitree q;
    q.comp.emplace(0, Tree(ClopenTree::cone(bs("011"))));
    G.chain.push_back(q);
    auto bits = eval_name(c, G);
    REQUIRE(bits.size() == 3);
    CHECK(*bits[0] == 0);
    CHECK(*bits[1] == 1);
    CHECK(*bits[2] == 1);
    CHECK(extract_real(G, 0, 3) == bs("011"));
    CHECK_THROWS_AS(extract_real(G, 0, 4), NotDecided);

    FiniteFilter empty;
    empty.chain.push_back(Multitree{});
    for (const auto& b : eval_name(c, empty)) CHECK(!b.has_value());
}

TEST_CASE("eval and extract agree on seeded filters") {
    Multiforcing pi;
    pi.comp.emplace(0, cohen(1));
    pi.comp.emplace(1, cohen(1));
    RealName c = principal_name(1, 3);
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        std::vector<MultitreeSetPtr> dense;
        for (std::uint32_t n = 0; n < 3; ++n) dense.push_back(decides_set(c, pi, n, 6));
        FiniteFilter G = build_filter(pi, dense, seed);
        auto bits = eval_name(c, G);
        BitString x = extract_real(G, 1, 3);
        for (std::uint32_t n = 0; n < 3; ++n) {
            REQUIRE(bits[n].has_value());
            CHECK(*bits[n] == x.bit(n));
        }
    }
}

TEST_CASE("xik3 criterion: through reals pass, escaping reals fail") {
    MfSequence seq = three_steps(17);
    Multiforcing uni = clopenize(cw_union_seq(seq.terms));

    // single-term slice: any branch prefix of any generator passes
    {
        MfSequence one;
        one.terms.push_back(seq.terms[0]);
        one.certs.push_back({});
        const auto& g = seq.terms[0].at(0).generators[0];
        BitString x = g.projection().stems().empty() ? bs("") : g.projection().stems()[0];
        CHECK(check_xik3(one, 0, x));
    }

    // a through-filter: meet the layer cones of every term at xi = 0
    std::vector<MultitreeSetPtr> dense;
    int id = 0;
    for (const auto& term : seq.terms)
        dense.push_back(std::make_shared<LayerConeSet>("layer" + std::to_string(id++),
                                                       term.at(0), 0, 6));
    FiniteFilter G = build_filter(uni, dense, 23);
    BitString x = extract_real(G, 0, 4);
    CHECK(check_xik3(seq, 0, x));

    // a real built to escape one layer fails the criterion
    BitString y = build_escaping_real(seq, 2, 0, 6);
    CHECK(!check_xik3(seq, 0, y));
}

TEST_CASE("permutations act and invert") {
    Permutation id;
    Permutation h({{0, 1}, {2, 5}});
    CHECK(h.involution());
    CHECK(h.apply(0) == 1);
    CHECK(h.apply(1) == 0);
    CHECK(h.apply(3) == 3);
    CHECK(h.nid().size() == 4);

    Multiforcing pi;
    pi.comp.emplace(0, cohen(1));
    pi.comp.emplace(2, cohen(2));
    CHECK(perm_apply(id, pi) == pi);
    CHECK(perm_apply(h, perm_apply(h, pi)) == pi);

    Multitree p;
    p.comp.emplace(0, Tree(ClopenTree::cone(bs("01"))));
    CHECK(perm_apply(h, perm_apply(h, p)) == p);

    // membership, order, compatibility commute with the action
    Rng rng(83);
    for (int it = 0; it < 50; ++it) {
        Multitree a = random_family_member(rng, pi);
        Multitree b = random_family_member(rng, pi);
        CHECK(mt_member(pi, a, 4) == mt_member(perm_apply(h, pi), perm_apply(h, a), 4));
        CHECK(mleq(a, b) == mleq(perm_apply(h, a), perm_apply(h, b)));
        CHECK(sad(a, b) == sad(perm_apply(h, a), perm_apply(h, b)));
    }

    RealName c = principal_name(0, 3);
    RealName hc = perm_apply(h, c);
    CHECK(is_real_name(hc));
    CHECK(perm_apply(h, hc) == c);
    CHECK(is_complete(c, pi, 4) == is_complete(hc, perm_apply(h, pi), 4));
    CHECK(is_nonprincipal(c, pi, 2, 4) ==
          is_nonprincipal(hc, perm_apply(h, pi), h.apply(2), 4));
}

TEST_CASE("refinement commutes with permutations") {
    Multiforcing pi;
    pi.comp.emplace(0, cohen(1));
    RunConfig cfg = small_cfg(3);
    MfSequence seq;
    seq = step_extend(seq, {}, {}, {}, {0}, cfg);
    const Multiforcing& rho = seq.terms[1];
    Permutation h({{0, 4}});
    RefinementVerdict v = mrefines(seq.terms[0], rho, cfg.depth);
    RefinementVerdict hv = mrefines(perm_apply(h, seq.terms[0]), perm_apply(h, rho), cfg.depth);
    CHECK(v.holds == hv.holds);
}
