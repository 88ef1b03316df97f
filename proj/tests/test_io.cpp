#include <doctest.h>

#include <cstdio>

#include "helpers.hpp"
#include "ptf/errors.hpp"
#include "ptf/json_io.hpp"

using namespace ptf;
using namespace ptf::testing;

namespace {
RunConfig small_cfg(std::uint64_t seed) {
    RunConfig cfg;
    cfg.seed = seed;
    cfg.depth = 5;
    cfg.kmax = 2;
    cfg.split_budget = 2;
    return cfg;
}
}  // namespace

TEST_CASE("round trips on random values of every type") {
    Rng rng(91);
    for (int it = 0; it < 200; ++it) {
        BitString s = random_bitstring(rng, pick(rng, 8));
        CHECK(bitstring_from_json(to_json(s)) == s);

        ClopenTree t = random_clopen(rng, 3);
        CHECK(clopen_from_json(to_json(t)) == t);

        ArborealForcing P = random_clopen_forcing(rng, 3, 2);
        CHECK(forcing_from_json(to_json(P)) == P);

        Multiforcing pi = random_multiforcing(rng, {0, 3}, 2, 2, false);
        CHECK(multiforcing_from_json(to_json(pi)) == pi);

        Multitree p = random_family_member(rng, pi);
        CHECK(multitree_from_json(to_json(p)) == p);

        RealName c = principal_name(static_cast<Index>(pick(rng, 3)), 3);
        CHECK(name_from_json(to_json(c)) == c);

        Permutation h({{0, static_cast<Index>(1 + pick(rng, 5))}});
        CHECK(permutation_from_json(to_json(h)) == h);
    }
}

TEST_CASE("fusion trees, systems, traces, sequences, filters round trip") {
    RunConfig cfg = small_cfg(3);
    MfSequence seq;
    seq = step_extend(seq, {}, {}, {}, {0}, cfg);

    const Tree& g = seq.terms[1].at(0).generators[0];
    REQUIRE(g.is_fusion());
    CHECK(fusion_from_json(to_json(g.fusion())) == g.fusion());
    CHECK(tree_from_json(to_json(g)) == g);

    const RefinementTrace& tr = seq.certs[1].trace;
    CHECK(system_from_json(to_json(tr.steps[2].second)) == tr.steps[2].second);

    RefinementTrace tr2 = trace_from_json(to_json(tr));
    CHECK(tr2.steps == tr.steps);
    CHECK(tr2.task_at_step == tr.task_at_step);
    CHECK(tr2.j_of == tr.j_of);
    CHECK(tr2.escape_holes == tr.escape_holes);
    CHECK(tr2.config == tr.config);
    REQUIRE(tr2.seal_witnesses.size() == tr.seal_witnesses.size());
    for (std::size_t i = 0; i < tr2.seal_witnesses.size(); ++i) {
        CHECK(tr2.seal_witnesses[i].set_id == tr.seal_witnesses[i].set_id);
        CHECK(tr2.seal_witnesses[i].p == tr.seal_witnesses[i].p);
        CHECK(tr2.seal_witnesses[i].shape == tr.seal_witnesses[i].shape);
        CHECK(tr2.seal_witnesses[i].level == tr.seal_witnesses[i].level);
        CHECK(tr2.seal_witnesses[i].q == tr.seal_witnesses[i].q);
    }

    MfSequence seq2 = sequence_from_json(to_json(seq));
    CHECK(seq2.terms == seq.terms);
    CHECK(seq2.certs.size() == seq.certs.size());

    Multiforcing uni = clopenize(cw_union_seq(seq.terms));
    RealName c = principal_name(0, 3);
    std::vector<MultitreeSetPtr> dense;
    for (std::uint32_t n = 0; n < 3; ++n) dense.push_back(decides_set(c, uni, n, cfg.depth));
    FiniteFilter G = build_filter(uni, dense, 5);
    FiniteFilter G2 = filter_from_json(to_json(G));
    CHECK(G2.chain == G.chain);
    CHECK(G2.met == G.met);
}

TEST_CASE("dense specifications construct working sets") {
    Multiforcing pi;
    pi.comp.emplace(0, cohen(1));
    RunConfig cfg = small_cfg(0);

    Json pivot = Json{{"kind", "below_or_sad"}, {"pivot", to_json(Multitree{})}};
    auto D1 = dense_set_from_json(pivot, pi, cfg);
    CHECK(dense_over_family(*D1, pi));

    Json cone = Json{{"kind", "namecone"}, {"name", to_json(principal_name(0, 2))}, {"n", 1}};
    auto D2 = dense_set_from_json(cone, pi, cfg);
    CHECK(dense_over_family(*D2, pi));

    Json inter = Json{{"kind", "intersection"}, {"parts", Json::array({pivot, cone})}};
    auto D3 = dense_set_from_json(inter, pi, cfg);
    CHECK(dense_over_family(*D3, pi));

    CHECK_THROWS_AS(dense_set_from_json(Json{{"kind", "nope"}}, pi, cfg), ParseError);
}

TEST_CASE("file output is atomic and reloadable; reruns are byte identical") {
    RunConfig cfg = small_cfg(9);
    Multiforcing pi;
    pi.comp.emplace(0, cohen(1));
    std::map<Index, std::vector<std::vector<Tree>>> pool;
    pool[0].push_back(pi.at(0).generators);

    TaskList t1 = mandatory_tasks(pi, {}, {}, {}, pool, cfg);
    auto [r1, tr1] = generic_refine(pi, t1, cfg);
    TaskList t2 = mandatory_tasks(pi, {}, {}, {}, pool, cfg);
    auto [r2, tr2] = generic_refine(pi, t2, cfg);

    std::string a = to_json(r1).dump();
    std::string b = to_json(r2).dump();
    CHECK(a == b);
    CHECK(to_json(tr1).dump() == to_json(tr2).dump());

    const char* path = "io_test_out.json";
    save_json_file(path, to_json(r1));
    Json loaded = load_json_file(path);
    CHECK(multiforcing_from_json(loaded) == r1);
    std::remove(path);

    CHECK_THROWS_AS(load_json_file("does_not_exist.json"), Error);
}
