#include <doctest.h>

#include "helpers.hpp"
#include "ptf/arboreal.hpp"
#include "ptf/errors.hpp"

using namespace ptf;
using namespace ptf::testing;

namespace {
BitString bs(const char* s) { return BitString::parse(s); }
ClopenTree ct(std::uint32_t depth, std::initializer_list<const char*> stems) {
    std::vector<BitString> v;
    for (const char* s : stems) v.push_back(bs(s));
    return ClopenTree(depth, v);
}
ArborealForcing forcing(std::initializer_list<ClopenTree> gens) {
    ArborealForcing P;
    for (const auto& g : gens) P.generators.emplace_back(g);
    P.canonicalize();
    return P;
}
}  // namespace

TEST_CASE("cohen forcing") {
    ArborealForcing P = cohen(2);
    auto has = [&](const ClopenTree& t) {
        for (const auto& g : P.generators)
            if (g == Tree(t)) return true;
        return false;
    };
    CHECK(has(ClopenTree::full()));
    CHECK(has(ClopenTree::cone(bs("0"))));
    CHECK(has(ClopenTree::cone(bs("1"))));
    CHECK(is_regular(P, 4));
    auto antichain = is_special(P, 4);
    REQUIRE(antichain);
    REQUIRE(antichain->size() == 1);
    CHECK((*antichain)[0] == Tree(ClopenTree::full()));
}

TEST_CASE("clg membership") {
    ArborealForcing P = cohen(2);
    CHECK(clg_member(P, ct(2, {"00", "11"})));
    Rng rng(13);
    for (int it = 0; it < 20; ++it) {
        ClopenTree T = random_clopen(rng, 2);
        CHECK(clg_member(P, T));  // anything clopen is a finite union of cones
    }
    ArborealForcing zero = forcing({ClopenTree::cone(bs("0"))});
    CHECK(!clg_member(zero, ClopenTree::full()));  // the 1-branch is uncovered
    CHECK(clg_member(zero, ClopenTree::cone(bs("01"))));

    // decomposition pieces are members and partition the branches
    for (int it = 0; it < 30; ++it) {
        ClopenTree T = random_clopen(rng, 3);
        auto dec = clg_decompose(cohen(3), T);
        REQUIRE(dec);
        std::set<std::string> covered;
        for (const auto& m : *dec) {
            CHECK(m.subset_of(T));
            for (const auto& s : oracle_slice(m, 5)) covered.insert(s);
        }
        CHECK(covered == oracle_slice(T, 5));
    }
}

TEST_CASE("is_special examples") {
    ArborealForcing two = forcing({ClopenTree::cone(bs("00")), ClopenTree::cone(bs("01"))});
    auto a = is_special(two, 4);
    REQUIRE(a);
    CHECK(a->size() == 2);

    // the maximal element regenerates the smaller one
    ArborealForcing nested = forcing({ClopenTree::full(), ClopenTree::cone(bs("0"))});
    auto b = is_special(nested, 4);
    REQUIRE(b);
    REQUIRE(b->size() == 1);
    CHECK((*b)[0] == Tree(ClopenTree::full()));

    // overlapping but incomparable generators: no antichain generates both
    ArborealForcing bad = forcing({ct(2, {"00", "01", "10"}), ct(2, {"01", "10", "11"})});
    CHECK(!is_special(bad, 4));
}

TEST_CASE("regularity of clopen forcings") {
    Rng rng(41);
    for (int it = 0; it < 50; ++it) {
        ArborealForcing P = random_clopen_forcing(rng, 4, 3);
        CHECK(is_regular(P, 4));  // clopen branch sets are clopen in each other
    }
}

TEST_CASE("refines: self-refinement fails fm4") {
    ArborealForcing P = cohen(1);
    RefinementVerdict v = refines(P, P, 3);
    CHECK(!v.holds);
    bool fm4 = false;
    for (const auto& f : v.failures) fm4 |= f.clause == "fm4";
    CHECK(fm4);
}

TEST_CASE("refines: equal tree in both forcings fails fm4") {
    ArborealForcing P = forcing({ClopenTree::full(), ClopenTree::cone(bs("0"))});
    ArborealForcing Q = forcing({ClopenTree::cone(bs("0"))});
    RefinementVerdict v = refines(P, Q, 3);
    CHECK(!v.holds);
}

TEST_CASE("seals: empty set fails, generator set matches fm3") {
    ArborealForcing P = cohen(1);
    RefinementVerdict v = seals(P, {}, P, 3);
    CHECK(!v.holds);
    // with D = the generators, the extra clause equals fm3 on every generator
    RefinementVerdict w = seals(P, P.generators, P, 3);
    bool seal_failure = false;
    for (const auto& f : w.failures) seal_failure |= f.clause == "seal";
    CHECK(!seal_failure);
}

TEST_CASE("compat_witness examples and clg oracle") {
    ArborealForcing P = cohen(3);
    auto w = compat_witness(P, Tree(ClopenTree::cone(bs("0"))), Tree(ClopenTree::cone(bs("01"))));
    REQUIRE(w);
    CHECK(*w == ClopenTree::cone(bs("01")));
    CHECK(!compat_witness(P, Tree(ClopenTree::cone(bs("0"))), Tree(ClopenTree::cone(bs("1")))));

    Rng rng(43);
    for (int it = 0; it < 60; ++it) {
        ArborealForcing R = random_clopen_forcing(rng, 4, 3);
        for (const auto& S : R.generators)
            for (const auto& T : R.generators) {
                if (almost_disjoint(S, T)) continue;
                auto c = compat_witness(R, S, T);
                REQUIRE(c);
                // independent oracle: the witness's branches are exactly the
                // common branches, and the witness decomposes into members
                auto ws = oracle_slice(*c, 4);
                std::set<std::string> both;
                for (const auto& s : oracle_slice(S.projection(), 4))
                    if (oracle_slice(T.projection(), 4).count(s)) both.insert(s);
                CHECK(ws == both);
                CHECK(clg_member(R, *c));
            }
    }
}

TEST_CASE("sqf_cover examples") {
    std::vector<Tree> cones = {Tree(ClopenTree::cone(bs("0"))), Tree(ClopenTree::cone(bs("1")))};
    auto c = sqf_cover(Tree(ClopenTree::full()), cones, 3);
    REQUIRE(c);
    CHECK(c->size() == 2);

    std::vector<Tree> self = {Tree(ct(2, {"00", "11"}))};
    auto d = sqf_cover(self[0], self, 3);
    REQUIRE(d);
    CHECK(d->size() == 1);

    std::vector<Tree> three = {Tree(ClopenTree::cone(bs("00"))), Tree(ClopenTree::cone(bs("01"))),
                               Tree(ClopenTree::cone(bs("1")))};
    auto e = sqf_cover(Tree(ClopenTree::full()), three, 3);
    REQUIRE(e);
    CHECK(e->size() == 3);

    CHECK(!sqf_cover(Tree(ClopenTree::full()), {Tree(ClopenTree::cone(bs("0")))}, 3));

    // soundness on random inputs: the returned cover really covers
    Rng rng(47);
    for (int it = 0; it < 50; ++it) {
        ClopenTree T = random_clopen(rng, 3);
        std::vector<Tree> D;
        for (int i = 0; i < 5; ++i) D.emplace_back(random_clopen(rng, 3));
        auto cover = sqf_cover(Tree(T), D, 4);
        if (!cover) continue;
        std::set<std::string> covered;
        for (const auto& S : *cover)
            for (const auto& s : oracle_slice(S.projection(), 5)) covered.insert(s);
        for (const auto& s : oracle_slice(T, 5)) CHECK(covered.count(s));
    }
}

TEST_CASE("full-cone detection") {
    CHECK(has_full_cone_at(ClopenTree::full(), 3));
    CHECK(has_full_cone_at(ct(2, {"00", "11"}), 2));
    CHECK(!has_full_cone_at(ct(2, {"00", "11"}), 1));
    CHECK(!has_full_cone_at(ct(3, {"000", "010", "100", "110"}), 2));
    CHECK(has_full_cone_at(ct(3, {"000", "001", "100"}), 2));
}
