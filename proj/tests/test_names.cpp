#include <doctest.h>

#include "helpers.hpp"
#include "ptf/errors.hpp"
#include "ptf/names.hpp"

using namespace ptf;
using namespace ptf::testing;

namespace {
BitString bs(const char* s) { return BitString::parse(s); }
Multitree mt1(Index xi, const ClopenTree& t) {
    Multitree p;
    p.comp.emplace(xi, Tree(t));
    return p;
}
Multiforcing two_cohen() {
    Multiforcing pi;
    pi.comp.emplace(0, cohen(1));
    pi.comp.emplace(1, cohen(1));
    return pi;
}
}  // namespace

TEST_CASE("real-name invariant") {
    RealName empty;
    CHECK(is_real_name(empty));

    RealName ok;
    ok.horizon = 1;
    ok.triples.emplace_back(mt1(0, ClopenTree::cone(bs("0"))), 0, 0);
    ok.triples.emplace_back(mt1(0, ClopenTree::cone(bs("1"))), 0, 1);
    ok.canonicalize();
    CHECK(is_real_name(ok));

    RealName bad;
    bad.horizon = 1;
    bad.triples.emplace_back(mt1(0, ClopenTree::cone(bs("0"))), 0, 0);
    bad.triples.emplace_back(mt1(0, ClopenTree::cone(bs("0"))), 0, 1);
    CHECK(!is_real_name(bad));  // a multitree is never sad with itself
}

TEST_CASE("principal name structure") {
    RealName c = principal_name(0, 3);
    CHECK(is_real_name(c));
    auto k00 = c.K(0, 0);
    REQUIRE(k00.size() == 1);
    CHECK(k00[0] == mt1(0, ClopenTree::cone(bs("0"))));
    CHECK(sad(c.K(0, 0)[0], c.K(0, 1)[0]));
    CHECK(bit_fixing_tree(1, 1) == ClopenTree(2, {bs("01"), bs("11")}));
    // bit trees beyond n = 0 are unions of cones, not cones: K_n outside MT(pi)
    CHECK(!name_within(c, two_cohen(), 4));
    CHECK(name_within(principal_name(0, 1), two_cohen(), 4));
}

TEST_CASE("cone sets") {
    Multiforcing pi = two_cohen();
    RealName empty;
    CHECK(cone_set(empty, pi, 0, 4).empty());

    RealName weak;
    weak.horizon = 1;
    weak.triples.emplace_back(Multitree{}, 0, 0);
    auto cone = cone_set(weak, pi, 0, 4);
    CHECK(cone.size() == generating_family(pi).size());  // everything is below the weakest

    RealName c = principal_name(0, 2);
    auto before = cone_set(c, pi, 0, 4).size();
    Multiforcing bigger = pi;
    bigger.comp.at(0) = cohen(2);
    CHECK(cone_set(c, bigger, 0, 4).size() >= before);  // monotone in the generators
}

TEST_CASE("completeness") {
    Multiforcing pi = two_cohen();
    CHECK(is_complete(principal_name(0, 3), pi, 4));
    CHECK(is_complete(flipped_principal_name(1, 3), pi, 4));

    RealName half;
    half.horizon = 1;
    half.triples.emplace_back(mt1(0, ClopenTree::cone(bs("0"))), 0, 0);
    CHECK(!is_complete(half, pi, 4));  // the 1-branch cannot decide bit 0

    RealName empty;
    CHECK(is_complete(empty, pi, 4));  // vacuous below horizon 0
}

TEST_CASE("direct forcing predicates") {
    RealName c = principal_name(0, 3);
    Multitree p = mt1(0, ClopenTree::cone(bs("11")));
    CHECK(directly_forces_value(p, c, 0, 1));
    CHECK(directly_forces_value(p, c, 1, 1));
    CHECK(!directly_forces_value(p, c, 2, 0));
    CHECK(directly_forces_prefix(p, c, bs("")));
    CHECK(directly_forces_prefix(p, c, bs("11")));
    CHECK(max_forced_prefix(p, c) == bs("11"));
    CHECK(directly_forces_avoid(p, c, Tree(ClopenTree::cone(bs("0")))));
    CHECK(!directly_forces_avoid(Multitree{}, c, Tree(ClopenTree::cone(bs("0")))));
    CHECK(!directly_forces_avoid(p, c, Tree(ClopenTree::full())));
}

TEST_CASE("direct forcing is monotone under strengthening") {
    Multiforcing pi = two_cohen();
    Rng rng(51);
    RealName c = principal_name(0, 3);
    for (int it = 0; it < 100; ++it) {
        Multitree p = random_family_member(rng, pi);
        Multitree q = p;
        // strengthen: shrink a component and enlarge the support
        if (!q.has(0)) q.comp.emplace(0, Tree(ClopenTree::cone(bs("0"))));
        for (auto& [xi, t] : q.comp) {
            auto sl = t.projection().slice(t.projection().depth() + 1);
            t = Tree(t.projection().restrict_to(sl[pick(rng, sl.size())]));
        }
        REQUIRE(mleq(q, p));
        for (std::uint32_t n = 0; n < 3; ++n)
            for (int i = 0; i < 2; ++i)
                if (directly_forces_value(p, c, n, i)) CHECK(directly_forces_value(q, c, n, i));
        BitString top = max_forced_prefix(p, c);
        CHECK(top.prefix_of(max_forced_prefix(q, c)));
    }
}

TEST_CASE("decide_value") {
    Multiforcing pi = two_cohen();
    RealName c = principal_name(0, 3);
    auto [i, q] = decide_value(pi, c, Multitree{}, 0);
    CHECK(i == 0);
    CHECK(q == mt1(0, ClopenTree::cone(bs("0"))));  // least witness

    Multitree p = mt1(0, ClopenTree::cone(bs("1")));
    auto [j, r] = decide_value(pi, c, p, 0);
    CHECK(j == 1);
    CHECK(r == p);  // already deciding

    CHECK_THROWS_AS(decide_value(pi, c, Multitree{}, 7), PreconditionViolated);

    // postcondition on random starts: q <= p and q decides
    Rng rng(53);
    for (int it = 0; it < 100; ++it) {
        Multitree start = random_family_member(rng, pi);
        std::uint32_t n = pick(rng, 3);
        auto [bit, ext] = decide_value(pi, c, start, n);
        CHECK(mleq(ext, start));
        CHECK(directly_forces_value(ext, c, n, bit));
        CHECK(mt_member(pi, ext, 6));
    }
}

TEST_CASE("force_avoid") {
    Multiforcing pi = two_cohen();
    RealName c = principal_name(0, 4);

    auto [s, q] = force_avoid(pi, c, Multitree{}, Tree(ClopenTree::full()));
    CHECK(s == bs("1"));
    CHECK(directly_forces_avoid(q, c, Tree(ClopenTree::full().restrict_to(s))));

    auto [s2, q2] = force_avoid(pi, c, Multitree{}, Tree(ClopenTree::cone(bs("0"))));
    CHECK(directly_forces_avoid(q2, c, Tree(ClopenTree::cone(bs("0")).restrict_to(s2))));

    RealName shallow = principal_name(0, 2);
    CHECK_THROWS_AS(force_avoid(pi, shallow, Multitree{}, Tree(ClopenTree::cone(bs("000")))),
                    NoSplitLevel);

    Rng rng(57);
    for (int it = 0; it < 50; ++it) {
        ClopenTree T = random_clopen(rng, 2);
        Multitree p = random_family_member(rng, pi);
        auto [s3, q3] = force_avoid(pi, c, p, Tree(T));
        CHECK(T.contains(s3));
        CHECK(mleq(q3, p));
        CHECK(directly_forces_avoid(q3, c, Tree(T.restrict_to(s3))));
    }
}

TEST_CASE("non-principality boundary") {
    Multiforcing pi = two_cohen();
    CHECK(!is_nonprincipal(principal_name(0, 3), pi, 0, 4));  // names its own real
    CHECK(is_nonprincipal(principal_name(1, 3), pi, 0, 4));   // independent component
    CHECK(is_nonprincipal(flipped_principal_name(0, 3), pi, 0, 4));
    RealName empty;
    CHECK(!is_nonprincipal(empty, pi, 0, 4));  // nothing is directly forced
}

TEST_CASE("avoid sets") {
    Multiforcing pi = two_cohen();
    RealName c = principal_name(0, 3);
    auto Dfull = avoid_dense_set(c, pi, 0, Tree(ClopenTree::full()));
    for (const auto& p : generating_family(pi)) CHECK(!Dfull->member(p));  // nothing avoids everything

    Tree q0(ClopenTree::cone(bs("0")));
    Tree q00(ClopenTree::cone(bs("00")));
    auto D0 = avoid_dense_set(c, pi, 0, q0);
    auto D00 = avoid_dense_set(c, pi, 0, q00);
    for (const auto& p : generating_family(pi)) {
        if (D0->member(p)) CHECK(D00->member(p));  // monotone: smaller tree, bigger set
    }
    CHECK(D0->member(mt1(0, ClopenTree::cone(bs("1")))));
    // the refinement search lands inside the set
    auto w = D0->refine_into(Multitree{});
    REQUIRE(w);
    CHECK(D0->member(*w));
}
