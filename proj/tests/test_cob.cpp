#include "cheb/cob.hpp"
#include "tqft_oracle.hpp"

#include <gtest/gtest.h>

#include <random>
#include <set>

using namespace cheb;
using cheb::testing::oracle_compose;

namespace {

FlatTangle empty_with(int circles) { return FlatTangle(0, 0, {}, circles); }

FlatTangle random_tangle(std::mt19937& rng, int n, int m, int max_circles) {
    const auto& all = TangleBasis::get(n, m).all();
    FlatTangle t = all[std::uniform_int_distribution<std::size_t>(0, all.size() - 1)(rng)];
    return t.with_circles(std::uniform_int_distribution<int>(0, max_circles)(rng));
}

Cobordism random_cob(std::mt19937& rng, const FlatTangle& s, const FlatTangle& t) {
    auto ls = loop_structure(s, t);
    Cobordism c = Cobordism::zero(s, t);
    int terms = std::uniform_int_distribution<int>(1, 3)(rng);
    for (int i = 0; i < terms; ++i) {
        std::uint64_t m = std::uniform_int_distribution<std::uint64_t>(0, (std::uint64_t{1} << ls->loops) - 1)(rng);
        c += Cobordism::disks(s, t, m, FieldElem(std::uniform_int_distribution<int>(-3, 3)(rng)));
    }
    return c;
}

}  // namespace

TEST(Cob, IdentityAndDegrees) {
    Cobordism id2 = Cobordism::identity(FlatTangle::identity(2));
    EXPECT_EQ(id2.loops().loops, 2);
    EXPECT_EQ(id2.degree(), 0);
    EXPECT_EQ(id2 * id2, id2);
    Cobordism idb = Cobordism::identity(FlatTangle::turnback(2, 1));
    EXPECT_EQ(idb.loops().loops, 2);
    EXPECT_EQ(idb.degree(), 0);
    Cobordism s = Cobordism::saddle(FlatTangle::identity(2), 0, 1);
    EXPECT_EQ(s.target(), FlatTangle::turnback(2, 1));
    EXPECT_EQ(s.degree(), 1);
    Cobordism split = Cobordism::saddle(FlatTangle::turnback(2, 1), 0, 1);
    EXPECT_EQ(split.target(), FlatTangle::identity(2));
    EXPECT_EQ(split.degree(), 1);
    // merging a circle into an arc
    Cobordism mc = Cobordism::saddle(FlatTangle::identity(1).with_circles(1), 0, 1);
    EXPECT_EQ(mc.target(), FlatTangle::identity(1));
    EXPECT_EQ(mc.degree(), 1);
    Cobordism dot = Cobordism::identity(FlatTangle::identity(1)).add_dot({0, 0});
    EXPECT_EQ(dot.degree(), 2);
    EXPECT_TRUE(dot.add_dot({1, 0}).is_zero());
    EXPECT_EQ(dot.scaled(FieldElem(3)).add_dot({0, 0}), dot.add_dot({0, 0}).scaled(FieldElem(3)));
    EXPECT_EQ(Cobordism::identity(FlatTangle::identity(1)).scaled(FieldElem(3)).add_dot({0, 0}), dot.scaled(FieldElem(3)));
    EXPECT_THROW(dot.add_dot({0, 5}), NoSuchBlock);
}

TEST(Cob, ClosedSurfaces) {
    FlatTangle e = empty_with(0), o = empty_with(1), oo = empty_with(2), ooo = empty_with(3);
    Cobordism cup = Cobordism::disks(e, o, 0), cap = Cobordism::disks(o, e, 0);
    Cobordism dcup = Cobordism::disks(e, o, 1);
    EXPECT_TRUE((cap * cup).is_zero());
    EXPECT_EQ(cap * dcup, Cobordism::disks(e, e, 0));
    Cobordism tube_in = Cobordism::from_blocks(e, oo, {{{1, 0}, {1, 1}}});
    Cobordism tube_out = Cobordism::from_blocks(oo, e, {{{0, 0}, {0, 1}}});
    EXPECT_EQ(tube_out * tube_in, Cobordism::disks(e, e, 0, FieldElem(2)));
    Cobordism p_in = Cobordism::from_blocks(e, ooo, {{{1, 0}, {1, 1}, {1, 2}}});
    Cobordism p_out = Cobordism::from_blocks(ooo, e, {{{0, 0}, {0, 1}, {0, 2}}});
    EXPECT_TRUE((p_out * p_in).is_zero());
    // closed genus-g blocks directly
    EXPECT_TRUE(Cobordism::from_blocks(e, e, {{}}, {0}, {0}).is_zero());
    EXPECT_EQ(Cobordism::from_blocks(e, e, {{}}, {1}, {0}), Cobordism::disks(e, e, 0));
    EXPECT_EQ(Cobordism::from_blocks(e, e, {{}}, {0}, {1}), Cobordism::disks(e, e, 0, FieldElem(2)));
    EXPECT_TRUE(Cobordism::from_blocks(e, e, {{}}, {0}, {2}).is_zero());
}

TEST(Cob, NeckCutting) {
    FlatTangle o = empty_with(1);
    // identity on a circle is the tube; neck cutting gives the two dotted disk pairs
    Cobordism id = Cobordism::identity(o);
    EXPECT_EQ(id, neck_cut_expand(o, o, {0, 0}, {1, 0}));
    EXPECT_EQ(id * id, id);
    Cobordism tube = Cobordism::from_blocks(o, o, {{{0, 0}, {1, 0}}});
    EXPECT_EQ(tube, id);
    // a block that is already a disk is unchanged
    EXPECT_EQ(Cobordism::from_blocks(o, o, {{{0, 0}}, {{1, 0}}}), Cobordism::disks(o, o, 0));
    EXPECT_THROW(neck_cut_expand(FlatTangle::identity(1), FlatTangle::identity(1), {0, 0}, {1, 0}), GluingMismatch);
}

TEST(Cob, HomBasis) {
    FlatTangle i1 = FlatTangle::identity(1), i2 = FlatTangle::identity(2), b = FlatTangle::turnback(2, 1);
    auto h0 = hom_basis(i1, i1, 0);
    ASSERT_EQ(h0.size(), 1u);
    EXPECT_EQ(h0[0], Cobordism::identity(i1));
    auto h1 = hom_basis(i2, b, 1);
    ASSERT_EQ(h1.size(), 1u);
    EXPECT_EQ(h1[0], Cobordism::saddle(i2, 0, 1));
    auto h2 = hom_basis(i1, i1, 2);
    ASSERT_EQ(h2.size(), 1u);
    EXPECT_EQ(h2[0], Cobordism::identity(i1).add_dot({0, 0}));
    for (int n = 0; n <= 3; ++n)
        for (auto& s : TangleBasis::get(n, n).all())
            for (auto& t : TangleBasis::get(n, n).all())
                for (int d = -4; d <= 6; ++d)
                    for (auto& c : hom_basis(s, t, d)) EXPECT_EQ(c.degree(), d);
}

TEST(Cob, Delooping) {
    for (FlatTangle t : {empty_with(1), FlatTangle::identity(2).with_circles(2), FlatTangle::turnback(3, 2).with_circles(1)}) {
        Delooping d = deloop(t);
        EXPECT_EQ(d.reduced.circles(), t.circles() - 1);
        EXPECT_EQ(d.up.degree(), -1);
        EXPECT_EQ(d.down.degree(), 1);
        EXPECT_EQ(d.up_inv.degree(), 1);
        EXPECT_EQ(d.down_inv.degree(), -1);
        Cobordism idr = Cobordism::identity(d.reduced);
        EXPECT_EQ(d.up * d.up_inv, idr);
        EXPECT_EQ(d.down * d.down_inv, idr);
        EXPECT_TRUE((d.up * d.down_inv).is_zero());
        EXPECT_TRUE((d.down * d.up_inv).is_zero());
        EXPECT_EQ(d.up_inv * d.up + d.down_inv * d.down, Cobordism::identity(t));
    }
    EXPECT_THROW(deloop(FlatTangle::identity(2)), NoCircle);
}

TEST(Cob, CompositionMatchesTqftOracle) {
    // all hom-basis composites with n + m <= 4 and up to one circle on each tangle
    int checked = 0;
    for (auto [n, m] : std::vector<std::pair<int, int>>{{0, 0}, {1, 1}, {2, 0}, {0, 2}, {2, 2}, {3, 1}, {1, 3}, {4, 0}, {0, 4}}) {
        std::vector<FlatTangle> ts;
        for (auto& t : TangleBasis::get(n, m).all())
            for (int c = 0; c <= 1; ++c) ts.push_back(t.with_circles(c));
        for (auto& a : ts)
            for (auto& b : ts)
                for (auto& c : ts) {
                    auto la = loop_structure(a, b), lb = loop_structure(b, c);
                    for (std::uint64_t x = 0; x < (std::uint64_t{1} << la->loops); ++x)
                        for (std::uint64_t y = 0; y < (std::uint64_t{1} << lb->loops); ++y) {
                            Cobordism s1 = Cobordism::disks(a, b, x), s2 = Cobordism::disks(b, c, y);
                            Cobordism lib = s2 * s1;
                            EXPECT_EQ(lib, oracle_compose(s2, s1)) << a.to_string() << " " << b.to_string() << " " << c.to_string();
                            EXPECT_TRUE(lib.is_zero() || lib.degree() == *s1.degree() + *s2.degree());
                            ++checked;
                        }
                }
    }
    EXPECT_GT(checked, 1000);
}

TEST(Cob, Associativity) {
    std::mt19937 rng(7);
    for (int it = 0; it < 1000; ++it) {
        int n = std::uniform_int_distribution<int>(0, 3)(rng);
        int m = std::uniform_int_distribution<int>(0, 3)(rng);
        if ((n + m) % 2) ++m;
        if (n + m > 6) m -= 2;
        FlatTangle a = random_tangle(rng, n, m, 1), b = random_tangle(rng, n, m, 1), c = random_tangle(rng, n, m, 1),
                   d = random_tangle(rng, n, m, 1);
        Cobordism x = random_cob(rng, a, b), y = random_cob(rng, b, c), z = random_cob(rng, c, d);
        EXPECT_EQ((z * y) * x, z * (y * x));
    }
}

TEST(Cob, HorizontalComposition) {
    std::mt19937 rng(11);
    // interchange law and units for the star product
    for (int it = 0; it < 300; ++it) {
        int n = std::uniform_int_distribution<int>(0, 2)(rng), k = std::uniform_int_distribution<int>(0, 2)(rng);
        int m = std::uniform_int_distribution<int>(0, 2)(rng);
        if ((n + k) % 2) ++k;
        if ((k + m) % 2) ++m;
        FlatTangle A = random_tangle(rng, k, m, 1), A2 = random_tangle(rng, k, m, 1), A3 = random_tangle(rng, k, m, 1);
        FlatTangle B = random_tangle(rng, n, k, 1), B2 = random_tangle(rng, n, k, 1), B3 = random_tangle(rng, n, k, 1);
        Cobordism a1 = random_cob(rng, A, A2), a2 = random_cob(rng, A2, A3);
        Cobordism b1 = random_cob(rng, B, B2), b2 = random_cob(rng, B2, B3);
        EXPECT_EQ(Cobordism::star(a2 * a1, b2 * b1), Cobordism::star(a2, b2) * Cobordism::star(a1, b1));
        EXPECT_EQ(Cobordism::star(Cobordism::identity(A), Cobordism::identity(B)), Cobordism::identity(FlatTangle::compose(A, B)));
        EXPECT_EQ(Cobordism::star(Cobordism::identity(FlatTangle::identity(m)), a1), a1);
        EXPECT_EQ(Cobordism::star(b1, Cobordism::identity(FlatTangle::identity(n))), b1);
        // juxtaposition
        EXPECT_EQ(Cobordism::juxtapose(a2 * a1, b2 * b1), Cobordism::juxtapose(a2, b2) * Cobordism::juxtapose(a1, b1));
        EXPECT_EQ(Cobordism::juxtapose(Cobordism::identity(A), Cobordism::identity(B)),
                  Cobordism::identity(FlatTangle::juxtapose(A, B)));
    }
    // a turnback stacked on a turnback closes a circle
    Cobordism s = Cobordism::saddle(FlatTangle::identity(2), 0, 1);
    Cobordism st = Cobordism::star(Cobordism::identity(FlatTangle::turnback(2, 1)), s);
    EXPECT_EQ(st.source(), FlatTangle::turnback(2, 1));
    EXPECT_EQ(st.target(), FlatTangle::turnback(2, 1).with_circles(1));
    EXPECT_EQ(st.degree(), 1);
}
