#include "cheb/projector.hpp"

#include <gtest/gtest.h>

using namespace cheb;

TEST(Projector, P2Complex) {
    auto p = p2_complex(12);
    EXPECT_FALSE(d_squared_check(p.complex));
    EXPECT_EQ(p.complex.size(), 13u);
    auto comm = commutator(p.complex, p.complex, p.u);
    for (auto& [a, row] : comm.entries) EXPECT_LE(p.complex.gen(a).tdeg, -11);
    EXPECT_TRUE(cone_eta_narrow(p));
    for (auto& r : kills_turnbacks(p, std::pair{-10, 0})) {
        EXPECT_TRUE(r.left.contractible);
        EXPECT_TRUE(r.right.contractible);
    }
}

TEST(Projector, P2TurnbackFailsOnBareStrands) {
    TruncatedProjector id;
    id.n = 2;
    id.complex = unit_complex(2);
    id.top = 0;
    for (auto& r : kills_turnbacks(id, std::pair{-2, 0})) EXPECT_FALSE(r.left.contractible);
}

TEST(Projector, Q2MatchesP2) {
    auto p1 = p1_complex();
    p1.depth = 64;
    auto q = build_qn(2, p1, 10);
    EXPECT_FALSE(d_squared_check(q.complex));
    EXPECT_TRUE(q.h.is_zero());
    EXPECT_TRUE(q.k.is_zero());
    EXPECT_TRUE(q.gamma.is_zero());
    auto p = splice_pn(q, 6, 10);
    auto ref = p2_complex(10);
    EXPECT_EQ(p.complex.entry_count(), ref.complex.entry_count());
    EXPECT_FALSE(d_squared_check(p.complex));
    std::multiset<std::tuple<int, int, std::string>> a, b;
    for (auto& [id, g] : p.complex.generators()) a.insert({g.tdeg, g.qshift, g.object.to_string()});
    for (auto& [id, g] : ref.complex.generators()) b.insert({g.tdeg, g.qshift, g.object.to_string()});
    EXPECT_EQ(a, b);
}

TEST(Projector, Q3AtDepth8) {
    auto p2 = p2_complex(12);
    auto q = build_qn(3, p2, 8);
    EXPECT_FALSE(d_squared_check(q.complex));
    EXPECT_FALSE(q.k.is_zero());
    // shifts of the four terms for n = 3
    EXPECT_EQ(q.shifts[1], std::pair(-1, 1));
    EXPECT_EQ(q.shifts[2], std::pair(-4, 5));
    EXPECT_EQ(q.shifts[3], std::pair(-5, 6));
    for (int t = 0; t < 4; ++t) EXPECT_FALSE(q.terms[t].empty());
    for (auto& [a3, a0] : q.a3_to_a0) {
        EXPECT_EQ(q.complex.gen(a3).object, q.complex.gen(a0).object);
        EXPECT_EQ(q.complex.gen(a3).qshift, q.complex.gen(a0).qshift + 6);
    }
}

TEST(Projector, Q3NeedsDeepEnoughP2) { EXPECT_THROW(build_qn(3, p2_complex(10), 8), std::invalid_argument); }

TEST(Projector, P3Spliced) {
    auto q = build_qn(3, p2_complex(30), 24);
    auto p3 = splice_pn(q, 7, 24);
    EXPECT_FALSE(d_squared_check(p3.complex));
    ASSERT_GE(p3.top, 0);
    EXPECT_EQ(p3.safe_window, std::pair(-8, 0));
    EXPECT_TRUE(cone_eta_narrow(p3));
    // periodic: two generators per degree inside the window
    std::map<int, int> per;
    for (auto& [id, g] : p3.complex.generators()) per[g.tdeg]++;
    for (int t = -8; t < 0; ++t) EXPECT_EQ(per[t], 2) << t;
    auto reports = kills_turnbacks(p3);
    ASSERT_EQ(reports.size(), 2u);
    for (auto& r : reports) {
        EXPECT_TRUE(r.left.contractible) << r.i << " " << r.left.evidence;
        EXPECT_TRUE(r.right.contractible) << r.i << " " << r.right.evidence;
    }
}

TEST(Projector, SpliceCopyShift) {
    auto q = build_qn(3, p2_complex(16), 12);
    EXPECT_THROW(splice_pn(q, 2, 12), std::invalid_argument);
}

TEST(Projector, Q3KillsTurnbacks) {
    // B2 is the case the six-term expansion handles; B1 comes from P2 on the left
    auto q = build_qn(3, p2_complex(16), 12);
    TruncatedProjector tp;
    tp.n = 3;
    tp.depth = 12;
    tp.complex = q.complex;
    for (auto& r : kills_turnbacks(tp, std::pair{-10, 0})) {
        EXPECT_TRUE(r.left.contractible) << r.i;
        EXPECT_TRUE(r.right.contractible) << r.i;
    }
    // the truncation edge is not contractible
    auto edge = kills_turnbacks(tp, std::pair{-12, 0});
    EXPECT_FALSE(edge[1].left.contractible);
}

TEST(Projector, P2ShiftsAndPeriodicMap) {
    auto p = p2_complex(8);
    std::map<int, int> q_at;
    for (auto& [id, g] : p.complex.generators()) q_at[g.tdeg] = g.qshift;
    EXPECT_EQ(q_at, (std::map<int, int>{{0, 0}, {-1, 1}, {-2, 3}, {-3, 5}, {-4, 7}, {-5, 9}, {-6, 11}, {-7, 13}, {-8, 15}}));
    // U shifts by t^-2 q^4; away from the top it is the identity between shifted copies
    int ids = 0;
    for (auto& [a, row] : p.u.entries)
        for (auto& [b, m] : row) {
            const auto& ga = p.complex.gen(a);
            const auto& gb = p.complex.gen(b);
            EXPECT_EQ(gb.tdeg, ga.tdeg - 2);
            EXPECT_EQ(*m.degree() + gb.qshift - ga.qshift, 4);
            if (ga.tdeg < 0) {
                EXPECT_EQ(m, Cobordism::identity(ga.object));
                ++ids;
            }
        }
    EXPECT_EQ(ids, 6);
}

TEST(Projector, P3CopyShift) {
    // inside the window P3 repeats with period t^-4 q^6
    auto p3 = splice_pn(build_qn(3, p2_complex(30), 24), 7, 24);
    std::multiset<std::tuple<int, int, std::string>> gens;
    for (auto& [id, g] : p3.complex.generators()) gens.insert({g.tdeg, g.qshift, g.object.to_string()});
    int matched = 0;
    for (auto& [id, g] : p3.complex.generators()) {
        if (g.tdeg > -1 || g.tdeg - 4 < p3.safe_window.first) continue;
        EXPECT_EQ(gens.count({g.tdeg - 4, g.qshift + 6, g.object.to_string()}), gens.count({g.tdeg, g.qshift, g.object.to_string()}));
        ++matched;
    }
    EXPECT_GT(matched, 0);
}
