#include "cheb/arc.hpp"

#include <gtest/gtest.h>

using namespace cheb;

namespace {

ArcVector basis_vec(int i) { return {{i, FieldElem(1)}}; }

}  // namespace

TEST(Arc, DimensionsMatchFormula) {
    for (int n = 1; n <= 4; ++n) {
        ArcAlgebra h(n);
        EXPECT_EQ(h.graded_dimension(), arc_dimension_formula(n)) << n;
    }
    ArcAlgebra h1(1);
    EXPECT_EQ(h1.graded_dimension(), (std::map<int, int>{{0, 1}, {2, 1}}));
    EXPECT_THROW(ArcAlgebra(5), ScaleExceeded);
}

TEST(Arc, IdempotentsAndUnit) {
    for (int n = 1; n <= 3; ++n) {
        ArcAlgebra h(n);
        int c = static_cast<int>(h.matchings().size());
        for (int a = 0; a < c; ++a) {
            EXPECT_EQ(h.degree(h.idempotent(a)), 0);
            for (int b = 0; b < c; ++b)
                EXPECT_EQ(h.mul(h.idempotent(a), h.idempotent(b)), a == b ? basis_vec(h.idempotent(a)) : ArcVector{});
        }
        ArcVector u = h.unit();
        for (int i = 0; i < static_cast<int>(h.dim()); ++i) {
            EXPECT_EQ(h.mul(u, basis_vec(i)), basis_vec(i));
            EXPECT_EQ(h.mul(basis_vec(i), u), basis_vec(i));
        }
    }
}

TEST(Arc, FrobeniusRulesAtN1) {
    ArcAlgebra h(1);
    int one = h.idempotent(0), x = one == 0 ? 1 : 0;
    EXPECT_EQ(h.mul(x, x), ArcVector{});
    EXPECT_EQ(h.mul(one, x), basis_vec(x));
}

TEST(Arc, Associative) {
    for (int n = 1; n <= 3; ++n) {
        ArcAlgebra h(n);
        int d = static_cast<int>(h.dim());
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) {
                ArcVector ij = h.mul(i, j);
                for (int k = 0; k < d; ++k) ASSERT_EQ(h.mul(ij, basis_vec(k)), h.mul(basis_vec(i), h.mul(j, k))) << n;
            }
    }
}

TEST(Arc, ProductIsGraded) {
    ArcAlgebra h(2);
    for (int i = 0; i < static_cast<int>(h.dim()); ++i)
        for (int j = 0; j < static_cast<int>(h.dim()); ++j)
            for (auto& [k, c] : h.mul(i, j)) EXPECT_EQ(h.degree(k), h.degree(i) + h.degree(j));
}

TEST(Arc, RegularBimodule) {
    for (int n = 1; n <= 2; ++n) {
        ArcAlgebra h(n);
        auto m = bimodule_of_tangle(h, FlatTangle::identity(2 * n));
        EXPECT_EQ(m.graded_dimension(), h.graded_dimension());
        int d = static_cast<int>(h.dim()), dm = static_cast<int>(m.dim());
        for (int x = 0; x < d; ++x)
            for (int y = 0; y < d; ++y)
                for (int k = 0; k < dm; ++k) {
                    ArcVector xy = h.mul(x, y);
                    EXPECT_EQ(m.left(xy, basis_vec(k)), m.left(basis_vec(x), m.left(y, k)));
                    EXPECT_EQ(m.right(basis_vec(k), xy), m.right(m.right(k, x), basis_vec(y)));
                    EXPECT_EQ(m.right(m.left(x, k), basis_vec(y)), m.left(basis_vec(x), m.right(k, y)));
                }
    }
}

TEST(Arc, FactorizedTangleBimodule) {
    ArcAlgebra h(2);
    const auto& bn = h.matchings();
    for (auto& a : bn)
        for (auto& b : bn) {
            FlatTangle t = FlatTangle::compose(a, b.reflected());
            auto m = bimodule_of_tangle(h, t);
            // q^{-n} gdim(H_a) gdim(_bH)
            std::map<int, int> ha, bh, want;
            for (auto& e : h.basis()) {
                if (h.matchings()[e.b] == a) ++ha[e.qdegree];
                if (h.matchings()[e.a] == b) ++bh[e.qdegree];
            }
            for (auto& [x, c] : ha)
                for (auto& [y, d] : bh) want[x + y - 2] += c * d;
            EXPECT_EQ(m.graded_dimension(), want);
        }
}

TEST(Arc, CoinvariantsAreCatalan) {
    const int catalan[] = {1, 1, 2, 5};
    for (int n = 1; n <= 3; ++n) {
        auto r = quantum_coinvariants_rank(n);
        EXPECT_EQ(r.rank, catalan[n]) << n;
        EXPECT_EQ(r.graded_dimension, (std::map<int, int>{{0, catalan[n]}}));
        EXPECT_TRUE(r.idempotents_span);
        EXPECT_TRUE(r.idempotents_independent);
    }
}

TEST(Arc, QuantumHochschildN1) {
    auto q = quantum_hochschild_bar(1, 2);
    EXPECT_EQ(q.ranks, (std::vector<int>{1, 0, 0}));
    EXPECT_EQ(q.graded[0], (std::map<int, int>{{0, 1}}));
    EXPECT_EQ(q.ranks[0], quantum_coinvariants_rank(1).rank);
    auto c = classical_hochschild_bar(1, 2);
    EXPECT_EQ(c.ranks[0], 2);
    EXPECT_GT(c.ranks[1], 0);
}
