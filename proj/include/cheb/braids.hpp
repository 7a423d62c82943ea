#pragma once

#include "cheb/complex.hpp"

#include <cstdlib>
#include <random>
#include <vector>

namespace cheb {

/// Bracket of a crossing at position i (1-based) on n strands over BN(n,n).
/// Positive: 1_n -> q^{-1} B_i in tdeg 0, 1. Negative: q B_i -> 1_n in tdeg -1, 0.
inline Complex<BNBase> crossing(int n, int i, bool positive) {
    Complex<BNBase> c(n, n);
    FlatTangle id = FlatTangle::identity(n), b = FlatTangle::turnback(n, i);
    if (positive) {
        int x = c.add(id, 0, 0, "1");
        int y = c.add(b, -1, 1, "B" + std::to_string(i));
        c.set(x, y, Cobordism::saddle_between(id, b));
    } else {
        int x = c.add(b, 1, -1, "B" + std::to_string(i));
        int y = c.add(id, 0, 0, "1");
        c.set(x, y, Cobordism::saddle_between(b, id));
    }
    return c;
}

/// Braid word read bottom to top; letter +i / -i is a positive / negative crossing at i.
inline Complex<BNBase> braid(int n, const std::vector<int>& word) {
    Complex<BNBase> c = one_term<BNBase>(n, n, FlatTangle::identity(n));
    for (int w : word) c = star_compose(crossing(n, std::abs(w), w > 0), c).complex;
    return c;
}

inline std::vector<int> random_word(std::mt19937& rng, int n, int len) {
    std::uniform_int_distribution<int> pos(1, n - 1), sgn(0, 1);
    std::vector<int> w;
    for (int k = 0; k < len; ++k) w.push_back(sgn(rng) ? pos(rng) : -pos(rng));
    return w;
}

/// Random degree-(-1) map X -> Y built from the hom bases with small integer coefficients.
template <class Base>
ChainMap<Base> random_homotopy(std::mt19937& rng, const Complex<Base>& x, const Complex<Base>& y, int density = 3) {
    ChainMap<Base> h;
    h.tdeg = -1;
    std::uniform_int_distribution<int> coin(0, density), coef(-2, 2);
    for (auto& [a, ga] : x.generators())
        for (auto& [b, gb] : y.generators()) {
            if (gb.tdeg != ga.tdeg - 1) continue;
            for (auto& m : Base::hom_basis(ga.object, gb.object, ga.qshift - gb.qshift))
                if (coin(rng) == 0) h.add(a, b, m.scaled(FieldElem(coef(rng))));
        }
    return h;
}

}  // namespace cheb
