#pragma once

#include "cheb/tl.hpp"

#include <map>
#include <string>

namespace cheb {

/// Polynomial in the essential-circle variable z with coefficients in Q(q).
/// Used both for annular closures (monomial basis) and for Chebyshev expansions.
struct ZPoly {
    std::map<int, FieldElem> coeffs;

    FieldElem operator[](int k) const {
        auto it = coeffs.find(k);
        return it == coeffs.end() ? FieldElem(0) : it->second;
    }
    void add(int k, const FieldElem& c) {
        if (c.is_zero()) return;
        auto [it, inserted] = coeffs.try_emplace(k, c);
        if (!inserted) {
            it->second += c;
            if (it->second.is_zero()) coeffs.erase(it);
        }
    }
    ZPoly& operator+=(const ZPoly& o) {
        for (auto& [k, c] : o.coeffs) add(k, c);
        return *this;
    }
    ZPoly& operator-=(const ZPoly& o) {
        for (auto& [k, c] : o.coeffs) add(k, -c);
        return *this;
    }
    ZPoly scaled(const FieldElem& s) const {
        ZPoly r;
        for (auto& [k, c] : coeffs) r.add(k, c * s);
        return r;
    }
    friend ZPoly operator*(const ZPoly& a, const ZPoly& b) {
        ZPoly r;
        for (auto& [i, x] : a.coeffs)
            for (auto& [j, y] : b.coeffs) r.add(i + j, x * y);
        return r;
    }
    bool is_zero() const { return coeffs.empty(); }
    int degree() const { return coeffs.empty() ? -1 : coeffs.rbegin()->first; }
    friend bool operator==(const ZPoly& a, const ZPoly& b) { return a.coeffs == b.coeffs; }
    friend bool operator!=(const ZPoly& a, const ZPoly& b) { return !(a == b); }

    static ZPoly monomial(int k, const FieldElem& c = FieldElem(1)) {
        ZPoly r;
        r.add(k, c);
        return r;
    }

    std::string to_string(const std::string& var = "z") const {
        if (coeffs.empty()) return "0";
        std::string s;
        for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) {
            if (!s.empty()) s += " + ";
            s += "(" + it->second.to_string() + ")";
            if (it->first) s += "*" + var + "^" + std::to_string(it->first);
        }
        return s;
    }
};

/// Skein-of-the-annulus element in the monomial basis z^k.
using AnnularSkeinElement = ZPoly;

/// Chebyshev polynomial S_k(z): S_0 = 1, S_1 = z, S_{k+1} = z S_k - S_{k-1}.
inline ZPoly chebyshev_S(int k) {
    ZPoly prev = ZPoly::monomial(0), cur = ZPoly::monomial(1);
    if (k == 0) return prev;
    for (int i = 1; i < k; ++i) {
        ZPoly next = ZPoly::monomial(1) * cur;
        next -= prev;
        prev = std::move(cur);
        cur = std::move(next);
    }
    return cur;
}

/// Rewrites f in the basis {S_k}; the result maps k to the coefficient of S_k.
inline ZPoly chebyshev_coefficients(ZPoly f) {
    ZPoly out;
    while (!f.is_zero()) {
        int d = f.degree();
        FieldElem c = f[d];
        out.add(d, c);
        f -= chebyshev_S(d).scaled(c);
    }
    return out;
}

/// Expands a Chebyshev-basis expression back into monomials.
inline ZPoly from_chebyshev(const ZPoly& s) {
    ZPoly out;
    for (auto& [k, c] : s.coeffs) out += chebyshev_S(k).scaled(c);
    return out;
}

/// Markov trace: each tangle contributes (q + q^{-1})^{loops of its planar closure}.
inline FieldElem markov_trace(const TLElement& x) {
    if (x.n() != x.m()) throw NotSquare("markov_trace needs a square element");
    FieldElem t;
    for (auto& [tang, c] : x.terms()) t += c * FieldElem(delta_power(tang.planar_closure()));
    return t;
}

/// Annular closure: tangle T contributes (q + q^{-1})^{trivial(T)} z^{essential(T)}.
inline AnnularSkeinElement annular_skein_closure(const TLElement& x) {
    if (x.n() != x.m()) throw NotSquare("annular_skein_closure needs a square element");
    AnnularSkeinElement r;
    for (auto& [tang, c] : x.terms()) {
        auto [ess, triv] = tang.annular_closure();
        r.add(ess, c * FieldElem(delta_power(triv)));
    }
    return r;
}

}  // namespace cheb
