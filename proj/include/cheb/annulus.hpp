#pragma once

#include "cheb/complex.hpp"
#include "cheb/projector.hpp"
#include "cheb/skein.hpp"

#include <climits>
#include <optional>
#include <string>
#include <vector>

namespace cheb {

struct BadFactorization : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct ClosureRecord {
    int id = 0;
    int tdeg = 0;
    int qshift = 0;
    int essential = 0;
    int trivial = 0;
};
using ClosureProfile = std::vector<ClosureRecord>;

inline ClosureProfile close_objects(const Complex<BNBase>& c) {
    if (c.n() != c.m()) throw BaseMismatch("close_objects: complex is not over BN(n,n)");
    ClosureProfile out;
    for (auto& [id, g] : c.generators()) {
        auto [ess, triv] = g.object.annular_closure();
        out.push_back({id, g.tdeg, g.qshift, ess, triv});
    }
    return out;
}

/// Sum over generators of (-1)^tdeg q^qshift (q + q^{-1})^trivial z^essential, optionally
/// restricted to a tdeg window.
inline AnnularSkeinElement trace_euler(const Complex<BNBase>& c, std::optional<std::pair<int, int>> window = {}) {
    AnnularSkeinElement r;
    for (auto& rec : close_objects(c)) {
        if (window && (rec.tdeg < window->first || rec.tdeg > window->second)) continue;
        FieldElem s = FieldElem::q_power(rec.qshift) * FieldElem(delta_power(rec.trivial));
        r.add(rec.essential, rec.tdeg % 2 == 0 ? s : -s);
    }
    return r;
}

/// q-adic valuation; INT_MAX for zero.
inline int q_valuation(const FieldElem& x) { return x.is_zero() ? INT_MAX : x.num().low() - x.den().low(); }

inline int q_valuation(const ZPoly& p) {
    int v = INT_MAX;
    for (auto& [k, c] : p.coeffs) v = std::min(v, q_valuation(c));
    return v;
}

struct TruncatedTrace {
    AnnularSkeinElement trace;
    int cutoff = INT_MAX;  // the trace is exact in every q-degree below this
};

/// Trace of a truncated projector over its safe window. The cutoff is the lowest q-degree
/// reached by a generator below the window.
inline TruncatedTrace trace_euler(const TruncatedProjector& p) {
    TruncatedTrace r;
    r.trace = trace_euler(p.complex, p.safe_window);
    int lowest = INT_MAX;
    for (auto& rec : close_objects(p.complex))
        if (rec.tdeg < p.safe_window.first) lowest = std::min(lowest, rec.qshift - rec.trivial);
    r.cutoff = lowest;
    return r;
}

/// True when a - b has no q-degree below cutoff in any z-coefficient.
inline bool agree_below(const ZPoly& a, const ZPoly& b, int cutoff) {
    ZPoly d = a;
    d -= b;
    return q_valuation(d) >= cutoff;
}

struct AnnularComponent {
    bool essential = false;  // wraps the annulus
    bool closed = false;     // a closed surface away from the boundary
    int genus = 0;
    int dots = 0;
};

/// Annular cobordism built from elementary moves: its components and total q-degree.
struct AnnularDescriptor {
    std::vector<AnnularComponent> components;
    int degree = 0;
};

struct AnnularVerdict {
    bool zero = false;
    FieldElem scalar{1};  // factor from the closed components when nonzero
    std::string reason;
};

inline AnnularVerdict essential_dot_vanishing(const AnnularDescriptor& s) {
    AnnularVerdict v;
    for (std::size_t i = 0; i < s.components.size(); ++i) {
        const auto& c = s.components[i];
        if (c.essential && c.dots > 0) {
            v.zero = true;
            v.reason = "dot on essential component " + std::to_string(i) + ": (1 - q^2) x = 0";
            return v;
        }
    }
    if (s.degree != 0 && std::all_of(s.components.begin(), s.components.end(), [](auto& c) { return !c.closed; })) {
        v.zero = true;
        v.reason = "degree " + std::to_string(s.degree) + " endomorphism: (1 - q^d) f = 0";
        return v;
    }
    for (std::size_t i = 0; i < s.components.size(); ++i) {
        const auto& c = s.components[i];
        if (!c.closed) continue;
        // k[x]/x^2: a handle is 2x, counit picks the coefficient of x
        int xs = c.dots + c.genus;
        if (xs != 1) {
            v.zero = true;
            v.reason = "closed component " + std::to_string(i) + " evaluates to 0";
            return v;
        }
        v.scalar *= FieldElem(1 << c.genus);
    }
    v.reason = "survives";
    return v;
}

struct Rotation {
    TLElement rotated;
    int q_power = 0;
};

/// x = g o f with g the first `cut` factors of the word; returns f o g and the q-power
/// n - m relating the factorizations q^n g, q^{d-n} f and q^m g, q^{d-m} f.
inline Rotation cyclicity_rotate(const std::vector<TLElement>& word, int cut, int n_shift = 0, int m_shift = 0) {
    if (word.empty() || cut < 0 || cut > static_cast<int>(word.size())) throw BadFactorization("cyclicity_rotate: cut outside the word");
    auto product = [&](int lo, int hi, int width) {
        TLElement r = TLElement::identity(width);
        for (int i = lo; i < hi; ++i) {
            if (word[i].m() != r.n()) throw BadFactorization("cyclicity_rotate: factors do not compose");
            r = r * word[i];
        }
        return r;
    };
    int top = word.front().m();
    TLElement g = product(0, cut, top);
    TLElement f = product(cut, static_cast<int>(word.size()), g.n());
    if (f.n() != top) throw BadFactorization("cyclicity_rotate: g o f is not square");
    return {f * g, n_shift - m_shift};
}

}  // namespace cheb
