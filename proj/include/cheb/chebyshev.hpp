#pragma once

#include "cheb/complex.hpp"
#include "cheb/idempotents.hpp"
#include "cheb/jones_wenzl.hpp"
#include "cheb/skein.hpp"

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace cheb {

struct NotATriangle : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct CompletionFailed : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A k-pairing of n dots: left dots of the chosen adjacent pairs, increasing.
struct Pairing {
    int n = 0;
    std::vector<int> starts;

    int k() const { return static_cast<int>(starts.size()); }
    int points() const { return n - 2 * k(); }
    bool last_paired() const { return !starts.empty() && starts.back() == n - 2; }
    /// Pairs drawn as [], unpaired dots as '.'.
    std::string to_string() const {
        std::string s(n, '.');
        for (int a : starts) {
            s[a] = '[';
            s[a + 1] = ']';
        }
        return s;
    }
    friend bool operator<(const Pairing& a, const Pairing& b) { return std::tie(a.n, a.starts) < std::tie(b.n, b.starts); }
    friend bool operator==(const Pairing& a, const Pairing& b) { return a.n == b.n && a.starts == b.starts; }
};

/// I_{k,n}, in lexicographic order of pair positions.
inline std::vector<Pairing> pairings(int n, int k) {
    std::vector<Pairing> out;
    std::vector<int> cur;
    auto rec = [&](auto&& self, int from) -> void {
        if (static_cast<int>(cur.size()) == k) {
            out.push_back({n, cur});
            return;
        }
        for (int a = from; a + 1 < n; ++a) {
            cur.push_back(a);
            self(self, a + 2);
            cur.pop_back();
        }
    };
    rec(rec, 0);
    return out;
}

/// Number of pairs of s strictly right of the pair starting at p.
inline int pairs_right_of(const Pairing& s, int p) {
    int c = 0;
    for (int a : s.starts)
        if (a > p) ++c;
    return c;
}

/// One V^(n) of a Chebyshev system over Kar(TL), plus its comparison data.
struct ChebyshevSystem {
    std::string name;
    std::vector<Complex<TLBase>> V;
    std::vector<Product<TLBase>> VxV;  // VxV[n] = V[n-1] (x) V, n >= 1
    std::vector<ChainMap<TLBase>> pi;  // pi[n] : VxV[n] -> V[n]
    std::map<int, std::map<int, Pairing>> labels;

    int n_max() const { return static_cast<int>(V.size()) - 1; }
};

namespace detail {

inline Complex<TLBase> tl_unit_strand() {
    Complex<TLBase> v(1, 1);
    v.add(TLBase::object(1), 0, 0, "V");
    return v;
}

inline void push_tensor(ChebyshevSystem& s, int n) {
    static const Complex<TLBase> strand = tl_unit_strand();
    s.VxV.push_back(n == 0 ? Product<TLBase>{} : tensor(s.V[n - 1], strand));
}

}  // namespace detail

/// Khovanov's complex V_n: tdeg -k holds one n-2k point object per k-pairing, and the edge
/// s -> s minus {p} is (-1)^{pairs of s right of p} times the cup at i+1, i the unpaired dots
/// of s left of p.
inline Complex<TLBase> khovanov_complex(int n, std::map<int, Pairing>* labels = nullptr) {
    if (n < 0) throw std::invalid_argument("khovanov_complex: n < 0");
    Complex<TLBase> c(n, n);
    std::map<Pairing, int> id;
    for (int k = 0; 2 * k <= n; ++k)
        for (auto& s : pairings(n, k)) {
            id[s] = c.add(TLBase::object(s.points()), 0, -k, s.to_string());
            if (labels) (*labels)[id[s]] = s;
        }
    for (auto& [s, x] : id) {
        for (int j = 0; j < s.k(); ++j) {
            int p = s.starts[j];
            Pairing t = s;
            t.starts.erase(t.starts.begin() + j);
            int left_unpaired = p - 2 * j;
            TLElement cup = TLElement::from_tangle(FlatTangle::cup(t.points(), left_unpaired + 1));
            c.set(x, id.at(t), pairs_right_of(s, p) % 2 ? -cup : cup);
        }
    }
    return c;
}

/// Khovanov system up to n_max: pi^(n) is the inclusion of pairings leaving the last dot free.
inline ChebyshevSystem khovanov_system(int n_max) {
    ChebyshevSystem s;
    s.name = "khovanov";
    for (int n = 0; n <= n_max; ++n) {
        auto& lab = s.labels[n];
        s.V.push_back(khovanov_complex(n, &lab));
        detail::push_tensor(s, n);
        ChainMap<TLBase> pi;
        if (n >= 1) {
            std::map<Pairing, int> target;
            for (auto& [id, p] : lab) target[p] = id;
            for (auto& [id, p] : s.labels[n - 1]) {
                Pairing q{n, p.starts};
                int y = target.at(q);
                pi.add(s.VxV[n].ids.at({id, 0}), y, TLElement::identity(q.points()));
            }
        }
        s.pi.push_back(std::move(pi));
    }
    return s;
}

/// Jones-Wenzl system: V^(n) = im p_n in degree 0, pi^(n) = p_n.
inline ChebyshevSystem jw_system(int n_max) {
    ChebyshevSystem s;
    s.name = "jw";
    for (int n = 0; n <= n_max; ++n) {
        Complex<TLBase> c(n, n);
        c.add(TLBase::image(jones_wenzl(n)), 0, 0, "p" + std::to_string(n));
        s.V.push_back(std::move(c));
        detail::push_tensor(s, n);
        ChainMap<TLBase> pi;
        if (n >= 1) pi.add(s.VxV[n].ids.at({0, 0}), 0, jones_wenzl(n));
        s.pi.push_back(std::move(pi));
    }
    return s;
}

/// The four structure maps of the JW system at n >= 2.
struct JWMaps {
    TLElement pi, rho, iota, kappa;
};

inline JWMaps jw_maps(int n) {
    if (n < 2) throw std::invalid_argument("jw_maps: n < 2");
    TLElement pn = jones_wenzl(n), top = pad_right(jones_wenzl(n - 1), 1), low = jones_wenzl(n - 2);
    TLElement cup = TLElement::from_tangle(FlatTangle::cup(n, n - 1));
    TLElement cap = TLElement::from_tangle(FlatTangle::cap(n, n - 1));
    FieldElem ratio = FieldElem(quantum_integer(n - 1)) / FieldElem(quantum_integer(n));
    return {pn, pn, top * cup * low, (low * cap * top).scaled(ratio)};
}

struct JWIdentities {
    bool dh = false, hd = false, pi_rho = false;
};

/// dh = id - rho pi on im p_{n-1} (x) V, hd = id on im p_{n-2}, pi rho = id on im p_n.
inline JWIdentities jw_identities(int n) {
    auto m = jw_maps(n);
    TLElement top = pad_right(jones_wenzl(n - 1), 1);
    JWIdentities r;
    r.dh = m.iota * m.kappa == top - m.rho * m.pi;
    r.hd = m.kappa * m.iota == jones_wenzl(n - 2);
    r.pi_rho = m.pi * m.rho == jones_wenzl(n);
    return r;
}

/// iota^(n-2) = (pi^(n-1) (x) id) o (id (x) coev) : V^(n-2) -> V^(n-1) (x) V.
inline ChainMap<TLBase> chebyshev_iota(const ChebyshevSystem& s, int n) {
    if (n < 2 || n > s.n_max()) throw std::invalid_argument("chebyshev_iota: n out of range");
    ChainMap<TLBase> r;
    const TLElement coev = TLElement::from_tangle(FlatTangle::cup(2, 1));
    const auto& pi = s.pi[n - 1];
    for (auto& [x, g] : s.V[n - 2].generators()) {
        TLElement up = TLElement::juxtapose(g.object.idem, coev);
        auto it = pi.entries.find(s.VxV[n - 1].ids.at({x, 0}));
        if (it == pi.entries.end()) continue;
        for (auto& [y, P] : it->second) r.add(x, s.VxV[n].ids.at({y, 0}), pad_right(P, 1) * up);
    }
    return r;
}

/// Witness for the distinguished triangle V^(n-2) -> V^(n-1) (x) V -> V^(n).
///
/// phibar : Cone(iota) -> V^(n) restricts to pi^(n) on V^(n-1) (x) V; phi is a homotopy inverse.
struct TriangleWitness {
    int n = 0;
    ChainMap<TLBase> iota;
    Assembled<TLBase> cone;
    ChainMap<TLBase> phibar;
    HomotopyInverse<TLBase> inverse;
};

inline TriangleWitness triangle_check(const ChebyshevSystem& s, int n) {
    TriangleWitness w;
    w.n = n;
    w.iota = chebyshev_iota(s, n);
    const auto& X = s.V[n - 2];
    const auto& Y = s.VxV[n].complex;
    const auto& Vn = s.V[n];
    if (!is_closed(X, Y, w.iota)) throw NotATriangle("triangle_check: iota is not a chain map");
    if (!is_closed(Y, Vn, s.pi[n])) throw NotATriangle("triangle_check: pi is not a chain map");
    w.cone = cone(X, Y, w.iota);
    // phibar = [G, pi] with [delta, G] = pi o iota
    ChainMap<TLBase> G;
    G.tdeg = -1;
    ChainMap<TLBase> pi_iota = compose(s.pi[n], w.iota);
    if (!pi_iota.is_zero()) {
        auto rx = X.tdeg_range();
        try {
            G = null_homotopy_solve(X, Vn, pi_iota, {rx->first, rx->second});
        } catch (const NotNullHomotopic&) {
            throw NotATriangle("triangle_check: pi o iota is not null-homotopic");
        }
    }
    for (auto& [a, row] : G.entries)
        for (auto& [b, m] : row) w.phibar.add(w.cone.parts[0].at(a), b, m);
    for (auto& [a, row] : s.pi[n].entries)
        for (auto& [b, m] : row) w.phibar.add(w.cone.parts[1].at(a), b, m);
    if (!is_closed(w.cone.complex, Vn, w.phibar)) throw NotATriangle("triangle_check: phibar is not closed");
    auto inv = homotopy_inverse(w.cone.complex, Vn, w.phibar);
    if (!inv || !verify_inverse(w.cone.complex, Vn, w.phibar, *inv)) throw NotATriangle("triangle_check: Cone(iota) is not equivalent to V^(n)");
    w.inverse = std::move(*inv);
    return w;
}

/// f (x) id_V between tensor products with the one-term strand.
inline ChainMap<TLBase> tensor_id(const ChainMap<TLBase>& f, const Product<TLBase>& src, const Product<TLBase>& dst) {
    ChainMap<TLBase> r;
    r.tdeg = f.tdeg;
    for (auto& [a, row] : f.entries)
        for (auto& [b, m] : row) r.add(src.ids.at({a, 0}), dst.ids.at({b, 0}), pad_right(m, 1));
    return r;
}

struct ThetaStep {
    int n = 0;
    ChainMap<TLBase> theta;
    HomotopyInverse<TLBase> inverse;
    bool right_square = false;  // theta^(n) o pi ~ pi' o (theta^(n-1) (x) id)
};

/// Homotopy equivalences theta^(n) : A.V[n] -> B.V[n] forming morphisms of triangles, with
/// theta^(0) = theta^(1) = id.
inline std::vector<ThetaStep> build_theta(const ChebyshevSystem& A, const ChebyshevSystem& B, int n_max) {
    if (n_max > A.n_max() || n_max > B.n_max()) throw std::invalid_argument("build_theta: systems too short");
    for (int k = 0; k <= std::min(1, n_max); ++k)
        if (A.V[k].size() != 1 || !(A.V[k].generators().begin()->second.object == B.V[k].generators().begin()->second.object))
            throw CompletionFailed("build_theta: V^(0), V^(1) differ");
    std::vector<ThetaStep> out;
    for (int n = 0; n <= std::min(1, n_max); ++n) {
        ThetaStep t;
        t.n = n;
        int a = A.V[n].generators().begin()->first, b = B.V[n].generators().begin()->first;
        t.theta.add(a, b, TLBase::identity(A.V[n].gen(a).object));
        t.inverse.g.add(b, a, TLBase::identity(B.V[n].gen(b).object));
        t.inverse.hx.tdeg = t.inverse.hy.tdeg = -1;
        t.right_square = true;
        out.push_back(std::move(t));
    }
    for (int n = 2; n <= n_max; ++n) {
        TriangleWitness wa = triangle_check(A, n), wb = triangle_check(B, n);
        const ChainMap<TLBase>& t2 = out[n - 2].theta;
        ChainMap<TLBase> t1 = tensor_id(out[n - 1].theta, A.VxV[n], B.VxV[n]);
        // left square up to homotopy: [delta, H] = t1 o iota_A - iota_B o t2
        ChainMap<TLBase> defect = compose(t1, wa.iota);
        defect -= compose(wb.iota, t2);
        ChainMap<TLBase> H;
        H.tdeg = -1;
        if (!defect.is_zero()) {
            auto rx = A.V[n - 2].tdeg_range();
            try {
                H = null_homotopy_solve(A.V[n - 2], B.VxV[n].complex, defect, {rx->first, rx->second});
            } catch (const NotNullHomotopic&) {
                throw CompletionFailed("build_theta: left square does not commute up to homotopy");
            }
        }
        ChainMap<TLBase> F;
        for (auto& [a, row] : t2.entries)
            for (auto& [b, m] : row) F.add(wa.cone.parts[0].at(a), wb.cone.parts[0].at(b), m);
        for (auto& [a, row] : H.entries)
            for (auto& [b, m] : row) F.add(wa.cone.parts[0].at(a), wb.cone.parts[1].at(b), m);
        for (auto& [a, row] : t1.entries)
            for (auto& [b, m] : row) F.add(wa.cone.parts[1].at(a), wb.cone.parts[1].at(b), m);
        if (!is_closed(wa.cone.complex, wb.cone.complex, F)) throw CompletionFailed("build_theta: cone map is not closed");
        ThetaStep t;
        t.n = n;
        t.theta = compose(wb.phibar, compose(F, wa.inverse.g));
        if (!is_closed(A.V[n], B.V[n], t.theta)) throw CompletionFailed("build_theta: theta is not closed");
        auto inv = homotopy_inverse(A.V[n], B.V[n], t.theta);
        if (!inv || !verify_inverse(A.V[n], B.V[n], t.theta, *inv)) throw CompletionFailed("build_theta: theta is not a homotopy equivalence");
        t.inverse = std::move(*inv);
        ChainMap<TLBase> sq = compose(t.theta, A.pi[n]);
        sq -= compose(B.pi[n], t1);
        if (sq.is_zero()) {
            t.right_square = true;
        } else {
            auto ry = A.VxV[n].complex.tdeg_range();
            try {
                null_homotopy_solve(A.VxV[n].complex, B.V[n], sq, {ry->first, ry->second});
                t.right_square = true;
            } catch (const NotNullHomotopic&) {
                t.right_square = false;
            }
        }
        out.push_back(std::move(t));
    }
    return out;
}

/// The mapping-cone decomposition V_n = Cone(V_{n-2} -> V_{n-1} (x) V) as an exact match of
/// generators and differentials.
struct ConeDecomposition {
    Assembled<TLBase> cone;
    std::map<int, int> to_vn;  // cone id -> V_n id
    std::size_t last_paired = 0, last_free = 0;
    bool matches = false;
    bool map_is_cup = false;  // every cone-map entry is the cup on the right edge
};

inline ConeDecomposition kh_cone_decomposition(int n) {
    if (n < 2) throw std::invalid_argument("kh_cone_decomposition: n < 2");
    ChebyshevSystem s = khovanov_system(n);
    ConeDecomposition r;
    ChainMap<TLBase> iota = chebyshev_iota(s, n);
    r.cone = cone(s.V[n - 2], s.VxV[n].complex, iota);
    std::map<Pairing, int> vn;
    for (auto& [id, p] : s.labels[n]) {
        vn[p] = id;
        (p.last_paired() ? r.last_paired : r.last_free)++;
    }
    for (auto& [id, p] : s.labels[n - 2]) {
        Pairing q{n, p.starts};
        q.starts.push_back(n - 2);
        r.to_vn[r.cone.parts[0].at(id)] = vn.at(q);
    }
    for (auto& [id, p] : s.labels[n - 1]) r.to_vn[r.cone.parts[1].at(s.VxV[n].ids.at({id, 0}))] = vn.at(Pairing{n, p.starts});
    r.map_is_cup = true;
    for (auto& [a, row] : iota.entries)
        for (auto& [b, m] : row) {
            int pts = s.V[n - 2].gen(a).object.n + 2;
            if (!(m == TLElement::from_tangle(FlatTangle::cup(pts, pts - 1)))) r.map_is_cup = false;
        }
    const auto& V = s.V[n];
    const auto& C = r.cone.complex;
    bool ok = C.size() == V.size() && C.entry_count() == V.entry_count();
    for (auto& [c, v] : r.to_vn) {
        if (!ok) break;
        const auto& gc = C.gen(c);
        const auto& gv = V.gen(v);
        ok = gc.tdeg == gv.tdeg && gc.qshift == gv.qshift && gc.object == gv.object;
        for (auto& [c2, m] : C.out(c)) {
            const auto* e = V.entry(v, r.to_vn.at(c2));
            if (!e || !(*e == m)) ok = false;
        }
    }
    r.matches = ok;
    return r;
}

/// Euler characteristic of a TL complex whose terms have varying widths, one TL element per
/// width: sum (-1)^tdeg q^qshift [idempotent].
inline std::map<int, TLElement> graded_euler(const Complex<TLBase>& c) {
    std::map<int, TLElement> r;
    for (auto& [id, g] : c.generators()) {
        auto it = r.try_emplace(g.object.n, TLElement::zero(g.object.n, g.object.n)).first;
        FieldElem s = FieldElem::q_power(g.qshift);
        it->second.axpy(g.tdeg % 2 == 0 ? s : -s, g.object.idem);
    }
    for (auto it = r.begin(); it != r.end();) it = it->second.is_zero() ? r.erase(it) : std::next(it);
    return r;
}

inline AnnularSkeinElement euler_closure(const std::map<int, TLElement>& chi) {
    AnnularSkeinElement z;
    for (auto& [n, x] : chi) z += annular_skein_closure(x);
    return z;
}

inline FieldElem euler_markov_trace(const std::map<int, TLElement>& chi) {
    FieldElem t(0);
    for (auto& [n, x] : chi) t += markov_trace(x);
    return t;
}

/// sum_k (-1)^k binom(n-k, k) [id_{n-2k}].
inline std::map<int, TLElement> grothendieck_formula(int n) {
    std::map<int, TLElement> r;
    for (int k = 0; 2 * k <= n; ++k) {
        FieldElem c(FieldElem(binomial(n - k, k)));
        r.emplace(n - 2 * k, TLElement::identity(n - 2 * k).scaled(k % 2 ? -c : c));
    }
    return r;
}

}  // namespace cheb
