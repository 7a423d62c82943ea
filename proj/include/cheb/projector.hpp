#pragma once

#include "cheb/complex.hpp"

#include <array>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace cheb {

struct HomotopyNotFound : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct ObstructionNonzero : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A truncation of P_n over BN(n,n) together with its periodic endomorphism U of degree
/// t^{u_tdeg} q^{u_qdeg} (when known).
struct TruncatedProjector {
    int n = 0;
    int depth = 0;
    Complex<BNBase> complex;
    int top = -1;  // the 1_n generator in tdeg 0
    std::pair<int, int> safe_window{0, 0};
    ChainMap<BNBase> u;
    int u_qdeg = 0;
    bool has_u = false;
};

/// P_1 = 1_1, with u_1 the dot.
inline TruncatedProjector p1_complex() {
    TruncatedProjector p;
    p.n = 1;
    p.depth = 1 << 20;
    FlatTangle id = FlatTangle::identity(1);
    p.complex = Complex<BNBase>(1, 1);
    p.top = p.complex.add(id, 0, 0, "1");
    p.safe_window = {INT_MIN / 2, 0};
    p.u.add(p.top, p.top, Cobordism::identity(id).add_dot({0, 0}));
    p.u_qdeg = 2;
    p.has_u = true;
    return p;
}

/// Turnback B_i on n strands with a dot on its top (cup) or bottom (cap) arc.
inline Cobordism dotted_turnback(int n, int i, bool top) {
    FlatTangle b = FlatTangle::turnback(n, i);
    int p = top ? n + i - 1 : i - 1;
    return Cobordism::identity(b).add_dot({0, b.arc_of_point(p)});
}

/// ... -> q^5 B -> q^3 B -(dot_top - dot_bot)-> q B -(saddle)-> 1_2, B in tdeg -1 .. -depth.
/// Odd steps below the first are the saddle composite B -> 1_2 -> B.
inline TruncatedProjector p2_complex(int depth) {
    if (depth < 2) throw std::invalid_argument("p2_complex: depth < 2");
    TruncatedProjector p;
    p.n = 2;
    p.depth = depth;
    FlatTangle id = FlatTangle::identity(2), b = FlatTangle::turnback(2, 1);
    Cobordism merge = Cobordism::saddle_between(b, id), split = Cobordism::saddle_between(id, b);
    Cobordism udiff = dotted_turnback(2, 1, true) - dotted_turnback(2, 1, false);
    auto& c = p.complex = Complex<BNBase>(2, 2);
    p.top = c.add(id, 0, 0, "1");
    std::vector<int> bk{p.top};
    for (int k = 1; k <= depth; ++k) bk.push_back(c.add(b, 2 * k - 1, -k, "B" + std::to_string(k)));
    c.set(bk[1], p.top, merge);
    for (int k = 2; k <= depth; ++k) c.set(bk[k], bk[k - 1], k % 2 == 0 ? udiff : split * merge);
    c.low_cut = -depth;
    p.safe_window = {-depth + 2, 0};
    p.u.tdeg = -2;
    p.u_qdeg = 4;
    if (depth >= 2) p.u.add(p.top, bk[2], split);
    for (int k = 1; k + 2 <= depth; ++k) p.u.add(bk[k], bk[k + 2], Cobordism::identity(b));
    p.has_u = true;
    return p;
}

/// eta : 1_n -> P, the inclusion of the top term. Source is unit_complex(n) with generator 0.
inline Complex<BNBase> unit_complex(int n) { return one_term<BNBase>(n, n, FlatTangle::identity(n), 0, 0, "1"); }

inline ChainMap<BNBase> eta_map(const TruncatedProjector& p) {
    ChainMap<BNBase> e;
    e.add(0, p.top, Cobordism::identity(FlatTangle::identity(p.n)));
    return e;
}

/// Width of Cone(eta) away from the top term: true when every other generator has
/// through-degree < n.
inline bool cone_eta_narrow(const TruncatedProjector& p) {
    for (auto& [id, g] : p.complex.generators())
        if (id != p.top && g.object.through_degree() >= p.n) return false;
    return true;
}

namespace detail {

/// Sub-complex on the given generators, keeping ids and internal entries.
inline Complex<BNBase> restrict_to(const Complex<BNBase>& c, const std::vector<int>& ids, int low_cut) {
    Complex<BNBase> r(c.n(), c.m());
    std::set<int> keep(ids.begin(), ids.end());
    for (int id : ids) {
        const auto& g = c.gen(id);
        r.add_with_id(id, g.object, g.qshift, g.tdeg, g.label);
    }
    for (int id : ids)
        for (auto& [to, m] : c.out(id))
            if (keep.count(to)) r.set(id, to, m);
    r.low_cut = low_cut;
    return r;
}

/// Components of delta o delta from the `from` generators to the `to` generators, as a degree-2 map.
inline ChainMap<BNBase> square_part(const Complex<BNBase>& c, const std::vector<int>& from, const std::vector<int>& to) {
    std::set<int> tos(to.begin(), to.end());
    ChainMap<BNBase> r;
    r.tdeg = 2;
    for (int x : from)
        for (auto& [y, a] : c.out(x))
            for (auto& [z, b] : c.out(y))
                if (tos.count(z)) r.add(x, z, b * a);
    return r;
}

/// f acting on one factor of a star product; the other factor gets the identity.
/// Koszul sign (-1)^{|f| tdeg(top gen)} when f acts on the bottom factor.
inline ChainMap<BNBase> star_factor_map(const Complex<BNBase>& top, const Complex<BNBase>& bottom, const Product<BNBase>& prod,
                                       const ChainMap<BNBase>& f, bool on_top) {
    ChainMap<BNBase> r;
    r.tdeg = f.tdeg;
    for (auto& [key, id] : prod.ids) {
        auto [i, j] = key;
        if (on_top) {
            auto it = f.entries.find(i);
            if (it == f.entries.end()) continue;
            Cobordism idj = Cobordism::identity(bottom.gen(j).object);
            for (auto& [i2, m] : it->second) r.add(id, prod.ids.at({i2, j}), Cobordism::star(m, idj));
        } else {
            auto it = f.entries.find(j);
            if (it == f.entries.end()) continue;
            Cobordism idi = Cobordism::identity(top.gen(i).object);
            bool neg = (f.tdeg * top.gen(i).tdeg) % 2 != 0;
            for (auto& [j2, m] : it->second) {
                auto e = Cobordism::star(idi, m);
                r.add(id, prod.ids.at({i, j2}), neg ? -e : e);
            }
        }
    }
    return r;
}

}  // namespace detail

/// Q_n: terms A3 -> A2 -> A1 -> A0 with A0 = A3 ~ (P_{n-1} u 1) * (P_{n-1} u 1) and
/// A1 = A2 ~ (P_{n-1} u 1) * B_{n-1} * (P_{n-1} u 1), all simplified.
struct QnComplex {
    int n = 0;
    int depth = 0;
    Complex<BNBase> complex;
    std::array<std::vector<int>, 4> terms;  // generator ids of A0, A1, A2, A3
    std::map<int, int> a3_to_a0;            // A3 generator -> the matching A0 generator
    ChainMap<BNBase> h, k, gamma;
    std::array<std::pair<int, int>, 4> shifts{};  // (t, q) of each term
};

inline QnComplex build_qn(int n, const TruncatedProjector& prev, int depth) {
    if (n < 2 || prev.n != n - 1) throw std::invalid_argument("build_qn: need P_{n-1}");
    if (!prev.has_u) throw std::invalid_argument("build_qn: P_{n-1} has no periodic endomorphism");
    if (prev.depth < depth + 4) throw std::invalid_argument("build_qn: P_{n-1} too shallow for the requested depth");
    QnComplex Q;
    Q.n = n;
    Q.depth = depth;
    Complex<BNBase> strand = one_term<BNBase>(1, 1, FlatTangle::identity(1));
    Complex<BNBase> P = prev.complex;
    if (P.low_cut != INT_MIN) P = truncate(P, std::min(prev.depth, depth + 8));
    auto Ej = juxtapose(P, strand);
    const Complex<BNBase>& E = Ej.complex;
    ChainMap<BNBase> UE;
    UE.tdeg = prev.u.tdeg;
    for (auto& [a, row] : prev.u.entries)
        for (auto& [b, m] : row)
            if (Ej.ids.count({a, 0}) && Ej.ids.count({b, 0}))
                UE.add(Ej.ids.at({a, 0}), Ej.ids.at({b, 0}), Cobordism::juxtapose(m, Cobordism::identity(FlatTangle::identity(1))));
    FlatTangle idn = FlatTangle::identity(n), bt = FlatTangle::turnback(n, n - 1);
    Complex<BNBase> Bc = one_term<BNBase>(n, n, bt, 0, 0, "B");
    auto X0 = star_compose(E, E);
    auto EB = star_compose(E, Bc);
    auto X1 = star_compose(EB.complex, E);
    Cobordism merge = Cobordism::saddle_between(bt, idn), split = Cobordism::saddle_between(idn, bt);
    ChainMap<BNBase> s, sstar;
    for (auto& [key, id0] : X0.ids) {
        auto [i, j] = key;
        int id1 = X1.ids.at({EB.ids.at({i, 0}), j});
        Cobordism ii = Cobordism::identity(E.gen(i).object), jj = Cobordism::identity(E.gen(j).object);
        s.add(id1, id0, Cobordism::star(Cobordism::star(ii, merge), jj));
        sstar.add(id0, id1, Cobordism::star(Cobordism::star(ii, split), jj));
    }
    // u on the top projector factor minus u on the bottom one
    ChainMap<BNBase> ut_eb = detail::star_factor_map(E, Bc, EB, UE, true);
    ChainMap<BNBase> u = detail::star_factor_map(EB.complex, E, X1, ut_eb, true);
    u -= detail::star_factor_map(EB.complex, E, X1, UE, false);

    Equivalence<BNBase> e0 = Equivalence<BNBase>::identity_on(X0.complex), e1 = Equivalence<BNBase>::identity_on(X1.complex);
    Complex<BNBase> S0 = simplify(X0.complex, &e0), S1 = simplify(X1.complex, &e1);
    ChainMap<BNBase> s_ = compose(e0.f, compose(s, e1.g));
    ChainMap<BNBase> u_ = compose(e1.f, compose(u, e1.g));
    ChainMap<BNBase> ss_ = compose(e1.f, compose(sstar, e0.g));

    Q.shifts = {{{0, 0}, {-1, 1}, {2 - 2 * n, 2 * n - 1}, {1 - 2 * n, 2 * n}}};
    const std::array<const Complex<BNBase>*, 4> src{&S0, &S1, &S1, &S0};
    std::array<std::map<int, int>, 4> ids;
    auto& c = Q.complex = Complex<BNBase>(n, n);
    static const char* names[4] = {"A0:", "A1:", "A2:", "A3:"};
    for (int t = 0; t < 4; ++t) {
        auto [dt, dq] = Q.shifts[t];
        for (auto& [id, g] : src[t]->generators()) {
            int nid = c.add(g.object, g.qshift + dq, g.tdeg + dt, names[t] + g.label);
            ids[t][id] = nid;
            Q.terms[t].push_back(nid);
        }
        bool neg = dt % 2 != 0;
        for (auto& [id, g] : src[t]->generators())
            for (auto& [to, m] : src[t]->out(id)) c.set(ids[t][id], ids[t][to], neg ? -m : m);
    }
    for (auto& [id, nid] : ids[3]) Q.a3_to_a0[nid] = ids[0].at(id);
    auto place = [&](const ChainMap<BNBase>& f, int from, int to) {
        for (auto& [a, row] : f.entries)
            for (auto& [b, m] : row) c.add_to(ids[from].at(a), ids[to].at(b), m);
    };
    place(s_, 1, 0);
    place(u_, 2, 1);
    place(ss_, 3, 2);
    std::array<int, 4> cuts{};
    for (int t = 0; t < 4; ++t) cuts[t] = (src[t]->low_cut == INT_MIN ? INT_MIN / 2 : src[t]->low_cut + Q.shifts[t].first);

    auto solve = [&](int from, int to, bool last) {
        ChainMap<BNBase> O = detail::square_part(c, Q.terms[from], Q.terms[to]);
        ChainMap<BNBase> h;
        h.tdeg = 1;
        if (O.is_zero()) return h;
        Complex<BNBase> X = detail::restrict_to(c, Q.terms[from], cuts[from]);
        Complex<BNBase> Y = detail::restrict_to(c, Q.terms[to], cuts[to]);
        int hi = X.tdeg_range()->second;
        try {
            h = null_homotopy_solve(X, Y, O.scaled(FieldElem(-1)), {-depth, hi});
        } catch (const WindowTooSmall& e) {
            throw HomotopyNotFound(std::string("build_qn: ") + e.what());
        } catch (const NotNullHomotopic&) {
            if (last) throw ObstructionNonzero("build_qn: gamma obstruction is not null-homotopic");
            throw HomotopyNotFound("build_qn: no null-homotopy on the window");
        }
        for (auto& [a, row] : h.entries)
            for (auto& [b, m] : row) c.add_to(a, b, m);
        return h;
    };
    Q.h = solve(2, 0, false);
    Q.k = solve(3, 1, false);
    Q.gamma = solve(3, 0, true);
    c = truncate(c, depth);
    for (auto& v : Q.terms) v.erase(std::remove_if(v.begin(), v.end(), [&](int id) { return !c.contains(id); }), v.end());
    for (auto it = Q.a3_to_a0.begin(); it != Q.a3_to_a0.end();) it = c.contains(it->first) ? std::next(it) : Q.a3_to_a0.erase(it);
    if (d_squared_check(c)) throw ObstructionNonzero("build_qn: d^2 != 0 after corrections");
    return Q;
}

/// Splices copies t^{(2-2n)j} q^{2nj} Q_n along A3(j) -> A0(j+1), collapses and truncates.
inline TruncatedProjector splice_pn(const QnComplex& Q, int copies, int depth) {
    const int n = Q.n, period = 2 * n - 2;
    if (copies * period < depth) throw std::invalid_argument("splice_pn: not enough copies for the depth");
    std::vector<Complex<BNBase>> parts;
    for (int j = 0; j < copies; ++j) parts.push_back(shifted(Q.complex, -period * j, 2 * n * j));
    std::vector<SpliceLink> links;
    for (int j = 0; j + 1 < copies; ++j)
        for (auto& [a3, a0] : Q.a3_to_a0) links.push_back({j, a3, j + 1, a0});
    Complex<BNBase> c = splice(parts, links);
    c = truncate(simplify(std::move(c)), depth);
    TruncatedProjector p;
    p.n = n;
    p.depth = depth;
    p.complex = std::move(c);
    p.complex.low_cut = -depth;
    for (auto& [id, g] : p.complex.generators())
        if (g.tdeg == 0 && g.qshift == 0 && g.object == FlatTangle::identity(n)) p.top = id;
    p.safe_window = {-depth + 2 * period * 2, 0};
    return p;
}

struct TurnbackReport {
    int i = 0;
    WindowVerdict left;   // B_i * P
    WindowVerdict right;  // P * cup_i
};

/// Checks that P kills every turnback on its safe window, from the left and from the right.
inline std::vector<TurnbackReport> kills_turnbacks(const TruncatedProjector& p, std::optional<std::pair<int, int>> window = {}) {
    auto w = window.value_or(p.safe_window);
    std::vector<TurnbackReport> out;
    for (int i = 1; i < p.n; ++i) {
        TurnbackReport r;
        r.i = i;
        Complex<BNBase> b = one_term<BNBase>(p.n, p.n, FlatTangle::turnback(p.n, i));
        Complex<BNBase> cup = one_term<BNBase>(p.n - 2, p.n, FlatTangle::cup(p.n, i));
        r.left = contractible_on_window(star_compose(b, p.complex).complex, w);
        r.right = contractible_on_window(star_compose(p.complex, cup).complex, w);
        out.push_back(std::move(r));
    }
    return out;
}

}  // namespace cheb
