#pragma once

#include "cheb/cob.hpp"
#include "cheb/linalg.hpp"

#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

namespace cheb {

struct ScaleExceeded : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Basis vector of a sweet bimodule or of H^n: a disk-basis cobordism from matching a to
/// tangle b, with dotted loops (label x) in `dots`.
struct ArcBasisElement {
    int a = 0;
    int b = 0;
    std::uint64_t dots = 0;
    int qdegree = 0;
    friend bool operator<(const ArcBasisElement& x, const ArcBasisElement& y) {
        return std::tie(x.a, x.b, x.dots) < std::tie(y.a, y.b, y.dots);
    }
};

using ArcVector = std::map<int, FieldElem>;

namespace detail {

/// Hom spaces Hom(sources[a], targets[b]) in the disk basis, flattened.
struct HomSpaces {
    std::vector<FlatTangle> sources, targets;
    std::vector<ArcBasisElement> basis;
    std::map<ArcBasisElement, int> index;

    void build() {
        for (int a = 0; a < static_cast<int>(sources.size()); ++a)
            for (int b = 0; b < static_cast<int>(targets.size()); ++b) {
                Cobordism z(sources[a], targets[b]);
                int loops = z.loops().loops;
                for (std::uint64_t m = 0; m < (std::uint64_t{1} << loops); ++m) {
                    ArcBasisElement e{a, b, m, z.term_degree(m)};
                    index[e] = static_cast<int>(basis.size());
                    basis.push_back(e);
                }
            }
    }
    Cobordism element(int i) const {
        const auto& e = basis[static_cast<std::size_t>(i)];
        return Cobordism::disks(sources[e.a], targets[e.b], e.dots);
    }
    ArcVector coords(const Cobordism& c, int a, int b) const {
        ArcVector v;
        for (auto& [m, k] : c.terms()) {
            auto it = index.find({a, b, m, 0});
            if (it == index.end()) throw std::logic_error("arc: term outside the basis");
            v[it->second] += k;
        }
        for (auto it = v.begin(); it != v.end();) it = it->second.is_zero() ? v.erase(it) : std::next(it);
        return v;
    }
    std::size_t size() const { return basis.size(); }
};

inline bool is_zero(const FieldElem& x) { return x.is_zero(); }
inline bool is_zero(const Rational& x) { return x == 0; }

inline int choose(int n, int k) {
    long r = 1;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return static_cast<int>(r);
}

inline bool add_into(ArcVector& acc, const ArcVector& v, const FieldElem& c = FieldElem(1)) {
    for (auto& [i, x] : v) {
        auto& slot = acc[i];
        slot += c * x;
        if (slot.is_zero()) acc.erase(i);
    }
    return true;
}

}  // namespace detail

/// Khovanov's arc algebra: basis element (a, b, dots) is a cobordism a -> b, and the product
/// x.y is the composite x o y (zero unless target(y) = source(x)).
class ArcAlgebra {
public:
    explicit ArcAlgebra(int n) : n_(n) {
        if (n < 0 || n > 4) throw ScaleExceeded("arc_algebra: n > 4");
        const auto& bn = TangleBasis::get(0, 2 * n).all();
        h_.sources = bn;
        h_.targets = bn;
        h_.build();
        products_.assign(h_.size(), std::vector<std::optional<ArcVector>>(h_.size()));
    }

    int n() const { return n_; }
    const std::vector<FlatTangle>& matchings() const { return h_.sources; }
    const std::vector<ArcBasisElement>& basis() const { return h_.basis; }
    std::size_t dim() const { return h_.size(); }
    int degree(int i) const { return h_.basis[static_cast<std::size_t>(i)].qdegree; }
    Cobordism element(int i) const { return h_.element(i); }
    ArcVector coords(const Cobordism& c) const {
        return h_.coords(c, matching_index(c.source()), matching_index(c.target()));
    }

    /// The idempotent (a): the undotted identity cobordism on a.
    int idempotent(int a) const { return h_.index.at({a, a, 0, 0}); }

    const ArcVector& mul(int x, int y) const {
        auto& slot = products_[static_cast<std::size_t>(x)][static_cast<std::size_t>(y)];
        if (!slot) {
            const auto& ex = h_.basis[static_cast<std::size_t>(x)];
            const auto& ey = h_.basis[static_cast<std::size_t>(y)];
            if (ey.b != ex.a) slot = ArcVector{};
            else slot = h_.coords(element(x) * element(y), ey.a, ex.b);
        }
        return *slot;
    }

    ArcVector mul(const ArcVector& x, const ArcVector& y) const {
        ArcVector r;
        for (auto& [i, a] : x)
            for (auto& [j, b] : y) detail::add_into(r, mul(i, j), a * b);
        return r;
    }

    ArcVector unit() const {
        ArcVector u;
        for (int a = 0; a < static_cast<int>(matchings().size()); ++a) u[idempotent(a)] = FieldElem(1);
        return u;
    }

    std::map<int, int> graded_dimension() const {
        std::map<int, int> g;
        for (auto& e : h_.basis) ++g[e.qdegree];
        return g;
    }

private:
    int matching_index(const FlatTangle& t) const {
        for (std::size_t i = 0; i < h_.sources.size(); ++i)
            if (h_.sources[i] == t) return static_cast<int>(i);
        throw std::invalid_argument("arc: not a crossingless matching");
    }

    int n_;
    detail::HomSpaces h_;
    mutable std::vector<std::vector<std::optional<ArcVector>>> products_;
};

inline ArcAlgebra arc_algebra(int n) { return ArcAlgebra(n); }

/// q^n (q + q^{-1})^{circles(a^v b)} summed over pairs of matchings, as degree -> dimension.
inline std::map<int, int> arc_dimension_formula(int n) {
    const auto& bn = TangleBasis::get(0, 2 * n).all();
    std::map<int, int> g;
    for (auto& a : bn)
        for (auto& b : bn) {
            int c = FlatTangle::compose(a.reflected(), b).circles();
            for (int k = 0; k <= c; ++k) g[n - c + 2 * k] += detail::choose(c, k);
        }
    return g;
}

/// The bimodule F(T) for a flat (2n,2n) tangle T: basis of Hom(a, T o b), right action by
/// precomposition and left action by T * h on the target.
class SweetBimodule {
public:
    SweetBimodule(const ArcAlgebra& h, const FlatTangle& t) : h_(&h), t_(t) {
        if (t.n() != 2 * h.n() || t.m() != 2 * h.n()) throw BoundaryMismatch("bimodule_of_tangle: T is not (2n,2n)");
        m_.sources = h.matchings();
        for (auto& b : h.matchings()) m_.targets.push_back(FlatTangle::compose(t, b));
        m_.build();
    }

    std::size_t dim() const { return m_.size(); }
    const std::vector<ArcBasisElement>& basis() const { return m_.basis; }
    std::map<int, int> graded_dimension() const {
        std::map<int, int> g;
        for (auto& e : m_.basis) ++g[e.qdegree];
        return g;
    }

    /// x . m for x in H: x : b -> b' acts on the T o b end.
    ArcVector left(int x, int m) const {
        const auto& ex = h_->basis()[static_cast<std::size_t>(x)];
        const auto& em = m_.basis[static_cast<std::size_t>(m)];
        if (ex.a != em.b) return {};
        Cobordism tx = Cobordism::star(Cobordism::identity(t_), h_->element(x));
        return m_.coords(tx * m_.element(m), em.a, ex.b);
    }
    /// m . y for y in H: y : a' -> a precomposes.
    ArcVector right(int m, int y) const {
        const auto& ey = h_->basis()[static_cast<std::size_t>(y)];
        const auto& em = m_.basis[static_cast<std::size_t>(m)];
        if (ey.b != em.a) return {};
        return m_.coords(m_.element(m) * h_->element(y), ey.a, em.b);
    }
    ArcVector left(const ArcVector& x, const ArcVector& m) const {
        ArcVector r;
        for (auto& [i, a] : x)
            for (auto& [j, b] : m) detail::add_into(r, left(i, j), a * b);
        return r;
    }
    ArcVector right(const ArcVector& m, const ArcVector& y) const {
        ArcVector r;
        for (auto& [i, a] : m)
            for (auto& [j, b] : y) detail::add_into(r, right(i, j), a * b);
        return r;
    }

private:
    const ArcAlgebra* h_;
    FlatTangle t_;
    detail::HomSpaces m_;
};

inline SweetBimodule bimodule_of_tangle(const ArcAlgebra& h, const FlatTangle& t) { return SweetBimodule(h, t); }

struct CoinvariantsResult {
    int rank = 0;
    std::map<int, int> graded_dimension;
    bool idempotents_span = false;        // the classes of the (a) span the quotient
    bool idempotents_independent = false;  // and are linearly independent in it
};

/// coInv_q(H^n) = H / Span{a m - q^{|a|} m a} over Q(q).
inline CoinvariantsResult quantum_coinvariants_rank(const ArcAlgebra& h) {
    const int d = static_cast<int>(h.dim());
    std::map<int, SparseSolver<FieldElem>> by_degree;
    for (int a = 0; a < d; ++a)
        for (int m = 0; m < d; ++m) {
            ArcVector v = h.mul(a, m);
            detail::add_into(v, h.mul(m, a), -FieldElem::q_power(h.degree(a)));
            if (!v.empty()) by_degree[h.degree(a) + h.degree(m)].add_equation(v);
        }
    CoinvariantsResult r;
    std::map<int, int> total = h.graded_dimension();
    for (auto& [deg, cnt] : total) {
        int rk = by_degree.count(deg) ? static_cast<int>(by_degree[deg].rank()) : 0;
        if (cnt - rk) r.graded_dimension[deg] = cnt - rk;
        r.rank += cnt - rk;
    }
    // idempotents sit in degree 0
    SparseSolver<FieldElem> zero = by_degree.count(0) ? by_degree[0] : SparseSolver<FieldElem>{};
    std::size_t before = zero.rank();
    for (int a = 0; a < static_cast<int>(h.matchings().size()); ++a) zero.add_equation({{h.idempotent(a), FieldElem(1)}});
    std::size_t added = zero.rank() - before;
    r.idempotents_independent = added == h.matchings().size();
    r.idempotents_span = static_cast<int>(added) == r.rank && r.graded_dimension.size() <= 1 &&
                         (r.graded_dimension.empty() || r.graded_dimension.begin()->first == 0);
    return r;
}

inline CoinvariantsResult quantum_coinvariants_rank(int n) { return quantum_coinvariants_rank(arc_algebra(n)); }

struct HochschildResult {
    std::vector<int> ranks;                    // HH_i for i = 0..i_max
    std::vector<std::map<int, int>> graded;    // degree -> dimension
};

/// Homology of the bar complex A^{(i+1)} with faces a_j a_{j+1} and the cyclic face
/// sigma(a_i) a_0 (x) a_1 ... , sigma(a) = twist(|a|) a. The field F is Q(q) or Q.
template <class F>
HochschildResult hochschild_bar(const ArcAlgebra& h, int i_max, const std::function<F(int)>& twist, const std::function<F(const FieldElem&)>& to_field) {
    if (i_max < 0 || i_max > 3) throw ScaleExceeded("quantum_hochschild_bar: i_max > 3");
    const int d = static_cast<int>(h.dim());
    std::size_t top = 1;
    for (int i = 0; i <= i_max + 1; ++i) top *= static_cast<std::size_t>(d);
    if (top > 200000) throw ScaleExceeded("quantum_hochschild_bar: bar complex too large");

    // rank of b_i : C_i -> C_{i-1} per total degree, i = 1..i_max+1
    auto decode = [&](std::size_t code, int len) {
        std::vector<int> w(static_cast<std::size_t>(len));
        for (int k = len - 1; k >= 0; --k) {
            w[static_cast<std::size_t>(k)] = static_cast<int>(code % static_cast<std::size_t>(d));
            code /= static_cast<std::size_t>(d);
        }
        return w;
    };
    auto encode = [&](const std::vector<int>& w) {
        std::size_t c = 0;
        for (int x : w) c = c * static_cast<std::size_t>(d) + static_cast<std::size_t>(x);
        return static_cast<int>(c);
    };
    auto word_degree = [&](const std::vector<int>& w) {
        int s = 0;
        for (int x : w) s += h.degree(x);
        return s;
    };
    std::vector<std::map<int, int>> dims(static_cast<std::size_t>(i_max) + 2), ranks(static_cast<std::size_t>(i_max) + 2);
    std::size_t count = static_cast<std::size_t>(d);
    for (int i = 0; i <= i_max + 1; ++i, count *= static_cast<std::size_t>(d)) {
        std::map<int, SparseSolver<F>> solvers;
        for (std::size_t code = 0; code < count; ++code) {
            auto w = decode(code, i + 1);
            int deg = word_degree(w);
            ++dims[static_cast<std::size_t>(i)][deg];
            if (i == 0) continue;
            std::map<int, F> row;
            auto emit = [&](std::vector<int> head, int pos, const ArcVector& prod, const F& c) {
                for (auto& [k, x] : prod) {
                    head[static_cast<std::size_t>(pos)] = k;
                    F v = c * to_field(x);
                    auto& slot = row[encode(head)];
                    slot += v;
                    if (detail::is_zero(slot)) row.erase(encode(head));
                }
            };
            for (int j = 0; j < i; ++j) {
                std::vector<int> head;
                for (int k = 0; k <= i; ++k)
                    if (k != j + 1) head.push_back(w[static_cast<std::size_t>(k)]);
                emit(head, j, h.mul(w[static_cast<std::size_t>(j)], w[static_cast<std::size_t>(j + 1)]), F(j % 2 ? -1 : 1));
            }
            std::vector<int> head(w.begin(), w.end() - 1);
            F sign(i % 2 ? -1 : 1);
            emit(head, 0, h.mul(w.back(), w.front()), sign * twist(h.degree(w.back())));
            if (!row.empty()) solvers[deg].add_equation(row);
        }
        for (auto& [deg, s] : solvers) ranks[static_cast<std::size_t>(i)][deg] = static_cast<int>(s.rank());
    }
    HochschildResult r;
    for (int i = 0; i <= i_max; ++i) {
        std::map<int, int> g;
        int total = 0;
        for (auto& [deg, dim] : dims[static_cast<std::size_t>(i)]) {
            int hh = dim - ranks[static_cast<std::size_t>(i)][deg] - ranks[static_cast<std::size_t>(i) + 1][deg];
            if (hh) g[deg] = hh;
            total += hh;
        }
        r.ranks.push_back(total);
        r.graded.push_back(std::move(g));
    }
    return r;
}

/// Twisted by sigma(a) = q^{-|a|} a, so that HH_0 is coInv_q.
inline HochschildResult quantum_hochschild_bar(int n, int i_max) {
    if (n != 1 && n != 2) throw ScaleExceeded("quantum_hochschild_bar: n > 2");
    ArcAlgebra h(n);
    return hochschild_bar<FieldElem>(h, i_max, [](int deg) { return FieldElem::q_power(-deg); }, [](const FieldElem& x) { return x; });
}

/// The same complex at q = 1: classical Hochschild homology over Q.
inline HochschildResult classical_hochschild_bar(int n, int i_max) {
    if (n != 1 && n != 2) throw ScaleExceeded("classical_hochschild_bar: n > 2");
    ArcAlgebra h(n);
    return hochschild_bar<Rational>(h, i_max, [](int) { return Rational(1); }, [](const FieldElem& x) { return x.specialize(Rational(1)); });
}

}  // namespace cheb
