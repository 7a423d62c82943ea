#pragma once

#include "cheb/cob.hpp"
#include "cheb/linalg.hpp"
#include "cheb/tl.hpp"

#include <climits>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

namespace cheb {

struct NotClosed : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct BaseMismatch : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct NotNullHomotopic : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct WindowTooSmall : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct ChainConditionViolated : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct InterfaceMismatch : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct HypothesisFailed : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Karoubi envelope of the Temperley-Lieb category: objects are (n, idempotent in TL_n).
struct TLBase {
    struct Object {
        int n = 0;
        TLElement idem;
        friend bool operator==(const Object& a, const Object& b) { return a.n == b.n && a.idem == b.idem; }
    };
    using Morphism = TLElement;
    static constexpr const char* name = "TL";

    static Object object(int n) { return {n, TLElement::identity(n)}; }
    static Object image(const TLElement& e) { return {e.n(), e}; }

    static int points_in(const Object& o) { return o.n; }
    static Morphism zero(const Object& s, const Object& t) { return TLElement::zero(s.n, t.n); }
    static Morphism identity(const Object& o) { return o.idem; }
    static Morphism compose(const Morphism& top, const Morphism& bottom) { return top * bottom; }
    static Object juxtapose(const Object& a, const Object& b) { return {a.n + b.n, TLElement::juxtapose(a.idem, b.idem)}; }

    static std::optional<FieldElem> unit_scalar(const Morphism& m, const Object& o) {
        if (m.is_zero() || o.idem.is_zero() || m.n() != o.n || m.m() != o.n) return std::nullopt;
        const auto& [i0, c0] = o.idem.raw_terms().front();
        FieldElem c;
        bool found = false;
        for (auto& [i, v] : m.raw_terms())
            if (i == i0) {
                c = v / c0;
                found = true;
            }
        if (!found || !(m == o.idem.scaled(c))) return std::nullopt;
        return c;
    }

    /// Spanning set of Hom(s, t): e_t T e_s over all circle-free tangles T. The category is
    /// ungraded, so the degree is ignored.
    static std::vector<Morphism> hom_basis(const Object& s, const Object& t, int) {
        std::vector<Morphism> out;
        const bool plain_s = s.idem == TLElement::identity(s.n), plain_t = t.idem == TLElement::identity(t.n);
        for (auto& T : TangleBasis::get(s.n, t.n).all()) {
            TLElement x = TLElement::from_tangle(T);
            if (!plain_s) x = x * s.idem;
            if (!plain_t) x = t.idem * x;
            if (!x.is_zero()) out.push_back(std::move(x));
        }
        return out;
    }

    template <class F>
    static void for_coordinates(const Morphism& m, F&& f) {
        for (auto& [i, c] : m.raw_terms()) f(static_cast<long long>(i), c);
    }

    static TLElement euler_class(const Object& o) { return o.idem; }
    static std::string describe(const Object& o) { return "(" + std::to_string(o.n) + "," + o.idem.to_string() + ")"; }
};

/// Dotted Bar-Natan category: objects are flat tangles, morphisms dotted cobordisms.
struct BNBase {
    using Object = FlatTangle;
    using Morphism = Cobordism;
    static constexpr const char* name = "BN";

    static Morphism zero(const Object& s, const Object& t) { return Cobordism::zero(s, t); }
    static Morphism identity(const Object& o) { return Cobordism::identity(o); }
    static Morphism compose(const Morphism& top, const Morphism& bottom) { return top * bottom; }

    static std::optional<FieldElem> unit_scalar(const Morphism& m, const Object& o) {
        if (m.source() != o || m.target() != o) return std::nullopt;
        return m.scalar_identity();
    }
    static std::vector<Morphism> hom_basis(const Object& s, const Object& t, int degree) { return cheb::hom_basis(s, t, degree); }

    template <class F>
    static void for_coordinates(const Morphism& m, F&& f) {
        for (auto& [mask, c] : m.terms()) f(static_cast<long long>(mask), c);
    }

    static TLElement euler_class(const Object& o) { return TLElement::from_tangle(o); }
    static std::string describe(const Object& o) { return o.to_string(); }
};

/// Bounded complex over Base. Generators carry stable integer ids; the differential is a sparse
/// matrix of base morphisms from a generator at tdeg t to generators at tdeg t+1.
///
/// A differential entry x -> y is a morphism of intrinsic degree qshift(x) - qshift(y).
template <class Base>
class Complex {
public:
    using Object = typename Base::Object;
    using Morphism = typename Base::Morphism;

    struct Generator {
        Object object;
        int qshift = 0;
        int tdeg = 0;
        std::string label;
    };

    Complex() = default;
    /// Complex over Hom(n points, m points).
    Complex(int n, int m) : n_(n), m_(m) {}

    int n() const { return n_; }
    int m() const { return m_; }

    int add(Object o, int qshift, int tdeg, std::string label = {}) {
        int id = next_id_++;
        gens_.emplace(id, Generator{std::move(o), qshift, tdeg, std::move(label)});
        out_[id];
        in_[id];
        return id;
    }
    /// Adds a generator with a chosen id (must be unused).
    void add_with_id(int id, Object o, int qshift, int tdeg, std::string label = {}) {
        if (gens_.count(id)) throw std::invalid_argument("Complex: duplicate generator id");
        gens_.emplace(id, Generator{std::move(o), qshift, tdeg, std::move(label)});
        out_[id];
        in_[id];
        next_id_ = std::max(next_id_, id + 1);
    }

    bool contains(int id) const { return gens_.count(id) != 0; }
    const Generator& gen(int id) const { return gens_.at(id); }
    const std::map<int, Generator>& generators() const { return gens_; }
    std::size_t size() const { return gens_.size(); }
    bool empty() const { return gens_.empty(); }
    int next_id() const { return next_id_; }

    std::vector<int> in_degree(int t) const {
        std::vector<int> r;
        for (auto& [id, g] : gens_)
            if (g.tdeg == t) r.push_back(id);
        return r;
    }
    std::optional<std::pair<int, int>> tdeg_range() const {
        if (gens_.empty()) return std::nullopt;
        int lo = INT_MAX, hi = INT_MIN;
        for (auto& [id, g] : gens_) {
            lo = std::min(lo, g.tdeg);
            hi = std::max(hi, g.tdeg);
        }
        return std::make_pair(lo, hi);
    }

    const std::map<int, Morphism>& out(int from) const { return out_.at(from); }
    const std::set<int>& in(int to) const { return in_.at(to); }
    const Morphism* entry(int from, int to) const {
        auto& o = out_.at(from);
        auto it = o.find(to);
        return it == o.end() ? nullptr : &it->second;
    }
    std::size_t entry_count() const {
        std::size_t k = 0;
        for (auto& [id, o] : out_) k += o.size();
        return k;
    }

    void set(int from, int to, Morphism mor) {
        check_entry(from, to);
        if (mor.is_zero()) {
            out_[from].erase(to);
            in_[to].erase(from);
            return;
        }
        out_[from].insert_or_assign(to, std::move(mor));
        in_[to].insert(from);
    }
    void add_to(int from, int to, const Morphism& mor) {
        if (mor.is_zero()) return;
        check_entry(from, to);
        auto& o = out_[from];
        auto it = o.find(to);
        if (it == o.end()) {
            o.emplace(to, mor);
            in_[to].insert(from);
            return;
        }
        it->second += mor;
        if (it->second.is_zero()) {
            o.erase(it);
            in_[to].erase(from);
        }
    }

    void remove(int id) {
        for (auto& [to, mor] : out_.at(id)) in_[to].erase(id);
        for (int from : in_.at(id)) out_[from].erase(id);
        out_.erase(id);
        in_.erase(id);
        gens_.erase(id);
    }

    void set_label(int id, std::string label) { gens_.at(id).label = std::move(label); }

    /// Lowest kept tdeg when this complex is a truncation; INT_MIN otherwise.
    int low_cut = INT_MIN;

private:
    void check_entry(int from, int to) const {
        const auto& a = gens_.at(from);
        const auto& b = gens_.at(to);
        if (b.tdeg != a.tdeg + 1) throw std::invalid_argument("Complex: differential must raise tdeg by one");
    }

    int n_ = 0, m_ = 0;
    int next_id_ = 0;
    std::map<int, Generator> gens_;
    std::map<int, std::map<int, Morphism>> out_;
    std::map<int, std::set<int>> in_;
};

/// Sparse map between complexes: entries[from][to], homological degree tdeg.
template <class Base>
struct ChainMap {
    using Morphism = typename Base::Morphism;
    int tdeg = 0;
    std::map<int, std::map<int, Morphism>> entries;

    void add(int from, int to, const Morphism& m) {
        if (m.is_zero()) return;
        auto& row = entries[from];
        auto it = row.find(to);
        if (it == row.end()) {
            row.emplace(to, m);
            return;
        }
        it->second += m;
        if (it->second.is_zero()) {
            row.erase(it);
            if (row.empty()) entries.erase(from);
        }
    }
    const Morphism* get(int from, int to) const {
        auto it = entries.find(from);
        if (it == entries.end()) return nullptr;
        auto jt = it->second.find(to);
        return jt == it->second.end() ? nullptr : &jt->second;
    }
    bool is_zero() const {
        for (auto& [f, row] : entries)
            if (!row.empty()) return false;
        return true;
    }
    std::size_t size() const {
        std::size_t k = 0;
        for (auto& [f, row] : entries) k += row.size();
        return k;
    }
    ChainMap scaled(const FieldElem& c) const {
        ChainMap r;
        r.tdeg = tdeg;
        for (auto& [f, row] : entries)
            for (auto& [t, m] : row) r.add(f, t, m.scaled(c));
        return r;
    }
    ChainMap& operator+=(const ChainMap& o) {
        for (auto& [f, row] : o.entries)
            for (auto& [t, m] : row) add(f, t, m);
        return *this;
    }
    ChainMap& operator-=(const ChainMap& o) { return *this += o.scaled(FieldElem(-1)); }
};

template <class Base>
ChainMap<Base> identity_map(const Complex<Base>& c) {
    ChainMap<Base> r;
    for (auto& [id, g] : c.generators()) r.add(id, id, Base::identity(g.object));
    return r;
}

/// g o f.
template <class Base>
ChainMap<Base> compose(const ChainMap<Base>& g, const ChainMap<Base>& f) {
    ChainMap<Base> r;
    r.tdeg = f.tdeg + g.tdeg;
    for (auto& [x, row] : f.entries)
        for (auto& [y, a] : row) {
            auto it = g.entries.find(y);
            if (it == g.entries.end()) continue;
            for (auto& [z, b] : it->second) r.add(x, z, Base::compose(b, a));
        }
    return r;
}

/// The differential of C viewed as a degree-one map C -> C.
template <class Base>
ChainMap<Base> differential(const Complex<Base>& c) {
    ChainMap<Base> r;
    r.tdeg = 1;
    for (auto& [id, g] : c.generators())
        for (auto& [to, m] : c.out(id)) r.add(id, to, m);
    return r;
}

/// [delta, f] = delta_Y o f - (-1)^{|f|} f o delta_X.
template <class Base>
ChainMap<Base> commutator(const Complex<Base>& x, const Complex<Base>& y, const ChainMap<Base>& f) {
    ChainMap<Base> r = compose(differential(y), f);
    ChainMap<Base> b = compose(f, differential(x));
    r -= (f.tdeg % 2 == 0) ? b : b.scaled(FieldElem(-1));
    r.tdeg = f.tdeg + 1;
    return r;
}

template <class Base>
bool is_closed(const Complex<Base>& x, const Complex<Base>& y, const ChainMap<Base>& f) {
    return commutator(x, y, f).is_zero();
}

template <class Base>
struct Square {
    int from = 0, to = 0;
    typename Base::Morphism composite;
};

/// First nonzero entry of delta o delta, if any.
template <class Base>
std::optional<Square<Base>> d_squared_check(const Complex<Base>& c) {
    for (auto& [x, g] : c.generators()) {
        std::map<int, typename Base::Morphism> acc;
        for (auto& [y, a] : c.out(x))
            for (auto& [z, b] : c.out(y)) {
                auto comp = Base::compose(b, a);
                auto it = acc.find(z);
                if (it == acc.end()) acc.emplace(z, std::move(comp));
                else it->second += comp;
            }
        for (auto& [z, m] : acc)
            if (!m.is_zero()) return Square<Base>{x, z, m};
    }
    return std::nullopt;
}

/// t^dt q^dq C; the differential picks up (-1)^dt.
template <class Base>
Complex<Base> shifted(const Complex<Base>& c, int dt, int dq = 0) {
    Complex<Base> r(c.n(), c.m());
    for (auto& [id, g] : c.generators()) r.add_with_id(id, g.object, g.qshift + dq, g.tdeg + dt, g.label);
    bool neg = dt % 2 != 0;
    for (auto& [id, g] : c.generators())
        for (auto& [to, m] : c.out(id)) r.set(id, to, neg ? -m : m);
    if (c.low_cut != INT_MIN) r.low_cut = c.low_cut + dt;
    return r;
}

/// Sum of several complexes with ids renumbered; parts[i][old id] = new id.
template <class Base>
struct Assembled {
    Complex<Base> complex;
    std::vector<std::map<int, int>> parts;
};

template <class Base>
Assembled<Base> direct_sum(const std::vector<const Complex<Base>*>& cs) {
    if (cs.empty()) throw std::invalid_argument("direct_sum: no summands");
    Assembled<Base> r;
    r.complex = Complex<Base>(cs.front()->n(), cs.front()->m());
    for (auto* c : cs) {
        // TL complexes live in the whole category, so only BN has a boundary to match
        if constexpr (!std::is_same_v<Base, TLBase>)
            if (c->n() != cs.front()->n() || c->m() != cs.front()->m()) throw BaseMismatch("direct_sum: boundary mismatch");
        auto& ids = r.parts.emplace_back();
        for (auto& [id, g] : c->generators()) ids[id] = r.complex.add(g.object, g.qshift, g.tdeg, g.label);
        for (auto& [id, g] : c->generators())
            for (auto& [to, m] : c->out(id)) r.complex.set(ids[id], ids[to], m);
        if (c->low_cut != INT_MIN) r.complex.low_cut = std::max(r.complex.low_cut, c->low_cut);
    }
    return r;
}

/// Cone(f) = (t^{-1} X -f-> Y). parts[0] maps X ids, parts[1] maps Y ids.
template <class Base>
Assembled<Base> cone(const Complex<Base>& x, const Complex<Base>& y, const ChainMap<Base>& f) {
    if (f.tdeg != 0) throw NotClosed("cone: map must have degree zero");
    if (!is_closed(x, y, f)) throw NotClosed("cone: map is not closed");
    Complex<Base> sx = shifted(x, -1);
    Assembled<Base> r = direct_sum<Base>({&sx, &y});
    for (auto& [a, row] : f.entries)
        for (auto& [b, m] : row) r.complex.add_to(r.parts[0].at(a), r.parts[1].at(b), m);
    return r;
}

/// Total complex of a product of complexes; A is the left or top factor and carries the Koszul sign.
template <class Base>
struct Product {
    Complex<Base> complex;
    std::map<std::pair<int, int>, int> ids;
};

template <class Base, class ObjOp, class MorOp>
Product<Base> product_total(const Complex<Base>& a, const Complex<Base>& b, int n, int m, ObjOp obj, MorOp mor) {
    Product<Base> r;
    r.complex = Complex<Base>(n, m);
    for (auto& [i, ga] : a.generators())
        for (auto& [j, gb] : b.generators())
            r.ids[{i, j}] = r.complex.add(obj(ga.object, gb.object), ga.qshift + gb.qshift, ga.tdeg + gb.tdeg,
                                          ga.label.empty() && gb.label.empty() ? std::string() : ga.label + "|" + gb.label);
    for (auto& [i, ga] : a.generators())
        for (auto& [j, gb] : b.generators()) {
            int src = r.ids.at({i, j});
            auto idb = Base::identity(gb.object);
            for (auto& [i2, m] : a.out(i)) r.complex.add_to(src, r.ids.at({i2, j}), mor(m, idb));
            auto ida = Base::identity(ga.object);
            bool neg = ga.tdeg % 2 != 0;
            for (auto& [j2, m] : b.out(j)) {
                auto e = mor(ida, m);
                r.complex.add_to(src, r.ids.at({i, j2}), neg ? -e : e);
            }
        }
    if (a.low_cut != INT_MIN || b.low_cut != INT_MIN) {
        auto ra = a.tdeg_range(), rb = b.tdeg_range();
        int cut = INT_MIN;
        if (ra && rb) {
            if (a.low_cut != INT_MIN) cut = std::max(cut, a.low_cut + rb->second);
            if (b.low_cut != INT_MIN) cut = std::max(cut, b.low_cut + ra->second);
        }
        r.complex.low_cut = cut;
    }
    return r;
}

/// A (x) B over TL: juxtaposition, Koszul sign on the left factor's degree.
inline Product<TLBase> tensor(const Complex<TLBase>& a, const Complex<TLBase>& b) {
    return product_total(a, b, a.n() + b.n(), a.m() + b.m(), [](const TLBase::Object& x, const TLBase::Object& y) { return TLBase::juxtapose(x, y); },
                         [](const TLElement& x, const TLElement& y) { return TLElement::juxtapose(x, y); });
}

/// A * B over BN: A over (k,m) stacked on B over (n,k).
inline Product<BNBase> star_compose(const Complex<BNBase>& a, const Complex<BNBase>& b) {
    if (a.n() != b.m()) throw BaseMismatch("star_compose: boundary mismatch");
    return product_total(a, b, b.n(), a.m(), [](const FlatTangle& x, const FlatTangle& y) { return FlatTangle::compose(x, y); },
                         [](const Cobordism& x, const Cobordism& y) { return Cobordism::star(x, y); });
}

/// Side-by-side union over BN, A on the left.
inline Product<BNBase> juxtapose(const Complex<BNBase>& a, const Complex<BNBase>& b) {
    return product_total(a, b, a.n() + b.n(), a.m() + b.m(), [](const FlatTangle& x, const FlatTangle& y) { return FlatTangle::juxtapose(x, y); },
                         [](const Cobordism& x, const Cobordism& y) { return Cobordism::juxtapose(x, y); });
}

/// One-term complex on a single object.
template <class Base>
Complex<Base> one_term(int n, int m, typename Base::Object o, int qshift = 0, int tdeg = 0, std::string label = {}) {
    Complex<Base> c(n, m);
    c.add(std::move(o), qshift, tdeg, std::move(label));
    return c;
}

/// Homotopy equivalence data: f : C -> C', g : C' -> C, h : C -> C of degree -1 with
/// [delta, h] = id - g o f and f o g = id.
template <class Base>
struct Equivalence {
    ChainMap<Base> f, g, h;
    static Equivalence identity_on(const Complex<Base>& c) {
        Equivalence e{identity_map(c), identity_map(c), {}};
        e.h.tdeg = -1;
        return e;
    }
};

namespace detail {

/// Replaces every f entry a -> x by entries a -> x_i given by post[i] o (a -> x).
template <class Base>
void retarget(ChainMap<Base>& f, int x, const std::vector<std::pair<int, typename Base::Morphism>>& post) {
    for (auto& [a, row] : f.entries) {
        auto it = row.find(x);
        if (it == row.end()) continue;
        auto m = std::move(it->second);
        row.erase(it);
        for (auto& [xi, p] : post) {
            auto c = Base::compose(p, m);
            if (c.is_zero()) continue;
            auto jt = row.find(xi);
            if (jt == row.end()) row.emplace(xi, std::move(c));
            else jt->second += c;
        }
    }
}

}  // namespace detail

/// Replaces every generator carrying circles by its delooped copies q^{+1} and q^{-1}, one
/// circle at a time. Returns the number of circles removed.
inline int deloop_pass(Complex<BNBase>& c, Equivalence<BNBase>* track = nullptr) {
    int removed = 0;
    std::vector<int> work;
    for (auto& [id, g] : c.generators())
        if (g.object.circles() > 0) work.push_back(id);
    while (!work.empty()) {
        int x = work.back();
        work.pop_back();
        auto gx = c.gen(x);
        Delooping d = deloop(gx.object);
        int xp = c.add(d.reduced, gx.qshift + 1, gx.tdeg, gx.label + "+");
        int xm = c.add(d.reduced, gx.qshift - 1, gx.tdeg, gx.label + "-");
        for (int u : std::vector<int>(c.in(x).begin(), c.in(x).end())) {
            const Cobordism& a = *c.entry(u, x);
            c.add_to(u, xp, d.up * a);
            c.add_to(u, xm, d.down * a);
        }
        for (auto& [v, e] : std::map<int, Cobordism>(c.out(x))) {
            c.add_to(xp, v, e * d.up_inv);
            c.add_to(xm, v, e * d.down_inv);
        }
        c.remove(x);
        if (track) {
            detail::retarget(track->f, x, {{xp, d.up}, {xm, d.down}});
            auto it = track->g.entries.find(x);
            if (it != track->g.entries.end()) {
                auto row = std::move(it->second);
                track->g.entries.erase(it);
                for (auto& [b, m] : row) {
                    track->g.add(xp, b, m * d.up_inv);
                    track->g.add(xm, b, m * d.down_inv);
                }
            }
        }
        ++removed;
        if (d.reduced.circles() > 0) {
            work.push_back(xp);
            work.push_back(xm);
        }
    }
    return removed;
}

/// Cancels the entry x -> y, which must be c * identity on identical generators.
template <class Base>
void eliminate_pair(Complex<Base>& c, int x, int y, Equivalence<Base>* track = nullptr) {
    const auto& gx = c.gen(x);
    const auto& gy = c.gen(y);
    const auto* b = c.entry(x, y);
    if (!b || gx.qshift != gy.qshift || !(gx.object == gy.object)) throw std::invalid_argument("eliminate_pair: entry is not cancellable");
    auto unit = Base::unit_scalar(*b, gx.object);
    if (!unit || unit->is_zero()) throw std::invalid_argument("eliminate_pair: entry is not a unit multiple of identity");
    FieldElem inv = unit->inverse();
    std::vector<std::pair<int, typename Base::Morphism>> into_y, out_of_x;
    for (int u : c.in(y))
        if (u != x) into_y.emplace_back(u, *c.entry(u, y));
    for (auto& [v, e] : c.out(x))
        if (v != y) out_of_x.emplace_back(v, e);
    for (auto& [u, a] : into_y)
        for (auto& [v, e] : out_of_x) c.add_to(u, v, Base::compose(e, a).scaled(-inv));
    if (track) {
        // h += g o h_step o f with h_step = b^{-1} : y -> x, using the old f and g
        auto gx_row = track->g.entries.count(x) ? track->g.entries.at(x) : std::map<int, typename Base::Morphism>{};
        for (auto& [a, row] : track->f.entries) {
            auto it = row.find(y);
            if (it == row.end()) continue;
            for (auto& [bb, n] : gx_row) track->h.add(a, bb, Base::compose(n, it->second).scaled(inv));
        }
        // f <- f_step o f: drop x, send y to -gamma b^{-1}
        std::vector<std::pair<int, typename Base::Morphism>> post;
        for (auto& [v, e] : out_of_x) post.emplace_back(v, e.scaled(-inv));
        detail::retarget(track->f, x, {});
        detail::retarget(track->f, y, post);
        // g <- g o g_step: u -> u - b^{-1} delta_u x
        for (auto& [u, a] : into_y)
            for (auto& [bb, n] : gx_row) track->g.add(u, bb, Base::compose(n, a).scaled(-inv));
        track->g.entries.erase(x);
        track->g.entries.erase(y);
    }
    c.remove(x);
    c.remove(y);
}

/// Repeatedly cancels unit-identity differential entries. Returns the number of cancelled pairs.
template <class Base>
int gaussian_eliminate(Complex<Base>& c, Equivalence<Base>* track = nullptr) {
    int count = 0;
    bool changed = true;
    while (changed) {
        changed = false;
        std::vector<int> ids;
        for (auto& [id, g] : c.generators()) ids.push_back(id);
        for (int x : ids) {
            if (!c.contains(x)) continue;
            const auto& gx = c.gen(x);
            int target = -1;
            for (auto& [y, b] : c.out(x)) {
                const auto& gy = c.gen(y);
                if (gy.qshift != gx.qshift || !(gy.object == gx.object)) continue;
                auto u = Base::unit_scalar(b, gx.object);
                if (u && !u->is_zero()) {
                    target = y;
                    break;
                }
            }
            if (target < 0) continue;
            eliminate_pair(c, x, target, track);
            ++count;
            changed = true;
        }
    }
    return count;
}

/// deloop_pass and gaussian_eliminate until neither changes the complex.
inline Complex<BNBase> simplify(Complex<BNBase> c, Equivalence<BNBase>* track = nullptr) {
    while (true) {
        int a = deloop_pass(c, track);
        int b = gaussian_eliminate(c, track);
        if (a == 0 && b == 0) break;
    }
    return c;
}

/// Drops every generator below tdeg -depth and records the cut.
template <class Base>
Complex<Base> truncate(Complex<Base> c, int depth) {
    std::vector<int> drop;
    for (auto& [id, g] : c.generators())
        if (g.tdeg < -depth) drop.push_back(id);
    for (int id : drop) c.remove(id);
    c.low_cut = std::max(c.low_cut, -depth);
    return c;
}

/// Graded Euler characteristic sum_gen (-1)^tdeg q^qshift [object] as a TL element.
template <class Base>
TLElement euler_characteristic(const Complex<Base>& c) {
    TLElement r(c.n(), c.m());
    for (auto& [id, g] : c.generators()) {
        FieldElem s = FieldElem::q_power(g.qshift);
        r.axpy(g.tdeg % 2 == 0 ? s : -s, Base::euler_class(g.object));
    }
    return r;
}

/// Solves [delta, h] = f for h : X -> Y of degree |f| - 1 on the source tdeg window [lo, hi].
///
/// f must be closed; qdeg offsets the intrinsic degree of h entries from qshift(x) - qshift(y).
/// Unknowns are coefficients over Base::hom_basis for every pair of generators with source tdeg
/// in [lo, hi + 1]. Equations are the coordinates of [delta, h] - f at sources in [lo, hi].
template <class Base>
ChainMap<Base> null_homotopy_solve(const Complex<Base>& x, const Complex<Base>& y, const ChainMap<Base>& f, std::pair<int, int> window,
                                   int qdeg = 0) {
    auto [lo, hi] = window;
    int cut = std::max(x.low_cut, y.low_cut - f.tdeg);
    if (cut != INT_MIN && lo <= cut) throw WindowTooSmall("null_homotopy_solve: window reaches the truncation boundary");
    const int hdeg = f.tdeg - 1;
    using Morphism = typename Base::Morphism;
    struct Unknown {
        int from, to;
        Morphism m;
    };
    std::vector<Unknown> unknowns;
    for (auto& [a, ga] : x.generators()) {
        if (ga.tdeg < lo || ga.tdeg > hi + 1) continue;
        for (auto& [b, gb] : y.generators()) {
            if (gb.tdeg != ga.tdeg + hdeg) continue;
            for (auto& m : Base::hom_basis(ga.object, gb.object, ga.qshift - gb.qshift + qdeg)) unknowns.push_back({a, b, m});
        }
    }
    std::map<std::tuple<int, int, long long>, int> eq_index;
    std::vector<SparseRow<FieldElem>> rows;
    std::vector<FieldElem> rhs;
    auto eq = [&](int a, int b, long long k) {
        auto [it, fresh] = eq_index.try_emplace({a, b, k}, static_cast<int>(rows.size()));
        if (fresh) {
            rows.emplace_back();
            rhs.emplace_back(0);
        }
        return it->second;
    };
    auto in_window = [&](int a) {
        int t = x.gen(a).tdeg;
        return t >= lo && t <= hi;
    };
    const FieldElem sign = hdeg % 2 == 0 ? FieldElem(-1) : FieldElem(1);
    for (std::size_t u = 0; u < unknowns.size(); ++u) {
        const auto& [a, b, m] = unknowns[u];
        int col = static_cast<int>(u);
        if (in_window(a))
            for (auto& [b2, d] : y.out(b))
                Base::for_coordinates(Base::compose(d, m), [&](long long k, const FieldElem& c) {
                    auto& cell = rows[eq(a, b2, k)][col];
                    cell = cell + c;
                });
        for (int a2 : x.in(a)) {
            if (!in_window(a2)) continue;
            Base::for_coordinates(Base::compose(m, *x.entry(a2, a)), [&](long long k, const FieldElem& c) {
                auto& cell = rows[eq(a2, b, k)][col];
                cell = cell + sign * c;
            });
        }
    }
    for (auto& [a, row] : f.entries) {
        if (!x.contains(a) || !in_window(a)) continue;
        for (auto& [b, m] : row) Base::for_coordinates(m, [&](long long k, const FieldElem& c) { rhs[eq(a, b, k)] += c; });
    }
    SparseSolver<FieldElem> solver;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        auto& r = rows[i];
        for (auto it = r.begin(); it != r.end();) it = it->second.is_zero() ? r.erase(it) : std::next(it);
        if (!solver.add_equation(std::move(r), rhs[i])) throw NotNullHomotopic("null_homotopy_solve: system is inconsistent");
    }
    ChainMap<Base> h;
    h.tdeg = hdeg;
    for (auto& [col, v] : solver.solve()) {
        const auto& un = unknowns[static_cast<std::size_t>(col)];
        h.add(un.from, un.to, un.m.scaled(v));
    }
    return h;
}

/// Twisted complex tw_alpha(sum_i X_i): alpha[(k, l)] is a degree-one map X_l -> X_k with k > l.
template <class Base>
struct TwistedComplex {
    std::vector<Complex<Base>> parts;
    std::map<std::pair<int, int>, ChainMap<Base>> alpha;
};

template <class Base>
Assembled<Base> assemble(const TwistedComplex<Base>& tw) {
    std::vector<const Complex<Base>*> ps;
    for (auto& p : tw.parts) ps.push_back(&p);
    Assembled<Base> r = direct_sum(ps);
    for (auto& [kl, a] : tw.alpha) {
        auto [k, l] = kl;
        for (auto& [s, row] : a.entries)
            for (auto& [t, m] : row) r.complex.add_to(r.parts[static_cast<std::size_t>(l)].at(s), r.parts[static_cast<std::size_t>(k)].at(t), m);
    }
    return r;
}

/// Per-index equivalence X_i ~ Y_i: f : X -> Y, g : Y -> X, h on X with [delta, h] = id - g f.
template <class Base>
struct Transfer {
    Complex<Base> target;
    ChainMap<Base> f, g, h;
};

template <class Base>
struct Perturbed {
    TwistedComplex<Base> twisted;
    /// F[(k, l)] : X_l -> Y_k, including the diagonal F_kk = f_k.
    std::map<std::pair<int, int>, ChainMap<Base>> F;
};

/// Homological perturbation: the twist beta on sum_i Y_i and the equivalence F.
///
/// beta_kl = f_k W_kl with W_kl = alpha_kl g_l - sum_{k>j>l} alpha_kj h_j W_jl, and
/// F_kl = -f_k V_kl with V_kl = alpha_kl h_l - sum_{k>j>l} alpha_kj h_j V_jl.
template <class Base>
Perturbed<Base> perturb_transfer(const TwistedComplex<Base>& x, const std::vector<Transfer<Base>>& eq) {
    const int N = static_cast<int>(x.parts.size());
    if (static_cast<int>(eq.size()) != N) throw std::invalid_argument("perturb_transfer: one equivalence per index");
    for (auto& [kl, a] : x.alpha)
        if (kl.first <= kl.second || kl.first >= N || kl.second < 0) throw ChainConditionViolated("perturb_transfer: twist is not one-sided");
    auto alpha = [&](int k, int l) -> const ChainMap<Base>* {
        auto it = x.alpha.find({k, l});
        return it == x.alpha.end() ? nullptr : &it->second;
    };
    Perturbed<Base> r;
    for (auto& e : eq) r.twisted.parts.push_back(e.target);
    for (int k = 0; k < N; ++k) r.F[{k, k}] = eq[static_cast<std::size_t>(k)].f;
    for (int l = 0; l < N; ++l) {
        std::map<int, ChainMap<Base>> W, V;
        for (int k = l + 1; k < N; ++k) {
            ChainMap<Base> w, v;
            if (auto* a = alpha(k, l)) {
                w = compose(*a, eq[static_cast<std::size_t>(l)].g);
                v = compose(*a, eq[static_cast<std::size_t>(l)].h);
            }
            for (int j = l + 1; j < k; ++j) {
                auto* a = alpha(k, j);
                if (!a) continue;
                ChainMap<Base> ah = compose(*a, eq[static_cast<std::size_t>(j)].h);
                w -= compose(ah, W[j]);
                v -= compose(ah, V[j]);
            }
            w.tdeg = 1;
            v.tdeg = 0;
            ChainMap<Base> beta = compose(eq[static_cast<std::size_t>(k)].f, w);
            if (!beta.is_zero()) r.twisted.alpha[{k, l}] = beta;
            ChainMap<Base> F = compose(eq[static_cast<std::size_t>(k)].f, v).scaled(FieldElem(-1));
            F.tdeg = 0;
            if (!F.is_zero()) r.F[{k, l}] = F;
            W[k] = std::move(w);
            V[k] = std::move(v);
        }
    }
    return r;
}

/// Interface identification for splicing: `from` is the t^{-1}E copy in part `from_part`, `to`
/// the E copy in part `to_part`.
struct SpliceLink {
    int from_part, from, to_part, to;
};

/// Pre-spliced complex: the parts joined by -id from each t^{-1}E copy to its E copy.
template <class Base>
Assembled<Base> prespliced(const std::vector<Complex<Base>>& parts, const std::vector<SpliceLink>& links) {
    std::vector<const Complex<Base>*> ps;
    for (auto& p : parts) ps.push_back(&p);
    Assembled<Base> r = direct_sum(ps);
    for (auto& l : links) {
        const auto& a = parts.at(static_cast<std::size_t>(l.from_part)).gen(l.from);
        const auto& b = parts.at(static_cast<std::size_t>(l.to_part)).gen(l.to);
        if (!(a.object == b.object) || a.qshift != b.qshift || b.tdeg != a.tdeg + 1)
            throw InterfaceMismatch("splice: interface generators do not match");
        r.complex.add_to(r.parts[static_cast<std::size_t>(l.from_part)].at(l.from), r.parts[static_cast<std::size_t>(l.to_part)].at(l.to),
                         -Base::identity(a.object));
    }
    return r;
}

/// Splice: cancels every interface pair of the pre-spliced complex, leaving the composites
/// beta o alpha across each interface.
template <class Base>
Complex<Base> splice(const std::vector<Complex<Base>>& parts, const std::vector<SpliceLink>& links, Equivalence<Base>* track = nullptr) {
    Assembled<Base> pre = prespliced(parts, links);
    if (track) *track = Equivalence<Base>::identity_on(pre.complex);
    for (auto& l : links)
        eliminate_pair(pre.complex, pre.parts[static_cast<std::size_t>(l.from_part)].at(l.from),
                       pre.parts[static_cast<std::size_t>(l.to_part)].at(l.to), track);
    return std::move(pre.complex);
}

template <class Base>
struct Combed {
    Complex<Base> complex;
    ChainMap<Base> phi, phi_inv;
};

/// Combing hairs for a finite twisted complex with one generator per index.
///
/// `order` lists generator ids from the minimum to the maximum of the fine order; every
/// differential entry must point forward. An entry i -> j survives only when
/// omega(i) < omega(j), or omega(i) = omega(j) and a(i) < a(j). Other entries are removed by
/// conjugating with unitriangular isomorphisms, processing i from the top down.
template <class Base>
Combed<Base> comb(const Complex<Base>& c, const std::map<int, int>& omega, const std::map<int, int>& a, std::vector<int> order = {},
                  std::function<bool(int, int)> omega_less = std::less<int>()) {
    if (order.empty()) {
        for (auto& [id, g] : c.generators()) order.push_back(id);
        std::stable_sort(order.begin(), order.end(), [&](int p, int q) { return c.gen(p).tdeg < c.gen(q).tdeg; });
    }
    if (order.size() != c.size()) throw std::invalid_argument("comb: order must list every generator");
    std::map<int, int> pos;
    for (std::size_t i = 0; i < order.size(); ++i) pos[order[i]] = static_cast<int>(i);
    for (auto& [id, g] : c.generators())
        for (auto& [to, m] : c.out(id))
            if (pos.at(to) <= pos.at(id)) throw std::invalid_argument("comb: differential is not one-sided for the given order");
    auto keeps = [&](int i, int j) {
        int wi = omega.at(i), wj = omega.at(j);
        if (omega_less(wi, wj)) return true;
        return wi == wj && a.at(i) < a.at(j);
    };
    Combed<Base> r{c, identity_map(c), identity_map(c)};
    Complex<Base>& d = r.complex;
    using Morphism = typename Base::Morphism;
    for (std::size_t p = order.size(); p-- > 0;) {
        int i = order[p];
        const auto& gi = d.gen(i);
        std::vector<int> bad;
        for (auto& [j, m] : d.out(i))
            if (!keeps(i, j)) bad.push_back(j);
        if (bad.empty()) continue;
        struct Unknown {
            int to;
            Morphism m;
        };
        std::vector<Unknown> unknowns;
        for (std::size_t q = p + 1; q < order.size(); ++q) {
            int j = order[q];
            const auto& gj = d.gen(j);
            if (gj.tdeg != gi.tdeg) continue;
            for (auto& m : Base::hom_basis(gi.object, gj.object, gi.qshift - gj.qshift)) unknowns.push_back({j, m});
        }
        // solve sum_{j'} delta(j' -> j) h(i -> j') = delta(i -> j) for every j that must lose its entry
        std::map<std::pair<int, long long>, int> eqs;
        std::vector<SparseRow<FieldElem>> rows;
        std::vector<FieldElem> rhs;
        auto eq = [&](int j, long long k) {
            auto [it, fresh] = eqs.try_emplace({j, k}, static_cast<int>(rows.size()));
            if (fresh) {
                rows.emplace_back();
                rhs.emplace_back(0);
            }
            return it->second;
        };
        std::set<int> bad_set(bad.begin(), bad.end());
        for (int j : bad) Base::for_coordinates(*d.entry(i, j), [&](long long k, const FieldElem& v) { rhs[eq(j, k)] += v; });
        for (std::size_t u = 0; u < unknowns.size(); ++u)
            for (auto& [j, dm] : d.out(unknowns[u].to)) {
                if (!bad_set.count(j)) continue;
                Base::for_coordinates(Base::compose(dm, unknowns[u].m), [&](long long k, const FieldElem& v) {
                    auto& cell = rows[eq(j, k)][static_cast<int>(u)];
                    cell = cell + v;
                });
            }
        SparseSolver<FieldElem> solver;
        for (std::size_t e = 0; e < rows.size(); ++e) {
            auto& row = rows[e];
            for (auto it = row.begin(); it != row.end();) it = it->second.is_zero() ? row.erase(it) : std::next(it);
            if (!solver.add_equation(std::move(row), rhs[e])) throw HypothesisFailed("comb: a backward component is not removable by homotopy");
        }
        std::map<int, Morphism> h;
        for (auto& [col, v] : solver.solve()) {
            const auto& un = unknowns[static_cast<std::size_t>(col)];
            auto it = h.find(un.to);
            if (it == h.end()) h.emplace(un.to, un.m.scaled(v));
            else it->second += un.m.scaled(v);
        }
        // conjugate by phi_i: i -> i + h
        for (auto& [j2, hm] : h)
            for (auto& [j, dm] : std::map<int, Morphism>(d.out(j2))) d.add_to(i, j, -Base::compose(dm, hm));
        for (int w : std::vector<int>(d.in(i).begin(), d.in(i).end())) {
            Morphism kappa = *d.entry(w, i);
            for (auto& [j2, hm] : h) d.add_to(w, j2, Base::compose(hm, kappa));
        }
        for (auto& [src, row] : std::map<int, std::map<int, Morphism>>(r.phi.entries)) {
            auto it = row.find(i);
            if (it == row.end()) continue;
            for (auto& [j2, hm] : h) r.phi.add(src, j2, Base::compose(hm, it->second));
        }
        for (auto& [j2, hm] : h) {
            auto it = r.phi_inv.entries.find(j2);
            if (it == r.phi_inv.entries.end()) continue;
            for (auto& [t, gm] : std::map<int, Morphism>(it->second)) r.phi_inv.add(i, t, -Base::compose(gm, hm));
        }
        for (int j : bad)
            if (d.entry(i, j)) throw HypothesisFailed("comb: residual backward component");
    }
    return r;
}

struct WindowVerdict {
    bool contractible = false;
    std::size_t residual = 0;  // generators left in the window after simplification
    std::string evidence;
};

/// Decides contractibility on the tdeg window: simplification first, then a null-homotopy of
/// the identity on what remains.
inline WindowVerdict contractible_on_window(const Complex<BNBase>& c, std::pair<int, int> window) {
    Complex<BNBase> s = simplify(c);
    WindowVerdict v;
    for (auto& [id, g] : s.generators())
        if (g.tdeg >= window.first && g.tdeg <= window.second) ++v.residual;
    if (v.residual == 0) {
        v.contractible = true;
        v.evidence = "no generators in window after simplify (" + std::to_string(s.size()) + " outside)";
        return v;
    }
    try {
        null_homotopy_solve(s, s, identity_map(s), window);
        v.contractible = true;
        v.evidence = "identity null-homotopic on window";
    } catch (const NotNullHomotopic&) {
        v.evidence = "identity not null-homotopic on window";
    } catch (const WindowTooSmall&) {
        v.evidence = "window reaches the truncation boundary";
    }
    return v;
}

/// Quasi-inverse of f : X -> Y read off a contracting homotopy of Cone(f).
/// [delta, hx] = id_X - g o f and [delta, hy] = id_Y - f o g.
template <class Base>
struct HomotopyInverse {
    ChainMap<Base> g, hx, hy;
};

/// Bounded complexes only. Returns nullopt when Cone(f) is not contractible.
template <class Base>
std::optional<HomotopyInverse<Base>> homotopy_inverse(const Complex<Base>& x, const Complex<Base>& y, const ChainMap<Base>& f) {
    auto c = cone(x, y, f);
    HomotopyInverse<Base> r;
    r.g.tdeg = 0;
    r.hx.tdeg = r.hy.tdeg = -1;
    if (c.complex.empty()) return r;
    auto range = *c.complex.tdeg_range();
    ChainMap<Base> H;
    try {
        H = null_homotopy_solve(c.complex, c.complex, identity_map(c.complex), range);
    } catch (const NotNullHomotopic&) {
        return std::nullopt;
    }
    std::map<int, int> back_x, back_y;
    for (auto& [o, nid] : c.parts[0]) back_x[nid] = o;
    for (auto& [o, nid] : c.parts[1]) back_y[nid] = o;
    for (auto& [a, row] : H.entries)
        for (auto& [b, m] : row) {
            bool ax = back_x.count(a), bx = back_x.count(b);
            if (!ax && bx) r.g.add(back_y.at(a), back_x.at(b), m);
            else if (ax && bx) r.hx.add(back_x.at(a), back_x.at(b), -m);
            else if (!ax && !bx) r.hy.add(back_y.at(a), back_y.at(b), m);
        }
    return r;
}

/// Checks the HomotopyInverse identities exactly.
template <class Base>
bool verify_inverse(const Complex<Base>& x, const Complex<Base>& y, const ChainMap<Base>& f, const HomotopyInverse<Base>& inv) {
    if (!is_closed(x, y, f) || !is_closed(y, x, inv.g)) return false;
    ChainMap<Base> a = commutator(x, x, inv.hx);
    a -= identity_map(x);
    a += compose(inv.g, f);
    ChainMap<Base> b = commutator(y, y, inv.hy);
    b -= identity_map(y);
    b += compose(f, inv.g);
    return a.is_zero() && b.is_zero();
}

}  // namespace cheb
