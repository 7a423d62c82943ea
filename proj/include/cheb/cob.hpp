#pragma once

#include "cheb/field_elem.hpp"
#include "cheb/tangle.hpp"

#include <bit>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace cheb {

struct NotPlanar : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct NoSuchBlock : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct GluingMismatch : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct NoCircle : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// A component of the source (side 0) or target (side 1) of a cobordism.
using CompRef = std::pair<int, int>;

/// Boundary loops of a cobordism between two tangles with the same endpoints:
/// source and target components joined along the vertical sides.
struct LoopStructure {
    int loops = 0;
    std::vector<int> src;  // loop of each source component
    std::vector<int> tgt;  // loop of each target component

    int loop_of(CompRef c) const { return c.first == 0 ? src.at(static_cast<std::size_t>(c.second)) : tgt.at(static_cast<std::size_t>(c.second)); }
};

namespace detail {

struct UnionFind {
    std::vector<int> p;
    explicit UnionFind(int n) : p(static_cast<std::size_t>(n)) { std::iota(p.begin(), p.end(), 0); }
    int find(int x) {
        while (p[static_cast<std::size_t>(x)] != x) x = p[static_cast<std::size_t>(x)] = p[static_cast<std::size_t>(p[static_cast<std::size_t>(x)])];
        return x;
    }
    void unite(int a, int b) { p[static_cast<std::size_t>(find(a))] = find(b); }
};

struct TangleListHash {
    std::size_t operator()(const std::vector<FlatTangle>& v) const {
        std::size_t h = v.size();
        for (auto& t : v) h = h * 1000003u ^ t.hash();
        return h;
    }
};

inline LoopStructure compute_loops(const FlatTangle& a, const FlatTangle& b) {
    if (a.n() != b.n() || a.m() != b.m()) throw BoundaryMismatch("cobordism ends must share boundary");
    const int ca = a.components(), cb = b.components();
    UnionFind uf(ca + cb);
    for (int p = 0; p < a.points(); ++p) uf.unite(a.arc_of_point(p), ca + b.arc_of_point(p));
    LoopStructure ls;
    ls.src.resize(static_cast<std::size_t>(ca));
    ls.tgt.resize(static_cast<std::size_t>(cb));
    std::unordered_map<int, int> id;
    for (int c = 0; c < ca + cb; ++c) {
        auto [it, fresh] = id.try_emplace(uf.find(c), ls.loops);
        if (fresh) ++ls.loops;
        (c < ca ? ls.src[static_cast<std::size_t>(c)] : ls.tgt[static_cast<std::size_t>(c - ca)]) = it->second;
    }
    return ls;
}

}  // namespace detail

/// Cached boundary-loop structure of the pair (a, b).
inline std::shared_ptr<const LoopStructure> loop_structure(const FlatTangle& a, const FlatTangle& b) {
    static std::mutex mu;
    static std::unordered_map<std::vector<FlatTangle>, std::shared_ptr<const LoopStructure>, detail::TangleListHash> cache;
    std::vector<FlatTangle> key{a, b};
    {
        std::lock_guard<std::mutex> lock(mu);
        auto it = cache.find(key);
        if (it != cache.end()) return it->second;
    }
    auto ls = std::make_shared<const LoopStructure>(detail::compute_loops(a, b));
    std::lock_guard<std::mutex> lock(mu);
    return cache.emplace(std::move(key), ls).first->second;
}

/// Surface assembled from dotted disks glued along intervals and circles, reduced to
/// disks on the output loops. Built once per tangle configuration and reused for all terms.
struct GluePlan {
    struct Component {
        std::uint64_t disks = 0;  // input disk mask
        std::vector<int> out;     // output loops
        int genus = 0;
    };
    std::vector<Component> comps;
    int out_loops = 0;

    GluePlan(int ndisks, const std::vector<std::pair<int, int>>& arc_glues, const std::vector<std::pair<int, int>>& circle_glues,
             const std::vector<int>& out_disk) {
        if (ndisks > 64 || static_cast<int>(out_disk.size()) > 64) throw std::length_error("cobordism has more than 64 boundary loops");
        out_loops = static_cast<int>(out_disk.size());
        detail::UnionFind uf(ndisks);
        for (auto [a, b] : arc_glues) uf.unite(a, b);
        for (auto [a, b] : circle_glues) uf.unite(a, b);
        std::map<int, int> idx;
        std::vector<int> chi;
        auto comp_of = [&](int disk) {
            auto [it, fresh] = idx.try_emplace(uf.find(disk), static_cast<int>(comps.size()));
            if (fresh) {
                comps.emplace_back();
                chi.push_back(0);
            }
            return it->second;
        };
        for (int d = 0; d < ndisks; ++d) {
            int c = comp_of(d);
            comps[static_cast<std::size_t>(c)].disks |= std::uint64_t{1} << d;
            ++chi[static_cast<std::size_t>(c)];
        }
        for (auto [a, b] : arc_glues) --chi[static_cast<std::size_t>(comp_of(a))];
        for (int l = 0; l < out_loops; ++l) comps[static_cast<std::size_t>(comp_of(out_disk[static_cast<std::size_t>(l)]))].out.push_back(l);
        for (std::size_t c = 0; c < comps.size(); ++c) {
            int twice_g = 2 - static_cast<int>(comps[c].out.size()) - chi[c];
            if (twice_g < 0 || twice_g % 2) throw std::logic_error("GluePlan: non-orientable or inconsistent gluing");
            comps[c].genus = twice_g / 2;
        }
    }

    /// Output terms (mask over output loops, integer multiplier) for an input dot mask.
    std::vector<std::pair<std::uint64_t, long>> apply(std::uint64_t dots) const {
        std::vector<std::pair<std::uint64_t, long>> acc{{0, 1}};
        for (auto& c : comps) {
            int e = std::popcount(dots & c.disks) + c.genus;
            if (e >= 2) return {};
            long f = 1L << c.genus;
            std::uint64_t all = 0;
            for (int l : c.out) all |= std::uint64_t{1} << l;
            if (c.out.empty()) {
                if (e != 1) return {};
                for (auto& t : acc) t.second *= f;
            } else if (e == 1) {
                for (auto& t : acc) {
                    t.first |= all;
                    t.second *= f;
                }
            } else {
                std::vector<std::pair<std::uint64_t, long>> next;
                next.reserve(acc.size() * c.out.size());
                for (auto& t : acc)
                    for (int l : c.out) next.emplace_back(t.first | (all & ~(std::uint64_t{1} << l)), t.second);
                acc = std::move(next);
            }
        }
        return acc;
    }
};

/// Morphism of the dotted Bar-Natan category with x^2 = 0 between flat tangles with the same boundary.
///
/// Stored in the disk basis: every term is a disjoint union of disks, one per boundary loop of
/// (source, target), each carrying at most one dot. Terms are dot masks over the loops.
class Cobordism {
public:
    using Term = std::pair<std::uint64_t, FieldElem>;

    Cobordism() = default;
    Cobordism(FlatTangle src, FlatTangle tgt) : src_(std::move(src)), tgt_(std::move(tgt)) { loops_ = loop_structure(src_, tgt_); }

    static Cobordism zero(const FlatTangle& s, const FlatTangle& t) { return Cobordism(s, t); }

    static Cobordism identity(const FlatTangle& t) {
        static std::mutex mu;
        static std::unordered_map<std::vector<FlatTangle>, Cobordism, detail::TangleListHash> cache;
        {
            std::lock_guard<std::mutex> lock(mu);
            auto it = cache.find({t});
            if (it != cache.end()) return it->second;
        }
        std::vector<std::vector<CompRef>> blocks;
        for (int c = 0; c < t.components(); ++c) blocks.push_back({{0, c}, {1, c}});
        Cobordism id = from_blocks(t, t, blocks);
        std::lock_guard<std::mutex> lock(mu);
        cache.emplace(std::vector<FlatTangle>{t}, id);
        return id;
    }

    /// Disk-basis element with the given dotted loops.
    static Cobordism disks(const FlatTangle& s, const FlatTangle& t, std::uint64_t dots, const FieldElem& c = FieldElem(1)) {
        Cobordism r(s, t);
        if (!c.is_zero()) r.terms_.emplace_back(dots, c);
        return r;
    }

    /// Genus-g connected surfaces with boundary on the listed components, reduced to the disk basis.
    /// Blocks must partition all components and contain whole boundary loops.
    static Cobordism from_blocks(const FlatTangle& s, const FlatTangle& t, const std::vector<std::vector<CompRef>>& blocks,
                                 const std::vector<int>& dots = {}, const std::vector<int>& genus = {},
                                 const FieldElem& c = FieldElem(1)) {
        Cobordism r(s, t);
        const LoopStructure& ls = *r.loops_;
        std::vector<int> block_of_loop(static_cast<std::size_t>(ls.loops), -1);
        std::size_t seen = 0;
        for (std::size_t b = 0; b < blocks.size(); ++b)
            for (CompRef cr : blocks[b]) {
                if (cr.first != 0 && cr.first != 1) throw NoSuchBlock("bad side");
                int ncomp = cr.first == 0 ? s.components() : t.components();
                if (cr.second < 0 || cr.second >= ncomp) throw NoSuchBlock("no such component");
                int l = ls.loop_of(cr);
                int& slot = block_of_loop[static_cast<std::size_t>(l)];
                if (slot >= 0 && slot != static_cast<int>(b)) throw GluingMismatch("components sharing a boundary loop are in different blocks");
                slot = static_cast<int>(b);
                ++seen;
            }
        if (seen != static_cast<std::size_t>(s.components() + t.components())) throw GluingMismatch("blocks do not partition the components");
        // a connected block with d dots and genus g acts as Delta^{(b)}(x^d (2x)^g) on its b loops
        Integer scale = 1;
        std::vector<std::pair<std::uint64_t, Integer>> acc{{0, 1}};
        for (std::size_t b = 0; b < blocks.size(); ++b) {
            int d = b < dots.size() ? dots[b] : 0;
            int g = b < genus.size() ? genus[b] : 0;
            int e = d + g;
            std::vector<int> lps;
            for (int l = 0; l < ls.loops; ++l)
                if (block_of_loop[static_cast<std::size_t>(l)] == static_cast<int>(b)) lps.push_back(l);
            Integer f = Integer(1) << g;
            if (e >= 2) return r;
            std::uint64_t all = 0;
            for (int l : lps) all |= std::uint64_t{1} << l;
            if (lps.empty()) {
                if (e != 1) return r;
                scale *= f;
            } else if (e == 1) {
                for (auto& t2 : acc) t2.first |= all;
                scale *= f;
            } else {
                std::vector<std::pair<std::uint64_t, Integer>> next;
                for (auto& t2 : acc)
                    for (int l : lps) next.emplace_back(t2.first | (all & ~(std::uint64_t{1} << l)), t2.second);
                acc = std::move(next);
            }
        }
        for (auto& [m, k] : acc) r.add_term(m, c * FieldElem(Integer(k * scale)));
        r.normalize();
        return r;
    }

    /// Saddle merging components a1 != a2 of t (or splitting a1 when a2 < 0). The result's target is
    /// t with the resolution changed at that site.
    static Cobordism saddle(const FlatTangle& t, int a1, int a2 = -1) {
        const int arcs = t.arcs(), nc = t.components();
        if (a1 < 0 || a1 >= nc || a2 >= nc || a1 == a2) throw NoSuchBlock("saddle: bad component");
        if (a2 >= 0 && a2 < a1) std::swap(a1, a2);
        std::vector<int> circ_map;  // source circle j -> target circle index
        FlatTangle target;
        std::vector<CompRef> involved{{0, a1}};
        if (a2 >= 0) involved.push_back({0, a2});
        auto arc_map_same = [&](const FlatTangle& tt) {
            std::vector<int> m(static_cast<std::size_t>(arcs));
            for (int a = 0; a < arcs; ++a) m[static_cast<std::size_t>(a)] = tt.arc_of_point(t.arc_endpoint(a));
            return m;
        };
        std::vector<int> arc_map;
        if (a2 >= 0 && a2 < arcs) {
            int p = t.arc_endpoint(a1), q = t.partner(p), r = t.arc_endpoint(a2), s = t.partner(r);
            std::vector<int> part = t.partners();
            bool ok = false;
            for (int attempt = 0; attempt < 2 && !ok; ++attempt) {
                int x = attempt == 0 ? r : s, y = attempt == 0 ? s : r;
                part[static_cast<std::size_t>(p)] = x;
                part[static_cast<std::size_t>(x)] = p;
                part[static_cast<std::size_t>(q)] = y;
                part[static_cast<std::size_t>(y)] = q;
                try {
                    target = FlatTangle(t.n(), t.m(), part, t.circles());
                    ok = true;
                } catch (const InvalidTangle&) {
                }
            }
            if (!ok) throw NotPlanar("saddle: no planar resolution");
            arc_map.assign(static_cast<std::size_t>(arcs), -1);
            for (int a = 0; a < arcs; ++a)
                if (a != a1 && a != a2) arc_map[static_cast<std::size_t>(a)] = target.arc_of_point(t.arc_endpoint(a));
            involved.push_back({1, target.arc_of_point(p)});
            involved.push_back({1, target.arc_of_point(q)});
            for (int j = 0; j < t.circles(); ++j) circ_map.push_back(j);
        } else if (a2 >= 0) {
            // circle into arc or circle into circle: drop the circle a2
            target = t.with_circles(t.circles() - 1);
            arc_map = arc_map_same(target);
            int gone = a2 - arcs;
            for (int j = 0; j < t.circles(); ++j) circ_map.push_back(j < gone ? j : (j == gone ? -1 : j - 1));
            involved.push_back({1, a1 < arcs ? arc_map[static_cast<std::size_t>(a1)] : arcs + circ_map[static_cast<std::size_t>(a1 - arcs)]});
            if (a1 < arcs) arc_map[static_cast<std::size_t>(a1)] = -1;
            else circ_map[static_cast<std::size_t>(a1 - arcs)] = -1;
        } else {
            target = t.with_circles(t.circles() + 1);
            arc_map = arc_map_same(target);
            for (int j = 0; j < t.circles(); ++j) circ_map.push_back(j);
            involved.push_back({1, a1});
            involved.push_back({1, target.components() - 1});
            if (a1 < arcs) arc_map[static_cast<std::size_t>(a1)] = -1;
            else circ_map[static_cast<std::size_t>(a1 - arcs)] = -1;
        }
        std::vector<std::vector<CompRef>> blocks{involved};
        for (int a = 0; a < arcs; ++a)
            if (arc_map[static_cast<std::size_t>(a)] >= 0 && a != a1 && a != a2) blocks.push_back({{0, a}, {1, arc_map[static_cast<std::size_t>(a)]}});
        for (int j = 0; j < t.circles(); ++j) {
            int c = arcs + j;
            if (c == a1 || c == a2 || circ_map[static_cast<std::size_t>(j)] < 0) continue;
            blocks.push_back({{0, c}, {1, arcs + circ_map[static_cast<std::size_t>(j)]}});
        }
        return from_blocks(t, target, blocks);
    }

    /// Saddle between circle-free tangles differing in exactly two arcs.
    static Cobordism saddle_between(const FlatTangle& s, const FlatTangle& t) {
        if (s.n() != t.n() || s.m() != t.m()) throw BoundaryMismatch("saddle_between: boundaries differ");
        std::vector<int> diff;
        for (int a = 0; a < s.arcs(); ++a) {
            int p = s.arc_endpoint(a);
            if (t.partner(p) != s.partner(p)) diff.push_back(a);
        }
        if (diff.size() != 2 || s.circles() != t.circles()) throw NotPlanar("saddle_between: tangles are not one saddle apart");
        Cobordism sd = saddle(s, diff[0], diff[1]);
        if (sd.tgt_ != t) throw NotPlanar("saddle_between: tangles are not one saddle apart");
        return sd;
    }

    const FlatTangle& source() const { return src_; }
    const FlatTangle& target() const { return tgt_; }
    const std::vector<Term>& terms() const { return terms_; }
    const LoopStructure& loops() const { return *loops_; }
    bool is_zero() const { return terms_.empty(); }

    /// |S| = -chi + (boundary points)/2 + 2 #dots; chi is the number of disks in the disk basis.
    int term_degree(std::uint64_t dots) const { return -loops_->loops + src_.points() / 2 + 2 * std::popcount(dots); }
    /// Degree if homogeneous, otherwise nullopt.
    std::optional<int> degree() const {
        if (terms_.empty()) return std::nullopt;
        int d = term_degree(terms_.front().first);
        for (auto& t : terms_)
            if (term_degree(t.first) != d) return std::nullopt;
        return d;
    }
    /// Parity-admissible degree of any nonzero morphism between these ends, shifted by 2 * dots.
    int base_degree() const { return -loops_->loops + src_.points() / 2; }

    Cobordism add_dot(CompRef c) const {
        int ncomp = c.first == 0 ? src_.components() : tgt_.components();
        if (c.first < 0 || c.first > 1 || c.second < 0 || c.second >= ncomp) throw NoSuchBlock("add_dot: no such component");
        std::uint64_t bit = std::uint64_t{1} << loops_->loop_of(c);
        Cobordism r(src_, tgt_, loops_);
        for (auto& [m, k] : terms_)
            if (!(m & bit)) r.terms_.emplace_back(m | bit, k);
        r.normalize();
        return r;
    }

    Cobordism scaled(const FieldElem& c) const {
        Cobordism r(src_, tgt_, loops_);
        if (c.is_zero()) return r;
        for (auto& [m, k] : terms_) r.terms_.emplace_back(m, k * c);
        return r;
    }

    Cobordism& operator+=(const Cobordism& o) { return axpy(FieldElem(1), o); }
    Cobordism& operator-=(const Cobordism& o) { return axpy(FieldElem(-1), o); }
    friend Cobordism operator+(Cobordism a, const Cobordism& b) { return a += b; }
    friend Cobordism operator-(Cobordism a, const Cobordism& b) { return a -= b; }
    Cobordism operator-() const { return scaled(FieldElem(-1)); }

    Cobordism& axpy(const FieldElem& c, const Cobordism& o) {
        if (o.src_ != src_ || o.tgt_ != tgt_) throw BoundaryMismatch("cobordism sum: ends differ");
        if (c.is_zero() || o.terms_.empty()) return *this;
        if (&o == this) return axpy(c, Cobordism(o));
        std::vector<Term> out;
        out.reserve(terms_.size() + o.terms_.size());
        auto a = terms_.begin();
        auto b = o.terms_.cbegin();
        while (a != terms_.end() || b != o.terms_.end()) {
            if (b == o.terms_.end() || (a != terms_.end() && a->first < b->first)) {
                out.push_back(std::move(*a++));
            } else if (a == terms_.end() || b->first < a->first) {
                out.emplace_back(b->first, c.is_one() ? b->second : c * b->second);
                ++b;
            } else {
                FieldElem v = a->second + c * b->second;
                if (!v.is_zero()) out.emplace_back(a->first, std::move(v));
                ++a;
                ++b;
            }
        }
        terms_ = std::move(out);
        return *this;
    }

    friend bool operator==(const Cobordism& a, const Cobordism& b) {
        return a.src_ == b.src_ && a.tgt_ == b.tgt_ && a.terms_ == b.terms_;
    }
    friend bool operator!=(const Cobordism& a, const Cobordism& b) { return !(a == b); }

    /// Returns c when this equals c times the identity.
    std::optional<FieldElem> scalar_identity() const {
        if (src_ != tgt_ || terms_.empty()) return std::nullopt;
        const Cobordism& id = identity(src_);
        if (terms_.size() != id.terms_.size()) return std::nullopt;
        FieldElem c = terms_.front().second / id.terms_.front().second;
        for (std::size_t i = 0; i < terms_.size(); ++i)
            if (terms_[i].first != id.terms_[i].first || terms_[i].second != c * id.terms_[i].second) return std::nullopt;
        return c;
    }

    /// top o bottom.
    static Cobordism compose(const Cobordism& top, const Cobordism& bottom);
    /// Horizontal composition: a : A -> A' over (k,m), b : B -> B' over (n,k), giving A o B -> A' o B'.
    static Cobordism star(const Cobordism& a, const Cobordism& b);
    /// Side-by-side union, a on the left.
    static Cobordism juxtapose(const Cobordism& a, const Cobordism& b);

    /// Boundary loop of a component, for addressing blocks.
    int loop_of(CompRef c) const { return loops_->loop_of(c); }

    std::string to_string() const {
        if (terms_.empty()) return "0";
        std::string s;
        for (auto& [m, k] : terms_) {
            if (!s.empty()) s += " + ";
            s += "(" + k.to_string() + ")*D[";
            for (int l = 0; l < loops_->loops; ++l) s += (m >> l & 1) ? '*' : '.';
            s += "]";
        }
        return s;
    }

    void add_term(std::uint64_t m, const FieldElem& c) {
        if (!c.is_zero()) terms_.emplace_back(m, c);
    }
    void normalize() {
        std::sort(terms_.begin(), terms_.end(), [](const Term& a, const Term& b) { return a.first < b.first; });
        std::vector<Term> out;
        for (auto& t : terms_) {
            if (!out.empty() && out.back().first == t.first) out.back().second += t.second;
            else out.push_back(std::move(t));
            if (out.back().second.is_zero()) out.pop_back();
        }
        terms_ = std::move(out);
    }

private:
    Cobordism(FlatTangle s, FlatTangle t, std::shared_ptr<const LoopStructure> ls) : src_(std::move(s)), tgt_(std::move(t)), loops_(std::move(ls)) {}

    static Cobordism apply_plan(const GluePlan& plan, const Cobordism& a, const Cobordism& b, int shift_b, FlatTangle s, FlatTangle t) {
        Cobordism r(std::move(s), std::move(t));
        std::map<std::uint64_t, FieldElem> acc;
        for (auto& [ma, ka] : a.terms_)
            for (auto& [mb, kb] : b.terms_) {
                auto outs = plan.apply(ma | (mb << shift_b));
                if (outs.empty()) continue;
                FieldElem k = ka * kb;
                for (auto& [mo, f] : outs) {
                    auto [it, fresh] = acc.try_emplace(mo, k * FieldElem(Integer(f)));
                    if (!fresh) it->second += k * FieldElem(Integer(f));
                }
            }
        for (auto& [m, k] : acc)
            if (!k.is_zero()) r.terms_.emplace_back(m, k);
        return r;
    }

    FlatTangle src_, tgt_;
    std::shared_ptr<const LoopStructure> loops_;
    std::vector<Term> terms_;
};

namespace detail {

template <class Build>
std::shared_ptr<const GluePlan> cached_plan(int kind, const std::vector<FlatTangle>& key_tangles, Build build) {
    static std::mutex mu;
    static std::unordered_map<std::vector<FlatTangle>, std::shared_ptr<const GluePlan>, TangleListHash> cache[3];
    {
        std::lock_guard<std::mutex> lock(mu);
        auto it = cache[kind].find(key_tangles);
        if (it != cache[kind].end()) return it->second;
    }
    auto plan = std::make_shared<const GluePlan>(build());
    std::lock_guard<std::mutex> lock(mu);
    return cache[kind].emplace(key_tangles, plan).first->second;
}

/// For each output loop, the input disk of one of its components.
template <class DiskOf>
std::vector<int> output_disks(const LoopStructure& out, int nsrc, int ntgt, DiskOf disk_of) {
    std::vector<int> od(static_cast<std::size_t>(out.loops), -1);
    for (int c = 0; c < nsrc; ++c) {
        int& slot = od[static_cast<std::size_t>(out.src[static_cast<std::size_t>(c)])];
        if (slot < 0) slot = disk_of(0, c);
    }
    for (int c = 0; c < ntgt; ++c) {
        int& slot = od[static_cast<std::size_t>(out.tgt[static_cast<std::size_t>(c)])];
        if (slot < 0) slot = disk_of(1, c);
    }
    return od;
}

}  // namespace detail

inline Cobordism Cobordism::compose(const Cobordism& top, const Cobordism& bottom) {
    if (top.src_ != bottom.tgt_) throw GluingMismatch("compose: middle tangles differ");
    const FlatTangle& s = bottom.src_;
    const FlatTangle& mid = bottom.tgt_;
    const FlatTangle& t = top.tgt_;
    if (top.terms_.empty() || bottom.terms_.empty()) return Cobordism(s, t);
    auto plan = detail::cached_plan(0, {s, mid, t}, [&] {
        const LoopStructure& lb = *bottom.loops_;
        const LoopStructure& lt = *top.loops_;
        int shift = lb.loops;
        std::vector<std::pair<int, int>> arcs, circles;
        for (int c = 0; c < mid.components(); ++c) {
            std::pair<int, int> g{lb.tgt[static_cast<std::size_t>(c)], shift + lt.src[static_cast<std::size_t>(c)]};
            (c < mid.arcs() ? arcs : circles).push_back(g);
        }
        auto out = loop_structure(s, t);
        auto od = detail::output_disks(*out, s.components(), t.components(), [&](int side, int c) {
            return side == 0 ? lb.src[static_cast<std::size_t>(c)] : shift + lt.tgt[static_cast<std::size_t>(c)];
        });
        return GluePlan(lb.loops + lt.loops, arcs, circles, od);
    });
    return apply_plan(*plan, bottom, top, bottom.loops_->loops, s, t);
}

inline Cobordism Cobordism::star(const Cobordism& a, const Cobordism& b) {
    const FlatTangle &A = a.src_, &A2 = a.tgt_, &B = b.src_, &B2 = b.tgt_;
    if (A.n() != B.m()) throw BoundaryMismatch("star: inner boundary counts differ");
    auto src = FlatTangle::compose_traced(A, B);
    auto tgt = FlatTangle::compose_traced(A2, B2);
    if (a.terms_.empty() || b.terms_.empty()) return Cobordism(src.result, tgt.result);
    auto plan = detail::cached_plan(1, {A, A2, B, B2}, [&] {
        const LoopStructure& la = *a.loops_;
        const LoopStructure& lb = *b.loops_;
        int shift = la.loops;
        const int k = A.n(), n = B.n();
        std::vector<std::pair<int, int>> arcs;
        for (int j = 0; j < k; ++j) arcs.emplace_back(la.src[static_cast<std::size_t>(A.arc_of_point(j))], shift + lb.src[static_cast<std::size_t>(B.arc_of_point(n + j))]);
        auto out = loop_structure(src.result, tgt.result);
        auto od = detail::output_disks(*out, src.result.components(), tgt.result.components(), [&](int side, int c) {
            auto part = (side == 0 ? src : tgt).parts[static_cast<std::size_t>(c)].front();
            const LoopStructure& l = part.first == 0 ? lb : la;
            const std::vector<int>& v = side == 0 ? l.src : l.tgt;
            return (part.first == 0 ? shift : 0) + v[static_cast<std::size_t>(part.second)];
        });
        return GluePlan(la.loops + lb.loops, arcs, {}, od);
    });
    return apply_plan(*plan, a, b, a.loops_->loops, src.result, tgt.result);
}

inline Cobordism Cobordism::juxtapose(const Cobordism& a, const Cobordism& b) {
    FlatTangle S = FlatTangle::juxtapose(a.src_, b.src_);
    FlatTangle T = FlatTangle::juxtapose(a.tgt_, b.tgt_);
    if (a.terms_.empty() || b.terms_.empty()) return Cobordism(S, T);
    auto plan = detail::cached_plan(2, {a.src_, a.tgt_, b.src_, b.tgt_}, [&] {
        const LoopStructure& la = *a.loops_;
        const LoopStructure& lb = *b.loops_;
        int shift = la.loops;
        auto out = loop_structure(S, T);
        auto od = detail::output_disks(*out, S.components(), T.components(), [&](int side, int c) {
            const FlatTangle& X = side == 0 ? S : T;
            const FlatTangle& Xa = side == 0 ? a.src_ : a.tgt_;
            const FlatTangle& Xb = side == 0 ? b.src_ : b.tgt_;
            const std::vector<int>& va = side == 0 ? la.src : la.tgt;
            const std::vector<int>& vb = side == 0 ? lb.src : lb.tgt;
            if (c >= X.arcs()) {
                int j = c - X.arcs();
                return j < Xa.circles() ? va[static_cast<std::size_t>(Xa.arcs() + j)] : shift + vb[static_cast<std::size_t>(Xb.arcs() + j - Xa.circles())];
            }
            int p = X.arc_endpoint(c);
            int n = X.n(), na = Xa.n();
            if (p < n) return p < na ? va[static_cast<std::size_t>(Xa.arc_of_point(p))] : shift + vb[static_cast<std::size_t>(Xb.arc_of_point(p - na))];
            int tp = p - n;
            return tp < Xa.m() ? va[static_cast<std::size_t>(Xa.arc_of_point(na + tp))]
                               : shift + vb[static_cast<std::size_t>(Xb.arc_of_point(Xb.n() + tp - Xa.m()))];
        });
        return GluePlan(la.loops + lb.loops, {}, {}, od);
    });
    return apply_plan(*plan, a, b, a.loops_->loops, S, T);
}

inline Cobordism cob_compose(const Cobordism& top, const Cobordism& bottom) { return Cobordism::compose(top, bottom); }
inline Cobordism operator*(const Cobordism& top, const Cobordism& bottom) { return Cobordism::compose(top, bottom); }

/// Tube between two loops of (s, t), all other loops capped by undotted disks: by neck cutting this
/// equals the sum of the two disk pairs with a dot on either side.
inline Cobordism neck_cut_expand(const FlatTangle& s, const FlatTangle& t, CompRef a, CompRef b) {
    auto ls = loop_structure(s, t);
    int la = ls->loop_of(a), lb = ls->loop_of(b);
    if (la == lb) throw GluingMismatch("neck_cut_expand: components lie on the same loop");
    return Cobordism::disks(s, t, std::uint64_t{1} << la) + Cobordism::disks(s, t, std::uint64_t{1} << lb);
}

/// All disk-basis elements of Hom(s, t) in the given degree.
inline std::vector<Cobordism> hom_basis(const FlatTangle& s, const FlatTangle& t, int degree) {
    auto ls = loop_structure(s, t);
    int base = -ls->loops + s.points() / 2;
    std::vector<Cobordism> out;
    if ((degree - base) % 2 != 0) return out;
    int k = (degree - base) / 2;
    if (k < 0 || k > ls->loops) return out;
    for (std::uint64_t m = 0; m < (std::uint64_t{1} << ls->loops); ++m)
        if (std::popcount(m) == k) out.push_back(Cobordism::disks(s, t, m));
    return out;
}

/// The circle-removal isomorphism T = T0 + circle ~ q T0 (+) q^{-1} T0.
///
/// With the convention that a degree-0 map q^a X -> q^b Y is a cobordism of degree a - b:
/// up = cap : T -> q T0, down = dotted cap : T -> q^{-1} T0, and their inverses
/// up_inv = dotted cup, down_inv = cup.
struct Delooping {
    FlatTangle reduced;
    Cobordism up, down, up_inv, down_inv;
};

inline Delooping deloop(const FlatTangle& t, int circle = -1) {
    if (t.circles() == 0) throw NoCircle("deloop: tangle has no circle");
    if (circle < 0) circle = t.circles() - 1;
    if (circle >= t.circles()) throw NoCircle("deloop: no such circle");
    FlatTangle r = t.with_circles(t.circles() - 1);
    const int arcs = t.arcs();
    std::vector<std::vector<CompRef>> blocks;
    for (int a = 0; a < arcs; ++a) blocks.push_back({{0, a}, {1, a}});
    for (int j = 0, k = 0; j < t.circles(); ++j) {
        if (j == circle) continue;
        blocks.push_back({{0, arcs + j}, {1, arcs + k++}});
    }
    auto cap_blocks = blocks;
    cap_blocks.push_back({{0, arcs + circle}});
    std::vector<std::vector<CompRef>> cup_blocks;
    for (auto& b : blocks) {
        std::vector<CompRef> f;
        for (auto [side, c] : b) f.push_back({1 - side, c});
        cup_blocks.push_back(f);
    }
    cup_blocks.push_back({{1, arcs + circle}});
    std::vector<int> dot(cap_blocks.size(), 0);
    dot.back() = 1;
    Delooping d{r, Cobordism::from_blocks(t, r, cap_blocks), Cobordism::from_blocks(t, r, cap_blocks, dot),
                Cobordism::from_blocks(r, t, cup_blocks, dot), Cobordism::from_blocks(r, t, cup_blocks)};
    return d;
}

}  // namespace cheb
