#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace cheb {

struct InvalidPosition : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct BoundaryMismatch : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct NotSquare : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct InvalidTangle : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Crossingless matching of n bottom and m top points plus a number of free circles.
///
/// Points are indexed 0..n-1 for B1..Bn and n..n+m-1 for T1..Tm. Components are
/// numbered arcs first (ordered by smallest endpoint), then circles.
class FlatTangle {
public:
    FlatTangle() = default;

    /// Builds from an explicit partner table; throws InvalidTangle unless it is a
    /// fixed-point-free noncrossing involution.
    FlatTangle(int n, int m, std::vector<int> partner, int circles = 0)
        : n_(n), m_(m), circles_(circles), partner_(std::move(partner)) {
        validate();
    }

    static FlatTangle identity(int n) {
        std::vector<int> p(2 * n);
        for (int i = 0; i < n; ++i) {
            p[i] = n + i;
            p[n + i] = i;
        }
        return FlatTangle(n, n, std::move(p));
    }

    /// cap_i: (n, n-2), joining B_i and B_{i+1} (1-based i).
    static FlatTangle cap(int n, int i) {
        if (n < 2 || i < 1 || i > n - 1) throw InvalidPosition("cap position out of range");
        int m = n - 2;
        std::vector<int> p(n + m);
        int t = 0;
        for (int b = 0; b < n; ++b) {
            if (b == i - 1) {
                p[b] = b + 1;
                p[b + 1] = b;
                ++b;
                continue;
            }
            p[b] = n + t;
            p[n + t] = b;
            ++t;
        }
        return FlatTangle(n, m, std::move(p));
    }

    /// cup_i: (n-2, n), joining T_i and T_{i+1}.
    static FlatTangle cup(int n, int i) { return cap(n, i).reflected(); }

    /// turnback B_i = cup_i o cap_i on n strands.
    static FlatTangle turnback(int n, int i) { return compose(cup(n, i), cap(n, i)); }

    int n() const { return n_; }
    int m() const { return m_; }
    int points() const { return n_ + m_; }
    int circles() const { return circles_; }
    int partner(int p) const { return partner_[p]; }
    const std::vector<int>& partners() const { return partner_; }
    int arcs() const { return (n_ + m_) / 2; }
    int components() const { return arcs() + circles_; }

    bool is_bottom(int p) const { return p < n_; }
    static std::string label(int n, int p) { return p < n ? "B" + std::to_string(p + 1) : "T" + std::to_string(p - n + 1); }
    std::string label(int p) const { return label(n_, p); }

    FlatTangle with_circles(int c) const {
        FlatTangle t = *this;
        t.circles_ = c;
        return t;
    }
    FlatTangle without_circles() const { return with_circles(0); }

    /// Arc id of the component containing boundary point p.
    int arc_of_point(int p) const {
        build_arc_index();
        return arc_of_point_[p];
    }
    /// Smaller endpoint of arc a.
    int arc_endpoint(int a) const {
        build_arc_index();
        return arc_min_[a];
    }

    int through_degree() const {
        int t = 0;
        for (int b = 0; b < n_; ++b)
            if (partner_[b] >= n_) ++t;
        return t;
    }

    /// Position in the counterclockwise disc order B1..Bn, Tm..T1.
    int cyclic_position(int p) const { return p < n_ ? p : n_ + (m_ - 1 - (p - n_)); }
    int point_at_position(int pos) const { return pos < n_ ? pos : n_ + (m_ - 1 - (pos - n_)); }

    FlatTangle reflected() const {
        std::vector<int> p(n_ + m_);
        auto swap_side = [&](int x) { return x < n_ ? m_ + x : x - n_; };
        for (int x = 0; x < n_ + m_; ++x) p[swap_side(x)] = swap_side(partner_[x]);
        return FlatTangle(m_, n_, std::move(p), circles_);
    }

    /// Result of vertical composition together with, for each result component,
    /// the input components it contains. Side 0 is the bottom tangle, side 1 the top.
    struct Traced;
    static Traced compose_traced(const FlatTangle& top, const FlatTangle& bottom);

    /// top o bottom: bottom is (n,k), top is (k,m).
    static FlatTangle compose(const FlatTangle& top, const FlatTangle& bottom);

    /// Side-by-side placement, a on the left.
    static FlatTangle juxtapose(const FlatTangle& a, const FlatTangle& b) {
        int n = a.n_ + b.n_, m = a.m_ + b.m_;
        std::vector<int> p(n + m);
        auto map_a = [&](int x) { return x < a.n_ ? x : n + (x - a.n_); };
        auto map_b = [&](int x) { return x < b.n_ ? a.n_ + x : n + a.m_ + (x - b.n_); };
        for (int x = 0; x < a.points(); ++x) p[map_a(x)] = map_a(a.partner_[x]);
        for (int x = 0; x < b.points(); ++x) p[map_b(x)] = map_b(b.partner_[x]);
        return FlatTangle(n, m, std::move(p), a.circles_ + b.circles_);
    }

    /// Loops of the planar (Markov) closure joining B_i to T_i, including free circles.
    int planar_closure() const {
        if (n_ != m_) throw NotSquare("planar_closure needs a square tangle");
        std::vector<char> seen(2 * n_, 0);
        int loops = 0;
        for (int s = 0; s < 2 * n_; ++s) {
            if (seen[s]) continue;
            ++loops;
            int x = s;
            while (!seen[x]) {
                seen[x] = 1;
                int y = partner_[x];
                seen[y] = 1;
                x = y < n_ ? y + n_ : y - n_;  // closure strand
            }
        }
        return loops + circles_;
    }

    /// (essential, trivial) loop counts in the annular closure, where T_i is identified with B_i.
    /// A loop is essential when its winding number (up-strands minus down-strands) is nonzero;
    /// shifted tangles such as [B1-B2 B3-T1 B4-T2 T3-T4] have fewer essential loops than through-strands.
    std::pair<int, int> annular_closure() const {
        if (n_ != m_) throw NotSquare("annular_closure needs a square tangle");
        std::vector<char> seen(2 * n_, 0);
        int ess = 0, triv = circles_;
        for (int s = 0; s < 2 * n_; ++s) {
            if (seen[s]) continue;
            int x = s, winding = 0;
            while (!seen[x]) {
                seen[x] = 1;
                int y = partner_[x];
                seen[y] = 1;
                if (x < n_ && y >= n_) ++winding;
                if (x >= n_ && y < n_) --winding;
                x = y < n_ ? y + n_ : y - n_;
            }
            ++(winding != 0 ? ess : triv);
        }
        return {ess, triv};
    }

    friend bool operator==(const FlatTangle& a, const FlatTangle& b) {
        return a.n_ == b.n_ && a.m_ == b.m_ && a.circles_ == b.circles_ && a.partner_ == b.partner_;
    }
    friend bool operator!=(const FlatTangle& a, const FlatTangle& b) { return !(a == b); }
    friend bool operator<(const FlatTangle& a, const FlatTangle& b) {
        if (a.n_ != b.n_) return a.n_ < b.n_;
        if (a.m_ != b.m_) return a.m_ < b.m_;
        if (a.circles_ != b.circles_) return a.circles_ < b.circles_;
        return a.partner_ < b.partner_;
    }

    std::size_t hash() const {
        std::size_t h = static_cast<std::size_t>(n_) * 1315423911u ^ static_cast<std::size_t>(m_) * 2654435761u ^
                        static_cast<std::size_t>(circles_) * 97u;
        for (int x : partner_) h = h * 31 + static_cast<std::size_t>(x);
        return h;
    }

    std::string to_string() const {
        std::string s = "(" + std::to_string(n_) + "," + std::to_string(m_) + ")[";
        bool first = true;
        for (int x = 0; x < points(); ++x) {
            if (partner_[x] < x) continue;
            if (!first) s += " ";
            first = false;
            s += label(x) + "-" + label(partner_[x]);
        }
        s += "]";
        if (circles_) s += "+" + std::to_string(circles_) + "o";
        return s;
    }

private:
    void validate() const {
        if (n_ < 0 || m_ < 0 || circles_ < 0) throw InvalidTangle("negative size");
        if ((n_ + m_) % 2 != 0) throw InvalidTangle("odd number of boundary points");
        if (static_cast<int>(partner_.size()) != n_ + m_) throw InvalidTangle("partner table size");
        std::vector<int> stack;
        std::vector<int> pos(n_ + m_);
        for (int x = 0; x < n_ + m_; ++x) {
            int y = partner_[x];
            if (y < 0 || y >= n_ + m_ || y == x || partner_[y] != x) throw InvalidTangle("not a perfect matching");
            pos[x] = cyclic_position(x);
        }
        for (int q = 0; q < n_ + m_; ++q) {
            int x = point_at_position(q);
            int py = pos[partner_[x]];
            if (py > q) {
                stack.push_back(q);
            } else {
                if (stack.empty() || stack.back() != py) throw InvalidTangle("matching is not planar");
                stack.pop_back();
            }
        }
    }

    void build_arc_index() const {
        if (!arc_of_point_.empty() || n_ + m_ == 0) return;
        std::vector<int> aop(n_ + m_, -1), amin;
        for (int x = 0; x < n_ + m_; ++x) {
            if (partner_[x] < x) continue;
            aop[x] = aop[partner_[x]] = static_cast<int>(amin.size());
            amin.push_back(x);
        }
        arc_min_ = std::move(amin);
        arc_of_point_ = std::move(aop);
    }

    int n_ = 0, m_ = 0, circles_ = 0;
    std::vector<int> partner_;
    mutable std::vector<int> arc_of_point_, arc_min_;
};

struct FlatTangle::Traced {
    FlatTangle result;
    /// For each result component: list of (side, input component id).
    std::vector<std::vector<std::pair<int, int>>> parts;
};

inline FlatTangle::Traced FlatTangle::compose_traced(const FlatTangle& top, const FlatTangle& bottom) {
    if (top.n_ != bottom.m_) throw BoundaryMismatch("compose: inner boundary counts differ");
    const int n = bottom.n_, k = bottom.m_, m = top.m_;
    const FlatTangle* side[2] = {&bottom, &top};
    auto outer_to_side = [&](int r) -> std::pair<int, int> { return r < n ? std::pair{0, r} : std::pair{1, k + (r - n)}; };
    auto is_outer = [&](int s, int p) { return s == 0 ? p < n : p >= k; };
    auto side_to_outer = [&](int s, int p) { return s == 0 ? p : n + (p - k); };
    auto middle_index = [&](int s, int p) { return s == 0 ? p - n : p; };
    auto middle_point = [&](int s, int j) { return s == 0 ? n + j : j; };

    std::vector<int> partner(n + m, -1);
    std::vector<char> mid_seen(k, 0);
    std::vector<std::pair<int, std::vector<std::pair<int, int>>>> arc_parts;  // keyed by min endpoint
    for (int r = 0; r < n + m; ++r) {
        if (partner[r] >= 0) continue;
        auto [s, p] = outer_to_side(r);
        std::vector<std::pair<int, int>> parts;
        while (true) {
            parts.emplace_back(s, side[s]->arc_of_point(p));
            int q = side[s]->partner_[p];
            if (is_outer(s, q)) {
                int r2 = side_to_outer(s, q);
                partner[r] = r2;
                partner[r2] = r;
                break;
            }
            int j = middle_index(s, q);
            mid_seen[j] = 1;
            s = 1 - s;
            p = middle_point(s, j);
        }
        arc_parts.emplace_back(r, std::move(parts));
    }
    Traced out;
    for (auto& ap : arc_parts) out.parts.push_back(std::move(ap.second));
    for (int c = 0; c < bottom.circles_; ++c) out.parts.push_back({{0, bottom.arcs() + c}});
    for (int c = 0; c < top.circles_; ++c) out.parts.push_back({{1, top.arcs() + c}});
    int loops = 0;
    for (int j = 0; j < k; ++j) {
        if (mid_seen[j]) continue;
        ++loops;
        std::vector<std::pair<int, int>> parts;
        int s = 0, p = middle_point(0, j);
        while (true) {
            mid_seen[middle_index(s, p)] = 1;
            parts.emplace_back(s, side[s]->arc_of_point(p));
            int q = side[s]->partner_[p];
            int jj = middle_index(s, q);
            mid_seen[jj] = 1;
            s = 1 - s;
            p = middle_point(s, jj);
            if (s == 0 && jj == j) break;
        }
        out.parts.push_back(std::move(parts));
    }
    out.result = FlatTangle(n, m, std::move(partner), bottom.circles_ + top.circles_ + loops);
    return out;
}

inline FlatTangle FlatTangle::compose(const FlatTangle& top, const FlatTangle& bottom) {
    if (top.n_ != bottom.m_) throw BoundaryMismatch("compose: inner boundary counts differ");
    const int n = bottom.n_, k = bottom.m_, m = top.m_;
    std::vector<int> partner(n + m, -1);
    std::vector<char> mid_seen(k, 0);
    const std::vector<int>& bp = bottom.partner_;
    const std::vector<int>& tp = top.partner_;
    for (int r = 0; r < n + m; ++r) {
        if (partner[r] >= 0) continue;
        int s, p;
        if (r < n) {
            s = 0;
            p = r;
        } else {
            s = 1;
            p = k + (r - n);
        }
        while (true) {
            int q = s == 0 ? bp[p] : tp[p];
            if (s == 0 ? q < n : q >= k) {
                int r2 = s == 0 ? q : n + (q - k);
                partner[r] = r2;
                partner[r2] = r;
                break;
            }
            int j = s == 0 ? q - n : q;
            mid_seen[j] = 1;
            s = 1 - s;
            p = s == 0 ? n + j : j;
        }
    }
    int loops = 0;
    for (int j = 0; j < k; ++j) {
        if (mid_seen[j]) continue;
        ++loops;
        int s = 0, p = n + j;
        while (true) {
            int q = s == 0 ? bp[p] : tp[p];
            int jj = s == 0 ? q - n : q;
            mid_seen[jj] = 1;
            s = 1 - s;
            p = s == 0 ? n + jj : jj;
            if (s == 0 && jj == j) break;
        }
    }
    FlatTangle t;
    t.n_ = n;
    t.m_ = m;
    t.circles_ = bottom.circles_ + top.circles_ + loops;
    t.partner_ = std::move(partner);
    return t;
}

enum class GeneratorKind { identity, cup, cap, turnback };

struct TangleGenerator {
    GeneratorKind kind = GeneratorKind::identity;
    int n = 0;
    int i = 0;
};

inline FlatTangle make_generator(const TangleGenerator& g) {
    switch (g.kind) {
        case GeneratorKind::identity: return FlatTangle::identity(g.n);
        case GeneratorKind::cup: return FlatTangle::cup(g.n, g.i);
        case GeneratorKind::cap: return FlatTangle::cap(g.n, g.i);
        case GeneratorKind::turnback: return FlatTangle::turnback(g.n, g.i);
    }
    throw InvalidPosition("unknown generator kind");
}

struct FlatTangleHash {
    std::size_t operator()(const FlatTangle& t) const { return t.hash(); }
};

/// All circle-free (n,m) tangles, indexed in a fixed order.
class TangleBasis {
public:
    static const TangleBasis& get(int n, int m) {
        static std::mutex mu;
        static std::map<std::pair<int, int>, std::unique_ptr<TangleBasis>> cache;
        std::lock_guard<std::mutex> lock(mu);
        auto& slot = cache[{n, m}];
        if (!slot) slot.reset(new TangleBasis(n, m));
        return *slot;
    }

    int n() const { return n_; }
    int m() const { return m_; }
    std::size_t size() const { return tangles_.size(); }
    const FlatTangle& operator[](std::size_t i) const { return tangles_[i]; }
    const std::vector<FlatTangle>& all() const { return tangles_; }

    int index_of(const FlatTangle& t) const {
        auto it = index_.find(t.without_circles());
        if (it == index_.end()) throw InvalidTangle("tangle not in basis");
        return it->second;
    }

private:
    TangleBasis(int n, int m) : n_(n), m_(m) {
        if ((n + m) % 2 != 0) return;
        int N = n + m;
        std::vector<int> pos_partner(N, -1);
        std::vector<std::vector<int>> matchings;
        std::vector<std::pair<int, int>> pending{{0, N}};
        std::function<void()> rec = [&]() {
            if (pending.empty()) {
                matchings.push_back(pos_partner);
                return;
            }
            auto [lo, hi] = pending.back();
            pending.pop_back();
            if (lo == hi) {
                rec();
            } else {
                for (int j = lo + 1; j < hi; j += 2) {
                    pos_partner[lo] = j;
                    pos_partner[j] = lo;
                    pending.emplace_back(j + 1, hi);
                    pending.emplace_back(lo + 1, j);
                    rec();
                    pending.pop_back();
                    pending.pop_back();
                }
            }
            pending.emplace_back(lo, hi);
        };
        rec();
        for (auto& pp : matchings) {
            std::vector<int> partner(N);
            auto point_at = [&](int pos) { return pos < n ? pos : n + (m - 1 - (pos - n)); };
            for (int pos = 0; pos < N; ++pos) partner[point_at(pos)] = point_at(pp[pos]);
            tangles_.emplace_back(n, m, std::move(partner));
        }
        std::sort(tangles_.begin(), tangles_.end());
        for (std::size_t i = 0; i < tangles_.size(); ++i) index_.emplace(tangles_[i], static_cast<int>(i));
    }

    int n_, m_;
    std::vector<FlatTangle> tangles_;
    std::unordered_map<FlatTangle, int, FlatTangleHash> index_;
};

/// Cached composition table between two tangle bases: (top index, bottom index) -> (result index, circles).
class CompositionTable {
public:
    struct Entry {
        std::int32_t index = -1;
        std::int32_t circles = 0;
    };

    static CompositionTable& get(int n, int k, int m) {
        static std::mutex mu;
        static std::map<std::tuple<int, int, int>, std::unique_ptr<CompositionTable>> cache;
        std::lock_guard<std::mutex> lock(mu);
        auto& slot = cache[{n, k, m}];
        if (!slot) slot.reset(new CompositionTable(n, k, m));
        return *slot;
    }

    Entry lookup(std::size_t top, std::size_t bottom) {
        // filled lazily; index is published last so concurrent readers see a complete entry
        Entry& e = table_[top * bottom_->size() + bottom];
        std::atomic_ref<std::int32_t> index(e.index), circles(e.circles);
        std::int32_t i = index.load(std::memory_order_acquire);
        if (i < 0) {
            FlatTangle r = FlatTangle::compose((*top_)[top], (*bottom_)[bottom]);
            circles.store(r.circles(), std::memory_order_relaxed);
            i = static_cast<std::int32_t>(result_->index_of(r));
            index.store(i, std::memory_order_release);
        }
        return {i, circles.load(std::memory_order_relaxed)};
    }

    const TangleBasis& result_basis() const { return *result_; }

private:
    CompositionTable(int n, int k, int m)
        : bottom_(&TangleBasis::get(n, k)), top_(&TangleBasis::get(k, m)), result_(&TangleBasis::get(n, m)) {
        table_.resize(top_->size() * bottom_->size());
    }

    const TangleBasis* bottom_;
    const TangleBasis* top_;
    const TangleBasis* result_;
    std::vector<Entry> table_;
};

}  // namespace cheb
