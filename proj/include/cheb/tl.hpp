#pragma once

#include "cheb/field_elem.hpp"
#include "cheb/kronecker.hpp"
#include "cheb/tangle.hpp"

#include <algorithm>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace cheb {

/// The circle value q + q^{-1}.
inline const LaurentPoly& delta_poly() {
    static const LaurentPoly d = quantum_integer(2);
    return d;
}

inline LaurentPoly delta_power(int k) {
    static std::vector<LaurentPoly> cache{LaurentPoly(1)};
    static std::mutex mu;
    std::lock_guard<std::mutex> lock(mu);
    while (static_cast<int>(cache.size()) <= k) cache.push_back(cache.back() * delta_poly());
    return cache[static_cast<std::size_t>(k)];
}

/// Linear combination of circle-free (n,m) tangles with coefficients in Q(q).
class TLElement {
public:
    using Term = std::pair<int, FieldElem>;  // (basis index, coefficient)

    TLElement() = default;
    TLElement(int n, int m) : n_(n), m_(m) {
        if ((n + m) % 2 != 0) throw InvalidTangle("TLElement: n + m must be even");
    }

    static TLElement identity(int n) { return from_tangle(FlatTangle::identity(n)); }
    static TLElement zero(int n, int m) { return TLElement(n, m); }

    /// A single tangle; its circles become powers of q + q^{-1}.
    static TLElement from_tangle(const FlatTangle& t, const FieldElem& c = FieldElem(1)) {
        TLElement x(t.n(), t.m());
        if (c.is_zero()) return x;
        FieldElem coef = t.circles() ? c * FieldElem(delta_power(t.circles())) : c;
        x.terms_.emplace_back(TangleBasis::get(t.n(), t.m()).index_of(t), std::move(coef));
        return x;
    }

    /// e_i: turnback at position i on n strands.
    static TLElement e(int n, int i) { return from_tangle(FlatTangle::turnback(n, i)); }

    int n() const { return n_; }
    int m() const { return m_; }
    bool is_zero() const { return terms_.empty(); }
    std::size_t size() const { return terms_.size(); }
    const std::vector<Term>& raw_terms() const { return terms_; }
    const TangleBasis& basis() const { return TangleBasis::get(n_, m_); }

    std::vector<std::pair<FlatTangle, FieldElem>> terms() const {
        std::vector<std::pair<FlatTangle, FieldElem>> out;
        const auto& b = basis();
        for (auto& [i, c] : terms_) out.emplace_back(b[static_cast<std::size_t>(i)], c);
        return out;
    }

    /// Coefficient of the circle-free tangle underlying t.
    FieldElem coeff(const FlatTangle& t) const {
        int idx = basis().index_of(t);
        auto it = std::lower_bound(terms_.begin(), terms_.end(), idx, [](const Term& a, int b) { return a.first < b; });
        if (it != terms_.end() && it->first == idx) return it->second;
        return FieldElem(0);
    }

    TLElement& operator+=(const TLElement& o) { return axpy(FieldElem(1), o); }
    TLElement& operator-=(const TLElement& o) { return axpy(FieldElem(-1), o); }
    friend TLElement operator+(TLElement a, const TLElement& b) { return a += b; }
    friend TLElement operator-(TLElement a, const TLElement& b) { return a -= b; }
    TLElement operator-() const { return scaled(FieldElem(-1)); }

    TLElement scaled(const FieldElem& c) const {
        TLElement r(n_, m_);
        if (c.is_zero()) return r;
        r.terms_.reserve(terms_.size());
        for (auto& [i, v] : terms_) r.terms_.emplace_back(i, v * c);
        return r;
    }
    friend TLElement operator*(const FieldElem& c, const TLElement& x) { return x.scaled(c); }

    /// this += c * o
    TLElement& axpy(const FieldElem& c, const TLElement& o) {
        check_same_shape(o);
        if (c.is_zero() || o.terms_.empty()) return *this;
        std::vector<Term> out;
        out.reserve(terms_.size() + o.terms_.size());
        std::size_t a = 0, b = 0;
        bool unit = c.is_one();
        while (a < terms_.size() || b < o.terms_.size()) {
            if (b == o.terms_.size() || (a < terms_.size() && terms_[a].first < o.terms_[b].first)) {
                out.push_back(std::move(terms_[a++]));
            } else if (a == terms_.size() || o.terms_[b].first < terms_[a].first) {
                out.emplace_back(o.terms_[b].first, unit ? o.terms_[b].second : o.terms_[b].second * c);
                ++b;
            } else {
                FieldElem v = terms_[a].second + (unit ? o.terms_[b].second : o.terms_[b].second * c);
                if (!v.is_zero()) out.emplace_back(terms_[a].first, std::move(v));
                ++a;
                ++b;
            }
        }
        terms_ = std::move(out);
        return *this;
    }

    friend bool operator==(const TLElement& a, const TLElement& b) {
        return a.n_ == b.n_ && a.m_ == b.m_ && a.terms_ == b.terms_;
    }
    friend bool operator!=(const TLElement& a, const TLElement& b) { return !(a == b); }

    /// Vertical composition top o bottom.
    static TLElement compose(const TLElement& top, const TLElement& bottom);

    /// Side-by-side placement (a on the left).
    static TLElement juxtapose(const TLElement& a, const TLElement& b) {
        TLElement r(a.n_ + b.n_, a.m_ + b.m_);
        const auto& ba = a.basis();
        const auto& bb = b.basis();
        const auto& br = r.basis();
        for (auto& [i, x] : a.terms_)
            for (auto& [j, y] : b.terms_)
                r.terms_.emplace_back(br.index_of(FlatTangle::juxtapose(ba[static_cast<std::size_t>(i)], bb[static_cast<std::size_t>(j)])), x * y);
        r.normalize();
        return r;
    }

    TLElement reflected() const {
        TLElement r(m_, n_);
        const auto& b = basis();
        const auto& br = r.basis();
        for (auto& [i, x] : terms_) r.terms_.emplace_back(br.index_of(b[static_cast<std::size_t>(i)].reflected()), x);
        r.normalize();
        return r;
    }

    std::string to_string() const {
        if (terms_.empty()) return "0";
        std::string s;
        const auto& b = basis();
        for (auto& [i, c] : terms_) {
            if (!s.empty()) s += " + ";
            s += "(" + c.to_string() + ")*" + b[static_cast<std::size_t>(i)].to_string();
        }
        return s;
    }

    /// Adds c to the coefficient of basis index i (used by builders).
    void add_term(int index, const FieldElem& c) {
        if (c.is_zero()) return;
        auto it = std::lower_bound(terms_.begin(), terms_.end(), index, [](const Term& a, int b) { return a.first < b; });
        if (it != terms_.end() && it->first == index) {
            it->second += c;
            if (it->second.is_zero()) terms_.erase(it);
        } else {
            terms_.insert(it, {index, c});
        }
    }

private:
    void check_same_shape(const TLElement& o) const {
        if (n_ != o.n_ || m_ != o.m_) throw BoundaryMismatch("TLElement shapes differ");
    }

    void normalize() {
        std::sort(terms_.begin(), terms_.end(), [](const Term& a, const Term& b) { return a.first < b.first; });
        std::vector<Term> out;
        for (auto& t : terms_) {
            if (!out.empty() && out.back().first == t.first)
                out.back().second += t.second;
            else
                out.push_back(std::move(t));
        }
        terms_.clear();
        for (auto& t : out)
            if (!t.second.is_zero()) terms_.push_back(std::move(t));
    }

    int n_ = 0, m_ = 0;
    std::vector<Term> terms_;
};

namespace detail {

// lcm of the denominators occurring in x
inline LaurentPoly common_denominator(const TLElement& x) {
    std::vector<const LaurentPoly*> dens;
    for (auto& [i, c] : x.raw_terms()) {
        if (c.den().is_one()) continue;
        bool seen = false;
        for (auto* d : dens)
            if (*d == c.den()) {
                seen = true;
                break;
            }
        if (!seen) dens.push_back(&c.den());
    }
    LaurentPoly l(1);
    for (auto* d : dens) {
        LaurentPoly g = gcd(l, *d);
        l = l * *poly::divide(*d, g);
    }
    if (!l.is_zero() && l.leading() < 0) l = -l;
    return l;
}

}  // namespace detail

inline TLElement TLElement::compose(const TLElement& top, const TLElement& bottom) {
    if (top.n_ != bottom.m_) throw BoundaryMismatch("tl_compose: inner boundary counts differ");
    TLElement r(bottom.n_, top.m_);
    if (top.is_zero() || bottom.is_zero()) return r;
    using namespace kronecker;
    CompositionTable& table = CompositionTable::get(bottom.n_, bottom.m_, top.m_);

    // common denominators and integer numerators
    LaurentPoly dt = detail::common_denominator(top), db = detail::common_denominator(bottom);
    auto numerators = [](const TLElement& x, const LaurentPoly& d) {
        std::vector<LaurentPoly> out;
        out.reserve(x.terms_.size());
        for (auto& [i, c] : x.terms_) out.push_back(c.den().is_one() ? c.num() * d : c.num() * *poly::divide(d, c.den()));
        return out;
    };
    std::vector<LaurentPoly> nt = numerators(top, dt), nb = numerators(bottom, db);
    auto span = [](const std::vector<LaurentPoly>& v, int& lo, int& hi, Integer& mx) {
        lo = v.front().low();
        hi = v.front().high();
        mx = 0;
        for (auto& p : v) {
            lo = std::min(lo, p.low());
            hi = std::max(hi, p.high());
            Integer a = p.max_norm();
            if (a > mx) mx = a;
        }
    };
    int lt, ht, lb, hb;
    Integer mt, mb;
    span(nt, lt, ht, mt);
    span(nb, lb, hb, mb);
    std::size_t len = static_cast<std::size_t>(std::min(ht - lt, hb - lb) + 1);
    std::size_t pairs = nt.size() * nb.size();
    std::size_t width = bit_length(mt) + bit_length(mb) + bit_length(Integer(len)) + bit_length(Integer(pairs)) + 2;

    Mpz tmp;
    std::vector<Mpz> pt(nt.size()), pb(nb.size());
    for (std::size_t i = 0; i < nt.size(); ++i) pack(nt[i], lt, width, pt[i].get(), tmp.get());
    for (std::size_t j = 0; j < nb.size(); ++j) pack(nb[j], lb, width, pb[j].get(), tmp.get());

    std::unordered_map<std::uint64_t, std::size_t> slot;
    std::vector<Mpz> acc;
    std::vector<std::pair<int, int>> keys;
    for (std::size_t i = 0; i < nt.size(); ++i) {
        std::size_t ti = static_cast<std::size_t>(top.terms_[i].first);
        for (std::size_t j = 0; j < nb.size(); ++j) {
            auto e = table.lookup(ti, static_cast<std::size_t>(bottom.terms_[j].first));
            std::uint64_t key = (static_cast<std::uint64_t>(e.index) << 8) | static_cast<std::uint64_t>(e.circles);
            auto [it, inserted] = slot.try_emplace(key, acc.size());
            if (inserted) {
                acc.emplace_back();
                keys.emplace_back(e.index, e.circles);
            }
            mpz_addmul(acc[it->second].get(), pt[i].get(), pb[j].get());
        }
    }
    // gather per result tangle
    std::vector<std::size_t> order(acc.size());
    for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return keys[a] < keys[b]; });
    LaurentPoly den = dt * db;
    bool trivial_den = den.is_one();
    std::size_t k = 0;
    while (k < order.size()) {
        int idx = keys[order[k]].first;
        LaurentPoly num;
        while (k < order.size() && keys[order[k]].first == idx) {
            LaurentPoly s = unpack(acc[order[k]].get(), lt + lb, width, tmp.get());
            int circ = keys[order[k]].second;
            if (!s.is_zero()) num += circ ? s * delta_power(circ) : s;
            ++k;
        }
        if (num.is_zero()) continue;
        r.terms_.emplace_back(idx, trivial_den ? FieldElem(std::move(num)) : FieldElem(std::move(num), den));
    }
    return r;
}

inline TLElement tl_compose(const TLElement& top, const TLElement& bottom) { return TLElement::compose(top, bottom); }

/// Composes a chain of elements listed from top to bottom.
inline TLElement tl_product(std::initializer_list<TLElement> factors) {
    auto it = factors.end();
    TLElement acc = *--it;
    while (it != factors.begin()) acc = TLElement::compose(*--it, acc);
    return acc;
}

inline TLElement operator*(const TLElement& top, const TLElement& bottom) { return TLElement::compose(top, bottom); }

/// x with k identity strands added on the right.
inline TLElement pad_right(const TLElement& x, int k) {
    if (k == 0) return x;
    return TLElement::juxtapose(x, TLElement::identity(k));
}
inline TLElement pad_left(const TLElement& x, int k) {
    if (k == 0) return x;
    return TLElement::juxtapose(TLElement::identity(k), x);
}

}  // namespace cheb
