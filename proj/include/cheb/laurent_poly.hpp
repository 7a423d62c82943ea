#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <cstddef>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace cheb {

using Integer = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// Integer Laurent polynomial in q, stored densely from the lowest nonzero exponent.
class LaurentPoly {
public:
    LaurentPoly() = default;
    LaurentPoly(int c) : LaurentPoly(Integer(c)) {}
    LaurentPoly(Integer c) {
        if (!c.is_zero()) c_.push_back(std::move(c));
    }

    static LaurentPoly monomial(int e, Integer c = 1) {
        LaurentPoly p(std::move(c));
        p.low_ = p.c_.empty() ? 0 : e;
        return p;
    }

    static LaurentPoly from_terms(const std::vector<std::pair<int, Integer>>& terms) {
        LaurentPoly p;
        if (terms.empty()) return p;
        int lo = terms.front().first, hi = lo;
        for (auto& [e, c] : terms) {
            lo = std::min(lo, e);
            hi = std::max(hi, e);
        }
        p.low_ = lo;
        p.c_.assign(static_cast<std::size_t>(hi - lo + 1), Integer(0));
        for (auto& [e, c] : terms) p.c_[e - lo] += c;
        p.trim();
        return p;
    }

    /// Builds from a dense coefficient vector whose first entry sits at exponent `low`.
    static LaurentPoly from_dense(int low, std::vector<Integer> coeffs) {
        LaurentPoly p;
        p.low_ = low;
        p.c_ = std::move(coeffs);
        p.trim();
        return p;
    }

    bool is_zero() const { return c_.empty(); }
    bool is_constant() const { return c_.empty() || (c_.size() == 1 && low_ == 0); }
    bool is_monomial() const { return c_.size() == 1; }
    bool is_one() const { return c_.size() == 1 && low_ == 0 && c_[0] == 1; }

    /// Lowest exponent with a nonzero coefficient (0 for the zero polynomial).
    int low() const { return low_; }
    int high() const { return c_.empty() ? 0 : low_ + static_cast<int>(c_.size()) - 1; }
    std::size_t length() const { return c_.size(); }
    const std::vector<Integer>& dense() const { return c_; }

    Integer coeff(int e) const {
        if (c_.empty() || e < low_ || e > high()) return 0;
        return c_[e - low_];
    }
    const Integer& leading() const { return c_.back(); }
    const Integer& trailing() const { return c_.front(); }

    std::vector<std::pair<int, Integer>> terms() const {
        std::vector<std::pair<int, Integer>> out;
        for (std::size_t i = 0; i < c_.size(); ++i)
            if (!c_[i].is_zero()) out.emplace_back(low_ + static_cast<int>(i), c_[i]);
        return out;
    }

    /// Multiplies by q^k.
    LaurentPoly shifted(int k) const {
        LaurentPoly p = *this;
        if (!p.c_.empty()) p.low_ += k;
        return p;
    }

    LaurentPoly operator-() const {
        LaurentPoly p = *this;
        for (auto& x : p.c_) x = -x;
        return p;
    }

    LaurentPoly& operator+=(const LaurentPoly& o) { return add_scaled(o, 1); }
    LaurentPoly& operator-=(const LaurentPoly& o) { return add_scaled(o, -1); }

    LaurentPoly& operator*=(const Integer& k) {
        if (k.is_zero()) {
            c_.clear();
            low_ = 0;
            return *this;
        }
        for (auto& x : c_) x *= k;
        return *this;
    }

    friend LaurentPoly operator+(LaurentPoly a, const LaurentPoly& b) { return a += b; }
    friend LaurentPoly operator-(LaurentPoly a, const LaurentPoly& b) { return a -= b; }
    friend LaurentPoly operator*(LaurentPoly a, const Integer& k) { return a *= k; }
    friend LaurentPoly operator*(const Integer& k, LaurentPoly a) { return a *= k; }

    friend LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b) {
        if (a.is_zero() || b.is_zero()) return {};
        if (a.c_.size() == 1) return scaled_shift(b, a.c_[0], a.low_);
        if (b.c_.size() == 1) return scaled_shift(a, b.c_[0], b.low_);
        LaurentPoly r;
        r.low_ = a.low_ + b.low_;
        r.c_.assign(a.c_.size() + b.c_.size() - 1, Integer(0));
        Integer t;
        for (std::size_t i = 0; i < a.c_.size(); ++i) {
            if (a.c_[i].is_zero()) continue;
            for (std::size_t j = 0; j < b.c_.size(); ++j) {
                t = a.c_[i];
                t *= b.c_[j];
                r.c_[i + j] += t;
            }
        }
        r.trim();
        return r;
    }
    LaurentPoly& operator*=(const LaurentPoly& o) { return *this = *this * o; }

    LaurentPoly& add_scaled(const LaurentPoly& o, const Integer& k) {
        if (o.is_zero() || k.is_zero()) return *this;
        if (is_zero()) {
            *this = o;
            if (k != 1) *this *= k;
            return *this;
        }
        int lo = std::min(low_, o.low_), hi = std::max(high(), o.high());
        if (lo < low_) {
            c_.insert(c_.begin(), static_cast<std::size_t>(low_ - lo), Integer(0));
            low_ = lo;
        }
        if (hi > high()) c_.resize(static_cast<std::size_t>(hi - lo + 1), Integer(0));
        for (std::size_t i = 0; i < o.c_.size(); ++i) {
            if (k == 1)
                c_[o.low_ - low_ + i] += o.c_[i];
            else if (k == -1)
                c_[o.low_ - low_ + i] -= o.c_[i];
            else
                c_[o.low_ - low_ + i] += o.c_[i] * k;
        }
        trim();
        return *this;
    }

    friend bool operator==(const LaurentPoly& a, const LaurentPoly& b) {
        return a.low_ == b.low_ && a.c_ == b.c_;
    }
    friend bool operator!=(const LaurentPoly& a, const LaurentPoly& b) { return !(a == b); }

    /// Total order used only for deterministic containers.
    friend bool operator<(const LaurentPoly& a, const LaurentPoly& b) {
        if (a.c_.size() != b.c_.size()) return a.c_.size() < b.c_.size();
        if (a.low_ != b.low_) return a.low_ < b.low_;
        return a.c_ < b.c_;
    }

    /// Evaluates at a rational point; q0 must be nonzero if negative exponents occur.
    Rational eval(const Rational& q0) const {
        if (c_.empty()) return 0;
        if (q0.is_zero() && low_ < 0) throw std::domain_error("LaurentPoly::eval: negative power of zero");
        Rational acc = 0;
        for (std::size_t i = c_.size(); i-- > 0;) acc = acc * q0 + Rational(c_[i]);
        return acc * rational_pow(q0, low_);
    }

    /// Gcd of all coefficients, nonnegative.
    Integer content() const {
        Integer g = 0;
        for (auto& x : c_) {
            if (x.is_zero()) continue;
            g = boost::multiprecision::gcd(g, x);
            if (g == 1) break;
        }
        return g;
    }

    /// Maximum absolute coefficient.
    Integer max_norm() const {
        Integer m = 0;
        for (auto& x : c_) {
            Integer a = abs(x);
            if (a > m) m = a;
        }
        return m;
    }

    LaurentPoly& divide_exact(const Integer& k) {
        for (auto& x : c_) x /= k;
        return *this;
    }

    std::string to_string() const {
        if (c_.empty()) return "0";
        std::ostringstream os;
        bool first = true;
        for (std::size_t i = c_.size(); i-- > 0;) {
            const Integer& x = c_[i];
            if (x.is_zero()) continue;
            int e = low_ + static_cast<int>(i);
            Integer a = abs(x);
            if (first) {
                if (x < 0) os << "-";
            } else {
                os << (x < 0 ? " - " : " + ");
            }
            first = false;
            if (e == 0) {
                os << a;
                continue;
            }
            if (a != 1) os << a << "*";
            os << "q";
            if (e != 1) os << "^" << (e < 0 ? "(" + std::to_string(e) + ")" : std::to_string(e));
        }
        return os.str();
    }

    static Rational rational_pow(const Rational& x, int e) {
        Rational r = 1, b = x;
        if (e < 0) {
            b = 1 / b;
            e = -e;
        }
        while (e) {
            if (e & 1) r *= b;
            b *= b;
            e >>= 1;
        }
        return r;
    }

private:
    static LaurentPoly scaled_shift(const LaurentPoly& a, const Integer& k, int s) {
        LaurentPoly r = a;
        r.low_ += s;
        if (k != 1) r *= k;
        return r;
    }

    void trim() {
        std::size_t lead = 0;
        while (lead < c_.size() && c_[lead].is_zero()) ++lead;
        if (lead == c_.size()) {
            c_.clear();
            low_ = 0;
            return;
        }
        while (c_.back().is_zero()) c_.pop_back();
        if (lead) {
            c_.erase(c_.begin(), c_.begin() + static_cast<std::ptrdiff_t>(lead));
            low_ += static_cast<int>(lead);
        }
    }

    int low_ = 0;
    std::vector<Integer> c_;
};

inline LaurentPoly q_power(int e) { return LaurentPoly::monomial(e); }

/// Balanced quantum integer [n] = q^{n-1} + q^{n-3} + ... + q^{1-n}; [0] = 0, [-n] = -[n].
inline LaurentPoly quantum_integer(int n) {
    if (n == 0) return {};
    if (n < 0) return -quantum_integer(-n);
    std::vector<std::pair<int, Integer>> t;
    for (int e = n - 1; e >= 1 - n; e -= 2) t.emplace_back(e, 1);
    return LaurentPoly::from_terms(t);
}

namespace poly {

// Helpers on polynomials with nonnegative exponents and nonzero constant term
// (Laurent polynomials normalized by their lowest q-power).

inline LaurentPoly normalize_low(const LaurentPoly& p) { return p.shifted(-p.low()); }

inline LaurentPoly primitive_part(LaurentPoly p) {
    if (p.is_zero()) return p;
    Integer g = p.content();
    if (p.leading() < 0) g = -g;
    if (g != 1) p.divide_exact(g);
    return p;
}

/// Exact division a / b in Z[q]; both with low() == 0. Returns nullopt if b does not divide a.
inline std::optional<LaurentPoly> divide(const LaurentPoly& a, const LaurentPoly& b) {
    if (b.is_zero()) throw std::domain_error("poly::divide by zero");
    if (a.is_zero()) return LaurentPoly{};
    int da = a.high(), db = b.high();
    if (da < db) return std::nullopt;
    std::vector<Integer> r(a.dense());
    r.resize(static_cast<std::size_t>(da + 1 - a.low()));
    // a.low()==0 assumed; work on dense coefficients
    std::vector<Integer> q(static_cast<std::size_t>(da - db + 1), Integer(0));
    const auto& bc = b.dense();
    const Integer& lb = bc.back();
    Integer quo, rem, t;
    for (int i = da - db; i >= 0; --i) {
        Integer& top = r[static_cast<std::size_t>(i + db)];
        if (top.is_zero()) continue;
        boost::multiprecision::divide_qr(top, lb, quo, rem);
        if (!rem.is_zero()) return std::nullopt;
        for (int j = 0; j <= db; ++j) {
            t = quo;
            t *= bc[static_cast<std::size_t>(j)];
            r[static_cast<std::size_t>(i + j)] -= t;
        }
        q[static_cast<std::size_t>(i)] = quo;
    }
    for (auto& x : r)
        if (!x.is_zero()) return std::nullopt;
    return LaurentPoly::from_dense(0, std::move(q));
}

/// Pseudo-remainder of a by b (both low() == 0).
inline LaurentPoly pseudo_remainder(const LaurentPoly& a, const LaurentPoly& b) {
    int db = b.high();
    std::vector<Integer> r(a.dense());
    const auto& bc = b.dense();
    const Integer& lb = bc.back();
    int dr = a.high();
    while (dr >= db && !r.empty()) {
        Integer lr = r[static_cast<std::size_t>(dr)];
        if (lr.is_zero()) {
            --dr;
            continue;
        }
        for (auto& x : r) x *= lb;
        for (int j = 0; j <= db; ++j) r[static_cast<std::size_t>(dr - db + j)] -= lr * bc[static_cast<std::size_t>(j)];
        --dr;
    }
    return LaurentPoly::from_dense(0, std::move(r));
}

inline LaurentPoly gcd_prs(LaurentPoly a, LaurentPoly b) {
    a = primitive_part(a);
    b = primitive_part(b);
    if (a.high() < b.high()) std::swap(a, b);
    while (!b.is_zero()) {
        LaurentPoly r = pseudo_remainder(a, b);
        a = std::move(b);
        b = r.is_zero() ? r : primitive_part(normalize_low(r));
    }
    return primitive_part(a);
}

inline Integer eval_at(const LaurentPoly& p, const Integer& x) {
    Integer acc = 0;
    const auto& c = p.dense();
    for (std::size_t i = c.size(); i-- > 0;) {
        acc *= x;
        acc += c[i];
    }
    return acc;
}

/// Heuristic gcd (evaluation at a large integer, balanced-digit reconstruction),
/// falling back to the primitive remainder sequence.
inline LaurentPoly gcd_primitive(const LaurentPoly& a, const LaurentPoly& b) {
    if (a.high() == 0 || b.high() == 0) return LaurentPoly(1);
    Integer xi = 2 * std::min(a.max_norm(), b.max_norm()) + 29;
    for (int attempt = 0; attempt < 6; ++attempt) {
        Integer g = boost::multiprecision::gcd(eval_at(a, xi), eval_at(b, xi));
        std::vector<Integer> digits;
        Integer half = xi / 2, d;
        while (!g.is_zero()) {
            d = g % xi;
            if (d < 0) d += xi;
            if (d > half) d -= xi;
            digits.push_back(d);
            g = (g - d) / xi;
        }
        LaurentPoly cand = primitive_part(LaurentPoly::from_dense(0, std::move(digits)));
        if (!cand.is_zero() && cand.low() == 0 && divide(a, cand) && divide(b, cand)) return cand;
        xi = xi * 73794 / 27011;
    }
    return gcd_prs(a, b);
}

}  // namespace poly

/// Gcd in Z[q, q^-1] up to units, with positive leading coefficient.
inline LaurentPoly gcd(const LaurentPoly& a, const LaurentPoly& b) {
    if (a.is_zero()) return poly::primitive_part(poly::normalize_low(b)) * b.content();
    if (b.is_zero()) return poly::primitive_part(poly::normalize_low(a)) * a.content();
    Integer c = boost::multiprecision::gcd(a.content(), b.content());
    LaurentPoly pa = poly::primitive_part(poly::normalize_low(a));
    LaurentPoly pb = poly::primitive_part(poly::normalize_low(b));
    return poly::gcd_primitive(pa, pb) * c;
}

}  // namespace cheb
