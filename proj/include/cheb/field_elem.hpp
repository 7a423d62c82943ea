#pragma once

#include "cheb/laurent_poly.hpp"

#include <atomic>
#include <stdexcept>
#include <string>

namespace cheb {

struct DivisionByZero : std::domain_error {
    DivisionByZero() : std::domain_error("division by zero in Q(q)") {}
};

struct PoleAtPoint : std::domain_error {
    explicit PoleAtPoint(const std::string& at) : std::domain_error("pole at q = " + at) {}
};

/// Element of Q(q) as a reduced fraction of integer Laurent polynomials.
/// The denominator has lowest exponent 0 and a positive leading coefficient.
class FieldElem {
public:
    FieldElem() : den_(1) {}
    FieldElem(int c) : num_(c), den_(1) {}
    FieldElem(const Integer& c) : num_(c), den_(1) {}
    FieldElem(LaurentPoly p) : num_(std::move(p)), den_(1) {}
    FieldElem(const Rational& r) : num_(numerator(r)), den_(denominator(r)) {}
    FieldElem(LaurentPoly n, LaurentPoly d) : num_(std::move(n)), den_(std::move(d)) { canonicalize(); }

    static FieldElem q_power(int e) { return FieldElem(LaurentPoly::monomial(e)); }

    const LaurentPoly& num() const { return num_; }
    const LaurentPoly& den() const { return den_; }

    bool is_zero() const { return num_.is_zero(); }
    bool is_one() const { return num_.is_one() && den_.is_one(); }
    bool is_constant() const { return num_.is_constant() && den_.is_constant(); }
    bool is_polynomial() const { return den_.is_one(); }

    /// Monomial c*q^e with rational c (units of Z[q^{+-1}] over Q): nonzero and single-term.
    bool is_monomial() const { return num_.is_monomial() && den_.is_constant(); }

    FieldElem operator-() const {
        FieldElem r = *this;
        r.num_ = -r.num_;
        return r;
    }

    FieldElem& operator+=(const FieldElem& o) { return *this = add(*this, o, false); }
    FieldElem& operator-=(const FieldElem& o) { return *this = add(*this, o, true); }
    FieldElem& operator*=(const FieldElem& o) { return *this = mul(*this, o); }
    FieldElem& operator/=(const FieldElem& o) { return *this = mul(*this, o.inverse()); }

    friend FieldElem operator+(const FieldElem& a, const FieldElem& b) { return add(a, b, false); }
    friend FieldElem operator-(const FieldElem& a, const FieldElem& b) { return add(a, b, true); }
    friend FieldElem operator*(const FieldElem& a, const FieldElem& b) { return mul(a, b); }
    friend FieldElem operator/(const FieldElem& a, const FieldElem& b) { return mul(a, b.inverse()); }

    FieldElem inverse() const {
        if (is_zero()) throw DivisionByZero();
        FieldElem r;
        r.num_ = den_;
        r.den_ = num_;
        r.normalize_den();
        return r;
    }

    FieldElem shifted(int k) const {
        FieldElem r = *this;
        r.num_ = r.num_.shifted(k);
        return r;
    }

    friend bool operator==(const FieldElem& a, const FieldElem& b) { return a.num_ == b.num_ && a.den_ == b.den_; }
    friend bool operator!=(const FieldElem& a, const FieldElem& b) { return !(a == b); }
    friend bool operator<(const FieldElem& a, const FieldElem& b) {
        if (a.num_ != b.num_) return a.num_ < b.num_;
        return a.den_ < b.den_;
    }

    /// Value at q = q0.
    Rational specialize(const Rational& q0) const {
        Rational d = den_.eval(q0);
        if (d.is_zero()) throw PoleAtPoint(q0.str());
        return num_.eval(q0) / d;
    }

    std::string to_string() const {
        if (den_.is_one()) return num_.to_string();
        auto wrap = [](const LaurentPoly& p) {
            std::string s = p.to_string();
            return p.length() > 1 ? "(" + s + ")" : s;
        };
        return wrap(num_) + "/" + wrap(den_);
    }

private:
    static FieldElem add(const FieldElem& a, const FieldElem& b, bool subtract) {
        if (b.is_zero()) return a;
        if (a.is_zero()) return subtract ? -b : b;
        FieldElem r;
        if (a.den_ == b.den_) {
            r.num_ = a.num_;
            r.num_.add_scaled(b.num_, subtract ? -1 : 1);
            r.den_ = a.den_;
            if (a.den_.is_one()) return r;
            r.canonicalize();
            return r;
        }
        if (a.den_.is_constant() && b.den_.is_constant()) {
            const Integer& da = a.den_.trailing();
            const Integer& db = b.den_.trailing();
            Integer g = boost::multiprecision::gcd(da, db);
            Integer fa = db / g, fb = da / g;
            r.num_ = a.num_ * fa;
            r.num_.add_scaled(b.num_, subtract ? Integer(-fb) : fb);
            r.den_ = LaurentPoly(da * fa);
            r.canonicalize();
            return r;
        }
        LaurentPoly g = gcd(a.den_, b.den_);
        LaurentPoly fa = *poly::divide(b.den_, g);
        LaurentPoly fb = *poly::divide(a.den_, g);
        r.num_ = a.num_ * fa;
        if (subtract)
            r.num_ -= b.num_ * fb;
        else
            r.num_ += b.num_ * fb;
        r.den_ = a.den_ * fa;
        r.canonicalize();
        return r;
    }

    static FieldElem mul(const FieldElem& a, const FieldElem& b) {
        if (a.is_zero() || b.is_zero()) return {};
        FieldElem r;
        if (a.den_.is_one() && b.den_.is_one()) {
            r.num_ = a.num_ * b.num_;
            return r;
        }
        if (a.den_.is_constant() && b.den_.is_constant()) {
            r.num_ = a.num_ * b.num_;
            r.den_ = LaurentPoly(a.den_.trailing() * b.den_.trailing());
            r.canonicalize();
            return r;
        }
        // cross-cancel before multiplying
        LaurentPoly an = a.num_, ad = a.den_, bn = b.num_, bd = b.den_;
        cancel(an, bd);
        cancel(bn, ad);
        r.num_ = an * bn;
        r.den_ = ad * bd;
        r.normalize_den();
        return r;
    }

    // Removes gcd(n, d) from both; d keeps low() == 0.
    static void cancel(LaurentPoly& n, LaurentPoly& d) {
        if (d.is_one()) return;
        LaurentPoly g = gcd(n, d);
        if (g.is_one()) return;
        int nl = n.low();
        n = poly::divide(poly::normalize_low(n), g)->shifted(nl);
        d = *poly::divide(d, g);
    }

    void normalize_den() {
        if (den_.is_zero()) throw DivisionByZero();
        int s = den_.low();
        if (s != 0) {
            den_ = den_.shifted(-s);
            num_ = num_.shifted(-s);
        }
        if (den_.leading() < 0) {
            den_ = -den_;
            num_ = -num_;
        }
    }

    void canonicalize() {
        if (den_.is_zero()) throw DivisionByZero();
        if (num_.is_zero()) {
            den_ = LaurentPoly(1);
            return;
        }
        normalize_den();
        if (den_.is_constant()) {
            Integer g = boost::multiprecision::gcd(num_.content(), den_.trailing());
            if (g != 1) {
                num_.divide_exact(g);
                den_.divide_exact(g);
            }
            return;
        }
        cancel(num_, den_);
        normalize_den();
    }

    LaurentPoly num_;
    LaurentPoly den_;
};

inline FieldElem qint(int n) { return FieldElem(quantum_integer(n)); }

/// Result of a genericity check: 1 - q^d is a unit of Q(q) for all 1 <= d <= d_max.
struct GenericityReport {
    int d_max = 0;
    bool all_invertible = true;
};

inline std::atomic<int>& session_genericity_bound() {
    static std::atomic<int> bound{0};
    return bound;
}

/// Confirms 1 - q^d is nonzero (hence invertible) for each d in [1, d_max] and records d_max.
inline GenericityReport genericity_check(int d_max) {
    GenericityReport rep;
    rep.d_max = d_max < 0 ? 0 : d_max;
    for (int d = 1; d <= d_max; ++d) {
        FieldElem x = FieldElem(1) - FieldElem::q_power(d);
        if (x.is_zero()) rep.all_invertible = false;
        else if (!(x * x.inverse()).is_one()) rep.all_invertible = false;
    }
    session_genericity_bound().store(rep.d_max);
    return rep;
}

}  // namespace cheb
