#pragma once

#include "cheb/laurent_poly.hpp"

#include <gmp.h>

#include <cstdint>
#include <iterator>
#include <limits>
#include <vector>

namespace cheb::kronecker {

/// RAII wrapper over mpz_t.
class Mpz {
public:
    Mpz() { mpz_init(v_); }
    Mpz(const Mpz& o) { mpz_init_set(v_, o.v_); }
    Mpz(Mpz&& o) noexcept {
        mpz_init(v_);
        mpz_swap(v_, o.v_);
    }
    Mpz& operator=(const Mpz& o) {
        mpz_set(v_, o.v_);
        return *this;
    }
    Mpz& operator=(Mpz&& o) noexcept {
        mpz_swap(v_, o.v_);
        return *this;
    }
    ~Mpz() { mpz_clear(v_); }
    mpz_ptr get() { return v_; }
    mpz_srcptr get() const { return v_; }

private:
    mpz_t v_;
};

inline void to_mpz(const Integer& x, mpz_ptr out) {
    if (x >= std::numeric_limits<long>::min() && x <= std::numeric_limits<long>::max()) {
        mpz_set_si(out, x.convert_to<long>());
        return;
    }
    std::vector<unsigned char> bytes;
    export_bits(Integer(abs(x)), std::back_inserter(bytes), 8);
    mpz_import(out, bytes.size(), 1, 1, 1, 0, bytes.data());
    if (x < 0) mpz_neg(out, out);
}

inline Integer from_mpz(mpz_srcptr x) {
    if (mpz_fits_slong_p(x)) return Integer(mpz_get_si(x));
    std::size_t count = (mpz_sizeinbase(x, 2) + 7) / 8;
    std::vector<unsigned char> bytes(count);
    mpz_export(bytes.data(), &count, 1, 1, 1, 0, x);
    bytes.resize(count);
    Integer r;
    import_bits(r, bytes.begin(), bytes.end(), 8);
    if (mpz_sgn(x) < 0) r = -r;
    return r;
}

inline std::size_t bit_length(const Integer& x) {
    if (x.is_zero()) return 0;
    return msb(Integer(abs(x))) + 1;
}

/// Packs p (assumed shifted to nonnegative exponents starting at `low`) at 2^width.
inline void pack(const LaurentPoly& p, int low, std::size_t width, mpz_ptr out, mpz_ptr tmp) {
    mpz_set_ui(out, 0);
    if (p.is_zero()) return;
    const auto& c = p.dense();
    int top = p.high() - low;
    for (int e = top; e >= 0; --e) {
        mpz_mul_2exp(out, out, width);
        int idx = e + low - p.low();
        if (idx < 0 || idx >= static_cast<int>(c.size()) || c[static_cast<std::size_t>(idx)].is_zero()) continue;
        to_mpz(c[static_cast<std::size_t>(idx)], tmp);
        mpz_add(out, out, tmp);
    }
}

/// Inverse of pack with balanced digits; the result is multiplied by q^low.
/// Consumes v.
inline LaurentPoly unpack(mpz_ptr v, int low, std::size_t width, mpz_ptr tmp) {
    std::vector<Integer> digits;
    Mpz pow2;
    mpz_setbit(pow2.get(), width);
    while (mpz_sgn(v) != 0) {
        mpz_fdiv_r_2exp(tmp, v, width);
        mpz_sub(v, v, tmp);
        mpz_fdiv_q_2exp(v, v, width);
        if (mpz_tstbit(tmp, width - 1)) {
            mpz_add_ui(v, v, 1);
            mpz_sub(tmp, tmp, pow2.get());
        }
        digits.push_back(from_mpz(tmp));
    }
    return LaurentPoly::from_dense(low, std::move(digits));
}

}  // namespace cheb::kronecker
