#pragma once

#include "cheb/jones_wenzl.hpp"
#include "cheb/linalg.hpp"

#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <string>
#include <vector>

namespace cheb {

struct NoSolution : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct NonUnique : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct NotAdmissible : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct ParityMismatch : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// (k,n) tangles with through-degree k: the cup diagrams indexing the cell of p_k in TL_n.
inline std::vector<FlatTangle> cup_diagrams(int k, int n) {
    std::vector<FlatTangle> out;
    for (auto& t : TangleBasis::get(k, n).all())
        if (t.through_degree() == k) out.push_back(t);
    return out;
}

namespace detail {

inline void check_nk(int n, int k) {
    if (k < 0 || k > n) throw InvalidPosition("need 0 <= k <= n");
    if ((n - k) % 2 != 0) throw ParityMismatch("n and k must have the same parity");
}

inline TLElement central_idempotent_gram(int n, int k) {
    std::vector<FlatTangle> cups = cup_diagrams(k, n);
    const std::size_t N = cups.size();
    FlatTangle idk = FlatTangle::identity(k);
    DenseMatrix<FieldElem> gram(N, std::vector<FieldElem>(N, FieldElem(0)));
    for (std::size_t a = 0; a < N; ++a)
        for (std::size_t b = 0; b < N; ++b) {
            FlatTangle g = FlatTangle::compose(cups[a].reflected(), cups[b]);
            if (g.without_circles() == idk) gram[a][b] = FieldElem(delta_power(g.circles()));
        }
    DenseMatrix<FieldElem> ginv;
    try {
        ginv = invert(gram);
    } catch (const SingularMatrix&) {
        throw NoSolution("central_idempotent: singular Gram matrix");
    }
    TLElement pk = jones_wenzl(k);
    std::vector<TLElement> pk_cupdual;
    for (auto& c : cups) pk_cupdual.push_back(TLElement::compose(pk, TLElement::from_tangle(c.reflected())));
    TLElement z(n, n);
    for (std::size_t a = 0; a < N; ++a) {
        TLElement w(n, k);
        for (std::size_t b = 0; b < N; ++b)
            if (!ginv[a][b].is_zero()) w.axpy(ginv[a][b], pk_cupdual[b]);
        z += TLElement::compose(TLElement::from_tangle(cups[a]), w);
    }
    return z;
}

}  // namespace detail

/// Process-wide memo of central idempotents keyed by (n, k).
inline std::optional<TLElement> central_cache(int n, int k, const TLElement* store = nullptr) {
    static std::mutex mu;
    static std::map<std::pair<int, int>, TLElement> table;
    std::lock_guard<std::mutex> lock(mu);
    if (store) {
        table.emplace(std::make_pair(n, k), *store);
        return *store;
    }
    auto it = table.find({n, k});
    if (it == table.end()) return std::nullopt;
    return it->second;
}

/// Central idempotent p_{n,k}, the projection onto the through-degree-k isotypic part.
///
/// Computed in cellular form: sum over cup diagrams C_a, C_b of (G^{-1})_{ab} C_a p_k C_b^v,
/// where G is the Gram matrix of the cell.
inline TLElement central_idempotent(int n, int k) {
    detail::check_nk(n, k);
    if (auto hit = central_cache(n, k)) return *hit;
    TLElement z = (k == n) ? jones_wenzl(n) : detail::central_idempotent_gram(n, k);
    central_cache(n, k, &z);
    return z;
}

/// p_{n,k} by the uniqueness characterization: the unique z with z(x p_l y) = [l = k] x p_l y.
/// Solves a linear system of size Catalan(n); intended as an independent cross-check for small n.
inline TLElement central_idempotent_by_solve(int n, int k) {
    detail::check_nk(n, k);
    const TangleBasis& basis = TangleBasis::get(n, n);
    const int N = static_cast<int>(basis.size());
    SparseSolver<FieldElem> solver;
    for (int l = n % 2; l <= n; l += 2) {
        std::vector<FlatTangle> cups = cup_diagrams(l, n);
        TLElement pl = jones_wenzl(l);
        for (auto& ca : cups)
            for (auto& cb : cups) {
                TLElement s = tl_product({TLElement::from_tangle(ca), pl, TLElement::from_tangle(cb.reflected())});
                std::map<int, SparseRow<FieldElem>> rows;
                for (int t = 0; t < N; ++t) {
                    TLElement ts = TLElement::compose(TLElement::from_tangle(basis[static_cast<std::size_t>(t)]), s);
                    for (auto& [u, c] : ts.raw_terms()) rows[u][t] = c;
                }
                std::map<int, FieldElem> rhs;
                if (l == k)
                    for (auto& [u, c] : s.raw_terms()) rhs[u] = c;
                for (auto& [u, c] : rhs) rows[u];
                for (auto& [u, row] : rows) {
                    auto it = rhs.find(u);
                    if (!solver.add_equation(row, it == rhs.end() ? FieldElem(0) : it->second))
                        throw NoSolution("central_idempotent_by_solve: inconsistent system");
                }
            }
    }
    if (static_cast<int>(solver.rank()) != N) throw NonUnique("central_idempotent_by_solve: solution not unique");
    TLElement z(n, n);
    for (auto& [t, c] : solver.solve()) z.add_term(t, c);
    return z;
}

/// Sequence of +-1 with nonnegative partial sums.
struct AdmissibleSequence {
    std::vector<int> entries;

    int size() const { return static_cast<int>(entries.size()); }
    int total() const {
        int s = 0;
        for (int e : entries) s += e;
        return s;
    }
    bool admissible() const {
        int s = 0;
        for (int e : entries) {
            if (e != 1 && e != -1) return false;
            s += e;
            if (s < 0) return false;
        }
        return true;
    }
    std::string to_string() const {
        std::string s = "(";
        for (std::size_t i = 0; i < entries.size(); ++i) s += (i ? "," : "") + std::string(entries[i] > 0 ? "+" : "-");
        return s + ")";
    }
    friend bool operator==(const AdmissibleSequence& a, const AdmissibleSequence& b) { return a.entries == b.entries; }
    friend bool operator<(const AdmissibleSequence& a, const AdmissibleSequence& b) { return a.entries < b.entries; }
};

/// All admissible sequences of length n (optionally with fixed total k), in lexicographic order.
inline std::vector<AdmissibleSequence> admissible_sequences(int n, int k = -1) {
    std::vector<AdmissibleSequence> out;
    std::vector<int> cur;
    std::function<void(int)> rec = [&](int sum) {
        if (static_cast<int>(cur.size()) == n) {
            if (k < 0 || sum == k) out.push_back({cur});
            return;
        }
        for (int e : {-1, 1}) {
            if (sum + e < 0) continue;
            cur.push_back(e);
            rec(sum + e);
            cur.pop_back();
        }
    };
    rec(0);
    return out;
}

inline Integer binomial(int n, int r) {
    if (r < 0 || r > n) return 0;
    Integer b = 1;
    for (int i = 1; i <= r; ++i) b = b * (n - r + i) / i;
    return b;
}

struct AdmissibleCount {
    Integer enumerated;
    Integer formula;
};

/// Number of admissible sequences of length n and total k, by enumeration and by
/// the closed form (k+1)/(m+1) binom(n, m) with m = (n+k)/2.
inline AdmissibleCount admissible_count(int n, int k) {
    detail::check_nk(n, k);
    AdmissibleCount c;
    c.enumerated = static_cast<long>(admissible_sequences(n, k).size());
    int m = (n + k) / 2;
    c.formula = Integer(k + 1) * binomial(n, m) / (m + 1);
    return c;
}

/// p_eps = prod_i (p_{i, eps_1+...+eps_i} + id_{n-i}).
inline TLElement primitive_idempotent(const AdmissibleSequence& eps) {
    if (!eps.admissible()) throw NotAdmissible("sequence " + eps.to_string() + " is not admissible");
    int n = eps.size();
    std::vector<TLElement> factors;
    int s = 0;
    for (int i = 1; i <= n; ++i) {
        s += eps.entries[static_cast<std::size_t>(i - 1)];
        factors.push_back(pad_right(central_idempotent(i, s), n - i));
    }
    TLElement up = TLElement::identity(n), down = TLElement::identity(n);
    for (std::size_t i = 0; i < factors.size(); ++i) {
        up = TLElement::compose(factors[i], up);
        down = TLElement::compose(factors[factors.size() - 1 - i], down);
    }
    if (!(up == down)) throw std::logic_error("primitive_idempotent: factors do not commute");
    return up;
}

}  // namespace cheb
