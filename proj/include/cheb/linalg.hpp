#pragma once

#include "cheb/field_elem.hpp"

#include <cstddef>
#include <map>
#include <optional>
#include <queue>
#include <stdexcept>
#include <unordered_map>
#include <utility>
#include <vector>

namespace cheb {

struct SingularMatrix : std::domain_error {
    SingularMatrix() : std::domain_error("matrix is singular") {}
};

inline std::size_t coeff_weight(const FieldElem& x) { return x.num().length() + x.den().length(); }
inline std::size_t coeff_weight(const Rational&) { return 1; }

template <class F>
using SparseRow = std::map<int, F>;

/// Incremental sparse Gaussian elimination over an exact field.
///
/// Rows are added one at a time and reduced against the existing pivots; an
/// inconsistent row is reported at insertion. Back-substitution sets free
/// variables to zero.
template <class F>
class SparseSolver {
public:
    /// Adds the equation row . x = rhs. Returns false if it contradicts earlier rows.
    bool add_equation(SparseRow<F> row, F rhs = F(0)) {
        reduce(row, rhs);
        if (row.empty()) {
            if (!rhs.is_zero()) {
                consistent_ = false;
                return false;
            }
            return true;
        }
        // prefer the lightest coefficient as pivot to limit growth
        auto best = row.begin();
        std::size_t bw = coeff_weight(best->second);
        for (auto it = row.begin(); it != row.end(); ++it) {
            std::size_t w = coeff_weight(it->second);
            if (w < bw) {
                bw = w;
                best = it;
            }
        }
        int col = best->first;
        F inv = F(1) / best->second;
        for (auto& [c, v] : row) v = v * inv;
        rhs = rhs * inv;
        pivot_index_[col] = static_cast<int>(pivots_.size());
        pivots_.push_back({col, std::move(row), std::move(rhs)});
        return true;
    }

    bool consistent() const { return consistent_; }
    std::size_t rank() const { return pivots_.size(); }

    /// Returns true if the row lies in the span of the rows added so far.
    bool in_span(SparseRow<F> row) const {
        F rhs(0);
        reduce(row, rhs);
        return row.empty();
    }

    /// Particular solution with free variables set to zero.
    std::map<int, F> solve() const {
        if (!consistent_) throw std::domain_error("SparseSolver: inconsistent system");
        std::map<int, F> x;
        for (std::size_t k = pivots_.size(); k-- > 0;) {
            const Pivot& p = pivots_[k];
            F v = p.rhs;
            for (auto& [c, a] : p.row) {
                if (c == p.col) continue;
                auto it = x.find(c);
                if (it != x.end()) v = v - a * it->second;
            }
            if (!v.is_zero()) x[p.col] = v;
        }
        return x;
    }

private:
    struct Pivot {
        int col;
        SparseRow<F> row;
        F rhs;
    };

    void reduce(SparseRow<F>& row, F& rhs) const {
        using Item = std::pair<int, int>;  // (pivot insertion index, column)
        std::priority_queue<Item, std::vector<Item>, std::greater<Item>> heap;
        for (auto& [c, v] : row) {
            auto it = pivot_index_.find(c);
            if (it != pivot_index_.end()) heap.emplace(it->second, c);
        }
        while (!heap.empty()) {
            auto [k, c] = heap.top();
            heap.pop();
            auto rit = row.find(c);
            if (rit == row.end()) continue;
            F factor = rit->second;
            const Pivot& p = pivots_[static_cast<std::size_t>(k)];
            for (auto& [pc, pv] : p.row) {
                auto [it, inserted] = row.try_emplace(pc, F(0));
                it->second = it->second - factor * pv;
                if (it->second.is_zero()) {
                    row.erase(it);
                } else if (inserted) {
                    auto pit = pivot_index_.find(pc);
                    if (pit != pivot_index_.end()) heap.emplace(pit->second, pc);
                }
            }
            if (!p.rhs.is_zero()) rhs = rhs - factor * p.rhs;
        }
    }

    std::vector<Pivot> pivots_;
    std::unordered_map<int, int> pivot_index_;
    bool consistent_ = true;
};

template <class F>
using DenseMatrix = std::vector<std::vector<F>>;

/// Inverse of a square matrix by Gauss-Jordan elimination.
template <class F>
DenseMatrix<F> invert(DenseMatrix<F> a) {
    const std::size_t n = a.size();
    DenseMatrix<F> inv(n, std::vector<F>(n, F(0)));
    for (std::size_t i = 0; i < n; ++i) inv[i][i] = F(1);
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = n;
        std::size_t bw = 0;
        for (std::size_t r = col; r < n; ++r) {
            if (a[r][col].is_zero()) continue;
            std::size_t w = coeff_weight(a[r][col]);
            if (piv == n || w < bw) {
                piv = r;
                bw = w;
            }
        }
        if (piv == n) throw SingularMatrix();
        std::swap(a[piv], a[col]);
        std::swap(inv[piv], inv[col]);
        F s = F(1) / a[col][col];
        for (std::size_t j = 0; j < n; ++j) {
            if (!a[col][j].is_zero()) a[col][j] = a[col][j] * s;
            if (!inv[col][j].is_zero()) inv[col][j] = inv[col][j] * s;
        }
        for (std::size_t r = 0; r < n; ++r) {
            if (r == col || a[r][col].is_zero()) continue;
            F f = a[r][col];
            for (std::size_t j = 0; j < n; ++j) {
                if (!a[col][j].is_zero()) a[r][j] = a[r][j] - f * a[col][j];
                if (!inv[col][j].is_zero()) inv[r][j] = inv[r][j] - f * inv[col][j];
            }
        }
    }
    return inv;
}

}  // namespace cheb
