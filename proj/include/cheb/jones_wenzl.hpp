#pragma once

#include "cheb/tl.hpp"

#include <map>
#include <memory>
#include <optional>
#include <shared_mutex>

namespace cheb {

/// Process-wide memo of Jones-Wenzl projectors, keyed by strand count.
class JWCache {
public:
    static JWCache& instance() {
        static JWCache c;
        return c;
    }

    std::optional<TLElement> lookup(int n) const {
        std::shared_lock lock(mu_);
        auto it = table_.find(n);
        if (it == table_.end()) return std::nullopt;
        return it->second;
    }

    void insert(int n, TLElement p) {
        std::unique_lock lock(mu_);
        table_.emplace(n, std::move(p));
    }

    std::map<int, TLElement> snapshot() const {
        std::shared_lock lock(mu_);
        return table_;
    }

    void clear() {
        std::unique_lock lock(mu_);
        table_.clear();
    }

private:
    mutable std::shared_mutex mu_;
    std::map<int, TLElement> table_;
};

/// p_n by the recursion p_n = (p_{n-1} + 1) - [n-1]/[n] (p_{n-1} + 1) e_{n-1} (p_{n-1} + 1).
inline TLElement jones_wenzl(int n) {
    if (n < 0) throw InvalidPosition("jones_wenzl: negative n");
    if (auto hit = JWCache::instance().lookup(n)) return *hit;
    TLElement p;
    if (n <= 1) {
        p = TLElement::identity(n);
    } else {
        TLElement x = pad_right(jones_wenzl(n - 1), 1);
        TLElement ex = TLElement::compose(TLElement::e(n, n - 1), x);
        TLElement xex = TLElement::compose(x, ex);
        p = x;
        p.axpy(-(qint(n - 1) / qint(n)), xex);
    }
    JWCache::instance().insert(n, p);
    return p;
}

}  // namespace cheb
