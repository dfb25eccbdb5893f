#pragma once

#include <numeric>
#include <utility>
#include <vector>

namespace infoperc {

/// Disjoint sets with path halving and union by size.
class UnionFind {
public:
    explicit UnionFind(int n = 0) { reset(n); }

    void reset(int n)
    {
        parent_.resize(static_cast<std::size_t>(n));
        size_.assign(static_cast<std::size_t>(n), 1);
        std::iota(parent_.begin(), parent_.end(), 0);
    }

    int find(int v)
    {
        while (parent_[idx(v)] != v) {
            parent_[idx(v)] = parent_[idx(parent_[idx(v)])];
            v = parent_[idx(v)];
        }
        return v;
    }

    /// Returns the size of the merged component.
    int unite(int a, int b)
    {
        a = find(a);
        b = find(b);
        if (a == b)
            return size_[idx(a)];
        if (size_[idx(a)] < size_[idx(b)])
            std::swap(a, b);
        parent_[idx(b)] = a;
        size_[idx(a)] += size_[idx(b)];
        return size_[idx(a)];
    }

    int component_size(int v) { return size_[idx(find(v))]; }

private:
    static std::size_t idx(int v) { return static_cast<std::size_t>(v); }
    std::vector<int> parent_;
    std::vector<int> size_;
};

} // namespace infoperc
