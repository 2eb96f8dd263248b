#include "rispart/partition.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "rispart/error.hpp"

namespace rispart {

namespace {

void check_count(int n, int n_id) {
    if (n < 0 || n_id < 0 || n_id > n) {
        throw InvalidArgument("IDset size must satisfy 0 <= n_id <= n (got n_id=" +
                              std::to_string(n_id) + ", n=" + std::to_string(n) + ")");
    }
}

Partition from_membership(const std::vector<char>& in_id) {
    Partition p;
    p.n = static_cast<int>(in_id.size());
    for (int i = 0; i < p.n; ++i) {
        (in_id[static_cast<std::size_t>(i)] ? p.id_set : p.bf_set).push_back(i);
    }
    return p;
}

}  // namespace

void Partition::validate() const {
    if (n < 0) throw InvalidArgument("partition size must be non-negative");
    if (static_cast<int>(id_set.size() + bf_set.size()) != n) {
        throw InvalidArgument("partition does not cover all elements");
    }
    std::vector<char> seen(static_cast<std::size_t>(n), 0);
    for (const auto* set : {&id_set, &bf_set}) {
        if (!std::is_sorted(set->begin(), set->end())) {
            throw InvalidArgument("partition index sets must be ascending");
        }
        for (int i : *set) {
            if (i < 0 || i >= n || seen[static_cast<std::size_t>(i)]) {
                throw InvalidArgument("partition sets overlap or contain out-of-range indices");
            }
            seen[static_cast<std::size_t>(i)] = 1;
        }
    }
}

std::vector<double> element_gains(std::span<const Complex> v, std::span<const Complex> g) {
    if (v.size() != g.size()) throw InvalidArgument("element_gains: v and g differ in length");
    std::vector<double> out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = std::abs(v[i]) * std::abs(g[i]);
    return out;
}

Partition partition_sorted(std::span<const double> gains, int n_id) {
    const int n = static_cast<int>(gains.size());
    check_count(n, n_id);
    std::vector<int> order(gains.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        return gains[static_cast<std::size_t>(a)] > gains[static_cast<std::size_t>(b)];
    });
    std::vector<char> in_id(gains.size(), 1);
    for (int k = 0; k < n - n_id; ++k) in_id[static_cast<std::size_t>(order[k])] = 0;
    return from_membership(in_id);
}

Partition partition_random(int n, int n_id, RandomStream& stream) {
    check_count(n, n_id);
    std::vector<int> idx(static_cast<std::size_t>(n));
    std::iota(idx.begin(), idx.end(), 0);
    // partial Fisher-Yates: the first n_id slots become a uniform subset
    for (int k = 0; k < n_id; ++k) {
        const int j = stream.uniform_int(k, n - 1);
        std::swap(idx[static_cast<std::size_t>(k)], idx[static_cast<std::size_t>(j)]);
    }
    std::vector<char> in_id(static_cast<std::size_t>(n), 0);
    for (int k = 0; k < n_id; ++k) in_id[static_cast<std::size_t>(idx[static_cast<std::size_t>(k)])] = 1;
    return from_membership(in_id);
}

}  // namespace rispart
