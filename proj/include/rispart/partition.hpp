#pragma once

#include <span>
#include <vector>

#include "rispart/channel.hpp"
#include "rispart/rng.hpp"

namespace rispart {

/// Disjoint split of element indices {0..n-1}. Both sets are kept in
/// ascending index order; PSRP columns map onto `id_set` in that order.
struct Partition {
    std::vector<int> id_set;
    std::vector<int> bf_set;
    int n = 0;

    int n_id() const noexcept { return static_cast<int>(id_set.size()); }
    int n_bf() const noexcept { return static_cast<int>(bf_set.size()); }

    /// Throws InvalidArgument unless the sets are disjoint, cover 0..n-1 and are sorted.
    void validate() const;
};

/// Per-element cascaded gain |v_i| * |g_i|.
std::vector<double> element_gains(std::span<const Complex> v, std::span<const Complex> g);

/// The n - n_id largest gains go to the BF set. Ties are resolved in favour
/// of the lower index. O(N log N).
Partition partition_sorted(std::span<const double> gains, int n_id);

/// Uniformly random n_id-subset for the ID set.
Partition partition_random(int n, int n_id, RandomStream& stream);

}  // namespace rispart
