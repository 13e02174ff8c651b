#pragma once

#include <cstdint>
#include <vector>

namespace gsparc {

/// Ordered sub-blocks of a dictionary: sizes are powers of two, non-decreasing,
/// assigned smallest-first from column 0; leftover columns form an unused tail.
struct SubBlockPartition {
    std::vector<std::uint32_t> sizes;
    std::vector<std::uint32_t> offsets;
    std::uint32_t unused = 0;

    std::uint32_t block_count() const { return static_cast<std::uint32_t>(sizes.size()); }
    std::uint32_t used_columns() const;
    std::uint32_t total_columns() const { return used_columns() + unused; }
    /// Block containing the column, or -1 for the unused tail / out of range.
    int block_of(std::uint32_t col) const;
};

/// Largest-rate power-of-two partition of L columns into K sub-blocks:
/// L_k = 2^floor(log2((L - sum_(m<k) L_m) / (K - k + 1))).
SubBlockPartition partition_subblocks(std::uint32_t L, std::uint32_t K);

}  // namespace gsparc
