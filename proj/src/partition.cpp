#include "gsparc/partition.hpp"

#include <bit>

#include "gsparc/core.hpp"

namespace gsparc {

std::uint32_t SubBlockPartition::used_columns() const {
    std::uint32_t t = 0;
    for (auto s : sizes) t += s;
    return t;
}

int SubBlockPartition::block_of(std::uint32_t col) const {
    for (std::size_t k = 0; k < sizes.size(); ++k)
        if (col >= offsets[k] && col < offsets[k] + sizes[k]) return int(k);
    return -1;
}

SubBlockPartition partition_subblocks(std::uint32_t L, std::uint32_t K) {
    if (K < 1 || K > L) throw config_error("partition requires 1 <= K <= L");
    SubBlockPartition p;
    p.sizes.reserve(K);
    p.offsets.reserve(K);
    std::uint32_t remaining = L, offset = 0;
    for (std::uint32_t k = 0; k < K; ++k) {
        const std::uint32_t share = remaining / (K - k);
        const std::uint32_t size = std::bit_floor(share);
        p.sizes.push_back(size);
        p.offsets.push_back(offset);
        offset += size;
        remaining -= size;
    }
    p.unused = remaining;
    return p;
}

}  // namespace gsparc
