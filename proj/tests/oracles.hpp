#pragma once

// Independent reference implementations the tests check the library against.
// Everything here is deliberately brute force.

#include <bit>
#include <cstdint>
#include <map>
#include <vector>

#include "gsparc/core.hpp"

namespace oracles {

/// All C(L,K) combinations in lexicographic order.
inline std::vector<std::vector<std::uint32_t>> enumerate_combinations(std::uint32_t L,
                                                                      std::uint32_t K) {
    std::vector<std::vector<std::uint32_t>> out;
    std::vector<std::uint32_t> cur(K);
    for (std::uint32_t i = 0; i < K; ++i) cur[i] = i;
    if (K == 0) return {{}};
    while (true) {
        out.push_back(cur);
        int i = int(K) - 1;
        while (i >= 0 && cur[i] == L - K + std::uint32_t(i)) --i;
        if (i < 0) break;
        ++cur[i];
        for (std::uint32_t j = std::uint32_t(i) + 1; j < K; ++j) cur[j] = cur[j - 1] + 1;
    }
    return out;
}

/// Weight census of the nonzero binary span of the given sequences (each a 0/1
/// vector of the same length), enumerated with a Gray walk. The distinct
/// pairwise correlations of the +-1/sqrt(N) columns built from that span are
/// (N - 2w)/N over the weights w found here.
inline std::map<std::uint32_t, std::uint64_t> span_weight_census(
    const std::vector<std::vector<std::uint8_t>>& basis) {
    const std::size_t n = basis.size();
    const std::size_t len = basis[0].size();
    const std::size_t words = (len + 63) / 64;
    std::vector<std::vector<std::uint64_t>> packed(n, std::vector<std::uint64_t>(words, 0));
    for (std::size_t b = 0; b < n; ++b)
        for (std::size_t t = 0; t < len; ++t)
            if (basis[b][t]) packed[b][t / 64] |= std::uint64_t(1) << (t % 64);

    std::map<std::uint32_t, std::uint64_t> census;
    std::vector<std::uint64_t> acc(words, 0);
    const std::uint64_t total = std::uint64_t(1) << n;
    for (std::uint64_t g = 1; g < total; ++g) {
        // flip the basis vector at the lowest set bit of the Gray-code delta
        std::uint64_t changed = (g ^ (g >> 1)) ^ ((g - 1) ^ ((g - 1) >> 1));
        int idx = std::countr_zero(changed);
        std::uint32_t w = 0;
        for (std::size_t k = 0; k < words; ++k) {
            acc[k] ^= packed[std::size_t(idx)][k];
            w += std::uint32_t(std::popcount(acc[k]));
        }
        ++census[w];
    }
    return census;
}

}  // namespace oracles
