#pragma once

#include <cstdint>
#include <vector>

#include "gsparc/bits.hpp"

namespace gsparc {

/// Exact binomial coefficient.
BigInt binomial(std::uint32_t n, std::uint32_t k);

/// floor(log2(C(L,K))); the index-bit budget of the sub-block free scheme.
std::uint32_t sfe_index_bits(std::uint32_t L, std::uint32_t K);

struct UnrankStats {
    std::uint64_t corrections = 0;      // total window-check adjustments
    std::uint64_t max_corrections = 0;  // worst single stage
};

/// d-th combination (0-based, lexicographic) of K objects out of {0,...,L-1},
/// returned strictly increasing. The first element of each stage is located by
/// the closed-form root estimate and then fixed up with exact integer window
/// checks, so floating point never affects the result.
std::vector<std::uint32_t> sfe_unrank(const BigInt& d, std::uint32_t L, std::uint32_t K,
                                      UnrankStats* stats = nullptr);

/// Lexicographic index of a strictly increasing combination; inverse of sfe_unrank.
BigInt sfe_rank(const std::vector<std::uint32_t>& comb, std::uint32_t L, std::uint32_t K);

}  // namespace gsparc
