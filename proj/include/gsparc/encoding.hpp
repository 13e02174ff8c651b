#pragma once

#include <cstdint>
#include <vector>

#include "gsparc/bits.hpp"
#include "gsparc/constellation.hpp"
#include "gsparc/core.hpp"
#include "gsparc/dictionary.hpp"
#include "gsparc/partition.hpp"

namespace gsparc {

/// K-sparse signal: active columns (ascending), the constellation indices and
/// values riding on them, and the assembled codeword s = A x.
struct SparseCodeword {
    std::vector<std::uint32_t> support;
    std::vector<std::uint32_t> symbol_idx;
    std::vector<cplx> symbols;
    CVec s;

    std::uint32_t K() const { return static_cast<std::uint32_t>(support.size()); }
};

/// Sum of symbol-weighted columns taken in support order.
CVec assemble_codeword(const DictionaryMatrix& A, const std::vector<std::uint32_t>& support,
                       const std::vector<cplx>& symbols);

/// K log2(M) + sum_k log2(L_k).
std::uint32_t sse_bit_budget(const SubBlockPartition& p, std::uint32_t M);

/// K log2(M) + floor(log2(C(L,K))).
std::uint32_t sfe_bit_budget(std::uint32_t L, std::uint32_t K, std::uint32_t M);

/// Per sub-block, consumes log2(L_k) column-index bits (big-endian) and then
/// log2(M) Gray-coded symbol bits.
SparseCodeword sse_encode(const BitString& bits, const DictionaryMatrix& A,
                          const SubBlockPartition& p, const ConstellationFamily& cf);
BitString sse_decode_bits(const SparseCodeword& cw, const SubBlockPartition& p,
                          const ConstellationFamily& cf);

/// Consumes floor(log2(C(L,K))) combination-index bits, then K Gray-coded
/// symbol groups in support order.
SparseCodeword sfe_encode(const BitString& bits, const DictionaryMatrix& A, std::uint32_t K,
                          const Constellation& c);
BitString sfe_decode_bits(const SparseCodeword& cw, std::uint32_t L, std::uint32_t K,
                          const Constellation& c);

}  // namespace gsparc
