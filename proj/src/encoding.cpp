#include "gsparc/encoding.hpp"

#include <bit>

#include "gsparc/combinatorics.hpp"

namespace gsparc {

namespace {

std::uint32_t log2_exact(std::uint32_t v) {
    return static_cast<std::uint32_t>(std::bit_width(v) - 1);
}

}  // namespace

CVec assemble_codeword(const DictionaryMatrix& A, const std::vector<std::uint32_t>& support,
                       const std::vector<cplx>& symbols) {
    CVec s = CVec::Zero(A.N());
    for (std::size_t k = 0; k < support.size(); ++k) s += symbols[k] * A.columns.col(support[k]);
    return s;
}

std::uint32_t sse_bit_budget(const SubBlockPartition& p, std::uint32_t M) {
    if (M == 0 || !std::has_single_bit(M)) throw config_error("M must be a power of two (or 1)");
    std::uint32_t bits = 0;
    for (auto sz : p.sizes) bits += log2_exact(sz);
    bits += p.block_count() * log2_exact(M);
    return bits;
}

std::uint32_t sfe_bit_budget(std::uint32_t L, std::uint32_t K, std::uint32_t M) {
    if (M == 0 || !std::has_single_bit(M)) throw config_error("M must be a power of two (or 1)");
    return K * log2_exact(M) + sfe_index_bits(L, K);
}

SparseCodeword sse_encode(const BitString& bits, const DictionaryMatrix& A,
                          const SubBlockPartition& p, const ConstellationFamily& cf) {
    const std::uint32_t K = p.block_count();
    if (p.total_columns() != A.L()) throw config_error("partition does not cover the dictionary");
    std::uint32_t want = 0;  // per-block budget; blocks may carry different M
    for (std::uint32_t k = 0; k < K; ++k) want += log2_exact(p.sizes[k]) + cf.at(k).bits();
    if (bits.size() != want)
        throw config_error("expected " + std::to_string(want) + " message bits, got " +
                           std::to_string(bits.size()));

    SparseCodeword cw;
    cw.support.reserve(K);
    cw.symbol_idx.reserve(K);
    cw.symbols.reserve(K);
    BitReader in(bits);
    for (std::uint32_t k = 0; k < K; ++k) {
        const Constellation& c = cf.at(k);
        const auto col = std::uint32_t(in.take(log2_exact(p.sizes[k])));
        const auto label = std::uint32_t(in.take(c.bits()));
        const std::uint32_t m = Constellation::index_from_label(label);
        cw.support.push_back(p.offsets[k] + col);
        cw.symbol_idx.push_back(m);
        cw.symbols.push_back(c.symbols[m]);
    }
    cw.s = assemble_codeword(A, cw.support, cw.symbols);
    return cw;
}

BitString sse_decode_bits(const SparseCodeword& cw, const SubBlockPartition& p,
                          const ConstellationFamily& cf) {
    const std::uint32_t K = p.block_count();
    if (cw.K() != K) throw config_error("support size does not match the partition");
    BitWriter out;
    for (std::uint32_t k = 0; k < K; ++k) {
        const std::uint32_t col = cw.support[k];
        if (col < p.offsets[k] || col >= p.offsets[k] + p.sizes[k])
            throw config_error("support must hold exactly one column per sub-block");
        const Constellation& c = cf.at(k);
        if (cw.symbol_idx[k] >= c.M) throw config_error("symbol index out of range");
        out.put(col - p.offsets[k], log2_exact(p.sizes[k]));
        out.put(Constellation::gray_label(cw.symbol_idx[k]), c.bits());
    }
    return out.take();
}

SparseCodeword sfe_encode(const BitString& bits, const DictionaryMatrix& A, std::uint32_t K,
                          const Constellation& c) {
    const auto L = std::uint32_t(A.L());
    const std::uint32_t index_bits = sfe_index_bits(L, K);
    const std::uint32_t want = K * c.bits() + index_bits;
    if (bits.size() != want)
        throw config_error("expected " + std::to_string(want) + " message bits, got " +
                           std::to_string(bits.size()));

    BitReader in(bits);
    const BigInt d = in.take_big(index_bits);
    SparseCodeword cw;
    cw.support = sfe_unrank(d, L, K);
    cw.symbol_idx.reserve(K);
    cw.symbols.reserve(K);
    for (std::uint32_t k = 0; k < K; ++k) {
        const auto label = std::uint32_t(in.take(c.bits()));
        const std::uint32_t m = Constellation::index_from_label(label);
        cw.symbol_idx.push_back(m);
        cw.symbols.push_back(c.symbols[m]);
    }
    cw.s = assemble_codeword(A, cw.support, cw.symbols);
    return cw;
}

BitString sfe_decode_bits(const SparseCodeword& cw, std::uint32_t L, std::uint32_t K,
                          const Constellation& c) {
    if (cw.K() != K) throw config_error("support size != K");
    const std::uint32_t index_bits = sfe_index_bits(L, K);
    BigInt d = sfe_rank(cw.support, L, K);
    // A decoded support can rank past the 2^index_bits message space; that is
    // already a block error, so fold it back into range deterministically.
    d &= (BigInt(1) << index_bits) - 1;
    BitWriter out;
    out.put_big(d, index_bits);
    for (std::uint32_t k = 0; k < K; ++k) {
        if (cw.symbol_idx[k] >= c.M) throw config_error("symbol index out of range");
        out.put(Constellation::gray_label(cw.symbol_idx[k]), c.bits());
    }
    return out.take();
}

}  // namespace gsparc
