#pragma once

#include <cstdint>
#include <vector>

#include "gsparc/core.hpp"

namespace gsparc {

/// Unit-modulus PSK alphabet with Gray labeling. gamma is the constellation
/// coherence max_{i!=m} Re(b_i^* b_m); it is -1 for the degenerate M=1 alphabet
/// and is invariant under a common rotation of all symbols.
struct Constellation {
    std::uint32_t M = 1;
    std::vector<cplx> symbols;
    double gamma = -1.0;

    std::uint32_t bits() const;                  // log2 M
    double d_min() const;                        // sqrt(2 - 2 gamma)
    std::uint32_t nearest(cplx v) const;         // index of closest symbol, lowest on ties

    static std::uint32_t gray_label(std::uint32_t index) { return index ^ (index >> 1); }
    static std::uint32_t index_from_label(std::uint32_t label);
};

/// M-PSK with symbols exp(j(2 pi m / M + rotation)), m = 0..M-1. M must be a
/// power of two (or 1, in which case the single symbol is +1).
Constellation make_psk(std::uint32_t M, double rotation = 0.0);

/// QPSK alphabets for K sub-blocks, block k (1-based) rotated counter-clockwise
/// by (k-1) pi / (2K).
std::vector<Constellation> make_offset_qpsk(std::uint32_t K);

/// Per-sub-block constellation view; uniform unless built from a per-block list.
class ConstellationFamily {
public:
    ConstellationFamily() = default;
    static ConstellationFamily uniform(Constellation c);
    static ConstellationFamily per_block(std::vector<Constellation> list);

    const Constellation& at(std::uint32_t block) const {
        return uniform_ ? list_[0] : list_[block];
    }
    bool is_uniform() const { return uniform_; }
    std::uint32_t block_count() const { return static_cast<std::uint32_t>(list_.size()); }

private:
    std::vector<Constellation> list_;
    bool uniform_ = true;
};

}  // namespace gsparc
