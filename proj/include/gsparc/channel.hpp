#pragma once

#include <cstdint>
#include <random>

#include "gsparc/bits.hpp"
#include "gsparc/core.hpp"

namespace gsparc {

/// Deterministic per-trial random stream: the generator state depends only on
/// (seed, stream), so trials can run in any order on any number of threads and
/// still reproduce bit-exactly.
class TrialRng {
public:
    TrialRng(std::uint64_t seed, std::uint64_t stream);

    std::uint64_t word() { return gen_(); }
    double normal() { return normal_(gen_); }

private:
    std::mt19937_64 gen_;
    std::normal_distribution<double> normal_;
};

/// One generator word per bit, so bit draws compose: drawing n1 then n2 bits
/// consumes the same stream as drawing n1+n2 at once.
BitString random_bits(TrialRng& rng, std::size_t nbits);

/// Eb/N0 calibration for a code with expected codeword energy E_s = K.
struct ChannelConfig {
    double ebn0_db = 0.0;
    std::uint32_t N_b = 1;
    std::uint32_t K = 1;
    Field field = Field::Complex;

    double eb() const { return double(K) / double(N_b); }
    double n0() const;
    /// N0/2; exactly zero at or above kNoiselessDb.
    double sigma2_per_real_dim() const;
};

/// Sweep points at or above this many dB run the exact noiseless channel.
inline constexpr double kNoiselessDb = 300.0;

/// y = s + v. Real field: v is real Gaussian per sample; complex: independent
/// real and imaginary parts, each with the per-real-dimension variance.
CVec awgn(const CVec& s, double sigma2_per_real_dim, Field field, TrialRng& rng);
CVec awgn(const CVec& s, const ChannelConfig& cfg, TrialRng& rng);

}  // namespace gsparc
