#include "gsparc/channel.hpp"

#include <cmath>

namespace gsparc {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

}  // namespace

TrialRng::TrialRng(std::uint64_t seed, std::uint64_t stream)
    : gen_(splitmix64(splitmix64(seed) + stream)), normal_(0.0, 1.0) {}

BitString random_bits(TrialRng& rng, std::size_t nbits) {
    BitString b(nbits);
    for (std::size_t i = 0; i < nbits; ++i) b.set(i, int(rng.word() >> 63));
    return b;
}

double ChannelConfig::n0() const { return eb() * std::pow(10.0, -ebn0_db / 10.0); }

double ChannelConfig::sigma2_per_real_dim() const {
    if (ebn0_db >= kNoiselessDb) return 0.0;
    return n0() / 2.0;
}

CVec awgn(const CVec& s, double sigma2_per_real_dim, Field field, TrialRng& rng) {
    CVec y = s;
    if (sigma2_per_real_dim == 0.0) return y;
    const double sigma = std::sqrt(sigma2_per_real_dim);
    if (field == Field::Real) {
        for (Index i = 0; i < y.size(); ++i) y[i] += sigma * rng.normal();
    } else {
        for (Index i = 0; i < y.size(); ++i)
            y[i] += cplx(sigma * rng.normal(), sigma * rng.normal());
    }
    return y;
}

CVec awgn(const CVec& s, const ChannelConfig& cfg, TrialRng& rng) {
    return awgn(s, cfg.sigma2_per_real_dim(), cfg.field, rng);
}

}  // namespace gsparc
