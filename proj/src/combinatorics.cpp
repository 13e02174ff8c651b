#include "gsparc/combinatorics.hpp"

#include <algorithm>
#include <cmath>

#include "gsparc/core.hpp"

namespace gsparc {

BigInt binomial(std::uint32_t n, std::uint32_t k) {
    if (k > n) return 0;
    k = std::min(k, n - k);
    BigInt r = 1;
    for (std::uint32_t i = 0; i < k; ++i) {
        r *= n - i;
        r /= i + 1;
    }
    return r;
}

std::uint32_t sfe_index_bits(std::uint32_t L, std::uint32_t K) {
    const BigInt c = binomial(L, K);
    if (c < 1) throw config_error("C(L,K) < 1: L=" + std::to_string(L) + " K=" + std::to_string(K));
    return static_cast<std::uint32_t>(boost::multiprecision::msb(c));
}

std::vector<std::uint32_t> sfe_unrank(const BigInt& d, std::uint32_t L, std::uint32_t K,
                                      UnrankStats* stats) {
    if (K > L) throw config_error("unrank: K > L");
    if (d < 0 || d >= binomial(L, K)) throw config_error("unrank: index out of range");

    std::vector<std::uint32_t> comb;
    comb.reserve(K);
    std::uint32_t base = 0, l = L, k = K;
    BigInt rem = d;
    while (k > 0) {
        const BigInt total = binomial(l, k);
        // root estimate for the first object of this stage
        const double frac = 1.0 - rem.convert_to<double>() / total.convert_to<double>();
        const double est = (double(l) - double(k - 1) / 2.0) * (1.0 - std::pow(frac, 1.0 / double(k)));
        std::int64_t i = std::clamp<std::int64_t>(std::int64_t(std::floor(est)), 0, std::int64_t(l - k));
        // exact window check: total - C(l-i, k) <= rem < total - C(l-i-1, k)
        std::uint64_t steps = 0;
        while (i < std::int64_t(l - k) && rem >= total - binomial(l - std::uint32_t(i) - 1, k)) {
            ++i;
            ++steps;
        }
        while (i > 0 && rem < total - binomial(l - std::uint32_t(i), k)) {
            --i;
            ++steps;
        }
        if (stats) {
            stats->corrections += steps;
            stats->max_corrections = std::max(stats->max_corrections, steps);
        }
        rem -= total - binomial(l - std::uint32_t(i), k);
        comb.push_back(base + std::uint32_t(i));
        base += std::uint32_t(i) + 1;
        l -= std::uint32_t(i) + 1;
        --k;
    }
    return comb;
}

BigInt sfe_rank(const std::vector<std::uint32_t>& comb, std::uint32_t L, std::uint32_t K) {
    if (comb.size() != K) throw config_error("rank: combination size != K");
    for (std::size_t i = 0; i < comb.size(); ++i) {
        if (comb[i] >= L || (i > 0 && comb[i] <= comb[i - 1]))
            throw config_error("rank: combination must be strictly increasing in [0, L)");
    }
    if (K == 0) return 0;
    BigInt d = binomial(L, K);
    for (std::uint32_t k = 0; k + 1 < K; ++k) d -= binomial(L - comb[k] - 1, K - k);
    d -= L - comb[K - 1];
    return d;
}

}  // namespace gsparc
