#include "gsparc/constellation.hpp"

#include <bit>
#include <cmath>
#include <numbers>

namespace gsparc {

std::uint32_t Constellation::bits() const {
    return static_cast<std::uint32_t>(std::bit_width(M) - 1);
}

double Constellation::d_min() const { return std::sqrt(2.0 - 2.0 * gamma); }

std::uint32_t Constellation::nearest(cplx v) const {
    std::uint32_t best = 0;
    double best_d = std::norm(v - symbols[0]);
    for (std::uint32_t m = 1; m < M; ++m) {
        const double d = std::norm(v - symbols[m]);
        if (d < best_d) {
            best_d = d;
            best = m;
        }
    }
    return best;
}

std::uint32_t Constellation::index_from_label(std::uint32_t label) {
    std::uint32_t index = label;
    for (std::uint32_t shift = 1; shift < 32; shift <<= 1) index ^= index >> shift;
    return index;
}

Constellation make_psk(std::uint32_t M, double rotation) {
    if (M == 0 || !std::has_single_bit(M))
        throw config_error("constellation size must be a power of two (or 1), got " + std::to_string(M));
    Constellation c;
    c.M = M;
    c.symbols.resize(M);
    for (std::uint32_t m = 0; m < M; ++m) {
        const double phi = 2.0 * std::numbers::pi * m / M + rotation;
        c.symbols[m] = cplx(std::cos(phi), std::sin(phi));
    }
    c.gamma = -1.0;
    for (std::uint32_t i = 0; i < M; ++i)
        for (std::uint32_t m = 0; m < M; ++m) {
            if (i == m) continue;
            c.gamma = std::max(c.gamma, std::real(std::conj(c.symbols[i]) * c.symbols[m]));
        }
    return c;
}

std::vector<Constellation> make_offset_qpsk(std::uint32_t K) {
    if (K < 1) throw config_error("offset QPSK needs K >= 1");
    std::vector<Constellation> out;
    out.reserve(K);
    for (std::uint32_t k = 1; k <= K; ++k)
        out.push_back(make_psk(4, (k - 1) * std::numbers::pi / (2.0 * K)));
    return out;
}

ConstellationFamily ConstellationFamily::uniform(Constellation c) {
    ConstellationFamily f;
    f.list_ = {std::move(c)};
    f.uniform_ = true;
    return f;
}

ConstellationFamily ConstellationFamily::per_block(std::vector<Constellation> list) {
    if (list.empty()) throw config_error("per-block constellation list is empty");
    ConstellationFamily f;
    f.list_ = std::move(list);
    f.uniform_ = false;
    return f;
}

}  // namespace gsparc
