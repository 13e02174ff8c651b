#include "gsparc/galois.hpp"

#include <cassert>
#include <stdexcept>

#include "gsparc/core.hpp"

namespace gsparc::gf {

std::uint32_t GF2n::mul(std::uint32_t a, std::uint32_t b) const {
    std::uint32_t r = 0;
    while (b) {
        if (b & 1) r ^= a;
        b >>= 1;
        a <<= 1;
        if (a & (1u << n)) a ^= poly;
    }
    return r;
}

int GF2n::trace(std::uint32_t a) const {
    std::uint32_t t = 0, s = a;
    for (int k = 0; k < n; ++k) {
        t ^= s;
        s = mul(s, s);
    }
    assert(t <= 1);  // trace lands in the prime field
    return int(t);
}

std::uint32_t primitive_poly(int n) {
    switch (n) {
        case 2: return 0x7;    // x^2+x+1
        case 3: return 0xB;    // x^3+x+1
        case 4: return 0x13;   // x^4+x+1
        case 5: return 0x25;   // x^5+x^2+1
        case 6: return 0x43;   // x^6+x+1
        case 7: return 0x89;   // x^7+x^3+1
        case 8: return 0x11D;  // x^8+x^4+x^3+x^2+1
        case 9: return 0x211;  // x^9+x^4+1
        default:
            throw config_error("no primitive polynomial table entry for n=" + std::to_string(n) +
                               " (supported: 2..9)");
    }
}

std::vector<std::uint8_t> m_sequence(int n) {
    const GF2n f{n, primitive_poly(n)};
    const std::uint32_t N = (1u << n) - 1;
    std::vector<std::uint8_t> u(N);
    std::uint32_t p = 1;  // alpha^0
    for (std::uint32_t t = 0; t < N; ++t) {
        u[t] = static_cast<std::uint8_t>(f.trace(p));
        p = f.mul(p, 2);  // multiply by alpha = x
    }
    return u;
}

std::vector<std::uint8_t> decimate(const std::vector<std::uint8_t>& u, std::uint64_t q) {
    const std::uint64_t N = u.size();
    std::vector<std::uint8_t> v(N);
    for (std::uint64_t t = 0; t < N; ++t) v[t] = u[(q * t) % N];
    return v;
}

GaloisRing4::GaloisRing4(int n) : n_(n), period_((1u << n) - 1) {
    // Hensel lift via the Graeffe step: split f(x) = e(x^2) + x o(x^2) over Z4,
    // then h(y) = +-(e(y)^2 - y o(y)^2), sign fixed so h is monic.
    const std::uint32_t f = primitive_poly(n);
    std::vector<int> e((n / 2) + 1, 0), o((n / 2) + 1, 0);
    for (int i = 0; i <= n; ++i) {
        if (!(f >> i & 1)) continue;
        if (i % 2 == 0) e[i / 2] = 1;
        else o[i / 2] = 1;
    }
    std::vector<int> h(n + 1, 0);
    for (std::size_t i = 0; i < e.size(); ++i)
        for (std::size_t j = 0; j < e.size(); ++j)
            if (e[i] && e[j]) h[i + j] += 1;
    for (std::size_t i = 0; i < o.size(); ++i)
        for (std::size_t j = 0; j < o.size(); ++j)
            if (o[i] && o[j]) h[i + j + 1] -= 1;
    if (((h[n] % 4) + 4) % 4 == 3)
        for (auto& c : h) c = -c;
    h_.resize(n + 1);
    for (int i = 0; i <= n; ++i) h_[i] = static_cast<std::uint8_t>(((h[i] % 4) + 4) % 4);
    assert(h_[n] == 1);

    // Teichmuller powers xi^0 .. xi^(N-2) and their Z4 traces
    // Tr(xi^m) = sum_k xi^(m 2^k mod (N-1)), which must reduce to a constant.
    std::vector<Poly> xi_pow(period_);
    Poly one(n, 0);
    one[0] = 1;
    Poly xi(n, 0);
    if (n > 1) xi[1] = 1;
    xi_pow[0] = one;
    for (std::uint32_t m = 1; m < period_; ++m) xi_pow[m] = mul(xi_pow[m - 1], xi);
    Poly closure = mul(xi_pow[period_ - 1], xi);
    if (closure != one) throw std::logic_error("GR(4,n): xi does not have order 2^n-1");

    trace_.resize(period_);
    for (std::uint32_t m = 0; m < period_; ++m) {
        Poly acc(n, 0);
        std::uint64_t em = m;
        for (int k = 0; k < n; ++k) {
            const Poly& term = xi_pow[em % period_];
            for (int i = 0; i < n; ++i) acc[i] = static_cast<std::uint8_t>((acc[i] + term[i]) & 3);
            em = (em * 2) % period_;
        }
        for (int i = 1; i < n; ++i)
            if (acc[i] != 0) throw std::logic_error("GR(4,n): trace is not Galois invariant");
        trace_[m] = acc[0];
    }
}

GaloisRing4::Poly GaloisRing4::mul(const Poly& a, const Poly& b) const {
    std::vector<int> prod(2 * n_ - 1, 0);
    for (int i = 0; i < n_; ++i)
        for (int j = 0; j < n_; ++j) prod[i + j] = (prod[i + j] + a[i] * b[j]) & 3;
    for (int d = 2 * n_ - 2; d >= n_; --d) {
        const int c = prod[d];
        if (!c) continue;
        prod[d] = 0;
        for (int i = 0; i < n_; ++i) prod[d - n_ + i] = (prod[d - n_ + i] - c * h_[i]) & 3;
    }
    Poly r(n_);
    for (int i = 0; i < n_; ++i) r[i] = static_cast<std::uint8_t>(((prod[i] % 4) + 4) % 4);
    return r;
}

}  // namespace gsparc::gf
