#pragma once

#include <cstdint>
#include <vector>

namespace gsparc::gf {

/// GF(2^n) arithmetic modulo a primitive polynomial (bit i = coefficient of x^i).
struct GF2n {
    int n;
    std::uint32_t poly;

    std::uint32_t mul(std::uint32_t a, std::uint32_t b) const;
    int trace(std::uint32_t a) const;  // absolute trace to GF(2)
};

/// Primitive polynomial over GF(2) for degrees 2..9.
std::uint32_t primitive_poly(int n);

/// Maximal-length sequence of period 2^n-1: u[t] = tr(alpha^t) with alpha = x mod poly.
std::vector<std::uint8_t> m_sequence(int n);

/// v[t] = u[(q*t) mod len(u)].
std::vector<std::uint8_t> decimate(const std::vector<std::uint8_t>& u, std::uint64_t q);

/// Galois ring GR(4, n) = Z4[x]/(h), with h the Hensel lift of the degree-n
/// primitive binary polynomial. Exposes just what the quarter-phase basis
/// construction needs: traces of Teichmuller powers.
class GaloisRing4 {
public:
    explicit GaloisRing4(int n);

    int n() const { return n_; }
    std::uint32_t period() const { return period_; }  // 2^n - 1, order of xi

    /// Tr(xi^m) in Z4, where xi = x mod h generates the Teichmuller group.
    int teichmuller_trace(std::uint32_t m) const { return trace_[m % period_]; }

    const std::vector<std::uint8_t>& lift_poly() const { return h_; }

private:
    using Poly = std::vector<std::uint8_t>;  // coefficients mod 4, degree < n

    Poly mul(const Poly& a, const Poly& b) const;

    int n_;
    std::uint32_t period_;
    Poly h_;  // n+1 coefficients, monic
    std::vector<int> trace_;
};

}  // namespace gsparc::gf
