#include "gsparc/dictionary.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <utility>

#include "gsparc/galois.hpp"

namespace gsparc {

std::uint32_t gold_t(int n) {
    if (n % 2 == 1) return 1u + (1u << ((n + 1) / 2));
    return 1u + (1u << ((n + 2) / 2));
}

std::vector<double> gold_correlation_values(int n) {
    const double N = double((1u << n) - 1);
    const double t = double(gold_t(n));
    return {-1.0 / N, -t / N, (t - 2.0) / N};
}

DictionaryMatrix build_gold_dictionary(int n) {
    if (n != 5 && n != 7 && n != 9)
        throw config_error("gold dictionary: supported n are {5, 7, 9}, got " + std::to_string(n));

    const std::uint32_t N = (1u << n) - 1;
    const std::uint32_t family = (1u << n) + 1;  // u, v and u + T^j v
    const Index L = Index(1) << (2 * n);

    const auto u = gf::m_sequence(n);
    const auto v = gf::decimate(u, (1u << ((n + 1) / 2)) + 1);  // preferred companion

    DictionaryMatrix A;
    A.field = Field::Real;
    A.kind = DictKind::Gold;
    A.n = n;
    A.label = "gold" + std::to_string(n);
    A.mu = double(gold_t(n)) / double(N);
    A.columns.resize(N, L);

    const double scale = 1.0 / std::sqrt(double(N));
    std::vector<std::uint8_t> seq(N);
    Index col = 0;
    for (std::uint32_t s = 0; s < family; ++s) {
        if (s == 0) seq.assign(u.begin(), u.end());
        else if (s == 1) seq.assign(v.begin(), v.end());
        else
            for (std::uint32_t t = 0; t < N; ++t) seq[t] = u[t] ^ v[(t + (s - 2)) % N];
        for (std::uint32_t shift = 0; shift < N; ++shift, ++col)
            for (std::uint32_t t = 0; t < N; ++t)
                A.columns(t, col) = cplx(seq[(t + shift) % N] ? -scale : scale, 0.0);
    }
    // one standard basis column brings L to a power of two
    A.columns.col(L - 1).setZero();
    A.columns(0, L - 1) = cplx(1.0, 0.0);
    return A;
}

DictionaryMatrix build_mub_dictionary(int n) {
    if (n < 2 || n > 9)
        throw config_error("mub dictionary: need 2 <= n <= 9 (N = 2^n <= 512), got " +
                           std::to_string(n));

    const std::uint32_t N = 1u << n;
    const std::uint32_t period = N - 1;

    // Exponent tables over the Teichmuller enumeration [0, 1, xi, ..., xi^(N-2)]:
    // entry exponent of column (a, b) at row x is Tr(a x) + 2 tr(bbar xbar) mod 4,
    // with the ring trace on the Teichmuller product and the binary field trace
    // on the mod-2 reductions.
    gf::GaloisRing4 ring(n);
    gf::GF2n f2{n, gf::primitive_poly(n)};
    std::vector<int> tr2(period);
    {
        std::uint32_t p = 1;
        for (std::uint32_t m = 0; m < period; ++m) {
            tr2[m] = f2.trace(p);
            p = f2.mul(p, 2);
        }
    }

    DictionaryMatrix A;
    A.field = Field::Complex;
    A.kind = DictKind::Mub;
    A.n = n;
    A.label = "mub" + std::to_string(n);
    A.mu = 1.0 / std::sqrt(double(N));
    A.columns.resize(N, Index(N) * N);

    const double scale = 1.0 / std::sqrt(double(N));
    const cplx unit[4] = {cplx(scale, 0), cplx(0, scale), cplx(-scale, 0), cplx(0, -scale)};

    for (std::uint32_t a = 0; a < N; ++a) {
        for (std::uint32_t b = 0; b < N; ++b) {
            const Index col = Index(a) * N + b;
            for (std::uint32_t x = 0; x < N; ++x) {
                int e = 0;
                if (a != 0 && x != 0) e = ring.teichmuller_trace(a - 1 + x - 1);
                if (b != 0 && x != 0) e = (e + 2 * tr2[(b - 1 + x - 1) % period]) & 3;
                A.columns(x, col) = unit[e];
            }
        }
    }
    return A;
}

DictionaryMatrix make_custom_dictionary(CMat columns, Field field, std::string label) {
    DictionaryMatrix A;
    A.field = field;
    A.kind = DictKind::Custom;
    A.columns = std::move(columns);
    A.label = std::move(label);
    if (A.L() < 1 || A.N() < 1) throw config_error("custom dictionary must be non-empty");
    for (Index c = 0; c < A.L(); ++c) {
        if (std::abs(A.columns.col(c).norm() - 1.0) > 1e-12)
            throw config_error("custom dictionary column " + std::to_string(c) + " is not unit norm");
    }
    A.mu = A.L() >= 2 ? coherence(A) : 0.0;
    return A;
}

DictionaryMatrix restrict_columns(const DictionaryMatrix& A, Index count) {
    if (count < 1 || count > A.L()) throw config_error("restrict_columns: count out of range");
    if (count == A.L()) return A;
    DictionaryMatrix R;
    R.field = A.field;
    R.kind = DictKind::Custom;
    R.n = A.n;
    R.columns = A.columns.leftCols(count);
    R.label = A.label + "_cols" + std::to_string(count);
    R.mu = count >= 2 ? coherence(R) : 0.0;
    return R;
}

DictionaryMatrix append_identity_columns(const DictionaryMatrix& A, int count) {
    if (count < 1 || Index(count) > A.N()) throw config_error("append_identity_columns: bad count");
    DictionaryMatrix R;
    R.field = A.field;
    R.kind = DictKind::Custom;
    R.n = A.n;
    R.columns.resize(A.N(), A.L() + count);
    R.columns.leftCols(A.L()) = A.columns;
    R.columns.rightCols(count).setZero();
    for (int i = 0; i < count; ++i) R.columns(i, A.L() + i) = cplx(1.0, 0.0);
    R.label = A.label + "_id" + std::to_string(count);
    R.mu = coherence(R);
    return R;
}

namespace {

constexpr Index kBlock = 768;

// Visits every distinct unordered column pair product within [first, last) in
// blocks of A^H A; the real fast path runs dgemm on the real parts.
template <typename Visitor>
void visit_gram_blocks(const DictionaryMatrix& A, Index first, Index last, Visitor&& visit) {
    const bool real_path = A.field == Field::Real;
    Eigen::MatrixXd re;
    if (real_path) re = A.columns.real();

    for (Index i0 = first; i0 < last; i0 += kBlock) {
        const Index iw = std::min(kBlock, last - i0);
        for (Index j0 = i0; j0 < last; j0 += kBlock) {
            const Index jw = std::min(kBlock, last - j0);
            const bool diag = i0 == j0;
            if (real_path) {
                Eigen::MatrixXd block =
                    re.middleCols(i0, iw).transpose() * re.middleCols(j0, jw);
                for (Index j = 0; j < jw; ++j)
                    for (Index i = 0; i < iw; ++i) {
                        if (diag && i >= j) continue;
                        visit(cplx(block(i, j), 0.0));
                    }
            } else {
                CMat block = A.columns.middleCols(i0, iw).adjoint() * A.columns.middleCols(j0, jw);
                for (Index j = 0; j < jw; ++j)
                    for (Index i = 0; i < iw; ++i) {
                        if (diag && i >= j) continue;
                        visit(block(i, j));
                    }
            }
        }
    }
}

std::pair<std::int64_t, std::int64_t> bin_key(cplx v, double bin) {
    return {std::llround(std::real(v) / bin), std::llround(std::imag(v) / bin)};
}

std::vector<CensusEntry> census_from_map(const std::map<std::pair<std::int64_t, std::int64_t>,
                                                        std::pair<cplx, std::uint64_t>>& m) {
    std::vector<CensusEntry> out;
    out.reserve(m.size());
    for (const auto& [key, vc] : m) out.push_back({vc.first / double(vc.second), vc.second});
    return out;
}

}  // namespace

double coherence(const DictionaryMatrix& A) {
    if (A.L() < 2) throw config_error("coherence requires at least two columns");
    double mu = 0.0;
    visit_gram_blocks(A, 0, A.L(), [&](cplx v) { mu = std::max(mu, std::abs(v)); });
    return mu;
}

GramMatrix gram(const DictionaryMatrix& A, std::size_t max_bytes) {
    const std::size_t need = std::size_t(A.L()) * std::size_t(A.L()) * sizeof(cplx);
    if (need > max_bytes)
        throw config_error("gram matrix would need " + std::to_string(need >> 20) +
                           " MiB (budget " + std::to_string(max_bytes >> 20) +
                           " MiB); use on-the-fly correlation mode");
    GramMatrix G;
    G.entries = A.columns.adjoint() * A.columns;
    return G;
}

std::vector<CensusEntry> correlation_census(const DictionaryMatrix& A, Index first, Index last,
                                            double bin) {
    if (first < 0 || last > A.L() || last - first < 2)
        throw config_error("correlation_census: bad column range");
    std::map<std::pair<std::int64_t, std::int64_t>, std::pair<cplx, std::uint64_t>> m;
    visit_gram_blocks(A, first, last, [&](cplx v) {
        auto& slot = m[bin_key(v, bin)];
        slot.first += v;
        slot.second += 1;
    });
    return census_from_map(m);
}

std::vector<CensusEntry> entry_census(const DictionaryMatrix& A, double bin) {
    std::map<std::pair<std::int64_t, std::int64_t>, std::pair<cplx, std::uint64_t>> m;
    const cplx* p = A.columns.data();
    const std::size_t total = std::size_t(A.N()) * std::size_t(A.L());
    for (std::size_t i = 0; i < total; ++i) {
        auto& slot = m[bin_key(p[i], bin)];
        slot.first += p[i];
        slot.second += 1;
    }
    return census_from_map(m);
}

MubReport validate_mub(const DictionaryMatrix& A, double tol) {
    const Index N = A.N();
    if (A.L() % N != 0 || A.L() / N < 2)
        throw config_error("validate_mub expects a concatenation of >= 2 square bases");
    const Index bases = A.L() / N;
    const double target = 1.0 / std::sqrt(double(N));
    const int roots = (A.n % 2 == 1) ? 8 : 4;

    MubReport rep;
    rep.unitary_ok = true;
    rep.magnitude_ok = true;

    for (Index bi = 0; bi < bases; ++bi) {
        for (Index bj = bi; bj < bases; ++bj) {
            CMat block = A.columns.middleCols(bi * N, N).adjoint() * A.columns.middleCols(bj * N, N);
            if (bi == bj) {
                const double err = (block - CMat::Identity(N, N)).cwiseAbs().maxCoeff();
                rep.max_unitary_err = std::max(rep.max_unitary_err, err);
                if (err > tol) rep.unitary_ok = false;
                continue;
            }
            for (Index j = 0; j < N; ++j)
                for (Index i = 0; i < N; ++i) {
                    const cplx v = block(i, j);
                    const double mag_err = std::abs(std::abs(v) - target);
                    rep.max_magnitude_err = std::max(rep.max_magnitude_err, mag_err);
                    if (mag_err > tol) rep.magnitude_ok = false;
                    // nearest root-of-unity phase
                    const double phase = std::arg(v) * roots / (2.0 * std::numbers::pi);
                    const double off = std::abs(phase - std::round(phase)) * 2.0 * std::numbers::pi *
                                       target / roots;
                    if (off > tol) ++rep.phase_violations;
                }
        }
    }
    if (rep.phase_violations > 0)
        rep.warning = "cross-basis inner products leave the conjectured " + std::to_string(roots) +
                      "th-root phase grid (" + std::to_string(rep.phase_violations) + " pairs)";
    return rep;
}

}  // namespace gsparc
