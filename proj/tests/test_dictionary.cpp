#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <set>

#include "gsparc/dictionary.hpp"
#include "gsparc/galois.hpp"
#include "oracles.hpp"

using namespace gsparc;

namespace {

// Gold columns are the nonzero span of the shifts of the preferred pair; the
// census of pairwise correlations follows from the span's weight census.
std::map<std::int64_t, std::uint64_t> gold_pair_census_oracle(int n, double bin) {
    const std::uint32_t N = (1u << n) - 1;
    const auto u = gf::m_sequence(n);
    const auto v = gf::decimate(u, (1u << ((n + 1) / 2)) + 1);
    std::vector<std::vector<std::uint8_t>> basis;
    for (std::uint32_t s = 0; s < std::uint32_t(n); ++s) {
        std::vector<std::uint8_t> a(N), b(N);
        for (std::uint32_t t = 0; t < N; ++t) {
            a[t] = u[(t + s) % N];
            b[t] = v[(t + s) % N];
        }
        basis.push_back(a);
        basis.push_back(b);
    }
    const auto weights = oracles::span_weight_census(basis);
    // every nonzero codeword c is the difference of (2^(2n) - 2)/2 unordered column pairs
    const std::uint64_t pairs_per_codeword = ((std::uint64_t(1) << (2 * n)) - 2) / 2;
    std::map<std::int64_t, std::uint64_t> census;
    for (const auto& [w, count] : weights) {
        const double corr = (double(N) - 2.0 * double(w)) / double(N);
        census[std::llround(corr / bin)] += count * pairs_per_codeword;
    }
    return census;
}

bool near(double a, double b, double tol = 1e-12) { return std::abs(a - b) <= tol; }

}  // namespace

TEST_CASE("gold t(n) and the three-valued correlation set") {
    CHECK(gold_t(5) == 9);
    CHECK(gold_t(7) == 17);
    CHECK(gold_t(9) == 33);
    const auto vals = gold_correlation_values(7);
    CHECK(near(vals[0], -1.0 / 127));
    CHECK(near(vals[1], -17.0 / 127));
    CHECK(near(vals[2], 15.0 / 127));
}

TEST_CASE("gold(5): exhaustive pairwise correlations over all 1024 columns") {
    const auto A = build_gold_dictionary(5);
    CHECK(A.N() == 31);
    CHECK(A.L() == 1024);
    CHECK(near(A.mu, 9.0 / 31));
    for (Index c = 0; c < A.L(); ++c) CHECK(near(A.columns.col(c).norm(), 1.0));

    // production census over the Gold-derived columns vs the span-weight oracle
    const auto census = correlation_census(A, 0, A.L() - 1);
    REQUIRE(census.size() == 3);
    const auto expect = gold_pair_census_oracle(5, 1e-9);
    REQUIRE(expect.size() == 3);
    for (const auto& e : census) {
        CHECK(near(e.value.imag(), 0.0));
        const auto it = expect.find(std::llround(e.value.real() / 1e-9));
        REQUIRE(it != expect.end());
        CHECK(it->second == e.count);
    }
    const auto vals = gold_correlation_values(5);
    for (const auto& e : census)
        CHECK(std::any_of(vals.begin(), vals.end(),
                          [&](double v) { return near(e.value.real(), v); }));

    // the generic coherence scan agrees with the stored analytic value
    CHECK(near(coherence(A), A.mu));

    // identity-column cross terms stay below mu
    for (Index c = 0; c + 1 < A.L(); ++c)
        CHECK(std::abs(A.columns.col(c)[0]) <= A.mu + 1e-12);
}

TEST_CASE("gold(7): formula values and sampled structure") {
    const auto A = build_gold_dictionary(7);
    CHECK(A.N() == 127);
    CHECK(A.L() == 16384);
    CHECK(near(A.mu, 17.0 / 127));

    // oracle value set from the span weights (fast even at n=7)
    const auto expect = gold_pair_census_oracle(7, 1e-9);
    std::set<std::int64_t> keys;
    for (const auto& [k, _] : expect) keys.insert(k);
    const auto vals = gold_correlation_values(7);
    for (double v : vals) CHECK(keys.count(std::llround(v / 1e-9)) == 1);
    CHECK(keys.size() == 3);

    // sampled pairwise correlations from the actual matrix
    std::mt19937_64 gen(3);
    for (int t = 0; t < 3000; ++t) {
        const Index p = Index(gen() % std::uint64_t(A.L() - 1));
        const Index q = Index(gen() % std::uint64_t(A.L() - 1));
        if (p == q) continue;
        const double corr = (A.columns.col(p).adjoint() * A.columns.col(q))(0).real();
        CHECK(std::any_of(vals.begin(), vals.end(), [&](double v) { return near(corr, v, 1e-9); }));
    }
}

TEST_CASE("gold(9): supported and sampled-sane") {
    const auto A = build_gold_dictionary(9);
    CHECK(A.N() == 511);
    CHECK(A.L() == 262144);
    CHECK(near(A.mu, 33.0 / 511));
    const auto vals = gold_correlation_values(9);
    std::mt19937_64 gen(5);
    for (int t = 0; t < 300; ++t) {
        const Index p = Index(gen() % std::uint64_t(A.L() - 1));
        const Index q = Index(gen() % std::uint64_t(A.L() - 1));
        if (p == q) continue;
        CHECK(near(A.columns.col(p).norm(), 1.0, 1e-11));
        const double corr = (A.columns.col(p).adjoint() * A.columns.col(q))(0).real();
        CHECK(std::any_of(vals.begin(), vals.end(), [&](double v) { return near(corr, v, 1e-9); }));
    }
}

TEST_CASE("gold rejects unsupported sizes") {
    CHECK_THROWS_WITH_AS(build_gold_dictionary(4), doctest::Contains("{5, 7, 9}"), config_error);
    CHECK_THROWS_AS(build_gold_dictionary(11), config_error);
}

TEST_CASE("mub(n) structure for n in 2..5, exhaustively") {
    for (int n = 2; n <= 5; ++n) {
        const auto A = build_mub_dictionary(n);
        const Index N = Index(1) << n;
        CHECK(A.N() == N);
        CHECK(A.L() == N * N);
        CHECK(near(A.mu, 1.0 / std::sqrt(double(N))));

        // quarter-phase entries
        const auto alphabet = entry_census(A);
        CHECK(alphabet.size() == 4);
        for (const auto& e : alphabet)
            CHECK(near(std::abs(e.value), 1.0 / std::sqrt(double(N))));

        const auto rep = validate_mub(A, 1e-9);
        CHECK(rep.unitary_ok);
        CHECK(rep.magnitude_ok);
        CHECK(rep.phase_violations == 0);
        CHECK(rep.warning.empty());

        CHECK(near(coherence(A), A.mu));
    }
}

TEST_CASE("mub cross-basis products land on the root grid") {
    // n=3 (odd): 8th roots; n=2 (even): 4th roots
    for (int n : {2, 3}) {
        const auto A = build_mub_dictionary(n);
        const Index N = A.N();
        const int roots = n % 2 ? 8 : 4;
        const double target = 1.0 / std::sqrt(double(N));
        for (Index p = 0; p < A.L(); ++p)
            for (Index q = p + 1; q < A.L(); ++q) {
                const cplx v = (A.columns.col(q).adjoint() * A.columns.col(p))(0);
                if (p / N == q / N) {
                    CHECK(near(std::abs(v), 0.0));  // same orthonormal basis
                    continue;
                }
                CHECK(near(std::abs(v), target));
                const double phase = std::arg(v) * roots / (2.0 * std::numbers::pi);
                CHECK(near(phase, std::round(phase), 1e-7));
            }
    }
}

TEST_CASE("mub rejects out-of-range sizes") {
    CHECK_THROWS_AS(build_mub_dictionary(1), config_error);
    CHECK_THROWS_AS(build_mub_dictionary(10), config_error);
}

TEST_CASE("gram matrix structure and memory guard") {
    const auto A = build_mub_dictionary(3);
    const auto G = gram(A);
    const Index L = A.L();
    CHECK(G.entries.rows() == L);
    for (Index i = 0; i < L; ++i) CHECK(near(std::abs(G.entries(i, i)), 1.0));
    // Hermitian by construction
    CHECK((G.entries - G.entries.adjoint()).cwiseAbs().maxCoeff() < 1e-12);
    // off-diagonal values: 0 within a basis, magnitude 1/sqrt(8) across bases
    for (Index p = 0; p < L; ++p)
        for (Index q = p + 1; q < L; ++q) {
            const double mag = std::abs(G.entries(p, q));
            if (p / 8 == q / 8) CHECK(near(mag, 0.0));
            else CHECK(near(mag, 1.0 / std::sqrt(8.0)));
        }
    CHECK_THROWS_WITH_AS(gram(A, 16), doctest::Contains("on-the-fly"), config_error);
}

TEST_CASE("gold(5) gram holds the three-valued set") {
    const auto A = build_gold_dictionary(5);
    const auto G = gram(A);
    const auto vals = gold_correlation_values(5);
    std::mt19937_64 gen(9);
    for (int t = 0; t < 5000; ++t) {
        const Index p = Index(gen() % 1023), q = Index(gen() % 1023);
        if (p == q) continue;
        CHECK(std::any_of(vals.begin(), vals.end(),
                          [&](double v) { return near(G.entries(p, q).real(), v, 1e-9); }));
    }
}

TEST_CASE("custom dictionaries: identity has zero coherence") {
    CMat I = CMat::Identity(2, 2);
    const auto A = make_custom_dictionary(I, Field::Real, "eye2");
    CHECK(A.mu == 0.0);
    CHECK_THROWS_AS(coherence(make_custom_dictionary(CMat::Identity(1, 1), Field::Real)),
                    config_error);
    CMat bad = CMat::Identity(2, 2);
    bad(0, 0) = 2.0;
    CHECK_THROWS_AS(make_custom_dictionary(bad, Field::Real), config_error);
}

TEST_CASE("restriction and identity extension") {
    const auto A = build_mub_dictionary(3);
    const auto R = restrict_columns(A, 16);  // two full bases
    CHECK(R.L() == 16);
    CHECK(near(R.mu, 1.0 / std::sqrt(8.0)));
    CHECK(R.label == "mub3_cols16");

    const auto E = append_identity_columns(A, 1);
    CHECK(E.L() == 65);
    CHECK(near(E.columns.col(64).norm(), 1.0));
    // standard-basis cross products have magnitude 1/sqrt(N) against every basis
    CHECK(near(E.mu, 1.0 / std::sqrt(8.0)));
}

TEST_CASE("validate_mub flags a doctored dictionary with a warning") {
    auto A = build_mub_dictionary(2);
    A.columns(0, 5) *= std::polar(1.0, 0.3);  // phase-twist one entry
    const auto rep = validate_mub(A, 1e-9);
    CHECK(rep.phase_violations > 0);
    CHECK(!rep.warning.empty());
}

TEST_CASE("m-sequences are balanced with two-valued autocorrelation") {
    for (int n : {5, 7}) {
        const auto u = gf::m_sequence(n);
        const std::uint32_t N = (1u << n) - 1;
        std::uint32_t weight = 0;
        for (auto b : u) weight += b;
        CHECK(weight == (N + 1) / 2);
        for (std::uint32_t s = 1; s < N; ++s) {
            std::int64_t corr = 0;
            for (std::uint32_t t = 0; t < N; ++t)
                corr += (u[t] ^ u[(t + s) % N]) ? -1 : 1;
            CHECK(corr == -1);
        }
    }
}
