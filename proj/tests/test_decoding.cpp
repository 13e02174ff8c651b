#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "gsparc/channel.hpp"
#include "gsparc/decoding.hpp"

using namespace gsparc;

namespace {

bool near(double a, double b, double tol = 1e-12) { return std::abs(a - b) <= tol; }

CodeInstance instance(DictKind kind, int n, Scheme scheme, std::uint32_t K, std::uint32_t M,
                      bool offset = false, std::size_t gram_budget = kDefaultGramBudget) {
    CodeParams p;
    p.kind = kind;
    p.n = n;
    p.scheme = scheme;
    p.K = K;
    p.M = M;
    p.offset_qpsk = offset;
    return make_code_instance(p, gram_budget);
}

CodeInstance without_gram(CodeInstance inst) {
    inst.gram = nullptr;
    return inst;
}

BitString random_message(const CodeInstance& inst, std::uint64_t seed, std::uint64_t t) {
    TrialRng rng(seed, t);
    return random_bits(rng, inst.N_b);
}

CVec noisy_observation(const CodeInstance& inst, const BitString& msg, double sigma2,
                       std::uint64_t seed, std::uint64_t t) {
    TrialRng rng(seed, t);
    (void)random_bits(rng, inst.N_b);  // keep the stream aligned with the simulator
    return awgn(inst.encode(msg).s, sigma2, inst.field(), rng);
}

bool same_decision(const SparseCodeword& a, const SparseCodeword& b) {
    return a.support == b.support && a.symbol_idx == b.symbol_idx;
}

}  // namespace

TEST_CASE("noiseless single component is recovered exactly") {
    const auto inst = instance(DictKind::Mub, 3, Scheme::SSE, 1, 4);
    for (std::uint32_t i : {0u, 5u, 63u}) {
        for (std::uint32_t m = 0; m < 4; ++m) {
            const cplx b = inst.block_constellation(0).symbols[m];
            const CVec y = b * inst.dict->columns.col(i);
            const auto est = mad_decode(y, inst);
            CHECK(est.support == std::vector<std::uint32_t>{i});
            CHECK(est.symbol_idx == std::vector<std::uint32_t>{m});
        }
    }
}

TEST_CASE("K=1 MAD coincides with exhaustive minimum distance") {
    const auto inst = instance(DictKind::Mub, 3, Scheme::SSE, 1, 4);
    const ChannelConfig cfg{2.0, inst.N_b, inst.K, inst.field()};
    const double sigma2 = cfg.sigma2_per_real_dim();
    int mismatches = 0;
    for (std::uint64_t t = 0; t < 20000; ++t) {
        const BitString msg = random_message(inst, 50, t);
        const CVec y = noisy_observation(inst, msg, sigma2, 50, t);
        if (!same_decision(mad_decode(y, inst), ml_decode_k1(y, inst))) ++mismatches;
    }
    CHECK(mismatches == 0);
}

TEST_CASE("MAD and the oracle break exact ties identically") {
    CMat cols = CMat::Identity(4, 4);
    auto dict = std::make_shared<DictionaryMatrix>(make_custom_dictionary(cols, Field::Real));
    CodeInstance inst;
    inst.dict = dict;
    inst.scheme = Scheme::SFE;
    inst.K = 1;
    inst.M = 2;
    inst.constellations = ConstellationFamily::uniform(make_psk(2));
    inst.N_b = sfe_bit_budget(4, 1, 2);
    // equidistant from columns 1 and 2: both decoders take the lower index
    CVec y = CVec::Zero(4);
    y[1] = 0.5;
    y[2] = 0.5;
    const auto a = mad_decode(y, inst);
    const auto b = ml_decode_k1(y, inst);
    CHECK(a.support == std::vector<std::uint32_t>{1});
    CHECK(same_decision(a, b));
}

TEST_CASE("noiseless recovery holds whenever the guarantee does") {
    // mub(6), QPSK, K=4: bound 4.5
    const auto sse = instance(DictKind::Mub, 6, Scheme::SSE, 4, 4);
    const auto rep = check_recovery_guarantee(sse.dict->mu, sse.block_constellation(0).gamma, 4);
    REQUIRE(rep.guaranteed);
    for (std::uint64_t t = 0; t < 1000; ++t) {
        const BitString msg = random_message(sse, 51, t);
        const auto est = mad_decode(sse.encode(msg).s, sse);
        CHECK(sse.decode_bits(est) == msg);
    }
    // gold(5), BPSK, K=2 under SFE: bound (1 + 9/31)/(18/31) = 20/9
    const auto sfe = instance(DictKind::Gold, 5, Scheme::SFE, 2, 2);
    REQUIRE(check_recovery_guarantee(sfe.dict->mu, -1.0, 2).guaranteed);
    for (std::uint64_t t = 0; t < 1000; ++t) {
        const BitString msg = random_message(sfe, 52, t);
        const auto est = mad_decode(sfe.encode(msg).s, sfe);
        CHECK(sfe.decode_bits(est) == msg);
    }
}

TEST_CASE("recovery guarantee arithmetic") {
    const auto r1 = check_recovery_guarantee(0.125, 0.0, 4);
    CHECK(near(r1.bound, 4.5));
    CHECK(r1.guaranteed);
    CHECK(!check_recovery_guarantee(0.125, 0.0, 5).guaranteed);
    const auto r2 = check_recovery_guarantee(0.125, -1.0, 4);
    CHECK(near(r2.bound, 4.5));  // min{4.5, 9}
    // gamma <= 0 never tightens below the column-confusion branch
    for (double gamma : {-1.0, -0.5, 0.0}) {
        for (double mu : {0.05, 0.125, 0.3}) {
            const auto r = check_recovery_guarantee(mu, gamma, 3);
            CHECK(near(r.bound, (1.0 + mu) / (2.0 * mu)));
        }
    }
    CHECK_THROWS_AS(check_recovery_guarantee(0.0, 0.0, 1), config_error);
    CHECK_THROWS_AS(check_recovery_guarantee(0.5, 1.0, 1), config_error);
}

TEST_CASE("gram recursion and recomputation make identical decisions") {
    const auto with = instance(DictKind::Mub, 4, Scheme::SSE, 3, 4, true);
    const auto wout = without_gram(with);
    REQUIRE(with.gram);
    const ChannelConfig cfg{4.0, with.N_b, with.K, with.field()};
    for (std::uint64_t t = 0; t < 1000; ++t) {
        const BitString msg = random_message(with, 53, t);
        const CVec y = noisy_observation(with, msg, cfg.sigma2_per_real_dim(), 53, t);
        CHECK(same_decision(mad_decode(y, with), mad_decode(y, wout)));
    }
}

TEST_CASE("the traced residual matches an independent recomputation") {
    const auto inst = instance(DictKind::Mub, 4, Scheme::SSE, 3, 4, true);
    const ChannelConfig cfg{3.0, inst.N_b, inst.K, inst.field()};
    for (std::uint64_t t = 0; t < 100; ++t) {
        const BitString msg = random_message(inst, 54, t);
        const CVec y = noisy_observation(inst, msg, cfg.sigma2_per_real_dim(), 54, t);
        DecodeTrace trace;
        (void)mad_decode(y, inst, nullptr, &trace);
        REQUIRE(trace.steps.size() == inst.K);
        CVec r = y;
        std::uint32_t step = 0;
        for (const auto& s : trace.steps) {
            const int blk = inst.partition.block_of(s.column);
            r -= inst.block_constellation(std::uint32_t(blk)).symbols[s.symbol] *
                 inst.dict->columns.col(s.column);
            CHECK(std::abs(r.norm() - s.residual_norm) < 1e-9);
            CHECK(s.t == step++);
        }
    }
}

TEST_CASE("decoders never pick discarded or out-of-partition columns") {
    const auto sse = instance(DictKind::Gold, 5, Scheme::SSE, 3, 2);  // partition leaves a tail
    REQUIRE(sse.partition.unused > 0);
    const ChannelConfig cfg{1.0, sse.N_b, sse.K, sse.field()};
    for (std::uint64_t t = 0; t < 300; ++t) {
        const BitString msg = random_message(sse, 55, t);
        const CVec y = noisy_observation(sse, msg, cfg.sigma2_per_real_dim(), 55, t);
        for (const auto& est : {mad_decode(y, sse), omp_decode(y, sse), pmad_decode(y, sse, 4)}) {
            REQUIRE(est.K() == 3);
            std::vector<bool> seen(3, false);
            for (auto col : est.support) {
                const int k = sse.partition.block_of(col);
                REQUIRE(k >= 0);
                CHECK(!seen[std::size_t(k)]);
                seen[std::size_t(k)] = true;
            }
        }
    }

    const auto sfe = instance(DictKind::Mub, 4, Scheme::SFE, 4, 4);
    for (std::uint64_t t = 0; t < 300; ++t) {
        const BitString msg = random_message(sfe, 56, t);
        const CVec y = noisy_observation(sfe, msg, 0.05, 56, t);
        const auto est = mad_decode(y, sfe);
        for (std::size_t i = 1; i < est.support.size(); ++i)
            CHECK(est.support[i] > est.support[i - 1]);
    }
}

TEST_CASE("PMAD with one path reproduces MAD bit for bit") {
    for (bool gram_on : {true, false}) {
        const auto base = instance(DictKind::Mub, 4, Scheme::SSE, 3, 4, true);
        const auto inst = gram_on ? base : without_gram(base);
        const ChannelConfig cfg{3.0, inst.N_b, inst.K, inst.field()};
        for (std::uint64_t t = 0; t < 500; ++t) {
            const BitString msg = random_message(inst, 57, t);
            const CVec y = noisy_observation(inst, msg, cfg.sigma2_per_real_dim(), 57, t);
            const auto a = mad_decode(y, inst);
            const auto b = pmad_decode(y, inst, 1);
            CHECK(same_decision(a, b));
            CHECK((a.s - b.s).norm() == 0.0);
        }
    }
}

TEST_CASE("PMAD returns the candidate closest to the observation") {
    const auto inst = instance(DictKind::Mub, 4, Scheme::SSE, 3, 4, true);
    const ChannelConfig cfg{2.0, inst.N_b, inst.K, inst.field()};
    for (std::uint64_t t = 0; t < 200; ++t) {
        const BitString msg = random_message(inst, 58, t);
        const CVec y = noisy_observation(inst, msg, cfg.sigma2_per_real_dim(), 58, t);
        PmadDetail detail;
        const auto best = pmad_decode(y, inst, 8, &detail);
        REQUIRE(detail.candidates.size() == 8);
        const double got =
            (y - assemble_codeword(*inst.dict, best.support, best.symbols)).squaredNorm();
        for (double d : detail.distances) CHECK(got <= d + 1e-12);
    }
}

TEST_CASE("PMAD clamps an oversized path count and flags it") {
    const auto inst = instance(DictKind::Mub, 3, Scheme::SSE, 2, 4);
    const CVec y = inst.encode(BitString(inst.N_b)).s;
    PmadDetail detail;
    (void)pmad_decode(y, inst, 1u << 20, &detail);
    CHECK(detail.clamped);
    CHECK(detail.effective_T == 64);  // selectable columns
    PmadDetail d0;
    (void)pmad_decode(y, inst, 0, &d0);
    CHECK(d0.clamped);
    CHECK(d0.effective_T == 1);
}

TEST_CASE("PMAD improves on MAD for the (128,68) code at a fixed point") {
    const auto inst = instance(DictKind::Mub, 6, Scheme::SSE, 6, 4, true);
    REQUIRE(inst.N_b == 68);
    const ChannelConfig cfg{7.0, inst.N_b, inst.K, inst.field()};
    const double sigma2 = cfg.sigma2_per_real_dim();
    int mad_err = 0, pmad_err = 0;
    const std::uint64_t trials = 2000;
    for (std::uint64_t t = 0; t < trials; ++t) {
        const BitString msg = random_message(inst, 59, t);
        const CVec y = noisy_observation(inst, msg, sigma2, 59, t);
        mad_err += inst.decode_bits(mad_decode(y, inst)) != msg;
        pmad_err += inst.decode_bits(pmad_decode(y, inst, 16)) != msg;
    }
    CHECK(pmad_err < mad_err);
}

TEST_CASE("OMP selects the same support as MAD for K=1 noiseless") {
    const auto inst = instance(DictKind::Mub, 3, Scheme::SSE, 1, 4);
    for (std::uint32_t i : {3u, 17u, 40u}) {
        const CVec y = inst.block_constellation(0).symbols[2] * inst.dict->columns.col(i);
        CHECK(omp_decode(y, inst).support == mad_decode(y, inst).support);
    }
}

TEST_CASE("OMP recovers an orthogonal support exactly") {
    CMat cols = CMat::Identity(8, 8);
    auto dict = std::make_shared<DictionaryMatrix>(make_custom_dictionary(cols, Field::Complex));
    CodeInstance inst;
    inst.dict = dict;
    inst.scheme = Scheme::SFE;
    inst.K = 3;
    inst.M = 4;
    inst.constellations = ConstellationFamily::uniform(make_psk(4));
    inst.N_b = sfe_bit_budget(8, 3, 4);
    const BitString msg = random_message(inst, 60, 1);
    const auto cw = inst.encode(msg);
    const auto est = omp_decode(cw.s, inst);
    CHECK(est.support == cw.support);
    CHECK(est.symbol_idx == cw.symbol_idx);
}

TEST_CASE("MAD beats OMP on the (128,68) code at a fixed point") {
    const auto inst = instance(DictKind::Mub, 6, Scheme::SSE, 6, 4, true);
    const ChannelConfig cfg{7.0, inst.N_b, inst.K, inst.field()};
    const double sigma2 = cfg.sigma2_per_real_dim();
    int mad_err = 0, omp_err = 0;
    for (std::uint64_t t = 0; t < 2000; ++t) {
        const BitString msg = random_message(inst, 61, t);
        const CVec y = noisy_observation(inst, msg, sigma2, 61, t);
        mad_err += inst.decode_bits(mad_decode(y, inst)) != msg;
        omp_err += inst.decode_bits(omp_decode(y, inst)) != msg;
    }
    CHECK(mad_err < omp_err);
}

TEST_CASE("decoding is deterministic") {
    const auto inst = instance(DictKind::Mub, 4, Scheme::SSE, 3, 4, true);
    const BitString msg = random_message(inst, 62, 7);
    const CVec y = noisy_observation(inst, msg, 0.02, 62, 7);
    const auto a = mad_decode(y, inst);
    const auto b = mad_decode(y, inst);
    CHECK(same_decision(a, b));
    CHECK((pmad_decode(y, inst, 16).s - pmad_decode(y, inst, 16).s).norm() == 0.0);
}

TEST_CASE("partial estimates are validated") {
    const auto sse = instance(DictKind::Mub, 4, Scheme::SSE, 3, 4);
    const CVec y = sse.encode(BitString(sse.N_b)).s;
    SparseCodeword partial;
    partial.support = {0, 1};  // both in sub-block 0
    partial.symbol_idx = {0, 0};
    CHECK_THROWS_AS(mad_decode(y, sse, &partial), config_error);
    SparseCodeword too_big;
    too_big.support = {0, 70, 140};
    too_big.symbol_idx = {0, 0, 0};
    CHECK_THROWS_AS(mad_decode(y, sse, &too_big), config_error);

    const auto k1 = instance(DictKind::Mub, 3, Scheme::SSE, 1, 4);
    CHECK_THROWS_AS(ml_decode_k1(y, sse), config_error);
    const CVec y1 = k1.encode(BitString(k1.N_b)).s;
    CHECK(ml_decode_k1(y1, k1).support == std::vector<std::uint32_t>{0});
}
