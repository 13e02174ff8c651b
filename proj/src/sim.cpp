#include "gsparc/sim.hpp"

#include <algorithm>
#include <chrono>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace gsparc {

namespace {

constexpr std::uint64_t kChunk = 256;

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// Fixed-size chunks with early stopping checked at chunk boundaries: counts
// over a fixed trial prefix cannot depend on thread scheduling.
template <typename TrialFn>
SimRecord run_point(double ebn0, const SimBudget& budget, std::uint64_t seed,
                    const SimOptions& opt, std::uint64_t users, TrialFn&& trial) {
    SimRecord rec;
    rec.config_digest = opt.config_digest;
    rec.ebn0_db = ebn0;
    rec.seed = seed;
    rec.per_user_errors.assign(users, 0);
    const auto t0 = std::chrono::steady_clock::now();

    std::vector<std::uint8_t> flags(kChunk);
    std::vector<std::uint64_t> user_err(users);
    std::uint64_t done = 0, errors = 0;
    while (done < budget.max_trials && errors < budget.max_errors) {
        const std::uint64_t n = std::min(kChunk, budget.max_trials - done);
        std::fill(user_err.begin(), user_err.end(), 0);
#pragma omp parallel
        {
            std::vector<std::uint64_t> local(users, 0);
#pragma omp for schedule(dynamic)
            for (std::int64_t j = 0; j < std::int64_t(n); ++j)
                flags[std::size_t(j)] = trial(done + std::uint64_t(j), local);
#pragma omp critical
            for (std::size_t u = 0; u < users; ++u) user_err[u] += local[u];
        }
        for (std::uint64_t j = 0; j < n; ++j) errors += flags[j];
        for (std::size_t u = 0; u < users; ++u) rec.per_user_errors[u] += user_err[u];
        if (opt.keep_flags) rec.error_flags.insert(rec.error_flags.end(), flags.begin(), flags.begin() + n);
        done += n;
    }
    rec.trials = done;
    rec.block_errors = errors;
    rec.wall_time_s = seconds_since(t0);
    if (users == 0) rec.per_user_errors.clear();
    return rec;
}

}  // namespace

std::string to_string(DecoderSpec::Alg a) {
    switch (a) {
        case DecoderSpec::Alg::MAD: return "mad";
        case DecoderSpec::Alg::PMAD: return "pmad";
        case DecoderSpec::Alg::OMP: return "omp";
        case DecoderSpec::Alg::ML_K1: return "ml";
    }
    return "?";
}

DecoderSpec::Alg decoder_alg_from_string(const std::string& s) {
    if (s == "mad") return DecoderSpec::Alg::MAD;
    if (s == "pmad") return DecoderSpec::Alg::PMAD;
    if (s == "omp") return DecoderSpec::Alg::OMP;
    if (s == "ml") return DecoderSpec::Alg::ML_K1;
    throw config_error("unknown decoder '" + s + "' (expected mad|pmad|omp|ml)");
}

std::string DecoderSpec::label() const {
    if (alg == Alg::PMAD) return std::to_string(T) + "-pmad";
    return to_string(alg);
}

SparseCodeword decode_with(const CVec& y, const CodeInstance& inst, const DecoderSpec& dec) {
    switch (dec.alg) {
        case DecoderSpec::Alg::MAD: return mad_decode(y, inst);
        case DecoderSpec::Alg::PMAD: return pmad_decode(y, inst, dec.T);
        case DecoderSpec::Alg::OMP: return omp_decode(y, inst);
        case DecoderSpec::Alg::ML_K1: return ml_decode_k1(y, inst);
    }
    throw config_error("unknown decoder algorithm");
}

std::vector<SimRecord> run_bler(const CodeInstance& inst, const DecoderSpec& dec,
                                const std::vector<double>& ebn0_db, const SimBudget& budget,
                                std::uint64_t seed, const SimOptions& opt) {
    std::vector<SimRecord> out;
    out.reserve(ebn0_db.size());
    for (double pt : ebn0_db) {
        const ChannelConfig cfg{pt, inst.N_b, inst.K, inst.field()};
        const double sigma2 = cfg.sigma2_per_real_dim();
        out.push_back(run_point(pt, budget, seed, opt, 0,
                                [&](std::uint64_t t, std::vector<std::uint64_t>&) -> std::uint8_t {
                                    TrialRng rng(seed, t);
                                    const BitString msg = random_bits(rng, inst.N_b);
                                    const SparseCodeword cw = inst.encode(msg);
                                    const CVec y = awgn(cw.s, sigma2, inst.field(), rng);
                                    const SparseCodeword est = decode_with(y, inst, dec);
                                    return inst.decode_bits(est) == msg ? 0 : 1;
                                }));
    }
    return out;
}

std::string to_string(MultiUserMode m) {
    switch (m) {
        case MultiUserMode::Mac: return "mac";
        case MultiUserMode::Broadcast: return "broadcast";
        case MultiUserMode::Interference: return "interference";
    }
    return "?";
}

MultiUserMode multiuser_mode_from_string(const std::string& s) {
    if (s == "mac") return MultiUserMode::Mac;
    if (s == "broadcast") return MultiUserMode::Broadcast;
    if (s == "interference") return MultiUserMode::Interference;
    throw config_error("unknown multiuser mode '" + s + "'");
}

void MultiUserConfig::validate(const CodeInstance& inst) const {
    if (inst.scheme != Scheme::SSE) throw config_error("multi-user operation requires scheme sse");
    if (users.empty()) throw config_error("multiuser.users must not be empty");
    if (users.size() > inst.K) throw config_error("more users than sub-blocks");
    std::uint32_t total = 0;
    for (std::size_t i = 0; i < users.size(); ++i) {
        if (users[i].subblocks < 1)
            throw config_error("multiuser.users[" + std::to_string(i) + "].subblocks must be >= 1");
        if (users[i].M == 0 || (users[i].M & (users[i].M - 1)) != 0)
            throw config_error("multiuser.users[" + std::to_string(i) + "].M must be a power of two");
        total += users[i].subblocks;
    }
    if (total != inst.K) throw config_error("user sub-block counts must sum to K");
    if (mode == MultiUserMode::Interference) {
        const auto P = Index(users.size());
        if (gains.rows() != P || gains.cols() != P)
            throw config_error("interference gains must be a PxP matrix");
        for (Index i = 0; i < P; ++i)
            if (gains(i, i) != 1.0) throw config_error("interference gains need h_ii = 1");
    }
    if (inst.offset_qpsk)
        for (const auto& u : users)
            if (u.M != 4) throw config_error("offset_qpsk requires M = 4 for every user");
}

std::vector<std::uint32_t> MultiUserConfig::user_bits(const CodeInstance& inst) const {
    std::vector<std::uint32_t> out;
    out.reserve(users.size());
    std::uint32_t k = 0;
    for (const auto& u : users) {
        std::uint32_t bits = 0;
        for (std::uint32_t j = 0; j < u.subblocks; ++j, ++k) {
            std::uint32_t sz = inst.partition.sizes[k], lg = 0;
            while (sz > 1) {
                sz >>= 1;
                ++lg;
            }
            bits += lg;
        }
        std::uint32_t m = u.M, lgm = 0;
        while (m > 1) {
            m >>= 1;
            ++lgm;
        }
        bits += u.subblocks * lgm;
        out.push_back(bits);
    }
    return out;
}

CodeInstance apply_multiuser(const CodeInstance& inst, const MultiUserConfig& mu) {
    mu.validate(inst);
    bool uniform = true;
    for (const auto& u : mu.users) uniform = uniform && u.M == inst.M;
    if (uniform) return inst;
    if (inst.offset_qpsk) return inst;  // validate() already pinned M=4 everywhere

    CodeInstance adj = inst;
    std::vector<Constellation> per_block;
    per_block.reserve(inst.K);
    for (const auto& u : mu.users)
        for (std::uint32_t j = 0; j < u.subblocks; ++j) per_block.push_back(make_psk(u.M));
    adj.constellations = ConstellationFamily::per_block(std::move(per_block));
    const auto bits = mu.user_bits(inst);
    adj.N_b = 0;
    for (auto b : bits) adj.N_b += b;
    return adj;
}

namespace {

struct UserLayout {
    std::vector<std::uint32_t> bits;        // per-user message bits
    std::vector<std::uint32_t> bit_offset;  // slice of the concatenated message
    std::uint32_t total_bits = 0;
};

UserLayout make_layout(const CodeInstance& inst, const MultiUserConfig& mu) {
    UserLayout lay;
    lay.bits = mu.user_bits(inst);
    lay.bit_offset.resize(lay.bits.size());
    for (std::size_t i = 0; i < lay.bits.size(); ++i) {
        lay.bit_offset[i] = lay.total_bits;
        lay.total_bits += lay.bits[i];
    }
    return lay;
}

// Per-user bit draws in user order concatenate to the full SSE message, so the
// superposed MAC signal is the single-user codeword, bit for bit.
BitString draw_user_bits(TrialRng& rng, const UserLayout& lay) {
    BitString all(lay.total_bits);
    std::uint32_t pos = 0;
    for (std::uint32_t ub : lay.bits)
        for (std::uint32_t i = 0; i < ub; ++i, ++pos) all.set(pos, int(rng.word() >> 63));
    return all;
}

bool slice_equal(const BitString& a, const BitString& b, std::uint32_t off, std::uint32_t len) {
    for (std::uint32_t i = 0; i < len; ++i)
        if (a[off + i] != b[off + i]) return false;
    return true;
}

}  // namespace

std::vector<SimRecord> mac_simulate(const CodeInstance& base, const MultiUserConfig& mu,
                                    const DecoderSpec& dec, const std::vector<double>& ebn0_db,
                                    const SimBudget& budget, std::uint64_t seed,
                                    const SimOptions& opt) {
    if (mu.mode != MultiUserMode::Mac) throw config_error("mac_simulate requires mode mac");
    const CodeInstance inst = apply_multiuser(base, mu);
    const UserLayout lay = make_layout(inst, mu);
    const std::size_t P = mu.users.size();

    std::vector<SimRecord> out;
    out.reserve(ebn0_db.size());
    for (double pt : ebn0_db) {
        const ChannelConfig cfg{pt, inst.N_b, inst.K, inst.field()};
        const double sigma2 = cfg.sigma2_per_real_dim();
        out.push_back(run_point(
            pt, budget, seed, opt, P,
            [&](std::uint64_t t, std::vector<std::uint64_t>& user_err) -> std::uint8_t {
                TrialRng rng(seed, t);
                const BitString msg = draw_user_bits(rng, lay);
                const SparseCodeword cw = inst.encode(msg);
                const CVec y = awgn(cw.s, sigma2, inst.field(), rng);
                const BitString est = inst.decode_bits(decode_with(y, inst, dec));
                std::uint8_t any = 0;
                for (std::size_t u = 0; u < P; ++u) {
                    if (!slice_equal(est, msg, lay.bit_offset[u], lay.bits[u])) {
                        ++user_err[u];
                        any = 1;
                    }
                }
                return any;
            }));
    }
    return out;
}

namespace {

// Receiver-side view: the blocks and bits of every transmitter that reaches it.
struct ReceiverView {
    CodeInstance joint;                  // sub-instance over the active blocks
    std::vector<std::size_t> active;     // user indices, ascending
    std::vector<double> gain;            // matching `active`
};

ReceiverView make_receiver_view(const CodeInstance& inst, const MultiUserConfig& mu,
                                const UserLayout& lay, std::size_t i,
                                const Eigen::MatrixXd& gains) {
    ReceiverView v;
    CodeInstance sub = inst;
    SubBlockPartition part;
    std::vector<Constellation> cons;
    std::uint32_t nb = 0, block = 0;
    for (std::size_t j = 0; j < mu.users.size(); ++j) {
        const bool on = gains(Index(i), Index(j)) != 0.0;
        if (on) {
            v.active.push_back(j);
            v.gain.push_back(gains(Index(i), Index(j)));
            nb += lay.bits[j];
        }
        for (std::uint32_t b = 0; b < mu.users[j].subblocks; ++b, ++block) {
            if (!on) continue;
            part.sizes.push_back(inst.partition.sizes[block]);
            part.offsets.push_back(inst.partition.offsets[block]);
            cons.push_back(inst.block_constellation(block));
        }
    }
    part.unused = 0;
    sub.partition = part;
    sub.K = std::uint32_t(part.sizes.size());
    sub.constellations = ConstellationFamily::per_block(std::move(cons));
    sub.N_b = nb;
    v.joint = std::move(sub);
    return v;
}

}  // namespace

std::vector<SimRecord> interference_simulate(const CodeInstance& base, const MultiUserConfig& mu,
                                             const DecoderSpec& dec,
                                             const std::vector<double>& ebn0_db,
                                             const SimBudget& budget, std::uint64_t seed,
                                             const SimOptions& opt) {
    if (mu.mode == MultiUserMode::Mac)
        throw config_error("interference_simulate handles broadcast|interference modes");
    const CodeInstance inst = apply_multiuser(base, mu);
    const UserLayout lay = make_layout(inst, mu);
    const std::size_t P = mu.users.size();

    Eigen::MatrixXd gains = mu.gains;
    if (mu.mode == MultiUserMode::Broadcast) gains = Eigen::MatrixXd::Ones(Index(P), Index(P));

    // Per-user encoding views and per-receiver joint decoding views.
    std::vector<ReceiverView> tx, rx;
    Eigen::MatrixXd self = Eigen::MatrixXd::Identity(Index(P), Index(P));
    for (std::size_t i = 0; i < P; ++i) {
        tx.push_back(make_receiver_view(inst, mu, lay, i, self));
        rx.push_back(make_receiver_view(inst, mu, lay, i, gains));
    }

    std::vector<SimRecord> out;
    out.reserve(ebn0_db.size());
    for (double pt : ebn0_db) {
        const ChannelConfig cfg{pt, inst.N_b, inst.K, inst.field()};
        const double sigma2 = cfg.sigma2_per_real_dim();
        out.push_back(run_point(
            pt, budget, seed, opt, P,
            [&](std::uint64_t t, std::vector<std::uint64_t>& user_err) -> std::uint8_t {
                TrialRng rng(seed, t);
                const BitString msg = draw_user_bits(rng, lay);
                // per-user codewords in user order
                std::vector<CVec> s(P);
                for (std::size_t u = 0; u < P; ++u) {
                    BitString ub(lay.bits[u]);
                    for (std::uint32_t b = 0; b < lay.bits[u]; ++b)
                        ub.set(b, msg[lay.bit_offset[u] + b]);
                    s[u] = tx[u].joint.encode(ub).s;
                }
                std::uint8_t any = 0;
                for (std::size_t i = 0; i < P; ++i) {
                    CVec yi = CVec::Zero(inst.N());
                    for (std::size_t a = 0; a < rx[i].active.size(); ++a)
                        yi += rx[i].gain[a] * s[rx[i].active[a]];
                    yi = awgn(yi, sigma2, inst.field(), rng);
                    const BitString est = rx[i].joint.decode_bits(decode_with(yi, rx[i].joint, dec));
                    bool ok = true;
                    std::uint32_t pos = 0;
                    for (std::size_t a = 0; a < rx[i].active.size() && ok; ++a) {
                        const std::size_t u = rx[i].active[a];
                        for (std::uint32_t b = 0; b < lay.bits[u]; ++b)
                            if (est[pos + b] != msg[lay.bit_offset[u] + b]) {
                                ok = false;
                                break;
                            }
                        pos += lay.bits[u];
                    }
                    if (!ok) {
                        ++user_err[i];
                        any = 1;
                    }
                }
                return any;
            }));
    }
    return out;
}

}  // namespace gsparc
