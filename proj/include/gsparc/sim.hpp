#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gsparc/channel.hpp"
#include "gsparc/code_instance.hpp"
#include "gsparc/decoding.hpp"

namespace gsparc {

struct DecoderSpec {
    enum class Alg { MAD, PMAD, OMP, ML_K1 };
    Alg alg = Alg::MAD;
    std::uint32_t T = 1;  // PMAD paths

    std::string label() const;
};

DecoderSpec::Alg decoder_alg_from_string(const std::string& s);
std::string to_string(DecoderSpec::Alg a);

/// Dispatch to the selected decoder.
SparseCodeword decode_with(const CVec& y, const CodeInstance& inst, const DecoderSpec& dec);

struct SimBudget {
    std::uint64_t max_trials = 10000;
    std::uint64_t max_errors = 200;  // early stop checked at chunk boundaries
};

/// One Monte-Carlo sweep point. A block error is any message-bit mismatch.
struct SimRecord {
    std::string config_digest;
    double ebn0_db = 0.0;
    std::uint64_t trials = 0;
    std::uint64_t block_errors = 0;             // multi-user: any user in error
    std::vector<std::uint64_t> per_user_errors; // multi-user only
    std::uint64_t seed = 0;
    double wall_time_s = 0.0;
    std::vector<std::uint8_t> error_flags;      // per-trial, kept on request

    double bler() const { return trials ? double(block_errors) / double(trials) : 0.0; }
};

struct SimOptions {
    bool keep_flags = false;
    std::string config_digest;
};

/// Monte-Carlo BLER sweep. Per trial: draw N_b uniform bits, encode, add AWGN,
/// decode, compare bits. Trial t uses the random stream (seed, t) and the same
/// standard normals across sweep points, so results depend only on (seed,
/// spec). Trials run in fixed-size chunks; early stopping triggers at chunk
/// boundaries, keeping counts independent of thread scheduling.
std::vector<SimRecord> run_bler(const CodeInstance& inst, const DecoderSpec& dec,
                                const std::vector<double>& ebn0_db, const SimBudget& budget,
                                std::uint64_t seed, const SimOptions& opt = {});

enum class MultiUserMode { Mac, Broadcast, Interference };

std::string to_string(MultiUserMode m);
MultiUserMode multiuser_mode_from_string(const std::string& s);

struct UserGroup {
    std::uint32_t subblocks = 1;
    std::uint32_t M = 2;
};

/// P <= K users owning contiguous runs of sub-blocks in order. Gains are used
/// by the interference mode only (h_ii = 1); broadcast behaves like
/// interference with all-ones gains (every receiver sees the summed codeword).
struct MultiUserConfig {
    MultiUserMode mode = MultiUserMode::Mac;
    std::vector<UserGroup> users;
    Eigen::MatrixXd gains;

    std::uint32_t user_count() const { return static_cast<std::uint32_t>(users.size()); }
    void validate(const CodeInstance& inst) const;
    /// Per-user bit budgets K_i log2(M_i) + sum log2(L_(i,k)).
    std::vector<std::uint32_t> user_bits(const CodeInstance& inst) const;
};

/// Rebuilds the instance's constellation family and bit budget from the
/// per-user alphabet sizes (a no-op when every user matches the base M).
CodeInstance apply_multiuser(const CodeInstance& inst, const MultiUserConfig& mu);

/// Each user encodes its own bits over its sub-blocks; the joint receiver sees
/// the superposition plus noise and decodes all users at once. Per-user error
/// counts land in per_user_errors; block_errors counts the any-user event.
/// Drawing order (user bits in user order, then noise) makes the received
/// signal bit-exactly equal to the single-user run under a shared seed.
std::vector<SimRecord> mac_simulate(const CodeInstance& inst, const MultiUserConfig& mu,
                                    const DecoderSpec& dec, const std::vector<double>& ebn0_db,
                                    const SimBudget& budget, std::uint64_t seed,
                                    const SimOptions& opt = {});

/// Receiver i observes s_i + sum_j h_ij s_j + n_i and jointly decodes every
/// transmitter that reaches it (h_ij != 0); success means all of them decode
/// correctly. per_user_errors[i] counts receiver-i failures.
std::vector<SimRecord> interference_simulate(const CodeInstance& inst, const MultiUserConfig& mu,
                                             const DecoderSpec& dec,
                                             const std::vector<double>& ebn0_db,
                                             const SimBudget& budget, std::uint64_t seed,
                                             const SimOptions& opt = {});

}  // namespace gsparc
