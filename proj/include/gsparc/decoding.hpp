#pragma once

#include <cstdint>
#include <vector>

#include "gsparc/code_instance.hpp"

namespace gsparc {

struct DecodeTrace {
    struct Step {
        std::uint32_t t;
        std::uint32_t column;
        std::uint32_t symbol;
        double metric;
        double residual_norm;
    };
    std::vector<Step> steps;
};

/// Greedy match-and-decode: each iteration jointly selects the non-discarded
/// column and constellation symbol maximizing Re(c_i b^*) - |b|^2/2, subtracts
/// the detected component from the residual, and discards the column (SFE) or
/// its whole sub-block (SSE). Correlations follow the gram recursion when the
/// instance carries a gram matrix and are recomputed from the residual
/// otherwise; either way the decisions are identical. Needs no noise variance.
/// `partial` seeds the estimate with already-detected components.
/// Ties break to the lowest column index, then the lowest symbol index.
SparseCodeword mad_decode(const CVec& y, const CodeInstance& inst,
                          const SparseCodeword* partial = nullptr, DecodeTrace* trace = nullptr);

struct PmadDetail {
    std::vector<SparseCodeword> candidates;
    std::vector<double> distances;  // squared Euclidean distance to y
    std::uint32_t effective_T = 0;
    bool clamped = false;
};

/// Parallel MAD: seeds T MAD runs with the top-T first-iteration metrics over
/// distinct columns and returns the candidate closest to y (earliest path on
/// ties). T is clamped to the number of selectable columns. T=1 reduces to MAD.
SparseCodeword pmad_decode(const CVec& y, const CodeInstance& inst, std::uint32_t T,
                           PmadDetail* detail = nullptr);

/// Orthogonal matching pursuit baseline: K iterations of max-|correlation|
/// selection (same discard rule as MAD), least-squares refit on the detected
/// support via an incrementally updated orthogonal decomposition, and a final
/// quantization of the coefficients to the nearest constellation point.
SparseCodeword omp_decode(const CVec& y, const CodeInstance& inst);

/// Exhaustive minimum-distance decoder over all L*M single-component
/// codewords; the maximum-likelihood oracle for K=1 instances.
SparseCodeword ml_decode_k1(const CVec& y, const CodeInstance& inst);

struct GuaranteeReport {
    double mu = 0.0;
    double gamma = 0.0;
    std::uint32_t K = 0;
    double bound = 0.0;  // min{(1+mu)/(2mu), (1+2mu-gamma)/(2mu)}
    bool guaranteed = false;
};

/// Noiseless-recovery condition of the greedy decoder.
GuaranteeReport check_recovery_guarantee(double mu, double gamma, std::uint32_t K);

}  // namespace gsparc
