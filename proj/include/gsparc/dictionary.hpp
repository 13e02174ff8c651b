#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gsparc/core.hpp"

namespace gsparc {

enum class DictKind { Gold, Mub, Custom };

/// Column dictionary with unit-norm columns and cached mutual coherence.
struct DictionaryMatrix {
    Field field = Field::Complex;
    DictKind kind = DictKind::Custom;
    int n = 0;          // construction parameter for gold/mub
    CMat columns;       // N x L
    double mu = 0.0;    // max_{p!=q} |<a_p, a_q>|
    std::string label = "custom";

    Index N() const { return columns.rows(); }
    Index L() const { return columns.cols(); }
};

/// Gold t parameter: 1 + 2^((n+1)/2) for odd n, 1 + 2^((n+2)/2) for even n.
std::uint32_t gold_t(int n);

/// The three cross-correlation values of Gold-derived columns: {-1, -t, t-2}/N.
std::vector<double> gold_correlation_values(int n);

/// All 2^(2n)-1 unit-normalized circular shifts of the Gold family generated by
/// a preferred m-sequence pair, plus one standard basis column; N = 2^n-1,
/// L = 2^(2n). Supported n: {5, 7, 9}.
DictionaryMatrix build_gold_dictionary(int n);

/// Concatenation of the N = 2^n mutually unbiased quarter-phase bases of C^N,
/// L = N^2. Requires 2 <= n <= 9 (N <= 512).
DictionaryMatrix build_mub_dictionary(int n);

DictionaryMatrix make_custom_dictionary(CMat columns, Field field, std::string label = "custom");

/// First `count` columns; coherence is recomputed. kind becomes Custom.
DictionaryMatrix restrict_columns(const DictionaryMatrix& A, Index count);

/// Appends standard basis columns e_0..e_(count-1); coherence is recomputed.
DictionaryMatrix append_identity_columns(const DictionaryMatrix& A, int count);

/// Exact maximum over distinct column pairs of |<a_p, a_q>| (blocked Gram scan).
double coherence(const DictionaryMatrix& A);

struct GramMatrix {
    CMat entries;  // A^H A
};

inline constexpr std::size_t kDefaultGramBudget = std::size_t(1) << 30;

/// A^H A. Throws config_error when the L x L matrix would exceed max_bytes;
/// callers are expected to fall back to on-the-fly correlations.
GramMatrix gram(const DictionaryMatrix& A, std::size_t max_bytes = kDefaultGramBudget);

struct CensusEntry {
    cplx value;
    std::uint64_t count;
};

/// Distinct inner-product values (binned to `bin`) over unordered distinct
/// column pairs with both columns in [first, last). Sorted by (re, im).
std::vector<CensusEntry> correlation_census(const DictionaryMatrix& A, Index first, Index last,
                                            double bin = 1e-9);

/// Distinct matrix entry values, binned as above.
std::vector<CensusEntry> entry_census(const DictionaryMatrix& A, double bin = 1e-9);

struct MubReport {
    bool unitary_ok = false;
    double max_unitary_err = 0.0;
    bool magnitude_ok = false;
    double max_magnitude_err = 0.0;
    std::uint64_t phase_violations = 0;  // cross-basis products off the root grid
    std::string warning;                 // set when the phase grid is violated
    bool ok() const { return unitary_ok && magnitude_ok; }
};

/// Checks within-basis orthonormality, cross-basis magnitude 1/sqrt(N), and
/// membership of cross-basis phases in the 8th-root (odd n) / 4th-root (even n)
/// grid. The phase grid is a conjectured property for large N, so violations
/// produce a warning rather than an error.
MubReport validate_mub(const DictionaryMatrix& A, double tol = 1e-9);

}  // namespace gsparc
