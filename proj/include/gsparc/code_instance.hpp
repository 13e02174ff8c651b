#pragma once

#include <memory>
#include <optional>
#include <string>

#include "gsparc/encoding.hpp"

namespace gsparc {

enum class Scheme { SSE, SFE };

std::string to_string(Scheme s);
Scheme scheme_from_string(const std::string& s);

/// Everything needed to instantiate a code, before any matrix is built.
struct CodeParams {
    DictKind kind = DictKind::Mub;
    int n = 6;
    std::optional<Index> columns;   // truncate the dictionary to its first columns
    int extra_identity = 0;         // standard basis columns appended after truncation
    Scheme scheme = Scheme::SSE;
    std::uint32_t K = 1;
    std::uint32_t M = 2;
    bool offset_qpsk = false;

    Index derived_N() const;
    Index derived_L() const;  // after truncation / appended columns
    void validate() const;    // throws config_error, no matrices built
};

/// A code ready for encoding and decoding: dictionary, optional gram matrix,
/// scheme structure and per-sub-block constellations.
struct CodeInstance {
    std::shared_ptr<const DictionaryMatrix> dict;
    std::shared_ptr<const GramMatrix> gram;  // null => on-the-fly correlations
    Scheme scheme = Scheme::SSE;
    std::uint32_t K = 1;
    std::uint32_t M = 2;
    bool offset_qpsk = false;
    SubBlockPartition partition;  // SSE only
    ConstellationFamily constellations;
    std::uint32_t N_b = 0;

    Field field() const { return dict->field; }
    Index N() const { return dict->N(); }
    Index L() const { return dict->L(); }
    double bpcu() const;
    std::string code_name() const;  // "(128,68)" style, in real channel uses

    SparseCodeword encode(const BitString& bits) const;
    BitString decode_bits(const SparseCodeword& cw) const;
    const Constellation& block_constellation(std::uint32_t block) const {
        return constellations.at(block);
    }
};

CodeInstance make_code_instance(const CodeParams& params,
                                std::size_t gram_budget = kDefaultGramBudget);

}  // namespace gsparc
