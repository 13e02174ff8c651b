#include "gsparc/code_instance.hpp"

#include <bit>

#include "gsparc/combinatorics.hpp"

namespace gsparc {

std::string to_string(Scheme s) { return s == Scheme::SSE ? "sse" : "sfe"; }

Scheme scheme_from_string(const std::string& s) {
    if (s == "sse") return Scheme::SSE;
    if (s == "sfe") return Scheme::SFE;
    throw config_error("unknown scheme '" + s + "' (expected sse|sfe)");
}

Index CodeParams::derived_N() const {
    switch (kind) {
        case DictKind::Gold: return (Index(1) << n) - 1;
        case DictKind::Mub: return Index(1) << n;
        default: throw config_error("custom dictionaries have no derived size");
    }
}

Index CodeParams::derived_L() const {
    Index L = kind == DictKind::Gold ? Index(1) << (2 * n) : (Index(1) << n) * (Index(1) << n);
    if (columns) L = *columns;
    return L + extra_identity;
}

void CodeParams::validate() const {
    if (kind == DictKind::Gold && n != 5 && n != 7 && n != 9)
        throw config_error("gold dictionary: supported n are {5, 7, 9}");
    if (kind == DictKind::Mub && (n < 2 || n > 9))
        throw config_error("mub dictionary: need 2 <= n <= 9");
    if (kind == DictKind::Custom) throw config_error("custom dictionaries need explicit columns");
    const Index base_L = kind == DictKind::Gold ? Index(1) << (2 * n) : derived_N() * derived_N();
    if (columns && (*columns < 1 || *columns > base_L))
        throw config_error("columns must lie in [1, " + std::to_string(base_L) + "]");
    if (extra_identity < 0 || Index(extra_identity) > derived_N())
        throw config_error("extra_identity_columns must lie in [0, N]");
    if (M == 0 || !std::has_single_bit(M)) throw config_error("M must be a power of two (or 1)");
    if (K < 1) throw config_error("K must be >= 1");
    if (offset_qpsk && scheme != Scheme::SSE) throw config_error("offset_qpsk requires scheme sse");
    if (offset_qpsk && M != 4) throw config_error("offset_qpsk requires M = 4");
    const Index L = derived_L();
    if (Index(K) > L) throw config_error("K exceeds the number of dictionary columns");
    if (scheme == Scheme::SSE && Index(K) > derived_N())
        throw config_error("sse requires K <= N");
}

double CodeInstance::bpcu() const {
    const double uses = field() == Field::Real ? double(N()) : 2.0 * double(N());
    return double(N_b) / uses;
}

std::string CodeInstance::code_name() const {
    const Index uses = field() == Field::Real ? N() : 2 * N();
    return "(" + std::to_string(uses) + "," + std::to_string(N_b) + ")";
}

SparseCodeword CodeInstance::encode(const BitString& bits) const {
    if (scheme == Scheme::SSE) return sse_encode(bits, *dict, partition, constellations);
    return sfe_encode(bits, *dict, K, constellations.at(0));
}

BitString CodeInstance::decode_bits(const SparseCodeword& cw) const {
    if (scheme == Scheme::SSE) return sse_decode_bits(cw, partition, constellations);
    return sfe_decode_bits(cw, std::uint32_t(L()), K, constellations.at(0));
}

CodeInstance make_code_instance(const CodeParams& params, std::size_t gram_budget) {
    params.validate();

    auto base = params.kind == DictKind::Gold ? build_gold_dictionary(params.n)
                                              : build_mub_dictionary(params.n);
    if (params.columns) base = restrict_columns(base, *params.columns);
    if (params.extra_identity > 0) base = append_identity_columns(base, params.extra_identity);

    CodeInstance inst;
    inst.dict = std::make_shared<DictionaryMatrix>(std::move(base));
    inst.scheme = params.scheme;
    inst.K = params.K;
    inst.M = params.M;
    inst.offset_qpsk = params.offset_qpsk;

    if (params.scheme == Scheme::SSE) {
        inst.partition = partition_subblocks(std::uint32_t(inst.dict->L()), params.K);
        inst.constellations = params.offset_qpsk
                                  ? ConstellationFamily::per_block(make_offset_qpsk(params.K))
                                  : ConstellationFamily::uniform(make_psk(params.M));
        inst.N_b = sse_bit_budget(inst.partition, params.M);
    } else {
        inst.constellations = ConstellationFamily::uniform(make_psk(params.M));
        inst.N_b = sfe_bit_budget(std::uint32_t(inst.dict->L()), params.K, params.M);
    }
    if (inst.N_b == 0) throw config_error("code carries zero information bits");

    const std::size_t need = std::size_t(inst.dict->L()) * std::size_t(inst.dict->L()) * sizeof(cplx);
    if (need <= gram_budget)
        inst.gram = std::make_shared<GramMatrix>(gram(*inst.dict, gram_budget));
    return inst;
}

}  // namespace gsparc
