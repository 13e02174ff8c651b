#include <cstdlib>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "gsparc/experiment.hpp"

using nlohmann::json;
using namespace gsparc;

namespace {

json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw config_error("cannot open '" + path + "'");
    json doc;
    try {
        in >> doc;
    } catch (const json::parse_error& e) {
        throw config_error(std::string("'") + path + "': " + e.what());
    }
    return doc;
}

json census_json(const std::vector<CensusEntry>& census) {
    json out = json::array();
    for (const auto& e : census)
        out.push_back({{"re", e.value.real()}, {"im", e.value.imag()}, {"count", e.count}});
    return out;
}

json codeword_json(const CodeInstance& inst, const SparseCodeword& cw) {
    json sym = json::array();
    for (auto v : cw.symbols) sym.push_back({v.real(), v.imag()});
    return {{"support", cw.support}, {"symbol_indices", cw.symbol_idx}, {"symbols", sym}};
}

json vector_json(const CVec& v, Field field) {
    json out = json::array();
    for (Index i = 0; i < v.size(); ++i) {
        if (field == Field::Real) out.push_back(v[i].real());
        else out.push_back({v[i].real(), v[i].imag()});
    }
    return out;
}

CVec vector_from_json(const json& arr, Index expect) {
    if (!arr.is_array() || Index(arr.size()) != expect)
        throw config_error("observation must be an array of length " + std::to_string(expect));
    CVec v(expect);
    for (Index i = 0; i < expect; ++i) {
        const json& e = arr[std::size_t(i)];
        if (e.is_number()) v[i] = cplx(e.get<double>(), 0.0);
        else if (e.is_array() && e.size() == 2)
            v[i] = cplx(e[0].get<double>(), e[1].get<double>());
        else throw config_error("observation entries must be numbers or [re, im] pairs");
    }
    return v;
}

int cmd_dict(const std::string& kind, int n, Index columns, int extra_identity,
             const std::string& dump_path, bool census) {
    CodeParams p;
    p.kind = kind == "gold" ? DictKind::Gold : DictKind::Mub;
    if (kind != "gold" && kind != "mub") throw config_error("dict kind must be gold|mub");
    p.n = n;
    DictionaryMatrix A = p.kind == DictKind::Gold ? build_gold_dictionary(n)
                                                  : build_mub_dictionary(n);
    if (columns > 0) A = restrict_columns(A, columns);
    if (extra_identity > 0) A = append_identity_columns(A, extra_identity);

    json out{{"label", A.label},       {"field", to_string(A.field)}, {"N", A.N()},
             {"L", A.L()},             {"mu", A.mu},                  {"entry_alphabet",
                                                                       census_json(entry_census(A))}};
    if (census) out["correlation_census"] = census_json(correlation_census(A, 0, A.L()));
    if (A.kind == DictKind::Mub) {
        const MubReport rep = validate_mub(A);
        out["mub_check"] = {{"unitary_ok", rep.unitary_ok},
                            {"magnitude_ok", rep.magnitude_ok},
                            {"phase_violations", rep.phase_violations}};
        if (!rep.warning.empty()) out["mub_check"]["warning"] = rep.warning;
    }
    if (!dump_path.empty()) {
        // row-major float64; complex entries as little-endian (re, im) pairs
        std::ofstream bin(dump_path, std::ios::binary);
        if (!bin) throw std::runtime_error("cannot write " + dump_path);
        for (Index r = 0; r < A.N(); ++r)
            for (Index c = 0; c < A.L(); ++c) {
                const double re = A.columns(r, c).real(), im = A.columns(r, c).imag();
                bin.write(reinterpret_cast<const char*>(&re), sizeof re);
                if (A.field == Field::Complex)
                    bin.write(reinterpret_cast<const char*>(&im), sizeof im);
            }
        out["dump"] = dump_path;
    }
    std::cout << out.dump(2) << '\n';
    return 0;
}

int cmd_encode(const std::string& spec_path, const std::string& hex, bool emit_codeword) {
    const CodeParams p = parse_code_doc(load_json(spec_path));
    const CodeInstance inst = make_code_instance(p);
    const BitString bits = BitString::from_hex(hex, inst.N_b);
    const SparseCodeword cw = inst.encode(bits);
    json out = codeword_json(inst, cw);
    out["bits"] = bits.to_hex();
    out["N_b"] = inst.N_b;
    if (emit_codeword) out["y"] = vector_json(cw.s, inst.field());
    std::cout << out.dump(2) << '\n';
    return 0;
}

int cmd_decode_bits(const std::string& spec_path, std::vector<std::uint32_t> support,
                    std::vector<std::uint32_t> symbols) {
    const CodeParams p = parse_code_doc(load_json(spec_path));
    const CodeInstance inst = make_code_instance(p);
    if (symbols.empty()) symbols.assign(support.size(), 0);
    if (support.size() != symbols.size())
        throw config_error("--support and --symbols must have the same length");
    SparseCodeword cw;
    cw.support = std::move(support);
    cw.symbol_idx = std::move(symbols);
    cw.symbols.resize(cw.support.size());
    const BitString bits = inst.decode_bits(cw);
    std::cout << json{{"bits", bits.to_hex()}, {"N_b", inst.N_b}}.dump(2) << '\n';
    return 0;
}

int cmd_decode(const std::string& spec_path, const std::string& obs_path,
               const std::string& algorithm, std::uint32_t T, bool trace) {
    const CodeParams p = parse_code_doc(load_json(spec_path));
    const CodeInstance inst = make_code_instance(p);
    const json obs = load_json(obs_path);
    if (!obs.contains("y")) throw config_error("observation file needs a \"y\" array");
    const CVec y = vector_from_json(obs["y"], inst.N());

    DecoderSpec dec;
    dec.alg = decoder_alg_from_string(algorithm);
    dec.T = T;
    json out;
    if (dec.alg == DecoderSpec::Alg::MAD && trace) {
        DecodeTrace tr;
        const SparseCodeword est = mad_decode(y, inst, nullptr, &tr);
        out = codeword_json(inst, est);
        out["bits"] = inst.decode_bits(est).to_hex();
        json steps = json::array();
        for (const auto& s : tr.steps)
            steps.push_back({{"t", s.t},
                             {"column", s.column},
                             {"symbol_index", s.symbol},
                             {"metric", s.metric},
                             {"residual_norm", s.residual_norm}});
        out["trace"] = steps;
    } else {
        const SparseCodeword est = decode_with(y, inst, dec);
        out = codeword_json(inst, est);
        out["bits"] = inst.decode_bits(est).to_hex();
        if (trace) out["trace"] = json::array();  // only the plain MAD path is traced
    }
    out["decoder"] = dec.label();
    std::cout << out.dump(2) << '\n';
    return 0;
}

int cmd_run(const std::string& spec_path, const std::string& mode, std::uint64_t seed,
            bool seed_set, const std::string& out_dir, bool dry_run, bool gnuplot) {
    ExperimentSpec spec = parse_spec_file(spec_path);
    if (seed_set) spec.seed = seed;
    if (!out_dir.empty()) spec.output.dir = out_dir;
    if (gnuplot) spec.output.gnuplot = true;

    if (mode == "bler" && spec.multiuser)
        throw config_error("bler runs single-user specs; use mac/interference");
    if (mode == "mac" &&
        (!spec.multiuser || spec.multiuser->mode != MultiUserMode::Mac))
        throw config_error("mac requires multiuser.mode = mac");
    if (mode == "interference" &&
        (!spec.multiuser || spec.multiuser->mode == MultiUserMode::Mac))
        throw config_error("interference requires multiuser.mode = broadcast|interference");

    const RunArtifacts art = run_experiment(spec, dry_run);
    json out = art.summary;
    if (!dry_run) {
        json recs = json::array();
        for (const auto& r : art.records)
            recs.push_back({{"ebn0_db", r.ebn0_db},
                            {"trials", r.trials},
                            {"errors", r.block_errors},
                            {"bler", r.bler()}});
        out["results"] = recs;
        out["csv"] = art.csv_path;
    }
    std::cout << out.dump(2) << '\n';
    return 0;
}

int cmd_guarantee(const std::string& spec_path, double mu, double gamma, std::uint32_t K) {
    if (!spec_path.empty()) {
        const CodeParams p = parse_code_doc(load_json(spec_path));
        const CodeInstance inst = make_code_instance(p);
        mu = inst.dict->mu;
        gamma = inst.block_constellation(0).gamma;
        K = inst.K;
    }
    const GuaranteeReport rep = check_recovery_guarantee(mu, gamma, K);
    std::cout << json{{"mu", rep.mu},
                      {"gamma", rep.gamma},
                      {"K", rep.K},
                      {"bound", rep.bound},
                      {"guaranteed", rep.guaranteed}}
                     .dump(2)
              << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    if (const char* threads = std::getenv("GSPARC_THREADS")) {
#ifdef _OPENMP
        const int t = std::atoi(threads);
        if (t > 0) omp_set_num_threads(t);
#else
        (void)threads;
#endif
    }

    CLI::App app{"GSPARC: sparse regression codes over deterministic dictionaries"};
    app.require_subcommand(1);

    // dict
    auto* dict = app.add_subcommand("dict", "construct a dictionary and report its structure");
    std::string kind = "mub", dump_path;
    int n = 6, extra_identity = 0;
    Index columns = 0;
    bool census = true;
    dict->add_option("--kind", kind, "gold|mub")->required();
    dict->add_option("--n", n, "size parameter")->required();
    dict->add_option("--columns", columns, "truncate to the first columns");
    dict->add_option("--extra-identity", extra_identity, "append standard basis columns");
    dict->add_option("--dump", dump_path, "binary matrix dump path");
    dict->add_flag("--census,!--no-census", census, "emit the correlation value census");

    // encode / decode-bits / decode
    auto* enc = app.add_subcommand("encode", "map message bits to a sparse codeword");
    std::string spec_path, hex;
    bool emit_codeword = false;
    enc->add_option("--spec", spec_path, "code instance JSON")->required();
    enc->add_option("--bits", hex, "message bits as hex")->required();
    enc->add_flag("--emit-codeword", emit_codeword, "include the codeword samples");

    auto* dbits = app.add_subcommand("decode-bits", "recover bits from support and symbols");
    std::string dbits_spec;
    std::vector<std::uint32_t> support, symbols;
    dbits->add_option("--spec", dbits_spec, "code instance JSON")->required();
    dbits->add_option("--support", support, "active column indices")->required()->delimiter(',');
    dbits->add_option("--symbols", symbols, "constellation indices")->delimiter(',');

    auto* dec = app.add_subcommand("decode", "decode an observation vector");
    std::string dec_spec, obs_path, algorithm = "mad";
    std::uint32_t T = 16;
    bool trace = false;
    dec->add_option("--spec", dec_spec, "code instance JSON")->required();
    dec->add_option("--obs", obs_path, "observation JSON with a \"y\" array")->required();
    dec->add_option("--decoder", algorithm, "mad|pmad|omp|ml");
    dec->add_option("--T", T, "parallel paths for pmad");
    dec->add_flag("--trace", trace, "emit the per-iteration trace");

    // simulation runners
    std::string run_spec, out_dir;
    std::uint64_t seed = 0;
    bool dry_run = false, gnuplot = false;
    auto add_run_opts = [&](CLI::App* cmd) {
        cmd->add_option("--spec", run_spec, "experiment JSON document")->required();
        cmd->add_option("--seed", seed, "override the document seed");
        cmd->add_option("--out", out_dir, "override the output directory");
        cmd->add_flag("--dry-run", dry_run, "validate without executing");
        cmd->add_flag("--gnuplot", gnuplot, "also write gnuplot data");
    };
    auto* bler = app.add_subcommand("bler", "single-user BLER sweep");
    auto* mac = app.add_subcommand("mac", "multiple-access BLER sweep");
    auto* intf = app.add_subcommand("interference", "broadcast/interference BLER sweep");
    add_run_opts(bler);
    add_run_opts(mac);
    add_run_opts(intf);

    auto* guar = app.add_subcommand("guarantee", "noiseless-recovery guarantee check");
    std::string guar_spec;
    double mu = 0.125, gamma = 0.0;
    std::uint32_t guar_K = 1;
    guar->add_option("--spec", guar_spec, "code instance JSON (overrides mu/gamma/K)");
    guar->add_option("--mu", mu, "dictionary coherence");
    guar->add_option("--gamma", gamma, "constellation coherence");
    guar->add_option("--K", guar_K, "sparsity");

    CLI11_PARSE(app, argc, argv);

    try {
        if (dict->parsed()) return cmd_dict(kind, n, columns, extra_identity, dump_path, census);
        if (enc->parsed()) return cmd_encode(spec_path, hex, emit_codeword);
        if (dbits->parsed()) return cmd_decode_bits(dbits_spec, support, symbols);
        if (dec->parsed()) return cmd_decode(dec_spec, obs_path, algorithm, T, trace);
        if (bler->parsed())
            return cmd_run(run_spec, "bler", seed, bler->count("--seed") > 0, out_dir, dry_run,
                           gnuplot);
        if (mac->parsed())
            return cmd_run(run_spec, "mac", seed, mac->count("--seed") > 0, out_dir, dry_run,
                           gnuplot);
        if (intf->parsed())
            return cmd_run(run_spec, "interference", seed, intf->count("--seed") > 0, out_dir,
                           dry_run, gnuplot);
        if (guar->parsed()) return cmd_guarantee(guar_spec, mu, gamma, guar_K);
    } catch (const config_error& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    }
    return 0;
}
