#include "gsparc/experiment.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

namespace gsparc {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) {
    throw config_error(path + ": " + what);
}

void reject_unknown(const json& obj, const std::string& path, std::set<std::string> allowed) {
    for (const auto& [key, _] : obj.items())
        if (!allowed.count(key)) fail(path.empty() ? key : path + "." + key, "unknown key");
}

const json* get(const json& obj, const std::string& key) {
    auto it = obj.find(key);
    return it == obj.end() ? nullptr : &*it;
}

template <typename T>
T get_number(const json& obj, const std::string& path, const std::string& key, T fallback,
             bool required = false) {
    const json* v = get(obj, key);
    if (!v) {
        if (required) fail(path + "." + key, "missing required field");
        return fallback;
    }
    if (!v->is_number()) fail(path + "." + key, "must be a number");
    return v->get<T>();
}

std::string get_string(const json& obj, const std::string& path, const std::string& key,
                       const std::string& fallback, bool required = false) {
    const json* v = get(obj, key);
    if (!v) {
        if (required) fail(path + "." + key, "missing required field");
        return fallback;
    }
    if (!v->is_string()) fail(path + "." + key, "must be a string");
    return v->get<std::string>();
}

bool get_bool(const json& obj, const std::string& path, const std::string& key, bool fallback) {
    const json* v = get(obj, key);
    if (!v) return fallback;
    if (!v->is_boolean()) fail(path + "." + key, "must be a boolean");
    return v->get<bool>();
}

CodeParams parse_code(const json& j) {
    if (!j.is_object()) fail("code", "must be an object");
    reject_unknown(j, "code", {"dict", "scheme", "K", "M", "offset_qpsk"});
    const json* dict = get(j, "dict");
    if (!dict || !dict->is_object()) fail("code.dict", "missing required object");
    reject_unknown(*dict, "code.dict", {"kind", "n", "columns", "extra_identity_columns"});

    CodeParams p;
    const std::string kind = get_string(*dict, "code.dict", "kind", "", true);
    if (kind == "gold") p.kind = DictKind::Gold;
    else if (kind == "mub") p.kind = DictKind::Mub;
    else fail("code.dict.kind", "expected gold|mub");
    p.n = get_number<int>(*dict, "code.dict", "n", 0, true);
    if (const json* c = get(*dict, "columns")) {
        if (!c->is_number_unsigned()) fail("code.dict.columns", "must be a positive integer");
        p.columns = c->get<Index>();
    }
    p.extra_identity = get_number<int>(*dict, "code.dict", "extra_identity_columns", 0);

    p.scheme = scheme_from_string(get_string(j, "code", "scheme", "", true));
    p.K = get_number<std::uint32_t>(j, "code", "K", 0, true);
    p.M = get_number<std::uint32_t>(j, "code", "M", 0, true);
    p.offset_qpsk = get_bool(j, "code", "offset_qpsk", false);
    try {
        p.validate();
    } catch (const config_error& e) {
        fail("code", e.what());
    }
    return p;
}

DecoderSpec parse_decoder(const json& j) {
    if (!j.is_object()) fail("decoder", "must be an object");
    reject_unknown(j, "decoder", {"algorithm", "T"});
    DecoderSpec d;
    d.alg = decoder_alg_from_string(get_string(j, "decoder", "algorithm", "", true));
    d.T = get_number<std::uint32_t>(j, "decoder", "T", 1);
    if (d.T < 1) fail("decoder.T", "must be >= 1");
    return d;
}

SweepSpec parse_sweep(const json& j) {
    if (!j.is_object()) fail("sweep", "must be an object");
    reject_unknown(j, "sweep", {"start_db", "stop_db", "step_db", "points_db"});
    SweepSpec s;
    if (const json* pts = get(j, "points_db")) {
        if (!pts->is_array() || pts->empty()) fail("sweep.points_db", "must be a non-empty array");
        for (const auto& v : *pts) {
            if (!v.is_number()) fail("sweep.points_db", "entries must be numbers");
            s.points_db.push_back(v.get<double>());
        }
        return s;
    }
    const double start = get_number<double>(j, "sweep", "start_db", 0.0, true);
    const double stop = get_number<double>(j, "sweep", "stop_db", 0.0, true);
    const double step = get_number<double>(j, "sweep", "step_db", 1.0);
    if (step <= 0) fail("sweep.step_db", "must be > 0");
    if (stop < start) fail("sweep.stop_db", "must be >= start_db");
    return SweepSpec::from_range(start, stop, step);
}

SimBudget parse_budget(const json& j) {
    if (!j.is_object()) fail("budget", "must be an object");
    reject_unknown(j, "budget", {"max_trials", "max_errors"});
    SimBudget b;
    b.max_trials = get_number<std::uint64_t>(j, "budget", "max_trials", b.max_trials);
    b.max_errors = get_number<std::uint64_t>(j, "budget", "max_errors", b.max_errors);
    if (b.max_trials < 1) fail("budget.max_trials", "must be >= 1");
    if (b.max_errors < 1) fail("budget.max_errors", "must be >= 1");
    return b;
}

OutputSpec parse_output(const json& j) {
    if (!j.is_object()) fail("output", "must be an object");
    reject_unknown(j, "output", {"dir", "prefix", "gnuplot"});
    OutputSpec o;
    o.dir = get_string(j, "output", "dir", o.dir);
    o.prefix = get_string(j, "output", "prefix", o.prefix);
    o.gnuplot = get_bool(j, "output", "gnuplot", o.gnuplot);
    return o;
}

MultiUserConfig parse_multiuser(const json& j) {
    if (!j.is_object()) fail("multiuser", "must be an object");
    reject_unknown(j, "multiuser", {"mode", "users", "gains"});
    MultiUserConfig mu;
    mu.mode = multiuser_mode_from_string(get_string(j, "multiuser", "mode", "", true));
    const json* users = get(j, "users");
    if (!users || !users->is_array() || users->empty())
        fail("multiuser.users", "must be a non-empty array");
    for (std::size_t i = 0; i < users->size(); ++i) {
        const json& u = (*users)[i];
        const std::string path = "multiuser.users[" + std::to_string(i) + "]";
        if (!u.is_object()) fail(path, "must be an object");
        reject_unknown(u, path, {"subblocks", "M"});
        UserGroup g;
        g.subblocks = get_number<std::uint32_t>(u, path, "subblocks", 0, true);
        g.M = get_number<std::uint32_t>(u, path, "M", 0, true);
        mu.users.push_back(g);
    }
    if (const json* gains = get(j, "gains")) {
        if (!gains->is_array()) fail("multiuser.gains", "must be an array of rows");
        const auto P = Index(mu.users.size());
        mu.gains.resize(P, Index(gains->size()) ? Index((*gains)[0].size()) : 0);
        if (Index(gains->size()) != P) fail("multiuser.gains", "must have one row per user");
        for (Index r = 0; r < P; ++r) {
            const json& row = (*gains)[std::size_t(r)];
            if (!row.is_array() || Index(row.size()) != P)
                fail("multiuser.gains", "rows must have one entry per user");
            for (Index c = 0; c < P; ++c) {
                if (!row[std::size_t(c)].is_number()) fail("multiuser.gains", "entries must be numbers");
                mu.gains(r, c) = row[std::size_t(c)].get<double>();
            }
        }
    } else if (mu.mode == MultiUserMode::Interference) {
        fail("multiuser.gains", "required for mode interference");
    }
    return mu;
}

}  // namespace

SweepSpec SweepSpec::from_range(double start_db, double stop_db, double step_db) {
    SweepSpec s;
    for (double v = start_db; v <= stop_db + 1e-9; v += step_db) s.points_db.push_back(v);
    return s;
}

ExperimentSpec parse_spec(const json& doc) {
    if (!doc.is_object()) throw config_error("spec document must be a JSON object");
    reject_unknown(doc, "",
                   {"code", "decoder", "sweep", "budget", "seed", "output", "multiuser"});
    ExperimentSpec s;
    const json* code = get(doc, "code");
    if (!code) fail("code", "missing required object");
    s.code = parse_code(*code);
    const json* dec = get(doc, "decoder");
    if (!dec) fail("decoder", "missing required object");
    s.decoder = parse_decoder(*dec);
    if (const json* sweep = get(doc, "sweep")) s.sweep = parse_sweep(*sweep);
    else s.sweep = SweepSpec::from_range(0.0, 10.0, 1.0);
    if (const json* b = get(doc, "budget")) s.budget = parse_budget(*b);
    if (const json* v = get(doc, "seed")) {
        if (!v->is_number_unsigned()) fail("seed", "must be a non-negative integer");
        s.seed = v->get<std::uint64_t>();
    }
    if (const json* o = get(doc, "output")) s.output = parse_output(*o);
    if (const json* m = get(doc, "multiuser")) s.multiuser = parse_multiuser(*m);

    if (s.decoder.alg == DecoderSpec::Alg::ML_K1 && s.code.K != 1)
        fail("decoder.algorithm", "ml requires code.K = 1");
    return s;
}

CodeParams parse_code_doc(const json& doc) {
    if (doc.is_object() && doc.contains("code")) return parse_code(doc["code"]);
    return parse_code(doc);
}

ExperimentSpec parse_spec_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw config_error("cannot open spec file '" + path + "'");
    json doc;
    try {
        in >> doc;
    } catch (const json::parse_error& e) {
        throw config_error("spec file '" + path + "': " + e.what());
    }
    return parse_spec(doc);
}

json serialize_spec(const ExperimentSpec& s) {
    json dict{{"kind", s.code.kind == DictKind::Gold ? "gold" : "mub"}, {"n", s.code.n}};
    if (s.code.columns) dict["columns"] = *s.code.columns;
    if (s.code.extra_identity) dict["extra_identity_columns"] = s.code.extra_identity;
    json doc{
        {"code",
         {{"dict", dict},
          {"scheme", to_string(s.code.scheme)},
          {"K", s.code.K},
          {"M", s.code.M},
          {"offset_qpsk", s.code.offset_qpsk}}},
        {"decoder", {{"algorithm", to_string(s.decoder.alg)}, {"T", s.decoder.T}}},
        {"sweep", {{"points_db", s.sweep.points_db}}},
        {"budget", {{"max_trials", s.budget.max_trials}, {"max_errors", s.budget.max_errors}}},
        {"seed", s.seed},
        {"output",
         {{"dir", s.output.dir}, {"prefix", s.output.prefix}, {"gnuplot", s.output.gnuplot}}},
    };
    if (s.multiuser) {
        json users = json::array();
        for (const auto& u : s.multiuser->users)
            users.push_back({{"subblocks", u.subblocks}, {"M", u.M}});
        json mu{{"mode", to_string(s.multiuser->mode)}, {"users", users}};
        if (s.multiuser->gains.size() > 0) {
            json rows = json::array();
            for (Index r = 0; r < s.multiuser->gains.rows(); ++r) {
                json row = json::array();
                for (Index c = 0; c < s.multiuser->gains.cols(); ++c)
                    row.push_back(s.multiuser->gains(r, c));
                rows.push_back(row);
            }
            mu["gains"] = rows;
        }
        doc["multiuser"] = mu;
    }
    return doc;
}

std::string spec_digest(const ExperimentSpec& spec) {
    const std::string canon = serialize_spec(spec).dump();
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : canon) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string csv_header() {
    return "# gsparc csv v1\nscheme,dict,N,L,K,M,decoder,T,ebn0_db,trials,errors,bler,seed";
}

std::string csv_row(const ExperimentSpec& spec, const CodeInstance& inst, const SimRecord& rec) {
    std::ostringstream os;
    os << to_string(inst.scheme) << ',' << inst.dict->label << ',' << inst.N() << ',' << inst.L()
       << ',' << inst.K << ',' << inst.M << ',' << to_string(spec.decoder.alg) << ','
       << spec.decoder.T << ',';
    char num[64];
    std::snprintf(num, sizeof num, "%.6g", rec.ebn0_db);
    os << num << ',' << rec.trials << ',' << rec.block_errors << ',';
    std::snprintf(num, sizeof num, "%.9e", rec.bler());
    os << num << ',' << rec.seed;
    return os.str();
}

CsvRow CsvRow::parse(const std::string& line) {
    std::vector<std::string> f;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            f.push_back(cur);
            cur.clear();
        } else cur.push_back(c);
    }
    f.push_back(cur);
    if (f.size() != 13) throw config_error("csv row has " + std::to_string(f.size()) + " fields");
    CsvRow r;
    r.scheme = f[0];
    r.dict = f[1];
    r.N = std::stoll(f[2]);
    r.L = std::stoll(f[3]);
    r.K = std::uint32_t(std::stoul(f[4]));
    r.M = std::uint32_t(std::stoul(f[5]));
    r.decoder = f[6];
    r.T = std::uint32_t(std::stoul(f[7]));
    r.ebn0_db = std::stod(f[8]);
    r.trials = std::stoull(f[9]);
    r.errors = std::stoull(f[10]);
    r.bler = std::stod(f[11]);
    r.seed = std::stoull(f[12]);
    return r;
}

SimRecord CsvRow::to_record() const {
    SimRecord rec;
    rec.ebn0_db = ebn0_db;
    rec.trials = trials;
    rec.block_errors = errors;
    rec.seed = seed;
    return rec;
}

RunArtifacts run_experiment(const ExperimentSpec& spec, bool dry_run) {
    namespace fs = std::filesystem;
    const auto t0 = std::chrono::steady_clock::now();

    RunArtifacts art;
    const std::string digest = spec_digest(spec);
    json summary{{"digest", digest},
                 {"version", kVersion},
                 {"spec", serialize_spec(spec)},
                 {"dry_run", dry_run}};

    // Derived parameters are available without building any matrix.
    summary["code"] = {{"N", spec.code.derived_N()}, {"L", spec.code.derived_L()}};
    if (dry_run) {
        if (spec.code.scheme == Scheme::SSE) {
            const auto part = partition_subblocks(std::uint32_t(spec.code.derived_L()), spec.code.K);
            summary["code"]["N_b"] = sse_bit_budget(part, spec.code.M);
        } else {
            summary["code"]["N_b"] =
                sfe_bit_budget(std::uint32_t(spec.code.derived_L()), spec.code.K, spec.code.M);
        }
        art.summary = summary;
        return art;
    }

    const CodeInstance inst = make_code_instance(spec.code);
    summary["code"]["N_b"] = inst.N_b;
    summary["code"]["bpcu"] = inst.bpcu();
    summary["code"]["name"] = inst.code_name();
    summary["code"]["mu"] = inst.dict->mu;

    SimOptions opt;
    opt.config_digest = digest;
    if (spec.multiuser) {
        const auto& mu = *spec.multiuser;
        if (mu.mode == MultiUserMode::Mac)
            art.records = mac_simulate(inst, mu, spec.decoder, spec.sweep.points_db, spec.budget,
                                       spec.seed, opt);
        else
            art.records = interference_simulate(inst, mu, spec.decoder, spec.sweep.points_db,
                                                spec.budget, spec.seed, opt);
    } else {
        art.records = run_bler(inst, spec.decoder, spec.sweep.points_db, spec.budget, spec.seed, opt);
    }

    fs::create_directories(spec.output.dir);
    const std::string base = spec.output.dir + "/" + spec.output.prefix;
    art.csv_path = base + ".csv";
    art.json_path = base + "_records.json";
    art.manifest_path = base + "_manifest.json";

    const bool fresh = !fs::exists(art.csv_path);
    std::ofstream csv(art.csv_path, std::ios::app);
    if (!csv) throw std::runtime_error("cannot write " + art.csv_path);
    if (fresh) csv << csv_header() << '\n';
    for (const auto& rec : art.records) csv << csv_row(spec, inst, rec) << '\n';

    json records = json::array();
    for (const auto& rec : art.records) {
        json r{{"digest", rec.config_digest}, {"ebn0_db", rec.ebn0_db},   {"trials", rec.trials},
               {"errors", rec.block_errors},  {"bler", rec.bler()},       {"seed", rec.seed},
               {"wall_time_s", rec.wall_time_s}};
        if (!rec.per_user_errors.empty()) r["per_user_errors"] = rec.per_user_errors;
        records.push_back(r);
    }
    std::ofstream jf(art.json_path);
    if (!jf) throw std::runtime_error("cannot write " + art.json_path);
    jf << records.dump(2) << '\n';

    if (spec.output.gnuplot) {
        art.gnuplot_path = base + ".dat";
        std::ofstream dat(art.gnuplot_path);
        if (!dat) throw std::runtime_error("cannot write " + art.gnuplot_path);
        dat << "# ebn0_db bler   (" << spec_digest(spec) << ")\n";
        for (const auto& rec : art.records) dat << rec.ebn0_db << ' ' << rec.bler() << '\n';
        std::ofstream gp(base + ".gp");
        gp << "set logscale y\nset xlabel 'Eb/N0 (dB)'\nset ylabel 'BLER'\n"
           << "plot '" << art.gnuplot_path << "' using 1:2 with linespoints title '"
           << spec.decoder.label() << "'\n";
    }

    summary["wall_time_s"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
                                 .count();
    summary["records"] = art.records.size();
    std::ofstream mf(art.manifest_path);
    if (!mf) throw std::runtime_error("cannot write " + art.manifest_path);
    mf << summary.dump(2) << '\n';
    art.summary = summary;
    return art;
}

}  // namespace gsparc
