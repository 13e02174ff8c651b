#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "gsparc/sim.hpp"

namespace gsparc {

struct SweepSpec {
    std::vector<double> points_db;  // normalized form

    static SweepSpec from_range(double start_db, double stop_db, double step_db);
};

struct OutputSpec {
    std::string dir = "results";
    std::string prefix = "run";
    bool gnuplot = false;
};

/// One self-describing experiment document; CLI flags only override fields.
struct ExperimentSpec {
    CodeParams code;
    DecoderSpec decoder;
    SweepSpec sweep;
    SimBudget budget;
    std::uint64_t seed = 1;
    OutputSpec output;
    std::optional<MultiUserConfig> multiuser;
};

/// Validates, fills defaults and rejects unknown keys; errors carry the field
/// path. The document layout is described in the README.
ExperimentSpec parse_spec(const nlohmann::json& doc);
ExperimentSpec parse_spec_file(const std::string& path);

/// Parses a bare code object, or the "code" section of a full document.
CodeParams parse_code_doc(const nlohmann::json& doc);

/// Normalized document: defaults explicit, sweep as a point list, keys sorted.
nlohmann::json serialize_spec(const ExperimentSpec& spec);

/// FNV-1a over the canonical serialization; stable under key reordering.
std::string spec_digest(const ExperimentSpec& spec);

/// Versioned CSV with one row per sweep point.
std::string csv_header();
std::string csv_row(const ExperimentSpec& spec, const CodeInstance& inst, const SimRecord& rec);

struct CsvRow {
    std::string scheme, dict, decoder;
    Index N = 0, L = 0;
    std::uint32_t K = 0, M = 0, T = 0;
    double ebn0_db = 0, bler = 0;
    std::uint64_t trials = 0, errors = 0, seed = 0;

    static CsvRow parse(const std::string& line);
    SimRecord to_record() const;
};

struct RunArtifacts {
    std::vector<SimRecord> records;
    nlohmann::json summary;  // code/instance facts, digest, versions
    std::string csv_path, json_path, manifest_path, gnuplot_path;
};

/// Builds the instance, runs the referenced simulation and persists CSV rows,
/// a JSON record mirror, the run manifest and optional gnuplot data. With
/// dry_run nothing executes and nothing is written; the summary still reports
/// the derived code parameters.
RunArtifacts run_experiment(const ExperimentSpec& spec, bool dry_run = false);

}  // namespace gsparc
