#pragma once

// Named, config-driven experiments with schema-checked parameters, a manifest
// written before compute, and CSV or JSON tables as output.

#include "hyperwave/admissibility.hpp"
#include "hyperwave/hyperbolic_solver.hpp"
#include "hyperwave/inequality_lab.hpp"

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace hyperwave {

inline constexpr std::string_view kVersion = "0.1.0";

// Rejected configuration; maps to exit status 2.
class SchemaError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

enum class ParamType { boolean, integer, real, text };
using ParamValue = std::variant<bool, long long, double, std::string>;

struct ParamSchema {
    std::string name;
    ParamType type = ParamType::real;
    ParamValue fallback;
    std::string help;
    std::optional<double> min;  // inclusive, numeric types only
    std::optional<double> max;
    std::vector<std::string> choices;  // text only; empty accepts any
};

struct ExperimentInfo {
    std::string name;
    std::string summary;
    std::vector<std::string> anchors;  // results the experiment reproduces
    std::vector<ParamSchema> params;
};

const std::vector<ExperimentInfo>& experiment_catalog();
// Throws SchemaError for an unknown name.
const ExperimentInfo& find_experiment(std::string_view name);
// Pretty-printed catalog; byte-identical across runs.
std::string catalog_json();

enum class OutputFormat { csv, json };
OutputFormat parse_output_format(std::string_view text);

struct ExperimentSpec {
    std::string name;
    std::map<std::string, ParamValue> parameters;
    std::uint64_t seed = 0;
    std::filesystem::path output_dir = "out";
    int jobs = 1;
    OutputFormat format = OutputFormat::csv;
};

// Reads `experiment`, `seed`, `output_dir`, `jobs`, `format` and a
// `[parameters]` table. Throws SchemaError.
ExperimentSpec parse_spec(std::string_view toml_text);
ExperimentSpec load_spec(const std::filesystem::path& path);

// Parameters checked against the schema with defaults filled in.
class ParamSet {
public:
    ParamSet() = default;
    explicit ParamSet(std::map<std::string, ParamValue> values) : values_(std::move(values)) {}

    double real(const std::string& key) const;
    long long integer(const std::string& key) const;
    bool flag(const std::string& key) const;
    const std::string& text(const std::string& key) const;
    const std::map<std::string, ParamValue>& values() const { return values_; }

private:
    const ParamValue& at(const std::string& key) const;
    std::map<std::string, ParamValue> values_;
};

ParamSet resolve_parameters(const ExperimentSpec& spec);

// Tabular artifact; cells keep their type so JSON output stays typed.
using Cell = std::variant<double, long long, std::string>;
struct Table {
    std::string name;
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
};

// Writes dir/name.csv (doubles as %.17g) or dir/name.json; returns the path.
std::filesystem::path write_table(const Table& table, const std::filesystem::path& dir, OutputFormat format);

Table trajectory_table(const Trajectory& traj, std::string name = "series");
Table snapshot_table(const Trajectory& traj, std::string name = "snapshots");
Table region_table(const RegionPolygon& poly, std::string name = "region");
std::string min_sigma_json(const MinSigmaResult& result, double p, int n);
std::string lemma_report_json(const std::vector<LemmaCheckReport>& reports);

struct CheckResult {
    std::string name;
    bool passed = false;
    double value = 0.0;
    std::string limit;
};

struct RunReport {
    std::string experiment;
    int exit_code = 0;  // 0 pass, 1 failed check, 2 schema error, 3 numerical failure
    std::string message;
    std::vector<CheckResult> checks;
    std::vector<std::filesystem::path> artifacts;
    double wall_seconds = 0.0;
};

// Never throws; failures are reported through exit_code and message.
RunReport run_experiment(const ExperimentSpec& spec);

}  // namespace hyperwave
