#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "causaldo/experiment.hpp"
#include "causaldo/inference.hpp"
#include "causaldo/sem.hpp"

namespace causaldo::io {

// All parse errors throw Error(Format); unreadable files throw Error(Io).

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view text);

/// Shortest-safe text for a double: 17 significant digits, round-trips exactly.
std::string format_double(double v);
double parse_double(std::string_view text);

/// {"nodes":[{"name":"Z","parents":[],"root_mean":0.0,"root_precision":1.0},
///           {"name":"X","parents":["Z"]}, ...]}
/// Root fields are only allowed on parentless nodes; "noise_variance" only on
/// nodes with parents. Omitted values default to N(0,1) roots and unit noise.
SemStructure parse_model_spec(std::string_view text);
SemStructure read_model_spec(const std::filesystem::path& path);
std::string model_spec_to_json(const SemStructure& structure);

/// {"coefficients":{"Z":[1.0],"Y":[1.0, 0.5]}}: one entry per node with
/// parents, values in parent order.
Coefficients parse_params(std::string_view text, const SemStructure& structure);
Coefficients read_params(const std::filesystem::path& path, const SemStructure& structure);
std::string params_to_json(const SemStructure& structure, const Coefficients& coefficients);

/// Header of column names, then one row per line.
Dataset parse_dataset_csv(std::string_view text);
Dataset read_dataset_csv(const std::filesystem::path& path);
std::string dataset_to_csv(const Dataset& data);

/// [{"w":...,"mu":...,"var":...}, ...]
std::string density_to_json(const InterventionDensity& density);
InterventionDensity parse_density_json(std::string_view text);

/// [{"node":"Y","mean":[...],"precision":[row-major ...]}, ...]
std::string posteriors_to_json(const std::vector<NodePosterior>& posteriors);
std::vector<NodePosterior> parse_posteriors_json(std::string_view text);

/// Relative model paths in a CUSTOM config resolve against `base_dir`.
ExperimentConfig parse_experiment_config(std::string_view text, const std::filesystem::path& base_dir = {});
ExperimentConfig read_experiment_config(const std::filesystem::path& path);

/// scenario,method,n,trial,kl
std::string results_to_csv(const std::vector<ResultRow>& rows);
std::vector<ResultRow> parse_results_csv(std::string_view text);
/// scenario,method,n,mean_kl,stderr
std::string summary_to_csv(const std::vector<SummaryRow>& rows);
std::vector<SummaryRow> parse_summary_csv(std::string_view text);

}  // namespace causaldo::io
