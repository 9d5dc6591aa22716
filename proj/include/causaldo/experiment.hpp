#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "causaldo/evaluation.hpp"

namespace causaldo {

enum class ScenarioKind { G1_KNOWN, G2_KNOWN, MODEL_UNKNOWN, CUSTOM };

std::string_view to_string(ScenarioKind k) noexcept;
ScenarioKind parse_scenario_kind(std::string_view text);

struct ExperimentConfig {
    ScenarioKind scenario = ScenarioKind::G1_KNOWN;
    InterventionQuery query{"X", 1.0, "Y"};
    std::vector<std::size_t> sample_sizes{2, 3, 5, 8, 13, 21, 34, 55, 89, 144};
    std::size_t trials = 1000;
    double alpha = 1.0;
    /// One probability per candidate model; empty means uniform.
    std::vector<double> model_prior;
    /// Empty means the scenario's defaults: ML, MAP, BAYES when the diagram
    /// is known, MAP_MODEL and BAYES_MODEL_AVG otherwise.
    std::vector<Method> methods;
    std::uint64_t master_seed = 0;
    IntegrationSettings integration;
    /// CUSTOM only: candidate structures and their ids.
    std::vector<std::string> custom_ids;
    std::vector<SemStructure> custom_models;

    /// Throws InvalidArgument on an empty or non-ascending size grid, fewer
    /// than 2 trials, a bad alpha, or a model prior that does not sum to 1.
    void validate() const;
    Scenario build_scenario() const;
    /// Deduplicated, in enum order.
    std::vector<Method> resolved_methods() const;
};

struct ResultRow {
    std::string scenario;
    Method method;
    std::size_t n;
    std::size_t trial;
    double kl;
};

struct SummaryRow {
    std::string scenario;
    Method method;
    std::size_t n;
    double mean_kl;
    double stderr_kl;
    std::size_t trials;
};

/// Per (n, trial) facts shared by all methods; lets callers check pairing
/// and model identification.
struct TrialRecord {
    std::size_t n;
    std::size_t trial;
    std::string generating_model;
    double true_mean;
    double true_variance;
    double true_model_weight;   // NaN unless a model-set method ran
};

struct ResultTable {
    std::vector<ResultRow> rows;        // ordered by (method, n, trial)
    std::vector<SummaryRow> summary;    // ordered by (method, n)
    std::vector<TrialRecord> trials;    // ordered by (n, trial)
};

/// Every method sees the same (model, coefficients, data) in a given
/// (n, trial) cell. Any failure aborts the run; no partial table escapes.
ResultTable run_experiment(const ExperimentConfig& config);

/// Mean and standard error per (scenario, method, n); rows may come in any
/// order. Throws InvalidArgument if a cell has fewer than 2 trials.
std::vector<SummaryRow> summarize(std::vector<ResultRow> rows);

}  // namespace causaldo
