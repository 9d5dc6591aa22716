#include "causaldo/experiment.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <tuple>

#include "causaldo/error.hpp"

namespace causaldo {

std::string_view to_string(ScenarioKind k) noexcept {
    switch (k) {
        case ScenarioKind::G1_KNOWN: return "G1_KNOWN";
        case ScenarioKind::G2_KNOWN: return "G2_KNOWN";
        case ScenarioKind::MODEL_UNKNOWN: return "MODEL_UNKNOWN";
        case ScenarioKind::CUSTOM: return "CUSTOM";
    }
    return "?";
}

ScenarioKind parse_scenario_kind(std::string_view text) {
    std::string key;
    for (char c : text) key.push_back(c == '-' ? '_' : static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
    for (auto k : {ScenarioKind::G1_KNOWN, ScenarioKind::G2_KNOWN, ScenarioKind::MODEL_UNKNOWN, ScenarioKind::CUSTOM})
        if (key == to_string(k)) return k;
    throw Error(ErrorKind::InvalidArgument, "unknown scenario '" + std::string(text) + "'");
}

void ExperimentConfig::validate() const {
    CAUSALDO_REQUIRE(!sample_sizes.empty(), ErrorKind::InvalidArgument, "sample_sizes is empty");
    CAUSALDO_REQUIRE(std::is_sorted(sample_sizes.begin(), sample_sizes.end()) &&
                         std::adjacent_find(sample_sizes.begin(), sample_sizes.end()) == sample_sizes.end(),
                     ErrorKind::InvalidArgument, "sample_sizes must be strictly ascending");
    CAUSALDO_REQUIRE(trials >= 2, ErrorKind::InvalidArgument, "need at least 2 trials");
    PriorSpec{alpha}.validate();
    integration.validate();
    if (scenario == ScenarioKind::CUSTOM) {
        CAUSALDO_REQUIRE(!custom_models.empty() && custom_ids.size() == custom_models.size(), ErrorKind::InvalidArgument,
                         "CUSTOM needs one id per model file");
    }
    build_scenario().validate();
}

Scenario ExperimentConfig::build_scenario() const {
    Scenario s;
    switch (scenario) {
        case ScenarioKind::G1_KNOWN: s = Scenario::g1_known(alpha); break;
        case ScenarioKind::G2_KNOWN: s = Scenario::g2_known(alpha); break;
        case ScenarioKind::MODEL_UNKNOWN: s = Scenario::model_unknown(alpha); break;
        case ScenarioKind::CUSTOM:
            s.name = "CUSTOM";
            for (std::size_t i = 0; i < custom_models.size(); ++i)
                s.models.models.push_back({custom_ids.at(i), custom_models[i], PriorSpec{alpha}, 0.0});
            break;
    }
    const std::size_t m = s.models.size();
    if (model_prior.empty()) {
        for (auto& c : s.models.models) c.prior_probability = 1.0 / static_cast<double>(m);
    } else {
        CAUSALDO_REQUIRE(model_prior.size() == m, ErrorKind::InvalidArgument, "model_prior needs one entry per model");
        for (std::size_t i = 0; i < m; ++i) s.models.models[i].prior_probability = model_prior[i];
    }
    s.query = query;
    s.integration = integration;
    return s;
}

std::vector<Method> ExperimentConfig::resolved_methods() const {
    std::vector<Method> out = methods;
    if (out.empty()) {
        out = scenario == ScenarioKind::MODEL_UNKNOWN
                  ? std::vector<Method>{Method::MAP_MODEL, Method::BAYES_MODEL_AVG}
                  : std::vector<Method>{Method::ML, Method::MAP, Method::BAYES};
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

ResultTable run_experiment(const ExperimentConfig& config) {
    config.validate();
    const Scenario scenario = config.build_scenario();
    const auto methods = config.resolved_methods();
    const auto& models = scenario.models.models;

    // losses[method][size index][trial]
    std::vector<std::vector<std::vector<double>>> losses(
        methods.size(), std::vector<std::vector<double>>(config.sample_sizes.size(), std::vector<double>(config.trials)));
    ResultTable table;
    for (std::size_t s = 0; s < config.sample_sizes.size(); ++s) {
        const std::size_t n = config.sample_sizes[s];
        for (std::size_t t = 0; t < config.trials; ++t) {
            const auto outcome = run_trial(scenario, methods, n, trial_seed(config.master_seed, scenario.name, n, t));
            for (std::size_t m = 0; m < methods.size(); ++m) losses[m][s][t] = outcome.kl[m];
            table.trials.push_back({n, t, models[outcome.generating_model].id, outcome.true_mean, outcome.true_variance,
                                    outcome.true_model_weight});
        }
    }

    for (std::size_t m = 0; m < methods.size(); ++m) {
        for (std::size_t s = 0; s < config.sample_sizes.size(); ++s) {
            const std::size_t n = config.sample_sizes[s];
            for (std::size_t t = 0; t < config.trials; ++t)
                table.rows.push_back({scenario.name, methods[m], n, t, losses[m][s][t]});
            const auto r = summarize_losses(losses[m][s]);
            table.summary.push_back({scenario.name, methods[m], n, r.mean_kl, r.stderr_kl, r.trials});
        }
    }
    return table;
}

std::vector<SummaryRow> summarize(std::vector<ResultRow> rows) {
    auto key = [](const ResultRow& r) { return std::tie(r.scenario, r.method, r.n, r.trial); };
    std::sort(rows.begin(), rows.end(), [&](const ResultRow& a, const ResultRow& b) { return key(a) < key(b); });

    std::vector<SummaryRow> out;
    std::size_t i = 0;
    while (i < rows.size()) {
        std::size_t j = i;
        std::vector<double> kl;
        while (j < rows.size() && rows[j].scenario == rows[i].scenario && rows[j].method == rows[i].method &&
               rows[j].n == rows[i].n) {
            kl.push_back(rows[j].kl);
            ++j;
        }
        CAUSALDO_REQUIRE(kl.size() >= 2, ErrorKind::InvalidArgument, "each cell needs at least 2 trials");
        const auto r = summarize_losses(kl);
        out.push_back({rows[i].scenario, rows[i].method, rows[i].n, r.mean_kl, r.stderr_kl, r.trials});
        i = j;
    }
    return out;
}

}  // namespace causaldo
