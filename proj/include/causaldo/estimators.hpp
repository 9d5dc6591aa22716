#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "causaldo/density.hpp"
#include "causaldo/inference.hpp"
#include "causaldo/sem.hpp"

namespace causaldo {

enum class Method { ML, MAP, BAYES, MAP_MODEL, BAYES_MODEL_AVG };

std::string_view to_string(Method m) noexcept;
/// Accepts the enum spelling ("BAYES_MODEL_AVG") and the CLI spelling ("bma",
/// "map-model", ...), case-insensitively. Throws InvalidArgument.
Method parse_method(std::string_view text);
/// True for the methods that need a candidate model set rather than a known diagram.
bool uses_model_set(Method m) noexcept;

struct IntegrationSettings {
    std::size_t quadrature_nodes_per_dim = 32;
    std::size_t max_quadrature_dims = 3;
    std::size_t mc_samples = 10000;
    std::uint64_t mc_seed = 0;

    void validate() const;
};

struct EstimatorConfig {
    Method method = Method::BAYES;
    IntegrationSettings integration;
};

enum class PointEstimate { ML, MAP };

/// Substitutes the ML or MAP coefficients into the exact do-distribution.
InterventionDensity estimate_plugin(const SemStructure& structure, const Dataset& data, const PriorSpec& prior,
                                    const InterventionQuery& q, PointEstimate point);

/// Posterior-predictive intervention density for a known diagram: the
/// do-distribution averaged over the coefficient posterior.
///
/// Only coefficients that reach the target in the mutilated graph are
/// integrated over; the rest cannot change the result. With D such
/// coefficients, D <= max_quadrature_dims uses a tensor-product
/// Gauss-Hermite grid over the per-node Gaussian posteriors (one mixture
/// component per grid point); otherwise mc_samples posterior draws form an
/// equal-weight mixture.
InterventionDensity estimate_bayes_fixed_model(const SemStructure& structure, const Dataset& data,
                                               const PriorSpec& prior, const InterventionQuery& q,
                                               const IntegrationSettings& settings = {});

/// Number of coefficients estimate_bayes_fixed_model integrates over.
std::size_t effective_dimension(const SemStructure& structure, const InterventionQuery& q);

/// Fixed-model Bayes estimate under the posterior-mode diagram.
InterventionDensity estimate_map_model(const ModelSet& models, const Dataset& data, const InterventionQuery& q,
                                       const IntegrationSettings& settings = {});

/// Mixture of the per-model Bayes estimates weighted by p(m | D).
InterventionDensity estimate_model_averaged(const ModelSet& models, const Dataset& data, const InterventionQuery& q,
                                            const IntegrationSettings& settings = {});

/// Building blocks for callers that already hold the posterior and the
/// per-model estimates (the experiment harness shares them across methods).
InterventionDensity select_map_model(const ModelPosterior& posterior, const std::vector<InterventionDensity>& per_model);
InterventionDensity average_models(const ModelPosterior& posterior, const std::vector<InterventionDensity>& per_model);

/// Dispatch on config.method. ML, MAP and BAYES use the single model in
/// `models` (InvalidArgument otherwise) and ignore its prior probability.
InterventionDensity estimate(const EstimatorConfig& config, const ModelSet& models, const Dataset& data,
                             const InterventionQuery& q);

}  // namespace causaldo
