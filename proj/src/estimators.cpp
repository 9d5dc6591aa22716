#include "causaldo/estimators.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <functional>
#include <random>

#include "causaldo/error.hpp"
#include "causaldo/quadrature.hpp"

namespace causaldo {

std::string_view to_string(Method m) noexcept {
    switch (m) {
        case Method::ML: return "ML";
        case Method::MAP: return "MAP";
        case Method::BAYES: return "BAYES";
        case Method::MAP_MODEL: return "MAP_MODEL";
        case Method::BAYES_MODEL_AVG: return "BAYES_MODEL_AVG";
    }
    return "?";
}

Method parse_method(std::string_view text) {
    std::string key;
    for (char c : text) key.push_back(c == '-' ? '_' : static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
    if (key == "ML") return Method::ML;
    if (key == "MAP") return Method::MAP;
    if (key == "BAYES") return Method::BAYES;
    if (key == "MAP_MODEL") return Method::MAP_MODEL;
    if (key == "BAYES_MODEL_AVG" || key == "BMA") return Method::BAYES_MODEL_AVG;
    throw Error(ErrorKind::InvalidArgument, "unknown method '" + std::string(text) + "'");
}

bool uses_model_set(Method m) noexcept { return m == Method::MAP_MODEL || m == Method::BAYES_MODEL_AVG; }

void IntegrationSettings::validate() const {
    CAUSALDO_REQUIRE(quadrature_nodes_per_dim >= 1 && max_quadrature_dims >= 1 && mc_samples >= 1,
                     ErrorKind::InvalidArgument, "integration counts must be at least 1");
}

InterventionDensity estimate_plugin(const SemStructure& structure, const Dataset& data, const PriorSpec& prior,
                                    const InterventionQuery& q, PointEstimate point) {
    auto coeffs = point == PointEstimate::ML ? ml_coefficients(structure, data) : map_coefficients(structure, data, prior);
    return true_intervention_distribution(LinearGaussianSem(structure, std::move(coeffs)), q);
}

namespace {

// theta = mean + factor * z with factor * factor^T the posterior covariance.
struct PosteriorBlock {
    std::size_t node;
    Eigen::VectorXd mean;
    Eigen::MatrixXd factor;
};

std::vector<PosteriorBlock> relevant_posteriors(const SemStructure& structure, const InterventionPropagator& prop,
                                                const Dataset& data, const PriorSpec& prior) {
    std::vector<PosteriorBlock> blocks;
    for (std::size_t node : prop.relevant_nodes()) {
        auto post = node_posterior(structure, structure.diagram.nodes()[node], data, prior);
        Eigen::LLT<Eigen::MatrixXd> llt(post.precision);
        CAUSALDO_REQUIRE(llt.info() == Eigen::Success, ErrorKind::NumericalFailure, "posterior precision not positive definite");
        // precision = L L^T  =>  covariance = L^{-T} L^{-1}
        const auto k = post.precision.rows();
        Eigen::MatrixXd factor = llt.matrixU().solve(Eigen::MatrixXd::Identity(k, k));
        blocks.push_back({node, std::move(post.mean), std::move(factor)});
    }
    return blocks;
}

Coefficients zero_coefficients(const CausalDiagram& d) {
    Coefficients c(d.size());
    for (std::size_t i = 0; i < d.size(); ++i) c[i].assign(d.parent_indices(i).size(), 0.0);
    return c;
}

void place(const std::vector<PosteriorBlock>& blocks, const Eigen::VectorXd& z, Coefficients& coeffs) {
    Eigen::Index offset = 0;
    for (const auto& b : blocks) {
        const auto k = b.mean.size();
        const Eigen::VectorXd theta = b.mean + b.factor * z.segment(offset, k);
        std::copy(theta.begin(), theta.end(), coeffs[b.node].begin());
        offset += k;
    }
}

GaussianComponent checked(const GaussianComponent& c) {
    CAUSALDO_REQUIRE(std::isfinite(c.mean) && std::isfinite(c.variance) && c.variance > 0.0,
                     ErrorKind::NumericalFailure, "mixture component moments not finite");
    return c;
}

}  // namespace

std::size_t effective_dimension(const SemStructure& structure, const InterventionQuery& q) {
    InterventionPropagator prop(structure, q);
    std::size_t dims = 0;
    for (std::size_t node : prop.relevant_nodes()) dims += structure.diagram.parent_indices(node).size();
    return dims;
}

InterventionDensity estimate_bayes_fixed_model(const SemStructure& structure, const Dataset& data,
                                               const PriorSpec& prior, const InterventionQuery& q,
                                               const IntegrationSettings& settings) {
    settings.validate();
    const InterventionPropagator prop(structure, q);
    const auto blocks = relevant_posteriors(structure, prop, data, prior);
    Eigen::Index dims = 0;
    for (const auto& b : blocks) dims += b.mean.size();

    Coefficients coeffs = zero_coefficients(structure.diagram);
    std::vector<GaussianComponent> components;

    if (dims == 0) {
        components.push_back(checked(prop.evaluate(coeffs)));
    } else if (static_cast<std::size_t>(dims) <= settings.max_quadrature_dims) {
        const auto rule = gauss_hermite(settings.quadrature_nodes_per_dim);
        Eigen::VectorXd z(dims);
        // Every weight is <= 1, so a partial product below the prune threshold
        // can only shrink; those branches are skipped.
        std::function<void(Eigen::Index, double)> walk = [&](Eigen::Index dim, double weight) {
            if (dim == dims) {
                place(blocks, z, coeffs);
                auto c = checked(prop.evaluate(coeffs));
                c.weight = weight;
                components.push_back(c);
                return;
            }
            for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
                const double w = weight * rule.weights[i];
                if (w < InterventionDensity::kPruneThreshold) continue;
                z(dim) = rule.nodes[i];
                walk(dim + 1, w);
            }
        };
        walk(0, 1.0);
    } else {
        std::mt19937_64 rng(settings.mc_seed);
        std::normal_distribution<double> std_normal(0.0, 1.0);
        Eigen::VectorXd z(dims);
        components.reserve(settings.mc_samples);
        for (std::size_t s = 0; s < settings.mc_samples; ++s) {
            for (Eigen::Index j = 0; j < dims; ++j) z(j) = std_normal(rng);
            place(blocks, z, coeffs);
            auto c = checked(prop.evaluate(coeffs));
            c.weight = 1.0;
            components.push_back(c);
        }
    }
    return InterventionDensity(std::move(components));
}

InterventionDensity select_map_model(const ModelPosterior& posterior, const std::vector<InterventionDensity>& per_model) {
    CAUSALDO_REQUIRE(per_model.size() == posterior.ids.size(), ErrorKind::InvalidArgument, "one estimate per model");
    return per_model[posterior.mode()];
}

InterventionDensity average_models(const ModelPosterior& posterior, const std::vector<InterventionDensity>& per_model) {
    CAUSALDO_REQUIRE(per_model.size() == posterior.ids.size(), ErrorKind::InvalidArgument, "one estimate per model");
    return combine(per_model, posterior.weights);
}

InterventionDensity estimate_map_model(const ModelSet& models, const Dataset& data, const InterventionQuery& q,
                                       const IntegrationSettings& settings) {
    const auto post = model_posterior(models, data);
    const auto& m = models.models[post.mode()];
    return estimate_bayes_fixed_model(m.structure, data, m.prior, q, settings);
}

InterventionDensity estimate_model_averaged(const ModelSet& models, const Dataset& data, const InterventionQuery& q,
                                            const IntegrationSettings& settings) {
    const auto post = model_posterior(models, data);
    std::vector<InterventionDensity> parts;
    std::vector<double> factors;
    for (std::size_t i = 0; i < models.size(); ++i) {
        // Models with no posterior mass contribute nothing; skip the integration.
        if (post.weights[i] == 0.0) continue;
        const auto& m = models.models[i];
        parts.push_back(estimate_bayes_fixed_model(m.structure, data, m.prior, q, settings));
        factors.push_back(post.weights[i]);
    }
    return combine(parts, factors);
}

InterventionDensity estimate(const EstimatorConfig& config, const ModelSet& models, const Dataset& data,
                             const InterventionQuery& q) {
    if (uses_model_set(config.method)) {
        return config.method == Method::MAP_MODEL ? estimate_map_model(models, data, q, config.integration)
                                                  : estimate_model_averaged(models, data, q, config.integration);
    }
    CAUSALDO_REQUIRE(models.size() == 1, ErrorKind::InvalidArgument,
                     std::string(to_string(config.method)) + " needs exactly one (known) model");
    const auto& m = models.models.front();
    switch (config.method) {
        case Method::ML: return estimate_plugin(m.structure, data, m.prior, q, PointEstimate::ML);
        case Method::MAP: return estimate_plugin(m.structure, data, m.prior, q, PointEstimate::MAP);
        default: return estimate_bayes_fixed_model(m.structure, data, m.prior, q, config.integration);
    }
}

}  // namespace causaldo
