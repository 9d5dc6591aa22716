#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "causaldo/sem.hpp"

namespace causaldo {

/// Every coefficient is a priori independent Gaussian(0, 1/alpha).
struct PriorSpec {
    double alpha = 1.0;

    void validate() const;
};

/// Gaussian posterior over one node's coefficient vector (parent order).
struct NodePosterior {
    std::string node;
    Eigen::VectorXd mean;
    Eigen::MatrixXd precision;
};

struct CandidateModel {
    std::string id;
    SemStructure structure;
    PriorSpec prior;
    double prior_probability = 1.0;
};

/// Candidate diagrams with a prior over them. At least one model; unique ids;
/// prior probabilities nonnegative and summing to 1 within 1e-12.
struct ModelSet {
    std::vector<CandidateModel> models;

    void validate() const;
    std::size_t size() const noexcept { return models.size(); }
};

struct ModelPosterior {
    std::vector<std::string> ids;
    std::vector<double> weights;          // sum to 1
    std::vector<double> log_posterior;    // unnormalized: log prior + log evidence

    /// Index of the posterior mode; exact ties go to the lexicographically
    /// smallest id.
    std::size_t mode() const;
    double weight_of(const std::string& id) const;
};

/// Matrix of parent values (N x K, parent order) and the node's own column.
struct RegressionData {
    Eigen::MatrixXd design;
    Eigen::VectorXd response;
};

RegressionData regression_data(const CausalDiagram& diagram, std::size_t node, const Dataset& data);

/// precision = alpha I + Phi^T Phi / s2, mean = precision^{-1} Phi^T t / s2,
/// with s2 the node's known noise variance. N = 0 gives the prior.
NodePosterior node_posterior(const SemStructure& structure, const std::string& node, const Dataset& data,
                             const PriorSpec& prior);
/// Unit noise variance.
NodePosterior node_posterior(const CausalDiagram& diagram, const std::string& node, const Dataset& data,
                             const PriorSpec& prior);

/// Minimum-norm least squares; zero vector when there is no data.
Eigen::VectorXd ml_estimate(const CausalDiagram& diagram, const std::string& node, const Dataset& data);

/// The posterior is Gaussian, so its mode is its mean.
inline Eigen::VectorXd map_estimate(const NodePosterior& posterior) { return posterior.mean; }

/// log p(D | model) with coefficients integrated out; root nodes contribute
/// their known Gaussian log density.
double log_evidence(const SemStructure& structure, const Dataset& data, const PriorSpec& prior);

ModelPosterior model_posterior(const ModelSet& models, const Dataset& data);
/// Same normalization from precomputed log evidences (one per model).
ModelPosterior model_posterior(const ModelSet& models, const std::vector<double>& log_evidences);

/// Point estimates for every node, in the shape LinearGaussianSem expects.
Coefficients ml_coefficients(const SemStructure& structure, const Dataset& data);
Coefficients map_coefficients(const SemStructure& structure, const Dataset& data, const PriorSpec& prior);

}  // namespace causaldo
