#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "causaldo/density.hpp"
#include "causaldo/estimators.hpp"
#include "causaldo/inference.hpp"

namespace causaldo {

struct GaussianMoments {
    double mean = 0.0;
    double variance = 1.0;
};

/// KL(p || q) for two Gaussians, closed form.
double kl_gaussian_gaussian(GaussianMoments p, GaussianMoments q);

/// KL(p || q) for a Gaussian truth and a mixture estimate: composite Simpson
/// over [mu_p - 10 sd_p, mu_p + 10 sd_p] with 4001 points, q floored at 1e-300.
double kl_gaussian_vs_mixture(GaussianMoments p, const InterventionDensity& q);

/// KL(p || q) between mixtures by Simpson over p's +-10 sd envelope.
/// `points` must be odd and >= 3.
double kl_mixture_vs_mixture(const InterventionDensity& p, const InterventionDensity& q, std::size_t points = 4001);

/// Total variation distance, Simpson over the union of both envelopes.
double total_variation(const InterventionDensity& p, const InterventionDensity& q, std::size_t points = 4001);

struct RiskEstimate {
    double mean_kl = 0.0;
    double stderr_kl = 0.0;   // sample standard deviation / sqrt(trials)
    std::size_t trials = 0;
};

/// Mean and standard error, summed in the given order. Needs >= 1 value;
/// a single value has stderr 0.
RiskEstimate summarize_losses(std::span<const double> losses);

/// A simulation setting: the candidate models with their prior (also the
/// distribution the generating model is drawn from), the query, and how the
/// Bayes estimators integrate.
struct Scenario {
    std::string name;
    ModelSet models;
    InterventionQuery query;
    IntegrationSettings integration;

    void validate() const;

    /// Chain X -> Z -> Y known; do(X = 1) on Y.
    static Scenario g1_known(double alpha = 1.0);
    /// Confounded Z -> X, X -> Y, Z -> Y known; do(X = 1) on Y.
    static Scenario g2_known(double alpha = 1.0);
    /// Either diagram, drawn with the given prior probabilities.
    static Scenario model_unknown(double alpha = 1.0, double prior_g1 = 0.5);
};

/// One simulated trial shared by every method.
struct TrialOutcome {
    std::size_t generating_model = 0;
    double true_mean = 0.0;
    double true_variance = 0.0;
    /// p(generating model | D); NaN when no requested method needed it.
    double true_model_weight = 0.0;
    std::vector<double> kl;   // aligned with the requested methods
};

/// Per-trial seed from (master seed, scenario name, n, trial index).
/// Independent of the method, which is what pairs the methods.
std::uint64_t trial_seed(std::uint64_t master_seed, const std::string& scenario, std::size_t n, std::size_t trial);

/// Draws the model (from the model prior), its coefficients (from that
/// model's coefficient prior) and n rows, then scores every method against
/// the exact do-distribution.
TrialOutcome run_trial(const Scenario& scenario, std::span<const Method> methods, std::size_t n, std::uint64_t seed);

/// Monte Carlo Bayes risk: mean KL loss over `trials` >= 2 paired trials.
RiskEstimate empirical_bayes_risk(const Scenario& scenario, Method method, std::size_t n, std::size_t trials,
                                  std::uint64_t master_seed);

}  // namespace causaldo
