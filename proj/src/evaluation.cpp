#include "causaldo/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <random>

#include "causaldo/error.hpp"

namespace causaldo {

namespace {

constexpr double kDensityFloor = 1e-300;
constexpr std::size_t kKlPoints = 4001;
constexpr double kHalfWidthSd = 10.0;

std::vector<double> linspace(double lo, double hi, std::size_t points) {
    CAUSALDO_REQUIRE(points >= 3 && points % 2 == 1, ErrorKind::InvalidArgument, "Simpson needs an odd point count >= 3");
    std::vector<double> ys(points);
    const double h = (hi - lo) / static_cast<double>(points - 1);
    for (std::size_t i = 0; i < points; ++i) ys[i] = lo + h * static_cast<double>(i);
    return ys;
}

double simpson(std::span<const double> f, double h) {
    double s = f.front() + f.back();
    for (std::size_t i = 1; i + 1 < f.size(); ++i) s += (i % 2 == 1 ? 4.0 : 2.0) * f[i];
    return s * h / 3.0;
}

std::pair<double, double> envelope(const InterventionDensity& d) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (const auto& c : d.components()) {
        const double sd = std::sqrt(c.variance);
        lo = std::min(lo, c.mean - kHalfWidthSd * sd);
        hi = std::max(hi, c.mean + kHalfWidthSd * sd);
    }
    return {lo, hi};
}

double finite_or_throw(double v) {
    CAUSALDO_REQUIRE(std::isfinite(v), ErrorKind::NonFiniteResult, "KL integral is not finite");
    return v;
}

}  // namespace

double kl_gaussian_gaussian(GaussianMoments p, GaussianMoments q) {
    CAUSALDO_REQUIRE(p.variance > 0.0 && q.variance > 0.0, ErrorKind::InvalidArgument, "variances must be positive");
    const double d = p.mean - q.mean;
    return 0.5 * std::log(q.variance / p.variance) + (p.variance + d * d) / (2.0 * q.variance) - 0.5;
}

double kl_gaussian_vs_mixture(GaussianMoments p, const InterventionDensity& q) {
    CAUSALDO_REQUIRE(p.variance > 0.0, ErrorKind::InvalidArgument, "variance must be positive");
    const double sd = std::sqrt(p.variance);
    const auto ys = linspace(p.mean - kHalfWidthSd * sd, p.mean + kHalfWidthSd * sd, kKlPoints);
    const auto qs = q.pdf(ys);
    const double log_norm = -0.5 * std::log(2.0 * std::numbers::pi * p.variance);
    std::vector<double> f(ys.size());
    for (std::size_t i = 0; i < ys.size(); ++i) {
        const double d = ys[i] - p.mean;
        const double log_p = log_norm - 0.5 * d * d / p.variance;
        f[i] = std::exp(log_p) * (log_p - std::log(std::max(qs[i], kDensityFloor)));
    }
    return finite_or_throw(simpson(f, ys[1] - ys[0]));
}

double kl_mixture_vs_mixture(const InterventionDensity& p, const InterventionDensity& q, std::size_t points) {
    const auto [lo, hi] = envelope(p);
    const auto ys = linspace(lo, hi, points);
    const auto ps = p.pdf(ys);
    const auto qs = q.pdf(ys);
    std::vector<double> f(ys.size(), 0.0);
    for (std::size_t i = 0; i < ys.size(); ++i) {
        if (ps[i] <= 0.0) continue;
        f[i] = ps[i] * (std::log(std::max(ps[i], kDensityFloor)) - std::log(std::max(qs[i], kDensityFloor)));
    }
    return finite_or_throw(simpson(f, ys[1] - ys[0]));
}

double total_variation(const InterventionDensity& p, const InterventionDensity& q, std::size_t points) {
    const auto [plo, phi] = envelope(p);
    const auto [qlo, qhi] = envelope(q);
    const auto ys = linspace(std::min(plo, qlo), std::max(phi, qhi), points);
    const auto ps = p.pdf(ys);
    const auto qs = q.pdf(ys);
    std::vector<double> f(ys.size());
    for (std::size_t i = 0; i < ys.size(); ++i) f[i] = std::abs(ps[i] - qs[i]);
    return 0.5 * simpson(f, ys[1] - ys[0]);
}

RiskEstimate summarize_losses(std::span<const double> losses) {
    CAUSALDO_REQUIRE(!losses.empty(), ErrorKind::EmptyInput, "no losses to summarize");
    const double n = static_cast<double>(losses.size());
    double sum = 0.0;
    for (double v : losses) sum += v;
    const double mean = sum / n;
    double ss = 0.0;
    for (double v : losses) ss += (v - mean) * (v - mean);
    const auto [lo, hi] = std::minmax_element(losses.begin(), losses.end());
    const double se = losses.size() > 1 && *lo != *hi ? std::sqrt(ss / (n - 1.0)) / std::sqrt(n) : 0.0;
    return {mean, se, losses.size()};
}

void Scenario::validate() const {
    models.validate();
    integration.validate();
    for (const auto& m : models.models) InterventionPropagator(m.structure, query);
}

namespace {

CandidateModel candidate(std::string id, CausalDiagram d, double alpha, double p) {
    return {std::move(id), SemStructure::with_defaults(std::move(d)), PriorSpec{alpha}, p};
}

}  // namespace

Scenario Scenario::g1_known(double alpha) {
    return {"G1_KNOWN", ModelSet{{candidate("G1", chain_diagram(), alpha, 1.0)}}, {"X", 1.0, "Y"}, {}};
}

Scenario Scenario::g2_known(double alpha) {
    return {"G2_KNOWN", ModelSet{{candidate("G2", confounded_diagram(), alpha, 1.0)}}, {"X", 1.0, "Y"}, {}};
}

Scenario Scenario::model_unknown(double alpha, double prior_g1) {
    return {"MODEL_UNKNOWN",
            ModelSet{{candidate("G1", chain_diagram(), alpha, prior_g1),
                      candidate("G2", confounded_diagram(), alpha, 1.0 - prior_g1)}},
            {"X", 1.0, "Y"},
            {}};
}

std::uint64_t trial_seed(std::uint64_t master_seed, const std::string& scenario, std::size_t n, std::size_t trial) {
    // FNV-1a over the scenario name, then splitmix64 finalizers to mix in the rest.
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : scenario) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    auto mix = [](std::uint64_t z) {
        z += 0x9e3779b97f4a7c15ULL;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    };
    std::uint64_t s = mix(master_seed);
    s = mix(s ^ h);
    s = mix(s ^ static_cast<std::uint64_t>(n));
    return mix(s ^ static_cast<std::uint64_t>(trial));
}

TrialOutcome run_trial(const Scenario& scenario, std::span<const Method> methods, std::size_t n, std::uint64_t seed) {
    const auto& models = scenario.models.models;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uniform(0.0, 1.0);
    std::normal_distribution<double> std_normal(0.0, 1.0);

    TrialOutcome out;
    const double u = uniform(rng);
    double acc = 0.0;
    out.generating_model = models.size() - 1;
    for (std::size_t i = 0; i < models.size(); ++i) {
        acc += models[i].prior_probability;
        if (u < acc) {
            out.generating_model = i;
            break;
        }
    }
    // Guard against rounding leaving u >= acc on a zero-prior last model.
    while (models[out.generating_model].prior_probability == 0.0 && out.generating_model > 0) --out.generating_model;

    const auto& truth = models[out.generating_model];
    const auto& d = truth.structure.diagram;
    const double prior_sd = 1.0 / std::sqrt(truth.prior.alpha);
    Coefficients theta(d.size());
    for (std::size_t i = 0; i < d.size(); ++i)
        for (std::size_t j = 0; j < d.parent_indices(i).size(); ++j) theta[i].push_back(prior_sd * std_normal(rng));
    const LinearGaussianSem sem(truth.structure, std::move(theta));
    const std::uint64_t data_seed = rng();
    const std::uint64_t mc_seed = rng();

    const auto true_density = true_intervention_distribution(sem, scenario.query);
    const GaussianMoments p{true_density.mean(), true_density.variance()};
    out.true_mean = p.mean;
    out.true_variance = p.variance;
    out.true_model_weight = std::numeric_limits<double>::quiet_NaN();

    const Dataset data = sample_dataset(sem, n, data_seed);

    IntegrationSettings settings = scenario.integration;
    settings.mc_seed = mc_seed;

    std::optional<ModelPosterior> posterior;
    std::vector<std::optional<InterventionDensity>> per_model(models.size());
    auto model_estimate = [&](std::size_t i) -> const InterventionDensity& {
        if (!per_model[i]) {
            IntegrationSettings s = settings;
            s.mc_seed = settings.mc_seed + 0x9e3779b97f4a7c15ULL * (i + 1);
            per_model[i] = estimate_bayes_fixed_model(models[i].structure, data, models[i].prior, scenario.query, s);
        }
        return *per_model[i];
    };

    for (Method m : methods) {
        double kl = 0.0;
        switch (m) {
            case Method::ML:
                kl = kl_gaussian_vs_mixture(p, estimate_plugin(truth.structure, data, truth.prior, scenario.query,
                                                               PointEstimate::ML));
                break;
            case Method::MAP:
                kl = kl_gaussian_vs_mixture(p, estimate_plugin(truth.structure, data, truth.prior, scenario.query,
                                                               PointEstimate::MAP));
                break;
            case Method::BAYES:
                kl = kl_gaussian_vs_mixture(p, model_estimate(out.generating_model));
                break;
            case Method::MAP_MODEL:
            case Method::BAYES_MODEL_AVG: {
                if (!posterior) {
                    posterior = model_posterior(scenario.models, data);
                    out.true_model_weight = posterior->weights[out.generating_model];
                }
                if (m == Method::MAP_MODEL) {
                    kl = kl_gaussian_vs_mixture(p, model_estimate(posterior->mode()));
                } else {
                    std::vector<InterventionDensity> parts;
                    std::vector<double> factors;
                    for (std::size_t i = 0; i < models.size(); ++i) {
                        if (posterior->weights[i] == 0.0) continue;
                        parts.push_back(model_estimate(i));
                        factors.push_back(posterior->weights[i]);
                    }
                    kl = kl_gaussian_vs_mixture(p, combine(parts, factors));
                }
                break;
            }
        }
        out.kl.push_back(kl);
    }
    return out;
}

RiskEstimate empirical_bayes_risk(const Scenario& scenario, Method method, std::size_t n, std::size_t trials,
                                  std::uint64_t master_seed) {
    CAUSALDO_REQUIRE(trials >= 2, ErrorKind::InvalidArgument, "need at least 2 trials");
    scenario.validate();
    std::vector<double> losses(trials);
    const Method methods[] = {method};
    for (std::size_t t = 0; t < trials; ++t)
        losses[t] = run_trial(scenario, methods, n, trial_seed(master_seed, scenario.name, n, t)).kl.front();
    return summarize_losses(losses);
}

}  // namespace causaldo
