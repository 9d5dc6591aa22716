#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace causaldo {

struct GaussianComponent {
    double weight = 1.0;
    double mean = 0.0;
    double variance = 1.0;

    friend bool operator==(const GaussianComponent&, const GaussianComponent&) = default;
};

/// Univariate density of the target variable: a finite Gaussian mixture.
/// A single component is the plain Gaussian case.
///
/// Weights are nonnegative and sum to 1 within 1e-12; variances are strictly
/// positive. The constructor enforces this, dropping components whose weight
/// falls below kPruneThreshold and renormalizing the rest.
class InterventionDensity {
public:
    static constexpr double kPruneThreshold = 1e-12;

    explicit InterventionDensity(std::vector<GaussianComponent> components);
    static InterventionDensity gaussian(double mean, double variance);

    std::span<const GaussianComponent> components() const noexcept { return components_; }
    std::size_t size() const noexcept { return components_.size(); }
    bool is_gaussian() const noexcept { return components_.size() == 1; }

    double mean() const noexcept;
    double variance() const noexcept;
    double pdf(double y) const noexcept;
    /// Evaluates the density at every grid point; same as pdf() per point but
    /// with per-component constants hoisted.
    std::vector<double> pdf(std::span<const double> ys) const;

    friend bool operator==(const InterventionDensity&, const InterventionDensity&) = default;

private:
    std::vector<GaussianComponent> components_;
};

/// Concatenates mixtures, scaling each one's weights by the paired factor.
InterventionDensity combine(std::span<const InterventionDensity> parts, std::span<const double> factors);

}  // namespace causaldo
