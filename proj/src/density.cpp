#include "causaldo/density.hpp"

#include <cmath>
#include <numbers>

#include "causaldo/error.hpp"

namespace causaldo {

InterventionDensity::InterventionDensity(std::vector<GaussianComponent> components) {
    CAUSALDO_REQUIRE(!components.empty(), ErrorKind::EmptyInput, "density needs at least one component");
    double total = 0.0;
    for (const auto& c : components) {
        CAUSALDO_REQUIRE(std::isfinite(c.weight) && c.weight >= 0.0, ErrorKind::NumericalFailure,
                         "mixture weight must be finite and nonnegative");
        CAUSALDO_REQUIRE(std::isfinite(c.mean), ErrorKind::NumericalFailure, "mixture mean not finite");
        CAUSALDO_REQUIRE(std::isfinite(c.variance) && c.variance > 0.0, ErrorKind::NumericalFailure,
                         "mixture variance must be finite and positive");
        total += c.weight;
    }
    CAUSALDO_REQUIRE(total > 0.0 && std::isfinite(total), ErrorKind::NumericalFailure, "mixture weights sum to zero");

    components_.reserve(components.size());
    double kept = 0.0;
    for (const auto& c : components) {
        if (c.weight / total < kPruneThreshold) continue;
        components_.push_back(c);
        kept += c.weight;
    }
    for (auto& c : components_) c.weight /= kept;
}

InterventionDensity InterventionDensity::gaussian(double mean, double variance) {
    return InterventionDensity({GaussianComponent{1.0, mean, variance}});
}

double InterventionDensity::mean() const noexcept {
    double m = 0.0;
    for (const auto& c : components_) m += c.weight * c.mean;
    return m;
}

double InterventionDensity::variance() const noexcept {
    const double m = mean();
    double v = 0.0;
    for (const auto& c : components_) v += c.weight * (c.variance + (c.mean - m) * (c.mean - m));
    return v;
}

double InterventionDensity::pdf(double y) const noexcept {
    double p = 0.0;
    for (const auto& c : components_) {
        const double d = y - c.mean;
        p += c.weight * std::exp(-0.5 * d * d / c.variance) / std::sqrt(2.0 * std::numbers::pi * c.variance);
    }
    return p;
}

std::vector<double> InterventionDensity::pdf(std::span<const double> ys) const {
    std::vector<double> out(ys.size(), 0.0);
    for (const auto& c : components_) {
        const double scale = c.weight / std::sqrt(2.0 * std::numbers::pi * c.variance);
        const double half_precision = 0.5 / c.variance;
        for (std::size_t i = 0; i < ys.size(); ++i) {
            const double d = ys[i] - c.mean;
            const double e = d * d * half_precision;
            // exp(-745) underflows to zero anyway
            if (e < 745.0) out[i] += scale * std::exp(-e);
        }
    }
    return out;
}

InterventionDensity combine(std::span<const InterventionDensity> parts, std::span<const double> factors) {
    CAUSALDO_REQUIRE(parts.size() == factors.size(), ErrorKind::InvalidArgument, "one factor per mixture");
    std::vector<GaussianComponent> all;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (factors[i] == 0.0) continue;
        for (auto c : parts[i].components()) {
            c.weight *= factors[i];
            all.push_back(c);
        }
    }
    return InterventionDensity(std::move(all));
}

}  // namespace causaldo
