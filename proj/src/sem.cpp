#include "causaldo/sem.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "causaldo/error.hpp"

namespace causaldo {

SemStructure SemStructure::with_defaults(CausalDiagram diagram) {
    const std::size_t n = diagram.size();
    return SemStructure{std::move(diagram), std::vector<RootGaussian>(n), std::vector<double>(n, 1.0)};
}

void SemStructure::validate() const {
    CAUSALDO_REQUIRE(roots.size() == diagram.size() && noise_variance.size() == diagram.size(),
                     ErrorKind::InvalidArgument, "per-node parameter arrays must match the node count");
    for (std::size_t i = 0; i < diagram.size(); ++i) {
        if (diagram.is_root(i)) {
            CAUSALDO_REQUIRE(std::isfinite(roots[i].mean), ErrorKind::InvalidArgument,
                             "root mean of '" + diagram.nodes()[i] + "' not finite");
            CAUSALDO_REQUIRE(std::isfinite(roots[i].precision) && roots[i].precision > 0.0,
                             ErrorKind::InvalidArgument,
                             "root precision of '" + diagram.nodes()[i] + "' must be positive");
        } else {
            CAUSALDO_REQUIRE(std::isfinite(noise_variance[i]) && noise_variance[i] > 0.0, ErrorKind::InvalidArgument,
                             "noise variance of '" + diagram.nodes()[i] + "' must be positive");
        }
    }
}

std::size_t SemStructure::coefficient_count() const { return diagram.edges().size(); }

LinearGaussianSem::LinearGaussianSem(SemStructure s, Coefficients c) : structure(std::move(s)), coefficients(std::move(c)) {
    structure.validate();
    const auto& d = structure.diagram;
    CAUSALDO_REQUIRE(coefficients.size() == d.size(), ErrorKind::InvalidArgument, "one coefficient vector per node");
    for (std::size_t i = 0; i < d.size(); ++i) {
        CAUSALDO_REQUIRE(coefficients[i].size() == d.parent_indices(i).size(), ErrorKind::InvalidArgument,
                         "coefficient count of '" + d.nodes()[i] + "' must equal its parent count");
        for (double v : coefficients[i])
            CAUSALDO_REQUIRE(std::isfinite(v), ErrorKind::InvalidArgument, "non-finite coefficient");
    }
}

std::size_t Dataset::column_index(const std::string& name) const {
    auto it = std::find(columns.begin(), columns.end(), name);
    CAUSALDO_REQUIRE(it != columns.end(), ErrorKind::MissingColumn, "dataset has no column '" + name + "'");
    return static_cast<std::size_t>(it - columns.begin());
}

std::vector<double> Dataset::column(const std::string& name) const {
    const std::size_t j = column_index(name);
    std::vector<double> out;
    out.reserve(rows.size());
    for (const auto& r : rows) out.push_back(r.at(j));
    return out;
}

Dataset sample_dataset(const LinearGaussianSem& sem, std::size_t n, std::uint64_t seed) {
    const auto& d = sem.diagram();
    Dataset out{d.nodes(), {}};
    out.rows.reserve(n);
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> std_normal(0.0, 1.0);

    std::vector<double> row(d.size());
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t node : d.topological_indices()) {
            const auto& ps = d.parent_indices(node);
            if (ps.empty()) {
                const auto& root = sem.structure.roots[node];
                row[node] = root.mean + std_normal(rng) / std::sqrt(root.precision);
            } else {
                double v = 0.0;
                for (std::size_t j = 0; j < ps.size(); ++j) v += sem.coefficients[node][j] * row[ps[j]];
                row[node] = v + std::sqrt(sem.structure.noise_variance[node]) * std_normal(rng);
            }
        }
        out.rows.push_back(row);
    }
    return out;
}

InterventionPropagator::InterventionPropagator(const SemStructure& structure, const InterventionQuery& q)
    : structure_(structure), value_(q.value) {
    structure_.validate();
    const auto& d = structure_.diagram;
    intervened_ = d.index_of(q.intervened);
    const std::size_t target = d.index_of(q.target);
    CAUSALDO_REQUIRE(intervened_ != target, ErrorKind::TargetIsIntervened,
                     "target '" + q.target + "' is the intervened node");
    CAUSALDO_REQUIRE(std::isfinite(q.value), ErrorKind::InvalidArgument, "intervention value not finite");

    const auto cut = mutilate(d, q.intervened);
    const auto mask = ancestors_or_self(cut, target);
    for (std::size_t node : cut.topological_indices()) {
        if (!mask[node]) continue;
        order_.push_back(node);
        if (node != intervened_ && !d.is_root(node)) relevant_.push_back(node);
    }
}

GaussianComponent InterventionPropagator::evaluate(const Coefficients& coefficients) const {
    const auto& d = structure_.diagram;
    const std::size_t k = order_.size();
    std::vector<std::size_t> local(d.size(), 0);
    std::vector<double> mean(k, 0.0);
    std::vector<double> cov(k * k, 0.0);

    for (std::size_t i = 0; i < k; ++i) {
        const std::size_t node = order_[i];
        local[node] = i;
        if (node == intervened_) {
            mean[i] = value_;
            continue;
        }
        const auto& ps = d.parent_indices(node);
        if (ps.empty()) {
            mean[i] = structure_.roots[node].mean;
            cov[i * k + i] = 1.0 / structure_.roots[node].precision;
            continue;
        }
        const auto& theta = coefficients[node];
        double m = 0.0;
        for (std::size_t j = 0; j < ps.size(); ++j) m += theta[j] * mean[local[ps[j]]];
        mean[i] = m;
        // Cov(node, earlier) = sum_j theta_j Cov(parent_j, earlier)
        for (std::size_t e = 0; e < i; ++e) {
            double c = 0.0;
            for (std::size_t j = 0; j < ps.size(); ++j) c += theta[j] * cov[local[ps[j]] * k + e];
            cov[i * k + e] = c;
            cov[e * k + i] = c;
        }
        double v = structure_.noise_variance[node];
        for (std::size_t j = 0; j < ps.size(); ++j) v += theta[j] * cov[i * k + local[ps[j]]];
        cov[i * k + i] = v;
    }
    return GaussianComponent{1.0, mean[k - 1], cov[(k - 1) * k + (k - 1)]};
}

InterventionDensity true_intervention_distribution(const LinearGaussianSem& sem, const InterventionQuery& q) {
    InterventionPropagator prop(sem.structure, q);
    const auto c = prop.evaluate(sem.coefficients);
    CAUSALDO_REQUIRE(std::isfinite(c.mean) && std::isfinite(c.variance) && c.variance > 0.0,
                     ErrorKind::NumericalFailure, "do-distribution moments not finite");
    return InterventionDensity::gaussian(c.mean, c.variance);
}

bool intervention_distribution_invariance_check(const LinearGaussianSem& sem, const InterventionQuery& q,
                                                const std::vector<double>& perturbed) {
    const std::size_t x = sem.diagram().index_of(q.intervened);
    CAUSALDO_REQUIRE(perturbed.size() == sem.coefficients[x].size(), ErrorKind::InvalidArgument,
                     "one perturbed value per parent of the intervened node");
    Coefficients changed = sem.coefficients;
    changed[x] = perturbed;
    const LinearGaussianSem other(sem.structure, std::move(changed));
    return true_intervention_distribution(sem, q) == true_intervention_distribution(other, q);
}

bool intervention_distribution_invariance_check(const LinearGaussianSem& sem, const InterventionQuery& q) {
    const std::size_t x = sem.diagram().index_of(q.intervened);
    const std::size_t k = sem.coefficients[x].size();
    for (double v : {0.0, 5.0, -3.25, 1e3}) {
        if (!intervention_distribution_invariance_check(sem, q, std::vector<double>(k, v))) return false;
    }
    return true;
}

}  // namespace causaldo
