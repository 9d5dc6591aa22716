#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "causaldo/density.hpp"
#include "causaldo/diagram.hpp"

namespace causaldo {

struct RootGaussian {
    double mean = 0.0;
    double precision = 1.0;
};

/// Everything about a linear-Gaussian SEM except its coefficients: the
/// diagram, the known Gaussians of the root nodes and the known noise
/// variances. This is the "model" a candidate set ranges over.
struct SemStructure {
    CausalDiagram diagram;
    std::vector<RootGaussian> roots;       // indexed by node; ignored for non-roots
    std::vector<double> noise_variance;    // indexed by node; ignored for roots

    /// Standard-normal roots and unit noise everywhere.
    static SemStructure with_defaults(CausalDiagram diagram);
    /// Throws InvalidArgument on size mismatch or non-positive / non-finite values.
    void validate() const;

    std::size_t coefficient_count() const;
};

/// Per node, one coefficient per parent in parent order (empty for roots).
using Coefficients = std::vector<std::vector<double>>;

struct LinearGaussianSem {
    SemStructure structure;
    Coefficients coefficients;

    LinearGaussianSem(SemStructure s, Coefficients c);

    const CausalDiagram& diagram() const noexcept { return structure.diagram; }
};

/// Rectangular table of samples; columns are named variables.
struct Dataset {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;

    std::size_t size() const noexcept { return rows.size(); }
    /// Throws MissingColumn.
    std::size_t column_index(const std::string& name) const;
    std::vector<double> column(const std::string& name) const;

    friend bool operator==(const Dataset&, const Dataset&) = default;
};

struct InterventionQuery {
    std::string intervened;
    double value = 0.0;
    std::string target;
};

/// Forward-samples n rows in topological order. Deterministic given seed.
Dataset sample_dataset(const LinearGaussianSem& sem, std::size_t n, std::uint64_t seed);

/// Exact p(target | do(intervened = value)): propagates the joint Gaussian over
/// the mutilated graph with the intervened node pinned to a point mass.
InterventionDensity true_intervention_distribution(const LinearGaussianSem& sem, const InterventionQuery& q);

/// True iff the do-distribution ignores the coefficients on edges into the
/// intervened node: they are replaced by `perturbed` and the two results
/// compared. `perturbed` must have one entry per parent of the intervened node.
bool intervention_distribution_invariance_check(const LinearGaussianSem& sem, const InterventionQuery& q,
                                                const std::vector<double>& perturbed);
/// Same check with a fixed battery of perturbations.
bool intervention_distribution_invariance_check(const LinearGaussianSem& sem, const InterventionQuery& q);

/// Reusable evaluator for many coefficient settings of one structure and
/// query; avoids re-validating the mutilated graph for every call.
class InterventionPropagator {
public:
    InterventionPropagator(const SemStructure& structure, const InterventionQuery& q);

    /// Mean and variance of the target under do(); coefficients as in
    /// LinearGaussianSem.
    GaussianComponent evaluate(const Coefficients& coefficients) const;

    /// Nodes whose coefficients influence the result: non-intervened
    /// ancestors-or-self of the target that have parents.
    const std::vector<std::size_t>& relevant_nodes() const noexcept { return relevant_; }

private:
    SemStructure structure_;
    std::size_t intervened_;
    double value_;
    std::vector<std::size_t> order_;   // ancestors-or-self of target in the mutilated graph, topological
    std::vector<std::size_t> relevant_;
};

}  // namespace causaldo
