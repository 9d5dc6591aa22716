#include "causaldo/inference.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <set>

#include "causaldo/error.hpp"

namespace causaldo {

namespace {

constexpr double kLog2Pi = 1.8378770664093454835606594728112;

void require_finite(double v, const char* what) {
    CAUSALDO_REQUIRE(std::isfinite(v), ErrorKind::NumericalFailure, std::string(what) + " is not finite");
}

}  // namespace

void PriorSpec::validate() const {
    CAUSALDO_REQUIRE(std::isfinite(alpha) && alpha > 0.0, ErrorKind::InvalidArgument, "alpha must be positive and finite");
}

void ModelSet::validate() const {
    CAUSALDO_REQUIRE(!models.empty(), ErrorKind::EmptyInput, "model set is empty");
    std::set<std::string> ids;
    double total = 0.0;
    for (const auto& m : models) {
        CAUSALDO_REQUIRE(ids.insert(m.id).second, ErrorKind::InvalidArgument, "duplicate model id '" + m.id + "'");
        CAUSALDO_REQUIRE(std::isfinite(m.prior_probability) && m.prior_probability >= 0.0, ErrorKind::InvalidArgument,
                         "model prior probability must be nonnegative");
        m.prior.validate();
        m.structure.validate();
        total += m.prior_probability;
    }
    CAUSALDO_REQUIRE(std::abs(total - 1.0) <= 1e-12, ErrorKind::InvalidArgument, "model prior must sum to 1");
}

std::size_t ModelPosterior::mode() const {
    CAUSALDO_REQUIRE(!ids.empty(), ErrorKind::EmptyInput, "empty model posterior");
    std::size_t best = 0;
    for (std::size_t i = 1; i < ids.size(); ++i) {
        if (log_posterior[i] > log_posterior[best] || (log_posterior[i] == log_posterior[best] && ids[i] < ids[best]))
            best = i;
    }
    return best;
}

double ModelPosterior::weight_of(const std::string& id) const {
    auto it = std::find(ids.begin(), ids.end(), id);
    CAUSALDO_REQUIRE(it != ids.end(), ErrorKind::InvalidArgument, "no model '" + id + "'");
    return weights[static_cast<std::size_t>(it - ids.begin())];
}

RegressionData regression_data(const CausalDiagram& diagram, std::size_t node, const Dataset& data) {
    const auto& ps = diagram.parent_indices(node);
    std::vector<std::size_t> cols;
    for (std::size_t p : ps) cols.push_back(data.column_index(diagram.nodes()[p]));
    const std::size_t t = data.column_index(diagram.nodes()[node]);

    RegressionData out{Eigen::MatrixXd(data.size(), ps.size()), Eigen::VectorXd(data.size())};
    for (std::size_t r = 0; r < data.size(); ++r) {
        const auto& row = data.rows[r];
        for (std::size_t j = 0; j < cols.size(); ++j) out.design(r, j) = row.at(cols[j]);
        out.response(r) = row.at(t);
    }
    return out;
}

NodePosterior node_posterior(const SemStructure& structure, const std::string& node, const Dataset& data,
                             const PriorSpec& prior) {
    prior.validate();
    const auto& d = structure.diagram;
    const std::size_t i = d.index_of(node);
    CAUSALDO_REQUIRE(!d.is_root(i), ErrorKind::RootNodeHasNoCoefficients, "'" + node + "' has no parents");
    const auto reg = regression_data(d, i, data);
    const double s2 = structure.noise_variance.at(i);
    const auto k = static_cast<Eigen::Index>(d.parent_indices(i).size());

    NodePosterior post{node, Eigen::VectorXd::Zero(k), Eigen::MatrixXd::Identity(k, k) * prior.alpha};
    if (data.size() == 0) return post;
    post.precision.noalias() += reg.design.transpose() * reg.design / s2;
    post.precision = 0.5 * (post.precision + post.precision.transpose());
    Eigen::LLT<Eigen::MatrixXd> llt(post.precision);
    CAUSALDO_REQUIRE(llt.info() == Eigen::Success, ErrorKind::NumericalFailure, "posterior precision not positive definite");
    post.mean = llt.solve(reg.design.transpose() * reg.response / s2);
    for (double v : post.mean) require_finite(v, "posterior mean");
    return post;
}

NodePosterior node_posterior(const CausalDiagram& diagram, const std::string& node, const Dataset& data,
                             const PriorSpec& prior) {
    return node_posterior(SemStructure::with_defaults(diagram), node, data, prior);
}

Eigen::VectorXd ml_estimate(const CausalDiagram& diagram, const std::string& node, const Dataset& data) {
    const std::size_t i = diagram.index_of(node);
    CAUSALDO_REQUIRE(!diagram.is_root(i), ErrorKind::RootNodeHasNoCoefficients, "'" + node + "' has no parents");
    const auto reg = regression_data(diagram, i, data);
    if (data.size() == 0) return Eigen::VectorXd::Zero(reg.design.cols());
    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(reg.design);
    Eigen::VectorXd theta = cod.solve(reg.response);
    for (double v : theta) require_finite(v, "least-squares solution");
    return theta;
}

double log_evidence(const SemStructure& structure, const Dataset& data, const PriorSpec& prior) {
    prior.validate();
    structure.validate();
    if (data.size() == 0) return 0.0;
    const auto& d = structure.diagram;
    const double n = static_cast<double>(data.size());
    double total = 0.0;

    for (std::size_t i = 0; i < d.size(); ++i) {
        if (d.is_root(i)) {
            const auto& root = structure.roots[i];
            const std::size_t col = data.column_index(d.nodes()[i]);
            double ss = 0.0;
            for (const auto& row : data.rows) {
                const double e = row.at(col) - root.mean;
                ss += e * e;
            }
            total += 0.5 * n * (std::log(root.precision) - kLog2Pi) - 0.5 * root.precision * ss;
            continue;
        }
        // t ~ N(0, s2 I + Phi Phi^T / alpha), reduced to K x K via the matrix
        // determinant lemma and Woodbury.
        const auto reg = regression_data(d, i, data);
        const double s2 = structure.noise_variance[i];
        const auto k = reg.design.cols();
        Eigen::MatrixXd a = Eigen::MatrixXd::Identity(k, k) * prior.alpha;
        a.noalias() += reg.design.transpose() * reg.design / s2;
        const Eigen::VectorXd b = reg.design.transpose() * reg.response / s2;
        Eigen::LLT<Eigen::MatrixXd> llt(a);
        CAUSALDO_REQUIRE(llt.info() == Eigen::Success, ErrorKind::NumericalFailure, "evidence matrix not positive definite");
        const Eigen::MatrixXd l = llt.matrixL();
        const double logdet_a = 2.0 * l.diagonal().array().log().sum();
        const double logdet_c = n * std::log(s2) + logdet_a - static_cast<double>(k) * std::log(prior.alpha);
        const double quad = reg.response.squaredNorm() / s2 - b.dot(llt.solve(b));
        total += -0.5 * (n * kLog2Pi + logdet_c + quad);
    }
    require_finite(total, "log evidence");
    return total;
}

ModelPosterior model_posterior(const ModelSet& models, const std::vector<double>& log_evidences) {
    models.validate();
    CAUSALDO_REQUIRE(log_evidences.size() == models.size(), ErrorKind::InvalidArgument, "one log evidence per model");
    ModelPosterior out;
    double top = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < models.size(); ++i) {
        const auto& m = models.models[i];
        const double lp = m.prior_probability > 0.0 ? std::log(m.prior_probability) + log_evidences[i]
                                                    : -std::numeric_limits<double>::infinity();
        CAUSALDO_REQUIRE(!std::isnan(lp), ErrorKind::NumericalFailure, "log posterior is NaN");
        out.ids.push_back(m.id);
        out.log_posterior.push_back(lp);
        top = std::max(top, lp);
    }
    CAUSALDO_REQUIRE(std::isfinite(top), ErrorKind::AllWeightsUnderflow, "every model has zero posterior mass");
    double z = 0.0;
    for (double lp : out.log_posterior) z += std::exp(lp - top);
    for (double lp : out.log_posterior) out.weights.push_back(std::exp(lp - top) / z);
    return out;
}

ModelPosterior model_posterior(const ModelSet& models, const Dataset& data) {
    std::vector<double> ev;
    for (const auto& m : models.models) ev.push_back(log_evidence(m.structure, data, m.prior));
    return model_posterior(models, ev);
}

Coefficients ml_coefficients(const SemStructure& structure, const Dataset& data) {
    const auto& d = structure.diagram;
    Coefficients out(d.size());
    for (std::size_t i = 0; i < d.size(); ++i) {
        if (d.is_root(i)) continue;
        const auto theta = ml_estimate(d, d.nodes()[i], data);
        out[i].assign(theta.begin(), theta.end());
    }
    return out;
}

Coefficients map_coefficients(const SemStructure& structure, const Dataset& data, const PriorSpec& prior) {
    const auto& d = structure.diagram;
    Coefficients out(d.size());
    for (std::size_t i = 0; i < d.size(); ++i) {
        if (d.is_root(i)) continue;
        const auto theta = map_estimate(node_posterior(structure, d.nodes()[i], data, prior));
        out[i].assign(theta.begin(), theta.end());
    }
    return out;
}

}  // namespace causaldo
