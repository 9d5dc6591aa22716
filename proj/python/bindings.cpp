#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "causaldo/diagram.hpp"
#include "causaldo/error.hpp"
#include "causaldo/estimators.hpp"
#include "causaldo/evaluation.hpp"
#include "causaldo/experiment.hpp"
#include "causaldo/inference.hpp"
#include "causaldo/io.hpp"
#include "causaldo/sem.hpp"

namespace py = pybind11;
using namespace causaldo;

namespace {

std::vector<Edge> to_edges(const std::vector<std::pair<std::string, std::string>>& pairs) {
    std::vector<Edge> out;
    for (const auto& [p, c] : pairs) out.push_back({p, c});
    return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Intervention-effect estimation on linear-Gaussian causal diagrams";

    static py::exception<Error> error(m, "CausalError", PyExc_RuntimeError);
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const Error& e) {
            py::set_error(error, e.what());
        }
    });

    py::class_<CausalDiagram>(m, "CausalDiagram")
        .def_property_readonly("nodes", &CausalDiagram::nodes)
        .def_property_readonly("edges",
                               [](const CausalDiagram& d) {
                                   std::vector<std::pair<std::string, std::string>> out;
                                   for (const auto& e : d.edges()) out.emplace_back(e.parent, e.child);
                                   return out;
                               })
        .def("__len__", &CausalDiagram::size)
        .def("__eq__", [](const CausalDiagram& a, const CausalDiagram& b) { return a == b; });

    m.def("validate_dag", [](std::vector<std::string> nodes, const std::vector<std::pair<std::string, std::string>>& edges) {
        return validate_dag(std::move(nodes), to_edges(edges));
    }, py::arg("nodes"), py::arg("edges"));
    m.def("topological_order", &topological_order);
    m.def("mutilate", &mutilate, py::arg("diagram"), py::arg("node"));
    m.def("parents", &parents, py::arg("diagram"), py::arg("node"));
    m.def("chain_diagram", &chain_diagram);
    m.def("confounded_diagram", &confounded_diagram);

    py::class_<RootGaussian>(m, "RootGaussian")
        .def(py::init<double, double>(), py::arg("mean") = 0.0, py::arg("precision") = 1.0)
        .def_readwrite("mean", &RootGaussian::mean)
        .def_readwrite("precision", &RootGaussian::precision);

    py::class_<SemStructure>(m, "SemStructure")
        .def(py::init(&SemStructure::with_defaults), py::arg("diagram"))
        .def_readonly("diagram", &SemStructure::diagram)
        .def_readwrite("roots", &SemStructure::roots)
        .def_readwrite("noise_variance", &SemStructure::noise_variance)
        .def("validate", &SemStructure::validate)
        .def("coefficient_count", &SemStructure::coefficient_count);

    py::class_<LinearGaussianSem>(m, "LinearGaussianSem")
        .def(py::init<SemStructure, Coefficients>(), py::arg("structure"), py::arg("coefficients"))
        .def_readonly("structure", &LinearGaussianSem::structure)
        .def_readonly("coefficients", &LinearGaussianSem::coefficients);

    py::class_<Dataset>(m, "Dataset")
        .def(py::init<std::vector<std::string>, std::vector<std::vector<double>>>(), py::arg("columns"),
             py::arg("rows"))
        .def_readwrite("columns", &Dataset::columns)
        .def_readwrite("rows", &Dataset::rows)
        .def("__len__", &Dataset::size)
        .def("column", &Dataset::column);

    py::class_<InterventionQuery>(m, "InterventionQuery")
        .def(py::init<std::string, double, std::string>(), py::arg("intervened"), py::arg("value"), py::arg("target"))
        .def_readwrite("intervened", &InterventionQuery::intervened)
        .def_readwrite("value", &InterventionQuery::value)
        .def_readwrite("target", &InterventionQuery::target);

    py::class_<GaussianComponent>(m, "GaussianComponent")
        .def_readonly("weight", &GaussianComponent::weight)
        .def_readonly("mean", &GaussianComponent::mean)
        .def_readonly("variance", &GaussianComponent::variance);

    py::class_<InterventionDensity>(m, "InterventionDensity")
        .def(py::init([](const std::vector<std::tuple<double, double, double>>& comps) {
            std::vector<GaussianComponent> c;
            for (const auto& [w, mu, v] : comps) c.push_back({w, mu, v});
            return InterventionDensity(std::move(c));
        }), py::arg("components"))
        .def_static("gaussian", &InterventionDensity::gaussian, py::arg("mean"), py::arg("variance"))
        .def_property_readonly("components",
                               [](const InterventionDensity& d) {
                                   return std::vector<GaussianComponent>(d.components().begin(), d.components().end());
                               })
        .def("__len__", &InterventionDensity::size)
        .def("is_gaussian", &InterventionDensity::is_gaussian)
        .def("mean", &InterventionDensity::mean)
        .def("variance", &InterventionDensity::variance)
        .def("pdf", py::overload_cast<double>(&InterventionDensity::pdf, py::const_), py::arg("y"))
        .def("to_json", &io::density_to_json);

    m.def("sample_dataset", &sample_dataset, py::arg("sem"), py::arg("n"), py::arg("seed"));
    m.def("true_intervention_distribution", &true_intervention_distribution, py::arg("sem"), py::arg("query"));

    py::class_<PriorSpec>(m, "PriorSpec")
        .def(py::init<double>(), py::arg("alpha") = 1.0)
        .def_readwrite("alpha", &PriorSpec::alpha);

    py::class_<NodePosterior>(m, "NodePosterior")
        .def_readonly("node", &NodePosterior::node)
        .def_readonly("mean", &NodePosterior::mean)
        .def_readonly("precision", &NodePosterior::precision);

    py::class_<CandidateModel>(m, "CandidateModel")
        .def(py::init<std::string, SemStructure, PriorSpec, double>(), py::arg("id"), py::arg("structure"),
             py::arg("prior"), py::arg("prior_probability"))
        .def_readonly("id", &CandidateModel::id)
        .def_readonly("prior_probability", &CandidateModel::prior_probability);

    py::class_<ModelSet>(m, "ModelSet")
        .def(py::init<std::vector<CandidateModel>>(), py::arg("models"))
        .def_readonly("models", &ModelSet::models);

    py::class_<ModelPosterior>(m, "ModelPosterior")
        .def_readonly("ids", &ModelPosterior::ids)
        .def_readonly("weights", &ModelPosterior::weights)
        .def_readonly("log_posterior", &ModelPosterior::log_posterior)
        .def("mode", &ModelPosterior::mode)
        .def("weight_of", &ModelPosterior::weight_of);

    m.def("node_posterior",
          py::overload_cast<const SemStructure&, const std::string&, const Dataset&, const PriorSpec&>(&node_posterior),
          py::arg("structure"), py::arg("node"), py::arg("data"), py::arg("prior"));
    m.def("ml_estimate", &ml_estimate, py::arg("diagram"), py::arg("node"), py::arg("data"));
    m.def("log_evidence", &log_evidence, py::arg("structure"), py::arg("data"), py::arg("prior"));
    m.def("model_posterior", py::overload_cast<const ModelSet&, const Dataset&>(&model_posterior), py::arg("models"),
          py::arg("data"));

    py::enum_<Method>(m, "Method")
        .value("ML", Method::ML)
        .value("MAP", Method::MAP)
        .value("BAYES", Method::BAYES)
        .value("MAP_MODEL", Method::MAP_MODEL)
        .value("BAYES_MODEL_AVG", Method::BAYES_MODEL_AVG);
    m.def("parse_method", &parse_method);

    py::class_<IntegrationSettings>(m, "IntegrationSettings")
        .def(py::init<>())
        .def_readwrite("quadrature_nodes_per_dim", &IntegrationSettings::quadrature_nodes_per_dim)
        .def_readwrite("max_quadrature_dims", &IntegrationSettings::max_quadrature_dims)
        .def_readwrite("mc_samples", &IntegrationSettings::mc_samples)
        .def_readwrite("mc_seed", &IntegrationSettings::mc_seed);

    m.def("estimate",
          [](Method method, const ModelSet& models, const Dataset& data, const InterventionQuery& q,
             const IntegrationSettings& settings) { return estimate(EstimatorConfig{method, settings}, models, data, q); },
          py::arg("method"), py::arg("models"), py::arg("data"), py::arg("query"),
          py::arg("settings") = IntegrationSettings{});
    m.def("estimate_bayes_fixed_model", &estimate_bayes_fixed_model, py::arg("structure"), py::arg("data"),
          py::arg("prior"), py::arg("query"), py::arg("settings") = IntegrationSettings{});

    m.def("kl_gaussian_gaussian",
          [](double mp, double vp, double mq, double vq) { return kl_gaussian_gaussian({mp, vp}, {mq, vq}); });
    m.def("kl_gaussian_vs_mixture",
          [](double mean, double variance, const InterventionDensity& q) {
              return kl_gaussian_vs_mixture({mean, variance}, q);
          },
          py::arg("mean"), py::arg("variance"), py::arg("q"));

    py::class_<ExperimentConfig>(m, "ExperimentConfig")
        .def(py::init<>())
        .def_static("from_json", [](const std::string& text) { return io::parse_experiment_config(text); })
        .def_readwrite("sample_sizes", &ExperimentConfig::sample_sizes)
        .def_readwrite("trials", &ExperimentConfig::trials)
        .def_readwrite("alpha", &ExperimentConfig::alpha)
        .def_readwrite("master_seed", &ExperimentConfig::master_seed)
        .def_readwrite("methods", &ExperimentConfig::methods)
        .def_readwrite("model_prior", &ExperimentConfig::model_prior);

    m.def("run_experiment",
          [](const ExperimentConfig& c) {
              const auto t = run_experiment(c);
              return py::make_tuple(io::results_to_csv(t.rows), io::summary_to_csv(t.summary));
          },
          py::arg("config"), "Runs the simulation and returns (results_csv, summary_csv).");
}
