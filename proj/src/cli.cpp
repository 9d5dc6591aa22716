#include "causaldo/cli.hpp"

#include <iostream>
#include <random>

#include "CLI11.hpp"
#include "causaldo/error.hpp"
#include "causaldo/estimators.hpp"
#include "causaldo/io.hpp"
#include "causaldo/svg_plot.hpp"
#include "json.hpp"

namespace causaldo {

namespace {

InterventionQuery parse_do(const std::string& assignment, const std::string& target) {
    const auto eq = assignment.find('=');
    CAUSALDO_REQUIRE(eq != std::string::npos && eq > 0, ErrorKind::InvalidArgument,
                     "--do expects NODE=VALUE, got '" + assignment + "'");
    double value = 0.0;
    try {
        value = io::parse_double(assignment.substr(eq + 1));
    } catch (const Error&) {
        throw Error(ErrorKind::InvalidArgument, "--do value is not a number: '" + assignment + "'");
    }
    return {assignment.substr(0, eq), value, target};
}

std::vector<double> parse_list(const std::string& text, const char* flag) {
    std::vector<double> out;
    std::size_t start = 0;
    while (start <= text.size()) {
        const auto pos = text.find(',', start);
        const auto cell = text.substr(start, pos == std::string::npos ? std::string::npos : pos - start);
        try {
            out.push_back(io::parse_double(cell));
        } catch (const Error&) {
            throw Error(ErrorKind::InvalidArgument, std::string(flag) + " expects comma-separated numbers");
        }
        if (pos == std::string::npos) break;
        start = pos + 1;
    }
    return out;
}

std::vector<std::string> split_paths(const std::string& text) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = text.find(',', start);
        out.push_back(text.substr(start, pos == std::string::npos ? std::string::npos : pos - start));
        if (pos == std::string::npos) break;
        start = pos + 1;
    }
    return out;
}

void emit(std::ostream& out, const std::string& path, const std::string& text) {
    if (path.empty() || path == "-")
        out << text;
    else
        io::write_file(path, text);
}

int exit_code_for(const Error& e) {
    if (e.is_numerical()) return kExitNumerical;
    switch (e.kind()) {
        case ErrorKind::Format:
        case ErrorKind::Io:
        case ErrorKind::MissingColumn:
        case ErrorKind::CycleDetected:
        case ErrorKind::UnknownEndpoint:
        case ErrorKind::DuplicateEdge:
        case ErrorKind::EmptyInput: return kExitFile;
        default: return kExitUsage;
    }
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Estimate causal intervention effects on linear-Gaussian diagrams", "causaldo"};
    app.require_subcommand(1);

    // sample
    std::string model_path, params_path, out_path, data_path;
    std::size_t n = 0;
    std::uint64_t seed = 0;
    double alpha = 1.0;
    auto* sample = app.add_subcommand("sample", "Draw a dataset from a linear-Gaussian SEM");
    sample->add_option("--model", model_path, "Model-spec JSON")->required();
    sample->add_option("--params", params_path,
                       "Coefficient JSON; when omitted, coefficients are drawn from N(0, 1/alpha) using --seed");
    sample->add_option("--n", n, "Number of rows")->required();
    sample->add_option("--seed", seed, "RNG seed");
    sample->add_option("--alpha", alpha, "Prior precision used when --params is omitted");
    sample->add_option("--out", out_path, "Output CSV (default stdout)");

    // true-effect
    std::string do_text, target;
    auto* truth = app.add_subcommand("true-effect", "Exact p(target | do(X=x)) for known coefficients");
    truth->add_option("--model", model_path, "Model-spec JSON")->required();
    truth->add_option("--params", params_path, "Coefficient JSON")->required();
    truth->add_option("--do", do_text, "Intervention NODE=VALUE")->required();
    truth->add_option("--target", target, "Target node")->required();

    // fit
    auto* fit = app.add_subcommand("fit", "Conjugate posteriors of every node's coefficients");
    fit->add_option("--model", model_path, "Model-spec JSON")->required();
    fit->add_option("--data", data_path, "Dataset CSV")->required();
    fit->add_option("--alpha", alpha, "Prior precision");
    fit->add_option("--out", out_path, "Output JSON (default stdout)");

    // estimate
    std::string models_text, prior_text, method_text;
    IntegrationSettings integration;
    auto* est = app.add_subcommand("estimate", "Estimate the intervention effect from data");
    auto* model_opt = est->add_option("--model", model_path, "Model-spec JSON (known diagram)");
    auto* models_opt = est->add_option("--models", models_text, "Comma-separated model-spec files (unknown diagram)");
    model_opt->excludes(models_opt);
    est->add_option("--model-prior", prior_text, "Comma-separated prior probabilities (default uniform)");
    est->add_option("--data", data_path, "Dataset CSV")->required();
    est->add_option("--method", method_text, "ml | map | bayes | map-model | bma")->required();
    est->add_option("--do", do_text, "Intervention NODE=VALUE")->required();
    est->add_option("--target", target, "Target node")->required();
    est->add_option("--alpha", alpha, "Prior precision");
    est->add_option("--nodes-per-dim", integration.quadrature_nodes_per_dim, "Gauss-Hermite points per dimension");
    est->add_option("--max-quad-dims", integration.max_quadrature_dims, "Largest dimension integrated by quadrature");
    est->add_option("--mc-samples", integration.mc_samples, "Posterior draws above that dimension");
    est->add_option("--seed", integration.mc_seed, "Seed for the Monte Carlo path");
    est->add_option("--out", out_path, "Output JSON (default stdout)");

    // experiment
    std::string config_path, summary_path;
    auto* exp = app.add_subcommand("experiment", "Simulated KL risk against sample size");
    exp->add_option("--config", config_path, "Experiment JSON")->required();
    exp->add_option("--out", out_path, "Per-trial results CSV")->required();
    exp->add_option("--summary", summary_path, "Summary CSV")->required();

    // plot
    auto* plot = app.add_subcommand("plot", "Render a summary CSV as SVG");
    plot->add_option("--summary", summary_path, "Summary CSV")->required();
    plot->add_option("--out", out_path, "Output SVG")->required();

    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (sample->parsed()) {
            const auto structure = io::read_model_spec(model_path);
            Coefficients coeffs;
            std::uint64_t data_seed = seed;
            if (!params_path.empty()) {
                coeffs = io::read_params(params_path, structure);
            } else {
                PriorSpec{alpha}.validate();
                std::mt19937_64 rng(seed);
                std::normal_distribution<double> draw(0.0, 1.0 / std::sqrt(alpha));
                coeffs.resize(structure.diagram.size());
                for (std::size_t i = 0; i < structure.diagram.size(); ++i)
                    for (std::size_t j = 0; j < structure.diagram.parent_indices(i).size(); ++j) coeffs[i].push_back(draw(rng));
                data_seed = rng();
            }
            const auto data = sample_dataset(LinearGaussianSem(structure, std::move(coeffs)), n, data_seed);
            emit(out, out_path, io::dataset_to_csv(data));
        } else if (truth->parsed()) {
            const auto structure = io::read_model_spec(model_path);
            const LinearGaussianSem sem(structure, io::read_params(params_path, structure));
            const auto d = true_intervention_distribution(sem, parse_do(do_text, target));
            out << nlohmann::json{{"mean", d.mean()}, {"variance", d.variance()}}.dump() << "\n";
        } else if (fit->parsed()) {
            const auto structure = io::read_model_spec(model_path);
            const auto data = io::read_dataset_csv(data_path);
            std::vector<NodePosterior> posts;
            for (std::size_t i = 0; i < structure.diagram.size(); ++i)
                if (!structure.diagram.is_root(i))
                    posts.push_back(node_posterior(structure, structure.diagram.nodes()[i], data, PriorSpec{alpha}));
            emit(out, out_path, io::posteriors_to_json(posts));
        } else if (est->parsed()) {
            const Method method = parse_method(method_text);
            const auto q = parse_do(do_text, target);
            ModelSet models;
            if (uses_model_set(method)) {
                CAUSALDO_REQUIRE(!models_text.empty(), ErrorKind::InvalidArgument, "--models is required for this method");
                const auto paths = split_paths(models_text);
                std::vector<double> prior = prior_text.empty() ? std::vector<double>(paths.size(), 1.0 / static_cast<double>(paths.size()))
                                                               : parse_list(prior_text, "--model-prior");
                CAUSALDO_REQUIRE(prior.size() == paths.size(), ErrorKind::InvalidArgument, "one --model-prior entry per model");
                for (std::size_t i = 0; i < paths.size(); ++i)
                    models.models.push_back({paths[i], io::read_model_spec(paths[i]), PriorSpec{alpha}, prior[i]});
            } else {
                CAUSALDO_REQUIRE(!model_path.empty(), ErrorKind::InvalidArgument, "--model is required for this method");
                models.models.push_back({model_path, io::read_model_spec(model_path), PriorSpec{alpha}, 1.0});
            }
            const auto data = io::read_dataset_csv(data_path);
            const auto d = estimate(EstimatorConfig{method, integration}, models, data, q);
            emit(out, out_path, io::density_to_json(d) + "\n");
        } else if (exp->parsed()) {
            const auto config = io::read_experiment_config(config_path);
            const auto table = run_experiment(config);
            io::write_file(out_path, io::results_to_csv(table.rows));
            io::write_file(summary_path, io::summary_to_csv(table.summary));
        } else if (plot->parsed()) {
            plot_emit(io::parse_summary_csv(io::read_file(summary_path)), out_path);
        }
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return exit_code_for(e);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitFile;
    }
    return kExitOk;
}

}  // namespace causaldo
