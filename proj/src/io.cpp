#include "causaldo/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "causaldo/error.hpp"
#include "json.hpp"

namespace causaldo::io {

using nlohmann::json;

namespace {

[[noreturn]] void format_error(const std::string& msg) { throw Error(ErrorKind::Format, msg); }

json parse_json(std::string_view text) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        format_error(std::string("malformed JSON: ") + e.what());
    }
}

void reject_unknown_keys(const json& obj, std::initializer_list<std::string_view> allowed, const std::string& where) {
    for (const auto& [key, _] : obj.items()) {
        bool ok = false;
        for (auto a : allowed) ok = ok || key == a;
        if (!ok) format_error("unexpected key '" + key + "' in " + where);
    }
}

// nlohmann's typed accessors throw type_error; fold those into Format errors.
template <class T>
T get_as(const json& j, const std::string& what) {
    try {
        return j.get<T>();
    } catch (const json::exception&) {
        format_error("bad value for " + what);
    }
}

std::vector<std::string_view> split(std::string_view line, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = line.find(sep, start);
        out.push_back(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

std::vector<std::string_view> lines_of(std::string_view text) {
    std::vector<std::string_view> out;
    for (auto line : split(text, '\n')) {
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        out.push_back(line);
    }
    while (!out.empty() && out.back().empty()) out.pop_back();
    return out;
}

std::size_t parse_count(std::string_view text) {
    std::size_t v = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || ptr != text.data() + text.size()) format_error("not a count: '" + std::string(text) + "'");
    return v;
}

}  // namespace

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    CAUSALDO_REQUIRE(in.good(), ErrorKind::Io, "cannot open '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::filesystem::path& path, std::string_view text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    CAUSALDO_REQUIRE(out.good(), ErrorKind::Io, "cannot write '" + path.string() + "'");
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    CAUSALDO_REQUIRE(out.good(), ErrorKind::Io, "write to '" + path.string() + "' failed");
}

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

double parse_double(std::string_view text) {
    while (!text.empty() && text.front() == ' ') text.remove_prefix(1);
    while (!text.empty() && text.back() == ' ') text.remove_suffix(1);
    if (!text.empty() && text.front() == '+') text.remove_prefix(1);
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || ptr != text.data() + text.size() || text.empty())
        format_error("not a number: '" + std::string(text) + "'");
    return v;
}

SemStructure parse_model_spec(std::string_view text) {
    const json doc = parse_json(text);
    if (!doc.is_object() || !doc.contains("nodes") || !doc["nodes"].is_array())
        format_error("model spec needs a \"nodes\" array");
    reject_unknown_keys(doc, {"nodes"}, "model spec");

    std::vector<std::string> names;
    std::vector<Edge> edges;
    std::vector<RootGaussian> roots;
    std::vector<double> noise;
    for (const auto& node : doc["nodes"]) {
        if (!node.is_object() || !node.contains("name")) format_error("each node needs a \"name\"");
        reject_unknown_keys(node, {"name", "parents", "root_mean", "root_precision", "noise_variance"}, "node");
        const auto name = get_as<std::string>(node["name"], "node name");
        const auto ps = node.contains("parents") ? get_as<std::vector<std::string>>(node["parents"], "parents of " + name)
                                                 : std::vector<std::string>{};
        RootGaussian root;
        double s2 = 1.0;
        if (ps.empty()) {
            if (node.contains("noise_variance")) format_error("noise_variance on root node '" + name + "'");
            if (node.contains("root_mean")) root.mean = get_as<double>(node["root_mean"], "root_mean");
            if (node.contains("root_precision")) root.precision = get_as<double>(node["root_precision"], "root_precision");
        } else {
            if (node.contains("root_mean") || node.contains("root_precision"))
                format_error("root fields on non-root node '" + name + "'");
            if (node.contains("noise_variance")) s2 = get_as<double>(node["noise_variance"], "noise_variance");
        }
        for (const auto& p : ps) edges.push_back({p, name});
        names.push_back(name);
        roots.push_back(root);
        noise.push_back(s2);
    }
    try {
        SemStructure s{validate_dag(std::move(names), std::move(edges)), std::move(roots), std::move(noise)};
        s.validate();
        return s;
    } catch (const Error& e) {
        format_error(std::string("invalid model spec: ") + e.what());
    }
}

SemStructure read_model_spec(const std::filesystem::path& path) { return parse_model_spec(read_file(path)); }

std::string model_spec_to_json(const SemStructure& structure) {
    const auto& d = structure.diagram;
    json nodes = json::array();
    for (std::size_t i = 0; i < d.size(); ++i) {
        json n{{"name", d.nodes()[i]}, {"parents", parents(d, d.nodes()[i])}};
        if (d.is_root(i)) {
            n["root_mean"] = structure.roots[i].mean;
            n["root_precision"] = structure.roots[i].precision;
        } else if (structure.noise_variance[i] != 1.0) {
            n["noise_variance"] = structure.noise_variance[i];
        }
        nodes.push_back(std::move(n));
    }
    return json{{"nodes", nodes}}.dump(2) + "\n";
}

Coefficients parse_params(std::string_view text, const SemStructure& structure) {
    const json doc = parse_json(text);
    if (!doc.is_object() || !doc.contains("coefficients") || !doc["coefficients"].is_object())
        format_error("params file needs a \"coefficients\" object");
    reject_unknown_keys(doc, {"coefficients"}, "params file");
    const auto& d = structure.diagram;
    const auto& table = doc["coefficients"];
    for (const auto& [key, _] : table.items()) {
        const auto idx = d.find(key);
        if (!idx) format_error("coefficients for unknown node '" + key + "'");
        if (d.is_root(*idx)) format_error("coefficients given for root node '" + key + "'");
    }
    Coefficients out(d.size());
    for (std::size_t i = 0; i < d.size(); ++i) {
        if (d.is_root(i)) continue;
        const auto& name = d.nodes()[i];
        if (!table.contains(name)) format_error("missing coefficients for '" + name + "'");
        out[i] = get_as<std::vector<double>>(table[name], "coefficients of " + name);
        if (out[i].size() != d.parent_indices(i).size())
            format_error("'" + name + "' needs " + std::to_string(d.parent_indices(i).size()) + " coefficients");
    }
    return out;
}

Coefficients read_params(const std::filesystem::path& path, const SemStructure& structure) {
    return parse_params(read_file(path), structure);
}

std::string params_to_json(const SemStructure& structure, const Coefficients& coefficients) {
    const auto& d = structure.diagram;
    json table = json::object();
    for (std::size_t i = 0; i < d.size(); ++i)
        if (!d.is_root(i)) table[d.nodes()[i]] = coefficients.at(i);
    return json{{"coefficients", table}}.dump(2) + "\n";
}

Dataset parse_dataset_csv(std::string_view text) {
    const auto lines = lines_of(text);
    if (lines.empty()) format_error("dataset CSV has no header");
    Dataset ds;
    for (auto c : split(lines[0], ',')) {
        if (c.empty()) format_error("empty column name in dataset header");
        ds.columns.emplace_back(c);
    }
    std::set<std::string> seen(ds.columns.begin(), ds.columns.end());
    if (seen.size() != ds.columns.size()) format_error("duplicate column in dataset header");
    for (std::size_t l = 1; l < lines.size(); ++l) {
        const auto cells = split(lines[l], ',');
        if (cells.size() != ds.columns.size())
            format_error("dataset line " + std::to_string(l + 1) + " has " + std::to_string(cells.size()) + " fields");
        std::vector<double> row;
        for (auto c : cells) {
            const double v = parse_double(c);
            if (!std::isfinite(v)) format_error("non-finite value on dataset line " + std::to_string(l + 1));
            row.push_back(v);
        }
        ds.rows.push_back(std::move(row));
    }
    return ds;
}

Dataset read_dataset_csv(const std::filesystem::path& path) { return parse_dataset_csv(read_file(path)); }

std::string dataset_to_csv(const Dataset& data) {
    std::string out;
    for (std::size_t j = 0; j < data.columns.size(); ++j) out += (j ? "," : "") + data.columns[j];
    out += "\n";
    for (const auto& row : data.rows) {
        for (std::size_t j = 0; j < row.size(); ++j) out += (j ? "," : "") + format_double(row[j]);
        out += "\n";
    }
    return out;
}

std::string density_to_json(const InterventionDensity& density) {
    json arr = json::array();
    for (const auto& c : density.components()) arr.push_back({{"w", c.weight}, {"mu", c.mean}, {"var", c.variance}});
    return arr.dump();
}

InterventionDensity parse_density_json(std::string_view text) {
    const json doc = parse_json(text);
    if (!doc.is_array()) format_error("density JSON must be an array");
    std::vector<GaussianComponent> comps;
    for (const auto& c : doc) {
        if (!c.is_object() || !c.contains("w") || !c.contains("mu") || !c.contains("var"))
            format_error("density component needs w, mu, var");
        comps.push_back({get_as<double>(c["w"], "w"), get_as<double>(c["mu"], "mu"), get_as<double>(c["var"], "var")});
    }
    try {
        return InterventionDensity(std::move(comps));
    } catch (const Error& e) {
        format_error(std::string("invalid density: ") + e.what());
    }
}

std::string posteriors_to_json(const std::vector<NodePosterior>& posteriors) {
    json arr = json::array();
    for (const auto& p : posteriors) {
        std::vector<double> prec;
        for (Eigen::Index r = 0; r < p.precision.rows(); ++r)
            for (Eigen::Index c = 0; c < p.precision.cols(); ++c) prec.push_back(p.precision(r, c));
        arr.push_back({{"node", p.node}, {"mean", std::vector<double>(p.mean.begin(), p.mean.end())}, {"precision", prec}});
    }
    return arr.dump(2) + "\n";
}

std::vector<NodePosterior> parse_posteriors_json(std::string_view text) {
    const json doc = parse_json(text);
    if (!doc.is_array()) format_error("posterior JSON must be an array");
    std::vector<NodePosterior> out;
    for (const auto& p : doc) {
        if (!p.is_object() || !p.contains("node") || !p.contains("mean") || !p.contains("precision"))
            format_error("posterior entry needs node, mean, precision");
        const auto mean = get_as<std::vector<double>>(p["mean"], "mean");
        const auto prec = get_as<std::vector<double>>(p["precision"], "precision");
        const auto k = static_cast<Eigen::Index>(mean.size());
        if (prec.size() != mean.size() * mean.size()) format_error("precision must be K*K entries");
        NodePosterior np{get_as<std::string>(p["node"], "node"), Eigen::VectorXd(k), Eigen::MatrixXd(k, k)};
        for (Eigen::Index i = 0; i < k; ++i) {
            np.mean(i) = mean[static_cast<std::size_t>(i)];
            for (Eigen::Index j = 0; j < k; ++j) np.precision(i, j) = prec[static_cast<std::size_t>(i * k + j)];
        }
        out.push_back(std::move(np));
    }
    return out;
}

ExperimentConfig parse_experiment_config(std::string_view text, const std::filesystem::path& base_dir) {
    const json doc = parse_json(text);
    if (!doc.is_object()) format_error("experiment config must be an object");
    reject_unknown_keys(doc,
                        {"scenario", "query", "sample_sizes", "trials", "alpha", "model_prior", "methods", "master_seed",
                         "integration", "models"},
                        "experiment config");
    ExperimentConfig cfg;
    try {
        if (doc.contains("scenario")) cfg.scenario = parse_scenario_kind(get_as<std::string>(doc["scenario"], "scenario"));
        if (doc.contains("query")) {
            const auto& q = doc["query"];
            reject_unknown_keys(q, {"intervened", "value", "target"}, "query");
            if (q.contains("intervened")) cfg.query.intervened = get_as<std::string>(q["intervened"], "query.intervened");
            if (q.contains("value")) cfg.query.value = get_as<double>(q["value"], "query.value");
            if (q.contains("target")) cfg.query.target = get_as<std::string>(q["target"], "query.target");
        }
        if (doc.contains("sample_sizes")) cfg.sample_sizes = get_as<std::vector<std::size_t>>(doc["sample_sizes"], "sample_sizes");
        if (doc.contains("trials")) cfg.trials = get_as<std::size_t>(doc["trials"], "trials");
        if (doc.contains("alpha")) cfg.alpha = get_as<double>(doc["alpha"], "alpha");
        if (doc.contains("model_prior")) cfg.model_prior = get_as<std::vector<double>>(doc["model_prior"], "model_prior");
        if (doc.contains("methods"))
            for (const auto& m : get_as<std::vector<std::string>>(doc["methods"], "methods")) cfg.methods.push_back(parse_method(m));
        if (doc.contains("master_seed")) cfg.master_seed = get_as<std::uint64_t>(doc["master_seed"], "master_seed");
        if (doc.contains("integration")) {
            const auto& in = doc["integration"];
            reject_unknown_keys(in, {"quadrature_nodes_per_dim", "max_quadrature_dims", "mc_samples"}, "integration");
            if (in.contains("quadrature_nodes_per_dim"))
                cfg.integration.quadrature_nodes_per_dim = get_as<std::size_t>(in["quadrature_nodes_per_dim"], "quadrature_nodes_per_dim");
            if (in.contains("max_quadrature_dims"))
                cfg.integration.max_quadrature_dims = get_as<std::size_t>(in["max_quadrature_dims"], "max_quadrature_dims");
            if (in.contains("mc_samples")) cfg.integration.mc_samples = get_as<std::size_t>(in["mc_samples"], "mc_samples");
        }
        if (doc.contains("models")) {
            for (const auto& m : doc["models"]) {
                std::string id, path;
                if (m.is_string()) {
                    path = m.get<std::string>();
                    id = std::filesystem::path(path).stem().string();
                } else {
                    reject_unknown_keys(m, {"id", "path"}, "models entry");
                    path = get_as<std::string>(m.value("path", json()), "models[].path");
                    id = m.contains("id") ? get_as<std::string>(m["id"], "models[].id")
                                          : std::filesystem::path(path).stem().string();
                }
                std::filesystem::path p(path);
                if (p.is_relative()) p = base_dir / p;
                cfg.custom_ids.push_back(id);
                cfg.custom_models.push_back(read_model_spec(p));
            }
        }
        cfg.validate();
    } catch (const Error& e) {
        if (e.kind() == ErrorKind::Format || e.kind() == ErrorKind::Io) throw;
        format_error(std::string("invalid experiment config: ") + e.what());
    }
    return cfg;
}

ExperimentConfig read_experiment_config(const std::filesystem::path& path) {
    return parse_experiment_config(read_file(path), path.parent_path());
}

std::string results_to_csv(const std::vector<ResultRow>& rows) {
    std::string out = "scenario,method,n,trial,kl\n";
    for (const auto& r : rows) {
        out += r.scenario + "," + std::string(to_string(r.method)) + "," + std::to_string(r.n) + "," +
               std::to_string(r.trial) + "," + format_double(r.kl) + "\n";
    }
    return out;
}

std::vector<ResultRow> parse_results_csv(std::string_view text) {
    const auto lines = lines_of(text);
    if (lines.empty() || lines[0] != "scenario,method,n,trial,kl") format_error("bad results CSV header");
    std::vector<ResultRow> out;
    for (std::size_t l = 1; l < lines.size(); ++l) {
        const auto c = split(lines[l], ',');
        if (c.size() != 5) format_error("results CSV line " + std::to_string(l + 1) + " needs 5 fields");
        Method m;
        try {
            m = parse_method(c[1]);
        } catch (const Error&) {
            format_error("unknown method '" + std::string(c[1]) + "'");
        }
        out.push_back({std::string(c[0]), m, parse_count(c[2]), parse_count(c[3]), parse_double(c[4])});
    }
    return out;
}

std::string summary_to_csv(const std::vector<SummaryRow>& rows) {
    std::string out = "scenario,method,n,mean_kl,stderr\n";
    for (const auto& r : rows) {
        out += r.scenario + "," + std::string(to_string(r.method)) + "," + std::to_string(r.n) + "," +
               format_double(r.mean_kl) + "," + format_double(r.stderr_kl) + "\n";
    }
    return out;
}

std::vector<SummaryRow> parse_summary_csv(std::string_view text) {
    const auto lines = lines_of(text);
    if (lines.empty() || lines[0] != "scenario,method,n,mean_kl,stderr") format_error("bad summary CSV header");
    std::vector<SummaryRow> out;
    for (std::size_t l = 1; l < lines.size(); ++l) {
        const auto c = split(lines[l], ',');
        if (c.size() != 5) format_error("summary CSV line " + std::to_string(l + 1) + " needs 5 fields");
        Method m;
        try {
            m = parse_method(c[1]);
        } catch (const Error&) {
            format_error("unknown method '" + std::string(c[1]) + "'");
        }
        out.push_back({std::string(c[0]), m, parse_count(c[2]), parse_double(c[3]), parse_double(c[4]), 0});
    }
    return out;
}

}  // namespace causaldo::io
