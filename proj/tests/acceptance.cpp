// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <chrono>
#include <cmath>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <sstream>

#include "causaldo/cli.hpp"
#include "causaldo/estimators.hpp"
#include "causaldo/evaluation.hpp"
#include "causaldo/experiment.hpp"
#include "causaldo/io.hpp"
#include "oracles.hpp"
#include "sem_helpers.hpp"

using namespace causaldo;

namespace {

struct Verdict {
    bool pass;
    std::string detail;
};

int failures = 0;

void criterion(int id, const std::string& name, double limit_s, const std::function<Verdict()>& body) {
    const auto t0 = std::chrono::steady_clock::now();
    Verdict v{false, ""};
    try {
        v = body();
    } catch (const std::exception& e) {
        v = {false, std::string("exception: ") + e.what()};
    }
    const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (limit_s > 0 && s > limit_s) {
        v.pass = false;
        v.detail += " (over the " + std::to_string(static_cast<int>(limit_s)) + " s limit)";
    }
    if (!v.pass) ++failures;
    std::ostringstream line;
    line.precision(3);
    line << (v.pass ? "PASS" : "FAIL") << " [" << id << "] " << name << ": " << v.detail << " (" << std::fixed << s
         << " s)";
    std::cout << line.str() << std::endl;
}

std::string fmt(double v) {
    std::ostringstream o;
    o.precision(4);
    o << v;
    return o.str();
}

struct Gap {
    double mean, se;
    bool positive() const { return mean - 1.96 * se > 0.0; }
    std::string str() const { return fmt(mean) + " +- " + fmt(1.96 * se); }
};

/// Paired difference a - b of the per-trial losses at sample size n.
Gap paired_gap(const ResultTable& t, Method a, Method b, std::size_t n) {
    std::map<std::size_t, double> la, lb;
    for (const auto& r : t.rows) {
        if (r.n != n) continue;
        if (r.method == a) la[r.trial] = r.kl;
        if (r.method == b) lb[r.trial] = r.kl;
    }
    std::vector<double> d;
    for (const auto& [trial, v] : la) d.push_back(v - lb.at(trial));
    const auto s = summarize_losses(d);
    return {s.mean_kl, s.stderr_kl};
}

double mean_kl(const ResultTable& t, Method m, std::size_t n) {
    for (const auto& s : t.summary)
        if (s.method == m && s.n == n) return s.mean_kl;
    throw std::runtime_error("missing summary cell");
}

ExperimentConfig experiment(ScenarioKind kind) {
    ExperimentConfig c;
    c.scenario = kind;
    c.sample_sizes = {5, 200};
    c.trials = 1000;
    c.master_seed = 0;
    return c;
}

// Conjugate 1-D posterior of y = theta * x + N(0, 1) under theta ~ N(0, 1/alpha).
std::pair<double, double> posterior_1d(const std::vector<double>& x, const std::vector<double>& y, double alpha) {
    double xx = alpha, xy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        xx += x[i] * x[i];
        xy += x[i] * y[i];
    }
    return {xy / xx, 1.0 / xx};
}

std::map<ScenarioKind, ResultTable> tables;

const ResultTable& table_for(ScenarioKind kind) {
    auto it = tables.find(kind);
    if (it == tables.end()) it = tables.emplace(kind, run_experiment(experiment(kind))).first;
    return it->second;
}

}  // namespace

int main() {
    criterion(1, "chain do-distribution matches N(b a x, 1 + b^2)", 1.0, [] {
        std::mt19937_64 rng(1);
        std::uniform_real_distribution<double> u(-2.0, 2.0);
        double worst = 0.0;
        for (int i = 0; i < 50; ++i) {
            const double a = u(rng), b = u(rng), x = u(rng);
            const auto d = true_intervention_distribution(chain_sem(a, b), {"X", x, "Y"});
            worst = std::max({worst, std::abs(d.mean() - b * a * x), std::abs(d.variance() - (1.0 + b * b))});
            if (!d.is_gaussian()) return Verdict{false, "not a single Gaussian"};
        }
        return Verdict{worst <= 1e-12, "max abs error " + fmt(worst) + " over 50 draws"};
    });

    criterion(2, "exact do-moments within 3 MC standard errors on 20 DAGs", 120.0, [] {
        std::mt19937_64 rng(2);
        std::uniform_real_distribution<double> u(-2.0, 2.0);
        double worst = 0.0;
        for (int i = 0; i < 20; ++i) {
            auto make = [&]() -> RandomCase {
                if (i != 0) return random_case(rng, 6);
                const double txz = u(rng), tyx = u(rng), tyz = u(rng);
                return {confounded_sem(txz, tyx, tyz),
                        {{{}, {0}, {1, 0}}, {{}, {txz}, {tyx, tyz}}, {0, 0, 0}, {1, 1, 1}, {1, 1, 1}},
                        {"X", u(rng), "Y"},
                        1,
                        2};
            };
            const RandomCase c = make();
            const auto d = true_intervention_distribution(c.sem, c.query);
            const auto mc = oracle::mutilated_monte_carlo(c.plain, c.pinned, c.query.value, c.target, 1'000'000,
                                                          1000 + static_cast<std::uint64_t>(i));
            worst = std::max({worst, std::abs(mc.mean - d.mean()) / mc.mean_se,
                              std::abs(mc.var - d.variance()) / mc.var_se});
        }
        return Verdict{worst < 3.0, "largest deviation " + fmt(worst) + " SE (G2 plus 19 random DAGs, 1e6 draws each)"};
    });

    criterion(3, "Bayes predictive vs brute-force grid (TV) and vs 200k-draw MC (KL)", 300.0, [] {
        std::mt19937_64 rng(3);
        std::normal_distribution<double> g(0.0, 1.0);
        const auto g1 = SemStructure::with_defaults(chain_diagram());
        const auto g2 = SemStructure::with_defaults(confounded_diagram());
        const InterventionQuery q{"X", 1.0, "Y"};
        std::vector<double> ys;
        for (int k = 0; k <= 1200; ++k) ys.push_back(-12.0 + 0.02 * k);

        double worst_tv = 0.0;
        for (std::size_t n = 0; n <= 3; ++n) {
            for (int rep = 0; rep < 2; ++rep) {
                Dataset data{{"X", "Z", "Y"}, {}};
                std::vector<double> x, z, y;
                for (std::size_t i = 0; i < n; ++i) {
                    x.push_back(g(rng));
                    z.push_back(1.5 * g(rng));
                    y.push_back(1.5 * g(rng));
                    data.rows.push_back({x.back(), z.back(), y.back()});
                }
                const auto [ma, va] = posterior_1d(x, z, 1.0);
                const auto [mb, vb] = posterior_1d(z, y, 1.0);
                const auto grid = oracle::chain_bayes_density_grid(ma, va, mb, vb, 1.0, ys);
                const auto ours = estimate_bayes_fixed_model(g1, data, PriorSpec{1.0}, q).pdf(std::span<const double>(ys));
                double tv = 0.0;
                for (std::size_t k = 0; k + 1 < ys.size(); ++k)
                    tv += 0.5 * 0.02 * 0.5 * (std::abs(ours[k] - grid[k]) + std::abs(ours[k + 1] - grid[k + 1]));
                worst_tv = std::max(worst_tv, tv);
            }
        }

        double worst_kl = 0.0;
        for (int i = 0; i < 20; ++i) {
            const bool chain = i % 2 == 0;
            const auto& s = chain ? g1 : g2;
            const auto sem = chain ? chain_sem(g(rng), g(rng)) : confounded_sem(g(rng), g(rng), g(rng));
            const auto data = sample_dataset(sem, 1 + static_cast<std::size_t>(i % 5), rng());
            IntegrationSettings mc;
            mc.max_quadrature_dims = 1;
            mc.mc_samples = 200'000;
            mc.mc_seed = rng();
            const auto quad = estimate_bayes_fixed_model(s, data, PriorSpec{1.0}, q);
            const auto draws = estimate_bayes_fixed_model(s, data, PriorSpec{1.0}, q, mc);
            worst_kl = std::max(worst_kl, kl_mixture_vs_mixture(quad, draws, 2001));
        }
        return Verdict{worst_tv < 1e-3 && worst_kl < 1e-3,
                       "max TV " + fmt(worst_tv) + " on 8 G1 datasets (N <= 3), max KL " + fmt(worst_kl) +
                           " on 20 instances"};
    });

    for (auto kind : {ScenarioKind::G1_KNOWN, ScenarioKind::G2_KNOWN}) {
        const std::string name = std::string(to_string(kind));
        criterion(4, name + " n=5: BAYES < MAP < ML, paired 95% CIs exclude 0", 600.0, [&] {
            const auto& t = table_for(kind);
            const auto a = paired_gap(t, Method::MAP, Method::BAYES, 5);
            const auto b = paired_gap(t, Method::ML, Method::MAP, 5);
            return Verdict{a.positive() && b.positive(), "MAP-BAYES " + a.str() + ", ML-MAP " + b.str() + " (1000 trials)"};
        });
    }

    for (auto kind : {ScenarioKind::G1_KNOWN, ScenarioKind::G2_KNOWN}) {
        const std::string name = std::string(to_string(kind));
        criterion(5, name + " n=200: mean KL < 0.05 and pairwise gaps < 0.01", 600.0, [&] {
            const auto& t = table_for(kind);
            const double ml = mean_kl(t, Method::ML, 200), map = mean_kl(t, Method::MAP, 200),
                         bayes = mean_kl(t, Method::BAYES, 200);
            const double gap = std::max({std::abs(ml - map), std::abs(ml - bayes), std::abs(map - bayes)});
            return Verdict{std::max({ml, map, bayes}) < 0.05 && gap < 0.01,
                           "ML " + fmt(ml) + ", MAP " + fmt(map) + ", BAYES " + fmt(bayes) + ", max gap " + fmt(gap)};
        });
    }

    criterion(6, "MODEL_UNKNOWN: BMA < MAP_MODEL at n=5; gap < 0.01 and true-model weight > 0.95 at n=200", 900.0, [] {
        const auto& t = table_for(ScenarioKind::MODEL_UNKNOWN);
        const auto small = paired_gap(t, Method::MAP_MODEL, Method::BAYES_MODEL_AVG, 5);
        const double gap = std::abs(mean_kl(t, Method::MAP_MODEL, 200) - mean_kl(t, Method::BAYES_MODEL_AVG, 200));
        double weight = 0.0;
        std::size_t count = 0;
        for (const auto& r : t.trials) {
            if (r.n != 200) continue;
            weight += r.true_model_weight;
            ++count;
        }
        weight /= static_cast<double>(count);
        return Verdict{small.positive() && gap < 0.01 && weight > 0.95,
                       "n=5 MAP_MODEL-BMA " + small.str() + ", n=200 gap " + fmt(gap) + ", mean true-model weight " +
                           fmt(weight)};
    });

    criterion(7, "KL oracles", 0.0, [] {
        double worst = 0.0;
        worst = std::max(worst, std::abs(kl_gaussian_gaussian({0, 1}, {0, 1})));
        worst = std::max(worst, std::abs(kl_gaussian_gaussian({0, 1}, {1, 1}) - 0.5));
        worst = std::max(worst, std::abs(kl_gaussian_gaussian({0, 4}, {0, 1}) - (std::log(0.5) + 1.5)));
        std::mt19937_64 rng(7);
        std::uniform_real_distribution<double> mean(-3, 3), var(0.2, 5);
        double worst_mix = 0.0;
        for (int i = 0; i < 100; ++i) {
            const GaussianMoments p{mean(rng), var(rng)}, q{mean(rng), var(rng)};
            worst_mix = std::max(worst_mix, std::abs(kl_gaussian_vs_mixture(p, InterventionDensity::gaussian(q.mean, q.variance)) -
                                                     kl_gaussian_gaussian(p, q)));
        }
        return Verdict{worst <= 1e-10 && worst_mix <= 1e-8,
                       "closed-form error " + fmt(worst) + ", single-component mixture error " + fmt(worst_mix)};
    });

    criterion(8, "experiment CLI is byte-identical across runs", 0.0, [] {
        namespace fs = std::filesystem;
        const auto dir = fs::temp_directory_path() / "causaldo_acceptance";
        fs::create_directories(dir);
        const auto cfg = (dir / "cfg.json").string();
        io::write_file(cfg, R"({"scenario":"MODEL_UNKNOWN","sample_sizes":[3,8],"trials":20,"master_seed":42})");
        std::ostringstream out, err;
        auto run = [&](const std::string& tag) {
            return run_cli({"causaldo", "experiment", "--config", cfg, "--out", (dir / ("r" + tag + ".csv")).string(),
                            "--summary", (dir / ("s" + tag + ".csv")).string()},
                           out, err);
        };
        const int c1 = run("1"), c2 = run("2");
        const bool same = c1 == 0 && c2 == 0 && io::read_file(dir / "r1.csv") == io::read_file(dir / "r2.csv") &&
                          io::read_file(dir / "s1.csv") == io::read_file(dir / "s2.csv");
        const auto bytes = fs::file_size(dir / "r1.csv");
        fs::remove_all(dir);
        return Verdict{same, same ? "results and summary identical (" + std::to_string(bytes) + " bytes)" : err.str()};
    });

    std::cout << (failures == 0 ? "ALL PASS" : std::to_string(failures) + " FAILED") << std::endl;
    return failures == 0 ? 0 : 1;
}
