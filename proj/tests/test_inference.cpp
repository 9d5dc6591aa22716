#include <algorithm>
#include <limits>
#include <random>

#include "causaldo/error.hpp"
#include "causaldo/inference.hpp"
#include "doctest.h"
#include "oracles.hpp"
#include "sem_helpers.hpp"

using namespace causaldo;

namespace {

CausalDiagram z_to_y() { return validate_dag({"Z", "Y"}, {{"Z", "Y"}}); }

Dataset zy_data(std::vector<double> z, std::vector<double> y) {
    Dataset d{{"Z", "Y"}, {}};
    for (std::size_t i = 0; i < z.size(); ++i) d.rows.push_back({z[i], y[i]});
    return d;
}

ModelSet two_models(const SemStructure& a, const SemStructure& b, double pa) {
    return ModelSet{{{"A", a, PriorSpec{1.0}, pa}, {"B", b, PriorSpec{1.0}, 1.0 - pa}}};
}

}  // namespace

TEST_SUITE("inference") {

TEST_CASE("node_posterior: two-point example") {
    const auto post = node_posterior(z_to_y(), "Y", zy_data({1, 2}, {1, 2}), PriorSpec{1.0});
    REQUIRE(post.precision.rows() == 1);
    CHECK(post.precision(0, 0) == doctest::Approx(6.0));
    CHECK(post.mean(0) == doctest::Approx(5.0 / 6.0));
}

TEST_CASE("node_posterior: empty data returns the prior") {
    const Dataset empty{{"Z", "X", "Y"}, {}};
    const auto post = node_posterior(confounded_diagram(), "Y", empty, PriorSpec{1.0});
    CHECK(post.mean.isZero());
    CHECK(post.precision.isApprox(Eigen::MatrixXd::Identity(2, 2)));
}

TEST_CASE("node_posterior: a huge alpha pins the mean at zero") {
    const auto post = node_posterior(z_to_y(), "Y", zy_data({1, -2, 0.5}, {3, 1, -2}), PriorSpec{1e8});
    CHECK(std::abs(post.mean(0)) < 1e-6);
}

TEST_CASE("node_posterior: noise variance scales the likelihood") {
    auto s = SemStructure::with_defaults(z_to_y());
    s.noise_variance[1] = 4.0;
    const auto post = node_posterior(s, "Y", zy_data({1, 2}, {1, 2}), PriorSpec{1.0});
    CHECK(post.precision(0, 0) == doctest::Approx(1.0 + 5.0 / 4.0));
    CHECK(post.mean(0) == doctest::Approx((5.0 / 4.0) / (1.0 + 5.0 / 4.0)));
}

TEST_CASE("node_posterior errors") {
    try {
        node_posterior(z_to_y(), "Z", zy_data({1}, {1}), PriorSpec{1.0});
        FAIL("root accepted");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::RootNodeHasNoCoefficients);
    }
    try {
        node_posterior(z_to_y(), "Y", Dataset{{"Y"}, {{1.0}}}, PriorSpec{1.0});
        FAIL("missing column accepted");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::MissingColumn);
    }
    CHECK_THROWS_AS(node_posterior(z_to_y(), "Y", zy_data({1}, {1}), PriorSpec{0.0}), Error);
}

TEST_CASE("ml_estimate examples") {
    CHECK(ml_estimate(z_to_y(), "Y", zy_data({1, 2}, {1, 2}))(0) == doctest::Approx(1.0));
    CHECK(ml_estimate(z_to_y(), "Y", zy_data({}, {})).isZero());
    CHECK(ml_estimate(z_to_y(), "Y", zy_data({2}, {1}))(0) == doctest::Approx(0.5));
    // duplicated regressor: minimum-norm solution splits the effect
    Dataset dup{{"Z", "X", "Y"}, {{1, 1, 2}, {2, 2, 4}}};
    const auto theta = ml_estimate(confounded_diagram(), "Y", dup);
    CHECK(theta(0) == doctest::Approx(1.0));
    CHECK(theta(1) == doctest::Approx(1.0));
    // fewer rows than parents
    Dataset one{{"Z", "X", "Y"}, {{1, 2, 5}}};
    const auto t1 = ml_estimate(confounded_diagram(), "Y", one);
    CHECK(t1(0) == doctest::Approx(2.0));   // (x, z) = (2, 1): theta = 5 (2, 1) / 5
    CHECK(t1(1) == doctest::Approx(1.0));
}

TEST_CASE("map_estimate is the posterior mean") {
    NodePosterior p{"Y", Eigen::VectorXd::Constant(1, 5.0 / 6.0), Eigen::MatrixXd::Constant(1, 1, 6.0)};
    CHECK(map_estimate(p)(0) == 5.0 / 6.0);
    const auto prior_only = node_posterior(z_to_y(), "Y", zy_data({}, {}), PriorSpec{2.0});
    CHECK(map_estimate(prior_only).isZero());
}

TEST_CASE("log_evidence: trivial cases") {
    const auto chain = SemStructure::with_defaults(chain_diagram());
    CHECK(log_evidence(chain, Dataset{{"X", "Z", "Y"}, {}}, PriorSpec{1.0}) == 0.0);
    const auto single = SemStructure::with_defaults(validate_dag({"X"}, {}));
    CHECK(log_evidence(single, Dataset{{"X"}, {{0.0}}}, PriorSpec{1.0}) ==
          doctest::Approx(-0.91893853320467274).epsilon(1e-14));
}

TEST_CASE("log_evidence: chain matches brute-force integration for N <= 3") {
    std::mt19937_64 rng(8);
    std::normal_distribution<double> g(0.0, 1.5);
    const auto chain = SemStructure::with_defaults(chain_diagram());
    for (std::size_t n = 1; n <= 3; ++n) {
        for (int rep = 0; rep < 5; ++rep) {
            for (double alpha : {0.5, 1.0, 3.0}) {
                std::vector<double> x(n), z(n), y(n);
                Dataset data{{"X", "Z", "Y"}, {}};
                for (std::size_t i = 0; i < n; ++i) {
                    x[i] = g(rng);
                    z[i] = g(rng);
                    y[i] = g(rng);
                    data.rows.push_back({x[i], z[i], y[i]});
                }
                double expected = oracle::log_evidence_1d_trapezoid(x, z, alpha) +
                                  oracle::log_evidence_1d_trapezoid(z, y, alpha);
                for (double v : x) expected += std::log(oracle::normal_pdf(v, 0.0, 1.0));
                CHECK(std::abs(log_evidence(chain, data, PriorSpec{alpha}) - expected) < 1e-4);
            }
        }
    }
}

TEST_CASE("model_posterior examples") {
    const auto chain = SemStructure::with_defaults(chain_diagram());
    const auto data = sample_dataset(chain_sem(0.3, -0.8), 20, 1);
    const auto same = model_posterior(two_models(chain, chain, 0.5), data);
    CHECK(same.weights[0] == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(same.weights[1] == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(same.mode() == 0);   // tie goes to "A"

    const auto conf = SemStructure::with_defaults(confounded_diagram());
    const auto pinned = model_posterior(two_models(chain, conf, 1.0), sample_dataset(confounded_sem(2, 2, 2), 50, 3));
    CHECK(pinned.weights[0] == 1.0);
    CHECK(pinned.weights[1] == 0.0);

    const double inf = std::numeric_limits<double>::infinity();
    try {
        model_posterior(two_models(chain, conf, 0.5), std::vector<double>{-inf, -inf});
        FAIL("expected AllWeightsUnderflow");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::AllWeightsUnderflow);
    }
}

TEST_CASE("model_posterior tie-break uses the smallest id, not position") {
    const auto chain = SemStructure::with_defaults(chain_diagram());
    ModelSet set{{{"zeta", chain, PriorSpec{1.0}, 0.5}, {"alpha", chain, PriorSpec{1.0}, 0.5}}};
    const auto post = model_posterior(set, sample_dataset(chain_sem(1, 1), 10, 2));
    CHECK(post.ids[post.mode()] == "alpha");
}

TEST_CASE("model_posterior identifies the confounded diagram at n = 200") {
    const ModelSet set{{{"G1", SemStructure::with_defaults(chain_diagram()), PriorSpec{1.0}, 0.5},
                        {"G2", SemStructure::with_defaults(confounded_diagram()), PriorSpec{1.0}, 0.5}}};
    std::mt19937_64 rng(2718);
    std::normal_distribution<double> prior(0.0, 1.0);
    int confident = 0;
    for (int trial = 0; trial < 200; ++trial) {
        const auto sem = confounded_sem(prior(rng), prior(rng), prior(rng));
        const auto post = model_posterior(set, sample_dataset(sem, 200, rng()));
        if (post.weight_of("G2") > 0.95) ++confident;
    }
    MESSAGE("G2 weight > 0.95 in " << confident << " / 200 trials");
    CHECK(confident >= 180);
}

TEST_CASE("property: MAP tends to ML as alpha -> 0") {
    std::mt19937_64 rng(5);
    for (int rep = 0; rep < 20; ++rep) {
        const auto data = sample_dataset(confounded_sem(0.5, -1.0, 0.7), 4 + rep, rng());
        const auto ml = ml_estimate(confounded_diagram(), "Y", data);
        const auto map = map_estimate(node_posterior(confounded_diagram(), "Y", data, PriorSpec{1e-8}));
        CHECK((ml - map).cwiseAbs().maxCoeff() < 1e-5);
    }
}

TEST_CASE("property: posterior precision eigenvalues are at least alpha") {
    std::mt19937_64 rng(6);
    for (int rep = 0; rep < 30; ++rep) {
        const double alpha = 0.1 + 0.2 * rep;
        const auto data = sample_dataset(confounded_sem(1, 1, 1), static_cast<std::size_t>(rep % 7), rng());
        const auto post = node_posterior(confounded_diagram(), "Y", data, PriorSpec{alpha});
        CHECK(post.precision.isApprox(post.precision.transpose(), 1e-10));
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(post.precision);
        CHECK(es.eigenvalues().minCoeff() >= alpha * (1 - 1e-12));
    }
}

TEST_CASE("property: log_evidence is invariant under row permutation") {
    std::mt19937_64 rng(9);
    const auto conf = SemStructure::with_defaults(confounded_diagram());
    for (int rep = 0; rep < 20; ++rep) {
        auto data = sample_dataset(confounded_sem(0.4, 1.1, -0.3), 15, rng());
        const double before = log_evidence(conf, data, PriorSpec{1.0});
        std::shuffle(data.rows.begin(), data.rows.end(), rng);
        CHECK(log_evidence(conf, data, PriorSpec{1.0}) == doctest::Approx(before).epsilon(1e-12));
    }
}

TEST_CASE("property: model weights ignore a common shift of the log evidences") {
    const auto chain = SemStructure::with_defaults(chain_diagram());
    const auto conf = SemStructure::with_defaults(confounded_diagram());
    const auto set = two_models(chain, conf, 0.3);
    for (double shift : {-500.0, -1.0, 0.0, 7.5, 900.0}) {
        const auto a = model_posterior(set, std::vector<double>{-12.0, -10.5});
        const auto b = model_posterior(set, std::vector<double>{-12.0 + shift, -10.5 + shift});
        CHECK(a.weights[0] == doctest::Approx(b.weights[0]).epsilon(1e-12));
        CHECK(a.weights[1] == doctest::Approx(b.weights[1]).epsilon(1e-12));
    }
}

}  // TEST_SUITE
