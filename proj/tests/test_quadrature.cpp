#include <cmath>

#include "causaldo/error.hpp"
#include "causaldo/quadrature.hpp"
#include "doctest.h"

using namespace causaldo;

TEST_SUITE("quadrature") {

TEST_CASE("small rules in closed form") {
    const auto r1 = gauss_hermite(1);
    CHECK(r1.nodes == std::vector<double>{0.0});
    CHECK(r1.weights == std::vector<double>{1.0});

    const auto r2 = gauss_hermite(2);
    CHECK(r2.nodes[0] == doctest::Approx(-1.0).epsilon(1e-15));
    CHECK(r2.nodes[1] == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(r2.weights[0] == doctest::Approx(0.5).epsilon(1e-15));

    const auto r3 = gauss_hermite(3);
    CHECK(r3.nodes[0] == doctest::Approx(-std::sqrt(3.0)).epsilon(1e-15));
    CHECK(r3.nodes[1] == 0.0);
    CHECK(r3.weights[1] == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
    CHECK(r3.weights[2] == doctest::Approx(1.0 / 6.0).epsilon(1e-15));
}

TEST_CASE("normal moments are exact up to degree 2n - 1") {
    // E[Z^2k] = (2k - 1)!!
    for (std::size_t n : {4u, 8u, 16u, 32u, 64u}) {
        const auto r = gauss_hermite(n);
        double total = 0.0;
        for (double w : r.weights) total += w;
        CHECK(total == doctest::Approx(1.0).epsilon(1e-14));
        double double_factorial = 1.0;
        for (std::size_t k = 1; 2 * k < 2 * n && k <= 8; ++k) {
            double m = 0.0, odd = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                m += r.weights[i] * std::pow(r.nodes[i], static_cast<double>(2 * k));
                odd += r.weights[i] * std::pow(r.nodes[i], static_cast<double>(2 * k - 1));
            }
            double_factorial *= static_cast<double>(2 * k - 1);
            CHECK(m == doctest::Approx(double_factorial).epsilon(1e-12));
            CHECK(std::abs(odd) < 1e-10 * double_factorial);
        }
    }
}

TEST_CASE("smooth integrands converge") {
    // E[cos Z] = exp(-1/2)
    for (std::size_t n : {16u, 32u, 100u, 256u, 512u}) {
        const auto r = gauss_hermite(n);
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += r.weights[i] * std::cos(r.nodes[i]);
        CHECK(s == doctest::Approx(std::exp(-0.5)).epsilon(1e-13));
    }
}

TEST_CASE("nodes ascend and are symmetric") {
    const auto r = gauss_hermite(33);
    for (std::size_t i = 1; i < r.nodes.size(); ++i) CHECK(r.nodes[i] > r.nodes[i - 1]);
    for (std::size_t i = 0; i < r.nodes.size(); ++i) {
        CHECK(r.nodes[i] == doctest::Approx(-r.nodes[r.nodes.size() - 1 - i]));
        CHECK(r.weights[i] == doctest::Approx(r.weights[r.nodes.size() - 1 - i]));
    }
}

TEST_CASE("order bounds") {
    CHECK_THROWS_AS(gauss_hermite(0), Error);
    CHECK_THROWS_AS(gauss_hermite(513), Error);
}

}  // TEST_SUITE
