#include "causaldo/quadrature.hpp"

#include <Eigen/Dense>
#include <cmath>

#include "causaldo/error.hpp"

namespace causaldo {

GaussHermiteRule gauss_hermite(std::size_t n) {
    CAUSALDO_REQUIRE(n >= 1 && n <= 512, ErrorKind::InvalidArgument, "Gauss-Hermite order must be in [1, 512]");
    // Roots of the physicists' H_n (weight exp(-x^2)), then rescaled to the
    // standard normal: z = sqrt(2) x, w = w_phys / sqrt(pi).
    constexpr long double kPiM4 = 0.7511255444649424828587030047762276930510L;  // pi^(-1/4)
    constexpr long double kSqrtPi = 1.772453850905516027298167483341145182798L;
    constexpr long double kEps = 1e-17L;
    constexpr int kMaxIter = 100;

    const auto nl = static_cast<long double>(n);
    // Starting points from the eigenvalues of the Jacobi matrix, polished by
    // Newton on the orthonormal recurrence in long double.
    Eigen::VectorXd diag = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
    Eigen::VectorXd sub(static_cast<Eigen::Index>(n > 1 ? n - 1 : 0));
    for (Eigen::Index k = 0; k < sub.size(); ++k) sub(k) = std::sqrt(static_cast<double>(k + 1) / 2.0);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig;
    eig.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
    CAUSALDO_REQUIRE(eig.info() == Eigen::Success, ErrorKind::NumericalFailure, "Jacobi eigenvalues failed");

    std::vector<long double> x(n), w(n);
    const std::size_t half = (n + 1) / 2;
    for (std::size_t i = 0; i < half; ++i) {
        // eigenvalues ascend; x[] is filled from the largest root down
        long double z = eig.eigenvalues()(static_cast<Eigen::Index>(n - 1 - i));
        long double pp = 0.0L;
        int iter = 0;
        for (; iter < kMaxIter; ++iter) {
            long double p1 = kPiM4, p2 = 0.0L;
            for (std::size_t j = 0; j < n; ++j) {
                const long double p3 = p2;
                p2 = p1;
                const auto jl = static_cast<long double>(j);
                p1 = z * std::sqrt(2.0L / (jl + 1.0L)) * p2 - std::sqrt(jl / (jl + 1.0L)) * p3;
            }
            pp = std::sqrt(2.0L * nl) * p2;
            const long double z1 = z;
            z = z1 - p1 / pp;
            if (std::abs(z - z1) <= kEps * std::max(1.0L, std::abs(z))) break;
        }
        CAUSALDO_REQUIRE(iter < kMaxIter, ErrorKind::NumericalFailure, "Gauss-Hermite Newton iteration did not converge");
        x[i] = z;
        x[n - 1 - i] = -z;
        w[i] = 2.0L / (pp * pp);
        w[n - 1 - i] = w[i];
    }

    GaussHermiteRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    long double total = 0.0L;
    for (std::size_t i = 0; i < n; ++i) total += w[i] / kSqrtPi;
    // x[] descends; emit ascending.
    for (std::size_t i = 0; i < n; ++i) {
        rule.nodes[i] = static_cast<double>(std::sqrt(2.0L) * x[n - 1 - i]);
        rule.weights[i] = static_cast<double>(w[n - 1 - i] / kSqrtPi / total);
    }
    if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
    return rule;
}

}  // namespace causaldo
