#include <doctest.h>

#include "gcon/calibration.hpp"
#include "gcon/errors.hpp"
#include "gcon/rng.hpp"
#include "gcon/sensitivity.hpp"

#include <cmath>

using namespace gcon;

namespace {

// Independent P(d, u) = 1 - e^-u sum_{k<d} u^k/k!, direct evaluation
// (adequate for the small d used here).
double gamma_cdf(int d, double u) {
    double term = 1.0, sum = 1.0;
    for (int k = 1; k < d; ++k) {
        term *= u / k;
        sum += term;
    }
    return 1.0 - std::exp(-u) * sum;
}

} // namespace

TEST_CASE("compute_c_sf") {
    SUBCASE("d = 1 closed form") {
        CHECK(compute_c_sf(1, std::exp(-1.0), 1) == doctest::Approx(1.0).epsilon(1e-8));
        CHECK(compute_c_sf(1, 0.9999, 1) < 1e-3);
    }
    SUBCASE("result is the minimal crossing point") {
        for (int d : {1, 3, 8, 20}) {
            const double delta = 1e-4;
            const int c = 3;
            const double u = compute_c_sf(d, delta, c);
            CHECK(gamma_cdf(d, u) >= 1.0 - delta / c - 1e-12);
            CHECK(gamma_cdf(d, u - 1e-6) < 1.0 - delta / c);
        }
    }
    SUBCASE("validation") {
        CHECK_THROWS_AS(compute_c_sf(0, 0.1, 2), std::invalid_argument);
        CHECK_THROWS_AS(compute_c_sf(3, 2.5, 2), std::invalid_argument);
    }
}

TEST_CASE("calibrate worked instance against a straight-line recompute") {
    PrivacyBudget budget{1.0, 1e-3, 0.9};
    LossSpec loss{LossKind::MultilabelSoftMargin, 2};
    PropagationConfig prop{0.5, {1}};
    const int n1 = 100, d = 4;
    const auto r = calibrate(budget, loss, prop, n1, d, 1.0, 1e-3);

    // Theorem 1 cascade, written out independently.
    const double c1 = 1.0 / 2, c2 = 1.0 / 8, c3 = 1.0 / (12 * std::sqrt(3.0));
    const double Psi = 2.0 * 0.5 / 0.5 * (1.0 - 0.5); // = 1
    const double c_sf = compute_c_sf(d, budget.delta, loss.c);
    const double we = 0.9 * 1.0;
    const double Lambda =
        std::max(1.0, 2 * c2 * Psi * c_sf / (n1 * we) + 1e-3);
    const double c_theta = (n1 * we * c1 + 2 * c1 * Psi * c_sf)
                         / (n1 * we * Lambda - 2 * c2 * Psi * c_sf);
    const double eps_Lambda =
        2.0 * d * std::log1p((2 * c2 + c3 * c_theta) * Psi / (d * n1 * Lambda));
    const double LambdaPrime =
        eps_Lambda <= 0.1 ? 0.0
                          : 2 * (2 * c2 + c3 * c_theta) * Psi / (n1 * 0.1) - Lambda;
    const double beta =
        std::max(1.0 - eps_Lambda, we) / (2 * (c1 + c2 * c_theta) * Psi);

    CHECK(r.c1 == doctest::Approx(c1).epsilon(1e-12));
    CHECK(r.c2 == doctest::Approx(c2).epsilon(1e-12));
    CHECK(r.c3 == doctest::Approx(c3).epsilon(1e-12));
    CHECK(r.PsiZ == doctest::Approx(Psi).epsilon(1e-12));
    CHECK(r.c_sf == doctest::Approx(c_sf).epsilon(1e-12));
    CHECK(r.Lambda_eff == doctest::Approx(Lambda).epsilon(1e-12));
    CHECK(r.c_theta == doctest::Approx(c_theta).epsilon(1e-12));
    CHECK(r.epsilon_Lambda == doctest::Approx(eps_Lambda).epsilon(1e-12));
    CHECK(r.LambdaPrime == doctest::Approx(LambdaPrime).epsilon(1e-12));
    CHECK(r.beta == doctest::Approx(beta).epsilon(1e-12));
    CHECK((r.LambdaPrime == 0.0)
          == (r.branch == CalibrationBranch::LambdaPrimeZero));
}

TEST_CASE("calibrate branches and monotonicity") {
    LossSpec loss{LossKind::MultilabelSoftMargin, 2};
    SUBCASE("alpha = 1 takes the no-noise path") {
        const auto r = calibrate({1.0, 1e-3, 0.9}, loss, {1.0, {3}}, 50, 4, 1.0);
        CHECK(r.branch == CalibrationBranch::NoNoise);
        CHECK(r.LambdaPrime == 0.0);
        CHECK(std::isinf(r.beta));
    }
    SUBCASE("steps all zero also takes it") {
        const auto r = calibrate({1.0, 1e-3, 0.9}, loss, {0.5, {0, 0}}, 50, 4, 1.0);
        CHECK(r.branch == CalibrationBranch::NoNoise);
    }
    SUBCASE("beta strictly increases in epsilon") {
        const auto a = calibrate({1.0, 1e-3, 0.9}, loss, {0.5, {1}}, 100, 4, 1.0);
        const auto b = calibrate({2.0, 1e-3, 0.9}, loss, {0.5, {1}}, 100, 4, 1.0);
        CHECK(b.beta > a.beta);
    }
    SUBCASE("beta strictly decreases in Psi") {
        const auto a = calibrate({1.0, 1e-3, 0.9}, loss, {0.5, {1}}, 100, 4, 1.0);
        const auto b = calibrate({1.0, 1e-3, 0.9}, loss, {0.5, {3}}, 100, 4, 1.0);
        CHECK(sensitivity_bound({0.5, {3}}) > sensitivity_bound({0.5, {1}}));
        CHECK(b.beta < a.beta);
    }
    SUBCASE("branch predicate over a random sweep") {
        Rng rng(17);
        for (int k = 0; k < 60; ++k) {
            PrivacyBudget budget{0.1 + 4.0 * rng.uniform(),
                                 std::pow(10.0, -1.0 - 3.0 * rng.uniform()),
                                 0.05 + 0.9 * rng.uniform()};
            LossSpec ls{k % 2 ? LossKind::PseudoHuber
                              : LossKind::MultilabelSoftMargin,
                        2 + static_cast<int>(rng.below(5)), 0.2 + rng.uniform()};
            PropagationConfig pc{0.1 + 0.9 * rng.uniform(),
                                 {1 + static_cast<int>(rng.below(4))}};
            const int n1 = 10 + static_cast<int>(rng.below(500));
            const int dd = 1 + static_cast<int>(rng.below(32));
            const auto r = calibrate(budget, ls, pc, n1, dd,
                                     0.01 + rng.uniform(), 1e-3);
            if (r.branch == CalibrationBranch::NoNoise) continue;
            const bool zero = r.epsilon_Lambda <= (1.0 - budget.omega) * budget.epsilon;
            CHECK((r.branch == CalibrationBranch::LambdaPrimeZero) == zero);
            CHECK((r.LambdaPrime == 0.0) == zero);
            CHECK(r.LambdaPrime >= 0.0);
            CHECK(r.beta > 0.0);
            const double floor = r.c * r.c2 * r.PsiZ * r.c_sf
                               / (n1 * budget.omega * budget.epsilon) + r.xi;
            CHECK(r.Lambda_eff >= floor - 1e-12);
            CHECK(r.c_theta > 0.0);
        }
    }
    SUBCASE("validation") {
        CHECK_THROWS_AS(calibrate({-1.0, 1e-3, 0.9}, loss, {0.5, {1}}, 10, 2, 1.0),
                        std::invalid_argument);
        CHECK_THROWS_AS(calibrate({1.0, 0.0, 0.9}, loss, {0.5, {1}}, 10, 2, 1.0),
                        std::invalid_argument);
        CHECK_THROWS_AS(calibrate({1.0, 1e-3, 1.0}, loss, {0.5, {1}}, 10, 2, 1.0),
                        std::invalid_argument);
        CHECK_THROWS_AS(calibrate({1.0, 1e-3, 0.9}, loss, {0.5, {1}}, 0, 2, 1.0),
                        std::invalid_argument);
        CHECK_THROWS_AS(calibrate({1.0, 1e-3, 0.9}, loss, {0.5, {1}}, 10, 2, 0.0),
                        std::invalid_argument);
    }
}

TEST_CASE("privacy_report accounting") {
    LossSpec loss{LossKind::MultilabelSoftMargin, 2};
    const auto r = calibrate({1.0, 1e-3, 0.9}, loss, {0.5, {1}}, 100, 4, 1.0);
    const std::string text = privacy_report(r);
    CHECK(text.find("branch\t") != std::string::npos);
    CHECK(text.find("budget_jacobian_term") != std::string::npos);

    // The two reported exponents always sum to epsilon.
    const double jac = std::min(r.epsilon_Lambda,
                                r.budget.epsilon - r.budget.omega * r.budget.epsilon);
    const double dens = std::max(r.budget.epsilon - r.epsilon_Lambda,
                                 r.budget.omega * r.budget.epsilon);
    CHECK(jac + dens == doctest::Approx(r.budget.epsilon).epsilon(1e-12));

    const auto nn = calibrate({1.0, 1e-3, 0.9}, loss, {1.0, {3}}, 50, 4, 1.0);
    CHECK(privacy_report(nn).find("no_noise") != std::string::npos);
}
