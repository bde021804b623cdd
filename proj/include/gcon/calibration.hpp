#pragma once

#include "gcon/objective.hpp"
#include "gcon/propagation.hpp"

#include <string>

namespace gcon {

struct PrivacyBudget {
    double epsilon = 1.0;  // > 0
    double delta = 1e-3;   // in (0, 1)
    double omega = 0.9;    // budget allocator in (0, 1)

    void validate() const;
};

enum class CalibrationBranch { LambdaPrimeZero, LambdaPrimePositive, NoNoise };

struct CalibrationResult {
    double c1 = 0, c2 = 0, c3 = 0;
    double PsiZ = 0;
    double c_sf = 0;
    double Lambda_eff = 0;
    double xi = 0;
    double c_theta = 0;
    double epsilon_Lambda = 0;
    double LambdaPrime = 0;
    double beta = 0;  // +inf on the no-noise branch
    CalibrationBranch branch = CalibrationBranch::LambdaPrimeZero;
    PrivacyBudget budget;
    int n1 = 0, d = 0, c = 0;
};

// Smallest u > 0 with regularized lower incomplete gamma P(d, u) >= 1 - delta/c,
// via bisection on the log-space Poisson-tail closed form. Absolute
// tolerance 1e-9 in u.
double compute_c_sf(int d, double delta, int c);

// The full parameter cascade: suprema -> Psi -> c_sf -> Lambda update ->
// c_theta -> epsilon_Lambda -> LambdaPrime -> beta, strictly in that order.
// d is the post-concatenation width s * d1.
CalibrationResult calibrate(const PrivacyBudget& budget, const LossSpec& loss,
                            const PropagationConfig& cfg, int n1, int d,
                            double Lambda_in, double xi = 1e-3);

std::string privacy_report(const CalibrationResult& result);

} // namespace gcon
