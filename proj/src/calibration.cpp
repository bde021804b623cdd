#include "gcon/calibration.hpp"
#include "gcon/sensitivity.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "gcon/errors.hpp"

namespace gcon {

void PrivacyBudget::validate() const {
    if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");
    if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("delta must lie in (0, 1)");
    if (!(omega > 0.0 && omega < 1.0)) throw std::invalid_argument("omega must lie in (0, 1)");
}

namespace {

// Upper tail of Erlang(d, 1): Q(d, u) = e^-u sum_{k<d} u^k / k!, evaluated
// in log space so large d stays finite.
double erlang_upper_tail(int d, double u) {
    double max_term = -std::numeric_limits<double>::infinity();
    std::vector<double> logs(d);
    const double lu = std::log(u);
    for (int k = 0; k < d; ++k) {
        logs[k] = k * lu - std::lgamma(k + 1.0);
        max_term = std::max(max_term, logs[k]);
    }
    double acc = 0.0;
    for (int k = 0; k < d; ++k) acc += std::exp(logs[k] - max_term);
    return std::exp(max_term - u) * acc;
}

} // namespace

double compute_c_sf(int d, double delta, int c) {
    if (d < 1) throw std::invalid_argument("dimension must be a positive integer");
    const double target = delta / c;
    if (!(target > 0.0 && target < 1.0))
        throw std::invalid_argument("delta/c must lie in (0, 1)");

    // P(d, u) >= 1 - delta/c  <=>  upper tail <= delta/c.
    double lo = 0.0;
    double hi = d + 40.0 * std::sqrt(static_cast<double>(d))
              + 40.0 * std::log(c / delta);
    if (erlang_upper_tail(d, hi) > target)
        throw CalibrationError("c_sf bracket too small");
    while (hi - lo > 1e-9) {
        const double mid = 0.5 * (lo + hi);
        if (erlang_upper_tail(d, mid) <= target) hi = mid;
        else lo = mid;
    }
    return hi;
}

CalibrationResult calibrate(const PrivacyBudget& budget, const LossSpec& loss,
                            const PropagationConfig& cfg, int n1, int d,
                            double Lambda_in, double xi) {
    budget.validate();
    loss.validate();
    cfg.validate();
    if (n1 < 1 || d < 1) throw std::invalid_argument("n1 and d must be positive");
    if (!(Lambda_in > 0.0)) throw std::invalid_argument("Lambda must be positive");
    if (!(xi > 0.0)) throw std::invalid_argument("xi must be positive");

    CalibrationResult r;
    r.budget = budget;
    r.n1 = n1;
    r.d = d;
    r.c = loss.c;
    r.xi = xi;

    const auto sup = derivative_suprema(loss);
    r.c1 = sup.c1;
    r.c2 = sup.c2;
    r.c3 = sup.c3;
    r.PsiZ = sensitivity_bound(cfg);

    const double eps = budget.epsilon;
    const double omega = budget.omega;
    const double c = loss.c;

    if (r.PsiZ == 0.0) {
        // Zero sensitivity (all steps 0 or alpha = 1): no perturbation needed.
        r.branch = CalibrationBranch::NoNoise;
        r.Lambda_eff = Lambda_in;
        r.LambdaPrime = 0.0;
        r.beta = std::numeric_limits<double>::infinity();
        r.c_sf = 0.0;
        r.c_theta = 0.0;
        r.epsilon_Lambda = 0.0;
        return r;
    }

    r.c_sf = compute_c_sf(d, budget.delta, loss.c);

    const double floor = c * r.c2 * r.PsiZ * r.c_sf / (n1 * omega * eps) + xi;
    r.Lambda_eff = std::max(Lambda_in, floor);

    const double denom = n1 * omega * eps * r.Lambda_eff - c * r.c2 * r.PsiZ * r.c_sf;
    if (!(denom > 0.0))
        throw CalibrationError("c_theta denominator not positive; Lambda update bypassed");
    r.c_theta = (n1 * omega * eps * r.c1 + c * r.c1 * r.PsiZ * r.c_sf) / denom;

    r.epsilon_Lambda = c * d * std::log1p(
        (2.0 * r.c2 + r.c3 * r.c_theta) * r.PsiZ / (d * n1 * r.Lambda_eff));

    if (r.epsilon_Lambda <= (1.0 - omega) * eps) {
        r.branch = CalibrationBranch::LambdaPrimeZero;
        r.LambdaPrime = 0.0;
    } else {
        r.branch = CalibrationBranch::LambdaPrimePositive;
        r.LambdaPrime = c * (2.0 * r.c2 + r.c3 * r.c_theta) * r.PsiZ
                        / (n1 * (1.0 - omega) * eps) - r.Lambda_eff;
    }

    r.beta = std::max(eps - r.epsilon_Lambda, omega * eps)
           / (c * (r.c1 + r.c2 * r.c_theta) * r.PsiZ);
    return r;
}

std::string privacy_report(const CalibrationResult& r) {
    std::ostringstream os;
    os.precision(12);
    os << "privacy accounting\n";
    os << "epsilon\t" << r.budget.epsilon << "\n";
    os << "delta\t" << r.budget.delta << "\n";
    os << "omega\t" << r.budget.omega << "\n";
    os << "n1\t" << r.n1 << "\td\t" << r.d << "\tc\t" << r.c << "\n";
    switch (r.branch) {
        case CalibrationBranch::NoNoise:
            os << "branch\tno_noise (zero feature sensitivity, B suppressed)\n";
            break;
        case CalibrationBranch::LambdaPrimeZero:
            os << "branch\tlambda_prime_zero\n";
            break;
        case CalibrationBranch::LambdaPrimePositive:
            os << "branch\tlambda_prime_positive\n";
            break;
    }
    os << "c1\t" << r.c1 << "\nc2\t" << r.c2 << "\nc3\t" << r.c3 << "\n";
    os << "Psi_Z\t" << r.PsiZ << "\n";
    os << "c_sf\t" << r.c_sf << "\n";
    os << "Lambda_eff\t" << r.Lambda_eff << "\n";
    os << "xi\t" << r.xi << "\n";
    os << "c_theta\t" << r.c_theta << "\n";
    os << "epsilon_Lambda\t" << r.epsilon_Lambda << "\n";
    os << "LambdaPrime\t" << r.LambdaPrime << "\n";
    os << "beta\t" << r.beta << "\n";
    if (r.branch != CalibrationBranch::NoNoise) {
        const double eps = r.budget.epsilon;
        const double jac = std::min(r.epsilon_Lambda, eps - r.budget.omega * eps);
        const double dens = std::max(eps - r.epsilon_Lambda, r.budget.omega * eps);
        os << "budget_jacobian_term\t" << jac << "\n";
        os << "budget_density_term\t" << dens << "\n";
    }
    return os.str();
}

} // namespace gcon
