#pragma once

#include <functional>
#include <span>
#include <vector>

namespace vaclab {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kDegPerRad = 180.0 / kPi;
inline constexpr double kArcminPerRad = 60.0 * 180.0 / kPi;

// Standard normal CDF.
double normal_cdf(double z);

// Inverse of the standard normal CDF. Exact 0 at p = 0.5.
// Throws DomainError for p outside (0, 1).
double normal_quantile(double p);

struct NelderMeadResult {
    std::vector<double> x;
    double fx = 0.0;
    int evals = 0;
};

// Derivative-free simplex minimizer. `step` gives the initial simplex extent
// per coordinate. Stops after `max_evals` evaluations or when the simplex
// function values span less than `tol_f`.
NelderMeadResult nelder_mead(const std::function<double(std::span<const double>)>& f,
                             std::span<const double> x0, std::span<const double> step,
                             int max_evals = 2000, double tol_f = 1e-10);

}  // namespace vaclab
