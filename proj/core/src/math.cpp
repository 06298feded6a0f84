#include "vaclab/math.hpp"

#include <algorithm>
#include <cmath>

#include "vaclab/errors.hpp"

namespace vaclab {

double normal_cdf(double z) {
    return 0.5 * std::erfc(-z / std::sqrt(2.0));
}

// Rational approximation (Acklam) refined with one Halley step against
// normal_cdf, giving ~1e-15 absolute accuracy over the open interval.
double normal_quantile(double p) {
    if (!(p > 0.0 && p < 1.0)) {
        throw DomainError("normal_quantile: p must lie in (0, 1)");
    }
    if (p == 0.5) return 0.0;

    static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                   -2.759285104469687e+02, 1.383577518672690e+02,
                                   -3.066479806614716e+01, 2.506628277459239e+00};
    static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                   -1.556989798598866e+02, 6.680131188771972e+01,
                                   -1.328068155288572e+01};
    static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                   -2.400758277161838e+00, -2.549732539343734e+00,
                                   4.374664141464968e+00,  2.938163982698783e+00};
    static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                                   2.445134137142996e+00, 3.754408661907416e+00};

    constexpr double p_low = 0.02425;
    double x;
    if (p < p_low) {
        const double q = std::sqrt(-2.0 * std::log(p));
        x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    } else if (p <= 1.0 - p_low) {
        const double q = p - 0.5;
        const double r = q * q;
        x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
            (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
    } else {
        const double q = std::sqrt(-2.0 * std::log1p(-p));
        x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }

    // One Halley refinement.
    const double e = normal_cdf(x) - p;
    const double u = e * std::sqrt(2.0 * kPi) * std::exp(0.5 * x * x);
    x = x - u / (1.0 + 0.5 * x * u);
    return x;
}

NelderMeadResult nelder_mead(const std::function<double(std::span<const double>)>& f,
                             std::span<const double> x0, std::span<const double> step,
                             int max_evals, double tol_f) {
    const int n = static_cast<int>(x0.size());
    struct Vertex {
        std::vector<double> x;
        double fx;
    };

    int evals = 0;
    auto eval = [&](const std::vector<double>& x) {
        ++evals;
        return f(std::span<const double>(x));
    };

    std::vector<Vertex> simplex;
    simplex.reserve(n + 1);
    simplex.push_back({std::vector<double>(x0.begin(), x0.end()), 0.0});
    simplex[0].fx = eval(simplex[0].x);
    for (int i = 0; i < n; ++i) {
        Vertex v = simplex[0];
        v.x[i] += step[i] != 0.0 ? step[i] : 1e-3;
        v.fx = eval(v.x);
        simplex.push_back(std::move(v));
    }

    auto order = [&] {
        std::sort(simplex.begin(), simplex.end(),
                  [](const Vertex& l, const Vertex& r) { return l.fx < r.fx; });
    };
    order();

    std::vector<double> centroid(n), xr(n), xe(n), xc(n);
    while (evals < max_evals && simplex.back().fx - simplex.front().fx > tol_f) {
        for (int i = 0; i < n; ++i) {
            double s = 0.0;
            for (int v = 0; v < n; ++v) s += simplex[v].x[i];
            centroid[i] = s / n;
        }
        const Vertex& worst = simplex.back();
        for (int i = 0; i < n; ++i) xr[i] = centroid[i] + (centroid[i] - worst.x[i]);
        const double fr = eval(xr);

        if (fr < simplex.front().fx) {
            for (int i = 0; i < n; ++i) xe[i] = centroid[i] + 2.0 * (centroid[i] - worst.x[i]);
            const double fe = eval(xe);
            if (fe < fr) {
                simplex.back() = {xe, fe};
            } else {
                simplex.back() = {xr, fr};
            }
        } else if (fr < simplex[n - 1].fx) {
            simplex.back() = {xr, fr};
        } else {
            const bool outside = fr < worst.fx;
            const std::vector<double>& toward = outside ? xr : worst.x;
            for (int i = 0; i < n; ++i) xc[i] = centroid[i] + 0.5 * (toward[i] - centroid[i]);
            const double fc = eval(xc);
            if (fc < std::min(fr, worst.fx)) {
                simplex.back() = {xc, fc};
            } else {
                // Shrink toward the best vertex.
                for (int v = 1; v <= n; ++v) {
                    for (int i = 0; i < n; ++i) {
                        simplex[v].x[i] = simplex[0].x[i] + 0.5 * (simplex[v].x[i] - simplex[0].x[i]);
                    }
                    simplex[v].fx = eval(simplex[v].x);
                }
            }
        }
        order();
    }

    return {simplex.front().x, simplex.front().fx, evals};
}

}  // namespace vaclab
