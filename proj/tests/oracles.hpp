#pragma once

// Independent reference computations used only by the tests. Nothing here
// calls into the library's evaluation paths.

#include <cmath>
#include <cstddef>
#include <functional>
#include <vector>

namespace oracle {

enum class Fn { Linear, Logistic, Tanh };

/// Activation functions written out from their textbook definitions.
inline double f(Fn fn, double x) {
    switch (fn) {
        case Fn::Linear: return x;
        case Fn::Logistic: return 1.0 / (1.0 + std::exp(-x));
        case Fn::Tanh: {
            const double e2x = std::exp(2.0 * x);
            return (e2x - 1.0) / (e2x + 1.0);
        }
    }
    return x;
}

/// x_k = sum over j != k of w[k][j] * f(x_j), one term at a time.
inline double node_value(const std::vector<std::vector<double>>& w, const std::vector<double>& x, std::size_t k,
                         Fn fn) {
    double acc = 0.0;
    for (std::size_t j = 0; j < x.size(); ++j) {
        if (j == k) continue;
        const double term = w[k][j] * f(fn, x[j]);
        acc = acc + term;
    }
    return acc;
}

/// Argmin over a uniform grid on [lo, hi].
inline double grid_argmin(const std::function<double(double)>& objective, double lo, double hi, double step) {
    double best_x = lo;
    double best = objective(lo);
    const auto steps = static_cast<long>(std::llround((hi - lo) / step));
    for (long i = 1; i <= steps; ++i) {
        const double x = lo + static_cast<double>(i) * step;
        const double v = objective(x);
        if (v < best) {
            best = v;
            best_x = x;
        }
    }
    return best_x;
}

/// Closed-form ordinary least-squares slope of y on x (with intercept).
inline double ols_slope(const std::vector<double>& x, const std::vector<double>& y) {
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
    }
    const double mx = sx / n, my = sy / n;
    double sxy = 0, sxx = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
    }
    return sxy / sxx;
}

/// Central difference of a scalar function of one parameter.
inline double central_difference(const std::function<double(double)>& g, double at, double h) {
    return (g(at + h) - g(at - h)) / (2.0 * h);
}

}  // namespace oracle
