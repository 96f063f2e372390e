#pragma once
// Independent reference computations shared by unit and acceptance tests.

#include <cmath>
#include <utility>
#include <vector>

#include "nanores/dynamics.hpp"
#include "nanores/readout.hpp"

namespace oracle {

// Ridge solution through the normal equations, Gauss-Jordan in long double.
inline std::vector<double> ridge_weights(const std::vector<nanores::FeatureVector>& x, const std::vector<double>& f,
                                         double ridge) {
    const std::size_t d = x.front().size();
    std::vector<std::vector<long double>> a(d, std::vector<long double>(d + 1, 0.0L));
    for (std::size_t r = 0; r < d; ++r) {
        for (std::size_t c = 0; c < d; ++c) {
            long double s = 0;
            for (std::size_t k = 0; k < x.size(); ++k) s += static_cast<long double>(x[k][r]) * x[k][c];
            a[r][c] = s + (r == c ? ridge : 0.0L);
        }
        long double s = 0;
        for (std::size_t k = 0; k < x.size(); ++k) s += static_cast<long double>(x[k][r]) * f[k];
        a[r][d] = s;
    }
    for (std::size_t col = 0; col < d; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < d; ++r)
            if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
        std::swap(a[col], a[piv]);
        for (std::size_t r = 0; r < d; ++r) {
            if (r == col) continue;
            const long double m = a[r][col] / a[col][col];
            for (std::size_t c = col; c <= d; ++c) a[r][c] -= m * a[col][c];
        }
    }
    std::vector<double> w(d);
    for (std::size_t r = 0; r < d; ++r) w[r] = static_cast<double>(a[r][d] / a[r][r]);
    return w;
}

// Single spin in a static field H z: closed-form damped precession from
// polar angle theta0 at azimuth 0.
inline nanores::Vec3 precession(double theta0, double h, const nanores::MaterialParams& p, double t) {
    const double g = p.gamma_ll();
    const double theta = 2 * std::atan(std::tan(theta0 / 2) * std::exp(-p.alpha * g * h * t));
    const double phi = g * h * t;
    return {std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi), std::cos(theta)};
}

}  // namespace oracle
