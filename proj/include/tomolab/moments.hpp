#pragma once

#include <cmath>
#include <complex>
#include <map>
#include <utility>
#include <vector>

#include "tomolab/markers.hpp"
#include "tomolab/special_functions.hpp"
#include "tomolab/states.hpp"
#include "tomolab/tomogram.hpp"

namespace tomolab {

// Normal-ordered moments <a^dag^k a^l> extracted from tomogram slices.
struct MomentTable {
    std::map<std::pair<int, int>, cplx> entries;
    std::string source;
    QuadratureGrid grid;
};

struct VarianceReport {
    double theta = 0.0;
    double raw_variance = 0.0;         // X units, vacuum = 1/2
    double normalized_variance = 0.0;  // vacuum = 1
    bool squeezed = false;
};

// <a^dag^k a^l> from k+l+1 tomogram slices:
//   C_kl sum_j e^{-i j (k-l) pi / (k+l+1)} \int w(X, j pi/(k+l+1)) H_{k+l}(X) dX
// with C_kl = k! l! / ((k+l+1)! 2^{(k+l)/2}). Slices are generated at the
// exact required angles, not interpolated.
inline cplx wunsche_moment(const FockVector& state, int k, int l, const QuadratureGrid& grid) {
    if (k < 0 || l < 0) throw std::domain_error("wunsche_moment: negative order");
    const int order = k + l;
    if (order > 12) throw std::domain_error("wunsche_moment: k+l > 12 unsupported (kernel growth)");
    const double h = grid.step();
    cplx acc{0.0};
    for (int j = 0; j <= order; ++j) {
        const double theta = j * pi / (order + 1);
        const TomogramSlice s = slice(state, theta, grid);
        std::vector<double> integrand(s.pdf.size());
        for (int i = 0; i < grid.n_points; ++i)
            integrand[i] = s.pdf[i] * raw_hermite(order, grid.x(i));
        acc += std::polar(1.0, -j * (k - l) * pi / (order + 1)) * trapezoid(integrand, h);
    }
    const double c_kl = std::exp(log_factorial(k) + log_factorial(l) - log_factorial(order + 1)) *
                        std::pow(2.0, -0.5 * order);
    return c_kl * acc;
}

inline MomentTable moment_table(const FockVector& state, int max_order, const QuadratureGrid& grid,
                                const std::string& source = {}) {
    MomentTable t{{}, source, grid};
    for (int k = 0; k <= max_order; ++k)
        for (int l = 0; k + l <= max_order; ++l)
            t.entries[{k, l}] = wunsche_moment(state, k, l, grid);
    return t;
}

// Amplification gain g_m(|alpha|) = |<a>| / |alpha| for the m-PACS,
// with <a> taken from the tomograms.
inline double gain(cplx alpha, int m, const QuadratureGrid& grid, double epsilon = 1e-12) {
    if (std::abs(alpha) < 1e-12) throw std::domain_error("gain: |alpha| too small");
    const FockVector state = build_state(StateSpec::pacs(alpha, m), epsilon);
    return std::abs(wunsche_moment(state, 0, 1, grid)) / std::abs(alpha);
}

// Variance of X_theta straight from the slice; normalized so vacuum = 1.
inline VarianceReport quadrature_variance(const FockVector& state, double theta,
                                          const QuadratureGrid& grid) {
    const TomogramSlice s = slice(state, theta, grid);
    const double h = grid.step();
    std::vector<double> m1(s.pdf.size()), m2(s.pdf.size());
    for (int i = 0; i < grid.n_points; ++i) {
        const double x = grid.x(i);
        m1[i] = x * s.pdf[i];
        m2[i] = x * x * s.pdf[i];
    }
    const double mean = trapezoid(m1, h);
    const double raw = trapezoid(m2, h) - mean * mean;
    VarianceReport r;
    r.theta = theta;
    r.raw_variance = raw;
    r.normalized_variance = 2.0 * raw;
    r.squeezed = r.normalized_variance < 1.0 - 1e-9;
    return r;
}

// Mean photon number <a^dag a> via the tomographic route.
inline double mean_photon(const FockVector& state, const QuadratureGrid& grid) {
    const cplx m = wunsche_moment(state, 1, 1, grid);
    if (std::abs(m.imag()) > 1e-8)
        throw std::runtime_error("mean_photon: non-real <a^dag a>, imag=" +
                                 std::to_string(m.imag()));
    return m.real();
}

}  // namespace tomolab
