#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "tomolab/errors.hpp"
#include "tomolab/tomogram.hpp"

namespace tomolab {

enum class MarkerKind { W1, DKL, DB };

inline const char* marker_name(MarkerKind k) {
    switch (k) {
        case MarkerKind::W1: return "w1";
        case MarkerKind::DKL: return "dkl";
        case MarkerKind::DB: return "db";
    }
    return "?";
}

struct MarkerValue {
    MarkerKind kind = MarkerKind::W1;
    double value = 0.0;
    double theta = 0.0;     // meaningful only when !averaged
    bool averaged = false;
    int n_slices = 1;
};

// 1-Wasserstein distance: integral of |F - G| between CDFs on a shared grid.
inline double w1(const std::vector<double>& F, const std::vector<double>& G,
                 const QuadratureGrid& grid) {
    if (F.size() != G.size() || static_cast<int>(F.size()) != grid.n_points)
        throw std::invalid_argument("w1: CDFs must share the grid");
    std::vector<double> d(F.size());
    for (std::size_t i = 0; i < F.size(); ++i) d[i] = std::abs(F[i] - G[i]);
    return trapezoid(d, grid.step());
}

namespace detail {

inline constexpr double dkl_floor = 1e-300;

// Integrals of ln|t| and t ln|t| between a and b (either sign, through 0 ok).
inline double int_log_abs(double a, double b) {
    auto prim = [](double t) { return t == 0.0 ? 0.0 : t * std::log(std::abs(t)) - t; };
    return prim(b) - prim(a);
}
inline double int_t_log_abs(double a, double b) {
    auto prim = [](double t) {
        return t == 0.0 ? 0.0 : 0.5 * t * t * std::log(std::abs(t)) - 0.25 * t * t;
    };
    return prim(b) - prim(a);
}

}  // namespace detail

// Kullback-Leibler divergence, trapezoid integral of f ln(f/g).
//
// The pdfs here have isolated double zeros (nodes of the underlying
// wavefunction), where ln g carries an integrable log singularity. A plain
// floored trapezoid converges only like O(h) near such a node, and fails
// outright when the node falls exactly on a grid point. Around every detected
// node x0 the singular model -2 f(x) ln|x - x0| is therefore subtracted from
// the sampled integrand (the remainder is smooth) and added back as an exact
// integral against the piecewise-linear interpolant of f.
inline double dkl(const std::vector<double>& f, const std::vector<double>& g,
                  const QuadratureGrid& grid) {
    if (f.size() != g.size() || static_cast<int>(f.size()) != grid.n_points)
        throw std::invalid_argument("dkl: PDFs must share the grid");
    const double h = grid.step();
    const int n = static_cast<int>(f.size());
    const double gmax = *std::max_element(g.begin(), g.end());
    const double fmax = *std::max_element(f.begin(), f.end());

    auto term = [&](int i) {
        if (f[i] < detail::dkl_floor) return 0.0;
        return f[i] * (std::log(f[i]) - std::log(std::max(g[i], detail::dkl_floor)));
    };
    double sum = 0.5 * (term(0) + term(n - 1));
    for (int i = 1; i + 1 < n; ++i) sum += term(i);
    sum *= h;

    // locate nodes of g: local minima where sqrt(g) has the kink of |x - x0|
    struct Node {
        int center;
        double x0;
    };
    std::vector<Node> nodes;
    for (int i = 1; i + 1 < n; ++i) {
        if (g[i] > 1e-4 * gmax || g[i] > g[i - 1] || g[i] > g[i + 1]) continue;
        if (g[i - 1] < detail::dkl_floor || g[i + 1] < detail::dkl_floor) {
            if (f[i] >= 1e-6)
                throw support_violation("dkl: g vanishes on a region where f carries mass near x=" +
                                        std::to_string(grid.x(i)));
            continue;
        }
        const double sl = std::sqrt(g[i - 1]), sr = std::sqrt(g[i + 1]), sc = std::sqrt(g[i]);
        if (sl + sr - 2.0 * sc < 0.25 * (sl + sr)) continue;  // no kink: smooth minimum
        const double rho = sr / sl;
        const double delta = h * (1.0 - rho) / (1.0 + rho);
        nodes.push_back({i, grid.x(i) + delta});
        ++i;  // a node occupies one local minimum
    }

    // per-node window, clipped so neighboring windows do not overlap
    const int half_width = 250;
    for (std::size_t k = 0; k < nodes.size(); ++k) {
        const int i0 = nodes[k].center;
        const double x0 = nodes[k].x0;
        int lo = std::max(1, i0 - half_width);
        int hi = std::min(n - 2, i0 + half_width);
        if (k > 0) lo = std::max(lo, (nodes[k - 1].center + i0) / 2 + 1);
        if (k + 1 < nodes.size()) hi = std::min(hi, (nodes[k + 1].center + i0) / 2 - 1);
        if (hi - lo < 2) continue;
        double fwin = 0.0;
        for (int i = lo; i <= hi; ++i) fwin = std::max(fwin, f[i]);
        if (fwin < 1e-13 * std::max(fmax, 1e-30)) continue;  // negligible mass of f here

        // sampled singular model u_sing(x) = -2 f(x) ln|x - x0|
        auto u_sing = [&](int i) {
            if (f[i] < detail::dkl_floor) return 0.0;
            const double t = std::abs(grid.x(i) - x0);
            if (t < 1e-9) return 0.0;  // handled via interpolation below
            return -2.0 * f[i] * std::log(t);
        };
        auto v_at = [&](int i) {
            const double t = std::abs(grid.x(i) - x0);
            if (t < 1e-9)  // residual is smooth: interpolate across the node point
                return 0.5 * ((term(i - 1) - u_sing(i - 1)) + (term(i + 1) - u_sing(i + 1)));
            return term(i) - u_sing(i);
        };
        double trap_u = 0.5 * (term(lo) + term(hi));
        double trap_v = 0.5 * (v_at(lo) + v_at(hi));
        for (int i = lo + 1; i < hi; ++i) {
            trap_u += term(i);
            trap_v += v_at(i);
        }
        trap_u *= h;
        trap_v *= h;
        // exact integral of u_sing against piecewise-linear f
        double exact_sing = 0.0;
        for (int i = lo; i < hi; ++i) {
            const double ta = grid.x(i) - x0;
            const double tb = ta + h;
            const double fa = f[i];
            const double s = (f[i + 1] - f[i]) / h;
            exact_sing += -2.0 * ((fa - s * ta) * detail::int_log_abs(ta, tb) +
                                  s * detail::int_t_log_abs(ta, tb));
        }
        sum += trap_v + exact_sing - trap_u;
    }
    if (sum < 0.0 && sum > -1e-9) sum = 0.0;
    return sum;
}

// Bhattacharyya distance, -ln of the overlap integral of sqrt(f g).
inline double db(const std::vector<double>& f, const std::vector<double>& g,
                 const QuadratureGrid& grid) {
    if (f.size() != g.size() || static_cast<int>(f.size()) != grid.n_points)
        throw std::invalid_argument("db: PDFs must share the grid");
    std::vector<double> s(f.size());
    for (std::size_t i = 0; i < f.size(); ++i)
        s[i] = std::sqrt(std::max(f[i] * g[i], 0.0));
    const double coeff = trapezoid(s, grid.step());
    const double d = -std::log(coeff);
    return d < 0.0 && d > -1e-9 ? 0.0 : d;
}

// Marker between the theta-slices of two states. For DKL, stateA is the
// "true" distribution f.
inline double marker_at(const FockVector& stateA, const FockVector& stateB, MarkerKind kind,
                        double theta, const QuadratureGrid& grid) {
    const TomogramSlice a = slice(stateA, theta, grid);
    const TomogramSlice b = slice(stateB, theta, grid);
    switch (kind) {
        case MarkerKind::W1: return w1(cdf(a), cdf(b), grid);
        case MarkerKind::DKL: return dkl(a.pdf, b.pdf, grid);
        case MarkerKind::DB: return db(a.pdf, b.pdf, grid);
    }
    return 0.0;
}

// Arithmetic mean over theta_j = j*pi/n_slices, j = 0..n_slices-1.
inline MarkerValue slice_averaged(const FockVector& stateA, const FockVector& stateB,
                                  MarkerKind kind, int n_slices, const QuadratureGrid& grid) {
    if (n_slices < 1) throw std::domain_error("slice_averaged: n_slices must be >= 1");
    std::vector<double> vals(static_cast<std::size_t>(n_slices));
    std::vector<std::string> errors(static_cast<std::size_t>(n_slices));
    detail::parallel_for(n_slices, [&](int j) {
        try {
            vals[j] = marker_at(stateA, stateB, kind, j * pi / n_slices, grid);
        } catch (const std::exception& e) {
            errors[j] = std::string("theta=") + std::to_string(j * pi / n_slices) + ": " + e.what();
        }
    });
    for (const auto& e : errors)
        if (!e.empty()) throw support_violation(e);
    double mean = 0.0;
    for (double v : vals) mean += v;  // ascending theta, fixed order
    mean /= n_slices;
    return {kind, mean, 0.0, true, n_slices};
}

}  // namespace tomolab
