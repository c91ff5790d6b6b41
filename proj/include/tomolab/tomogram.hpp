#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <complex>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "tomolab/errors.hpp"
#include "tomolab/special_functions.hpp"
#include "tomolab/states.hpp"

namespace tomolab {

// Uniform grid on [x_min, x_max], inclusive endpoints.
struct QuadratureGrid {
    double x_min = -8.0;
    double x_max = 8.0;
    int n_points = 4001;

    double step() const { return (x_max - x_min) / (n_points - 1); }
    double x(int i) const { return x_min + i * step(); }
    bool operator==(const QuadratureGrid&) const = default;
};

// Composite trapezoid over uniformly spaced samples.
inline double trapezoid(const std::vector<double>& y, double h) {
    double s = 0.5 * (y.front() + y.back());
    for (std::size_t i = 1; i + 1 < y.size(); ++i) s += y[i];
    return s * h;
}

// Default grid wide enough that boundary mass stays below 1e-14 for a state
// of the given truncation; step fixed at 0.004.
inline QuadratureGrid default_grid(int max_truncation) {
    const double span = std::max(8.0, std::sqrt(2.0 * max_truncation + 1.0) + 6.0);
    const double x_max = std::ceil(span);
    const int n_points = static_cast<int>(std::lround(500.0 * x_max)) + 1;
    return {-x_max, x_max, n_points};
}

inline QuadratureGrid default_grid(const FockVector& state) {
    return default_grid(state.truncation());
}

inline QuadratureGrid default_grid(const FockVector& a, const FockVector& b) {
    return default_grid(std::max(a.truncation(), b.truncation()));
}

struct TomogramSlice {
    double theta = 0.0;
    QuadratureGrid grid;
    std::vector<double> pdf;
};

struct Tomogram {
    QuadratureGrid grid;
    std::vector<TomogramSlice> slices;  // strictly increasing theta in [0, pi)
};

// <X_theta, theta | psi> = sum_n c_n e^{-i n theta} psi_n(x)
inline cplx quadrature_amplitude(const FockVector& state, double x, double theta) {
    const int N = state.truncation();
    cplx acc{0.0};
    double pm1 = 0.0;
    double p = std::pow(pi, -0.25) * std::exp(-0.5 * x * x);
    acc += state.amps[0] * p;
    for (int n = 1; n <= N; ++n) {
        const double next = x * std::sqrt(2.0 / n) * p - std::sqrt((n - 1.0) / n) * pm1;
        pm1 = p;
        p = next;
        acc += state.amps[n] * std::polar(1.0, -n * theta) * p;
    }
    return acc;
}

namespace detail {

inline int thread_cap() {
    static const int cap = [] {
        unsigned hw = std::thread::hardware_concurrency();
        int n = hw == 0 ? 1 : static_cast<int>(hw);
        if (const char* env = std::getenv("TOMOLAB_THREADS")) {
            const int v = std::atoi(env);
            if (v >= 1) n = std::min(n, v);
        }
        return n;
    }();
    return cap;
}

// Deterministic index-parallel map: results land by index, schedule-independent.
template <typename Fn>
void parallel_for(int n, Fn&& fn) {
    const int threads = std::min(thread_cap(), n);
    if (threads <= 1) {
        for (int i = 0; i < n; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (int t = 0; t < threads; ++t)
        pool.emplace_back([&, t] {
            for (int i = t; i < n; i += threads) fn(i);
        });
    for (auto& th : pool) th.join();
}

}  // namespace detail

// Quadrature PDF of the state at angle theta, sampled on the grid.
inline TomogramSlice slice(const FockVector& state, double theta, const QuadratureGrid& grid) {
    const int N = state.truncation();
    std::vector<cplx> weight(static_cast<std::size_t>(N) + 1);
    for (int n = 0; n <= N; ++n) weight[n] = state.amps[n] * std::polar(1.0, -n * theta);
    std::vector<double> ca(static_cast<std::size_t>(N) + 1), cb(static_cast<std::size_t>(N) + 1);
    for (int n = 1; n <= N; ++n) {
        ca[n] = std::sqrt(2.0 / n);
        cb[n] = std::sqrt((n - 1.0) / n);
    }
    TomogramSlice out{theta, grid, std::vector<double>(static_cast<std::size_t>(grid.n_points))};
    const double seed = std::pow(pi, -0.25);
    for (int i = 0; i < grid.n_points; ++i) {
        const double x = grid.x(i);
        double pm1 = 0.0;
        double p = seed * std::exp(-0.5 * x * x);
        cplx acc = weight[0] * p;
        for (int n = 1; n <= N; ++n) {
            const double next = x * ca[n] * p - cb[n] * pm1;
            pm1 = p;
            p = next;
            acc += weight[n] * p;
        }
        out.pdf[i] = std::norm(acc);
    }
    if (out.pdf.front() > 1e-14 || out.pdf.back() > 1e-14)
        throw grid_error("slice: boundary pdf above 1e-14; widen the grid");
    const double integral = trapezoid(out.pdf, grid.step());
    if (std::abs(integral - 1.0) > 1e-8)
        throw grid_error("slice: normalization off by " + std::to_string(integral - 1.0) +
                         "; grid too narrow or truncation too coarse");
    return out;
}

// Slices at theta_j = j*pi/n_theta, j = 0..n_theta-1.
inline Tomogram full_tomogram(const FockVector& state, int n_theta, const QuadratureGrid& grid) {
    if (n_theta < 1) throw std::domain_error("full_tomogram: n_theta must be >= 1");
    Tomogram t{grid, std::vector<TomogramSlice>(static_cast<std::size_t>(n_theta))};
    std::vector<std::string> errors(static_cast<std::size_t>(n_theta));
    detail::parallel_for(n_theta, [&](int j) {
        try {
            t.slices[j] = slice(state, j * pi / n_theta, grid);
        } catch (const std::exception& e) {
            errors[j] = e.what();
        }
    });
    for (const auto& e : errors)
        if (!e.empty()) throw grid_error(e);
    return t;
}

// Running trapezoid integral of the slice pdf, clamped monotone, F(x_max) ~ 1.
inline std::vector<double> cdf(const TomogramSlice& s) {
    const double h = s.grid.step();
    std::vector<double> F(s.pdf.size());
    F[0] = 0.0;
    for (std::size_t i = 1; i < s.pdf.size(); ++i) {
        F[i] = F[i - 1] + 0.5 * h * (s.pdf[i - 1] + s.pdf[i]);
        if (F[i] < F[i - 1]) F[i] = F[i - 1];
    }
    return F;
}

// ---- CSV persistence ----------------------------------------------------
//
// Header row: x,theta_0,theta_1,... (theta in radians, 9 significant digits);
// data rows: grid x then pdf values, shortest round-trip representation.

namespace detail {

inline std::string shortest_double(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

}  // namespace detail

inline void write_tomogram_csv(std::ostream& os, const Tomogram& t) {
    os << "x";
    for (const auto& s : t.slices) {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%.9g", s.theta);
        os << ',' << buf;
    }
    os << '\n';
    for (int i = 0; i < t.grid.n_points; ++i) {
        os << detail::shortest_double(t.grid.x(i));
        for (const auto& s : t.slices) os << ',' << detail::shortest_double(s.pdf[i]);
        os << '\n';
    }
}

inline Tomogram read_tomogram_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line)) throw parse_error("tomogram csv: empty input");
    std::vector<double> thetas;
    {
        std::stringstream ss(line);
        std::string cell;
        std::getline(ss, cell, ',');
        if (cell != "x") throw parse_error("tomogram csv: header must start with 'x'");
        while (std::getline(ss, cell, ',')) thetas.push_back(std::strtod(cell.c_str(), nullptr));
    }
    std::vector<double> xs;
    std::vector<std::vector<double>> cols(thetas.size());
    while (std::getline(is, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::stringstream ss(line);
        std::string cell;
        std::getline(ss, cell, ',');
        xs.push_back(std::strtod(cell.c_str(), nullptr));
        for (std::size_t j = 0; j < thetas.size(); ++j) {
            if (!std::getline(ss, cell, ','))
                throw parse_error("tomogram csv: short row at x=" + std::to_string(xs.back()));
            cols[j].push_back(std::strtod(cell.c_str(), nullptr));
        }
    }
    if (xs.size() < 2) throw parse_error("tomogram csv: need at least two grid rows");
    Tomogram t;
    t.grid = {xs.front(), xs.back(), static_cast<int>(xs.size())};
    for (std::size_t j = 0; j < thetas.size(); ++j)
        t.slices.push_back({thetas[j], t.grid, std::move(cols[j])});
    return t;
}

}  // namespace tomolab
