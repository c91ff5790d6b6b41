#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

namespace tomolab {

inline constexpr double pi = 3.14159265358979323846;

// psi_n(x) = H_n(x) e^{-x^2/2} / (2^n n! sqrt(pi))^{1/2}
//
// Orthonormal oscillator eigenfunctions. Evaluated by the weighted three-term
// recurrence, which stays bounded where the raw Hermite recurrence overflows
// near n ~ 150.
inline double weighted_hermite(int n, double x) {
    if (n < 0) throw std::domain_error("weighted_hermite: negative order");
    const double psi0 = std::pow(pi, -0.25) * std::exp(-0.5 * x * x);
    if (n == 0) return psi0;
    double pm1 = 0.0;
    double p = psi0;
    for (int k = 1; k <= n; ++k) {
        const double next = x * std::sqrt(2.0 / k) * p - std::sqrt((k - 1.0) / k) * pm1;
        pm1 = p;
        p = next;
    }
    return p;
}

// Fills out[0..n] with psi_0(x)..psi_n(x).
inline void weighted_hermite_table(int n, double x, std::vector<double>& out) {
    out.resize(static_cast<std::size_t>(n) + 1);
    out[0] = std::pow(pi, -0.25) * std::exp(-0.5 * x * x);
    if (n == 0) return;
    out[1] = x * std::sqrt(2.0) * out[0];
    for (int k = 2; k <= n; ++k)
        out[k] = x * std::sqrt(2.0 / k) * out[k - 1] - std::sqrt((k - 1.0) / k) * out[k - 2];
}

// Physicists' Hermite polynomial H_n(x). Raw values overflow quickly; only
// low orders are ever needed (moment kernels), hence the hard cap.
inline double raw_hermite(int n, double x) {
    if (n < 0) throw std::domain_error("raw_hermite: negative order");
    if (n > 60) throw std::domain_error("raw_hermite: order > 60 not supported");
    double pm1 = 0.0;
    double p = 1.0;
    for (int k = 0; k < n; ++k) {
        const double next = 2.0 * x * p - 2.0 * k * pm1;
        pm1 = p;
        p = next;
    }
    return p;
}

// Laguerre polynomial L_m(x), (k+1) L_{k+1} = (2k+1-x) L_k - k L_{k-1}.
inline double laguerre(int m, double x) {
    if (m < 0) throw std::domain_error("laguerre: negative order");
    double pm1 = 0.0;
    double p = 1.0;
    for (int k = 0; k < m; ++k) {
        const double next = ((2.0 * k + 1.0 - x) * p - k * pm1) / (k + 1.0);
        pm1 = p;
        p = next;
    }
    return p;
}

// Legendre polynomial P_m(x), (k+1) P_{k+1} = (2k+1) x P_k - k P_{k-1}.
inline double legendre(int m, double x) {
    if (m < 0) throw std::domain_error("legendre: negative order");
    double pm1 = 0.0;
    double p = 1.0;
    for (int k = 0; k < m; ++k) {
        const double next = ((2.0 * k + 1.0) * x * p - k * pm1) / (k + 1.0);
        pm1 = p;
        p = next;
    }
    return p;
}

// ln(n!) via a cumulative sum table; exact to ~1e-15 relative for n <= 10^4.
inline double log_factorial(int n) {
    if (n < 0) throw std::domain_error("log_factorial: negative argument");
    static const std::vector<double> table = [] {
        std::vector<double> t(10001);
        t[0] = 0.0;
        for (int k = 1; k < static_cast<int>(t.size()); ++k)
            t[k] = t[k - 1] + std::log(static_cast<double>(k));
        return t;
    }();
    if (n < static_cast<int>(table.size())) return table[n];
    return std::lgamma(n + 1.0);
}

}  // namespace tomolab
