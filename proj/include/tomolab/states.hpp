#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdlib>
#include <string>
#include <vector>

#include "tomolab/errors.hpp"
#include "tomolab/special_functions.hpp"

namespace tomolab {

using cplx = std::complex<double>;

enum class StateFamily { Fock, Coherent, PACS, SVS, PASVS, EvenCat };

// Symbolic descriptor of a pure single-mode state. Canonical text form, e.g.
//   fock:n=5  cs:alpha=0.7  pacs:alpha=0.7+0.2i,m=2  svs:r=0.5,phi=0
//   pasvs:r=0.5,phi=0,m=1  cat:alpha=1.2
struct StateSpec {
    StateFamily family = StateFamily::Fock;
    int n = 0;           // Fock
    cplx alpha{0.0};     // Coherent / PACS / EvenCat
    int m = 0;           // added photons (PACS / PASVS)
    double r = 0.0;      // squeezing modulus (SVS / PASVS)
    double phi = 0.0;    // squeezing phase

    static StateSpec fock(int n) { return {StateFamily::Fock, n, {}, 0, 0, 0}; }
    static StateSpec coherent(cplx a) { return {StateFamily::Coherent, 0, a, 0, 0, 0}; }
    static StateSpec pacs(cplx a, int m) { return {StateFamily::PACS, 0, a, m, 0, 0}; }
    static StateSpec svs(double r, double phi = 0.0) { return {StateFamily::SVS, 0, {}, 0, r, phi}; }
    static StateSpec pasvs(double r, double phi, int m) { return {StateFamily::PASVS, 0, {}, m, r, phi}; }
    static StateSpec even_cat(cplx a) { return {StateFamily::EvenCat, 0, a, 0, 0, 0}; }
};

// Truncated Fock-basis amplitude vector, normalized after construction.
struct FockVector {
    std::vector<cplx> amps;

    int truncation() const { return static_cast<int>(amps.size()) - 1; }
    double norm_sq() const {
        double s = 0.0;
        for (const auto& c : amps) s += std::norm(c);
        return s;
    }
};

namespace detail {

// Amplitude c_n of the (analytically normalized, untruncated) expansion.
inline cplx family_amplitude(const StateSpec& s, int n) {
    switch (s.family) {
        case StateFamily::Fock:
            return n == s.n ? cplx{1.0} : cplx{0.0};
        case StateFamily::Coherent: {
            const double a = std::abs(s.alpha);
            if (a == 0.0) return n == 0 ? cplx{1.0} : cplx{0.0};
            const double lm = -0.5 * a * a + n * std::log(a) - 0.5 * log_factorial(n);
            return std::polar(std::exp(lm), n * std::arg(s.alpha));
        }
        case StateFamily::PACS: {
            const double a = std::abs(s.alpha);
            if (a == 0.0) return n == s.m ? cplx{1.0} : cplx{0.0};
            if (n < s.m) return {0.0};
            const int k = n - s.m;
            const double lnorm = 0.5 * (log_factorial(s.m) + std::log(laguerre(s.m, -a * a)));
            const double lm = -0.5 * a * a + k * std::log(a) + 0.5 * log_factorial(n) -
                              log_factorial(k) - lnorm;
            return std::polar(std::exp(lm), k * std::arg(s.alpha));
        }
        case StateFamily::SVS:
        case StateFamily::PASVS: {
            const int m = s.family == StateFamily::SVS ? 0 : s.m;
            if (n < m || (n - m) % 2 != 0) return {0.0};
            const int k = (n - m) / 2;
            if (s.r == 0.0) return k == 0 ? cplx{1.0} : cplx{0.0};
            const double ch = std::cosh(s.r);
            const double th = std::tanh(s.r);
            const double lnorm = 0.5 * (log_factorial(m) + (m + 1) * std::log(ch) +
                                        std::log(legendre(m, ch)));
            const double lm = 0.5 * log_factorial(n) - k * std::log(2.0) - log_factorial(k) +
                              k * std::log(th) - lnorm;
            // (-tanh r)^k e^{ik phi}
            return std::polar(std::exp(lm), k * (s.phi + pi));
        }
        case StateFamily::EvenCat: {
            if (n % 2 != 0) return {0.0};
            const double a = std::abs(s.alpha);
            const double norm = std::sqrt(2.0 * (1.0 + std::exp(-2.0 * a * a)));
            if (a == 0.0) return n == 0 ? cplx{2.0 / norm} : cplx{0.0};
            const double lm = -0.5 * a * a + n * std::log(a) - 0.5 * log_factorial(n);
            return std::polar(2.0 * std::exp(lm) / norm, n * std::arg(s.alpha));
        }
    }
    return {0.0};
}

}  // namespace detail

inline constexpr int fock_cutoff_cap = 4096;

// Smallest N with untruncated tail probability beyond N below epsilon.
inline int auto_truncate(const StateSpec& spec, double epsilon = 1e-12) {
    if (!(epsilon > 0.0 && epsilon <= 1e-6))
        throw std::domain_error("auto_truncate: epsilon must be in (0, 1e-6]");
    if (spec.family == StateFamily::Fock) return spec.n;
    double cum = 0.0;
    for (int n = 0; n <= fock_cutoff_cap; ++n) {
        cum += std::norm(detail::family_amplitude(spec, n));
        if (1.0 - cum < epsilon) return n;
    }
    throw truncation_overflow("auto_truncate: cutoff beyond " + std::to_string(fock_cutoff_cap) +
                              " (extreme state parameters)");
}

inline FockVector build_state(const StateSpec& spec, double epsilon = 1e-12) {
    const int N = auto_truncate(spec, epsilon);
    FockVector v;
    v.amps.resize(static_cast<std::size_t>(N) + 1);
    for (int n = 0; n <= N; ++n) v.amps[n] = detail::family_amplitude(spec, n);
    const double s = std::sqrt(v.norm_sq());
    for (auto& c : v.amps) c /= s;
    return v;
}

// |<beta|state>|^2, the overlap with an exact coherent state.
inline double fidelity_with_coherent(const FockVector& state, cplx beta) {
    const double b = std::abs(beta);
    cplx acc{0.0};
    for (int n = 0; n <= state.truncation(); ++n) {
        double lm = -0.5 * b * b - 0.5 * log_factorial(n);
        if (n > 0) {
            if (b == 0.0) continue;
            lm += n * std::log(b);
        }
        acc += std::conj(state.amps[n]) * std::polar(std::exp(lm), n * std::arg(beta));
    }
    return std::norm(acc);
}

// <a^dag^k a^l> summed directly over amplitudes. This is the ladder-algebra
// route, independent of the tomographic extraction.
inline cplx fock_expectation(const FockVector& state, int k, int l) {
    if (k < 0 || l < 0) throw std::domain_error("fock_expectation: negative order");
    cplx acc{0.0};
    const int N = state.truncation();
    for (int n = l; n <= N; ++n) {
        const int np = n - l + k;
        if (np > N) continue;
        const double lw = 0.5 * (log_factorial(n) - log_factorial(n - l)) +
                          0.5 * (log_factorial(np) - log_factorial(n - l));
        acc += std::conj(state.amps[np]) * state.amps[n] * std::exp(lw);
    }
    return acc;
}

// ---- canonical textual form --------------------------------------------

namespace detail {

inline double parse_real(const std::string& field, const std::string& text, std::size_t& pos) {
    char* end = nullptr;
    const double v = std::strtod(text.c_str() + pos, &end);
    if (end == text.c_str() + pos)
        throw parse_error("state spec: field '" + field + "' expects a number, got '" +
                          text.substr(pos) + "'");
    pos = static_cast<std::size_t>(end - text.c_str());
    return v;
}

// Accepts "1.2", "-0.3", "0.7+0.2i", "0.7-0.2i", "1.5i".
inline cplx parse_complex(const std::string& field, const std::string& text) {
    std::size_t pos = 0;
    const double first = parse_real(field, text, pos);
    if (pos == text.size()) return {first, 0.0};
    if (text[pos] == 'i' && pos + 1 == text.size()) return {0.0, first};
    if (text[pos] != '+' && text[pos] != '-')
        throw parse_error("state spec: field '" + field + "' has trailing garbage '" +
                          text.substr(pos) + "'");
    const double second = parse_real(field, text, pos);
    if (pos + 1 != text.size() || text[pos] != 'i')
        throw parse_error("state spec: field '" + field + "' expects 'a+bi', got '" + text + "'");
    return {first, second};
}

inline std::string format_real(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

inline std::string format_complex(cplx v) {
    if (v.imag() == 0.0) return format_real(v.real());
    return format_real(v.real()) + (v.imag() < 0 ? "-" : "+") +
           format_real(std::abs(v.imag())) + "i";
}

}  // namespace detail

inline StateSpec parse_state_spec(const std::string& text) {
    const auto colon = text.find(':');
    const std::string family = text.substr(0, colon);
    std::vector<std::pair<std::string, std::string>> kv;
    if (colon != std::string::npos) {
        std::string rest = text.substr(colon + 1);
        std::size_t start = 0;
        while (start <= rest.size()) {
            auto comma = rest.find(',', start);
            if (comma == std::string::npos) comma = rest.size();
            const std::string item = rest.substr(start, comma - start);
            if (!item.empty()) {
                const auto eq = item.find('=');
                if (eq == std::string::npos)
                    throw parse_error("state spec: expected 'key=value', got '" + item + "'");
                kv.emplace_back(item.substr(0, eq), item.substr(eq + 1));
            }
            start = comma + 1;
        }
    }
    auto get = [&](const std::string& key) -> const std::string& {
        for (const auto& [k, v] : kv)
            if (k == key) return v;
        throw parse_error("state spec '" + text + "': missing field '" + key + "'");
    };
    auto reject_unknown = [&](std::initializer_list<const char*> allowed) {
        for (const auto& [k, v] : kv) {
            bool ok = false;
            for (const char* a : allowed)
                if (k == a) ok = true;
            if (!ok) throw parse_error("state spec '" + text + "': unknown field '" + k + "'");
        }
    };
    auto get_int = [&](const std::string& key) {
        const std::string& v = get(key);
        std::size_t pos = 0;
        const double d = detail::parse_real(key, v, pos);
        if (pos != v.size() || d != std::floor(d) || d < 0)
            throw parse_error("state spec: field '" + key + "' expects a non-negative integer, got '" +
                              v + "'");
        return static_cast<int>(d);
    };
    auto get_real = [&](const std::string& key) {
        const std::string& v = get(key);
        std::size_t pos = 0;
        const double d = detail::parse_real(key, v, pos);
        if (pos != v.size())
            throw parse_error("state spec: field '" + key + "' has trailing garbage in '" + v + "'");
        return d;
    };

    if (family == "fock") {
        reject_unknown({"n"});
        return StateSpec::fock(get_int("n"));
    }
    if (family == "cs") {
        reject_unknown({"alpha"});
        return StateSpec::coherent(detail::parse_complex("alpha", get("alpha")));
    }
    if (family == "pacs") {
        reject_unknown({"alpha", "m"});
        return StateSpec::pacs(detail::parse_complex("alpha", get("alpha")), get_int("m"));
    }
    if (family == "svs") {
        reject_unknown({"r", "phi"});
        const double r = get_real("r");
        if (r < 0) throw parse_error("state spec: field 'r' must be >= 0");
        double phi = 0.0;
        for (const auto& [k, v] : kv)
            if (k == "phi") phi = get_real("phi");
        return StateSpec::svs(r, phi);
    }
    if (family == "pasvs") {
        reject_unknown({"r", "phi", "m"});
        const double r = get_real("r");
        if (r < 0) throw parse_error("state spec: field 'r' must be >= 0");
        double phi = 0.0;
        for (const auto& [k, v] : kv)
            if (k == "phi") phi = get_real("phi");
        return StateSpec::pasvs(r, phi, get_int("m"));
    }
    if (family == "cat") {
        reject_unknown({"alpha"});
        return StateSpec::even_cat(detail::parse_complex("alpha", get("alpha")));
    }
    throw parse_error("state spec '" + text + "': unknown family '" + family + "'");
}

inline std::string format_state_spec(const StateSpec& s) {
    using detail::format_complex;
    using detail::format_real;
    switch (s.family) {
        case StateFamily::Fock: return "fock:n=" + std::to_string(s.n);
        case StateFamily::Coherent: return "cs:alpha=" + format_complex(s.alpha);
        case StateFamily::PACS:
            return "pacs:alpha=" + format_complex(s.alpha) + ",m=" + std::to_string(s.m);
        case StateFamily::SVS: return "svs:r=" + format_real(s.r) + ",phi=" + format_real(s.phi);
        case StateFamily::PASVS:
            return "pasvs:r=" + format_real(s.r) + ",phi=" + format_real(s.phi) +
                   ",m=" + std::to_string(s.m);
        case StateFamily::EvenCat: return "cat:alpha=" + format_complex(s.alpha);
    }
    return {};
}

}  // namespace tomolab
