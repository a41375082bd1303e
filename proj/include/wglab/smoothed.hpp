#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "wglab/gamma.hpp"
#include "wglab/mangoldt.hpp"
#include "wglab/summation.hpp"

namespace wglab {

// e(t) = exp(2 pi i t) with the argument reduced in extended precision so
// large integer-times-alpha products keep ~1e-11 phase accuracy.
inline std::complex<double> unit_phase(long double t) {
    t -= roundl(t);
    double phase = 2.0 * M_PI * static_cast<double>(t);
    return {std::cos(phase), std::sin(phase)};
}

inline std::complex<double> z_of(double alpha, std::int64_t N) {
    return {1.0 / static_cast<double>(N), -2.0 * M_PI * alpha};
}

// Principal-branch z^{-mu}; well defined because Re z = 1/N > 0.
inline std::complex<double> z_power(double alpha, std::int64_t N, double mu) {
    if (!(mu > 0.0))
        throw std::invalid_argument("z_power: mu must be positive");
    return std::pow(z_of(alpha, N), -mu);
}

struct SmoothedTerm {
    std::int64_t frequency;   // n^k
    double weight;            // Lambda(n) e^{-n^k/N}
};

// Term list for the smoothed sum S_k(alpha) = sum Lambda(n) e^{-n^k/N} e(n^k alpha),
// truncated where the damping drops below eps_trunc. The infinite tail this
// drops is bounded by tail_bound; reference_cutoff records the coarser
// truncation point P = (2 N log N / k)^{1/k} that analytic arguments use.
struct SmoothedSumSpec {
    std::int64_t N = 0;
    int k = 0;
    double eps_trunc = 1e-15;
    std::vector<SmoothedTerm> terms;
    std::int64_t max_frequency = 0;
    double reference_cutoff = 0;
    double tail_bound = 0;
    double gamma = 0;   // gamma_factor(k)
};

inline SmoothedSumSpec build_smoothed_sum_spec(const MangoldtTable& table, std::int64_t N,
                                               int k, double eps_trunc = 1e-15) {
    if (N < 2)
        throw std::invalid_argument("build_smoothed_sum_spec: need N >= 2");
    if (k < 1)
        throw std::invalid_argument("build_smoothed_sum_spec: need k >= 1");
    if (!(eps_trunc > 0.0 && eps_trunc < 1.0))
        throw std::invalid_argument("build_smoothed_sum_spec: need 0 < eps_trunc < 1");

    double nd = static_cast<double>(N);
    double L = std::log(nd);
    // retain n with e^{-n^k/N} >= eps  <=>  n^k <= N ln(1/eps)
    std::int64_t f_cap = saturating_int64(nd * std::log(1.0 / eps_trunc));
    std::uint64_t root =
        integer_kth_root(static_cast<std::uint64_t>(f_cap), static_cast<unsigned>(k));
    if (table.limit < root)
        throw std::invalid_argument("build_smoothed_sum_spec: table.limit " +
                                    std::to_string(table.limit) + " < required " +
                                    std::to_string(root));

    SmoothedSumSpec spec;
    spec.N = N;
    spec.k = k;
    spec.eps_trunc = eps_trunc;
    spec.gamma = gamma_factor(k);
    spec.reference_cutoff = std::pow(2.0 * nd * L / k, 1.0 / k);
    spec.tail_bound = 2.0 * eps_trunc * std::pow(nd, 1.0 / k) * L;
    auto pts = prime_power_points(table, static_cast<unsigned>(k),
                                  static_cast<std::int64_t>(f_cap));
    spec.terms.reserve(pts.size());
    for (const auto& p : pts) {
        double w = p.weight * std::exp(-static_cast<double>(p.m_pow_k) / nd);
        spec.terms.push_back({p.m_pow_k, w});
        spec.max_frequency = p.m_pow_k;
    }
    return spec;
}

// Direct evaluation of the smoothed sum at arbitrary alpha (grid-free path;
// band-limited grids use the exact twiddle route in quadrature.hpp).
inline std::complex<double> smoothed_sum(const SmoothedSumSpec& spec, double alpha) {
    neumaier_complex_sum acc;
    for (const auto& t : spec.terms) {
        long double ph = static_cast<long double>(t.frequency) * alpha;
        acc.add(t.weight * unit_phase(ph));
    }
    return acc.value();
}

// E_k(alpha) = S_k(alpha) - gamma_k z^{-1/k}: what is left after the smooth
// model absorbs the main behaviour.
inline std::complex<double> error_term(const SmoothedSumSpec& spec, double alpha) {
    return smoothed_sum(spec, alpha) -
           spec.gamma * z_power(alpha, spec.N, 1.0 / spec.k);
}

// U(alpha, H) = sum_{m=1}^{H} e(m alpha): geometric closed form with a direct
// series fallback where e(alpha) - 1 loses precision.
inline std::complex<double> window_sum(double alpha, std::int64_t H) {
    if (H < 1)
        throw std::invalid_argument("window_sum: need H >= 1");
    double s = std::sin(M_PI * alpha);
    if (2.0 * std::abs(s) < 1e-8) {
        neumaier_complex_sum acc;
        for (std::int64_t m = 1; m <= H; ++m)
            acc.add(unit_phase(static_cast<long double>(m) * alpha));
        return acc.value();
    }
    // sin(pi H alpha) with the H*alpha product reduced mod 2 in long double
    long double ha = static_cast<long double>(H) * alpha;
    long double nearest = roundl(ha);
    double frac = static_cast<double>(ha - nearest);
    double sH = std::sin(M_PI * frac);
    if (static_cast<std::int64_t>(llroundl(nearest)) % 2 != 0) sH = -sH;
    std::complex<double> phase = unit_phase(static_cast<long double>(H + 1) * alpha / 2.0L);
    return phase * (sH / s);
}

} // namespace wglab
