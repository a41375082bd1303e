#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "wglab/asymptotics.hpp"
#include "wglab/counting.hpp"
#include "wglab/errors.hpp"
#include "wglab/quadrature.hpp"
#include "wglab/smoothed.hpp"
#include "wglab/triple.hpp"

namespace wglab {

// Table size that covers both the counting enumeration and the smoothed-sum
// truncation for every exponent in the triple.
inline std::uint64_t required_table_limit(std::int64_t N, std::int64_t H,
                                          const ExponentTriple& t, double eps_trunc = 1e-15) {
    std::int64_t f_cap =
        saturating_int64(static_cast<double>(N) * std::log(1.0 / eps_trunc));
    std::uint64_t need = integer_kth_root(
        static_cast<std::uint64_t>(N) + static_cast<std::uint64_t>(H),
        static_cast<unsigned>(t.k1));
    for (int j = 0; j < 3; ++j) {
        std::uint64_t r = integer_kth_root(static_cast<std::uint64_t>(std::max<std::int64_t>(f_cap, 0)),
                                           static_cast<unsigned>(t.k(j)));
        need = std::max(need, r);
    }
    return std::max<std::uint64_t>(need, 2);
}

namespace detail {
inline void check_real_symmetric(std::complex<double> v, const char* where) {
    if (std::abs(v.imag()) > 1e-8 * std::abs(v.real()) + 1e-12) {
        std::ostringstream msg;
        msg << where << ": imaginary part " << v.imag() << " too large against real part "
            << v.real() << " (conjugate symmetry violated)";
        throw numerical_failure(msg.str());
    }
}
} // namespace detail

struct IdentityReport {
    std::int64_t N = 0;
    std::int64_t H = 0;
    ExponentTriple triple;
    double lhs = 0;   // sum of e^{-n/N} R(n) over the interval, by counting
    double rhs = 0;   // the same sum as one full-period integral
    double diff = 0;
    double tolerance = 0;
    bool pass = false;
    std::int64_t grid_m = 0;
};

// rhs of the identity on a caller-supplied grid: the full-period integral of
// S_{k1} S_{k2} S_{k3} U(-alpha, H) e(-N alpha). Exposed separately so the
// grid-resolution dependence of the error is testable.
inline std::complex<double> identity_integral(const std::vector<std::complex<double>>& s1,
                                              const std::vector<std::complex<double>>& s2,
                                              const std::vector<std::complex<double>>& s3,
                                              const QuadratureGrid& grid, std::int64_t N,
                                              std::int64_t H) {
    if (static_cast<std::int64_t>(s1.size()) != grid.M ||
        static_cast<std::int64_t>(s2.size()) != grid.M ||
        static_cast<std::int64_t>(s3.size()) != grid.M)
        throw std::invalid_argument("identity_integral: sample count does not match grid");
    neumaier_complex_sum acc;
    for (std::int64_t j = 0; j < grid.M; ++j) {
        std::size_t u = static_cast<std::size_t>(j);
        acc.add(s1[u] * s2[u] * s3[u] * window_sum(-grid.alpha(j), H) * grid.unit(-N, j));
    }
    return acc.value() / static_cast<double>(grid.M);
}

inline IdentityReport verify_basic_identity(std::int64_t N, std::int64_t H,
                                            const ExponentTriple& t, const MangoldtTable& table,
                                            double eps_trunc = 1e-15, double tolerance = 1e-6,
                                            unsigned workers = 1) {
    if (N < 2 || H < 1)
        throw std::invalid_argument("verify_basic_identity: need N >= 2, H >= 1");
    auto spec1 = build_smoothed_sum_spec(table, N, t.k1, eps_trunc);
    auto spec2 = build_smoothed_sum_spec(table, N, t.k2, eps_trunc);
    auto spec3 = build_smoothed_sum_spec(table, N, t.k3, eps_trunc);
    unsigned __int128 bw = static_cast<unsigned __int128>(spec1.max_frequency) +
                           static_cast<unsigned __int128>(spec2.max_frequency) +
                           static_cast<unsigned __int128>(spec3.max_frequency) +
                           static_cast<unsigned __int128>(N) +
                           static_cast<unsigned __int128>(H);
    // anything past the sample cap fails identically inside for_bandwidth,
    // so clamping cannot change which inputs are accepted
    std::int64_t bandwidth = bw > (unsigned __int128)(std::int64_t{1} << 40)
                                 ? (std::int64_t{1} << 40)
                                 : static_cast<std::int64_t>(bw);
    auto grid = QuadratureGrid::for_bandwidth(bandwidth);
    auto s1 = sample_smoothed_sum(spec1, grid, workers);
    auto s2 = sample_smoothed_sum(spec2, grid, workers);
    auto s3 = sample_smoothed_sum(spec3, grid, workers);
    auto integral = identity_integral(s1, s2, s3, grid, N, H);
    detail::check_real_symmetric(integral, "verify_basic_identity");

    IdentityReport rep;
    rep.N = N;
    rep.H = H;
    rep.triple = t;
    rep.grid_m = grid.M;
    rep.tolerance = tolerance;
    rep.rhs = integral.real();
    rep.lhs = interval_sums(N, H, t, table, false, workers).sum_weighted;
    rep.diff = std::abs(rep.lhs - rep.rhs);
    rep.pass = rep.diff <= tolerance;
    return rep;
}

struct LaplaceReport {
    double integral = 0;
    double main = 0;
    double residual = 0;
    double scaled_residual = 0;
    std::int64_t evaluations = 0;
    std::int64_t panels = 0;
};

// integral of z^{-mu} e(-n alpha) over [-X, X] against its predicted value
// e^{-n/N} n^{mu-1} / Gamma(mu); the lemma says residual * n * X^mu stays
// bounded uniformly.
inline LaplaceReport laplace_residual(std::int64_t n, std::int64_t N, double mu, double X,
                                      unsigned workers = 1,
                                      std::int64_t max_evaluations = (std::int64_t{1} << 26)) {
    if (n < 1 || N < 2)
        throw std::invalid_argument("laplace_residual: need n >= 1, N >= 2");
    if (!(mu > 0.0))
        throw std::invalid_argument("laplace_residual: mu must be positive");
    if (!(X > 0.0 && X <= 0.5))
        throw std::invalid_argument("laplace_residual: need 0 < X <= 1/2");

    auto f = [&](double a) {
        return z_power(a, N, mu) * unit_phase(-static_cast<long double>(n) * a);
    };
    std::int64_t panels0 = std::max<std::int64_t>(
        32, static_cast<std::int64_t>(std::ceil(X * static_cast<double>(n))));
    auto q = integrate_adaptive(f, -X, X, 1e-10, 1e-14, panels0, max_evaluations, workers);
    detail::check_real_symmetric(q.value, "laplace_residual");

    LaplaceReport rep;
    rep.integral = q.value.real();
    rep.main = std::exp(-static_cast<double>(n) / static_cast<double>(N)) *
               std::pow(static_cast<double>(n), mu - 1.0) / gamma_real(mu);
    rep.residual = std::abs(rep.integral - rep.main);
    rep.scaled_residual = rep.residual * static_cast<double>(n) * std::pow(X, mu);
    rep.evaluations = q.evaluations;
    rep.panels = q.panels;
    return rep;
}

enum class L2Integrand { error_term, smoothed_sum };
enum class L2Interval { symmetric, complement };   // [-r, r] or [-1/2,-r] u [r, 1/2]
enum class L2Weight { one, inverse_abs_alpha };

struct L2Request {
    L2Integrand integrand = L2Integrand::smoothed_sum;
    L2Interval interval = L2Interval::symmetric;
    double radius = 0.5;   // xi for symmetric intervals, tau for complements
    L2Weight weight = L2Weight::one;
    double c = 1.0;        // scale parameter for the unconditional ratio
};

struct L2Profile {
    double integral_value = 0;
    double ratio_unconditional = std::numeric_limits<double>::quiet_NaN();
    double ratio_rh = std::numeric_limits<double>::quiet_NaN();
    double ratio_tolev = std::numeric_limits<double>::quiet_NaN();
    double ratio_weighted = std::numeric_limits<double>::quiet_NaN();
    std::int64_t evaluations = 0;
};

// L2 integral of |S_k|^2 or |E_k|^2 over the requested interval, plus its
// ratio to each lemma's right-hand side with implied constant 1. The ratios
// are diagnostics; fields that do not apply to the requested combination
// stay NaN.
inline L2Profile l2_profile(const SmoothedSumSpec& spec, const L2Request& req,
                            unsigned workers = 1) {
    double r = req.radius;
    if (req.interval == L2Interval::symmetric) {
        if (!(r >= 0.0 && r <= 0.5))
            throw std::invalid_argument("l2_profile: symmetric radius must be in [0, 1/2]");
        if (req.weight == L2Weight::inverse_abs_alpha)
            throw std::invalid_argument(
                "l2_profile: 1/|alpha| weight is singular on an interval containing 0");
    } else {
        if (!(r > 0.0 && r < 0.5))
            throw std::invalid_argument(
                "l2_profile: complement interval is empty unless 0 < tau < 1/2");
    }

    L2Profile out;
    double nd = static_cast<double>(spec.N);
    double L = std::log(nd);
    double invk = 1.0 / spec.k;

    if (req.interval == L2Interval::symmetric && r == 0.0) {
        out.integral_value = 0.0;
        return out;
    }

    bool full_period = req.interval == L2Interval::symmetric && r == 0.5 &&
                       req.weight == L2Weight::one &&
                       req.integrand == L2Integrand::smoothed_sum;
    if (full_period) {
        auto grid = QuadratureGrid::for_bandwidth(std::max<std::int64_t>(spec.max_frequency, 1));
        auto samples = sample_smoothed_sum(spec, grid, workers);
        neumaier_sum acc;
        for (const auto& v : samples) acc.add(std::norm(v));
        out.integral_value = acc.value() / static_cast<double>(grid.M);
        out.evaluations = grid.M;
    } else {
        auto f = [&](double a) -> std::complex<double> {
            double v = req.integrand == L2Integrand::smoothed_sum
                           ? std::norm(smoothed_sum(spec, a))
                           : std::norm(error_term(spec, a));
            if (req.weight == L2Weight::inverse_abs_alpha) v /= std::abs(a);
            return {v, 0.0};
        };
        double lo = req.interval == L2Interval::symmetric ? 0.0 : r;
        double hi = req.interval == L2Interval::symmetric ? r : 0.5;
        double f_sig = std::min(static_cast<double>(spec.max_frequency),
                                nd * std::log(1e10));   // weights below ~1e-10 cannot matter
        std::int64_t panels0 = std::max<std::int64_t>(
            32, static_cast<std::int64_t>(std::ceil((hi - lo) * f_sig)));
        auto q = integrate_adaptive(f, lo, hi, 5e-7, 1e-12, panels0,
                                    (std::int64_t{1} << 27), workers);
        out.integral_value = 2.0 * q.value.real();   // both integrands are even
        out.evaluations = q.evaluations;
    }

    bool lp_shape = req.integrand == L2Integrand::error_term &&
                    req.weight == L2Weight::one && req.interval == L2Interval::symmetric;
    if (lp_shape) {
        out.ratio_unconditional =
            out.integral_value / (std::pow(nd, 2.0 * invk - 1.0) * a_scale(spec.N, -req.c));
        if (r > 0.0)
            out.ratio_rh = out.integral_value / (std::pow(nd, invk) * r * L * L);
    }
    if (req.integrand == L2Integrand::smoothed_sum && req.weight == L2Weight::one &&
        req.interval == L2Interval::symmetric && r > 0.0 && r < 0.5) {
        out.ratio_tolev = out.integral_value /
                          ((r * std::pow(nd, invk) + std::pow(nd, 2.0 * invk - 1.0)) * L * L * L);
    }
    if (req.integrand == L2Integrand::smoothed_sum &&
        req.weight == L2Weight::inverse_abs_alpha && req.interval == L2Interval::complement) {
        out.ratio_weighted =
            out.integral_value / (std::pow(nd, invk) * std::pow(L, 4) +
                                  (1.0 / r) * std::pow(nd, 2.0 * invk - 1.0) * L * L * L);
    }
    return out;
}

enum class DecomposeMode { unconditional, conditional };

struct DecompositionReport {
    std::int64_t N = 0;
    std::int64_t H = 0;
    ExponentTriple triple;
    DecomposeMode mode = DecomposeMode::unconditional;
    double B = 0;
    std::complex<double> i1{0, 0}, i2{0, 0}, i3{0, 0}, i4{0, 0}, i5{0, 0};
    double recombined = 0;
    double direct_weighted_sum = 0;
    double discrepancy = 0;
    double tolerance = 0;
    bool within_tolerance = false;
    std::int64_t evaluations = 0;
};

// Splits the identity's integral into the model piece i1, the cross terms i2,
// the paired error terms i3, the pure error cube i4, and (unconditional mode)
// the tail i5 over the complement; recombining them must reproduce the
// directly counted weighted sum, because the underlying algebra is exact.
inline DecompositionReport decompose_integral(std::int64_t N, std::int64_t H,
                                              const ExponentTriple& t, DecomposeMode mode,
                                              double B, const MangoldtTable& table,
                                              double eps_trunc = 1e-15, double tolerance = 1e-6,
                                              unsigned workers = 1) {
    if (N < 2 || H < 1)
        throw std::invalid_argument("decompose_integral: need N >= 2, H >= 1");
    if (mode == DecomposeMode::unconditional &&
        !(B > 0.0 && B <= static_cast<double>(H) / 2.0))
        throw std::invalid_argument("decompose_integral: unconditional mode needs 0 < B <= H/2");

    auto spec1 = build_smoothed_sum_spec(table, N, t.k1, eps_trunc);
    auto spec2 = build_smoothed_sum_spec(table, N, t.k2, eps_trunc);
    auto spec3 = build_smoothed_sum_spec(table, N, t.k3, eps_trunc);

    auto model = [&](int j, double a) {
        return t.gammas[j] * z_power(a, N, 1.0 / t.k(j));
    };
    auto window_phase = [&](double a) {
        return window_sum(-a, H) * unit_phase(-static_cast<long double>(N) * a);
    };
    auto cross_terms = [&](double a) {   // y1 S2 S3 + S1 y2 S3 + S1 S2 y3
        auto s1 = smoothed_sum(spec1, a), s2 = smoothed_sum(spec2, a), s3 = smoothed_sum(spec3, a);
        auto y1 = s1 - model(0, a), y2 = s2 - model(1, a), y3 = s3 - model(2, a);
        return (y1 * s2 * s3 + s1 * y2 * s3 + s1 * s2 * y3) * window_phase(a);
    };
    auto error_pairs = [&](double a) {   // x1 y2 y3 + y1 x2 y3 + y1 y2 x3
        auto s1 = smoothed_sum(spec1, a), s2 = smoothed_sum(spec2, a), s3 = smoothed_sum(spec3, a);
        auto x1 = model(0, a), x2 = model(1, a), x3 = model(2, a);
        auto y1 = s1 - x1, y2 = s2 - x2, y3 = s3 - x3;
        return (x1 * y2 * y3 + y1 * x2 * y3 + y1 * y2 * x3) * window_phase(a);
    };
    auto error_cube = [&](double a) {   // 2 y1 y2 y3
        auto y1 = smoothed_sum(spec1, a) - model(0, a);
        auto y2 = smoothed_sum(spec2, a) - model(1, a);
        auto y3 = smoothed_sum(spec3, a) - model(2, a);
        return 2.0 * y1 * y2 * y3 * window_phase(a);
    };
    auto full_product = [&](double a) {
        return smoothed_sum(spec1, a) * smoothed_sum(spec2, a) * smoothed_sum(spec3, a) *
               window_phase(a);
    };
    auto model_cube = [&](double a) { return z_power(a, N, t.rho) * window_phase(a); };

    double boundary = mode == DecomposeMode::unconditional
                          ? B / static_cast<double>(H)
                          : 0.5;
    // full retained band: with panels seeded at half this density, the first
    // doubling already resolves every term, so refinement terminates fast
    double f_sig = static_cast<double>(spec1.max_frequency) +
                   static_cast<double>(spec2.max_frequency) +
                   static_cast<double>(spec3.max_frequency) + static_cast<double>(N + H);
    double piece_tol = tolerance / 64.0;

    DecompositionReport rep;
    rep.N = N;
    rep.H = H;
    rep.triple = t;
    rep.mode = mode;
    rep.B = mode == DecomposeMode::unconditional ? B : 0.0;
    rep.tolerance = tolerance;

    auto integrate_piece = [&](auto&& fn, double lo, double hi) {
        std::int64_t panels0 = std::max<std::int64_t>(
            32, static_cast<std::int64_t>(std::ceil((hi - lo) * f_sig / 2.0)));
        auto q = integrate_adaptive(fn, lo, hi, 1e-11, piece_tol, panels0,
                                    (std::int64_t{1} << 27), workers);
        rep.evaluations += q.evaluations;
        return q.value;
    };

    rep.i1 = integrate_piece(model_cube, -boundary, boundary);
    rep.i2 = integrate_piece(cross_terms, -boundary, boundary);
    rep.i3 = integrate_piece(error_pairs, -boundary, boundary);
    rep.i4 = integrate_piece(error_cube, -boundary, boundary);
    if (mode == DecomposeMode::unconditional && boundary < 0.5)
        rep.i5 = integrate_piece(full_product, -0.5, -boundary) +
                 integrate_piece(full_product, boundary, 0.5);   // B = H/2 leaves no tail

    detail::check_real_symmetric(rep.i1, "decompose_integral i1");
    detail::check_real_symmetric(rep.i2, "decompose_integral i2");
    detail::check_real_symmetric(rep.i3, "decompose_integral i3");
    detail::check_real_symmetric(rep.i4, "decompose_integral i4");
    if (mode == DecomposeMode::unconditional)
        detail::check_real_symmetric(rep.i5, "decompose_integral i5");

    rep.recombined = t.gamma_product() * rep.i1.real() + rep.i2.real() - rep.i3.real() -
                     rep.i4.real() + rep.i5.real();
    rep.direct_weighted_sum = interval_sums(N, H, t, table, false, workers).sum_weighted;
    rep.discrepancy = std::abs(rep.recombined - rep.direct_weighted_sum);
    rep.within_tolerance = rep.discrepancy <= tolerance;
    return rep;
}

} // namespace wglab
