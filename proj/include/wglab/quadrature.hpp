#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "wglab/errors.hpp"
#include "wglab/parallel.hpp"
#include "wglab/smoothed.hpp"
#include "wglab/summation.hpp"

namespace wglab {

// Uniform periodic grid alpha_j = -1/2 + j/M. With M > 2*bandwidth + 4,
// integrals of trigonometric polynomials of degree <= bandwidth against
// e(-n alpha) are sample means, exact up to rounding. Phases are reduced in
// integer arithmetic through the twiddle table, so no precision is lost at
// large frequencies.
struct QuadratureGrid {
    std::int64_t M = 0;
    std::int64_t bandwidth_bound = 0;
    std::vector<std::complex<double>> twiddle;   // e(j/M), j = 0..M-1

    static QuadratureGrid for_bandwidth(std::int64_t bandwidth) {
        return with_samples(2 * bandwidth + 5, bandwidth);
    }

    static QuadratureGrid with_samples(std::int64_t M, std::int64_t bandwidth) {
        if (bandwidth < 0)
            throw std::invalid_argument("QuadratureGrid: bandwidth must be nonnegative");
        if (M <= 2 * bandwidth + 4)
            throw std::invalid_argument("QuadratureGrid: M = " + std::to_string(M) +
                                        " aliases bandwidth " + std::to_string(bandwidth) +
                                        " (need M > 2*bandwidth + 4)");
        if (M > (std::int64_t{1} << 31))
            throw resource_limit_error("QuadratureGrid: M = " + std::to_string(M) +
                                       " exceeds the 2^31 sample cap");
        QuadratureGrid g;
        g.M = M;
        g.bandwidth_bound = bandwidth;
        g.twiddle.resize(static_cast<std::size_t>(M));
        double step = 2.0 * M_PI / static_cast<double>(M);
        for (std::int64_t j = 0; j < M; ++j)
            g.twiddle[static_cast<std::size_t>(j)] = {std::cos(step * j), std::sin(step * j)};
        return g;
    }

    double alpha(std::int64_t j) const {
        return -0.5 + static_cast<double>(j) / static_cast<double>(M);
    }

    // e(f * alpha_j) = (-1)^f e(f j / M), reduced exactly: |f mod M| * j < M^2 <= 2^62.
    std::complex<double> unit(std::int64_t f, std::int64_t j) const {
        std::int64_t r = ((f % M) * j) % M;
        if (r < 0) r += M;
        std::complex<double> w = twiddle[static_cast<std::size_t>(r)];
        return (f % 2 == 0) ? w : -w;
    }
};

// All M samples of a smoothed sum, via the twiddle table. Disjoint writes
// per chunk, so parallel evaluation is trivially deterministic.
inline std::vector<std::complex<double>> sample_smoothed_sum(const SmoothedSumSpec& spec,
                                                             const QuadratureGrid& grid,
                                                             unsigned workers = 1) {
    if (spec.max_frequency > grid.bandwidth_bound)
        throw std::invalid_argument("sample_smoothed_sum: spec frequency " +
                                    std::to_string(spec.max_frequency) +
                                    " exceeds grid bandwidth " +
                                    std::to_string(grid.bandwidth_bound));
    std::int64_t M = grid.M;
    std::vector<std::complex<double>> out(static_cast<std::size_t>(M));
    std::vector<std::int64_t> fmod(spec.terms.size());
    std::vector<double> sign(spec.terms.size());
    for (std::size_t i = 0; i < spec.terms.size(); ++i) {
        fmod[i] = spec.terms[i].frequency % M;
        sign[i] = (spec.terms[i].frequency % 2 == 0) ? 1.0 : -1.0;
    }
    constexpr std::int64_t chunk_len = 8192;
    std::size_t chunk_count = static_cast<std::size_t>((M + chunk_len - 1) / chunk_len);
    for_each_chunk(chunk_count, workers, [&](std::size_t c) {
        std::int64_t lo = static_cast<std::int64_t>(c) * chunk_len;
        std::int64_t hi = std::min<std::int64_t>(lo + chunk_len, M);
        for (std::int64_t j = lo; j < hi; ++j) {
            std::complex<double> acc{0.0, 0.0};
            for (std::size_t i = 0; i < fmod.size(); ++i) {
                std::int64_t r = (fmod[i] * j) % M;
                if (r < 0) r += M;
                acc += (spec.terms[i].weight * sign[i]) * grid.twiddle[static_cast<std::size_t>(r)];
            }
            out[static_cast<std::size_t>(j)] = acc;
        }
    });
    return out;
}

// (1/M) sum_j F(alpha_j) e(-target alpha_j): the Fourier coefficient of F at
// integer frequency `target`, exact for band-limited F on this grid.
inline std::complex<double> fourier_coefficient(const std::vector<std::complex<double>>& samples,
                                                const QuadratureGrid& grid,
                                                std::int64_t target) {
    if (static_cast<std::int64_t>(samples.size()) != grid.M)
        throw std::invalid_argument("fourier_coefficient: sample count does not match grid");
    neumaier_complex_sum acc;
    for (std::int64_t j = 0; j < grid.M; ++j)
        acc.add(samples[static_cast<std::size_t>(j)] * grid.unit(-target, j));
    return acc.value() / static_cast<double>(grid.M);
}

// Composite 12-point Gauss-Legendre over [a, b] with panel doubling until
// two successive estimates agree to the requested tolerance. Sub-interval
// integrands here are smooth but oscillatory; the caller seeds the panel
// count from the integrand's highest significant frequency.
struct QuadratureOutcome {
    std::complex<double> value{0.0, 0.0};
    double last_change = 0;
    std::int64_t panels = 0;
    std::int64_t evaluations = 0;
    int refinements = 0;
};

namespace detail {
// nodes/weights for the positive half of the 12-point rule on [-1, 1]
inline constexpr double gl12_node[6] = {
    0.98156063424671925069, 0.90411725637047485668, 0.76990267419430468704,
    0.5873179542866174473,  0.36783149899818019375, 0.12523340851146891547,
};
inline constexpr double gl12_weight[6] = {
    0.047175336386511827195, 0.10693932599531843096, 0.16007832854334622633,
    0.20316742672306592175,  0.23349253653835480876, 0.249147045813402785,
};

template <typename F>
std::complex<double> gl12_composite(F&& f, double a, double b, std::int64_t panels,
                                    unsigned workers) {
    double width = (b - a) / static_cast<double>(panels);
    constexpr std::int64_t chunk_len = 256;
    std::size_t chunk_count = static_cast<std::size_t>((panels + chunk_len - 1) / chunk_len);
    std::vector<std::complex<double>> partial(chunk_count);
    for_each_chunk(chunk_count, workers, [&](std::size_t c) {
        std::int64_t lo = static_cast<std::int64_t>(c) * chunk_len;
        std::int64_t hi = std::min<std::int64_t>(lo + chunk_len, panels);
        neumaier_complex_sum acc;
        for (std::int64_t p = lo; p < hi; ++p) {
            double mid = a + (static_cast<double>(p) + 0.5) * width;
            double half = 0.5 * width;
            for (int i = 0; i < 6; ++i) {
                double dx = half * gl12_node[i];
                acc.add(gl12_weight[i] * (f(mid - dx) + f(mid + dx)));
            }
        }
        partial[c] = acc.value() * (0.5 * width);
    });
    neumaier_complex_sum total;
    for (const auto& v : partial) total.add(v);
    return total.value();
}
} // namespace detail

template <typename F>
QuadratureOutcome integrate_adaptive(F&& f, double a, double b, double rel_tol, double abs_tol,
                                     std::int64_t initial_panels,
                                     std::int64_t max_evaluations = (std::int64_t{1} << 26),
                                     unsigned workers = 1) {
    if (!(b > a))
        throw std::invalid_argument("integrate_adaptive: need b > a");
    if (initial_panels < 1) initial_panels = 1;

    QuadratureOutcome out;
    std::int64_t panels = initial_panels;
    std::complex<double> prev = detail::gl12_composite(f, a, b, panels, workers);
    out.evaluations = 12 * panels;
    for (;;) {
        panels *= 2;
        if (out.evaluations + 12 * panels > max_evaluations) {
            std::ostringstream msg;
            msg << "integrate_adaptive: no convergence over [" << a << ", " << b << "] after "
                << out.evaluations << " evaluations (panels " << panels / 2 << ", last change "
                << out.last_change << ", estimate " << prev.real() << "+" << prev.imag() << "i)";
            throw numerical_failure(msg.str());
        }
        std::complex<double> cur = detail::gl12_composite(f, a, b, panels, workers);
        out.evaluations += 12 * panels;
        out.refinements += 1;
        out.last_change = std::abs(cur - prev);
        if (out.last_change <= std::max(abs_tol, rel_tol * std::abs(cur))) {
            out.value = cur;
            out.panels = panels;
            return out;
        }
        prev = cur;
    }
}

} // namespace wglab
