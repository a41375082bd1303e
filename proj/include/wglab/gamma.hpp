#pragma once

#include <cmath>
#include <stdexcept>

namespace wglab {

// Lanczos approximation with g = 7 and 9 coefficients (Godfrey's set),
// accurate to ~15 significant digits over the positive reals.  Reflection
// handles arguments below 0.5 so gamma_real is usable on (0, inf) and at
// negative non-integers, though only positive arguments occur here.
inline double gamma_real(double x) {
    static const double coef[9] = {
        0.99999999999980993,
        676.5203681218851,
        -1259.1392167224028,
        771.32342877765313,
        -176.61502916214059,
        12.507343278686905,
        -0.13857109526572012,
        9.9843695780195716e-6,
        1.5056327351493116e-7,
    };
    if (x < 0.5) {
        // Gamma(x) Gamma(1-x) = pi / sin(pi x)
        return M_PI / (std::sin(M_PI * x) * gamma_real(1.0 - x));
    }
    x -= 1.0;
    double a = coef[0];
    double t = x + 7.5;
    for (int i = 1; i < 9; ++i) a += coef[i] / (x + i);
    return std::sqrt(2.0 * M_PI) * std::pow(t, x + 0.5) * std::exp(-t) * a;
}

// gamma_k = Gamma(1 + 1/k), the singular-series factor attached to each
// exponent.  k is real so exploratory non-integer exponents work too.
inline double gamma_factor(double k) {
    if (!(k > 0.0))
        throw std::invalid_argument("gamma_factor: k must be positive");
    return gamma_real(1.0 + 1.0 / k);
}

} // namespace wglab
