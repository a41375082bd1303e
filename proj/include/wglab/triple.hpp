#pragma once

#include <stdexcept>
#include <string>

#include "wglab/gamma.hpp"

namespace wglab {

// The exponent triple k1 <= k2 <= k3 with its density rho = sum 1/kj and
// the Gamma factors attached to each exponent. k1 >= 2 unless the
// exploratory override is set (recorded so reports can flag it).
struct ExponentTriple {
    int k1 = 2, k2 = 2, k3 = 2;
    double rho = 1.5;
    double gammas[3] = {0, 0, 0};
    bool exploratory = false;

    static ExponentTriple make(int k1, int k2, int k3, bool allow_k1_below_2 = false) {
        if (!(k1 <= k2 && k2 <= k3))
            throw std::invalid_argument("ExponentTriple: need k1 <= k2 <= k3, got (" +
                                        std::to_string(k1) + "," + std::to_string(k2) + "," +
                                        std::to_string(k3) + ")");
        int floor_k1 = allow_k1_below_2 ? 1 : 2;
        if (k1 < floor_k1)
            throw std::invalid_argument("ExponentTriple: k1 must be >= " +
                                        std::to_string(floor_k1));
        ExponentTriple t;
        t.k1 = k1;
        t.k2 = k2;
        t.k3 = k3;
        t.rho = 1.0 / k1 + 1.0 / k2 + 1.0 / k3;
        t.gammas[0] = gamma_factor(k1);
        t.gammas[1] = gamma_factor(k2);
        t.gammas[2] = gamma_factor(k3);
        t.exploratory = allow_k1_below_2 && k1 < 2;
        return t;
    }

    int k(int j) const { return j == 0 ? k1 : (j == 1 ? k2 : k3); }
    double gamma_product() const { return gammas[0] * gammas[1] * gammas[2]; }
};

} // namespace wglab
