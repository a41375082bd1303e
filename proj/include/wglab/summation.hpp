#pragma once

#include <complex>
#include <cstddef>

namespace wglab {

// Neumaier variant of compensated summation: like Kahan but also correct
// when the incoming term is larger than the running sum.
class neumaier_sum {
public:
    void add(double x) {
        double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x))
            comp_ += (sum_ - t) + x;
        else
            comp_ += (x - t) + sum_;
        sum_ = t;
    }

    double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

class neumaier_complex_sum {
public:
    void add(std::complex<double> z) {
        re_.add(z.real());
        im_.add(z.imag());
    }

    std::complex<double> value() const { return {re_.value(), im_.value()}; }

private:
    neumaier_sum re_;
    neumaier_sum im_;
};

} // namespace wglab
