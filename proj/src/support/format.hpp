#pragma once

#include <complex>
#include <sstream>
#include <string>

namespace quipmc {

/// Renders a complex number as `a`, `bi`, or `a+bi` / `a-bi`. With 17
/// significant digits the textual form round-trips doubles exactly.
inline std::string format_complex(std::complex<double> z, int digits = 17) {
    std::ostringstream os;
    os.precision(digits);
    const double re = z.real();
    const double im = z.imag();
    if (im == 0.0) {
        os << re;
        return os.str();
    }
    if (re == 0.0) {
        os << im << "i";
        return os.str();
    }
    os << re;
    if (im >= 0.0) os << "+";
    os << im << "i";
    return os.str();
}

inline std::string format_double(double x, int digits = 17) {
    std::ostringstream os;
    os.precision(digits);
    os << x;
    return os.str();
}

}  // namespace quipmc
