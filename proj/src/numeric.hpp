#pragma once

#include <cmath>
#include <sstream>
#include <string>

namespace tweedie::detail {

/// (exp(a * log_x) - 1) / a, i.e. (x^a - 1) / a, continuous at a = 0 where it
/// is log_x. expm1 keeps full relative precision for small a.
template <class T>
inline T powm1_over(T a, T log_x) {
    if (a == 0) return log_x;
    return std::expm1(a * log_x) / a;
}

inline bool near(double p, double target, double band) {
    return std::fabs(p - target) < band;
}

inline std::string num(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

}  // namespace tweedie::detail
