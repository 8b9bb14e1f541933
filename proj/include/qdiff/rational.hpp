#pragma once

#include <boost/rational.hpp>

#include <cstdint>
#include <numeric>
#include <string>

namespace qd {

// Exponents of z and q live here. They stay small in practice, so a 64-bit
// rational is plenty; coefficients use GMP instead.
using Rat = boost::rational<long long>;

inline long long floor_div(long long a, long long b) {
    long long d = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --d;
    return d;
}

inline long long floor_rat(const Rat& r) { return floor_div(r.numerator(), r.denominator()); }
inline long long ceil_rat(const Rat& r) { return -floor_div(-r.numerator(), r.denominator()); }

inline long long lcm_ll(long long a, long long b) {
    if (a == 0 || b == 0) return 0;
    return std::lcm(a < 0 ? -a : a, b < 0 ? -b : b);
}

inline bool is_integer(const Rat& r) { return r.denominator() == 1; }

inline std::string rat_str(const Rat& r) {
    if (r.denominator() == 1) return std::to_string(r.numerator());
    return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

}  // namespace qd
