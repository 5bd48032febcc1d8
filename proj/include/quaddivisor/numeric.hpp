// Exact integer/rational scalar types shared by all modules.
//
// Counting and extremum code runs on arbitrary-precision integers and
// rationals; floating point enters only in the analytic modules (zeta,
// jets, quadrature).

#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace qd {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Precondition/contract violations (bad dimensions, non-symmetric Q, ...).
struct DomainError : Error {
    using Error::Error;
};

// Work or memory above the configured cap ("modulus too large" and friends).
struct ResourceError : Error {
    using Error::Error;
};

// F takes a negative value where a divisor-sum argument is required.
struct InadmissibleError : Error {
    using Error::Error;
};

inline Int rat_num(const Rat& r) { return boost::multiprecision::numerator(r); }
inline Int rat_den(const Rat& r) { return boost::multiprecision::denominator(r); }

// floor(a/b) for exact integers, b > 0 assumed normalized by caller sign fix.
inline Int floor_div(const Int& a, const Int& b) {
    Int q = a / b, r = a % b;
    if (r != 0 && ((r < 0) != (b < 0))) --q;
    return q;
}

inline Int floor_rat(const Rat& r) { return floor_div(rat_num(r), rat_den(r)); }
inline Int ceil_rat(const Rat& r) { return -floor_div(-rat_num(r), rat_den(r)); }

inline double to_double(const Rat& r) { return static_cast<double>(r); }
inline double to_double(const Int& i) { return static_cast<double>(i); }

inline std::int64_t to_i64(const Int& v) {
    if (v > std::numeric_limits<std::int64_t>::max() ||
        v < std::numeric_limits<std::int64_t>::min())
        throw ResourceError("integer does not fit in 64 bits: " + v.str());
    return static_cast<std::int64_t>(v);
}

}  // namespace qd
