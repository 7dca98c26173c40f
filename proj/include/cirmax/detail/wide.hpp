#pragma once

// Extended precision carrier types used when double loses too many digits
// to cancellation. 100 decimal digits covers the worst case exercised by
// the eigenfunction route (inner series near x ~ 150 carries ~50 digits of
// intermediate growth on top of ~20 digits of alternating-sum cancellation).

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_complex.hpp>

namespace cirmax::detail {

using wide = boost::multiprecision::cpp_bin_float_100;
using cwide = boost::multiprecision::cpp_complex_100;

inline double to_double(const wide& v) { return static_cast<double>(v); }

inline std::complex<double> to_complex(const cwide& v) {
    return {static_cast<double>(v.real()), static_cast<double>(v.imag())};
}

} // namespace cirmax::detail
