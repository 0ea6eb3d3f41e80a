#pragma once

#include <string>

#include <boost/multiprecision/cpp_int.hpp>

namespace spreadcol {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

inline std::string to_string(const Rational& r) { return r.str(); }
inline double to_double(const Rational& r) { return r.convert_to<double>(); }

}  // namespace spreadcol
