#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>

namespace ecalc {

/// Exact scalar used throughout the symbolic layer.  Arbitrary precision,
/// always kept in lowest terms by the backend.
using Rat = boost::multiprecision::cpp_rational;
using Int = boost::multiprecision::cpp_int;

inline double to_double(const Rat& q) { return q.convert_to<double>(); }

inline std::string rat_str(const Rat& q) { return q.str(); }

/// True if q is n/1 for some integer n.
inline bool is_integer(const Rat& q) { return denominator(q) == 1; }

} // namespace ecalc
