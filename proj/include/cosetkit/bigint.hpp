#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>
#include <vector>

namespace cosetkit {

// Exact arbitrary-precision integer. Everything in the engine is exact;
// canonical forms (HNF) overflow fixed width even on small inputs.
using Int = boost::multiprecision::cpp_int;

using IntVec = std::vector<Int>;
using IntMat = std::vector<IntVec>;

inline std::string to_decimal(const Int& x) { return x.str(); }

inline Int from_decimal(const std::string& s) { return Int(s); }

// Floor division (cpp_int's operator/ truncates toward zero).
inline Int floor_div(const Int& a, const Int& b) {
  Int q = a / b;
  if ((a % b) != 0 && ((a < 0) != (b < 0))) --q;
  return q;
}

}  // namespace cosetkit
