#pragma once

#include <gmpxx.h>

#include <stdexcept>
#include <string>

namespace derham {

using Int = mpz_class;
using Rational = mpq_class;

// Thrown on malformed user input: bad expressions, bad weights, inhomogeneous
// polynomials where homogeneity is required.
struct input_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Thrown when a theorem hypothesis fails (for example the singular locus is
// not isolated) and the requested computation is therefore out of scope.
struct hypothesis_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Thrown when internal consistency checks fail.  Any occurrence is a bug.
struct internal_error : std::logic_error {
  using std::logic_error::logic_error;
};

inline std::string to_string(const Rational& q) { return q.get_str(); }
inline std::string to_string(const Int& z) { return z.get_str(); }

}  // namespace derham
