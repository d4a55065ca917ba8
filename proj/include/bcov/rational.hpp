#pragma once

#include <gmpxx.h>
#include <string>

namespace bcov {

using Q = mpq_class;

// Accepts "p", "p/q" and "-p/q"; result is canonicalized.
Q parse_rational(const std::string& s);
std::string to_string(const Q& x);

// q^e for integer e >= 0
Q pow_int(const Q& q, long e);

inline int sgn(const Q& x) { return ::sgn(x); }

}  // namespace bcov
