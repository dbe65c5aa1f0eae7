#pragma once

#include <gmpxx.h>

#include <string>

namespace smtkc {

using Rational = mpq_class;
using BigInt = mpz_class;

inline std::string to_string(const Rational& q) { return q.get_str(); }
inline std::string to_string(const BigInt& z) { return z.get_str(); }

}  // namespace smtkc
