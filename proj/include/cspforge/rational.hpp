#pragma once

#include <gmpxx.h>
#include <string>

namespace cspforge {

using Rational = mpq_class;
using Integer = mpz_class;

inline std::string to_string(const Rational& q) { return q.get_str(); }
inline std::string to_string(const Integer& z) { return z.get_str(); }

inline Rational parse_rational(const std::string& s) {
    Rational q;
    if (q.set_str(s, 10) != 0) throw std::invalid_argument("bad rational: " + s);
    q.canonicalize();
    return q;
}

inline Integer parse_integer(const std::string& s) {
    Integer z;
    if (z.set_str(s, 10) != 0) throw std::invalid_argument("bad integer: " + s);
    return z;
}

} // namespace cspforge
