#pragma once

#include <gmpxx.h>

#include <cmath>
#include <cstdlib>
#include <string>
#include <vector>

#include "triarb/errors.hpp"

namespace triarb {

// The three scalar kinds. All combinatorial analysis runs on Int; Rat is for
// rational log-rates; double only for rate-space reporting.
using Int = mpz_class;
using Rat = mpq_class;

template <class S>
struct scalar_traits;

template <>
struct scalar_traits<Int> {
    static constexpr bool exact = true;
    static Int from_int(const Int& v) { return v; }
    static double to_double(const Int& v) { return v.get_d(); }
    static Int abs(const Int& v) { return ::abs(v); }
};

template <>
struct scalar_traits<Rat> {
    static constexpr bool exact = true;
    static Rat from_int(const Int& v) { return Rat(v); }
    static double to_double(const Rat& v) { return v.get_d(); }
    static Rat abs(const Rat& v) { return ::abs(v); }
};

template <>
struct scalar_traits<double> {
    static constexpr bool exact = false;
    static double from_int(const Int& v) { return v.get_d(); }
    static double to_double(double v) { return v; }
    static double abs(double v) { return std::fabs(v); }
};

template <class S>
S sup_norm(const std::vector<S>& v) {
    S best = S(0);
    for (const S& x : v) {
        S a = scalar_traits<S>::abs(x);
        if (a > best) best = a;
    }
    return best;
}

/// Decimal rendering: integers as plain decimals, non-integers as "p/q".
inline std::string to_decimal(const Int& v) { return v.get_str(); }

inline std::string to_decimal(const Rat& v) {
    Rat c = v;
    c.canonicalize();
    if (c.get_den() == 1) return c.get_num().get_str();
    return c.get_num().get_str() + "/" + c.get_den().get_str();
}

/// Parses "p", "-p" or "p/q" into a canonical rational.
inline Rat parse_rational(const std::string& s) {
    if (s.empty()) throw validation_error("empty rational literal");
    mpq_class q;
    if (q.set_str(s, 10) != 0)
        throw validation_error("cannot parse rational literal '" + s + "'");
    if (q.get_den() == 0)
        throw validation_error("zero denominator in '" + s + "'");
    q.canonicalize();
    return q;
}

/// log of a positive exact value, usable far beyond double range.
inline double log_value(const Int& v) {
    if (v <= 0) throw validation_error("log of non-positive value");
    signed long exp2 = 0;
    double m = mpz_get_d_2exp(&exp2, v.get_mpz_t());
    return std::log(m) + static_cast<double>(exp2) * std::log(2.0);
}

inline double log_value(const Rat& v) {
    if (v <= 0) throw validation_error("log of non-positive value");
    return log_value(Int(v.get_num())) - log_value(Int(v.get_den()));
}

inline double log_value(double v) {
    if (v <= 0) throw validation_error("log of non-positive value");
    return std::log(v);
}

}  // namespace triarb
