#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <string>
#include <string_view>

#include "finex/errors.hpp"

namespace finex {

// All coefficient and measure arithmetic in this library is exact.
// Int/Rational are arbitrary precision; Rational is kept reduced with a
// positive denominator by the backend.
using Int = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline Rational make_rational(Int num, Int den) {
    if (den == 0) throw ValidationError("rational with zero denominator");
    return Rational(std::move(num), std::move(den));
}

inline Int factorial(int n) {
    if (n < 0) throw ValidationError("factorial of negative integer");
    Int r = 1;
    for (int i = 2; i <= n; ++i) r *= i;
    return r;
}

/// N(N-1)...(N-k+1), k factors.
inline Int falling_factorial(const Int& n, int k) {
    if (k < 0) throw ValidationError("falling_factorial with negative k");
    Int r = 1;
    for (int i = 0; i < k; ++i) r *= (n - i);
    return r;
}

inline Int binomial(int n, int k) {
    if (k < 0 || k > n) return 0;
    if (k > n - k) k = n - k;
    Int r = 1;
    for (int i = 1; i <= k; ++i) {
        r *= (n - k + i);
        r /= i; // exact at every step
    }
    return r;
}

/// q^e for integer e (negative e inverts; q must be nonzero then).
inline Rational pow_rational(const Rational& q, int e) {
    if (e < 0 && q == 0) throw ValidationError("zero to a negative power");
    Rational base = e < 0 ? Rational(denominator(q), numerator(q)) : q;
    int m = e < 0 ? -e : e;
    Rational r = 1;
    for (int i = 0; i < m; ++i) r *= base;
    return r;
}

/// "num/den", or just "num" when the denominator is 1.
inline std::string to_string(const Rational& q) {
    if (denominator(q) == 1) return numerator(q).str();
    return numerator(q).str() + "/" + denominator(q).str();
}

/// Accepts "num", "num/den", optional leading '-'.
inline Rational parse_rational(std::string_view s) {
    const auto bad = [&] { return ValidationError("cannot parse rational: '" + std::string(s) + "'"); };
    if (s.empty()) throw bad();
    const auto slash = s.find('/');
    try {
        if (slash == std::string_view::npos) return Rational(Int(std::string(s)));
        Int num{std::string(s.substr(0, slash))};
        Int den{std::string(s.substr(slash + 1))};
        if (den == 0) throw bad();
        return Rational(num, den);
    } catch (const std::exception&) {
        throw bad();
    }
}

inline double to_double(const Rational& q) { return q.template convert_to<double>(); }

inline Rational rational_abs(const Rational& q) { return q < 0 ? Rational(-q) : q; }

} // namespace finex
