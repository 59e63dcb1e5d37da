#pragma once

// Exact rational arithmetic used throughout the library, plus canonical
// string conversion. Weights, welfare values, LP coefficients and payments
// are all rationals so that equalities in tests are exact.

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace hgca {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline double to_double(const Rational& q) { return q.convert_to<double>(); }

// ceil(a / b) for b > 0.
inline BigInt ceil_div(const BigInt& a, const BigInt& b) {
  BigInt q = a / b;
  if (q * b < a) ++q;
  return q;
}

inline BigInt ceil_rational(const Rational& q) { return ceil_div(numerator(q), denominator(q)); }

// Smallest k >= 0 with 2^k >= m. Requires m >= 1.
inline int ceil_log2(int m) {
  if (m < 1) throw std::invalid_argument("ceil_log2: m must be >= 1");
  int k = 0;
  BigInt p = 1;
  while (p < m) {
    p <<= 1;
    ++k;
  }
  return k;
}

// base^exponent for small nonnegative integer exponents.
inline Rational rational_pow(const Rational& base, int exponent) {
  if (exponent < 0) throw std::invalid_argument("rational_pow: negative exponent");
  Rational out(1);
  for (int i = 0; i < exponent; ++i) out *= base;
  return out;
}

// Parses "123", "-4", "1.25", ".5" or "p/q". Used for weights in instance
// files; the model layer rejects negatives separately so parsing keeps sign.
inline Rational parse_rational(const std::string& text) {
  if (text.empty()) throw std::invalid_argument("number: empty string");
  std::size_t pos = 0;
  bool negative = false;
  if (text[pos] == '+' || text[pos] == '-') {
    negative = text[pos] == '-';
    ++pos;
  }
  auto digits = [&](std::size_t& at) {
    std::string out;
    while (at < text.size() && text[at] >= '0' && text[at] <= '9') out.push_back(text[at++]);
    return out;
  };
  std::string intpart = digits(pos);
  Rational value;
  if (pos < text.size() && text[pos] == '/') {
    ++pos;
    std::string den = digits(pos);
    if (intpart.empty() || den.empty() || pos != text.size())
      throw std::invalid_argument("number: malformed fraction '" + text + "'");
    BigInt d(den);
    if (d == 0) throw std::invalid_argument("number: zero denominator in '" + text + "'");
    value = Rational(BigInt(intpart), d);
  } else {
    std::string fracpart;
    if (pos < text.size() && text[pos] == '.') {
      ++pos;
      fracpart = digits(pos);
    }
    if (pos != text.size() || (intpart.empty() && fracpart.empty()))
      throw std::invalid_argument("number: malformed decimal '" + text + "'");
    BigInt scale = 1;
    for (std::size_t i = 0; i < fracpart.size(); ++i) scale *= 10;
    BigInt n = BigInt(intpart.empty() ? "0" : intpart) * scale + BigInt(fracpart.empty() ? "0" : fracpart);
    value = Rational(n, scale);
  }
  return negative ? Rational(-value) : value;
}

// Canonical form: integer digits when the value is integral, a minimal
// terminating decimal when the denominator is 2^a * 5^b, otherwise "p/q".
inline std::string format_rational(const Rational& q) {
  BigInt n = numerator(q);
  BigInt d = denominator(q);
  std::string sign = n < 0 ? "-" : "";
  if (n < 0) n = -n;
  if (d == 1) return sign + n.str();
  BigInt dd = d;
  int twos = 0, fives = 0;
  while (dd % 2 == 0) {
    dd /= 2;
    ++twos;
  }
  while (dd % 5 == 0) {
    dd /= 5;
    ++fives;
  }
  if (dd != 1) return sign + n.str() + "/" + d.str();
  int digits = twos > fives ? twos : fives;
  BigInt scale = 1;
  for (int i = 0; i < digits; ++i) scale *= 10;
  BigInt scaled = n * (scale / d);
  std::string s = scaled.str();
  while (static_cast<int>(s.size()) <= digits) s.insert(s.begin(), '0');
  std::string ip = s.substr(0, s.size() - digits);
  std::string fp = s.substr(s.size() - digits);
  while (!fp.empty() && fp.back() == '0') fp.pop_back();
  if (fp.empty()) return sign + ip;
  return sign + ip + "." + fp;
}

// Best rational approximation of x with denominator <= max_denominator,
// via continued fractions. Used when floating LP output must be snapped
// back to exact arithmetic.
inline Rational rational_from_double(double x, std::uint64_t max_denominator = 1000000) {
  if (max_denominator < 1) throw std::invalid_argument("rational_from_double: bad denominator cap");
  bool negative = x < 0;
  if (negative) x = -x;
  double r = x;
  BigInt p0 = 0, q0 = 1, p1 = 1, q1 = 0;
  for (int iter = 0; iter < 64; ++iter) {
    double fl = std::floor(r);
    if (fl > 9.2e18) break;
    BigInt a = static_cast<std::uint64_t>(fl);
    BigInt p2 = a * p1 + p0;
    BigInt q2 = a * q1 + q0;
    if (q2 > max_denominator) break;
    p0 = p1;
    q0 = q1;
    p1 = p2;
    q1 = q2;
    double frac = r - fl;
    if (frac < 1e-15) break;
    r = 1.0 / frac;
  }
  Rational best(p1, q1 == 0 ? BigInt(1) : q1);
  return negative ? Rational(-best) : best;
}

}  // namespace hgca
