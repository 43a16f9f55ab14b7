#pragma once

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>

namespace osl {

// Exact rational on int64 with overflow detection.  All graph edge lengths
// in this project are rationals, so shortest-path distances, critical radii
// and scale factors stay exact; anything numerical converts to double at the
// boundary.  Intermediate products use __int128; results that do not fit in
// int64 after reduction throw std::overflow_error rather than wrapping.
struct Rat {
  std::int64_t num = 0;
  std::int64_t den = 1;  // > 0, gcd(|num|, den) == 1

  Rat() = default;
  Rat(std::int64_t n) : num(n), den(1) {}
  Rat(std::int64_t n, std::int64_t d) {
    if (d == 0) throw std::domain_error("Rat: zero denominator");
    __int128 nn = n, dd = d;
    if (dd < 0) { nn = -nn; dd = -dd; }
    *this = make(nn, dd);
  }

  static Rat make(__int128 n, __int128 d) {
    if (d == 0) throw std::domain_error("Rat: zero denominator");
    if (d < 0) { n = -n; d = -d; }
    __int128 a = n < 0 ? -n : n;
    __int128 g = gcd128(a, d);
    if (g > 1) { n /= g; d /= g; }
    if (n > INT64_MAX || n < INT64_MIN || d > INT64_MAX)
      throw std::overflow_error("Rat: overflow");
    Rat r;
    r.num = static_cast<std::int64_t>(n);
    r.den = static_cast<std::int64_t>(d);
    return r;
  }

  static __int128 gcd128(__int128 a, __int128 b) {
    while (b) { __int128 t = a % b; a = b; b = t; }
    return a;
  }

  double to_double() const { return static_cast<double>(num) / static_cast<double>(den); }

  friend Rat operator+(const Rat& a, const Rat& b) {
    return make((__int128)a.num * b.den + (__int128)b.num * a.den, (__int128)a.den * b.den);
  }
  friend Rat operator-(const Rat& a, const Rat& b) {
    return make((__int128)a.num * b.den - (__int128)b.num * a.den, (__int128)a.den * b.den);
  }
  friend Rat operator*(const Rat& a, const Rat& b) {
    return make((__int128)a.num * b.num, (__int128)a.den * b.den);
  }
  friend Rat operator/(const Rat& a, const Rat& b) {
    if (b.num == 0) throw std::domain_error("Rat: division by zero");
    return make((__int128)a.num * b.den, (__int128)a.den * b.num);
  }
  Rat operator-() const { Rat r; r.num = -num; r.den = den; return r; }
  Rat& operator+=(const Rat& b) { return *this = *this + b; }
  Rat& operator-=(const Rat& b) { return *this = *this - b; }
  Rat& operator*=(const Rat& b) { return *this = *this * b; }
  Rat& operator/=(const Rat& b) { return *this = *this / b; }

  friend bool operator==(const Rat& a, const Rat& b) { return a.num == b.num && a.den == b.den; }
  friend bool operator!=(const Rat& a, const Rat& b) { return !(a == b); }
  friend bool operator<(const Rat& a, const Rat& b) {
    return (__int128)a.num * b.den < (__int128)b.num * a.den;
  }
  friend bool operator>(const Rat& a, const Rat& b) { return b < a; }
  friend bool operator<=(const Rat& a, const Rat& b) { return !(b < a); }
  friend bool operator>=(const Rat& a, const Rat& b) { return !(a < b); }

  std::string str() const {
    if (den == 1) return std::to_string(num);
    return std::to_string(num) + "/" + std::to_string(den);
  }

  // Accepts "p", "p/q", or a plain decimal like "1.25".
  static Rat parse(const std::string& s) {
    if (s.empty()) throw std::invalid_argument("Rat: empty token");
    auto slash = s.find('/');
    if (slash != std::string::npos) {
      std::int64_t p = std::stoll(s.substr(0, slash));
      std::int64_t q = std::stoll(s.substr(slash + 1));
      return Rat(p, q);
    }
    auto dot = s.find('.');
    if (dot == std::string::npos) return Rat(std::stoll(s));
    std::string digits = s.substr(0, dot) + s.substr(dot + 1);
    std::size_t frac = s.size() - dot - 1;
    if (frac > 18) throw std::invalid_argument("Rat: too many decimal places: " + s);
    __int128 den = 1;
    for (std::size_t i = 0; i < frac; ++i) den *= 10;
    return make(std::stoll(digits), den);
  }
};

inline Rat min(const Rat& a, const Rat& b) { return a < b ? a : b; }
inline Rat max(const Rat& a, const Rat& b) { return a < b ? b : a; }
inline Rat abs(const Rat& a) { return a.num < 0 ? -a : a; }

}  // namespace osl
