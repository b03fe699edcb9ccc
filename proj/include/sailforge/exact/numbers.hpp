#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

namespace sailforge {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

/// Malformed input: bad JSON, invalid indices, inconsistent shapes.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An operation's precondition does not hold for the given data.
class DomainError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline int sign(const Int& v) { return v.sign(); }
inline int sign(const Rat& v) { return v.sign(); }

inline Int abs(const Int& v) { return v < 0 ? Int(-v) : v; }

inline Int gcd(const Int& a, const Int& b) { return boost::multiprecision::gcd(a, b); }

inline Int numerator(const Rat& r) { return boost::multiprecision::numerator(r); }
inline Int denominator(const Rat& r) { return boost::multiprecision::denominator(r); }

/// Largest integer <= r.
inline Int floor(const Rat& r) {
  Int n = numerator(r);
  Int d = denominator(r);
  Int q = n / d;
  if (n % d != 0 && n < 0) q -= 1;
  return q;
}

/// Smallest integer >= r.
inline Int ceil(const Rat& r) {
  Int n = numerator(r);
  Int d = denominator(r);
  Int q = n / d;
  if (n % d != 0 && n > 0) q += 1;
  return q;
}

inline std::string to_string(const Int& v) { return v.str(); }

inline std::string to_string(const Rat& r) {
  if (denominator(r) == 1) return numerator(r).str();
  return numerator(r).str() + "/" + denominator(r).str();
}

/// Parses an optionally signed decimal integer; rejects anything else.
inline Int parse_int(std::string_view s) {
  std::size_t i = 0;
  if (!s.empty() && (s[0] == '-' || s[0] == '+')) i = 1;
  if (i == s.size()) throw InputError("expected decimal integer, got \"" + std::string(s) + "\"");
  for (std::size_t k = i; k < s.size(); ++k) {
    if (s[k] < '0' || s[k] > '9') {
      throw InputError("expected decimal integer, got \"" + std::string(s) + "\"");
    }
  }
  return Int(std::string(s[0] == '+' ? s.substr(1) : s));
}

inline double to_double(const Rat& r) { return r.convert_to<double>(); }
inline double to_double(const Int& v) { return v.convert_to<double>(); }

namespace detail {
inline thread_local std::uint64_t op_counter = 0;
}

/// Integer-operation counter used to measure verifier cost; per thread.
inline void count_ops(std::uint64_t n = 1) { detail::op_counter += n; }
inline std::uint64_t op_count() { return detail::op_counter; }
inline void reset_op_count() { detail::op_counter = 0; }

}  // namespace sailforge
