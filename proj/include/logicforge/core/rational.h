#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace logicforge {

// Exact rational with 64-bit numerator and denominator, always normalized
// (gcd(num, den) == 1, den > 0). Intermediate products are computed in 128
// bits; results that do not fit 64 bits are reported as overflow rather than
// silently wrapped.
class Rational {
 public:
  constexpr Rational() = default;
  constexpr Rational(std::int64_t value) : num_(value) {}  // NOLINT(implicit)

  // Throws std::domain_error on a zero denominator.
  static Rational of(std::int64_t num, std::int64_t den);

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }
  bool is_integer() const { return den_ == 1; }
  double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }

  // "p" for integers, "p/q" otherwise.
  std::string str() const;

  // Accepts "p", "-p", "p/q" and finite decimals such as "0.25".
  static std::optional<Rational> parse(std::string_view text);

  friend std::optional<Rational> checked_add(const Rational& a, const Rational& b);
  friend std::optional<Rational> checked_sub(const Rational& a, const Rational& b);
  friend std::optional<Rational> checked_mul(const Rational& a, const Rational& b);
  // nullopt on division by zero as well as on overflow.
  friend std::optional<Rational> checked_div(const Rational& a, const Rational& b);

  friend Rational operator+(const Rational& a, const Rational& b);
  friend Rational operator-(const Rational& a, const Rational& b);
  friend Rational operator*(const Rational& a, const Rational& b);
  friend Rational operator/(const Rational& a, const Rational& b);

  friend bool operator==(const Rational& a, const Rational& b) = default;
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b);

 private:
  static std::optional<Rational> from_wide(__int128 num, __int128 den);

  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

}  // namespace logicforge
