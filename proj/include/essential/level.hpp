#pragma once

#include <compare>
#include <cstdint>
#include <limits>
#include <string>

namespace essential {

// Natural number extended with infinity. Addition saturates at infinity,
// and infinity is the largest element.
class Level {
 public:
  constexpr Level() = default;  // infinity
  constexpr explicit Level(std::uint32_t value) : value_(value) {}

  static constexpr Level infinity() { return Level(); }

  constexpr bool is_infinite() const { return value_ == kInf; }
  constexpr bool is_finite() const { return value_ != kInf; }
  constexpr std::uint32_t value() const { return value_; }

  constexpr Level operator+(std::uint32_t k) const {
    if (is_infinite()) return *this;
    return Level(value_ + k);
  }

  friend constexpr bool operator==(Level, Level) = default;
  friend constexpr auto operator<=>(Level a, Level b) { return a.value_ <=> b.value_; }

  friend constexpr Level min(Level a, Level b) { return a < b ? a : b; }

  // "∞" for infinity; the decimal value otherwise.
  std::string str() const { return is_infinite() ? "∞" : std::to_string(value_); }
  // ASCII spelling used in JSON: "inf" or the decimal value.
  std::string ascii() const { return is_infinite() ? "inf" : std::to_string(value_); }

 private:
  static constexpr std::uint32_t kInf = std::numeric_limits<std::uint32_t>::max();
  std::uint32_t value_ = kInf;
};

}  // namespace essential
