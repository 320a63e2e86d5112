#pragma once

#include <compare>
#include <cstdint>
#include <limits>
#include <numeric>
#include <string>

#include "qseries/error.hpp"
#include "qseries/rational.hpp"

namespace qseries {

/// Exact rational exponent of q, kept in lowest terms with a positive denominator.
class Exponent {
 public:
  constexpr Exponent() = default;
  constexpr Exponent(std::int64_t n) : num_(n) {}  // NOLINT: integers are exponents
  Exponent(std::int64_t n, std::int64_t d) : num_(n), den_(d) {
    if (d == 0) throw Error("exponent with zero denominator");
    if (den_ < 0) {
      num_ = -num_;
      den_ = -den_;
    }
    auto g = std::gcd(num_ < 0 ? -num_ : num_, den_);
    if (g > 1) {
      num_ /= g;
      den_ /= g;
    }
  }

  static Exponent from_rational(const Rational& r) {
    if (!r.get_num().fits_slong_p() || !r.get_den().fits_slong_p()) throw Error("exponent out of range");
    return {r.get_num().get_si(), r.get_den().get_si()};
  }

  constexpr std::int64_t num() const noexcept { return num_; }
  constexpr std::int64_t den() const noexcept { return den_; }
  bool is_integer() const noexcept { return den_ == 1; }
  Rational to_rational() const { return make_rational(num_, den_); }

  friend Exponent operator+(Exponent a, Exponent b) {
    return {a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_};
  }
  friend Exponent operator-(Exponent a, Exponent b) {
    return {a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_};
  }
  friend Exponent operator*(Exponent a, Exponent b) { return {a.num_ * b.num_, a.den_ * b.den_}; }
  friend Exponent operator/(Exponent a, Exponent b) { return {a.num_ * b.den_, a.den_ * b.num_}; }
  Exponent operator-() const { return {-num_, den_}; }

  friend bool operator==(Exponent a, Exponent b) noexcept { return a.num_ == b.num_ && a.den_ == b.den_; }
  friend std::strong_ordering operator<=>(Exponent a, Exponent b) noexcept {
    return static_cast<__int128>(a.num_) * b.den_ <=> static_cast<__int128>(b.num_) * a.den_;
  }

  std::string str() const {
    return den_ == 1 ? std::to_string(num_) : std::to_string(num_) + "/" + std::to_string(den_);
  }

 private:
  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

/// The exponent lattice (1/den)Z shared by every series in one computation.
struct Lattice {
  std::int64_t den = 1;

  /// Numerator of e on this lattice; throws RefineLattice when e is not on it.
  std::int64_t numerator(Exponent e) const {
    if (den % e.den() != 0)
      throw RefineLattice("exponent " + e.str() + " is not on lattice 1/" + std::to_string(den) +
                          "; refine the lattice first");
    return e.num() * (den / e.den());
  }
  Exponent exponent(std::int64_t numerator) const { return {numerator, den}; }

  friend bool operator==(Lattice, Lattice) = default;
};

namespace detail {

constexpr std::int64_t kInfinite = std::numeric_limits<std::int64_t>::max();

constexpr std::int64_t sat_add(std::int64_t a, std::int64_t b) {
  if (a == kInfinite || b == kInfinite) return kInfinite;
  return a + b;
}

inline std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

inline std::int64_t ceil_div(std::int64_t a, std::int64_t b) { return -floor_div(-a, b); }

inline std::int64_t mod(std::int64_t a, std::int64_t m) {
  auto r = a % m;
  return r < 0 ? r + m : r;
}

}  // namespace detail
}  // namespace qseries
