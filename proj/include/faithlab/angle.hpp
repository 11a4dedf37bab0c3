#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>

namespace faithlab {

/// Maps an angle onto [0, pi). Polariser settings are only defined modulo pi.
template <typename Scalar>
Scalar canonicalize(Scalar theta) {
  constexpr Scalar pi = std::numbers::pi_v<Scalar>;
  Scalar r = std::fmod(theta, pi);
  if (r < Scalar(0)) r += pi;
  if (r >= pi) r = Scalar(0);
  return r;
}

/// A polariser setting in radians, always stored canonicalized.
class Angle {
 public:
  constexpr Angle() = default;
  Angle(double radians) : value_(canonicalize(radians)) {}  // NOLINT: implicit by intent

  static Angle degrees(double deg) { return Angle(deg * std::numbers::pi / 180.0); }

  double value() const { return value_; }
  operator double() const { return value_; }  // NOLINT

  friend bool operator==(const Angle&, const Angle&) = default;

 private:
  double value_ = 0.0;
};

/// Distance between two settings on the circle of period pi.
inline double angular_distance(Angle a, Angle b) {
  const double d = std::abs(a.value() - b.value());
  return std::min(d, std::numbers::pi - d);
}

}  // namespace faithlab
