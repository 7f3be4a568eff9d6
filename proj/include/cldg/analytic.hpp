#pragma once

#include "cldg/types.hpp"

#include <cmath>
#include <stdexcept>
#include <type_traits>
#include <variant>

namespace cldg {

template <typename Scalar>
Scalar sech(Scalar x) {
  // cosh overflows to inf past |x| ~ 710, giving exactly 0
  return Scalar(1) / std::cosh(x);
}

/// Moving soliton sech(x + x0 - 4t) exp(2i(x + x0 - 3t/2)) of i u_t + u_xx + 2|u|^2 u = 0.
template <typename Scalar>
ComponentPair<Scalar> soliton_exact(Scalar t, Scalar x, Scalar x0) {
  const Scalar amp = sech(x + x0 - Scalar(4) * t);
  const Scalar phase = Scalar(2) * (x + x0 - Scalar(1.5) * t);
  return {amp * std::cos(phase), amp * std::sin(phase)};
}

/// Two sech pulses centred at x1, x2 with phase speeds c1, c2.
template <typename Scalar>
ComponentPair<Scalar> double_soliton_ic(Scalar x, Scalar c1, Scalar c2, Scalar x1, Scalar x2) {
  const Scalar a1 = sech(x - x1), a2 = sech(x - x2);
  const Scalar p1 = Scalar(2) * c1 * (x - x1), p2 = Scalar(2) * c2 * (x - x2);
  return {a1 * std::cos(p1) + a2 * std::cos(p2), a1 * std::sin(p1) + a2 * std::sin(p2)};
}

/// A exp(-x^2 + 2ix).
template <typename Scalar>
ComponentPair<Scalar> gaussian_ic(Scalar x, Scalar amplitude) {
  const Scalar env = amplitude * std::exp(-x * x);
  return {env * std::cos(Scalar(2) * x), env * std::sin(Scalar(2) * x)};
}

template <typename Scalar = double>
struct SingleSoliton {
  Scalar x0 = 10;
};

template <typename Scalar = double>
struct DoubleSoliton {
  Scalar c1 = 1, c2 = -1, x1 = -10, x2 = 10;
};

template <typename Scalar = double>
struct GaussianPulse {
  Scalar amplitude = 2;
};

/// Initial data of the soliton, collision and soliton-birth experiments.
template <typename Scalar = double>
class InitialCondition {
 public:
  using Kind = std::variant<SingleSoliton<Scalar>, DoubleSoliton<Scalar>, GaussianPulse<Scalar>>;

  explicit InitialCondition(Kind kind) : kind_(kind) {}

  const Kind& kind() const noexcept { return kind_; }

  ComponentPair<Scalar> operator()(Scalar x) const {
    return std::visit(
        [x](const auto& k) -> ComponentPair<Scalar> {
          using K = std::decay_t<decltype(k)>;
          if constexpr (std::is_same_v<K, SingleSoliton<Scalar>>) return soliton_exact(Scalar(0), x, k.x0);
          else if constexpr (std::is_same_v<K, DoubleSoliton<Scalar>>)
            return double_soliton_ic(x, k.c1, k.c2, k.x1, k.x2);
          else return gaussian_ic(x, k.amplitude);
        },
        kind_);
  }

 private:
  Kind kind_;
};

}  // namespace cldg
