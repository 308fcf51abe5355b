#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

// Closed-form upper-tail bounds: the five multiplicative Chernoff variants,
// the function f(delta) = (1+delta)ln(1+delta) - delta behind them, the
// excess-path-length tail bound, and the rate transform R = -ln p.
// Everything is evaluated in log space and exponentiated last.

namespace tailsort {

struct DomainError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// f(delta) = (1 + delta) ln(1 + delta) - delta, defined for delta > -1.
inline double cramer_f(double delta) {
  if (delta <= -1.0) throw DomainError("cramer_f requires delta > -1");
  return (1.0 + delta) * std::log1p(delta) - delta;
}

/// The five Chernoff variants for X a sum of independent (or negatively
/// associated) indicators with mean mu:
///   ch1: Pr[X >= (1+d)mu] <= (e^d / (1+d)^(1+d))^mu       (d > 0)
///   ch2: Pr[X >= (1+d)mu] <= exp(-mu d^2 / 3)             (0 < d <= 1)
///   ch3: Pr[X >= (1+d)mu] <= exp(-mu d / 3)               (d >= 1)
///   ch4: Pr[X >= (1+d)mu] <= exp(-mu d ln d / 2)          (d >= e)
///   ch5: Pr[X <= (1-d)mu] <= exp(-mu d^2 / 3)             (0 < d <= 1)
enum class ChernoffVariant { ch1, ch2, ch3, ch4, ch5 };

struct BoundQuery {
  ChernoffVariant variant;
  double mu;     // expectation, or an upper bound on it
  double delta;  // relative deviation
};

inline const char* to_string(ChernoffVariant v) noexcept {
  switch (v) {
    case ChernoffVariant::ch1: return "ch1";
    case ChernoffVariant::ch2: return "ch2";
    case ChernoffVariant::ch3: return "ch3";
    case ChernoffVariant::ch4: return "ch4";
    case ChernoffVariant::ch5: return "ch5";
  }
  return "?";
}

inline ChernoffVariant chernoff_variant_from_string(const std::string& s) {
  if (s == "ch1") return ChernoffVariant::ch1;
  if (s == "ch2") return ChernoffVariant::ch2;
  if (s == "ch3") return ChernoffVariant::ch3;
  if (s == "ch4") return ChernoffVariant::ch4;
  if (s == "ch5") return ChernoffVariant::ch5;
  throw DomainError("unknown Chernoff variant: " + s);
}

inline double chernoff_bound(const BoundQuery& q) {
  if (q.mu <= 0.0) throw DomainError("chernoff_bound requires mu > 0");
  const double d = q.delta;
  double exponent = 0.0;  // bound = exp(-exponent)
  switch (q.variant) {
    case ChernoffVariant::ch1:
      if (d <= 0.0) throw DomainError("ch1 requires delta > 0");
      exponent = q.mu * cramer_f(d);
      break;
    case ChernoffVariant::ch2:
    case ChernoffVariant::ch5:
      if (d <= 0.0 || d > 1.0)
        throw DomainError("ch2/ch5 require 0 < delta <= 1");
      exponent = q.mu * d * d / 3.0;
      break;
    case ChernoffVariant::ch3:
      if (d < 1.0) throw DomainError("ch3 requires delta >= 1");
      exponent = q.mu * d / 3.0;
      break;
    case ChernoffVariant::ch4:
      if (d < std::exp(1.0)) throw DomainError("ch4 requires delta >= e");
      exponent = q.mu * d * std::log(d) / 2.0;
      break;
  }
  const double p = std::exp(-exponent);
  return p > 1.0 ? 1.0 : p;
}

/// Pr[p_{log n}(L) >= (8c + 16) n] <= exp(-(c - 1 - ln c) n / 4).
inline double excess_tail_bound(double c, std::uint64_t n) {
  if (c <= 0.0) throw DomainError("excess_tail_bound requires c > 0");
  const double exponent =
      (c - 1.0 - std::log(c)) * static_cast<double>(n) / 4.0;
  const double p = std::exp(-exponent);
  return p > 1.0 ? 1.0 : p;
}

/// Deviation threshold paired with excess_tail_bound.
inline double excess_tail_threshold(double c, std::uint64_t n) noexcept {
  return (8.0 * c + 16.0) * static_cast<double>(n);
}

/// R = -ln(p). Callers with zero observed successes must report the
/// censored rule-of-three lower bound instead (see estimator).
inline double rate(double p_hat) {
  if (!(p_hat > 0.0) || p_hat > 1.0)
    throw DomainError("rate requires 0 < p_hat <= 1");
  return -std::log(p_hat);
}

}  // namespace tailsort
