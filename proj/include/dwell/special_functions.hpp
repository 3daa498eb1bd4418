#pragma once

// Sine/cosine integrals and scaled exponential integrals.
//
// The zero-temperature bath coefficients combine Shi/Chi with cosh/sinh of
// the same large argument. Evaluating those products literally overflows and
// cancels catastrophically for z = cutoff*t beyond ~40, so everything here
// is organized around the scaled functions
//
//   e1_scaled(z) = e^{+z} E1(z),   ei_scaled(z) = e^{-z} Ei(z),
//
// and the two combinations that actually appear in the coefficients,
//
//   pq_sum(z)  = (e^z E1 + e^{-z} Ei)/2 = Shi(z) cosh(z) - Chi(z) sinh(z),
//   pq_diff(z) = (e^z E1 - e^{-z} Ei)/2 = Shi(z) sinh(z) - Chi(z) cosh(z),
//
// which are O(1/z) and O(1/z^2) for large z. The bridge identities are
// Chi - Shi = -E1 and Chi + Shi = Ei (z > 0).

#include <cmath>
#include <complex>
#include <limits>

#include "dwell/core.hpp"

namespace dwell::sf {

namespace detail {

// Maclaurin sums for Si and Cin, |x| <~ 8.
inline void sici_series(double x, double& si_out, double& cin_out) {
  const double x2 = x * x;
  double si_sum = x, si_term = x;
  double cin_sum = 0.0, cin_term = 1.0;
  for (int k = 1; k < 40; ++k) {
    const int n = 2 * k;
    // cin term: (-1)^{k+1} x^{2k} / (2k (2k)!)
    cin_term *= -x2 / ((n - 1) * n);
    cin_sum += -cin_term / n;
    // si term: (-1)^k x^{2k+1} / ((2k+1)(2k+1)!)
    si_term *= -x2 / (n * (n + 1));
    si_sum += si_term / (n + 1);
    if (std::abs(si_term) < 1e-18 * std::abs(si_sum) &&
        std::abs(cin_term) < 1e-18 * (std::abs(cin_sum) + 1e-30))
      break;
  }
  si_out = si_sum;
  cin_out = cin_sum;
}

// Modified Lentz continued fraction for e^z E1(z),
//   e^z E1(z) = 1/(z+1- 1/(z+3- 4/(z+5- 9/(z+7- ...)))).
// Works for real z >= 1 and on the imaginary axis for |z| >~ 6.
template <typename T>
inline T e1_cf_scaled(T z) {
  const double tiny = 1e-290;
  T b = z + T(1.0);
  T c = T(1.0 / tiny);
  T d = T(1.0) / b;
  T h = d;
  for (int i = 1; i <= 400; ++i) {
    const T a = T(-static_cast<double>(i) * static_cast<double>(i));
    b += T(2.0);
    d = T(1.0) / (a * d + b);
    c = b + a / c;
    const T del = c * d;
    h *= del;
    if (std::abs(del - T(1.0)) < 5e-17) return h;
  }
  return h;  // converged to working precision in all tested regimes
}

// Asymptotic auxiliary functions for Si/Ci, x >~ 45:
//   f ~ (1/x) sum (-1)^k (2k)!/x^{2k},  g ~ (1/x^2) sum (-1)^k (2k+1)!/x^{2k}.
// Truncated at the smallest term.
inline void sici_asymptotic_aux(double x, double& f_out, double& g_out) {
  const double ix2 = 1.0 / (x * x);
  double f_sum = 1.0, g_sum = 1.0;
  double f_term = 1.0, g_term = 1.0;
  double prev_f = std::numeric_limits<double>::max();
  for (int k = 1; k < 40; ++k) {
    const double n = 2.0 * k;
    f_term *= -(n - 1.0) * n * ix2;
    g_term *= -n * (n + 1.0) * ix2;
    if (std::abs(f_term) >= prev_f) break;
    prev_f = std::abs(f_term);
    f_sum += f_term;
    g_sum += g_term;
    if (std::abs(f_term) < 1e-17) break;
  }
  f_out = f_sum / x;
  g_out = g_sum * ix2;
}

}  // namespace detail

/// sin(u)/u with the removable singularity handled.
inline double sinc(double u) {
  if (std::abs(u) < 1e-4) {
    const double u2 = u * u;
    return 1.0 - u2 / 6.0 + u2 * u2 / 120.0;
  }
  return std::sin(u) / u;
}

/// Si(x) and Ci(x) evaluated together. Requires x > 0 for the Ci component.
inline void sici(double x, double& si_out, double& ci_out) {
  if (x == 0.0) {
    si_out = 0.0;
    ci_out = -std::numeric_limits<double>::infinity();
    return;
  }
  if (x <= 8.0) {
    double cin;
    detail::sici_series(x, si_out, cin);
    ci_out = kEulerGamma + std::log(x) - cin;
    return;
  }
  if (x <= 45.0) {
    // E1(ix) = -Ci(x) + i (Si(x) - pi/2)
    const std::complex<double> z(0.0, x);
    const std::complex<double> w =
        detail::e1_cf_scaled(z) * std::exp(std::complex<double>(0.0, -x));
    ci_out = -w.real();
    si_out = kPi / 2 + w.imag();
    return;
  }
  double f, g;
  detail::sici_asymptotic_aux(x, f, g);
  const double c = std::cos(x), s = std::sin(x);
  si_out = kPi / 2 - f * c - g * s;
  ci_out = f * s - g * c;
}

inline double si(double x) {
  double s, c;
  sici(std::abs(x), s, c);
  return x < 0 ? -s : s;
}

inline double ci(double x) {
  double s, c;
  sici(x, s, c);
  return c;
}

/// Cin(x) = gamma + ln|x| - Ci(|x|), the entire even companion of Ci.
inline double cin(double x) {
  x = std::abs(x);
  if (x == 0.0) return 0.0;
  if (x <= 8.0) {
    double s, cn;
    detail::sici_series(x, s, cn);
    return cn;
  }
  double s, c;
  sici(x, s, c);
  return kEulerGamma + std::log(x) - c;
}

/// e^x E1(x), x > 0.
inline double e1_scaled(double x) {
  require(x > 0.0, "e1_scaled: argument must be positive");
  if (x <= 1.0) {
    // E1 = -gamma - ln x + sum (-1)^{k+1} x^k/(k k!)
    double sum = 0.0, term = 1.0;
    for (int k = 1; k < 30; ++k) {
      term *= -x / k;
      sum += -term / k;
      if (std::abs(term) < 1e-18) break;
    }
    return std::exp(x) * (-kEulerGamma - std::log(x) + sum);
  }
  return detail::e1_cf_scaled(x);
}

/// e^{-x} Ei(x), x > 0.
inline double ei_scaled(double x) {
  require(x > 0.0, "ei_scaled: argument must be positive");
  if (x <= 40.0) {
    // Ei = gamma + ln x + sum x^k/(k k!), all terms positive.
    double sum = 0.0, term = 1.0;
    for (int k = 1; k < 180; ++k) {
      term *= x / k;
      const double add = term / k;
      sum += add;
      if (add < 1e-17 * sum) break;
    }
    return std::exp(-x) * (kEulerGamma + std::log(x) + sum);
  }
  // Asymptotic sum k!/x^{k+1}, truncated at the smallest term.
  double sum = 1.0, term = 1.0;
  for (int k = 1; k < 60; ++k) {
    const double next = term * k / x;
    if (next >= term) break;
    term = next;
    sum += term;
    if (term < 1e-17 * sum) break;
  }
  return sum / x;
}

/// (e^z E1(z) + e^{-z} Ei(z))/2 = Shi(z)cosh(z) - Chi(z)sinh(z), z >= 0.
inline double pq_sum(double z) {
  if (z == 0.0) return 0.0;
  if (z < 0.5) {
    // Direct subtraction of E1 and Ei cancels ~ln(z) digits here; expand the
    // log part analytically instead.
    double a = 0.0, b = 0.0, term_a = 1.0, term_b = 1.0;
    for (int k = 1; k < 24; ++k) {
      term_a *= -z / k;
      term_b *= z / k;
      a += -term_a / k;
      b += term_b / k;
    }
    const double lg = kEulerGamma + std::log(z);
    return 0.5 * (-2.0 * std::sinh(z) * lg + std::exp(z) * a + std::exp(-z) * b);
  }
  if (z < 40.0) return 0.5 * (e1_scaled(z) + ei_scaled(z));
  // sum (2m)!/z^{2m+1}
  double sum = 1.0, term = 1.0;
  const double iz2 = 1.0 / (z * z);
  for (int m = 1; m < 30; ++m) {
    const double next = term * (2 * m - 1) * (2 * m) * iz2;
    if (next >= term) break;
    term = next;
    sum += term;
    if (term < 1e-17 * sum) break;
  }
  return sum / z;
}

/// (e^z E1(z) - e^{-z} Ei(z))/2 = Shi(z)sinh(z) - Chi(z)cosh(z), z >= 0.
inline double pq_diff(double z) {
  if (z == 0.0) return 0.0;
  if (z < 0.5) {
    double a = 0.0, b = 0.0, term_a = 1.0, term_b = 1.0;
    for (int k = 1; k < 24; ++k) {
      term_a *= -z / k;
      term_b *= z / k;
      a += -term_a / k;
      b += term_b / k;
    }
    const double lg = kEulerGamma + std::log(z);
    return 0.5 * (-2.0 * std::cosh(z) * lg + std::exp(z) * a - std::exp(-z) * b);
  }
  if (z < 40.0) return 0.5 * (e1_scaled(z) - ei_scaled(z));
  // -sum (2m+1)!/z^{2m+2}
  double sum = 1.0, term = 1.0;
  const double iz2 = 1.0 / (z * z);
  for (int m = 1; m < 30; ++m) {
    const double next = term * (2 * m) * (2 * m + 1) * iz2;
    if (next >= term) break;
    term = next;
    sum += term;
    if (term < 1e-17 * sum) break;
  }
  return -sum * iz2;
}

}  // namespace dwell::sf
