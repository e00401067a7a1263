#pragma once

// Adaptive Gauss-Kronrod (7-15) quadrature with interval bisection.

#include <cmath>
#include <utility>

#include "growthfit/errors.hpp"

namespace growthfit::quad {

namespace detail {

// Nodes and weights of the 15-point Kronrod rule on [-1, 1]; the embedded
// 7-point Gauss rule uses every second node.
inline constexpr double kNodes[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
};
inline constexpr double kWeightsK[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
};
inline constexpr double kWeightsG[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
};

template <typename F>
std::pair<double, double> gk15(const F& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  double k = 0.0, g = 0.0;
  for (int i = 0; i < 8; ++i) {
    const double dx = h * kNodes[i];
    const double fsum = (i == 7) ? f(c) : f(c - dx) + f(c + dx);
    k += kWeightsK[i] * fsum;
    if (i % 2 == 1) g += kWeightsG[i / 2] * fsum;
  }
  return {k * h, std::fabs(k - g) * h};
}

template <typename F>
double adapt(const F& f, double a, double b, double tol, int depth, int max_depth) {
  const auto [value, err] = gk15(f, a, b);
  if (err <= tol || depth >= max_depth) return value;
  const double c = 0.5 * (a + b);
  return adapt(f, a, c, 0.5 * tol, depth + 1, max_depth) +
         adapt(f, c, b, 0.5 * tol, depth + 1, max_depth);
}

}  // namespace detail

// Integrate f over [a, b] to absolute tolerance abs_tol.
template <typename F>
double integrate(const F& f, double a, double b, double abs_tol = 1e-10,
                 int max_depth = 60) {
  if (!(a <= b)) throw Error(errc::domain, "integrate requires a <= b");
  if (a == b) return 0.0;
  return detail::adapt(f, a, b, abs_tol, 0, max_depth);
}

}  // namespace growthfit::quad
