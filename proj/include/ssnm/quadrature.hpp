#pragma once

/** @file
 * Globally adaptive Gauss-Kronrod (7/15) integration over a finite interval.
 */

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "ssnm/error.hpp"

namespace ssnm::quad {

struct QuadResult {
  double value = 0.0;
  double error = 0.0;  // estimated absolute error
  int panels = 0;
};

struct QuadOptions {
  double rel_tol = 1e-10;
  double abs_tol = 0.0;
  int max_panels = 10000;
  int initial_panels = 1;
};

namespace detail {

// Kronrod abscissae on [-1, 1] (positive half, descending); odd positions
// (1, 3, 5, 7) are the 7-point Gauss nodes.
inline constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
  double a, b, value, error;
  bool operator<(const Panel& other) const { return error < other.error; }
};

template <class F>
Panel gauss_kronrod_15(const F& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  std::array<double, 15> fv{};
  fv[14] = f(center);
  for (std::size_t j = 0; j < 7; ++j) {
    const double dx = half * kXgk[j];
    fv[2 * j] = f(center - dx);
    fv[2 * j + 1] = f(center + dx);
  }
  double kronrod = kWgk[7] * fv[14];
  double gauss = kWg[3] * fv[14];
  double abs_sum = kWgk[7] * std::abs(fv[14]);
  for (std::size_t j = 0; j < 7; ++j) {
    const double pair = fv[2 * j] + fv[2 * j + 1];
    kronrod += kWgk[j] * pair;
    abs_sum += kWgk[j] * (std::abs(fv[2 * j]) + std::abs(fv[2 * j + 1]));
    if (j % 2 == 1) gauss += kWg[j / 2] * pair;
  }
  const double mean = 0.5 * kronrod;
  double asc = kWgk[7] * std::abs(fv[14] - mean);
  for (std::size_t j = 0; j < 7; ++j)
    asc += kWgk[j] * (std::abs(fv[2 * j] - mean) + std::abs(fv[2 * j + 1] - mean));
  kronrod *= half;
  gauss *= half;
  abs_sum *= std::abs(half);
  asc *= std::abs(half);
  // QUADPACK error scaling.
  double err = std::abs(kronrod - gauss);
  if (asc != 0.0 && err != 0.0) err = asc * std::min(1.0, std::pow(200.0 * err / asc, 1.5));
  const double roundoff = 50.0 * std::numeric_limits<double>::epsilon() * abs_sum;
  return {a, b, kronrod, std::max(err, roundoff)};
}

}  // namespace detail

/**
 * Integrates @p f over [a, b], bisecting the panel with the largest error
 * estimate until the total error is below max(abs_tol, rel_tol * |I|).
 * Throws QuadratureNonConvergence once the panel budget is spent.
 */
template <class F>
QuadResult integrate(const F& f, double a, double b, const QuadOptions& opt = {}) {
  if (!(b > a)) return {};
  std::vector<detail::Panel> heap;
  const int n0 = std::max(1, opt.initial_panels);
  for (int i = 0; i < n0; ++i) {
    const double lo = a + (b - a) * i / n0;
    const double hi = (i + 1 == n0) ? b : a + (b - a) * (i + 1) / n0;
    heap.push_back(detail::gauss_kronrod_15(f, lo, hi));
  }
  std::make_heap(heap.begin(), heap.end());
  double total = 0.0, total_err = 0.0;
  // Running updates lose everything when a huge first estimate is subtracted
  // out, so totals are re-summed before convergence is accepted.
  auto resum = [&] {
    total = total_err = 0.0;
    for (const auto& p : heap) {
      total += p.value;
      total_err += p.error;
    }
  };
  auto converged = [&] { return total_err <= std::max(opt.abs_tol, opt.rel_tol * std::abs(total)); };
  resum();
  int panels = n0;
  for (;;) {
    if (converged()) {
      resum();
      if (converged()) break;
    }
    if (panels + 1 > opt.max_panels)
      throw QuadratureNonConvergence("error estimate " + std::to_string(total_err) +
                                     " above tolerance after " + std::to_string(panels) +
                                     " panels");
    std::pop_heap(heap.begin(), heap.end());
    const detail::Panel worst = heap.back();
    heap.pop_back();
    const double mid = 0.5 * (worst.a + worst.b);
    const auto left = detail::gauss_kronrod_15(f, worst.a, mid);
    const auto right = detail::gauss_kronrod_15(f, mid, worst.b);
    total += left.value + right.value - worst.value;
    total_err += left.error + right.error - worst.error;
    heap.push_back(left);
    std::push_heap(heap.begin(), heap.end());
    heap.push_back(right);
    std::push_heap(heap.begin(), heap.end());
    ++panels;
  }
  return {total, total_err, panels};
}

}  // namespace ssnm::quad
