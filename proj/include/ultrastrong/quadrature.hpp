#pragma once

// Adaptive Gauss-Kronrod (7/15) integration for scalar and small fixed-size
// Eigen-valued integrands, plus Wynn-epsilon acceleration for sums of
// alternating segment integrals.

#include <Eigen/Core>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <queue>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <vector>

namespace ultrastrong {

/// Raised when an iterative numerical procedure stops short of its target.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, double achieved_error)
      : std::runtime_error(what + " (achieved error " + format_error(achieved_error) + ")"),
        achieved_error_(achieved_error) {}
  double achieved_error() const noexcept { return achieved_error_; }

 private:
  static std::string format_error(double e) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", e);
    return buf;
  }
  double achieved_error_;
};

struct QuadOptions {
  double rel_tol = 1e-10;
  double abs_tol = 0.0;
  int max_subdivisions = 4000;
};

template <class T>
struct QuadResult {
  T value;
  double error = 0.0;
  int evaluations = 0;
  bool converged = false;
};

namespace detail {

inline double magnitude(double v) { return std::abs(v); }

template <class Derived>
double magnitude(const Eigen::MatrixBase<Derived>& v) {
  return v.template lpNorm<Eigen::Infinity>();
}

template <class T>
T zero_like() {
  if constexpr (std::is_arithmetic_v<T>) {
    return T{0};
  } else {
    return T::Zero();
  }
}

// QUADPACK qk15 abscissae and weights on [-1, 1]; odd indices are the Gauss nodes.
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

template <class T>
struct Segment {
  double a;
  double b;
  T value;
  double error;
};

template <class T, class F>
Segment<T> kronrod15(F& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const T fc = f(center);
  T kronrod = fc * kWgk[7];
  T gauss = fc * kWg[3];
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kXgk[j];
    const T sum = f(center - dx) + f(center + dx);
    kronrod += sum * kWgk[j];
    if (j % 2 == 1) gauss += sum * kWg[j / 2];
  }
  kronrod *= half;
  gauss *= half;
  return {a, b, kronrod, magnitude(kronrod - gauss)};
}

}  // namespace detail

/// Globally adaptive integration over [a, b]: the segment with the largest
/// error estimate is bisected until the summed estimate meets the tolerance.
template <class F>
auto integrate(F&& f, double a, double b, const QuadOptions& opt = {})
    -> QuadResult<std::decay_t<decltype(f(a))>> {
  using T = std::decay_t<decltype(f(a))>;
  QuadResult<T> result{detail::zero_like<T>(), 0.0, 0, false};
  if (a == b) {
    result.converged = true;
    return result;
  }
  auto cmp = [](const detail::Segment<T>& x, const detail::Segment<T>& y) {
    return x.error < y.error;
  };
  std::priority_queue<detail::Segment<T>, std::vector<detail::Segment<T>>, decltype(cmp)> heap(cmp);
  heap.push(detail::kronrod15<T>(f, a, b));
  result.evaluations = 15;
  T total = heap.top().value;
  double error = heap.top().error;
  int splits = 0;
  for (;;) {
    const double target = std::max(opt.abs_tol, opt.rel_tol * detail::magnitude(total));
    if (error <= target) {
      result.converged = true;
      break;
    }
    if (splits >= opt.max_subdivisions) break;
    const auto worst = heap.top();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) break;  // interval exhausted
    heap.pop();
    auto left = detail::kronrod15<T>(f, worst.a, mid);
    auto right = detail::kronrod15<T>(f, mid, worst.b);
    result.evaluations += 30;
    ++splits;
    total += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    heap.push(std::move(left));
    heap.push(std::move(right));
  }
  // Re-sum to shed the drift of the running updates.
  total = detail::zero_like<T>();
  error = 0.0;
  while (!heap.empty()) {
    total += heap.top().value;
    error += heap.top().error;
    heap.pop();
  }
  result.value = total;
  result.error = error;
  return result;
}

/// Integral over [a, inf) through x = a + t / (1 - t).
template <class F>
auto integrate_to_infinity(F&& f, double a, const QuadOptions& opt = {}) {
  auto mapped = [&f, a](double t) {
    using T = std::decay_t<decltype(f(a))>;
    if (t >= 1.0) return detail::zero_like<T>();
    const double s = 1.0 - t;
    return T(f(a + t / s) * (1.0 / (s * s)));
  };
  return integrate(mapped, 0.0, 1.0, opt);
}

/// Same as integrate() but throws ConvergenceError when the estimate misses the tolerance.
template <class F>
auto integrate_or_throw(F&& f, double a, double b, const QuadOptions& opt, const char* what) {
  auto r = integrate(std::forward<F>(f), a, b, opt);
  if (!r.converged) throw ConvergenceError(std::string(what) + ": quadrature did not converge", r.error);
  return r;
}

/// Wynn epsilon table over a sequence of partial sums. Returns the best
/// extrapolated limit and an error estimate from the last two diagonal entries.
class WynnEpsilon {
 public:
  void push(double partial_sum) {
    // Antidiagonal update: eps_{k+1} = eps_{k-1}(previous) + 1 / (eps_k - eps_k(previous)).
    std::vector<double> next;
    next.reserve(row_.size() + 1);
    next.push_back(partial_sum);
    for (std::size_t j = 0; j < row_.size(); ++j) {
      const double diff = next[j] - row_[j];
      if (diff == 0.0) break;
      next.push_back((j == 0 ? 0.0 : row_[j - 1]) + 1.0 / diff);
    }
    row_ = std::move(next);
    update_estimate();
  }

  double limit() const { return limit_; }
  double error() const { return error_; }
  int count() const { return count_; }

 private:
  void update_estimate() {
    ++count_;
    // Even columns of the epsilon table are the extrapolants.
    const std::size_t last_even = (row_.size() - 1) & ~std::size_t{1};
    const double candidate = row_[last_even];
    error_ = std::abs(candidate - limit_);
    limit_ = candidate;
  }

  std::vector<double> row_;
  double limit_ = std::numeric_limits<double>::quiet_NaN();
  double error_ = std::numeric_limits<double>::infinity();
  int count_ = 0;
};

}  // namespace ultrastrong
