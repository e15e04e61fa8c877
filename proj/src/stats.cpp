#include "tailcalc/stats.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>

#include "tailcalc/errors.hpp"

namespace tailcalc {

double norm_pdf(double x) {
  static const double inv_sqrt_2pi = 0.3989422804014326779;
  return inv_sqrt_2pi * std::exp(-0.5 * x * x);
}

double norm_cdf(double x) {
  return 0.5 * std::erfc(-x * 0.7071067811865475244);
}

namespace {

// Acklam's rational approximation for the probit function.
double norm_quantile_approx(double p) {
  static const double a[6] = {-3.969683028665376e+01, 2.209460984245205e+02,
                              -2.759285104469687e+02, 1.383577518672690e+02,
                              -3.066479806614716e+01, 2.506628277459239e+00};
  static const double b[5] = {-5.447609879822406e+01, 1.615858368580409e+02,
                              -1.556989798598866e+02, 6.680131188771972e+01,
                              -1.328068155288572e+01};
  static const double c[6] = {-7.784894002430293e-03, -3.223964580411365e-01,
                              -2.400758277161838e+00, -2.549732539343734e+00,
                              4.374664141464968e+00,  2.938163982698783e+00};
  static const double d[4] = {7.784695709041462e-03, 3.224671290700398e-01,
                              2.445134137142996e+00, 3.754408661907416e+00};
  const double plow = 0.02425;
  if (p < plow) {
    double q = std::sqrt(-2.0 * std::log(p));
    return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q +
            c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  if (p > 1.0 - plow) {
    double q = std::sqrt(-2.0 * std::log(1.0 - p));
    return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q +
             c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  double q = p - 0.5;
  double r = q * q;
  return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) *
         q /
         (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
}

}  // namespace

double norm_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    throw NumericError("norm_quantile: p must lie in (0,1)");
  }
  double x = norm_quantile_approx(p);
  // One Halley step against erfc brings the approximation to full double
  // precision.
  double e = norm_cdf(x) - p;
  double u = e / norm_pdf(x);
  x -= u / (1.0 + 0.5 * x * u);
  return x;
}

namespace {

double simpson(double a, double fa, double b, double fb, double fm) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double adaptive_step(const std::function<double(double)>& f, double a,
                     double fa, double b, double fb, double m, double fm,
                     double whole, double tol, int depth) {
  if (depth > 60) {
    throw NumericError("integrate: adaptive quadrature did not converge");
  }
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = simpson(a, fa, m, fm, flm);
  const double right = simpson(m, fm, b, fb, frm);
  const double delta = left + right - whole;
  if (std::abs(delta) <= 15.0 * tol) {
    return left + right + delta / 15.0;
  }
  return adaptive_step(f, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth + 1) +
         adaptive_step(f, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth + 1);
}

}  // namespace

double integrate(const std::function<double(double)>& f, double a, double b,
                 double abs_tol) {
  if (!(b > a)) return 0.0;
  const double m = 0.5 * (a + b);
  const double fa = f(a), fb = f(b), fm = f(m);
  if (!std::isfinite(fa) || !std::isfinite(fb) || !std::isfinite(fm)) {
    throw NumericError("integrate: integrand not finite on the interval");
  }
  const double whole = simpson(a, fa, b, fb, fm);
  return adaptive_step(f, a, fa, b, fb, m, fm, whole, abs_tol, 0);
}

double integrate_positive_axis(const std::function<double(double)>& f,
                               double abs_tol) {
  // z = exp(s); integrate f(e^s) e^s ds over expanding windows until the
  // window contribution falls below tolerance or divergence is declared.
  auto g = [&f](double s) {
    const double z = std::exp(s);
    return f(z) * z;
  };
  double total = integrate(g, -30.0, 30.0, abs_tol * 0.5);
  double lo = -30.0, hi = 30.0;
  for (int k = 0; k < 24; ++k) {
    const double left = integrate(g, lo - 15.0, lo, abs_tol * 0.25);
    const double right = integrate(g, hi, hi + 15.0, abs_tol * 0.25);
    lo -= 15.0;
    hi += 15.0;
    total += left + right;
    if (std::abs(left) + std::abs(right) < abs_tol) {
      return total;
    }
  }
  throw NumericError(
      "integrate_positive_axis: tail mass does not decay (divergent "
      "integral?)");
}

double mean(const std::vector<double>& xs) {
  if (xs.empty()) return 0.0;
  return std::accumulate(xs.begin(), xs.end(), 0.0) /
         static_cast<double>(xs.size());
}

double variance(const std::vector<double>& xs) {
  const std::size_t n = xs.size();
  if (n < 2) return 0.0;
  const double m = mean(xs);
  double ss = 0.0;
  for (double x : xs) ss += (x - m) * (x - m);
  return ss / static_cast<double>(n - 1);
}

namespace {

// Counts inversions by merge sort; used for the discordant-pair count.
std::uint64_t merge_count(std::vector<double>& v, std::vector<double>& buf,
                          std::size_t lo, std::size_t hi) {
  if (hi - lo < 2) return 0;
  const std::size_t mid = lo + (hi - lo) / 2;
  std::uint64_t count = merge_count(v, buf, lo, mid) + merge_count(v, buf, mid, hi);
  std::size_t i = lo, j = mid, k = lo;
  while (i < mid && j < hi) {
    if (v[j] < v[i]) {
      count += mid - i;
      buf[k++] = v[j++];
    } else {
      buf[k++] = v[i++];
    }
  }
  while (i < mid) buf[k++] = v[i++];
  while (j < hi) buf[k++] = v[j++];
  std::copy(buf.begin() + static_cast<std::ptrdiff_t>(lo),
            buf.begin() + static_cast<std::ptrdiff_t>(hi),
            v.begin() + static_cast<std::ptrdiff_t>(lo));
  return count;
}

std::uint64_t tie_pairs(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  std::uint64_t total = 0;
  std::size_t i = 0;
  while (i < v.size()) {
    std::size_t j = i;
    while (j < v.size() && v[j] == v[i]) ++j;
    const std::uint64_t run = j - i;
    total += run * (run - 1) / 2;
    i = j;
  }
  return total;
}

}  // namespace

double kendall_tau(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  if (n != y.size() || n < 2) {
    throw PreconditionError("kendall_tau: need two columns of equal size >= 2");
  }
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    if (x[a] != x[b]) return x[a] < x[b];
    return y[a] < y[b];
  });
  std::vector<double> ysorted(n);
  for (std::size_t k = 0; k < n; ++k) ysorted[k] = y[idx[k]];

  // Joint ties (same x and y) must not be counted as concordant.
  std::uint64_t tie_xy = 0;
  {
    std::size_t i = 0;
    while (i < n) {
      std::size_t j = i;
      while (j < n && x[idx[j]] == x[idx[i]] && ysorted[j] == ysorted[i]) ++j;
      const std::uint64_t run = j - i;
      tie_xy += run * (run - 1) / 2;
      i = j;
    }
  }
  std::vector<double> work = ysorted, buf(n);
  const std::uint64_t discordant = merge_count(work, buf, 0, n);
  const std::uint64_t total = static_cast<std::uint64_t>(n) * (n - 1) / 2;
  const std::uint64_t tx = tie_pairs(x);
  const std::uint64_t ty = tie_pairs(y);
  const double n0 = static_cast<double>(total);
  const double nc_minus_nd =
      n0 - static_cast<double>(tx) - static_cast<double>(ty) +
      static_cast<double>(tie_xy) - 2.0 * static_cast<double>(discordant);
  const double denom = std::sqrt((n0 - static_cast<double>(tx)) *
                                 (n0 - static_cast<double>(ty)));
  if (denom == 0.0) return 0.0;
  return nc_minus_nd / denom;
}

double ks_distance(std::vector<double> sample,
                   const std::function<double(double)>& cdf,
                   const std::function<double(double)>& cdf_left,
                   const std::vector<double>& reference_atoms) {
  if (sample.empty()) {
    throw PreconditionError("ks_distance: empty sample");
  }
  std::sort(sample.begin(), sample.end());
  const double n = static_cast<double>(sample.size());
  double dist = 0.0;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const double z = sample[i];
    // Skip to the last index of a tied run so that the empirical CDF is
    // evaluated correctly at ties.
    if (i + 1 < sample.size() && sample[i + 1] == z) continue;
    const double fn_right =
        static_cast<double>(std::upper_bound(sample.begin(), sample.end(), z) -
                            sample.begin()) /
        n;
    const double fn_left =
        static_cast<double>(std::lower_bound(sample.begin(), sample.end(), z) -
                            sample.begin()) /
        n;
    dist = std::max(dist, std::abs(fn_right - cdf(z)));
    dist = std::max(dist, std::abs(fn_left - cdf_left(z)));
  }
  for (double z : reference_atoms) {
    const double fn_right =
        static_cast<double>(std::upper_bound(sample.begin(), sample.end(), z) -
                            sample.begin()) /
        n;
    const double fn_left =
        static_cast<double>(std::lower_bound(sample.begin(), sample.end(), z) -
                            sample.begin()) /
        n;
    dist = std::max(dist, std::abs(fn_right - cdf(z)));
    dist = std::max(dist, std::abs(fn_left - cdf_left(z)));
  }
  return dist;
}

}  // namespace tailcalc
