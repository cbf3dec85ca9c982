#include "cohesia/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "cohesia/error.hpp"

namespace cohesia::stats {

namespace {

constexpr std::string_view kModule = "stats";

double interpolate_sorted(const std::vector<double>& sorted, double p) {
  const double pos = p * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const double frac = pos - static_cast<double>(lo);
  if (lo + 1 >= sorted.size()) return sorted.back();
  return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

std::vector<double> sorted_copy(std::span<const double> xs) {
  if (xs.empty()) throw Error(kModule, ErrorKind::EmptyInput, "need at least one value");
  std::vector<double> v(xs.begin(), xs.end());
  std::sort(v.begin(), v.end());
  return v;
}

// Series expansion of P(a, x); converges quickly for x < a + 1.
double gamma_p_series(double a, double x) {
  double sum = 1.0 / a;
  double term = sum;
  for (int n = 1; n < 1000; ++n) {
    term *= x / (a + n);
    sum += term;
    if (std::fabs(term) < std::fabs(sum) * 1e-16) break;
  }
  return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Continued fraction for Q(a, x) (modified Lentz); used for x >= a + 1.
double gamma_q_fraction(double a, double x) {
  constexpr double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < 1000; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::fabs(delta - 1.0) < 1e-16) break;
  }
  return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

}  // namespace

double quantile(std::span<const double> xs, double p) {
  return interpolate_sorted(sorted_copy(xs), p);
}

FiveNumberSummary five_number_summary(std::span<const double> xs) {
  auto v = sorted_copy(xs);
  return {v.front(), interpolate_sorted(v, 0.25), interpolate_sorted(v, 0.5), interpolate_sorted(v, 0.75),
          v.back()};
}

OutlierThreshold lower_fence(std::span<const double> xs) {
  auto summary = five_number_summary(xs);
  return {summary.q1 - 1.5 * summary.iqr(), summary};
}

double regularized_gamma_q(double a, double x) {
  if (a <= 0.0) throw Error(kModule, ErrorKind::InvalidArgument, "gamma shape must be positive");
  if (x <= 0.0) return 1.0;
  if (x < a + 1.0) return 1.0 - gamma_p_series(a, x);
  return gamma_q_fraction(a, x);
}

double chi_square_sf(double x, int dof) {
  if (dof < 1) throw Error(kModule, ErrorKind::InvalidArgument, "dof must be >= 1");
  return regularized_gamma_q(0.5 * dof, 0.5 * x);
}

ChiSquareResult chi_square_independence(const Table2x2& table) {
  double total = 0.0;
  std::array<double, 2> rows{};
  std::array<double, 2> cols{};
  for (int r = 0; r < 2; ++r) {
    for (int c = 0; c < 2; ++c) {
      const double v = table[r][c];
      if (!(v >= 0.0) || !std::isfinite(v))
        throw Error(kModule, ErrorKind::InvalidArgument, "cell counts must be finite and non-negative");
      rows[r] += v;
      cols[c] += v;
      total += v;
    }
  }
  for (int k = 0; k < 2; ++k) {
    if (rows[k] <= 0.0 || cols[k] <= 0.0)
      throw Error(kModule, ErrorKind::DegenerateTable, "zero row or column margin");
  }
  ChiSquareResult result;
  for (int r = 0; r < 2; ++r) {
    for (int c = 0; c < 2; ++c) {
      const double e = rows[r] * cols[c] / total;
      result.expected[r][c] = e;
      const double diff = table[r][c] - e;
      result.statistic += diff * diff / e;
    }
  }
  result.p_value = chi_square_sf(result.statistic, 1);
  return result;
}

double pearson_correlation(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size())
    throw Error(kModule, ErrorKind::LengthMismatch,
                std::to_string(xs.size()) + " vs " + std::to_string(ys.size()) + " values");
  if (xs.size() < 2) throw Error(kModule, ErrorKind::EmptyInput, "need at least two pairs");
  const auto n = static_cast<double>(xs.size());
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0;
  double sxx = 0.0;
  double syy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double dx = xs[i] - mx;
    const double dy = ys[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) throw Error(kModule, ErrorKind::ZeroVariance, "a variable is constant");
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

}  // namespace cohesia::stats
