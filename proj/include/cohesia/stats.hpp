#pragma once

#include <array>
#include <span>
#include <string_view>

namespace cohesia::stats {

/// Name recorded in report provenance for the quartile convention below.
inline constexpr std::string_view kQuartileMethod = "type7-linear-interpolation";

struct FiveNumberSummary {
  double min = 0.0;
  double q1 = 0.0;
  double median = 0.0;
  double q3 = 0.0;
  double max = 0.0;

  double iqr() const { return q3 - q1; }
};

struct OutlierThreshold {
  double lambda = 0.0;  // q1 - 1.5 * iqr
  FiveNumberSummary summary;
};

/// Quantile p of xs with linear interpolation between order statistics at
/// 1-based position p(n-1)+1. Throws EmptyInput.
double quantile(std::span<const double> xs, double p);

FiveNumberSummary five_number_summary(std::span<const double> xs);

/// Lower Tukey fence. All-equal input yields the common value.
OutlierThreshold lower_fence(std::span<const double> xs);

using Table2x2 = std::array<std::array<double, 2>, 2>;

struct ChiSquareResult {
  double statistic = 0.0;
  double p_value = 1.0;
  int dof = 1;
  Table2x2 expected{};
};

/// Pearson chi-square test of independence on a 2x2 table, no continuity
/// correction. Throws DegenerateTable on a zero row or column margin.
ChiSquareResult chi_square_independence(const Table2x2& table);

/// Sample Pearson correlation. Throws LengthMismatch, EmptyInput (n < 2) or ZeroVariance.
double pearson_correlation(std::span<const double> xs, std::span<const double> ys);

/// Regularized upper incomplete gamma Q(a, x) = Gamma(a, x) / Gamma(a).
double regularized_gamma_q(double a, double x);

/// Survival function of the chi-square distribution.
double chi_square_sf(double x, int dof);

}  // namespace cohesia::stats
