#pragma once

#include <optional>
#include <span>
#include <vector>

namespace hhnet {

// Pearson correlation. Returns nullopt (undefined) when either coordinate
// has zero variance, detected as min == max so that integer-valued inputs
// (degrees) degenerate exactly, never as a silent NaN.
std::optional<double> pearson(std::span<const double> x, std::span<const double> y);

// Spearman rank correlation, average ranks for ties.
std::optional<double> spearman(std::span<const double> x, std::span<const double> y);

// Average (fractional) ranks, 1-based.
std::vector<double> average_ranks(std::span<const double> v);

// Linear-interpolation quantile of a sample (copies and sorts).
double quantile(std::vector<double> values, double q);

// Regularized lower incomplete gamma P(a, x).
double gamma_p(double a, double x);

// Chi-square CDF with dof degrees of freedom.
double chi_square_cdf(double x, int dof);

double mean(std::span<const double> v);

// Sample standard deviation (n-1 denominator; 0 for n < 2).
double sample_std(std::span<const double> v);

}  // namespace hhnet
