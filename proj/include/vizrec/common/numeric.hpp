#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace vizrec::num {

double mean(std::span<const double> x);
/// Population variance (divides by n).
double variance(std::span<const double> x);
double stddev(std::span<const double> x);
/// Sample standard deviation (divides by n - 1).
double sample_stddev(std::span<const double> x);

/// Percentile by linear interpolation between closest ranks, p in [0, 100].
/// `sorted` must be ascending and non-empty.
double percentile_sorted(std::span<const double> sorted, double p);
double percentile(std::span<const double> x, double p);
double median(std::span<const double> x);

/// Mean absolute deviation around the mean.
double average_absolute_deviation(std::span<const double> x);
/// Median of absolute deviations around the median.
double median_absolute_deviation(std::span<const double> x);

/// Pearson correlation; nullopt when either input has zero variance or n < 2.
std::optional<double> pearson(std::span<const double> a, std::span<const double> b);

/// Shannon entropy (natural log) of a count vector; zero counts contribute nothing.
double entropy_from_counts(std::span<const double> counts);

/// Mean absolute pairwise difference over all ordered pairs divided by twice the mean.
/// nullopt for empty input, any negative value, or zero mean.
std::optional<double> gini(std::span<const double> x);

/// Central moment of order k around the mean (population normalisation).
double central_moment(std::span<const double> x, int k);

bool is_finite(double v);

}  // namespace vizrec::num
