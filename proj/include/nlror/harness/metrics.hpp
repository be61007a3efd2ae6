#pragma once

#include "nlror/numkernel.hpp"

#include <span>
#include <vector>

namespace nlror {

/// median(|v - median(v)|)
double median_absolute_deviation(std::span<const double> values);

double mean_absolute_error(std::span<const double> predictions, std::span<const double> observations);

/// Mean absolute error divided by the MAD of the reference values.
double maen(std::span<const double> predictions, std::span<const double> observations,
            std::span<const double> mad_reference);

double pearson(std::span<const double> a, std::span<const double> b);

/// Pearson correlation of the average ranks.
double spearman(std::span<const double> a, std::span<const double> b);

struct BoxplotSummary {
    double median = 0.0;
    double q25 = 0.0;
    double q75 = 0.0;
    double lower_whisker = 0.0;
    double upper_whisker = 0.0;
    std::vector<double> outside_points;
    std::size_t count = 0;
};

/// Box at the 25th/75th percentiles; whiskers at the most extreme data within 1.5 IQR of the box.
BoxplotSummary boxplot_stats(std::span<const double> values);

} // namespace nlror
