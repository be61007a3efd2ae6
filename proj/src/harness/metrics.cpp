#include "nlror/harness/metrics.hpp"

#include "nlror/errors.hpp"

#include <algorithm>
#include <cmath>

namespace nlror {

double median_absolute_deviation(std::span<const double> values) {
    const double m = median(values);
    std::vector<double> dev(values.size());
    std::transform(values.begin(), values.end(), dev.begin(), [m](double v) { return std::abs(v - m); });
    return median(dev);
}

double mean_absolute_error(std::span<const double> predictions, std::span<const double> observations) {
    if (predictions.size() != observations.size() || predictions.empty()) {
        throw InvalidArgument("mean_absolute_error: inputs must be non-empty and equally long");
    }
    double sum = 0.0;
    for (std::size_t i = 0; i < predictions.size(); ++i) {
        sum += std::abs(predictions[i] - observations[i]);
    }
    return sum / static_cast<double>(predictions.size());
}

double maen(std::span<const double> predictions, std::span<const double> observations,
            std::span<const double> mad_reference) {
    const double mae = mean_absolute_error(predictions, observations);
    if (mad_reference.empty()) {
        throw InvalidArgument("maen: empty MAD reference");
    }
    const double mad = median_absolute_deviation(mad_reference);
    if (!(mad > 0.0)) {
        throw DegenerateReference("maen: median absolute deviation of the reference is zero");
    }
    return mae / mad;
}

double pearson(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size() || a.size() < 2) {
        throw InvalidArgument("pearson: need two equally long vectors with at least two entries");
    }
    const auto n = static_cast<double>(a.size());
    double ma = 0.0, mb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        ma += a[i];
        mb += b[i];
    }
    ma /= n;
    mb /= n;
    double sab = 0.0, saa = 0.0, sbb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double da = a[i] - ma;
        const double db = b[i] - mb;
        sab += da * db;
        saa += da * da;
        sbb += db * db;
    }
    if (saa == 0.0 || sbb == 0.0) {
        throw UndefinedCorrelation("correlation is undefined for a constant vector");
    }
    return std::clamp(sab / std::sqrt(saa * sbb), -1.0, 1.0);
}

double spearman(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size() || a.size() < 2) {
        throw InvalidArgument("spearman: need two equally long vectors with at least two entries");
    }
    const auto ra = average_ranks(a);
    const auto rb = average_ranks(b);
    return pearson(ra, rb);
}

BoxplotSummary boxplot_stats(std::span<const double> values) {
    if (values.empty()) {
        throw InvalidArgument("boxplot_stats: empty input");
    }
    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());

    BoxplotSummary box;
    box.count = sorted.size();
    box.median = percentile(sorted, 50.0);
    box.q25 = percentile(sorted, 25.0);
    box.q75 = percentile(sorted, 75.0);
    const double iqr = box.q75 - box.q25;
    const double low_fence = box.q25 - 1.5 * iqr;
    const double high_fence = box.q75 + 1.5 * iqr;

    box.lower_whisker = box.q25;
    box.upper_whisker = box.q75;
    for (double v : sorted) {
        if (v >= low_fence) {
            box.lower_whisker = std::min(v, box.q25);
            break;
        }
    }
    for (auto it = sorted.rbegin(); it != sorted.rend(); ++it) {
        if (*it <= high_fence) {
            box.upper_whisker = std::max(*it, box.q75);
            break;
        }
    }
    for (double v : sorted) {
        if (v < box.lower_whisker || v > box.upper_whisker) {
            box.outside_points.push_back(v);
        }
    }
    return box;
}

} // namespace nlror
