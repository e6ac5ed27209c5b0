#include "impactgraph/stats.hpp"

#include "impactgraph/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace impactgraph {

bool RunSeries::all_refused() const {
    return std::all_of(reports.begin(), reports.end(), [](const MetricReport& r) { return r.refused; });
}

SeriesAggregate aggregate_runs(const RunSeries& series, StdConvention convention) {
    SeriesAggregate out;
    out.label = series.condition_label;
    out.runs = series.reports.size();
    for (const auto& r : series.reports) out.refused_runs += r.refused ? 1 : 0;
    const auto n = out.runs - out.refused_runs;
    if (n == 0) throw AllRefused();

    for (auto m : kAllMetrics) {
        double sum = 0.0;
        for (const auto& r : series.reports) {
            if (!r.refused) sum += r.get(m).value();
        }
        const double mean = sum / static_cast<double>(n);
        double ss = 0.0;
        for (const auto& r : series.reports) {
            if (r.refused) continue;
            const double d = r.get(m).value() - mean;
            ss += d * d;
        }
        double divisor = static_cast<double>(n);
        if (convention == StdConvention::Sample) divisor = n > 1 ? static_cast<double>(n - 1) : 1.0;
        out.metrics[m] = Summary{mean, std::sqrt(ss / divisor)};
    }
    return out;
}

namespace {

// Modified Lentz evaluation of the incomplete beta continued fraction.
double beta_continued_fraction(double a, double b, double x) {
    constexpr int kMaxIterations = 500;
    constexpr double kEps = 1e-16;
    constexpr double kTiny = 1e-300;

    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::fabs(d) < kTiny) d = kTiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= kMaxIterations; ++m) {
        const double m2 = 2.0 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::fabs(delta - 1.0) < kEps) break;
    }
    return h;
}

}  // namespace

double regularized_incomplete_beta(double a, double b, double x) {
    if (!(a > 0.0) || !(b > 0.0)) throw std::invalid_argument("incomplete beta needs a, b > 0");
    if (x < 0.0 || x > 1.0) throw std::invalid_argument("incomplete beta needs x in [0, 1]");
    if (x == 0.0) return 0.0;
    if (x == 1.0) return 1.0;
    const double log_front =
        std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) + b * std::log1p(-x);
    const double front = std::exp(log_front);
    // The fraction converges fast only on this side of the mean.
    if (x < (a + 1.0) / (a + b + 2.0)) return front * beta_continued_fraction(a, b, x) / a;
    return 1.0 - front * beta_continued_fraction(b, a, 1.0 - x) / b;
}

double student_t_two_sided_p(double t, double df) {
    if (std::isinf(t)) return 0.0;
    if (t == 0.0) return 1.0;
    return regularized_incomplete_beta(df / 2.0, 0.5, df / (df + t * t));
}

SignificanceResult paired_t_test(std::span<const double> a, std::span<const double> b, double alpha) {
    if (a.size() != b.size()) throw LengthMismatch(a.size(), b.size());
    const auto n = a.size();
    if (n < 2) throw TooFewSamples(n);

    double mean = 0.0;
    for (std::size_t i = 0; i < n; ++i) mean += a[i] - b[i];
    mean /= static_cast<double>(n);
    double ss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double d = a[i] - b[i] - mean;
        ss += d * d;
    }
    const double sd = std::sqrt(ss / static_cast<double>(n - 1));

    SignificanceResult r;
    r.degrees_of_freedom = static_cast<int>(n - 1);
    // Differences that agree to rounding count as constant.
    const double scale = std::max(std::fabs(mean), 1.0);
    if (sd <= 1e-12 * scale) {
        if (std::fabs(mean) <= 1e-12 * scale) {
            r.t_statistic = 0.0;
            r.p_value = 1.0;
        } else {
            r.t_statistic = mean > 0 ? std::numeric_limits<double>::infinity()
                                     : -std::numeric_limits<double>::infinity();
            r.p_value = 0.0;
        }
    } else {
        r.t_statistic = mean / (sd / std::sqrt(static_cast<double>(n)));
        r.p_value = student_t_two_sided_p(r.t_statistic, r.degrees_of_freedom);
    }
    r.significant = r.p_value < alpha;
    return r;
}

}  // namespace impactgraph
