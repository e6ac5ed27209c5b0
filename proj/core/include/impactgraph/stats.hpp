#pragma once

#include "impactgraph/metrics.hpp"

#include <map>
#include <span>
#include <string>
#include <vector>

namespace impactgraph {

/// Reports for one condition (model + data setting), one per run, in run order.
struct RunSeries {
    std::string condition_label;
    std::vector<MetricReport> reports;

    bool all_refused() const;
};

enum class StdConvention { Population, Sample };

struct Summary {
    double mean = 0.0;
    double std = 0.0;
};

struct SeriesAggregate {
    std::string label;
    std::size_t runs = 0;
    std::size_t refused_runs = 0;
    std::map<Metric, Summary> metrics;
};

/// Mean and std per metric over the non-refused runs. Throws AllRefused when
/// there is none.
SeriesAggregate aggregate_runs(const RunSeries& series, StdConvention convention = StdConvention::Population);

struct SignificanceResult {
    std::string metric;
    double t_statistic = 0.0;
    int degrees_of_freedom = 0;
    double p_value = 1.0;
    bool significant = false;
};

/// Two-sided paired t-test on a[i] - b[i]. Throws LengthMismatch or
/// TooFewSamples. Zero variance gives t = 0, p = 1 for a zero mean
/// difference and t = ±inf, p = 0 otherwise.
SignificanceResult paired_t_test(std::span<const double> a, std::span<const double> b, double alpha = 0.05);

/// I_x(a, b) by continued fraction, for a, b > 0 and x in [0, 1].
double regularized_incomplete_beta(double a, double b, double x);

/// P(|T| >= |t|) for Student's t with df degrees of freedom.
double student_t_two_sided_p(double t, double df);

}  // namespace impactgraph
