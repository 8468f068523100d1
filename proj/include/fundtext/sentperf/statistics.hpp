#pragma once

#include <optional>
#include <span>

namespace fundtext::sentperf {

/// Regularized incomplete beta I_x(a, b), continued-fraction evaluation.
double incomplete_beta(double a, double b, double x);

/// Two-sided tail probability P(|T| >= |t|) for Student's t with df degrees of freedom.
double student_t_two_sided_p(double t, double df);

/// Sample Pearson correlation; nullopt when n < n_min or a series has zero
/// variance. Throws ValidationError on length mismatch.
std::optional<double> pearson_r(std::span<const double> x, std::span<const double> y, std::size_t n_min = 6);

struct TTestResult {
    double t = 0.0;
    double df = 0.0;
    std::optional<double> p_value;  // nullopt when n < 2 or zero variance
};

TTestResult t_test_one_sample(std::span<const double> values, double mu0 = 0.0);

struct FiveNumber {
    double min = 0, q25 = 0, median = 0, q75 = 0, max = 0;
};

/// Quantile by linear interpolation between order statistics (type 7).
double quantile_type7(std::span<const double> sorted, double q);
FiveNumber boxplot_stats(std::span<const double> values);

double sample_mean(std::span<const double> values);
/// n - 1 denominator; 0 for fewer than two values.
double sample_std(std::span<const double> values);

}  // namespace fundtext::sentperf
