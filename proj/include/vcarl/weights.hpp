#pragma once

#include "vcarl/carleson.hpp"

#include <vector>

namespace vcarl {

// Nonnegative weight samples; values are floored at `floor` on construction.
SampledSignal weight_sample(const SampledSignal& w, double floor = 1e-8);

// (1 + |x - center| / delta)^a on the grid of `like`, floored.
SampledSignal power_weight(const SampledSignal& like, double a, double center = 0.5, double delta = 1.0 / 64.0,
                           double floor = 1e-8);

// sup over intervals [x_i, x_i + 2^k dx] inside the window of <w> <w^{1/(1-t)}>^{t-1},
// averages by the trapezoid rule on the samples.
double a_t_constant(const SampledSignal& w, double t);
// Same over every pair of sample endpoints.
double a_t_constant_brute_force(const SampledSignal& w, double t);

double weighted_norm(const SampledSignal& f, const SampledSignal& w, double q);

struct WeightRow {
    double a = 0.0;
    double a_t = 1.0;
    double ratio = 0.0;
};

struct WeightExperiment {
    std::vector<WeightRow> rows;
    double slope = 0.0;
    double intercept = 0.0;
    double bound = 0.0;
    bool pass = false;
    bool fitted = false; // at least two distinct A_t values
};

void check_weight_exponents(double r, double q, double t);

WeightExperiment weighted_bound_experiment(double r, double q, double t, const std::vector<double>& family_a,
                                           const std::vector<SampledSignal>& corpus, const FrequencyGrid& grid,
                                           double delta = 1.0 / 64.0, double floor = 1e-8);

} // namespace vcarl
