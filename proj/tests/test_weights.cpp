#include "vcarl/weights.hpp"
#include "vcarl/corpus.hpp"

#include "doctest.h"

#include <cmath>
#include <random>

using namespace vcarl;

namespace {

// Sup over every pair of sample endpoints, trapezoid averages summed directly.
double scan_oracle(const SampledSignal& w, double t)
{
    double best = 0.0;
    const std::size_t n = w.size();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            double a = 0.0, b = 0.0;
            for (std::size_t k = i; k < j; ++k) {
                double w0 = w.samples[k].real(), w1 = w.samples[k + 1].real();
                a += 0.5 * (w0 + w1);
                b += 0.5 * (std::pow(w0, 1.0 / (1.0 - t)) + std::pow(w1, 1.0 / (1.0 - t)));
            }
            double len = static_cast<double>(j - i);
            best = std::max(best, (a / len) * std::pow(b / len, t - 1.0));
        }
    return best;
}

SampledSignal scaled(const SampledSignal& w, double c)
{
    SampledSignal out = w;
    for (auto& s : out.samples) s *= c;
    return out;
}

} // namespace

TEST_CASE("A_t of constants is one")
{
    SampledSignal w = unit_grid(128);
    for (auto& s : w.samples) s = 3.5;
    for (double t : {1.1, 1.2, 2.0, 3.0, 10.0}) {
        CHECK(a_t_constant(w, t) == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(a_t_constant_brute_force(w, t) == doctest::Approx(1.0).epsilon(1e-14));
    }
    SampledSignal one = power_weight(w, 0.0);
    CHECK(a_t_constant(one, 1.2) == 1.0);
}

TEST_CASE("A_t of power weights")
{
    SampledSignal like = unit_grid(96);
    const double t = 1.2;
    double prev = 1.0;
    for (double a : {0.05, 0.1, 0.2}) {
        SampledSignal w = power_weight(like, a);
        double v = a_t_constant(w, t);
        double oracle = scan_oracle(w, t);
        CHECK(v > 1.0);
        CHECK(v > prev);
        CHECK(v <= oracle * (1.0 + 1e-12));
        CHECK(v >= 0.95 * oracle);
        CHECK(a_t_constant_brute_force(w, t) == doctest::Approx(oracle).epsilon(1e-12));
        prev = v;
    }
    // larger powers only keep the factor-two approximation of the dyadic-length family
    SampledSignal steep = power_weight(like, 0.8);
    double v = a_t_constant(steep, t), oracle = scan_oracle(steep, t);
    CHECK(v > prev);
    CHECK(v <= oracle * (1.0 + 1e-12));
    CHECK(v >= 0.5 * oracle);
}

TEST_CASE("A_t properties")
{
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> U(0.2, 5.0);
    SampledSignal w = unit_grid(128);
    for (auto& s : w.samples) s = U(rng);

    double base = a_t_constant(w, 1.5);
    CHECK(a_t_constant(scaled(w, 8.0), 1.5) == base);
    CHECK(a_t_constant(scaled(w, 0.125), 1.5) == base);
    CHECK(a_t_constant(scaled(w, 3.7), 1.5) == doctest::Approx(base).epsilon(1e-12));

    double prev = kInf;
    for (double t : {1.05, 1.2, 1.5, 2.0, 4.0, 8.0}) {
        double v = a_t_constant(w, t);
        CHECK(v >= 1.0);
        CHECK(v <= prev * (1.0 + 1e-9));
        prev = v;
    }

    CHECK_THROWS_AS(a_t_constant(w, 1.0), Error);
    CHECK_THROWS_AS(a_t_constant(w, 0.5), Error);
    SampledSignal bad = w;
    bad.samples[2] = -1.0;
    CHECK_THROWS_AS(weight_sample(bad), Error);
    SampledSignal tiny = w;
    tiny.samples[5] = 0.0;
    CHECK(weight_sample(tiny, 1e-8).samples[5].real() == 1e-8);
}

TEST_CASE("weighted norms")
{
    std::mt19937_64 rng(9);
    SampledSignal f = random_signal(200, rng);
    SampledSignal w = power_weight(f, 0.3);
    SampledSignal one = power_weight(f, 0.0);
    SampledSignal z = SampledSignal::zeros(f.origin, f.spacing, f.size());

    CHECK(weighted_norm(z, w, 4.0) == 0.0);

    double direct = 0.0;
    for (const auto& s : f.samples) direct += std::pow(std::abs(s), 3.0);
    CHECK(weighted_norm(f, one, 3.0) == doctest::Approx(std::cbrt(direct * f.spacing)).epsilon(1e-13));

    CHECK(weighted_norm(scaled(f, -2.5), w, 4.0) == doctest::Approx(2.5 * weighted_norm(f, w, 4.0)).epsilon(1e-13));
    CHECK(weighted_norm(f, scaled(w, 16.0), 4.0) == doctest::Approx(2.0 * weighted_norm(f, w, 4.0)).epsilon(1e-13));

    SampledSignal other = unit_grid(100);
    CHECK_THROWS_AS(weighted_norm(other, w, 4.0), Error);
}

TEST_CASE("weighted bound experiment")
{
    std::mt19937_64 rng(12);
    std::vector<SampledSignal> corpus;
    for (int i = 0; i < 3; ++i) corpus.push_back(smooth_packet_signal(128, rng));
    FrequencyGrid grid = FrequencyGrid::uniform(-300.0, 300.0, 8);

    WeightExperiment ex = weighted_bound_experiment(3.0, 4.0, 1.2, {0.0, 0.05, 0.1, 0.2}, corpus, grid);
    REQUIRE(ex.rows.size() == 4);
    CHECK(ex.rows[0].a_t == 1.0);
    for (const auto& row : ex.rows) {
        CHECK(std::isfinite(row.ratio));
        CHECK(row.ratio > 0.0);
    }
    for (std::size_t i = 1; i < ex.rows.size(); ++i) CHECK(ex.rows[i].a_t > ex.rows[i - 1].a_t);
    CHECK(ex.fitted);
    CHECK(ex.bound == doctest::Approx(std::max(1.0, 1.2 / (4.0 * 0.2)) + 0.5));
    CHECK(ex.pass == (ex.slope <= ex.bound));

    // ratios are invariant under w -> c w
    SampledSignal w = power_weight(corpus[0], 0.1);
    SampledSignal Cr = var_carleson_function(corpus[0], grid, 3.0);
    double r1 = weighted_norm(Cr, w, 4.0) / weighted_norm(corpus[0], w, 4.0);
    double r2 = weighted_norm(Cr, scaled(w, 7.0), 4.0) / weighted_norm(corpus[0], scaled(w, 7.0), 4.0);
    CHECK(r1 == doctest::Approx(r2).epsilon(1e-13));

    // a single weight cannot be fitted
    WeightExperiment one = weighted_bound_experiment(3.0, 4.0, 1.2, {0.0}, corpus, grid);
    CHECK(!one.fitted);
    CHECK(!one.pass);

    CHECK_THROWS_AS(weighted_bound_experiment(3.0, 4.0, 3.0, {0.1}, corpus, grid), Error); // t >= q / r'
    CHECK_THROWS_AS(weighted_bound_experiment(3.0, 1.4, 1.2, {0.1}, corpus, grid), Error); // q <= r'
    CHECK_THROWS_AS(weighted_bound_experiment(3.0, 4.0, 1.2, {0.1}, {}, grid), Error);
    try {
        check_weight_exponents(3.0, 4.0, 2.7);
        CHECK(false);
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::config);
    }
}
