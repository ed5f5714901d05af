#include "vcarl/weights.hpp"

#include <algorithm>
#include <cmath>

namespace vcarl {

SampledSignal weight_sample(const SampledSignal& w, double floor)
{
    require(floor > 0.0, ErrorKind::config, "weight floor must be positive");
    SampledSignal out = w;
    for (auto& s : out.samples) {
        require(std::isfinite(s.real()) && s.imag() == 0.0 && s.real() >= 0.0, ErrorKind::input,
                "weights must be finite, real and nonnegative");
        s = cplx(std::max(s.real(), floor), 0.0);
    }
    return out;
}

SampledSignal power_weight(const SampledSignal& like, double a, double center, double delta, double floor)
{
    require(delta > 0.0, ErrorKind::config, "power weight scale must be positive");
    SampledSignal w = SampledSignal::zeros(like.origin, like.spacing, like.size());
    for (std::size_t k = 0; k < w.size(); ++k) w.samples[k] = std::pow(1.0 + std::abs(w.x(k) - center) / delta, a);
    return weight_sample(w, floor);
}

namespace {

// Prefix sums of the trapezoid rule in units of the spacing.
std::vector<double> trapezoid_prefix(const std::vector<double>& v)
{
    std::vector<double> P(v.size(), 0.0);
    for (std::size_t k = 1; k < v.size(); ++k) P[k] = P[k - 1] + 0.5 * (v[k - 1] + v[k]);
    return P;
}

struct AtData {
    std::vector<double> pw, pd;
    double t;

    AtData(const SampledSignal& w, double t_) : t(t_)
    {
        require(t > 1.0, ErrorKind::exponent, "A_t needs t > 1");
        require(w.size() >= 2, ErrorKind::input, "weight needs at least two samples");
        double mx = 0.0;
        for (const auto& s : w.samples) {
            require(s.real() > 0.0 && std::isfinite(s.real()), ErrorKind::input, "weight must be positive and finite");
            mx = std::max(mx, s.real());
        }
        std::vector<double> a(w.size()), b(w.size());
        for (std::size_t k = 0; k < w.size(); ++k) {
            double v = w.samples[k].real() / mx;
            a[k] = v;
            b[k] = std::pow(v, 1.0 / (1.0 - t));
        }
        pw = trapezoid_prefix(a);
        pd = trapezoid_prefix(b);
    }
    double value(std::size_t i, std::size_t j) const
    {
        double len = static_cast<double>(j - i);
        double mw = (pw[j] - pw[i]) / len;
        double md = (pd[j] - pd[i]) / len;
        return mw * std::pow(md, t - 1.0);
    }
};

} // namespace

double a_t_constant(const SampledSignal& w, double t)
{
    AtData d(w, t);
    const std::size_t n = w.size();
    double best = 0.0;
    for (std::size_t len = 1; len < n; len *= 2)
        for (std::size_t i = 0; i + len < n; ++i) best = std::max(best, d.value(i, i + len));
    return best;
}

double a_t_constant_brute_force(const SampledSignal& w, double t)
{
    AtData d(w, t);
    const std::size_t n = w.size();
    double best = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) best = std::max(best, d.value(i, j));
    return best;
}

double weighted_norm(const SampledSignal& f, const SampledSignal& w, double q)
{
    require(q > 0.0, ErrorKind::exponent, "norm exponent must be positive");
    require(same_grid(f, w), ErrorKind::grid_mismatch, "signal and weight must share a grid");
    double s = 0.0;
    for (std::size_t k = 0; k < f.size(); ++k) s += std::pow(std::abs(f.samples[k]), q) * w.samples[k].real();
    return std::pow(s * f.spacing, 1.0 / q);
}

void check_weight_exponents(double r, double q, double t)
{
    check_variation_exponent(r);
    double rp = r / (r - 1.0);
    require(q > rp, ErrorKind::config, "weighted experiment needs q > r'");
    require(t > 1.0 && t < q / rp, ErrorKind::config, "weighted experiment needs 1 < t < q / r'");
}

WeightExperiment weighted_bound_experiment(double r, double q, double t, const std::vector<double>& family_a,
                                           const std::vector<SampledSignal>& corpus, const FrequencyGrid& grid,
                                           double delta, double floor)
{
    check_weight_exponents(r, q, t);
    require(!corpus.empty(), ErrorKind::input, "weighted experiment needs a corpus");
    WeightExperiment ex;
    ex.bound = std::max(1.0, t / (q * (t - 1.0))) + 0.5;
    std::vector<SampledSignal> Cf;
    Cf.reserve(corpus.size());
    for (const auto& f : corpus) Cf.push_back(var_carleson_function(f, grid, r));
    for (double a : family_a) {
        SampledSignal w = power_weight(corpus.front(), a, 0.5, delta, floor);
        WeightRow row;
        row.a = a;
        row.a_t = a_t_constant(w, t);
        for (std::size_t i = 0; i < corpus.size(); ++i) {
            double den = weighted_norm(corpus[i], w, q);
            if (den > 0.0) row.ratio = std::max(row.ratio, weighted_norm(Cf[i], w, q) / den);
        }
        ex.rows.push_back(row);
    }
    // least squares of log R against log A
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    std::size_t m = 0;
    for (const auto& row : ex.rows) {
        if (!(row.ratio > 0.0)) continue;
        double x = std::log(row.a_t), y = std::log(row.ratio);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++m;
    }
    double den = static_cast<double>(m) * sxx - sx * sx;
    if (m >= 2 && den > 1e-14 * std::max(1.0, static_cast<double>(m) * sxx)) {
        ex.slope = (static_cast<double>(m) * sxy - sx * sy) / den;
        ex.intercept = (sy - ex.slope * sx) / static_cast<double>(m);
        ex.fitted = true;
    }
    ex.pass = ex.fitted && ex.slope <= ex.bound;
    return ex;
}

} // namespace vcarl
