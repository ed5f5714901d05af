#include "vcarl/corpus.hpp"

#include "vcarl/wavepacket.hpp"

#include <cmath>

namespace vcarl {

SampledSignal unit_grid(std::size_t n)
{
    require(n >= 2, ErrorKind::config, "grid needs at least two samples");
    double dx = 1.0 / static_cast<double>(n);
    return SampledSignal::zeros(0.5 * dx, dx, n);
}

double smooth_window(double x, double lo, double hi)
{
    double ramp = 0.2 * (hi - lo);
    return smooth_step((x - lo) / ramp) * smooth_step((hi - x) / ramp);
}

namespace {

double uniform(std::mt19937_64& rng, double a, double b)
{
    return std::uniform_real_distribution<double>(a, b)(rng);
}

std::size_t count(std::mt19937_64& rng, std::size_t lo, std::size_t hi)
{
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

} // namespace

SampledSignal smooth_packet_signal(std::size_t n, std::mt19937_64& rng, const CorpusOptions& opt)
{
    SampledSignal f = unit_grid(n);
    std::size_t m = count(rng, opt.packets_lo, opt.packets_hi);
    for (std::size_t q = 0; q < m; ++q) {
        double c = uniform(rng, opt.center_lo, opt.center_hi);
        double w = uniform(rng, opt.width_lo, opt.width_hi);
        double om = uniform(rng, -opt.max_frequency, opt.max_frequency);
        cplx amp = std::polar(uniform(rng, 0.5, 1.5), uniform(rng, 0.0, 2.0 * kPi));
        for (std::size_t k = 0; k < n; ++k) {
            double y = (f.x(k) - c) / w;
            f.samples[k] += amp * std::exp(-0.5 * y * y) * std::polar(1.0, om * f.x(k));
        }
    }
    for (std::size_t k = 0; k < n; ++k) f.samples[k] *= smooth_window(f.x(k), 0.05, 0.95);
    return f;
}

SampledSignal smooth_bump_signal(std::size_t n, std::mt19937_64& rng, const CorpusOptions& opt)
{
    SampledSignal g = unit_grid(n);
    std::size_t m = count(rng, opt.packets_lo, opt.packets_hi);
    for (std::size_t q = 0; q < m; ++q) {
        double c = uniform(rng, opt.center_lo, opt.center_hi);
        double w = uniform(rng, opt.width_lo, opt.width_hi);
        double amp = uniform(rng, 0.5, 1.5);
        for (std::size_t k = 0; k < n; ++k) {
            double y = (g.x(k) - c) / w;
            g.samples[k] += amp * std::exp(-0.5 * y * y);
        }
    }
    for (std::size_t k = 0; k < n; ++k) g.samples[k] *= smooth_window(g.x(k), 0.05, 0.95);
    return g;
}

void add_spike(SampledSignal& f, std::mt19937_64& rng, double height, std::size_t cells)
{
    std::size_t n = f.size();
    std::size_t lo = static_cast<std::size_t>(0.2 * static_cast<double>(n));
    std::size_t hi = static_cast<std::size_t>(0.8 * static_cast<double>(n));
    require(hi > lo + cells, ErrorKind::config, "grid too small for a spike");
    std::size_t at = count(rng, lo, hi - cells);
    for (std::size_t k = at; k < at + cells; ++k) f.samples[k] += height;
}

SampledSignal random_signal(std::size_t n, std::mt19937_64& rng)
{
    SampledSignal f = unit_grid(n);
    std::normal_distribution<double> N(0.0, 1.0);
    for (auto& s : f.samples) {
        double re = N(rng);
        s = cplx(re, N(rng));
    }
    return f;
}

} // namespace vcarl
