#pragma once

#include "vcarl/signal.hpp"

#include <random>

namespace vcarl {

// Samples at the cell midpoints of [0,1): x_k = (k + 1/2) / n.
SampledSignal unit_grid(std::size_t n);

struct CorpusOptions {
    double max_frequency = 300.0; // packet modulation range
    double width_lo = 0.03, width_hi = 0.1;
    double center_lo = 0.3, center_hi = 0.7;
    std::size_t packets_lo = 1, packets_hi = 4;
};

// C-infinity window equal to 1 on the middle of (lo, hi) and 0 outside.
double smooth_window(double x, double lo, double hi);

// Sum of modulated Gaussian packets with random complex amplitudes, windowed to (0.05, 0.95).
SampledSignal smooth_packet_signal(std::size_t n, std::mt19937_64& rng, const CorpusOptions& opt = {});
// Nonnegative sum of Gaussian bumps, windowed the same way.
SampledSignal smooth_bump_signal(std::size_t n, std::mt19937_64& rng, const CorpusOptions& opt = {});
// Adds one narrow tall spike of `cells` samples at a random place in (0.2, 0.8).
void add_spike(SampledSignal& f, std::mt19937_64& rng, double height, std::size_t cells = 1);
// Independent complex Gaussian samples.
SampledSignal random_signal(std::size_t n, std::mt19937_64& rng);

} // namespace vcarl
