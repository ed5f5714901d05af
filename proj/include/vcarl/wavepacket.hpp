#pragma once

#include "vcarl/signal.hpp"

#include <memory>
#include <vector>

namespace vcarl {

// Frequency-side constants of the packet construction.
//   psi^(z) = A exp(-z^2/(2 core^2)) T(|z|), T a smooth step from 1 to 0 on
//   [b/2 - 2 core, b/2]; chi is a bump on [d - eps, d + eps]; theta is a smooth
//   step from 0 (at d_prime) to 1 (at d_doubleprime).
struct WavePacketParams {
    double b = 96.0;
    double d = 104.0;
    double eps = 8.0;
    double d_prime = 0.5;
    double d_doubleprime = 1.0;
    double core = 3.0;

    void validate() const;
    double half_support() const { return 0.5 * b; }
    double taper_start() const { return 0.5 * b - 2.0 * core; }
    bool operator==(const WavePacketParams&) const = default;
};

// C-infinity step: 0 for x <= 0, 1 for x >= 1.
double smooth_step(double x);

class MotherWavelet {
public:
    explicit MotherWavelet(const WavePacketParams& p);

    const WavePacketParams& params() const { return p_; }

    double psi_hat(double z) const;
    // Spatial mother function, real and even, unit L2 norm. Accurate far into
    // the tail: the Gaussian part is analytic and the taper correction is tabulated.
    double psi(double y) const;
    // |y| beyond which psi is treated as zero.
    double spatial_cutoff() const { return y_max_; }

    double chi(double v) const;
    double theta(double z) const;

    // Scalar factor multiplying psi_{t,eta} in the truncated packet.
    // xi_minus = -inf selects the mirrored construction anchored at xi_plus.
    double truncation_weight(double t, double eta, double xi_minus, double xi_plus) const;

    // psi_{t,eta}(y) = t^{-1} e^{i eta y} psi(y / t)
    cplx packet(double t, double eta, double y) const;

    double psi_hat_amplitude() const { return amp_psi_; }
    double chi_amplitude() const { return amp_chi_; }

private:
    double taper_correction(double y) const;

    WavePacketParams p_;
    double amp_psi_ = 1.0;
    double amp_chi_ = 1.0;
    double y_max_ = 64.0;
    double r_step_ = 0.0;
    std::vector<double> r_table_;
};

// Shared, lazily built instance per parameter set.
std::shared_ptr<const MotherWavelet> wavelet_for(const WavePacketParams& p);

// psi sampled on [-8, 8] with spacing 1/64.
SampledSignal mother_wavepacket(const WavePacketParams& p);

// Truncated packet Psi^{xi-,xi+}_{t,eta} sampled on [-8t, 8t] with spacing t/64.
SampledSignal truncated_wavepacket(double t, double eta, double xi_minus, double xi_plus,
                                   const WavePacketParams& p);
// Same on a caller supplied grid.
SampledSignal truncated_wavepacket(double t, double eta, double xi_minus, double xi_plus,
                                   const WavePacketParams& p, double origin, double spacing, std::size_t n);

} // namespace vcarl
