#pragma once

#include "vcarl/carleson.hpp"
#include "vcarl/tiles.hpp"

namespace vcarl {

void check_resolvable(double t, double spacing, const WavePacketParams& p);

// F(f)(u,t,eta) = |f * psi_{t,eta}(u)| by frequency-domain multiplication.
double embed_F(const SampledSignal& f, const Tile& tile, const WavePacketParams& p);
// Same quantity by direct spatial quadrature; accurate far into the tails.
double embed_F_direct(const SampledSignal& f, const Tile& tile, const WavePacketParams& p);

// Whole-grid transforms. The FFT path folds each eta row onto the u lattice,
// which must be aligned with the samples (u0 - x0 and du integer multiples of dx).
TileField embed_F_field(const SampledSignal& f, const TileGridPtr& grid, const WavePacketParams& p);
TileField embed_F_direct_field(const SampledSignal& f, const TileGridPtr& grid, const WavePacketParams& p);

// A(g)(u,t,eta) = |int g(x) sum_j a_j(x) Psi^{xi_{j-1}(x), xi_j(x)}_{t,eta}(x - u) dx|
// with the canonical one-sided truncated packets.
double embed_A(const SampledSignal& g, const Tile& tile, const LinearizationData& L, const WavePacketParams& p);
TileField embed_A_field(const SampledSignal& g, const LinearizationData& L, const TileGridPtr& grid,
                        const WavePacketParams& p);
TileField embed_A_direct_field(const SampledSignal& g, const LinearizationData& L, const TileGridPtr& grid,
                               const WavePacketParams& p);

// Sum of F A weight over the region (all tiles when region is null).
double bilinear_form_B(const TileField& F, const TileField& A, const TileRegion* region = nullptr);

// Tile quadrature of int Psi^^{xi-,xi+}_{t,eta}(zeta) dt deta.
cplx multiplier_reconstruction(double xi_minus, double xi_plus, double zeta, const TileGrid& grid,
                               const WavePacketParams& p);
struct ReconstructionSpec {
    double c_eta = 0.5;
    double ratio = 0.9576032806985737; // 2^{-1/16}
    double t_min = 0.0;                // finest admissible scale
    double t_max = 32.0;               // coarsest scale
};

// Geometric scales from max(t_min, (d - eps - b/2) / (2 |xi+ - xi-|)) up to t_max.
// Null when that range is empty.
TileGridPtr reconstruction_grid_for(double xi_minus, double xi_plus, const WavePacketParams& p,
                                    const ReconstructionSpec& spec);

// False when the scales contributing at zeta are not all inside the grid.
bool reconstruction_resolved(double xi_minus, double xi_plus, double zeta, const TileGrid& grid,
                             const WavePacketParams& p);

} // namespace vcarl
