#pragma once

#include "vcarl/signal.hpp"
#include "vcarl/wavepacket.hpp"

#include <cstdint>
#include <memory>
#include <vector>

namespace vcarl {

struct Tile {
    double u = 0.0;
    double t = 1.0;
    double eta = 0.0;
};

// Discretization of the upper 3-space: a uniform u lattice shared by all
// scales, a list of scales with quadrature weights dt, and per-scale eta
// lattices eta_j = j * c_eta / t anchored at zero. Tile index layout is
// scale-major, then eta row, then u.
class TileGrid {
public:
    struct Scale {
        double t = 1.0;
        double dt = 1.0;
        double d_eta = 1.0;
        long eta_first = 0;
        std::size_t eta_count = 0;
        std::size_t offset = 0;

        double eta(std::size_t j) const { return d_eta * static_cast<double>(eta_first + static_cast<long>(j)); }
    };

    TileGrid() = default;
    TileGrid(double u0, double du, std::size_t u_count, const std::vector<double>& scales,
             const std::vector<double>& dts, double c_eta, double eta_lo, double eta_hi);

    double u0() const { return u0_; }
    double du() const { return du_; }
    std::size_t u_count() const { return u_count_; }
    double u(std::size_t i) const { return u0_ + du_ * static_cast<double>(i); }
    double c_eta() const { return c_eta_; }
    double eta_lo() const { return eta_lo_; }
    double eta_hi() const { return eta_hi_; }
    const std::vector<Scale>& scales() const { return scales_; }
    std::size_t tile_count() const { return total_; }

    std::size_t index(std::size_t k, std::size_t j, std::size_t i) const
    {
        return scales_[k].offset + j * u_count_ + i;
    }
    Tile tile(std::size_t k, std::size_t j, std::size_t i) const { return {u(i), scales_[k].t, scales_[k].eta(j)}; }
    Tile tile(std::size_t idx) const;
    double weight(std::size_t k) const { return du_ * scales_[k].dt * scales_[k].d_eta; }

    // u index range [lo, hi) with |u - c| < h (strict).
    std::pair<std::size_t, std::size_t> u_range_open(double c, double h) const;

    bool operator==(const TileGrid& o) const;

private:
    double u0_ = 0.0, du_ = 1.0;
    std::size_t u_count_ = 0;
    double c_eta_ = 1.0, eta_lo_ = 0.0, eta_hi_ = 0.0;
    std::vector<Scale> scales_;
    std::size_t total_ = 0;
};

using TileGridPtr = std::shared_ptr<const TileGrid>;

struct TileField {
    TileGridPtr grid;
    std::vector<double> values;

    TileField() = default;
    explicit TileField(TileGridPtr g) : grid(std::move(g)), values(grid->tile_count(), 0.0) {}
    void validate() const;
};

// Explicit boolean mask over a TileGrid.
struct TileRegion {
    TileGridPtr grid;
    std::vector<std::uint8_t> mask;

    TileRegion() = default;
    TileRegion(TileGridPtr g, bool fill) : grid(std::move(g)), mask(grid->tile_count(), fill ? 1 : 0) {}
    std::size_t count() const;
    TileRegion complement() const;
    TileRegion minus(const TileRegion& o) const;
    TileRegion unite(const TileRegion& o) const;
};

bool same_tile_grid(const TileGridPtr& a, const TileGridPtr& b);

// Finest scale at which a packet's frequency support stays inside the Nyquist
// band of the sample grid: max(2 dx, b dx / (2 pi)).
double resolvable_scale(double spacing, const WavePacketParams& p);

struct EmbeddingGridSpec {
    double c_eta = 1.0;
    std::size_t max_scales = 6;   // keep the coarsest ones
    std::size_t u_per_length = 0; // 0: u step equals the sample spacing
};

// Dyadic embedding grid for the tent over Q: u lattice covering (c - |Q|, c + |Q|)
// aligned to the samples with step a power of two times dx, scales 2^m dx with
// resolvable_scale < t < |Q|, eta range [eta_lo, eta_hi].
TileGridPtr embedding_grid(const SampledSignal& f, const Interval& Q, const WavePacketParams& p,
                           const EmbeddingGridSpec& spec, double eta_lo, double eta_hi);

// Frequency-only quadrature grid (one u position) with geometric scales
// t_hi, t_hi r, ... >= t_lo, used for the multiplier reconstruction.
TileGridPtr reconstruction_grid(double t_lo, double t_hi, double ratio, double c_eta, double eta_lo, double eta_hi);

} // namespace vcarl
