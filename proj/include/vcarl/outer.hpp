#pragma once

#include "vcarl/tiles.hpp"

#include <string>
#include <vector>

namespace vcarl {

// Theta = [alpha-, alpha+], Theta^o = [beta-, beta+].
struct TentGeometry {
    double alpha_lo = -768.0, alpha_hi = 768.0;
    double beta_lo = -192.0, beta_hi = 192.0;

    void validate(const WavePacketParams& p) const;
    static TentGeometry defaults(const WavePacketParams& p);
};

struct Tent {
    Interval I;
    double xi = 0.0;
};

enum class Membership { outside, overlap, lacunary };

Membership tent_membership(const Tile& tile, const Tent& tent, const TentGeometry& geo);

// Tiles of one tent on one grid: for every scale the u range and the eta row
// ranges of T (all of Theta) and T^o.
struct TentBlocks {
    struct Block {
        std::size_t scale = 0;
        std::size_t u_lo = 0, u_hi = 0;
        std::size_t j_lo = 0, j_hi = 0;   // Theta rows
        std::size_t o_lo = 0, o_hi = 0;   // Theta^o rows, inside [j_lo, j_hi)
    };
    std::vector<Block> blocks;

    bool empty() const { return blocks.empty(); }
};

TentBlocks tent_blocks(const TileGrid& grid, const Tent& tent, const TentGeometry& geo);

enum class SizeKind { energy, mass };

// Sizes of F (respectively A) restricted to the complement of `removed` (may be null).
double size_e(const TileField& F, const Tent& tent, const TentGeometry& geo, const TileRegion* removed = nullptr);
double size_m(const TileField& A, const Tent& tent, const TentGeometry& geo, const TileRegion* removed = nullptr);
double tent_size(SizeKind kind, const TileField& F, const Tent& tent, const TentGeometry& geo,
                 const TileRegion* removed = nullptr);

// Candidate tents with their tile blocks precomputed, in the order
// (|I| descending, left endpoint ascending, xi ascending).
class TentFamily {
public:
    TentFamily(TileGridPtr grid, TentGeometry geo, std::vector<Tent> tents);

    // Dyadic subintervals of `window` of length > min_length, each paired with
    // the xi lattice eta_lo + k (beta+ - beta-)/|I| covering [eta_lo, eta_hi].
    static TentFamily dyadic(TileGridPtr grid, const TentGeometry& geo, const Interval& window, double min_length);

    const TileGridPtr& grid() const { return grid_; }
    const TentGeometry& geometry() const { return geo_; }
    std::size_t size() const { return tents_.size(); }
    const Tent& tent(std::size_t i) const { return tents_[i]; }
    const TentBlocks& blocks(std::size_t i) const { return blocks_[i]; }

    TileRegion region(std::size_t i) const;
    double size(SizeKind kind, const TileField& F, std::size_t i, const TileRegion* removed = nullptr) const;

private:
    TileGridPtr grid_;
    TentGeometry geo_;
    std::vector<Tent> tents_;
    std::vector<TentBlocks> blocks_;
};

struct OuterCover {
    std::vector<std::size_t> tents; // indices into the family
    double measure = 0.0;
};

// Greedy cover (most uncovered weight per unit |I|) followed by removal of
// redundant tents, compared against the cheapest single covering tent.
OuterCover outer_cover(const TileRegion& E, const TentFamily& family);
double outer_measure(const TileRegion& E, const TentFamily& family);
// Monotone variant: never exceeds the cover found for a superset.
double outer_measure_within(const TileRegion& E, const TileRegion& superset, const TentFamily& family);
// Subadditive variant for a union.
double outer_measure_union(const TileRegion& E1, const TileRegion& E2, const TentFamily& family);

double global_sup_size(SizeKind kind, const TileField& F, const TentFamily& family);
double super_level_measure(const TileField& F, SizeKind kind, double lambda, const TentFamily& family);

struct OuterNormOptions {
    std::size_t levels = 64;
    std::size_t refine = 4;
    double lo = 1e-6;
    double hi = 2.0;
};

double outer_lp_norm(const TileField& F, SizeKind kind, double p, const TentFamily& family,
                     const OuterNormOptions& opt = {});

struct HolderCheck {
    double lhs = 0.0;
    double rhs = 0.0;         // 2 |I| s^e(F) s^m(A)
    double rhs_literal = 0.0; // 2 s^e(F) s^m(A)
    bool pass = false;
    bool pass_literal = false;
};

HolderCheck outer_holder_check(const TileField& F, const TileField& A, const Tent& tent, const TentGeometry& geo);

// Finite union of disjoint open intervals, kept sorted and merged.
struct OpenSet {
    std::vector<Interval> components;

    void add(const Interval& I);
    double measure() const;
    bool empty() const { return components.empty(); }
};

// T(E) = union over intervals I inside E of {t < |I|, |u - c(I)| < |I| - t}.
TileRegion tent_over_open_set(const OpenSet& E, const TileGridPtr& grid);
TileRegion spatial_tent(const Interval& I, const TileGridPtr& grid);
// box(P) = {u in P, |P|/2 <= t < |P|}
TileRegion box_region(const Interval& P, const TileGridPtr& grid);

} // namespace vcarl
