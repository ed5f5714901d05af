#include "vcarl/outer.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

namespace vcarl {

void TentGeometry::validate(const WavePacketParams& p) const
{
    require(alpha_lo <= beta_lo && beta_lo <= 0.0 && 0.0 <= beta_hi && beta_hi <= alpha_hi, ErrorKind::config,
            "tent geometry needs 0 in Theta^o inside Theta");
    require(beta_lo < -p.b && beta_hi > p.b, ErrorKind::config, "Theta^o must contain (-b, b)");
}

TentGeometry TentGeometry::defaults(const WavePacketParams& p)
{
    return {-8.0 * p.b, 8.0 * p.b, -2.0 * p.b, 2.0 * p.b};
}

namespace {

bool spatial_in(const Tile& tile, const Interval& I)
{
    return tile.t < I.length && std::abs(tile.u - I.center) < I.length - tile.t;
}

bool within(double v, double lo, double hi) { return v >= lo && v <= hi; }

// Row range [a, b) of scale sc with lo <= t (eta_j - xi) <= hi.
std::pair<std::size_t, std::size_t> row_range(const TileGrid::Scale& sc, double xi, double lo, double hi)
{
    if (sc.eta_count == 0) return {0, 0};
    auto v = [&](long j) { return sc.t * (sc.eta(static_cast<std::size_t>(j)) - xi); };
    double base = static_cast<double>(sc.eta_first);
    long a = static_cast<long>(std::floor((xi + lo / sc.t) / sc.d_eta - base)) - 1;
    long b = static_cast<long>(std::ceil((xi + hi / sc.t) / sc.d_eta - base)) + 2;
    long n = static_cast<long>(sc.eta_count);
    a = std::clamp<long>(a, 0, n);
    b = std::clamp<long>(b, 0, n);
    while (a < b && !within(v(a), lo, hi)) ++a;
    while (b > a && !within(v(b - 1), lo, hi)) --b;
    return {static_cast<std::size_t>(a), static_cast<std::size_t>(b)};
}

template <class Fn>
void for_each_tile(const TileGrid& g, const TentBlocks& tb, Fn&& fn)
{
    for (const auto& bl : tb.blocks) {
        double w = g.weight(bl.scale);
        for (std::size_t j = bl.j_lo; j < bl.j_hi; ++j) {
            bool over = j >= bl.o_lo && j < bl.o_hi;
            std::size_t base = g.index(bl.scale, j, 0);
            for (std::size_t i = bl.u_lo; i < bl.u_hi; ++i) fn(base + i, w, over);
        }
    }
}

double size_from_blocks(SizeKind kind, const TileField& F, const TentBlocks& tb, double len, const TileRegion* removed)
{
    const auto& vals = F.values;
    const std::uint8_t* rm = removed ? removed->mask.data() : nullptr;
    double sq = 0.0, sup = 0.0, l1 = 0.0;
    if (kind == SizeKind::energy) {
        for_each_tile(*F.grid, tb, [&](std::size_t idx, double w, bool over) {
            if (rm && rm[idx]) return;
            double v = std::abs(vals[idx]);
            sup = std::max(sup, v);
            if (!over) sq += v * v * w;
        });
        return std::sqrt(sq / len) + sup;
    }
    for_each_tile(*F.grid, tb, [&](std::size_t idx, double w, bool over) {
        if (rm && rm[idx]) return;
        double v = std::abs(vals[idx]);
        sq += v * v * w;
        if (over) l1 += v * w;
    });
    return std::sqrt(sq / len) + l1 / len;
}

} // namespace

Membership tent_membership(const Tile& tile, const Tent& tent, const TentGeometry& geo)
{
    if (!spatial_in(tile, tent.I)) return Membership::outside;
    double v = tile.t * (tile.eta - tent.xi);
    if (within(v, geo.beta_lo, geo.beta_hi)) return Membership::overlap;
    if (within(v, geo.alpha_lo, geo.alpha_hi)) return Membership::lacunary;
    return Membership::outside;
}

TentBlocks tent_blocks(const TileGrid& grid, const Tent& tent, const TentGeometry& geo)
{
    TentBlocks tb;
    for (std::size_t k = 0; k < grid.scales().size(); ++k) {
        const auto& sc = grid.scales()[k];
        if (!(sc.t < tent.I.length)) continue;
        auto [ulo, uhi] = grid.u_range_open(tent.I.center, tent.I.length - sc.t);
        if (ulo >= uhi) continue;
        auto [ja, jb] = row_range(sc, tent.xi, geo.alpha_lo, geo.alpha_hi);
        if (ja >= jb) continue;
        auto [oa, ob] = row_range(sc, tent.xi, geo.beta_lo, geo.beta_hi);
        if (oa >= ob) oa = ob = ja;
        tb.blocks.push_back({k, ulo, uhi, ja, jb, oa, ob});
    }
    return tb;
}

double tent_size(SizeKind kind, const TileField& F, const Tent& tent, const TentGeometry& geo, const TileRegion* removed)
{
    F.validate();
    if (removed) require(same_tile_grid(F.grid, removed->grid), ErrorKind::grid_mismatch, "removal set on another grid");
    return size_from_blocks(kind, F, tent_blocks(*F.grid, tent, geo), tent.I.length, removed);
}

double size_e(const TileField& F, const Tent& tent, const TentGeometry& geo, const TileRegion* removed)
{
    return tent_size(SizeKind::energy, F, tent, geo, removed);
}

double size_m(const TileField& A, const Tent& tent, const TentGeometry& geo, const TileRegion* removed)
{
    return tent_size(SizeKind::mass, A, tent, geo, removed);
}

TentFamily::TentFamily(TileGridPtr grid, TentGeometry geo, std::vector<Tent> tents)
    : grid_(std::move(grid)), geo_(geo), tents_(std::move(tents))
{
    std::stable_sort(tents_.begin(), tents_.end(), [](const Tent& a, const Tent& b) {
        if (a.I.length != b.I.length) return a.I.length > b.I.length;
        if (a.I.lo() != b.I.lo()) return a.I.lo() < b.I.lo();
        return a.xi < b.xi;
    });
    blocks_.reserve(tents_.size());
    for (const auto& t : tents_) blocks_.push_back(tent_blocks(*grid_, t, geo_));
}

TentFamily TentFamily::dyadic(TileGridPtr grid, const TentGeometry& geo, const Interval& window, double min_length)
{
    std::vector<Tent> tents;
    double lo = grid->eta_lo(), hi = grid->eta_hi();
    for (std::size_t k = 0;; ++k) {
        double len = window.length / std::ldexp(1.0, static_cast<int>(k));
        if (!(len > min_length) || k > 40) break;
        double h = (geo.beta_hi - geo.beta_lo) / len;
        std::size_t nxi = static_cast<std::size_t>(std::ceil((hi - lo) / h - 1e-12)) + 1;
        std::size_t count = std::size_t{1} << k;
        for (std::size_t m = 0; m < count; ++m) {
            Interval I{window.lo() + (static_cast<double>(m) + 0.5) * len, len};
            for (std::size_t q = 0; q < nxi; ++q) {
                Tent t{I, lo + h * static_cast<double>(q)};
                if (!tent_blocks(*grid, t, geo).empty()) tents.push_back(t);
            }
        }
    }
    return TentFamily(std::move(grid), geo, std::move(tents));
}

TileRegion TentFamily::region(std::size_t i) const
{
    TileRegion r(grid_, false);
    for_each_tile(*grid_, blocks_[i], [&](std::size_t idx, double, bool) { r.mask[idx] = 1; });
    return r;
}

double TentFamily::size(SizeKind kind, const TileField& F, std::size_t i, const TileRegion* removed) const
{
    return size_from_blocks(kind, F, blocks_[i], tents_[i].I.length, removed);
}

OuterCover outer_cover(const TileRegion& E, const TentFamily& family)
{
    require(same_tile_grid(E.grid, family.grid()), ErrorKind::grid_mismatch, "region and tent family on different grids");
    OuterCover out;
    const TileGrid& g = *family.grid();
    std::size_t remaining = E.count();
    if (remaining == 0) return out;
    const std::size_t total = remaining;

    std::vector<std::uint8_t> covered(E.mask.size(), 0);
    auto gain = [&](std::size_t i, std::size_t* count) {
        double w_sum = 0.0;
        std::size_t c = 0;
        for_each_tile(g, family.blocks(i), [&](std::size_t idx, double w, bool) {
            if (E.mask[idx] && !covered[idx]) {
                w_sum += w;
                ++c;
            }
        });
        if (count) *count = c;
        return w_sum;
    };

    using Entry = std::pair<double, long>; // ratio, -index
    std::priority_queue<Entry> pq;
    double best_single = kInf;
    std::size_t best_single_idx = 0;
    for (std::size_t i = 0; i < family.size(); ++i) {
        std::size_t c = 0;
        double w = gain(i, &c);
        if (c == 0) continue;
        double len = family.tent(i).I.length;
        if (c == total && len < best_single) {
            best_single = len;
            best_single_idx = i;
        }
        pq.push({w / len, -static_cast<long>(i)});
    }

    std::vector<std::size_t> chosen;
    while (remaining > 0) {
        if (pq.empty()) fail(ErrorKind::incoverable, "tile region is not coverable by the candidate tents");
        auto [ratio, neg] = pq.top();
        pq.pop();
        std::size_t i = static_cast<std::size_t>(-neg);
        std::size_t c = 0;
        double w = gain(i, &c);
        if (c == 0) continue;
        double r = w / family.tent(i).I.length;
        if (!pq.empty() && r < pq.top().first) {
            pq.push({r, neg});
            continue;
        }
        chosen.push_back(i);
        for_each_tile(g, family.blocks(i), [&](std::size_t idx, double, bool) {
            if (E.mask[idx] && !covered[idx]) {
                covered[idx] = 1;
                --remaining;
            }
        });
    }

    // drop redundant tents, longest first
    std::vector<unsigned> mult(E.mask.size(), 0);
    for (std::size_t i : chosen)
        for_each_tile(g, family.blocks(i), [&](std::size_t idx, double, bool) {
            if (E.mask[idx]) ++mult[idx];
        });
    std::vector<std::size_t> order = chosen;
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return family.tent(a).I.length > family.tent(b).I.length; });
    std::vector<std::uint8_t> dropped(family.size(), 0);
    for (std::size_t i : order) {
        bool needed = false;
        for_each_tile(g, family.blocks(i), [&](std::size_t idx, double, bool) {
            if (E.mask[idx] && mult[idx] < 2) needed = true;
        });
        if (needed) continue;
        dropped[i] = 1;
        for_each_tile(g, family.blocks(i), [&](std::size_t idx, double, bool) {
            if (E.mask[idx]) --mult[idx];
        });
    }
    for (std::size_t i : chosen)
        if (!dropped[i]) {
            out.tents.push_back(i);
            out.measure += family.tent(i).I.length;
        }
    if (best_single < out.measure) {
        out.tents = {best_single_idx};
        out.measure = best_single;
    }
    return out;
}

double outer_measure(const TileRegion& E, const TentFamily& family) { return outer_cover(E, family).measure; }

double outer_measure_within(const TileRegion& E, const TileRegion& superset, const TentFamily& family)
{
    return std::min(outer_measure(E, family), outer_measure(superset, family));
}

double outer_measure_union(const TileRegion& E1, const TileRegion& E2, const TentFamily& family)
{
    return std::min(outer_measure(E1.unite(E2), family), outer_measure(E1, family) + outer_measure(E2, family));
}

namespace {

std::vector<double> full_sizes(SizeKind kind, const TileField& F, const TentFamily& family)
{
    F.validate();
    require(same_tile_grid(F.grid, family.grid()), ErrorKind::grid_mismatch, "field and tent family on different grids");
    std::vector<double> s(family.size());
    for (std::size_t i = 0; i < family.size(); ++i) s[i] = family.size(kind, F, i);
    return s;
}

double level_measure(const TileField& F, SizeKind kind, double lambda, const TentFamily& family,
                     const std::vector<double>& full)
{
    TileRegion removed(family.grid(), false);
    double total = 0.0;
    bool any = false;
    for (std::size_t i = 0; i < family.size(); ++i) {
        if (!(full[i] > lambda)) continue;
        if (any && !(family.size(kind, F, i, &removed) > lambda)) continue;
        for_each_tile(*family.grid(), family.blocks(i),
                      [&](std::size_t idx, double, bool) { removed.mask[idx] = 1; });
        total += family.tent(i).I.length;
        any = true;
    }
    return total;
}

} // namespace

double global_sup_size(SizeKind kind, const TileField& F, const TentFamily& family)
{
    auto s = full_sizes(kind, F, family);
    double m = 0.0;
    for (double v : s) m = std::max(m, v);
    return m;
}

double super_level_measure(const TileField& F, SizeKind kind, double lambda, const TentFamily& family)
{
    return level_measure(F, kind, lambda, family, full_sizes(kind, F, family));
}

double outer_lp_norm(const TileField& F, SizeKind kind, double p, const TentFamily& family, const OuterNormOptions& opt)
{
    require(p > 0.0, ErrorKind::exponent, "outer L^p exponent must be positive");
    require(opt.levels >= 2 && opt.lo > 0.0 && opt.hi > opt.lo, ErrorKind::config, "outer norm levels invalid");
    auto full = full_sizes(kind, F, family);
    double sup = 0.0;
    for (double v : full) sup = std::max(sup, v);
    if (sup == 0.0) return 0.0;

    std::vector<std::pair<double, double>> pts; // (lambda, mu)
    auto mu = [&](double lam) { return level_measure(F, kind, lam, family, full); };
    const double ratio = std::pow(opt.hi / opt.lo, 1.0 / static_cast<double>(opt.levels - 1));
    std::vector<double> lam(opt.levels), m(opt.levels);
    for (std::size_t i = 0; i < opt.levels; ++i) {
        lam[i] = sup * opt.lo * std::pow(ratio, static_cast<double>(i));
        m[i] = mu(lam[i]);
    }
    auto refine = [&](auto&& self, double a, double ma, double b, double mb, std::size_t depth) -> void {
        if (ma == mb || depth == 0) return;
        double c = std::sqrt(a * b);
        double mc = mu(c);
        pts.emplace_back(c, mc);
        self(self, a, ma, c, mc, depth - 1);
        self(self, c, mc, b, mb, depth - 1);
    };
    for (std::size_t i = 0; i < opt.levels; ++i) {
        pts.emplace_back(lam[i], m[i]);
        if (i + 1 < opt.levels) refine(refine, lam[i], m[i], lam[i + 1], m[i + 1], opt.refine);
    }
    std::sort(pts.begin(), pts.end());
    // any set admissible at a lower level is admissible above it
    for (std::size_t i = 1; i < pts.size(); ++i) pts[i].second = std::min(pts[i].second, pts[i - 1].second);

    double acc = std::pow(pts.front().first, p) * pts.front().second;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i)
        acc += 0.5 * (pts[i].second + pts[i + 1].second) * (std::pow(pts[i + 1].first, p) - std::pow(pts[i].first, p));
    return std::pow(acc, 1.0 / p);
}

HolderCheck outer_holder_check(const TileField& F, const TileField& A, const Tent& tent, const TentGeometry& geo)
{
    F.validate();
    A.validate();
    require(same_tile_grid(F.grid, A.grid), ErrorKind::grid_mismatch, "fields live on different tile grids");
    TentBlocks tb = tent_blocks(*F.grid, tent, geo);
    HolderCheck h;
    for_each_tile(*F.grid, tb, [&](std::size_t idx, double w, bool) {
        h.lhs += std::abs(F.values[idx] * A.values[idx]) * w;
    });
    double se = size_from_blocks(SizeKind::energy, F, tb, tent.I.length, nullptr);
    double sm = size_from_blocks(SizeKind::mass, A, tb, tent.I.length, nullptr);
    h.rhs_literal = 2.0 * se * sm;
    h.rhs = tent.I.length * h.rhs_literal;
    h.pass = h.lhs <= h.rhs * (1.0 + 1e-9);
    h.pass_literal = h.lhs <= h.rhs_literal * (1.0 + 1e-9);
    return h;
}

void OpenSet::add(const Interval& I)
{
    if (!(I.length > 0.0)) return;
    double a = I.lo(), b = I.hi();
    std::vector<Interval> out;
    for (const auto& c : components) {
        if (c.hi() <= a || c.lo() >= b) {
            out.push_back(c);
        } else {
            a = std::min(a, c.lo());
            b = std::max(b, c.hi());
        }
    }
    out.push_back(Interval::from_endpoints(a, b));
    std::sort(out.begin(), out.end(), [](const Interval& x, const Interval& y) { return x.lo() < y.lo(); });
    components = std::move(out);
}

double OpenSet::measure() const
{
    double s = 0.0;
    for (const auto& c : components) s += c.length;
    return s;
}

TileRegion spatial_tent(const Interval& I, const TileGridPtr& grid)
{
    TileRegion r(grid, false);
    const TileGrid& g = *grid;
    for (std::size_t k = 0; k < g.scales().size(); ++k) {
        const auto& sc = g.scales()[k];
        if (!(sc.t < I.length)) continue;
        auto [lo, hi] = g.u_range_open(I.center, I.length - sc.t);
        for (std::size_t j = 0; j < sc.eta_count; ++j)
            for (std::size_t i = lo; i < hi; ++i) r.mask[g.index(k, j, i)] = 1;
    }
    return r;
}

TileRegion tent_over_open_set(const OpenSet& E, const TileGridPtr& grid)
{
    TileRegion r(grid, false);
    for (const auto& c : E.components) {
        TileRegion t = spatial_tent(c, grid);
        for (std::size_t i = 0; i < r.mask.size(); ++i) r.mask[i] |= t.mask[i];
    }
    return r;
}

TileRegion box_region(const Interval& P, const TileGridPtr& grid)
{
    TileRegion r(grid, false);
    const TileGrid& g = *grid;
    for (std::size_t k = 0; k < g.scales().size(); ++k) {
        const auto& sc = g.scales()[k];
        if (!(sc.t >= 0.5 * P.length && sc.t < P.length)) continue;
        for (std::size_t i = 0; i < g.u_count(); ++i) {
            double u = g.u(i);
            if (!(u >= P.lo() && u < P.hi())) continue;
            for (std::size_t j = 0; j < sc.eta_count; ++j) r.mask[g.index(k, j, i)] = 1;
        }
    }
    return r;
}

} // namespace vcarl
