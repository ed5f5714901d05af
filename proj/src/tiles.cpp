#include "vcarl/tiles.hpp"

#include <algorithm>
#include <cmath>

namespace vcarl {

TileGrid::TileGrid(double u0, double du, std::size_t u_count, const std::vector<double>& scales,
                   const std::vector<double>& dts, double c_eta, double eta_lo, double eta_hi)
    : u0_(u0), du_(du), u_count_(u_count), c_eta_(c_eta), eta_lo_(eta_lo), eta_hi_(eta_hi)
{
    require(du > 0.0, ErrorKind::config, "tile grid u step must be positive");
    require(c_eta > 0.0, ErrorKind::config, "tile grid c_eta must be positive");
    require(scales.size() == dts.size(), ErrorKind::config, "scale and weight lists differ in length");
    require(eta_hi >= eta_lo, ErrorKind::ordering, "tile grid eta range out of order");
    std::size_t off = 0;
    for (std::size_t k = 0; k < scales.size(); ++k) {
        require(scales[k] > 0.0 && dts[k] > 0.0, ErrorKind::config, "tile scales and weights must be positive");
        if (k > 0) require(scales[k] < scales[k - 1], ErrorKind::config, "tile scales must decrease");
        Scale s;
        s.t = scales[k];
        s.dt = dts[k];
        s.d_eta = c_eta / s.t;
        long j0 = static_cast<long>(std::ceil(eta_lo / s.d_eta - 1e-9));
        long j1 = static_cast<long>(std::floor(eta_hi / s.d_eta + 1e-9));
        s.eta_first = j0;
        s.eta_count = j1 >= j0 ? static_cast<std::size_t>(j1 - j0 + 1) : 0;
        s.offset = off;
        off += s.eta_count * u_count_;
        scales_.push_back(s);
    }
    total_ = off;
}

Tile TileGrid::tile(std::size_t idx) const
{
    std::size_t k = 0;
    while (k + 1 < scales_.size() && scales_[k + 1].offset <= idx) ++k;
    std::size_t rem = idx - scales_[k].offset;
    return tile(k, rem / u_count_, rem % u_count_);
}

std::pair<std::size_t, std::size_t> TileGrid::u_range_open(double c, double h) const
{
    if (h <= 0.0 || u_count_ == 0) return {0, 0};
    double a = (c - h - u0_) / du_;
    double b = (c + h - u0_) / du_;
    long lo = static_cast<long>(std::floor(a)) - 1;
    long hi = static_cast<long>(std::ceil(b)) + 1;
    lo = std::max<long>(lo, 0);
    hi = std::min<long>(hi, static_cast<long>(u_count_));
    if (hi <= lo) return {0, 0};
    while (lo < hi && !(std::abs(u(static_cast<std::size_t>(lo)) - c) < h)) ++lo;
    while (hi > lo && !(std::abs(u(static_cast<std::size_t>(hi - 1)) - c) < h)) --hi;
    return {static_cast<std::size_t>(lo), static_cast<std::size_t>(hi)};
}

bool TileGrid::operator==(const TileGrid& o) const
{
    if (u0_ != o.u0_ || du_ != o.du_ || u_count_ != o.u_count_ || c_eta_ != o.c_eta_) return false;
    if (scales_.size() != o.scales_.size()) return false;
    for (std::size_t k = 0; k < scales_.size(); ++k) {
        const Scale &a = scales_[k], &b = o.scales_[k];
        if (a.t != b.t || a.dt != b.dt || a.eta_first != b.eta_first || a.eta_count != b.eta_count) return false;
    }
    return true;
}

void TileField::validate() const
{
    require(grid != nullptr, ErrorKind::grid_mismatch, "tile field has no grid");
    require(values.size() == grid->tile_count(), ErrorKind::grid_mismatch, "tile field size does not match grid");
    for (double v : values) require(std::isfinite(v), ErrorKind::assertion, "tile field value not finite");
}

std::size_t TileRegion::count() const
{
    std::size_t c = 0;
    for (auto m : mask) c += m ? 1 : 0;
    return c;
}

TileRegion TileRegion::complement() const
{
    TileRegion r = *this;
    for (auto& m : r.mask) m = m ? 0 : 1;
    return r;
}

TileRegion TileRegion::minus(const TileRegion& o) const
{
    require(same_tile_grid(grid, o.grid), ErrorKind::grid_mismatch, "regions on different grids");
    TileRegion r = *this;
    for (std::size_t i = 0; i < r.mask.size(); ++i) r.mask[i] = (mask[i] && !o.mask[i]) ? 1 : 0;
    return r;
}

TileRegion TileRegion::unite(const TileRegion& o) const
{
    require(same_tile_grid(grid, o.grid), ErrorKind::grid_mismatch, "regions on different grids");
    TileRegion r = *this;
    for (std::size_t i = 0; i < r.mask.size(); ++i) r.mask[i] = (mask[i] || o.mask[i]) ? 1 : 0;
    return r;
}

bool same_tile_grid(const TileGridPtr& a, const TileGridPtr& b)
{
    if (!a || !b) return false;
    return a == b || *a == *b;
}

double resolvable_scale(double spacing, const WavePacketParams& p)
{
    return std::max(2.0 * spacing, p.b * spacing / (2.0 * kPi));
}

TileGridPtr embedding_grid(const SampledSignal& f, const Interval& Q, const WavePacketParams& p,
                           const EmbeddingGridSpec& spec, double eta_lo, double eta_hi)
{
    const double dx = f.spacing;
    double du = dx;
    if (spec.u_per_length > 0) {
        double target = Q.length / static_cast<double>(spec.u_per_length);
        while (2.0 * du <= target) du *= 2.0;
    }
    // u lattice x0 + m du covering (c - |Q|, c + |Q|)
    double m_lo = std::floor((Q.center - Q.length - f.origin) / du);
    double m_hi = std::ceil((Q.center + Q.length - f.origin) / du);
    double u0 = f.origin + m_lo * du;
    std::size_t count = static_cast<std::size_t>(m_hi - m_lo) + 1;

    double tres = resolvable_scale(dx, p);
    std::vector<double> ts, dts;
    double t = dx;
    while (t < Q.length) t *= 2.0;
    t /= 2.0;
    while (t >= tres && t < Q.length && ts.size() < spec.max_scales) {
        ts.push_back(t);
        dts.push_back(t * std::log(2.0));
        t /= 2.0;
    }
    return std::make_shared<const TileGrid>(u0, du, count, ts, dts, spec.c_eta, eta_lo, eta_hi);
}

TileGridPtr reconstruction_grid(double t_lo, double t_hi, double ratio, double c_eta, double eta_lo, double eta_hi)
{
    require(ratio > 0.0 && ratio < 1.0, ErrorKind::config, "reconstruction scale ratio must lie in (0,1)");
    require(t_hi > t_lo && t_lo > 0.0, ErrorKind::config, "reconstruction scale range invalid");
    std::vector<double> ts, dts;
    double w = std::log(1.0 / ratio);
    for (double t = t_hi; t >= t_lo; t *= ratio) {
        ts.push_back(t);
        dts.push_back(t * w);
    }
    return std::make_shared<const TileGrid>(0.0, 1.0, 1, ts, dts, c_eta, eta_lo, eta_hi);
}

} // namespace vcarl
