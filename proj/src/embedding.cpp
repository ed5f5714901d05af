#include "vcarl/embedding.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace vcarl {

void check_resolvable(double t, double spacing, const WavePacketParams& p)
{
    require(t >= resolvable_scale(spacing, p), ErrorKind::scale,
            "tile scale " + std::to_string(t) + " is not resolvable on spacing " + std::to_string(spacing));
}

namespace {

// Cut-off in units of t used by the direct spatial sums.
double direct_reach(const MotherWavelet& w) { return w.spatial_cutoff(); }

std::pair<long, long> sample_window(const SampledSignal& f, double c, double h)
{
    long n = static_cast<long>(f.size());
    long lo = static_cast<long>(std::floor((c - h - f.origin) / f.spacing));
    long hi = static_cast<long>(std::ceil((c + h - f.origin) / f.spacing)) + 1;
    return {std::max<long>(lo, 0), std::min<long>(hi, n)};
}

// FFT length so that the periodic images of the signal stay far from every u.
std::size_t field_pad(const SampledSignal& f, const TileGrid& g)
{
    double t_max = g.scales().empty() ? 0.0 : g.scales().front().t;
    double x_lo = f.origin, x_hi = f.x(f.size() - 1);
    double u_lo = g.u0(), u_hi = g.u(g.u_count() - 1);
    double span = std::max(u_hi - x_lo, x_hi - u_lo);
    span = std::max(span, std::max(x_hi - x_lo, u_hi - u_lo));
    double need = span + 8.0 * t_max + 2.0 * f.spacing;
    std::size_t pad = 1;
    while (static_cast<double>(pad * f.size()) * f.spacing < need) pad *= 2;
    return std::max<std::size_t>(pad, 2);
}

struct Folder {
    std::size_t n_fft = 0;
    std::size_t q = 1;   // du / dx
    std::size_t lu = 0;  // folded length n_fft / q
    long offset = 0;     // (u0 - x0) / dx
    std::vector<cplx> unit; // e^{2 pi i k / n_fft}

    bool init(const SampledSignal& f, const TileGrid& g, std::size_t nfft)
    {
        n_fft = nfft;
        double qd = g.du() / f.spacing;
        double od = (g.u0() - f.origin) / f.spacing;
        if (std::abs(qd - std::round(qd)) > 1e-9 || std::abs(od - std::round(od)) > 1e-6) return false;
        q = static_cast<std::size_t>(std::llround(qd));
        offset = std::llround(od);
        if (q == 0 || n_fft % q != 0) return false;
        lu = n_fft / q;
        if (g.u_count() > lu) return false;
        unit.resize(n_fft);
        for (std::size_t k = 0; k < n_fft; ++k) {
            double a = 2.0 * kPi * static_cast<double>(k) / static_cast<double>(n_fft);
            unit[k] = cplx(std::cos(a), std::sin(a));
        }
        return true;
    }
    cplx phase(long m) const
    {
        long N = static_cast<long>(n_fft);
        long r = static_cast<long>((static_cast<__int128>(m) * offset) % N);
        if (r < 0) r += N;
        return unit[static_cast<std::size_t>(r)];
    }
    std::size_t slot(long m) const
    {
        long L = static_cast<long>(lu);
        long r = m % L;
        return static_cast<std::size_t>(r < 0 ? r + L : r);
    }
};

} // namespace

double embed_F(const SampledSignal& f, const Tile& tile, const WavePacketParams& p)
{
    check_resolvable(tile.t, f.spacing, p);
    auto w = wavelet_for(p);
    FourierView v(f);
    double hs = p.half_support() / tile.t;
    long m0 = v.first_bin_at_or_above(tile.eta - hs);
    long m1 = v.first_bin_at_or_above(tile.eta + hs);
    double dxu = tile.u - f.origin;
    cplx acc(0.0, 0.0);
    for (long m = m0; m < m1; ++m) {
        double ph = w->psi_hat(tile.t * (v.zeta(m) - tile.eta));
        if (ph == 0.0) continue;
        double a = v.zeta(m) * dxu;
        acc += v.local(m) * ph * cplx(std::cos(a), std::sin(a));
    }
    return std::abs(acc) * v.d_zeta() / (2.0 * kPi);
}

double embed_F_direct(const SampledSignal& f, const Tile& tile, const WavePacketParams& p)
{
    check_resolvable(tile.t, f.spacing, p);
    auto w = wavelet_for(p);
    auto [lo, hi] = sample_window(f, tile.u, direct_reach(*w) * tile.t);
    cplx acc(0.0, 0.0);
    for (long k = lo; k < hi; ++k) {
        const cplx& s = f.samples[static_cast<std::size_t>(k)];
        if (s == cplx(0.0, 0.0)) continue;
        acc += s * w->packet(tile.t, tile.eta, tile.u - f.x(k));
    }
    return std::abs(acc) * f.spacing;
}

TileField embed_F_direct_field(const SampledSignal& f, const TileGridPtr& grid, const WavePacketParams& p)
{
    TileField F(grid);
    const TileGrid& g = *grid;
    for (const auto& s : g.scales()) check_resolvable(s.t, f.spacing, p);
    auto w = wavelet_for(p);
    std::vector<cplx> base;
    for (std::size_t k = 0; k < g.scales().size(); ++k) {
        const auto& sc = g.scales()[k];
        for (std::size_t i = 0; i < g.u_count(); ++i) {
            double u = g.u(i);
            auto [lo, hi] = sample_window(f, u, direct_reach(*w) * sc.t);
            if (lo >= hi) continue;
            // f_k psi((u - x_k)/t)/t, then the modulation e^{i eta (u - x_k)} by recurrence
            base.assign(static_cast<std::size_t>(hi - lo), cplx(0.0, 0.0));
            bool any = false;
            for (long q = lo; q < hi; ++q) {
                const cplx& s = f.samples[static_cast<std::size_t>(q)];
                if (s == cplx(0.0, 0.0)) continue;
                double ps = w->psi((u - f.x(q)) / sc.t);
                if (ps == 0.0) continue;
                base[static_cast<std::size_t>(q - lo)] = s * (ps / sc.t);
                any = true;
            }
            if (!any) continue;
            for (std::size_t j = 0; j < sc.eta_count; ++j) {
                double eta = sc.eta(j);
                cplx ph = std::polar(1.0, eta * (u - f.x(lo)));
                cplx step = std::polar(1.0, -eta * f.spacing);
                cplx acc(0.0, 0.0);
                for (std::size_t q = 0; q < base.size(); ++q) {
                    if ((q & 63) == 0) ph = std::polar(1.0, eta * (u - f.x(lo + static_cast<long>(q))));
                    acc += base[q] * ph;
                    ph *= step;
                }
                F.values[g.index(k, j, i)] = std::abs(acc) * f.spacing;
            }
        }
    }
    return F;
}

TileField embed_F_field(const SampledSignal& f, const TileGridPtr& grid, const WavePacketParams& p)
{
    const TileGrid& g = *grid;
    TileField F(grid);
    if (g.tile_count() == 0) return F;
    for (const auto& s : g.scales()) check_resolvable(s.t, f.spacing, p);
    auto w = wavelet_for(p);
    FourierView v(f, field_pad(f, g));
    Folder fold;
    if (!fold.init(f, g, v.fft_size())) {
        for (std::size_t k = 0; k < g.scales().size(); ++k)
            for (std::size_t j = 0; j < g.scales()[k].eta_count; ++j)
                for (std::size_t i = 0; i < g.u_count(); ++i)
                    F.values[g.index(k, j, i)] = embed_F(f, g.tile(k, j, i), p);
        return F;
    }
    const double scale = v.d_zeta() / (2.0 * kPi);
    std::vector<cplx> Y(fold.lu);
    for (std::size_t k = 0; k < g.scales().size(); ++k) {
        const auto& sc = g.scales()[k];
        double hs = p.half_support() / sc.t;
        for (std::size_t j = 0; j < sc.eta_count; ++j) {
            double eta = sc.eta(j);
            std::fill(Y.begin(), Y.end(), cplx(0.0, 0.0));
            long m0 = v.first_bin_at_or_above(eta - hs);
            long m1 = v.first_bin_at_or_above(eta + hs);
            bool any = false;
            for (long m = m0; m < m1; ++m) {
                double ph = w->psi_hat(sc.t * (v.zeta(m) - eta));
                if (ph == 0.0) continue;
                Y[fold.slot(m)] += v.local(m) * ph * fold.phase(m);
                any = true;
            }
            if (!any) continue;
            fft_backward(Y);
            for (std::size_t i = 0; i < g.u_count(); ++i) F.values[g.index(k, j, i)] = std::abs(Y[i]) * scale;
        }
    }
    return F;
}

namespace {

cplx a_integrand_weight(const MotherWavelet& w, const LinearizationData& L, std::size_t k, double t, double eta)
{
    const IndexPartition& part = L.partitions[k];
    cplx s(0.0, 0.0);
    for (std::size_t q = 1; q < part.size(); ++q) {
        double lo = L.grid[part[q - 1]], hi = L.grid[part[q]];
        if (!(eta > lo && eta < hi)) continue;
        double wt = w.truncation_weight(t, eta, lo, hi);
        if (wt != 0.0) s += L.coeffs[k][q - 1] * wt;
    }
    return s;
}

void check_linearization(const SampledSignal& g, const LinearizationData& L)
{
    require(L.sample_count() == g.size(), ErrorKind::grid_mismatch, "linearization does not match the grid of g");
    L.validate();
}

} // namespace

double embed_A(const SampledSignal& g, const Tile& tile, const LinearizationData& L, const WavePacketParams& p)
{
    check_resolvable(tile.t, g.spacing, p);
    check_linearization(g, L);
    auto w = wavelet_for(p);
    auto [lo, hi] = sample_window(g, tile.u, direct_reach(*w) * tile.t);
    cplx acc(0.0, 0.0);
    for (long k = lo; k < hi; ++k) {
        const cplx& s = g.samples[static_cast<std::size_t>(k)];
        if (s == cplx(0.0, 0.0)) continue;
        cplx a = a_integrand_weight(*w, L, static_cast<std::size_t>(k), tile.t, tile.eta);
        if (a == cplx(0.0, 0.0)) continue;
        acc += s * a * w->packet(tile.t, tile.eta, g.x(k) - tile.u);
    }
    return std::abs(acc) * g.spacing;
}

TileField embed_A_direct_field(const SampledSignal& g, const LinearizationData& L, const TileGridPtr& grid,
                               const WavePacketParams& p)
{
    check_linearization(g, L);
    TileField A(grid);
    const TileGrid& tg = *grid;
    for (const auto& s : tg.scales()) check_resolvable(s.t, g.spacing, p);
    auto w = wavelet_for(p);
    std::vector<cplx> base;
    for (std::size_t k = 0; k < tg.scales().size(); ++k) {
        const auto& sc = tg.scales()[k];
        for (std::size_t i = 0; i < tg.u_count(); ++i) {
            double u = tg.u(i);
            auto [lo, hi] = sample_window(g, u, direct_reach(*w) * sc.t);
            if (lo >= hi) continue;
            base.assign(static_cast<std::size_t>(hi - lo), cplx(0.0, 0.0));
            bool any = false;
            for (long q = lo; q < hi; ++q) {
                const cplx& s = g.samples[static_cast<std::size_t>(q)];
                if (s == cplx(0.0, 0.0)) continue;
                double ps = w->psi((g.x(q) - u) / sc.t);
                if (ps == 0.0) continue;
                base[static_cast<std::size_t>(q - lo)] = s * (ps / sc.t);
                any = true;
            }
            if (!any) continue;
            for (std::size_t j = 0; j < sc.eta_count; ++j) {
                double eta = sc.eta(j);
                cplx ph = std::polar(1.0, eta * (g.x(lo) - u));
                cplx step = std::polar(1.0, eta * g.spacing);
                cplx acc(0.0, 0.0);
                for (std::size_t q = 0; q < base.size(); ++q) {
                    if ((q & 63) == 0) ph = std::polar(1.0, eta * (g.x(lo + static_cast<long>(q)) - u));
                    if (base[q] != cplx(0.0, 0.0)) {
                        cplx a = a_integrand_weight(*w, L, static_cast<std::size_t>(lo) + q, sc.t, eta);
                        acc += base[q] * a * ph;
                    }
                    ph *= step;
                }
                A.values[tg.index(k, j, i)] = std::abs(acc) * g.spacing;
            }
        }
    }
    return A;
}

TileField embed_A_field(const SampledSignal& g, const LinearizationData& L, const TileGridPtr& grid,
                        const WavePacketParams& p)
{
    check_linearization(g, L);
    const TileGrid& tg = *grid;
    TileField A(grid);
    if (tg.tile_count() == 0) return A;
    for (const auto& s : tg.scales()) check_resolvable(s.t, g.spacing, p);
    auto w = wavelet_for(p);

    // Split g sum_j a_j 1[(lo,hi) = (xi_{j-1}(x), xi_j(x))] by interval.
    std::map<std::pair<int, int>, std::size_t> pair_index;
    std::vector<std::pair<int, int>> pairs;
    std::vector<SampledSignal> parts;
    for (std::size_t k = 0; k < g.size(); ++k) {
        if (g.samples[k] == cplx(0.0, 0.0)) continue;
        const IndexPartition& part = L.partitions[k];
        for (std::size_t q = 1; q < part.size(); ++q) {
            cplx a = L.coeffs[k][q - 1];
            if (a == cplx(0.0, 0.0)) continue;
            auto key = std::make_pair(static_cast<int>(part[q - 1]), static_cast<int>(part[q]));
            auto it = pair_index.find(key);
            if (it == pair_index.end()) {
                it = pair_index.emplace(key, pairs.size()).first;
                pairs.push_back(key);
                parts.push_back(SampledSignal::zeros(g.origin, g.spacing, g.size()));
            }
            parts[it->second].samples[k] += g.samples[k] * a;
        }
    }
    if (pairs.empty()) return A;

    std::size_t pad = field_pad(g, tg);
    std::vector<FourierView> views;
    views.reserve(parts.size());
    for (const auto& s : parts) views.emplace_back(s, pad);
    const FourierView& v0 = views.front();
    Folder fold;
    if (!fold.init(g, tg, v0.fft_size())) return embed_A_direct_field(g, L, grid, p);

    const double scale = v0.d_zeta() / (2.0 * kPi);
    std::vector<cplx> Y(fold.lu);
    std::vector<std::pair<std::size_t, double>> active;
    for (std::size_t k = 0; k < tg.scales().size(); ++k) {
        const auto& sc = tg.scales()[k];
        double hs = p.half_support() / sc.t;
        for (std::size_t j = 0; j < sc.eta_count; ++j) {
            double eta = sc.eta(j);
            active.clear();
            for (std::size_t q = 0; q < pairs.size(); ++q) {
                double lo = L.grid[static_cast<std::size_t>(pairs[q].first)];
                double hi = L.grid[static_cast<std::size_t>(pairs[q].second)];
                if (!(eta > lo && eta < hi)) continue;
                double wt = w->truncation_weight(sc.t, eta, lo, hi);
                if (wt != 0.0) active.emplace_back(q, wt);
            }
            if (active.empty()) continue;
            std::fill(Y.begin(), Y.end(), cplx(0.0, 0.0));
            long m0 = v0.first_bin_at_or_above(-eta - hs);
            long m1 = v0.first_bin_at_or_above(-eta + hs);
            for (long m = m0; m < m1; ++m) {
                double ph = w->psi_hat(sc.t * (v0.zeta(m) + eta));
                if (ph == 0.0) continue;
                cplx x(0.0, 0.0);
                for (const auto& [q, wt] : active) x += views[q].local(m) * wt;
                Y[fold.slot(m)] += x * ph * fold.phase(m);
            }
            fft_backward(Y);
            for (std::size_t i = 0; i < tg.u_count(); ++i) A.values[tg.index(k, j, i)] = std::abs(Y[i]) * scale;
        }
    }
    return A;
}

double bilinear_form_B(const TileField& F, const TileField& A, const TileRegion* region)
{
    require(same_tile_grid(F.grid, A.grid), ErrorKind::grid_mismatch, "fields live on different tile grids");
    if (region) require(same_tile_grid(F.grid, region->grid), ErrorKind::grid_mismatch, "region on another grid");
    const TileGrid& g = *F.grid;
    double total = 0.0;
    for (std::size_t k = 0; k < g.scales().size(); ++k) {
        const auto& sc = g.scales()[k];
        double acc = 0.0;
        std::size_t n = sc.eta_count * g.u_count();
        for (std::size_t q = 0; q < n; ++q) {
            std::size_t idx = sc.offset + q;
            if (region && !region->mask[idx]) continue;
            acc += F.values[idx] * A.values[idx];
        }
        total += acc * g.weight(k);
    }
    return total;
}

cplx multiplier_reconstruction(double xi_minus, double xi_plus, double zeta, const TileGrid& grid,
                               const WavePacketParams& p)
{
    require(xi_minus < xi_plus, ErrorKind::ordering, "reconstruction needs xi_minus < xi_plus");
    auto w = wavelet_for(p);
    bool mirrored = (xi_minus == -kInf);
    double anchor = mirrored ? xi_plus : xi_minus;
    double acc = 0.0;
    for (const auto& sc : grid.scales()) {
        // chi window in eta
        double a = mirrored ? anchor - (p.d + p.eps) / sc.t : anchor + (p.d - p.eps) / sc.t;
        double b = mirrored ? anchor - (p.d - p.eps) / sc.t : anchor + (p.d + p.eps) / sc.t;
        double hs = p.half_support() / sc.t;
        a = std::max(a, zeta - hs);
        b = std::min(b, zeta + hs);
        if (b <= a) continue;
        long j0 = std::max<long>(static_cast<long>(std::ceil(a / sc.d_eta)), sc.eta_first);
        long j1 = std::min<long>(static_cast<long>(std::floor(b / sc.d_eta)),
                                 sc.eta_first + static_cast<long>(sc.eta_count) - 1);
        double s = 0.0;
        for (long j = j0; j <= j1; ++j) {
            double eta = sc.d_eta * static_cast<double>(j);
            double ph = w->psi_hat(sc.t * (zeta - eta));
            if (ph == 0.0) continue;
            s += ph * w->truncation_weight(sc.t, eta, xi_minus, xi_plus);
        }
        acc += s * sc.dt * sc.d_eta;
    }
    return cplx(acc, 0.0);
}

TileGridPtr reconstruction_grid_for(double xi_minus, double xi_plus, const WavePacketParams& p,
                                    const ReconstructionSpec& spec)
{
    require(xi_minus < xi_plus, ErrorKind::ordering, "reconstruction needs xi_minus < xi_plus");
    require(!(xi_minus == -kInf && xi_plus == kInf), ErrorKind::config, "at least one cut must be finite");
    double lo = spec.t_min;
    double width = xi_plus - xi_minus;
    if (std::isfinite(width)) lo = std::max(lo, (p.d - p.eps - p.half_support()) / (2.0 * width));
    if (!(lo > 0.0) || !(spec.t_max > lo)) return nullptr;
    double anchor_lo = std::isfinite(xi_minus) ? xi_minus : xi_plus;
    double anchor_hi = std::isfinite(xi_plus) ? xi_plus : xi_minus;
    double reach = (p.d + p.eps + p.b) / lo + (std::isfinite(width) ? 4.0 * width : 0.0);
    return reconstruction_grid(lo, spec.t_max, spec.ratio, spec.c_eta, anchor_lo - reach, anchor_hi + reach);
}

bool reconstruction_resolved(double xi_minus, double xi_plus, double zeta, const TileGrid& grid,
                             const WavePacketParams& p)
{
    if (grid.scales().empty()) return false;
    bool mirrored = (xi_minus == -kInf);
    double s = mirrored ? xi_plus - zeta : zeta - xi_minus;
    if (s <= 0.0) return true; // exactly zero there by support
    double t_need_lo = (p.d - p.eps - p.half_support()) / s;
    double t_need_hi = (p.d + p.eps + p.half_support()) / s;
    double t_max = grid.scales().front().t, t_min = grid.scales().back().t;
    if (t_need_hi > t_max || t_need_lo < t_min) return false;
    // the eta lattice must resolve the chi window
    double ratio = grid.scales().size() > 1 ? grid.scales()[1].t / t_max : 0.5;
    return grid.c_eta() <= p.eps && ratio >= 0.5;
}

} // namespace vcarl
