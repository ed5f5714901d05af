#include "vcarl/carleson.hpp"

#include <algorithm>
#include <cmath>

namespace vcarl {

void check_variation_exponent(double r)
{
    require(std::isfinite(r) && r > 1.0, ErrorKind::exponent, "variation exponent r must exceed 1");
}

bool exponent_in_theory_range(double r) { return r > 2.0 && std::isfinite(r); }

PartialSumTable::PartialSumTable(const FourierView& view, const FrequencyGrid& grid)
    : m_(grid.size()), n_(view.signal().size())
{
    rows_.resize(m_ * n_);
    for (std::size_t i = 0; i < m_; ++i) {
        std::vector<cplx> row = view.partial_sums_on_grid(grid[i]);
        std::copy(row.begin(), row.end(), rows_.begin() + static_cast<long>(i * n_));
    }
}

std::vector<cplx> PartialSumTable::column(std::size_t k) const
{
    std::vector<cplx> c(m_);
    for (std::size_t i = 0; i < m_; ++i) c[i] = at(i, k);
    return c;
}

std::vector<cplx> partial_sums_at(const FourierView& view, const FrequencyGrid& grid, double x)
{
    std::vector<cplx> P(grid.size());
    double dx = x - view.signal().origin;
    long m = view.min_bin();
    cplx acc(0.0, 0.0);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        long stop = view.first_bin_at_or_above(grid[i]);
        for (; m < stop; ++m) {
            double ph = view.zeta(m) * dx;
            acc += view.local(m) * cplx(std::cos(ph), std::sin(ph));
        }
        P[i] = acc * view.d_zeta();
    }
    return P;
}

double jump_power(const std::vector<cplx>& P, std::size_t i, std::size_t j, double r)
{
    return std::pow(std::abs(P[j] - P[i]), r);
}

namespace {

// (sum |a|^r)^{1/r} scaled by the largest |a|: exact for a single jump, and
// free of the rounding that could otherwise invert monotonicity in r.
double lr_norm(const std::vector<double>& a, double r)
{
    double mx = 0.0;
    for (double v : a) mx = std::max(mx, v);
    if (mx == 0.0) return 0.0;
    double s = 0.0;
    for (double v : a) s += v == mx ? 1.0 : std::pow(v / mx, r);
    return mx * std::pow(s, 1.0 / r);
}

VariationResult finish(const std::vector<cplx>& P, double power_sum, IndexPartition part, double r)
{
    VariationResult res;
    res.power_sum = power_sum;
    std::vector<double> jumps;
    for (std::size_t q = 1; q < part.size(); ++q) jumps.push_back(std::abs(P[part[q]] - P[part[q - 1]]));
    res.value = lr_norm(jumps, r);
    res.partition = std::move(part);
    return res;
}

// Tie order: fewer points first, then lexicographic. A split whose extra jump
// vanishes below rounding never displaces the coarser partition this way.
bool tie_smaller(const IndexPartition& a, const IndexPartition& b)
{
    if (a.size() != b.size()) return a.size() < b.size();
    return a < b;
}

// Compares a+[j] with b+[j] in tie order, where j exceeds every entry.
bool extends_smaller(const IndexPartition& a, const IndexPartition& b)
{
    return tie_smaller(a, b);
}

} // namespace

VariationResult variation_dp(const std::vector<cplx>& P, double r)
{
    check_variation_exponent(r);
    std::size_t m = P.size();
    require(m >= 2, ErrorKind::config, "frequency grid needs at least two points");
    std::vector<double> w(m * m, 0.0);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = i + 1; j < m; ++j) w[i * m + j] = jump_power(P, i, j, r);

    std::vector<double> V(m, 0.0);
    std::vector<IndexPartition> best(m);
    best[0] = {0};
    for (std::size_t j = 1; j < m; ++j) {
        double vj = -1.0;
        std::size_t arg = 0;
        for (std::size_t i = 0; i < j; ++i) {
            double c = V[i] + w[i * m + j];
            if (c > vj) {
                vj = c;
                arg = i;
            } else if (c == vj && extends_smaller(best[i], best[arg])) {
                arg = i;
            }
        }
        V[j] = vj;
        best[j] = best[arg];
        best[j].push_back(static_cast<std::uint16_t>(j));
    }
    return finish(P, V[m - 1], std::move(best[m - 1]), r);
}

double partition_power_sum(const std::vector<cplx>& P, const IndexPartition& part, double r)
{
    double s = 0.0;
    for (std::size_t q = 1; q < part.size(); ++q) s = s + jump_power(P, part[q - 1], part[q], r);
    return s;
}

VariationResult variation_brute_force(const std::vector<cplx>& P, double r)
{
    check_variation_exponent(r);
    std::size_t m = P.size();
    require(m >= 2 && m <= 24, ErrorKind::config, "exhaustive enumeration supports 2..24 grid points");
    std::size_t interior = m - 2;
    double best_val = -1.0;
    IndexPartition best_part;
    IndexPartition part;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << interior); ++mask) {
        part.clear();
        part.push_back(0);
        for (std::size_t b = 0; b < interior; ++b)
            if (mask & (std::uint64_t{1} << b)) part.push_back(static_cast<std::uint16_t>(b + 1));
        part.push_back(static_cast<std::uint16_t>(m - 1));
        double v = partition_power_sum(P, part, r);
        if (v > best_val || (v == best_val && tie_smaller(part, best_part))) {
            best_val = v;
            best_part = part;
        }
    }
    return finish(P, best_val, std::move(best_part), r);
}

double partition_variation_value(const SampledSignal& f, double x, const VariationPartition& P, double r)
{
    check_variation_exponent(r);
    require(P.points.size() >= 2, ErrorKind::config, "partition needs at least two points");
    FourierView view(f);
    std::vector<double> jumps;
    for (std::size_t j = 1; j < P.points.size(); ++j) {
        require(P.points[j] > P.points[j - 1], ErrorKind::ordering, "partition must be strictly increasing");
        jumps.push_back(std::abs(view.partial_integral(P.points[j - 1], P.points[j], x)));
    }
    return lr_norm(jumps, r);
}

VariationResult var_carleson_dp(const SampledSignal& f, double x, const FrequencyGrid& grid, double r)
{
    check_variation_exponent(r);
    require(grid.size() >= 2, ErrorKind::config, "frequency grid needs at least two points");
    FourierView view(f);
    return variation_dp(partial_sums_at(view, grid, x), r);
}

std::vector<VariationResult> var_carleson_all(const SampledSignal& f, const FrequencyGrid& grid, double r)
{
    check_variation_exponent(r);
    require(grid.size() >= 2, ErrorKind::config, "frequency grid needs at least two points");
    FourierView view(f);
    PartialSumTable table(view, grid);
    std::vector<VariationResult> out(f.size());
    for (std::size_t k = 0; k < f.size(); ++k) out[k] = variation_dp(table.column(k), r);
    return out;
}

SampledSignal var_carleson_function(const SampledSignal& f, const FrequencyGrid& grid, double r)
{
    std::vector<VariationResult> all = var_carleson_all(f, grid, r);
    SampledSignal out = SampledSignal::zeros(f.origin, f.spacing, f.size());
    for (std::size_t k = 0; k < f.size(); ++k) out.samples[k] = all[k].value;
    return out;
}

void LinearizationData::validate() const
{
    check_variation_exponent(r);
    require(partitions.size() == coeffs.size(), ErrorKind::config, "linearization size mismatch");
    for (std::size_t k = 0; k < partitions.size(); ++k) {
        const IndexPartition& p = partitions[k];
        require(p.size() >= 2, ErrorKind::config, "linearization partition too short");
        require(coeffs[k].size() + 1 == p.size(), ErrorKind::config, "coefficient count must match partition");
        for (std::size_t q = 0; q < p.size(); ++q) {
            require(p[q] < grid.size(), ErrorKind::config, "partition index outside the grid");
            if (q > 0) require(p[q] > p[q - 1], ErrorKind::config, "partition must be increasing");
        }
    }
}

void normalize_coefficients(std::vector<cplx>& a, double r)
{
    double rp = r / (r - 1.0);
    double s = 0.0;
    for (const cplx& v : a) s += std::pow(std::abs(v), rp);
    if (s == 0.0) {
        if (!a.empty()) a[0] = 1.0;
        return;
    }
    double norm = std::pow(s, 1.0 / rp);
    for (cplx& v : a) v /= norm;
}

LinearizationData argmax_linearization(const SampledSignal& f, const FrequencyGrid& grid, double r,
                                       const SampledSignal* g)
{
    if (g) require(same_grid(f, *g), ErrorKind::grid_mismatch, "f and g must share a grid");
    FourierView view(f);
    PartialSumTable table(view, grid);
    LinearizationData L;
    L.grid = grid;
    L.r = r;
    L.partitions.resize(f.size());
    L.coeffs.resize(f.size());
    for (std::size_t k = 0; k < f.size(); ++k) {
        std::vector<cplx> P = table.column(k);
        VariationResult res = variation_dp(P, r);
        std::vector<cplx> a(res.partition.size() - 1);
        cplx twist(1.0, 0.0);
        if (g && std::abs(g->samples[k]) > 0.0) twist = std::conj(g->samples[k]) / std::abs(g->samples[k]);
        for (std::size_t q = 1; q < res.partition.size(); ++q) {
            cplx S = P[res.partition[q]] - P[res.partition[q - 1]];
            double m = std::abs(S);
            if (res.value > 0.0 && m > 0.0) a[q - 1] = std::pow(m / res.value, r - 1.0) * std::conj(S) / m * twist;
        }
        normalize_coefficients(a, r);
        L.partitions[k] = std::move(res.partition);
        L.coeffs[k] = std::move(a);
    }
    return L;
}

LinearizationData random_linearization(const FrequencyGrid& grid, std::size_t samples, double r,
                                       std::mt19937_64& rng)
{
    check_variation_exponent(r);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    LinearizationData L;
    L.grid = grid;
    L.r = r;
    L.partitions.resize(samples);
    L.coeffs.resize(samples);
    std::size_t m = grid.size();
    for (std::size_t k = 0; k < samples; ++k) {
        IndexPartition p{0};
        for (std::size_t i = 1; i + 1 < m; ++i)
            if (U(rng) < 0.4) p.push_back(static_cast<std::uint16_t>(i));
        p.push_back(static_cast<std::uint16_t>(m - 1));
        std::vector<cplx> a(p.size() - 1);
        for (cplx& v : a) v = std::polar(U(rng), 2.0 * kPi * U(rng));
        normalize_coefficients(a, r);
        L.partitions[k] = std::move(p);
        L.coeffs[k] = std::move(a);
    }
    return L;
}

cplx linearized_form(const SampledSignal& f, const SampledSignal& g, const LinearizationData& L, double r)
{
    check_variation_exponent(r);
    require(same_grid(f, g), ErrorKind::grid_mismatch, "f and g must share a grid");
    require(L.sample_count() == f.size(), ErrorKind::grid_mismatch, "linearization does not match the grid");
    L.validate();
    FourierView view(f);
    PartialSumTable table(view, L.grid);
    cplx acc(0.0, 0.0);
    for (std::size_t k = 0; k < f.size(); ++k) {
        if (g.samples[k] == cplx(0.0, 0.0)) continue;
        const IndexPartition& p = L.partitions[k];
        cplx s(0.0, 0.0);
        for (std::size_t q = 1; q < p.size(); ++q) s += L.coeffs[k][q - 1] * table.jump(p[q - 1], p[q], k);
        acc += g.samples[k] * s;
    }
    return acc * f.spacing;
}

double dual_pairing(const SampledSignal& Crf, const SampledSignal& g)
{
    require(same_grid(Crf, g), ErrorKind::grid_mismatch, "f and g must share a grid");
    double s = 0.0;
    for (std::size_t k = 0; k < g.size(); ++k) s += Crf.samples[k].real() * std::abs(g.samples[k]);
    return s * g.spacing;
}

double dual_pairing(const SampledSignal& f, const SampledSignal& g, const FrequencyGrid& grid, double r)
{
    require(same_grid(f, g), ErrorKind::grid_mismatch, "f and g must share a grid");
    return dual_pairing(var_carleson_function(f, grid, r), g);
}

} // namespace vcarl
