#include "vcarl/signal.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

namespace vcarl {

void SampledSignal::validate() const
{
    require(std::isfinite(origin), ErrorKind::input, "signal origin is not finite");
    require(std::isfinite(spacing) && spacing > 0.0, ErrorKind::input, "signal spacing must be positive");
    require(!samples.empty(), ErrorKind::input, "signal has no samples");
    for (const cplx& v : samples)
        require(std::isfinite(v.real()) && std::isfinite(v.imag()), ErrorKind::input,
                "signal contains a non-finite sample");
}

SampledSignal SampledSignal::zeros(double origin, double spacing, std::size_t n)
{
    SampledSignal s;
    s.origin = origin;
    s.spacing = spacing;
    s.samples.assign(n, cplx(0.0, 0.0));
    return s;
}

bool same_grid(const SampledSignal& a, const SampledSignal& b)
{
    return a.size() == b.size() && a.spacing == b.spacing && a.origin == b.origin;
}

Interval cell_interval(double origin, double spacing, CellRange c)
{
    double a = origin + (static_cast<double>(c.lo) - 0.5) * spacing;
    double b = origin + (static_cast<double>(c.hi) - 0.5) * spacing;
    return Interval::from_endpoints(a, b);
}

Interval cell_interval(const SampledSignal& f, CellRange c) { return cell_interval(f.origin, f.spacing, c); }

SampledSignal restricted(const SampledSignal& f, CellRange c)
{
    SampledSignal out = f;
    long n = static_cast<long>(f.size());
    for (long k = 0; k < n; ++k)
        if (!c.contains(k)) out.samples[static_cast<std::size_t>(k)] = cplx(0.0, 0.0);
    return out;
}

FrequencyGrid::FrequencyGrid(std::vector<double> points) : pts_(std::move(points))
{
    for (double p : pts_) require(std::isfinite(p), ErrorKind::config, "frequency grid point is not finite");
    for (std::size_t i = 1; i < pts_.size(); ++i)
        require(pts_[i] > pts_[i - 1], ErrorKind::config, "frequency grid must be strictly increasing");
}

FrequencyGrid FrequencyGrid::uniform(double lo, double hi, std::size_t m)
{
    require(m >= 2, ErrorKind::config, "frequency grid needs at least two points");
    require(hi > lo, ErrorKind::ordering, "frequency grid bounds out of order");
    std::vector<double> p(m);
    for (std::size_t i = 0; i < m; ++i)
        p[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(m - 1);
    return FrequencyGrid(std::move(p));
}

FrequencyGrid FrequencyGrid::with_midpoints() const
{
    std::vector<double> p;
    for (std::size_t i = 0; i < pts_.size(); ++i) {
        if (i > 0) p.push_back(0.5 * (pts_[i - 1] + pts_[i]));
        p.push_back(pts_[i]);
    }
    return FrequencyGrid(std::move(p));
}

FourierView::FourierView(const SampledSignal& f, std::size_t pad) : f_(f)
{
    f.validate();
    require(pad >= 1, ErrorKind::config, "fft padding factor must be at least 1");
    n_fft_ = next_pow2(pad * f.size());
    if (n_fft_ < 2) n_fft_ = 2;
    dzeta_ = 2.0 * kPi / (static_cast<double>(n_fft_) * f.spacing);
    local_.assign(n_fft_, cplx(0.0, 0.0));
    std::copy(f.samples.begin(), f.samples.end(), local_.begin());
    fft_forward(local_);
    for (cplx& v : local_) v *= f.spacing;
}

cplx FourierView::hat(long m) const
{
    double ph = -zeta(m) * f_.origin;
    return local(m) * cplx(std::cos(ph), std::sin(ph));
}

long FourierView::first_bin_at_or_above(double xi) const
{
    if (xi == -kInf) return min_bin();
    if (xi == kInf) return max_bin() + 1;
    double q = xi / dzeta_;
    if (q <= static_cast<double>(min_bin())) return min_bin();
    if (q > static_cast<double>(max_bin())) return max_bin() + 1;
    long m = static_cast<long>(std::ceil(q));
    while (m > min_bin() && zeta(m - 1) >= xi) --m;
    while (m <= max_bin() && zeta(m) < xi) ++m;
    return m;
}

cplx FourierView::partial_integral(double a, double b, double x) const
{
    require(a < b, ErrorKind::ordering, "partial Fourier integral needs xi_minus < xi_plus");
    long m0 = first_bin_at_or_above(a);
    long m1 = first_bin_at_or_above(b);
    double dx = x - f_.origin;
    cplx acc(0.0, 0.0);
    for (long m = m0; m < m1; ++m) {
        double ph = zeta(m) * dx;
        acc += local(m) * cplx(std::cos(ph), std::sin(ph));
    }
    return acc * dzeta_;
}

std::vector<cplx> FourierView::partial_sums_on_grid(double xi) const
{
    long m1 = first_bin_at_or_above(xi);
    std::vector<cplx> buf(n_fft_, cplx(0.0, 0.0));
    for (long m = min_bin(); m < m1; ++m) buf[wrap(m)] = local(m);
    fft_backward(buf);
    std::vector<cplx> out(f_.size());
    for (std::size_t k = 0; k < out.size(); ++k) out[k] = buf[k] * dzeta_;
    return out;
}

std::vector<SpectrumPoint> spectrum(const SampledSignal& f, std::size_t pad)
{
    FourierView v(f, pad);
    std::vector<SpectrumPoint> out;
    out.reserve(v.fft_size());
    for (long m = v.min_bin(); m <= v.max_bin(); ++m) out.push_back({v.zeta(m), v.hat(m)});
    return out;
}

cplx partial_fourier_integral(const SampledSignal& f, double xi_minus, double xi_plus, double x)
{
    require(xi_minus < xi_plus, ErrorKind::ordering, "partial Fourier integral needs xi_minus < xi_plus");
    return FourierView(f).partial_integral(xi_minus, xi_plus, x);
}

namespace {

std::vector<double> abs_pow(const SampledSignal& f, double p)
{
    std::vector<double> g(f.size());
    for (std::size_t k = 0; k < g.size(); ++k) {
        double a = std::abs(f.samples[k]);
        g[k] = (p == 1.0) ? a : std::pow(a, p);
    }
    return g;
}

// Cumulative integral of the piecewise linear interpolant of the
// zero-extended sequence g, evaluated at sample indices.
struct Cumulative {
    std::vector<double> prefix; // prefix[j] = sum_{k<j} g_k
    const std::vector<double>* g;
    double dx;

    Cumulative(const std::vector<double>& values, double spacing) : g(&values), dx(spacing)
    {
        prefix.assign(values.size() + 1, 0.0);
        for (std::size_t k = 0; k < values.size(); ++k) prefix[k + 1] = prefix[k] + values[k];
    }
    double value(long k) const
    {
        long n = static_cast<long>(g->size());
        return (k >= 0 && k < n) ? (*g)[static_cast<std::size_t>(k)] : 0.0;
    }
    double at_index(long j) const
    {
        long n = static_cast<long>(g->size());
        if (j < 0) return 0.0;
        if (j >= n) return dx * prefix[static_cast<std::size_t>(n)];
        return dx * (prefix[static_cast<std::size_t>(j)] + 0.5 * value(j));
    }
    double at(double s) const
    {
        double fl = std::floor(s);
        long j = static_cast<long>(fl);
        double th = s - fl;
        double gj = value(j), gj1 = value(j + 1);
        return at_index(j) + dx * (th * gj + 0.5 * th * th * (gj1 - gj));
    }
    double interp(double s) const
    {
        double fl = std::floor(s);
        long j = static_cast<long>(fl);
        double th = s - fl;
        return (1.0 - th) * value(j) + th * value(j + 1);
    }
};

} // namespace

double local_average(const SampledSignal& f, const Interval& I, double p)
{
    require(p >= 1.0, ErrorKind::exponent, "local average needs p >= 1");
    require(I.length > 0.0, ErrorKind::config, "interval length must be positive");
    std::vector<double> g = abs_pow(f, p);
    Cumulative c(g, f.spacing);
    double sa = (I.lo() - f.origin) / f.spacing;
    double sb = (I.hi() - f.origin) / f.spacing;
    double mass = std::max(0.0, c.at(sb) - c.at(sa));
    double avg = mass / I.length;
    return p == 1.0 ? avg : std::pow(avg, 1.0 / p);
}

double maximal_function(const SampledSignal& f, double p, double x)
{
    require(p >= 1.0, ErrorKind::exponent, "maximal function needs p >= 1");
    std::vector<double> g = abs_pow(f, p);
    Cumulative c(g, f.spacing);
    long n = static_cast<long>(f.size());
    double s = (x - f.origin) / f.spacing;
    if (std::abs(s - std::round(s)) < 1e-9) s = std::round(s); // sample points
    double best = c.interp(s);
    double reach = static_cast<double>(n) + std::abs(s) + std::abs(s - static_cast<double>(n)) + 2.0;
    for (long len = 1;; len *= 2) {
        long a_lo = static_cast<long>(std::ceil(s - static_cast<double>(len)));
        long a_hi = static_cast<long>(std::floor(s));
        a_lo = std::max(a_lo, -len);
        a_hi = std::min(a_hi, n);
        double L = static_cast<double>(len) * f.spacing;
        for (long a = a_lo; a <= a_hi; ++a)
            best = std::max(best, (c.at_index(a + len) - c.at_index(a)) / L);
        if (static_cast<double>(len) >= reach) break;
    }
    return p == 1.0 ? best : std::pow(best, 1.0 / p);
}

std::vector<double> maximal_function_grid(const SampledSignal& f, double p)
{
    require(p >= 1.0, ErrorKind::exponent, "maximal function needs p >= 1");
    std::vector<double> g = abs_pow(f, p);
    Cumulative c(g, f.spacing);
    long n = static_cast<long>(f.size());
    std::vector<double> best(g);
    for (long len = 1;; len *= 2) {
        double L = static_cast<double>(len) * f.spacing;
        // window sums for starting points a in [-len, n-1]
        std::vector<double> w(static_cast<std::size_t>(n + len));
        for (long a = -len; a < n; ++a)
            w[static_cast<std::size_t>(a + len)] = (c.at_index(a + len) - c.at_index(a)) / L;
        // point j sees starts a in [j - len, j]
        std::deque<long> dq;
        long next = -len;
        for (long j = 0; j < n; ++j) {
            while (next <= j) {
                double v = w[static_cast<std::size_t>(next + len)];
                while (!dq.empty() && w[static_cast<std::size_t>(dq.back() + len)] <= v) dq.pop_back();
                dq.push_back(next);
                ++next;
            }
            while (dq.front() < j - len) dq.pop_front();
            best[static_cast<std::size_t>(j)] =
                std::max(best[static_cast<std::size_t>(j)], w[static_cast<std::size_t>(dq.front() + len)]);
        }
        if (len >= 2 * n) break;
    }
    if (p != 1.0)
        for (double& v : best) v = std::pow(v, 1.0 / p);
    return best;
}

double grid_integral(const std::vector<double>& values, double spacing)
{
    double s = 0.0;
    for (double v : values) s += v;
    return s * spacing;
}

} // namespace vcarl
