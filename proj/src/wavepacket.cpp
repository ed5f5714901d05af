#include "vcarl/wavepacket.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <tuple>

namespace vcarl {

void WavePacketParams::validate() const
{
    require(b > 0.0 && std::isfinite(b), ErrorKind::config, "wavepacket.b must be positive");
    require(d > b, ErrorKind::config, "wavepacket.d must exceed b");
    require(eps > 0.0 && eps < b / 4.0, ErrorKind::config, "wavepacket.eps must lie in (0, b/4)");
    require(d_prime > 0.0 && d_doubleprime > d_prime, ErrorKind::config,
            "need 0 < wavepacket.d_prime < wavepacket.d_doubleprime");
    require(core > 0.0 && taper_start() > 0.0, ErrorKind::config,
            "wavepacket.core must be positive with b/2 - 2 core > 0");
    require(d - eps > 0.5 * b, ErrorKind::config, "chi support must lie beyond b/2");
}

double smooth_step(double x)
{
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    double a = std::exp(-1.0 / x);
    double c = std::exp(-1.0 / (1.0 - x));
    return a / (a + c);
}

namespace {

double gaussian_core(double z, double s) { return std::exp(-0.5 * z * z / (s * s)); }

double taper(double az, const WavePacketParams& p)
{
    return 1.0 - smooth_step((az - p.taper_start()) / (p.half_support() - p.taper_start()));
}

double chi_raw(double v, const WavePacketParams& p)
{
    double q = (v - p.d) / p.eps;
    if (q <= -1.0 || q >= 1.0) return 0.0;
    return std::exp(-1.0 / (1.0 - q * q));
}

double cubic_interp(const std::vector<double>& tab, double pos)
{
    long i = static_cast<long>(std::floor(pos));
    double u = pos - static_cast<double>(i);
    auto at = [&](long k) {
        if (k < 0) k = -k; // table of an even function
        if (k >= static_cast<long>(tab.size())) return 0.0;
        return tab[static_cast<std::size_t>(k)];
    };
    double p0 = at(i - 1), p1 = at(i), p2 = at(i + 1), p3 = at(i + 2);
    return p1 + 0.5 * u * (p2 - p0 + u * (2.0 * p0 - 5.0 * p1 + 4.0 * p2 - p3 + u * (3.0 * (p1 - p2) + p3 - p0)));
}

} // namespace

MotherWavelet::MotherWavelet(const WavePacketParams& p) : p_(p)
{
    p_.validate();
    const double s = p_.core;
    const double hs = p_.half_support();

    // unit L2 norm: int psi^2 = (1/2pi) int psi_hat^2
    {
        const int n = 40000;
        double h = 2.0 * hs / n, acc = 0.0;
        for (int i = 0; i <= n; ++i) {
            double z = -hs + h * i;
            double v = gaussian_core(z, s) * taper(std::abs(z), p_);
            acc += (i == 0 || i == n ? 0.5 : 1.0) * v * v;
        }
        amp_psi_ = std::sqrt(2.0 * kPi / (acc * h));
    }

    // Tabulate the taper correction R(y) = (1/pi) int_{z0}^inf g(z)(1 - T(z)) cos(yz) dz
    // through one long FFT of the trapezoid sum.
    {
        const double z0 = p_.taper_start();
        const double z1 = std::sqrt(z0 * z0 + 200.0 * s * s);
        const double dz = 0.0025;
        const std::size_t nfft = std::size_t{1} << 19;
        std::size_t nz = static_cast<std::size_t>(std::ceil((z1 - z0) / dz)) + 1;
        std::vector<cplx> buf(nfft, cplx(0.0, 0.0));
        for (std::size_t q = 0; q < nz && q < nfft; ++q) {
            double z = z0 + dz * static_cast<double>(q);
            buf[q] = gaussian_core(z, s) * (1.0 - taper(z, p_));
        }
        fft_backward(buf);
        r_step_ = 2.0 * kPi / (static_cast<double>(nfft) * dz);
        std::size_t ny = static_cast<std::size_t>(std::ceil(y_max_ / r_step_)) + 3;
        r_table_.resize(ny);
        for (std::size_t j = 0; j < ny; ++j) {
            double y = r_step_ * static_cast<double>(j);
            cplx rot(std::cos(y * z0), std::sin(y * z0));
            r_table_[j] = (buf[j] * rot).real() * dz / kPi;
        }
    }

    // chi normalization: int int psi_hat(w) chi(v) / (v + w) dv dw = 1
    {
        const int nw = 4800, nv = 800;
        double hw = 2.0 * hs / nw, hv = 2.0 * p_.eps / nv, acc = 0.0;
        for (int i = 1; i < nw; ++i) {
            double w = -hs + hw * i;
            double pw = psi_hat(w);
            if (pw == 0.0) continue;
            double inner = 0.0;
            for (int j = 1; j < nv; ++j) {
                double v = p_.d - p_.eps + hv * j;
                inner += chi_raw(v, p_) / (v + w);
            }
            acc += pw * inner;
        }
        amp_chi_ = 1.0 / (acc * hw * hv);
    }
}

double MotherWavelet::psi_hat(double z) const
{
    double az = std::abs(z);
    if (az >= p_.half_support()) return 0.0;
    return amp_psi_ * gaussian_core(z, p_.core) * taper(az, p_);
}

double MotherWavelet::taper_correction(double y) const
{
    double ay = std::abs(y);
    if (ay >= y_max_) return 0.0;
    return cubic_interp(r_table_, ay / r_step_);
}

double MotherWavelet::psi(double y) const
{
    double ay = std::abs(y);
    if (ay >= y_max_) return 0.0;
    const double s = p_.core;
    double g = s / std::sqrt(2.0 * kPi) * std::exp(-0.5 * s * s * ay * ay);
    return amp_psi_ * (g - taper_correction(ay));
}

double MotherWavelet::chi(double v) const { return amp_chi_ * chi_raw(v, p_); }

double MotherWavelet::theta(double z) const
{
    return smooth_step((z - p_.d_prime) / (p_.d_doubleprime - p_.d_prime));
}

double MotherWavelet::truncation_weight(double t, double eta, double xi_minus, double xi_plus) const
{
    require(xi_minus < xi_plus, ErrorKind::ordering, "truncated packet needs xi_minus < xi_plus");
    if (xi_minus == -kInf) {
        require(xi_plus != kInf, ErrorKind::config, "truncated packet needs a finite endpoint");
        return chi(t * (xi_plus - eta));
    }
    double w = chi(t * (eta - xi_minus));
    if (w == 0.0 || xi_plus == kInf) return w;
    return w * theta(t * (xi_plus - eta));
}

cplx MotherWavelet::packet(double t, double eta, double y) const
{
    double v = psi(y / t) / t;
    if (v == 0.0) return cplx(0.0, 0.0);
    double ph = eta * y;
    return cplx(v * std::cos(ph), v * std::sin(ph));
}

std::shared_ptr<const MotherWavelet> wavelet_for(const WavePacketParams& p)
{
    static std::mutex mu;
    static std::map<std::tuple<double, double, double, double, double, double>, std::shared_ptr<const MotherWavelet>>
        cache;
    auto key = std::make_tuple(p.b, p.d, p.eps, p.d_prime, p.d_doubleprime, p.core);
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    auto w = std::make_shared<const MotherWavelet>(p);
    cache.emplace(key, w);
    return w;
}

SampledSignal mother_wavepacket(const WavePacketParams& p)
{
    auto w = wavelet_for(p);
    const std::size_t half = 512;
    SampledSignal s = SampledSignal::zeros(-8.0, 1.0 / 64.0, 2 * half + 1);
    for (std::size_t k = 0; k < s.size(); ++k) {
        double y = (static_cast<double>(k) - static_cast<double>(half)) / 64.0;
        s.samples[k] = w->psi(std::abs(y));
    }
    return s;
}

SampledSignal truncated_wavepacket(double t, double eta, double xi_minus, double xi_plus, const WavePacketParams& p,
                                   double origin, double spacing, std::size_t n)
{
    require(t > 0.0, ErrorKind::scale, "packet scale must be positive");
    auto w = wavelet_for(p);
    double weight = w->truncation_weight(t, eta, xi_minus, xi_plus);
    SampledSignal s = SampledSignal::zeros(origin, spacing, n);
    if (weight == 0.0) return s;
    for (std::size_t k = 0; k < n; ++k) s.samples[k] = weight * w->packet(t, eta, s.x(k));
    return s;
}

SampledSignal truncated_wavepacket(double t, double eta, double xi_minus, double xi_plus, const WavePacketParams& p)
{
    return truncated_wavepacket(t, eta, xi_minus, xi_plus, p, -8.0 * t, t / 64.0, 1025);
}

} // namespace vcarl
