#pragma once

#include "vcarl/error.hpp"
#include "vcarl/fft.hpp"

#include <cstddef>
#include <limits>
#include <vector>

namespace vcarl {

inline constexpr double kInf = std::numeric_limits<double>::infinity();
inline constexpr double kPi = 3.14159265358979323846;

struct Interval {
    double center = 0.0;
    double length = 1.0;

    double lo() const { return center - 0.5 * length; }
    double hi() const { return center + 0.5 * length; }
    Interval dilate(double k) const { return {center, k * length}; }
    bool contains(double x) const { return x >= lo() && x < hi(); }

    static Interval from_endpoints(double a, double b) { return {0.5 * (a + b), b - a}; }
};

// Complex samples on a uniform grid x_k = origin + k*spacing, zero elsewhere.
struct SampledSignal {
    double origin = 0.0;
    double spacing = 1.0;
    std::vector<cplx> samples;

    std::size_t size() const { return samples.size(); }
    double x(std::size_t k) const { return origin + spacing * static_cast<double>(k); }
    double x(long k) const { return origin + spacing * static_cast<double>(k); }
    void validate() const;

    static SampledSignal zeros(double origin, double spacing, std::size_t n);
};

bool same_grid(const SampledSignal& a, const SampledSignal& b);

// Half-open range [lo, hi) of sample cells. Cell k is
// [origin + (k - 1/2) spacing, origin + (k + 1/2) spacing).
struct CellRange {
    long lo = 0;
    long hi = 0;

    long size() const { return hi - lo; }
    bool empty() const { return hi <= lo; }
    bool contains(long k) const { return k >= lo && k < hi; }
    bool operator==(const CellRange&) const = default;
    auto operator<=>(const CellRange&) const = default;

    CellRange dilate3() const { return {lo - size(), hi + size()}; }
};

Interval cell_interval(double origin, double spacing, CellRange c);
Interval cell_interval(const SampledSignal& f, CellRange c);

// Copy of f with every sample outside the cells of c set to zero.
SampledSignal restricted(const SampledSignal& f, CellRange c);

class FrequencyGrid {
public:
    FrequencyGrid() = default;
    explicit FrequencyGrid(std::vector<double> points);

    static FrequencyGrid uniform(double lo, double hi, std::size_t m);
    // Refinement of a grid obtained by inserting every midpoint.
    FrequencyGrid with_midpoints() const;

    std::size_t size() const { return pts_.size(); }
    double operator[](std::size_t i) const { return pts_[i]; }
    const std::vector<double>& points() const { return pts_; }

private:
    std::vector<double> pts_;
};

struct SpectrumPoint {
    double freq;
    cplx value;
};

// Zero padded DFT of a signal. Bin m in [-N/2, N/2) sits at zeta_m = m * d_zeta
// with d_zeta = 2 pi / (N spacing); the value is the Riemann sum
// spacing * sum_k f_k exp(-i x_k zeta_m), which is the trapezoid rule for the
// zero-extended signal.
class FourierView {
public:
    explicit FourierView(const SampledSignal& f, std::size_t pad = 4);

    const SampledSignal& signal() const { return f_; }
    std::size_t fft_size() const { return n_fft_; }
    double d_zeta() const { return dzeta_; }
    long min_bin() const { return -static_cast<long>(n_fft_ / 2); }
    long max_bin() const { return static_cast<long>(n_fft_ / 2) - 1; }
    double zeta(long m) const { return dzeta_ * static_cast<double>(m); }

    // Coefficient without the origin phase: spacing * sum_k f_k e^{-2 pi i k m / N}.
    cplx local(long m) const { return local_[wrap(m)]; }
    // Transform with the origin phase, f^(zeta_m).
    cplx hat(long m) const;
    const std::vector<cplx>& local_coefficients() const { return local_; }

    // Smallest bin with zeta_m >= xi, clipped to [min_bin, max_bin + 1].
    long first_bin_at_or_above(double xi) const;

    // Quadrature of the integral of f^(zeta) e^{i x zeta} over [a, b) using the bins.
    cplx partial_integral(double a, double b, double x) const;

    // Values of the partial integral over (-inf, xi) at every sample point.
    std::vector<cplx> partial_sums_on_grid(double xi) const;

    std::size_t wrap(long m) const
    {
        long n = static_cast<long>(n_fft_);
        long r = m % n;
        return static_cast<std::size_t>(r < 0 ? r + n : r);
    }

private:
    SampledSignal f_;
    std::size_t n_fft_ = 0;
    double dzeta_ = 0.0;
    std::vector<cplx> local_;
};

std::vector<SpectrumPoint> spectrum(const SampledSignal& f, std::size_t pad = 4);

cplx partial_fourier_integral(const SampledSignal& f, double xi_minus, double xi_plus, double x);

// (|I|^{-1} int_I |f|^p)^{1/p}, integrating the piecewise linear interpolant of
// |f|^p over I exactly (trapezoid rule when the endpoints are sample points).
double local_average(const SampledSignal& f, const Interval& I, double p);

// Sup of local_average over intervals of length 2^k spacing with sample-point
// endpoints that contain x. Lengths run up to the first power of two covering
// both the signal window and x.
double maximal_function(const SampledSignal& f, double p, double x);

// maximal_function at every sample point, O(n log n).
std::vector<double> maximal_function_grid(const SampledSignal& f, double p);

// Integral of |f|^p against a real weight on the grid (same Riemann rule).
double grid_integral(const std::vector<double>& values, double spacing);

} // namespace vcarl
