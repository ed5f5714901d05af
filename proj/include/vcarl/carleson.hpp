#pragma once

#include "vcarl/signal.hpp"

#include <cstdint>
#include <random>
#include <vector>

namespace vcarl {

// Strictly increasing real frequencies xi_0 < ... < xi_N.
struct VariationPartition {
    std::vector<double> points;
};

// Partition expressed as indices into a FrequencyGrid, always starting at
// the first and ending at the last grid point.
using IndexPartition = std::vector<std::uint16_t>;

struct VariationResult {
    double value = 0.0;       // C_r value, (max V)^{1/r}
    double power_sum = 0.0;   // max V = sum of |jump|^r along the argmax
    IndexPartition partition; // argmax; among ties the fewest points, then lexicographically smallest
};

void check_variation_exponent(double r);
// True when r lies in (2, inf), the range covered by the boundedness theory.
bool exponent_in_theory_range(double r);

// P(xi_i, x_k): partial integrals over (-inf, xi_i) for every grid point and sample.
class PartialSumTable {
public:
    PartialSumTable(const FourierView& view, const FrequencyGrid& grid);

    std::size_t grid_size() const { return m_; }
    std::size_t sample_count() const { return n_; }
    cplx at(std::size_t i, std::size_t k) const { return rows_[i * n_ + k]; }
    // Jump S(xi_i, xi_j) = P(xi_j) - P(xi_i) at sample k.
    cplx jump(std::size_t i, std::size_t j, std::size_t k) const { return at(j, k) - at(i, k); }
    std::vector<cplx> column(std::size_t k) const;

private:
    std::size_t m_ = 0, n_ = 0;
    std::vector<cplx> rows_;
};

// Partial sums P(xi_i, x) at an arbitrary point x by direct summation over bins.
std::vector<cplx> partial_sums_at(const FourierView& view, const FrequencyGrid& grid, double x);

// |P_j - P_i|^r; shared by the dynamic program and the exhaustive oracle.
double jump_power(const std::vector<cplx>& P, std::size_t i, std::size_t j, double r);

// Dynamic program over partitions for one column of partial sums.
VariationResult variation_dp(const std::vector<cplx>& P, double r);
// Exhaustive enumeration over all interior subsets (grid size <= 24).
VariationResult variation_brute_force(const std::vector<cplx>& P, double r);
// Left-to-right power sum of one index partition.
double partition_power_sum(const std::vector<cplx>& P, const IndexPartition& part, double r);

double partition_variation_value(const SampledSignal& f, double x, const VariationPartition& P, double r);

VariationResult var_carleson_dp(const SampledSignal& f, double x, const FrequencyGrid& grid, double r);

// C_r f at every sample, with the argmax partitions.
std::vector<VariationResult> var_carleson_all(const SampledSignal& f, const FrequencyGrid& grid, double r);
SampledSignal var_carleson_function(const SampledSignal& f, const FrequencyGrid& grid, double r);

struct LinearizationData {
    FrequencyGrid grid;
    double r = 3.0;
    std::vector<IndexPartition> partitions;    // one per sample
    std::vector<std::vector<cplx>> coeffs;     // a_j(x), j = 1..N, l^{r'} norm 1

    std::size_t sample_count() const { return partitions.size(); }
    void validate() const;
};

// Rescale to unit l^{r'} norm; an all-zero vector becomes (1, 0, ..., 0).
void normalize_coefficients(std::vector<cplx>& a, double r);

// Linearization realizing C_r f: a_j = (|S_j|/V)^{r-1} conj(sgn S_j), optionally
// twisted by conj(sgn g(x)) so that the form equals the pairing with |g|.
LinearizationData argmax_linearization(const SampledSignal& f, const FrequencyGrid& grid, double r,
                                       const SampledSignal* g = nullptr);

LinearizationData random_linearization(const FrequencyGrid& grid, std::size_t samples, double r,
                                       std::mt19937_64& rng);

cplx linearized_form(const SampledSignal& f, const SampledSignal& g, const LinearizationData& L, double r);

double dual_pairing(const SampledSignal& f, const SampledSignal& g, const FrequencyGrid& grid, double r);
double dual_pairing(const SampledSignal& Crf, const SampledSignal& g);

} // namespace vcarl
