#pragma once

#include "vcarl/outer.hpp"
#include "vcarl/sparse.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace vcarl {

struct RunConfig {
    std::size_t n = 512;          // grid.n: samples on the unit window
    std::size_t pad = 4;          // grid.pad
    double omega = 512.0;         // band.omega: frequency grid spans [-omega, omega]
    std::size_t M = 16;           // freq.M
    double r = 3.0, p = 1.5, q = 4.0, t = 1.2, tau = 1.6;
    WavePacketParams packet;
    TentGeometry geometry = TentGeometry::defaults(WavePacketParams{});
    EmbeddingGridSpec tiles{1.0, 6, 64};
    double recon_c_eta = 0.5;
    double recon_ratio = 0.9576032806985737; // 2^{-1/16}
    double recon_t_max = 32.0;
    std::size_t recon_points = 401;
    double sparse_c = 1.0 / 16.0;
    std::size_t sparse_max_halvings = 40;
    std::size_t generation_cap = 8;
    double embedding_K = 4.0;
    bool embedding_sets = true;
    double epsilon = 0.0; // 0: finest tile scale
    std::size_t outer_levels = 64;
    std::size_t outer_refine = 4;
    std::vector<double> weights_a{0.0, 0.05, 0.1, 0.2};
    double weights_delta = 1.0 / 64.0;
    double weights_floor = 1e-8;
    std::size_t corpus_size = 8;
    std::uint64_t seed = 1;

    static RunConfig parse(const std::string& text);
    static RunConfig load(const std::string& path);
    void validate() const;
    std::string to_text() const;

    double sigma() const { return tau / (tau - 1.0); }
    FrequencyGrid frequency_grid() const { return FrequencyGrid::uniform(-omega, omega, M); }
    SparseConfig sparse_config() const;
};

std::string default_config_text();

} // namespace vcarl
