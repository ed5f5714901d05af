#include "vcarl/commands.hpp"

#include "vcarl/carleson.hpp"
#include "vcarl/corpus.hpp"
#include "vcarl/embedding.hpp"
#include "vcarl/io.hpp"
#include "vcarl/weights.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

namespace vcarl {

namespace {

std::string out_path(const CommandContext& ctx, const std::string& file)
{
    std::filesystem::create_directories(ctx.out_dir);
    return (std::filesystem::path(ctx.out_dir) / file).string();
}

void write_stream(const std::string& path, const std::function<void(std::ostream&)>& fn)
{
    std::ofstream os(path, std::ios::binary);
    require(static_cast<bool>(os), ErrorKind::input, "cannot write '" + path + "'");
    fn(os);
}

Json finish(const CommandContext& ctx, const std::string& name, Json j)
{
    write_text(out_path(ctx, name + ".json"), dump_json(j));
    return j;
}

Json cells_json(const CellRange& c) { return Json::array({c.lo, c.hi}); }

Json cells_json(const std::vector<CellRange>& v)
{
    Json a = Json::array();
    for (const auto& c : v) a.push_back(cells_json(c));
    return a;
}

Json embedding_json(const EmbeddingSet& s)
{
    return {{"intervals", cells_json(s.intervals)},
            {"norm", s.norm},
            {"achieved_K", std::isfinite(s.achieved_K) ? Json(s.achieved_K) : Json("inf")},
            {"within_target", s.within_target}};
}

CellRange all_cells(const SampledSignal& f) { return {0, static_cast<long>(f.size())}; }

double ratio_or_inf(double v) { return v; }

} // namespace

std::string dump_json(const Json& j) { return j.dump(2) + "\n"; }

Json sparse_json(const SparseResult& res, const DominationReport& dom)
{
    const SparseCollection& S = res.collection;
    Json members = Json::array();
    for (std::size_t i = 0; i < S.members.size(); ++i) {
        Interval I = S.interval(i);
        members.push_back({{"center", I.center},
                           {"length", I.length},
                           {"node_cells", cells_json(S.members[i].Q)},
                           {"witness_cells", cells_json(S.members[i].witness)}});
    }
    Json gens = Json::array();
    for (const auto& level : res.trace.levels) gens.push_back(cells_json(level));
    Json nodes = Json::array();
    for (const auto& n : res.trace.nodes) {
        nodes.push_back({{"cells", cells_json(n.Q)},
                         {"generation", n.generation},
                         {"budget", n.E.budget},
                         {"halvings", n.E.halvings},
                         {"children", cells_json(n.E.components)},
                         {"packing_ratio", static_cast<double>(n.E.cells) / static_cast<double>(n.Q.size())},
                         {"tiles", n.tiles},
                         {"local_term", n.local_term},
                         {"local_ratio", n.local_ratio},
                         {"B_Q", n.B_Q},
                         {"decomposition_rhs", n.decomposition_rhs},
                         {"decomposition_ok", n.decomposition_ok},
                         {"U", embedding_json(n.E.U)},
                         {"V", embedding_json(n.E.V)}});
    }
    const Certificate& c = res.certificate;
    Json ratio = std::isfinite(dom.ratio) ? Json(dom.ratio) : Json("inf");
    return {{"collection", {{"intervals", members}, {"eta", S.eta}}},
            {"trace", {{"epsilon", res.trace.epsilon}, {"N", res.trace.N}, {"generations", gens}, {"nodes", nodes}}},
            {"certificate",
             {{"packing", c.packing},
              {"nesting", c.nesting},
              {"disjoint", c.disjoint},
              {"eta_bound", c.eta_bound},
              {"size_decay", c.size_decay},
              {"message", c.message}}},
            {"verification", {{"lhs", dom.lhs}, {"rhs", dom.rhs}, {"ratio", ratio}}},
            {"pass", c.ok() && std::isfinite(dom.ratio)}};
}

Json cmd_carleson(const CommandContext& ctx, const std::string& signal_path)
{
    const RunConfig& cfg = ctx.cfg;
    cfg.validate();
    SampledSignal f = read_signal_csv(signal_path);
    FrequencyGrid grid = cfg.frequency_grid();
    std::vector<VariationResult> all = var_carleson_all(f, grid, cfg.r);
    SampledSignal C{f.origin, f.spacing, std::vector<cplx>(f.size())};
    double mx = 0.0;
    for (std::size_t k = 0; k < all.size(); ++k) {
        C.samples[k] = cplx(all[k].value, 0.0);
        mx = std::max(mx, all[k].value);
    }
    write_stream(out_path(ctx, "carleson.csv"), [&](std::ostream& os) { write_real_csv(os, C); });

    Json freqs = Json::array();
    for (std::size_t i = 0; i < grid.size(); ++i) freqs.push_back(grid[i]);
    Json probes = Json::array();
    const std::size_t n = f.size();
    for (std::size_t j = 0; j < 5 && n > 0; ++j) {
        std::size_t k = std::min(n - 1, (2 * j + 1) * n / 10);
        Json part = Json::array();
        for (auto i : all[k].partition) part.push_back(grid[i]);
        probes.push_back({{"x", f.x(k)}, {"value", all[k].value}, {"partition", part}});
    }
    return finish(ctx, "carleson",
                  {{"command", "carleson"},
                   {"samples", n},
                   {"r", cfg.r},
                   {"r_in_theory_range", exponent_in_theory_range(cfg.r)},
                   {"grid", freqs},
                   {"max", mx},
                   {"probes", probes}});
}

Json cmd_transform(const CommandContext& ctx, const std::string& signal_path)
{
    const RunConfig& cfg = ctx.cfg;
    cfg.validate();
    SampledSignal f = read_signal_csv(signal_path);
    Interval Q = cell_interval(f, all_cells(f));
    auto grid = embedding_grid(f, Q, cfg.packet, cfg.tiles, -cfg.omega, cfg.omega);
    TileField F = grid->tile_count() ? embed_F_field(f, grid, cfg.packet) : TileField(grid);
    write_stream(out_path(ctx, "transform.csv"), [&](std::ostream& os) { write_field_csv(os, F); });
    double mx = 0.0;
    for (double v : F.values) mx = std::max(mx, v);
    return finish(ctx, "transform",
                  {{"command", "transform"}, {"tiles", grid->tile_count()}, {"scales", grid->scales().size()}, {"max", mx}});
}

Json cmd_embed_a(const CommandContext& ctx, const std::string& f_path, const std::string& g_path)
{
    const RunConfig& cfg = ctx.cfg;
    cfg.validate();
    SampledSignal f = read_signal_csv(f_path), g = read_signal_csv(g_path);
    require(same_grid(f, g), ErrorKind::grid_mismatch, "f and g must share a grid");
    FrequencyGrid fg = cfg.frequency_grid();
    LinearizationData L = argmax_linearization(f, fg, cfg.r, &g);
    Interval Q = cell_interval(g, all_cells(g));
    auto grid = embedding_grid(g, Q, cfg.packet, cfg.tiles, fg[0], fg[fg.size() - 1]);
    TileField A = grid->tile_count() ? embed_A_field(g, L, grid, cfg.packet) : TileField(grid);
    write_stream(out_path(ctx, "embed_a.csv"), [&](std::ostream& os) { write_field_csv(os, A); });
    double mx = 0.0;
    for (double v : A.values) mx = std::max(mx, v);
    return finish(ctx, "embed-a",
                  {{"command", "embed-a"}, {"tiles", grid->tile_count()}, {"scales", grid->scales().size()}, {"max", mx}});
}

Json cmd_sparse(const CommandContext& ctx, const std::string& f_path, const std::string& g_path)
{
    const RunConfig& cfg = ctx.cfg;
    cfg.validate();
    SampledSignal f = read_signal_csv(f_path), g = read_signal_csv(g_path);
    require(same_grid(f, g), ErrorKind::grid_mismatch, "f and g must share a grid");
    FrequencyGrid fg = cfg.frequency_grid();
    LinearizationData L = argmax_linearization(f, fg, cfg.r, &g);
    SparseResult res = build_sparse(f, g, L, all_cells(f), cfg.sparse_config(), cfg.epsilon);
    DominationReport dom = verify_domination(f, g, res.collection, cfg.p, cfg.r, fg);
    Json j = sparse_json(res, dom);
    j["command"] = "sparse";
    j["seed"] = cfg.seed;
    return finish(ctx, "sparse", j);
}

double DominationStudy::refine_change() const { return base > 0.0 ? std::abs(refined - base) / base : 0.0; }
double DominationStudy::m_change() const { return base > 0.0 ? std::abs(doubled - base) / base : 0.0; }

DominationStudy domination_study(const RunConfig& cfg, std::size_t pairs)
{
    cfg.validate();
    auto run = [&](std::size_t n, std::size_t M, bool& certified) {
        std::mt19937_64 rng(cfg.seed);
        FrequencyGrid fg = FrequencyGrid::uniform(-cfg.omega, cfg.omega, M);
        SparseConfig sc = cfg.sparse_config();
        double worst = 0.0;
        for (std::size_t i = 0; i < pairs; ++i) {
            SampledSignal f = smooth_packet_signal(n, rng);
            SampledSignal g = smooth_bump_signal(n, rng);
            LinearizationData L = argmax_linearization(f, fg, cfg.r, &g);
            SparseResult res = build_sparse(f, g, L, all_cells(f), sc, cfg.epsilon);
            certified = certified && res.certificate.ok();
            DominationReport d = verify_domination(f, g, res.collection, cfg.p, cfg.r, fg);
            worst = std::max(worst, d.ratio);
        }
        return worst;
    };
    DominationStudy s;
    s.base = run(cfg.n, cfg.M, s.certified);
    s.refined = run(2 * cfg.n, cfg.M, s.certified);
    s.doubled = run(cfg.n, 2 * cfg.M, s.certified);
    return s;
}

Json cmd_verify(const CommandContext& ctx)
{
    DominationStudy s = domination_study(ctx.cfg, ctx.cfg.corpus_size);
    bool pass = s.certified && std::isfinite(s.base) && s.refine_change() < 0.3 && s.m_change() < 0.3;
    return finish(ctx, "verify",
                  {{"command", "verify"},
                   {"pairs", ctx.cfg.corpus_size},
                   {"seed", ctx.cfg.seed},
                   {"max_ratio", ratio_or_inf(s.base)},
                   {"max_ratio_refined", ratio_or_inf(s.refined)},
                   {"max_ratio_doubled_M", ratio_or_inf(s.doubled)},
                   {"refine_change", s.refine_change()},
                   {"M_change", s.m_change()},
                   {"certified", s.certified},
                   {"pass", pass}});
}

Json cmd_reconstruct(const CommandContext& ctx, double xi_minus, double xi_plus)
{
    const RunConfig& cfg = ctx.cfg;
    cfg.validate();
    require(!std::isnan(xi_minus) && !std::isnan(xi_plus), ErrorKind::config, "cuts must be numbers");
    require(xi_minus < xi_plus, ErrorKind::ordering, "reconstruction needs xi_minus < xi_plus");
    ReconstructionSpec spec;
    spec.c_eta = cfg.recon_c_eta;
    spec.ratio = cfg.recon_ratio;
    spec.t_max = cfg.recon_t_max;
    spec.t_min = resolvable_scale(1.0 / static_cast<double>(cfg.n), cfg.packet);
    TileGridPtr grid = reconstruction_grid_for(xi_minus, xi_plus, cfg.packet, spec);

    const bool finite = std::isfinite(xi_minus) && std::isfinite(xi_plus);
    const double L = finite ? xi_plus - xi_minus : cfg.omega;
    double z0 = std::isfinite(xi_minus) ? xi_minus - L : xi_plus - 4.0 * L;
    double z1 = std::isfinite(xi_plus) ? xi_plus + 2.0 * L : xi_minus + 4.0 * L;
    const std::size_t m = cfg.recon_points;

    bool low_conf = grid == nullptr;
    double middle_err = 0.0, outside_err = 0.0;
    std::ostringstream csv;
    csv << "zeta,re,im,expected,resolved\n";
    for (std::size_t i = 0; i < m; ++i) {
        double z = z0 + (z1 - z0) * static_cast<double>(i) / static_cast<double>(m - 1);
        cplx v = grid ? multiplier_reconstruction(xi_minus, xi_plus, z, *grid, cfg.packet) : cplx(0.0, 0.0);
        bool res = grid && reconstruction_resolved(xi_minus, xi_plus, z, *grid, cfg.packet);
        double expect = (z > xi_minus && z < xi_plus) ? 1.0 : 0.0;
        // Distance to the nearest cut; the middle half of a finite interval is
        // where it reaches L/4.
        double cut = std::min(std::abs(z - xi_minus), std::abs(z - xi_plus));
        bool middle = expect == 1.0 && cut >= 0.25 * L;
        bool far = expect == 0.0 && cut > L;
        if (middle) {
            middle_err = std::max(middle_err, std::abs(v - 1.0));
            if (!res) low_conf = true;
        }
        if (far) outside_err = std::max(outside_err, std::abs(v));
        csv << format_double(z) << ',' << format_double(v.real()) << ',' << format_double(v.imag()) << ','
            << format_double(expect) << ',' << (res ? 1 : 0) << '\n';
    }
    write_text(out_path(ctx, "reconstruct.csv"), csv.str());
    Json j{{"command", "reconstruct"},
           {"xi_minus", std::isfinite(xi_minus) ? Json(xi_minus) : Json("-inf")},
           {"xi_plus", std::isfinite(xi_plus) ? Json(xi_plus) : Json("inf")},
           {"points", m},
           {"scales", grid ? grid->scales().size() : 0},
           {"low_confidence", low_conf},
           {"middle_max_error", middle_err},
           {"outside_max_error", outside_err}};
    return finish(ctx, "reconstruct", j);
}

Json cmd_weights(const CommandContext& ctx)
{
    const RunConfig& cfg = ctx.cfg;
    cfg.validate();
    check_weight_exponents(cfg.r, cfg.q, cfg.t);
    std::mt19937_64 rng(cfg.seed);
    std::vector<SampledSignal> corpus;
    for (std::size_t i = 0; i < cfg.corpus_size; ++i) corpus.push_back(smooth_packet_signal(cfg.n, rng));
    WeightExperiment ex = weighted_bound_experiment(cfg.r, cfg.q, cfg.t, cfg.weights_a, corpus, cfg.frequency_grid(),
                                                    cfg.weights_delta, cfg.weights_floor);
    std::ostringstream csv;
    csv << "a,A_t,ratio\n";
    Json rows = Json::array();
    for (const auto& r : ex.rows) {
        csv << format_double(r.a) << ',' << format_double(r.a_t) << ',' << format_double(r.ratio) << '\n';
        rows.push_back({{"a", r.a}, {"A_t", r.a_t}, {"ratio", r.ratio}});
    }
    write_text(out_path(ctx, "weights.csv"), csv.str());
    return finish(ctx, "weights",
                  {{"command", "weights"},
                   {"rows", rows},
                   {"slope", ex.slope},
                   {"intercept", ex.intercept},
                   {"bound", ex.bound},
                   {"fitted", ex.fitted},
                   {"pass", ex.pass}});
}

std::string cmd_defaults() { return default_config_text(); }

} // namespace vcarl
