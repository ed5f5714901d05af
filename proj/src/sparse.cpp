#include "vcarl/sparse.hpp"

#include <algorithm>
#include <cmath>

namespace vcarl {

void SparseConfig::validate() const
{
    packet.validate();
    tent_geometry().validate(packet);
    require(p >= 1.0, ErrorKind::exponent, "sparse exponent p must be at least 1");
    require(sigma > 1.0 && tau > 1.0 && std::abs(1.0 / sigma + 1.0 / tau - 1.0) < 1e-12, ErrorKind::exponent,
            "sigma and tau must be Hoelder dual exponents above 1");
    require(c_initial > 0.0 && c_initial < 1.0, ErrorKind::config, "initial budget c must lie in (0,1)");
    require(max_halvings >= 1, ErrorKind::config, "at least one budget halving is required");
    require(embedding_K > 0.0, ErrorKind::config, "embedding constant must be positive");
    require(packing_log2 >= 1 && packing_log2 <= 30, ErrorKind::config, "packing exponent out of range");
    require(grid.c_eta > 0.0 && grid.max_scales >= 1, ErrorKind::config, "embedding grid spec invalid");
}

namespace {

double eta_lo_of(const LinearizationData& L) { return L.grid[0]; }
double eta_hi_of(const LinearizationData& L) { return L.grid[L.grid.size() - 1]; }

bool is_zero(const SampledSignal& f)
{
    for (const auto& s : f.samples)
        if (s != cplx(0.0, 0.0)) return false;
    return true;
}

// f on the cells of `outer` minus those of `inner`.
SampledSignal restricted_minus(const SampledSignal& f, CellRange outer, CellRange inner)
{
    SampledSignal out = restricted(f, outer);
    long n = static_cast<long>(f.size());
    for (long k = std::max<long>(inner.lo, 0); k < std::min<long>(inner.hi, n); ++k)
        out.samples[static_cast<std::size_t>(k)] = cplx(0.0, 0.0);
    return out;
}

TileField masked(const TileField& F, const TileRegion& keep)
{
    TileField out = F;
    for (std::size_t i = 0; i < out.values.size(); ++i)
        if (!keep.mask[i]) out.values[i] = 0.0;
    return out;
}

std::vector<CellRange> runs(const std::vector<std::uint8_t>& mark, long base)
{
    std::vector<CellRange> out;
    long n = static_cast<long>(mark.size());
    for (long k = 0; k < n;) {
        if (!mark[static_cast<std::size_t>(k)]) {
            ++k;
            continue;
        }
        long j = k;
        while (j < n && mark[static_cast<std::size_t>(j)]) ++j;
        out.push_back({base + k, base + j});
        k = j;
    }
    return out;
}

OpenSet open_set_of(const SampledSignal& f, const std::vector<CellRange>& cells)
{
    OpenSet E;
    for (const auto& c : cells) E.add(cell_interval(f, c));
    return E;
}

long total_cells(const std::vector<CellRange>& v)
{
    long s = 0;
    for (const auto& c : v) s += c.size();
    return s;
}

TileField field_F(const SampledSignal& f, const TileGridPtr& grid, const WavePacketParams& p)
{
    if (grid->tile_count() == 0 || is_zero(f)) return TileField(grid);
    return embed_F_field(f, grid, p);
}

TileField field_A(const SampledSignal& g, const LinearizationData& L, const TileGridPtr& grid,
                  const WavePacketParams& p)
{
    if (grid->tile_count() == 0 || is_zero(g)) return TileField(grid);
    return embed_A_field(g, L, grid, p);
}

} // namespace

bool packing_holds(long child_cells, long parent_cells, std::size_t log2)
{
    return (static_cast<__int128>(child_cells) << log2) <= static_cast<__int128>(parent_cells);
}

NodeFields node_fields(const SampledSignal& f, const SampledSignal& g, const LinearizationData& L, CellRange Q,
                       const SparseConfig& cfg)
{
    require(same_grid(f, g), ErrorKind::grid_mismatch, "f and g must share a grid");
    require(!Q.empty() && Q.lo >= 0 && Q.hi <= static_cast<long>(f.size()), ErrorKind::input,
            "node interval must consist of sample cells");
    require(L.sample_count() == f.size(), ErrorKind::grid_mismatch, "linearization does not match the signals");
    NodeFields n;
    n.Q = Q;
    n.interval = cell_interval(f, Q);
    n.f3 = restricted(f, Q.dilate3());
    n.g3 = restricted(g, Q.dilate3());
    n.grid = embedding_grid(f, n.interval, cfg.packet, cfg.grid, eta_lo_of(L), eta_hi_of(L));
    n.F = field_F(n.f3, n.grid, cfg.packet);
    n.A = field_A(n.g3, L, n.grid, cfg.packet);
    Interval I3 = n.interval.dilate(3.0);
    n.avg_f = local_average(n.f3, I3, cfg.p);
    n.avg_g = local_average(n.g3, I3, 1.0);
    return n;
}

EmbeddingSequence::EmbeddingSequence(const NodeFields& node, EmbeddingKind kind, const SparseConfig& cfg)
    : node_(&node), kind_(kind), cfg_(&cfg)
{
    prefixes_.push_back({});
    prefix_cells_.push_back(0);
    const TileGrid& g = *node.grid;
    const bool energy = kind == EmbeddingKind::energy;
    const double avg = energy ? node.avg_f : node.avg_g;
    const double expo = energy ? cfg.sigma : cfg.tau;
    scale_ = std::pow(node.interval.length, 1.0 / expo) * avg;
    if (g.tile_count() == 0 || avg == 0.0) return;

    const TentGeometry geo = cfg.tent_geometry();
    const double t_min = g.scales().back().t;
    family_.emplace(TentFamily::dyadic(node.grid, geo, node.interval.dilate(3.0), t_min));
    const SizeKind sk = energy ? SizeKind::energy : SizeKind::mass;
    const TileField G = masked(energy ? node.F : node.A, spatial_tent(node.interval, node.grid));
    const double lambda = cfg.embedding_K * avg;
    const double dx = node.f3.spacing;
    const long qcells = node.Q.size();
    const double budget_cells = cfg.c_initial * static_cast<double>(qcells);

    struct Candidate {
        CellRange J;
        std::vector<Tent> tents;
    };
    std::vector<Candidate> cands;
    for (long parts = 2; parts <= qcells && qcells % parts == 0; parts *= 2) {
        long len = qcells / parts;
        if (static_cast<double>(len) > budget_cells) continue;
        if (!(static_cast<double>(len) * dx > t_min)) break;
        for (long m = 0; m < parts; ++m) {
            Candidate c;
            c.J = {node.Q.lo + m * len, node.Q.lo + (m + 1) * len};
            Interval JI = cell_interval(node.f3, c.J);
            double h = (geo.beta_hi - geo.beta_lo) / JI.length;
            std::size_t nxi = static_cast<std::size_t>(std::ceil((g.eta_hi() - g.eta_lo()) / h - 1e-12)) + 1;
            for (std::size_t q = 0; q < nxi; ++q) c.tents.push_back({JI, g.eta_lo() + h * static_cast<double>(q)});
            cands.push_back(std::move(c));
        }
    }

    std::vector<CellRange> W;
    TileRegion removed(node.grid, false);
    std::vector<std::uint8_t> used(cands.size(), 0);
    for (std::size_t step = 0; step < cands.size(); ++step) {
        double best = 0.0;
        std::size_t arg = cands.size();
        for (std::size_t i = 0; i < cands.size(); ++i) {
            if (used[i]) continue;
            double s = 0.0;
            for (const auto& t : cands[i].tents) s = std::max(s, tent_size(sk, G, t, geo, &removed));
            double ex = s - lambda;
            if (ex > best) {
                best = ex;
                arg = i;
            }
        }
        if (arg == cands.size()) break;
        const CellRange J = cands[arg].J;
        std::vector<CellRange> next;
        for (const auto& w : W)
            if (!(w.lo >= J.lo && w.hi <= J.hi)) next.push_back(w);
        next.push_back(J);
        std::sort(next.begin(), next.end());
        long cells = total_cells(next);
        if (static_cast<double>(cells) > budget_cells) break;
        for (std::size_t i = 0; i < cands.size(); ++i)
            if (cands[i].J.lo >= J.lo && cands[i].J.hi <= J.hi) used[i] = 1;
        W = next;
        removed = tent_over_open_set(open_set_of(node.f3, W), node.grid);
        prefixes_.push_back(W);
        prefix_cells_.push_back(cells);
    }
}

double EmbeddingSequence::prefix_norm(std::size_t k)
{
    auto it = norms_.find(k);
    if (it != norms_.end()) return it->second;
    const NodeFields& node = *node_;
    double v = 0.0;
    if (family_) {
        const bool energy = kind_ == EmbeddingKind::energy;
        TileRegion keep = spatial_tent(node.interval, node.grid)
                              .minus(tent_over_open_set(open_set_of(node.f3, prefixes_[k]), node.grid));
        TileField G = masked(energy ? node.F : node.A, keep);
        v = outer_lp_norm(G, energy ? SizeKind::energy : SizeKind::mass, energy ? cfg_->sigma : cfg_->tau, *family_,
                          cfg_->norm);
    }
    norms_[k] = v;
    return v;
}

EmbeddingSet EmbeddingSequence::for_budget(double c)
{
    const double limit = c * static_cast<double>(node_->Q.size());
    std::size_t best = 0;
    double best_norm = kInf;
    for (std::size_t k = 0; k < prefixes_.size(); ++k) {
        if (static_cast<double>(prefix_cells_[k]) > limit) continue;
        double v = prefix_norm(k);
        if (v < best_norm) {
            best_norm = v;
            best = k;
        }
    }
    EmbeddingSet s;
    s.intervals = prefixes_[best];
    s.norm = best_norm;
    s.scale = scale_;
    if (scale_ > 0.0) s.achieved_K = best_norm / scale_;
    else s.achieved_K = best_norm > 0.0 ? kInf : 0.0;
    s.within_target = s.achieved_K <= cfg_->embedding_K;
    return s;
}

EmbeddingSet embedding_exceptional_set(const NodeFields& node, EmbeddingKind kind, double c, const SparseConfig& cfg)
{
    require(c > 0.0 && c < 1.0, ErrorKind::config, "budget c must lie in (0,1)");
    EmbeddingSequence seq(node, kind, cfg);
    return seq.for_budget(c);
}

ExceptionalSet exceptional_set(const NodeFields& node, const SparseConfig& cfg)
{
    cfg.validate();
    const long n = static_cast<long>(node.f3.size());
    require(node.Q.lo >= 0 && node.Q.hi <= n, ErrorKind::input, "node outside the sample grid");
    std::vector<double> mf = maximal_function_grid(node.f3, cfg.p);
    std::vector<double> mg = maximal_function_grid(node.g3, 1.0);

    std::optional<EmbeddingSequence> seqU, seqV;
    if (cfg.embedding_sets) {
        seqU.emplace(node, EmbeddingKind::energy, cfg);
        seqV.emplace(node, EmbeddingKind::mass, cfg);
    }
    std::vector<std::uint8_t> mark(static_cast<std::size_t>(node.Q.size()));
    for (std::size_t h = 0; h <= cfg.max_halvings; ++h) {
        const double c = std::ldexp(cfg.c_initial, -static_cast<int>(h));
        ExceptionalSet E;
        E.parent = node.Q;
        E.budget = c;
        E.halvings = h;
        std::fill(mark.begin(), mark.end(), 0);
        for (long k = node.Q.lo; k < node.Q.hi; ++k) {
            bool in = mf[static_cast<std::size_t>(k)] > node.avg_f / c || mg[static_cast<std::size_t>(k)] > node.avg_g / c;
            if (in) mark[static_cast<std::size_t>(k - node.Q.lo)] = 1;
        }
        if (seqU) {
            E.U = seqU->for_budget(c);
            E.V = seqV->for_budget(c);
            for (const auto* s : {&E.U, &E.V})
                for (const auto& J : s->intervals)
                    for (long k = J.lo; k < J.hi; ++k) mark[static_cast<std::size_t>(k - node.Q.lo)] = 1;
        }
        E.components = runs(mark, node.Q.lo);
        E.cells = total_cells(E.components);
        if (packing_holds(E.cells, node.Q.size(), cfg.packing_log2)) return E;
    }
    fail(ErrorKind::construction, "budget c did not reach the packing bound after " +
                                      std::to_string(cfg.max_halvings) + " halvings");
}

ExceptionalSet exceptional_set(const SampledSignal& f, const SampledSignal& g, const LinearizationData& L, CellRange Q,
                               const SparseConfig& cfg)
{
    NodeFields node = node_fields(f, g, L, Q, cfg);
    return exceptional_set(node, cfg);
}

NodeReport principal_iteration(const SampledSignal& f, const SampledSignal& g, const LinearizationData& L, CellRange Q,
                               const SparseConfig& cfg, std::size_t generation)
{
    NodeFields node = node_fields(f, g, L, Q, cfg);
    NodeReport rep;
    rep.Q = Q;
    rep.generation = generation;
    rep.E = exceptional_set(node, cfg);
    rep.tiles = node.grid->tile_count() > 0;
    if (!rep.tiles) return rep;

    const TileRegion TQ = spatial_tent(node.interval, node.grid);
    const TileRegion TE = tent_over_open_set(open_set_of(f, rep.E.components), node.grid);
    const TileRegion local = TQ.minus(TE);
    rep.local_term = bilinear_form_B(node.F, node.A, &local);
    rep.B_Q = bilinear_form_B(node.F, node.A, &TQ);
    double denom = node.interval.length * node.avg_f * node.avg_g;
    rep.local_ratio = denom > 0.0 ? rep.local_term / denom : 0.0;

    double rhs = rep.local_term;
    const CellRange Q3 = Q.dilate3();
    for (const auto& I : rep.E.components) {
        TileRegion TI = spatial_tent(cell_interval(f, I), node.grid);
        if (TI.count() == 0) continue;
        const CellRange I3 = I.dilate3();
        SampledSignal f_in = restricted(f, I3), f_out = restricted_minus(f, Q3, I3);
        SampledSignal g_in = restricted(g, I3), g_out = restricted_minus(g, Q3, I3);
        TileField Fi = field_F(f_in, node.grid, cfg.packet), Fo = field_F(f_out, node.grid, cfg.packet);
        TileField Ai = field_A(g_in, L, node.grid, cfg.packet), Ao = field_A(g_out, L, node.grid, cfg.packet);
        rhs += bilinear_form_B(Fi, Ai, &TI) + bilinear_form_B(Fi, Ao, &TI) + bilinear_form_B(Fo, Ai, &TI) +
               bilinear_form_B(Fo, Ao, &TI);
    }
    rep.decomposition_rhs = rhs;
    rep.decomposition_ok = rep.B_Q <= rhs * (1.0 + 1e-12) + 1e-300;
    return rep;
}

Certificate certify(const SparseCollection& S, const IterationTrace& trace, std::size_t packing_log2)
{
    Certificate c;
    auto note = [&](bool& flag, const std::string& what) {
        if (flag) c.message += (c.message.empty() ? "" : "; ") + what;
        flag = false;
    };
    if (trace.levels.empty()) return c;
    const long q0 = trace.levels.front().empty() ? 0 : trace.levels.front().front().size();
    for (const auto& node : trace.nodes) {
        long cells = 0;
        for (const auto& I : node.E.components) {
            cells += I.size();
            if (I.lo < node.Q.lo || I.hi > node.Q.hi || I.empty()) note(c.nesting, "child outside its parent");
        }
        if (!packing_holds(cells, node.Q.size(), packing_log2)) note(c.packing, "packing bound violated");
        __int128 scaled = static_cast<__int128>(node.Q.size()) << (packing_log2 * node.generation);
        if (scaled > static_cast<__int128>(q0)) note(c.size_decay, "generation size bound violated");
    }
    for (const auto& level : trace.levels) {
        std::vector<CellRange> v = level;
        std::sort(v.begin(), v.end());
        for (std::size_t i = 1; i < v.size(); ++i)
            if (v[i].lo < v[i - 1].hi) note(c.nesting, "same-generation intervals overlap");
    }
    std::vector<CellRange> all;
    const long full = (long{1} << packing_log2);
    for (const auto& m : S.members) {
        long w = 0;
        for (const auto& r : m.witness) {
            if (r.lo < m.Q.lo || r.hi > m.Q.hi) note(c.nesting, "witness outside its interval");
            w += r.size();
            all.push_back(r);
        }
        // |X_Q| >= (1 - 2^{-12}) |Q|, i.e. |X_Q| / |3Q| >= (1 - 2^{-12}) / 3
        if (static_cast<__int128>(w) * full < static_cast<__int128>(full - 1) * m.Q.size())
            note(c.eta_bound, "witness too small");
    }
    std::sort(all.begin(), all.end());
    for (std::size_t i = 1; i < all.size(); ++i)
        if (all[i].lo < all[i - 1].hi) note(c.disjoint, "witnesses overlap");
    return c;
}

SparseResult build_sparse(const SampledSignal& f, const SampledSignal& g, const LinearizationData& L, CellRange Q0,
                          const SparseConfig& cfg, double epsilon)
{
    cfg.validate();
    require(same_grid(f, g), ErrorKind::grid_mismatch, "f and g must share a grid");
    for (long k = 0; k < static_cast<long>(f.size()); ++k)
        if (!Q0.contains(k))
            require(f.samples[static_cast<std::size_t>(k)] == cplx(0.0, 0.0) &&
                        g.samples[static_cast<std::size_t>(k)] == cplx(0.0, 0.0),
                    ErrorKind::input, "f and g must be supported in Q0");
    SparseResult res;
    IterationTrace& tr = res.trace;
    const Interval I0 = cell_interval(f, Q0);
    if (epsilon <= 0.0) {
        auto grid = embedding_grid(f, I0, cfg.packet, cfg.grid, eta_lo_of(L), eta_hi_of(L));
        epsilon = grid->scales().empty() ? I0.length : grid->scales().back().t;
    }
    tr.epsilon = epsilon;
    std::size_t N = 0;
    while (!(std::ldexp(I0.length, -static_cast<int>(cfg.packing_log2 * N)) < epsilon)) {
        ++N;
        require(N <= cfg.generation_cap, ErrorKind::construction, "generation cap reached before the scale cutoff");
    }
    tr.N = N;
    tr.levels.push_back({Q0});
    for (std::size_t n = 0; n <= N; ++n) {
        std::vector<CellRange> next;
        for (const auto& Q : tr.levels[n]) {
            NodeReport rep = principal_iteration(f, g, L, Q, cfg, n);
            SparseCollection::Member m;
            m.Q = Q;
            long at = Q.lo;
            for (const auto& I : rep.E.components) {
                if (I.lo > at) m.witness.push_back({at, I.lo});
                at = I.hi;
                next.push_back(I);
            }
            if (at < Q.hi) m.witness.push_back({at, Q.hi});
            res.collection.members.push_back(std::move(m));
            tr.nodes.push_back(std::move(rep));
        }
        if (n < N) tr.levels.push_back(std::move(next));
    }
    res.collection.origin = f.origin;
    res.collection.spacing = f.spacing;
    double eta = 1.0;
    for (const auto& m : res.collection.members) {
        long w = 0;
        for (const auto& r : m.witness) w += r.size();
        eta = std::min(eta, static_cast<double>(w) / static_cast<double>(3 * m.Q.size()));
    }
    res.collection.eta = eta;
    res.certificate = certify(res.collection, tr, cfg.packing_log2);
    return res;
}

double sparse_form(const SampledSignal& f, const SampledSignal& g, const SparseCollection& S, double p)
{
    double s = 0.0;
    for (std::size_t i = 0; i < S.members.size(); ++i) {
        Interval I = S.interval(i);
        s += I.length * local_average(f, I, p) * local_average(g, I, 1.0);
    }
    return s;
}

DominationReport verify_domination(const SampledSignal& f, const SampledSignal& g, const SparseCollection& S, double p,
                                   double r, const FrequencyGrid& grid)
{
    DominationReport rep;
    rep.lhs = dual_pairing(f, g, grid, r);
    rep.rhs = sparse_form(f, g, S, p);
    if (rep.rhs > 0.0) rep.ratio = rep.lhs / rep.rhs;
    else rep.ratio = rep.lhs > 0.0 ? kInf : 0.0;
    return rep;
}

TileGridPtr box_grid(const Interval& P, std::size_t u_points, std::size_t t_points, double c_eta, double eta_lo,
                     double eta_hi)
{
    require(u_points >= 1 && t_points >= 1, ErrorKind::config, "box grid needs points");
    std::vector<double> ts, dts;
    for (std::size_t m = 0; m < t_points; ++m) {
        double t = P.length * std::exp2(-static_cast<double>(m + 1) / static_cast<double>(t_points));
        ts.push_back(t);
        dts.push_back(t * std::log(2.0) / static_cast<double>(t_points));
    }
    double du = P.length / static_cast<double>(u_points);
    return std::make_shared<const TileGrid>(P.lo() + 0.5 * du, du, u_points, ts, dts, c_eta, eta_lo, eta_hi);
}

BoxNorms box_norms(const SampledSignal* f, const SampledSignal* g, const LinearizationData* L, const Interval& P,
                   const SparseConfig& cfg, double eta_lo, double eta_hi, std::size_t u_points, std::size_t t_points)
{
    auto grid = box_grid(P, u_points, t_points, cfg.grid.c_eta, eta_lo, eta_hi);
    const TentGeometry geo = cfg.tent_geometry();
    TentFamily family = TentFamily::dyadic(grid, geo, P.dilate(3.0), 0.5 * P.length);
    BoxNorms out;
    if (f && !is_zero(*f)) {
        TileField F = embed_F_direct_field(*f, grid, cfg.packet);
        out.F = outer_lp_norm(F, SizeKind::energy, cfg.sigma, family, cfg.norm);
    }
    if (g && !is_zero(*g)) {
        require(L != nullptr, ErrorKind::config, "mass box norm needs a linearization");
        TileField A = embed_A_direct_field(*g, *L, grid, cfg.packet);
        out.A = outer_lp_norm(A, SizeKind::mass, cfg.tau, family, cfg.norm);
    }
    return out;
}

std::vector<TailRow> tail_decay_check(const SampledSignal& f, const SampledSignal& g, const LinearizationData& L,
                                      CellRange I, CellRange Q, std::size_t max_k, const SparseConfig& cfg,
                                      double exponent)
{
    cfg.validate();
    const CellRange I3 = I.dilate3();
    SampledSignal f_in = restricted(f, I3);
    SampledSignal g_out = restricted_minus(g, Q.dilate3(), I3);
    std::vector<TailRow> rows;
    const double res = resolvable_scale(f.spacing, cfg.packet);
    for (std::size_t k = 0; k <= max_k; ++k) {
        long parts = long{1} << k;
        if (I.size() % parts != 0) break;
        long len = I.size() / parts;
        if (0.5 * static_cast<double>(len) * f.spacing < res) break;
        TailRow row;
        row.k = k;
        for (long m = 0; m < parts; ++m) {
            CellRange Pc{I.lo + m * len, I.lo + (m + 1) * len};
            Interval P = cell_interval(f, Pc);
            row.sum_length += P.length;
            BoxNorms b = box_norms(&f_in, &g_out, &L, P, cfg, eta_lo_of(L), eta_hi_of(L));
            row.term += b.F * b.A;
        }
        rows.push_back(row);
    }
    if (rows.empty()) return rows;
    const double t0 = rows.front().term;
    for (auto& r : rows) {
        double two_k = std::ldexp(1.0, static_cast<int>(r.k));
        r.bound = t0 * two_k * std::pow(0.5 * (1.0 + two_k), -exponent);
        r.pass = r.term <= r.bound * (1.0 + 1e-9) + 1e-300;
    }
    return rows;
}

} // namespace vcarl
