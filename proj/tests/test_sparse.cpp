#include "vcarl/sparse.hpp"
#include "vcarl/corpus.hpp"

#include "doctest.h"

#include <cmath>
#include <random>

using namespace vcarl;

namespace {

const FrequencyGrid kGrid = FrequencyGrid::uniform(-512.0, 512.0, 8);

SparseConfig small_config()
{
    SparseConfig c;
    c.generation_cap = 4;
    return c;
}

CellRange whole(const SampledSignal& f) { return {0, static_cast<long>(f.size())}; }

SampledSignal constant(std::size_t n, double v)
{
    SampledSignal s = unit_grid(n);
    for (auto& z : s.samples) z = v;
    return s;
}

long cells_of(const std::vector<CellRange>& v)
{
    long s = 0;
    for (const auto& c : v) s += c.size();
    return s;
}

// Tile membership in T(E) decided one tile at a time.
bool in_tent_union(const Tile& x, const OpenSet& E)
{
    for (const auto& I : E.components)
        if (x.t < I.length && std::abs(x.u - I.center) < I.length - x.t) return true;
    return false;
}

} // namespace

TEST_CASE("exceptional set of zero inputs is empty")
{
    SampledSignal z = unit_grid(256);
    LinearizationData L = argmax_linearization(z, kGrid, 3.0);
    ExceptionalSet E = exceptional_set(z, z, L, whole(z), small_config());
    CHECK(E.components.empty());
    CHECK(E.cells == 0);
    CHECK(E.halvings == 0);
    CHECK(E.U.intervals.empty());
    CHECK(E.V.intervals.empty());
}

TEST_CASE("exceptional set around a spike matches the direct level sets")
{
    std::mt19937_64 rng(11);
    SampledSignal f = smooth_packet_signal(256, rng);
    f.samples[100] = f.samples[101] = 40.0;
    SampledSignal g = constant(256, 0.1);
    LinearizationData L = argmax_linearization(f, kGrid, 3.0, &g);
    SparseConfig cfg = small_config();
    cfg.packing_log2 = 4;
    cfg.embedding_sets = false;
    NodeFields node = node_fields(f, g, L, whole(f), cfg);
    ExceptionalSet E = exceptional_set(node, cfg);

    REQUIRE(!E.components.empty());
    CHECK(packing_holds(E.cells, 256, 4));
    CHECK(E.cells == cells_of(E.components));
    for (const auto& I : E.components) {
        CHECK(I.lo >= 0);
        CHECK(I.hi <= 256);
        CHECK(I.lo <= 101);
        CHECK(I.hi > 100);
    }
    // pointwise level sets for the accepted budget, and failure at twice the budget
    auto marked = [&](double c) {
        std::vector<std::uint8_t> m(256, 0);
        for (std::size_t k = 0; k < 256; ++k)
            m[k] = maximal_function(node.f3, cfg.p, f.x(k)) > node.avg_f / c ||
                   maximal_function(node.g3, 1.0, f.x(k)) > node.avg_g / c;
        return m;
    };
    std::vector<std::uint8_t> m = marked(E.budget);
    long count = 0;
    for (std::size_t k = 0; k < 256; ++k) {
        bool in = false;
        for (const auto& I : E.components) in = in || I.contains(static_cast<long>(k));
        CHECK(in == static_cast<bool>(m[k]));
        count += m[k];
    }
    CHECK(count == E.cells);
    if (E.halvings > 0) {
        std::vector<std::uint8_t> m2 = marked(2.0 * E.budget);
        long c2 = 0;
        for (auto v : m2) c2 += v;
        CHECK(!packing_holds(c2, 256, 4));
    }
}

TEST_CASE("children meet the complement in their triple and the maximal bound holds there")
{
    std::mt19937_64 rng(5);
    SparseConfig cfg = small_config();
    cfg.packing_log2 = 3;
    for (int trial = 0; trial < 4; ++trial) {
        SampledSignal f = smooth_packet_signal(256, rng);
        add_spike(f, rng, 30.0, 3);
        SampledSignal g = smooth_bump_signal(256, rng);
        LinearizationData L = argmax_linearization(f, kGrid, 3.0, &g);
        NodeFields node = node_fields(f, g, L, whole(f), cfg);
        ExceptionalSet E = exceptional_set(node, cfg);
        CHECK(packing_holds(E.cells, 256, 3));
        std::vector<double> mf = maximal_function_grid(node.f3, cfg.p);
        std::vector<double> mg = maximal_function_grid(node.g3, 1.0);
        for (const auto& I : E.components) {
            CellRange I3 = I.dilate3();
            bool outside = I3.lo < 0 || I3.hi > 256;
            double inf_f = kInf, inf_g = kInf;
            for (long k = std::max<long>(I3.lo, 0); k < std::min<long>(I3.hi, 256); ++k) {
                bool in_E = false;
                for (const auto& J : E.components) in_E = in_E || J.contains(k);
                if (in_E) continue;
                outside = true;
                inf_f = std::min(inf_f, mf[static_cast<std::size_t>(k)]);
                inf_g = std::min(inf_g, mg[static_cast<std::size_t>(k)]);
            }
            CHECK(outside);
            if (inf_f < kInf) {
                CHECK(inf_f <= node.avg_f / E.budget);
                CHECK(inf_g <= node.avg_g / E.budget);
            }
        }
    }
}

TEST_CASE("embedding exceptional sets")
{
    SparseConfig cfg = small_config();
    SampledSignal z = unit_grid(256);
    LinearizationData L0 = argmax_linearization(z, kGrid, 3.0);
    NodeFields zero = node_fields(z, z, L0, whole(z), cfg);
    CHECK(embedding_exceptional_set(zero, EmbeddingKind::energy, 0.1, cfg).intervals.empty());
    CHECK(embedding_exceptional_set(zero, EmbeddingKind::mass, 0.1, cfg).intervals.empty());

    // h = 1 on all of 3Q: Q is the middle third of the window
    SampledSignal one = constant(384, 1.0);
    LinearizationData L1 = argmax_linearization(one, kGrid, 3.0, &one);
    NodeFields flat = node_fields(one, one, L1, {128, 256}, cfg);
    for (EmbeddingKind kind : {EmbeddingKind::energy, EmbeddingKind::mass}) {
        for (double c : {0.25, 0.0625, 1.0 / 64.0}) {
            EmbeddingSet W = embedding_exceptional_set(flat, kind, c, cfg);
            CHECK(static_cast<double>(cells_of(W.intervals)) <= c * 128.0);
            CHECK(W.within_target);
            CHECK(W.norm <= cfg.embedding_K * W.scale * (1.0 + 1e-12));
        }
    }

    std::mt19937_64 rng(8);
    SampledSignal f = smooth_packet_signal(256, rng);
    add_spike(f, rng, 25.0, 2);
    SampledSignal g = smooth_bump_signal(256, rng);
    LinearizationData L = argmax_linearization(f, kGrid, 3.0, &g);
    NodeFields node = node_fields(f, g, L, whole(f), cfg);
    for (EmbeddingKind kind : {EmbeddingKind::energy, EmbeddingKind::mass}) {
        EmbeddingSequence seq(node, kind, cfg);
        double prev = kInf;
        for (double c : {1.0 / 256.0, 1.0 / 64.0, 1.0 / 16.0, 0.25, 0.5}) {
            EmbeddingSet W = seq.for_budget(c);
            CHECK(static_cast<double>(cells_of(W.intervals)) <= c * 256.0);
            CHECK(W.achieved_K <= prev * (1.0 + 1e-12));
            if (W.scale > 0.0) CHECK(W.achieved_K == doctest::Approx(W.norm / W.scale).epsilon(1e-12));
            prev = W.achieved_K;
            for (const auto& J : W.intervals) {
                CHECK(J.lo >= 0);
                CHECK(J.hi <= 256);
            }
        }
    }
    CHECK_THROWS_AS(embedding_exceptional_set(node, EmbeddingKind::energy, 1.0, cfg), Error);
}

TEST_CASE("tent over an open set")
{
    int n = 64;
    std::vector<double> t{0.25, 0.125, 0.0625, 0.03125}, dt;
    for (double s : t) dt.push_back(s * std::log(2.0));
    auto grid = std::make_shared<const TileGrid>(0.0, 1.0 / n, n + 1, t, dt, 1.0, -200.0, 200.0);

    OpenSet empty;
    CHECK(tent_over_open_set(empty, grid).count() == 0);

    OpenSet one;
    Interval I = Interval::from_endpoints(0.125, 0.25);
    one.add(I);
    CHECK(tent_over_open_set(one, grid).mask == spatial_tent(I, grid).mask);

    OpenSet two;
    // far enough apart that the tents, which sit over 2I, do not meet
    Interval J = Interval::from_endpoints(0.625, 0.875);
    two.add(I);
    two.add(J);
    TileRegion r2 = tent_over_open_set(two, grid);
    TileRegion rI = spatial_tent(I, grid), rJ = spatial_tent(J, grid);
    CHECK(r2.count() == rI.count() + rJ.count());
    for (std::size_t i = 0; i < r2.mask.size(); ++i) {
        CHECK(!(rI.mask[i] && rJ.mask[i]));
        CHECK(static_cast<bool>(r2.mask[i]) == in_tent_union(grid->tile(i), two));
    }
    CHECK(r2.count() > 0);
}

TEST_CASE("principal iteration")
{
    SparseConfig cfg = small_config();
    SampledSignal z = unit_grid(256);
    LinearizationData L0 = argmax_linearization(z, kGrid, 3.0);
    NodeReport r0 = principal_iteration(z, z, L0, whole(z), cfg);
    CHECK(r0.E.components.empty());
    CHECK(r0.local_term == 0.0);
    CHECK(r0.decomposition_ok);

    std::mt19937_64 rng(21);
    for (int trial = 0; trial < 3; ++trial) {
        SampledSignal f = smooth_packet_signal(256, rng);
        SampledSignal g = smooth_bump_signal(256, rng);
        LinearizationData L = argmax_linearization(f, kGrid, 3.0, &g);
        SparseConfig c = cfg;
        c.packing_log2 = 3;
        NodeReport r = principal_iteration(f, g, L, whole(f), c);
        CHECK(packing_holds(r.E.cells, 256, 3));
        CHECK(r.local_term >= 0.0);
        CHECK(r.local_term <= r.B_Q * (1.0 + 1e-12));
        CHECK(r.decomposition_ok);
        CHECK(std::isfinite(r.local_ratio));
    }
}

TEST_CASE("tail decay table")
{
    SparseConfig cfg = small_config();
    std::mt19937_64 rng(2);
    FrequencyGrid wide = FrequencyGrid::uniform(-3000.0, 3000.0, 3);
    SampledSignal f = smooth_packet_signal(1024, rng);
    SampledSignal g = smooth_bump_signal(1024, rng);
    LinearizationData L = argmax_linearization(f, wide, 3.0, &g);
    CellRange Q{0, 1024}, I{384, 512};

    // g vanishing off 3I leaves nothing for the tail
    SampledSignal g_in = restricted(g, I.dilate3());
    auto rows0 = tail_decay_check(f, g_in, L, I, Q, 2, cfg);
    REQUIRE(rows0.size() == 3);
    for (const auto& r : rows0) {
        CHECK(r.term == 0.0);
        CHECK(r.pass);
    }

    auto rows = tail_decay_check(f, g, L, I, Q, 6, cfg);
    REQUIRE(rows.size() >= 2);
    for (std::size_t k = 0; k < rows.size(); ++k) {
        CHECK(rows[k].k == k);
        CHECK(rows[k].sum_length == doctest::Approx(128.0 / 1024.0).epsilon(1e-12));
        CHECK(rows[k].pass);
    }
    CHECK(rows.size() <= 3); // parts too fine for the resolvable scale are dropped
}

TEST_CASE("box norms decay with distance")
{
    SparseConfig cfg = small_config();
    std::mt19937_64 rng(4);
    FrequencyGrid wide = FrequencyGrid::uniform(-3000.0, 3000.0, 3);
    SampledSignal base = unit_grid(1024);
    LinearizationData L = random_linearization(wide, 1024, 3.0, rng);
    Interval P{0.25, 1.0 / 16.0};
    auto bump_at = [&](double D) {
        SampledSignal h = base;
        double c = P.hi() + (D + 0.25) * P.length; // support at distance D |P|
        for (std::size_t k = 0; k < h.size(); ++k) {
            double s = (h.x(k) - c) / (0.25 * P.length);
            h.samples[k] = std::abs(s) < 1.0 ? std::exp(-1.0 / (1.0 - s * s)) * std::polar(1.0, 1500.0 * h.x(k)) : 0.0;
        }
        return h;
    };
    // the constant is fixed at D = |P|; beyond it the rate must be at least 20
    SampledSignal h1 = bump_at(1.0);
    BoxNorms b1 = box_norms(&h1, &h1, &L, P, cfg, -4000.0, 4000.0);
    REQUIRE(b1.F > 0.0);
    REQUIRE(b1.A > 0.0);
    for (double D : {2.0, 4.0}) {
        SampledSignal h = bump_at(D);
        BoxNorms b = box_norms(&h, &h, &L, P, cfg, -4000.0, 4000.0);
        CHECK(b.F <= b1.F * std::pow(0.5 * (1.0 + D), -20.0));
        CHECK(b.A <= b1.A * std::pow(0.5 * (1.0 + D), -20.0));
    }
    SampledSignal z = unit_grid(1024);
    BoxNorms bz = box_norms(&z, &z, &L, P, cfg, -4000.0, 4000.0);
    CHECK(bz.F == 0.0);
    CHECK(bz.A == 0.0);
}

TEST_CASE("sparse collection of zero inputs is the tripled root")
{
    SparseConfig cfg = small_config();
    SampledSignal z = unit_grid(256);
    LinearizationData L = argmax_linearization(z, kGrid, 3.0);
    SparseResult res = build_sparse(z, z, L, whole(z), cfg);
    REQUIRE(res.collection.members.size() == 1);
    const auto& m = res.collection.members[0];
    CHECK(m.Q == whole(z));
    REQUIRE(m.witness.size() == 1);
    CHECK(m.witness[0] == whole(z));
    Interval I = res.collection.interval(0);
    CHECK(I.center == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(I.length == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(res.collection.eta == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
    CHECK(res.certificate.ok());
    DominationReport d = verify_domination(z, z, res.collection, 1.5, 3.0, kGrid);
    CHECK(d.lhs == 0.0);
    CHECK(d.ratio == 0.0);
}

TEST_CASE("sparse collection certificates with a small packing exponent")
{
    // a small exponent lets children appear at desk-scale sizes
    SparseConfig cfg = small_config();
    cfg.packing_log2 = 2;
    cfg.embedding_sets = false;
    std::mt19937_64 rng(31);
    bool any_children = false;
    for (int trial = 0; trial < 3; ++trial) {
        SampledSignal f = smooth_packet_signal(1024, rng);
        add_spike(f, rng, 60.0, 8);
        SampledSignal g = smooth_bump_signal(1024, rng);
        LinearizationData L = argmax_linearization(f, kGrid, 3.0, &g);
        SparseResult res = build_sparse(f, g, L, whole(f), cfg, 0.1);
        CHECK(res.certificate.ok());
        any_children = any_children || res.trace.levels.size() > 1 && !res.trace.levels[1].empty();
        const double q0 = 1024.0;
        for (std::size_t n = 0; n < res.trace.levels.size(); ++n)
            for (const auto& Q : res.trace.levels[n])
                CHECK(static_cast<double>(Q.size()) <= std::ldexp(q0, -2 * static_cast<int>(n)));
        CHECK(std::ldexp(1.0, -2 * static_cast<int>(res.trace.N)) < 0.1);
        if (res.trace.N > 0) CHECK(!(std::ldexp(1.0, -2 * static_cast<int>(res.trace.N - 1)) < 0.1));
        // witnesses: disjoint, inside their node, |X_Q| >= (1 - 1/4)|Q|
        std::vector<CellRange> all;
        for (const auto& m : res.collection.members) {
            long w = cells_of(m.witness);
            CHECK(4 * w >= 3 * m.Q.size());
            for (const auto& r : m.witness) {
                CHECK(r.lo >= m.Q.lo);
                CHECK(r.hi <= m.Q.hi);
                all.push_back(r);
            }
        }
        std::sort(all.begin(), all.end());
        for (std::size_t i = 1; i < all.size(); ++i) CHECK(all[i].lo >= all[i - 1].hi);
        CHECK(res.collection.eta >= 0.25 - 1e-15);
        DominationReport d = verify_domination(f, g, res.collection, 1.5, 3.0, kGrid);
        CHECK(std::isfinite(d.ratio));
        CHECK(d.rhs > 0.0);
    }
    CHECK(any_children);
}

TEST_CASE("certificate rejects broken collections")
{
    SparseCollection S;
    S.members.push_back({{0, 64}, {{0, 64}}});
    S.members.push_back({{16, 32}, {{16, 32}}});
    IterationTrace tr;
    tr.levels = {{{0, 64}}, {{16, 32}}};
    NodeReport root;
    root.Q = {0, 64};
    root.E.components = {{8, 32}};
    NodeReport child;
    child.Q = {16, 32};
    child.generation = 1;
    tr.nodes = {root, child};
    Certificate c = certify(S, tr, 2);
    CHECK(!c.disjoint);
    CHECK(!c.packing); // 24 cells exceed 64 / 4
    CHECK(!c.ok());
    CHECK(!c.message.empty());

    S.members[0].witness = {{0, 16}, {32, 64}};
    tr.nodes[0].E.components = {{16, 32}};
    Certificate c2 = certify(S, tr, 2);
    CHECK(c2.ok()); // 48 of 64 cells is exactly 3/4

    S.members[0].witness = {{0, 16}, {40, 64}};
    Certificate c3 = certify(S, tr, 2);
    CHECK(c3.disjoint);
    CHECK(!c3.eta_bound);
}

TEST_CASE("domination report")
{
    std::mt19937_64 rng(17);
    SparseConfig cfg = small_config();
    SampledSignal f = smooth_packet_signal(256, rng);
    SampledSignal g = smooth_bump_signal(256, rng);
    LinearizationData L = argmax_linearization(f, kGrid, 3.0, &g);
    SparseResult res = build_sparse(f, g, L, whole(f), cfg);
    CHECK(res.certificate.ok());
    DominationReport d = verify_domination(f, g, res.collection, 1.5, 3.0, kGrid);
    CHECK(d.lhs > 0.0);
    CHECK(d.ratio == doctest::Approx(d.lhs / d.rhs).epsilon(1e-15));

    SampledSignal af = f;
    for (auto& s : af.samples) s = std::abs(s);
    CHECK(sparse_form(af, g, res.collection, 1.5) == sparse_form(f, g, res.collection, 1.5));

    SampledSignal z = unit_grid(256);
    CHECK(verify_domination(f, z, res.collection, 1.5, 3.0, kGrid).lhs == 0.0);

    SampledSignal outside = f;
    outside.samples[0] = 1.0;
    CHECK_THROWS_AS(build_sparse(outside, g, L, {8, 248}, cfg), Error);
}

TEST_CASE("packing comparison is exact")
{
    CHECK(packing_holds(0, 1, 12));
    CHECK(packing_holds(1, 4096, 12));
    CHECK(!packing_holds(1, 4095, 12));
    CHECK(packing_holds(2, 8192, 12));
    CHECK(!packing_holds(3, 8192, 12));
    CHECK(packing_holds(long{1} << 40, long{1} << 52, 12));
}
