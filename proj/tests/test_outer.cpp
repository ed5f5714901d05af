#include "vcarl/outer.hpp"

#include "doctest.h"

#include <cmath>
#include <random>

using namespace vcarl;

namespace {

const WavePacketParams kP{};
const TentGeometry kGeo = TentGeometry::defaults(kP);

TileGridPtr small_grid()
{
    std::vector<double> t{0.25, 0.125, 0.0625}, dt;
    for (double s : t) dt.push_back(s * std::log(2.0));
    return std::make_shared<TileGrid>(0.0, 1.0 / 64.0, 65, t, dt, 1.0, -800.0, 800.0);
}

TileField random_field(const TileGridPtr& g, std::mt19937_64& rng)
{
    TileField F(g);
    std::exponential_distribution<double> E(1.0);
    for (auto& v : F.values) v = E(rng);
    return F;
}

TileRegion tent_region(const TileGridPtr& g, const Tent& T)
{
    TileRegion r(g, false);
    for (std::size_t i = 0; i < r.mask.size(); ++i)
        r.mask[i] = tent_membership(g->tile(i), T, kGeo) != Membership::outside;
    return r;
}

// Direct summation over tiles classified one by one.
double direct_size(SizeKind kind, const TileField& F, const Tent& T)
{
    const TileGrid& g = *F.grid;
    double lac = 0.0, all = 0.0, over = 0.0, sup = 0.0;
    for (std::size_t k = 0; k < g.scales().size(); ++k)
        for (std::size_t j = 0; j < g.scales()[k].eta_count; ++j)
            for (std::size_t i = 0; i < g.u_count(); ++i) {
                std::size_t idx = g.index(k, j, i);
                Membership m = tent_membership(g.tile(k, j, i), T, kGeo);
                if (m == Membership::outside) continue;
                double v = std::abs(F.values[idx]), w = g.weight(k);
                sup = std::max(sup, v);
                all += v * v * w;
                if (m == Membership::lacunary) lac += v * v * w;
                else over += v * w;
            }
    double L = T.I.length;
    return kind == SizeKind::energy ? std::sqrt(lac / L) + sup : std::sqrt(all / L) + over / L;
}

// Cheapest subfamily covering E, by enumeration.
double exhaustive_cover(const TileRegion& E, const TentFamily& fam)
{
    double best = kInf;
    std::vector<TileRegion> regs;
    for (std::size_t i = 0; i < fam.size(); ++i) regs.push_back(fam.region(i));
    for (std::uint32_t mask = 0; mask < (1u << fam.size()); ++mask) {
        double len = 0.0;
        std::vector<std::uint8_t> cov(E.mask.size(), 0);
        for (std::size_t i = 0; i < fam.size(); ++i)
            if (mask >> i & 1) {
                len += fam.tent(i).I.length;
                for (std::size_t q = 0; q < cov.size(); ++q) cov[q] |= regs[i].mask[q];
            }
        bool ok = true;
        for (std::size_t q = 0; q < cov.size() && ok; ++q) ok = !E.mask[q] || cov[q];
        if (ok) best = std::min(best, len);
    }
    return best;
}

} // namespace

TEST_CASE("tent membership examples")
{
    Tent T{{0.5, 0.5}, 0.0};
    CHECK(tent_membership({0.5, 0.5, 0.0}, T, kGeo) == Membership::outside);
    CHECK(tent_membership({0.5, 0.6, 0.0}, T, kGeo) == Membership::outside);
    CHECK(tent_membership({0.5, 0.1, 0.0}, T, kGeo) == Membership::overlap);
    double mid = 0.5 * (kGeo.alpha_hi + kGeo.beta_hi);
    CHECK(tent_membership({0.5, 0.1, mid / 0.1}, T, kGeo) == Membership::lacunary);
    CHECK(tent_membership({0.5, 0.1, 1.01 * kGeo.alpha_hi / 0.1}, T, kGeo) == Membership::outside);
    // |u - c| < |I| - t is strict
    CHECK(tent_membership({0.5 + 0.4, 0.1, 0.0}, T, kGeo) == Membership::outside);
    CHECK(tent_membership({0.5 + 0.39, 0.1, 0.0}, T, kGeo) == Membership::overlap);
    CHECK_THROWS_AS(TentGeometry({-10.0, 10.0, -50.0, 50.0}).validate(kP), Error);
}

TEST_CASE("sizes: zero, direct summation, homogeneity, block bookkeeping")
{
    auto g = small_grid();
    std::mt19937_64 rng(31);
    TileField Z(g);
    Tent T{{0.5, 0.5}, 40.0};
    CHECK(size_e(Z, T, kGeo) == 0.0);
    CHECK(size_m(Z, T, kGeo) == 0.0);

    TileField one(g);
    for (auto& v : one.values) v = 1.0;
    CHECK(size_e(one, T, kGeo) == doctest::Approx(direct_size(SizeKind::energy, one, T)).epsilon(1e-12));
    CHECK(size_m(one, T, kGeo) == doctest::Approx(direct_size(SizeKind::mass, one, T)).epsilon(1e-12));

    for (int trial = 0; trial < 10; ++trial) {
        TileField F = random_field(g, rng);
        std::uniform_real_distribution<double> U(0.0, 1.0);
        double len = 0.1 + 0.9 * U(rng);
        Tent R{{U(rng), len}, -600.0 + 1200.0 * U(rng)};
        double se = size_e(F, R, kGeo), sm = size_m(F, R, kGeo);
        CHECK(se == doctest::Approx(direct_size(SizeKind::energy, F, R)).epsilon(1e-12));
        CHECK(sm == doctest::Approx(direct_size(SizeKind::mass, F, R)).epsilon(1e-12));
        TileField G = F;
        for (auto& v : G.values) v *= -2.5;
        CHECK(size_e(G, R, kGeo) == doctest::Approx(2.5 * se).epsilon(1e-12));
        CHECK(size_m(G, R, kGeo) == doctest::Approx(2.5 * sm).epsilon(1e-12));
        TentFamily fam(g, kGeo, {R});
        CHECK(fam.region(0).mask == tent_region(g, R).mask);
    }
}

TEST_CASE("outer measure: empty, single tent, separated tents vs exhaustive search")
{
    auto g = small_grid();
    std::vector<Tent> tents{{{0.25, 0.5}, 0.0},   {{0.75, 0.5}, 0.0},  {{0.5, 1.0}, 0.0},
                            {{0.125, 0.25}, 0.0}, {{0.875, 0.25}, 0.0}, {{0.375, 0.25}, 0.0},
                            {{0.25, 0.5}, 400.0}, {{0.5, 1.0}, 300.0}};
    TentFamily fam(g, kGeo, tents);
    CHECK(outer_measure(TileRegion(g, false), fam) == 0.0);
    for (std::size_t i = 0; i < fam.size(); ++i)
        CHECK(outer_measure(fam.region(i), fam) == doctest::Approx(fam.tent(i).I.length));

    TileRegion two = tent_region(g, {{0.125, 0.25}, 0.0}).unite(tent_region(g, {{0.875, 0.25}, 0.0}));
    CHECK(outer_measure(two, fam) == doctest::Approx(0.5));
    CHECK(exhaustive_cover(two, fam) == doctest::Approx(0.5));

    std::mt19937_64 rng(32);
    for (int trial = 0; trial < 20; ++trial) {
        TileRegion E(g, false);
        for (int q = 0; q < 3; ++q) {
            TileRegion r = fam.region(rng() % fam.size());
            for (std::size_t i = 0; i < E.mask.size(); ++i)
                if (r.mask[i] && rng() % 4 == 0) E.mask[i] = 1;
        }
        double greedy = outer_measure(E, fam), exact = exhaustive_cover(E, fam);
        CHECK(greedy >= exact - 1e-12);
        CHECK(greedy <= 2.0 * exact + 1e-12);
    }

    TentFamily left(g, kGeo, {tents[0]});
    TileRegion stray(g, false);
    stray.mask[g->index(0, 0, 60)] = 1; // u = 0.9375, spatially outside the only tent
    CHECK_THROWS_AS(outer_measure(stray, left), Error);
}

TEST_CASE("outer measure: monotone and subadditive on random regions")
{
    auto g = small_grid();
    TentFamily fam = TentFamily::dyadic(g, kGeo, {0.5, 1.0}, 0.0625);
    REQUIRE(fam.size() > 0);
    std::mt19937_64 rng(33);
    TileRegion coverable(g, false);
    for (std::size_t i = 0; i < fam.size(); ++i) coverable = coverable.unite(fam.region(i));
    auto random_region = [&](int density) {
        TileRegion r(g, false);
        for (std::size_t i = 0; i < r.mask.size(); ++i) r.mask[i] = coverable.mask[i] && rng() % 1000 < density;
        return r;
    };
    for (int trial = 0; trial < 10; ++trial) {
        TileRegion E1 = random_region(2), E2 = random_region(2);
        TileRegion big = E1.unite(random_region(5));
        CHECK(outer_measure_within(E1, big, fam) <= outer_measure(big, fam) + 1e-12);
        CHECK(outer_measure_union(E1, E2, fam) <= outer_measure(E1, fam) + outer_measure(E2, fam) + 1e-12);
    }
}

TEST_CASE("super-level measure examples")
{
    auto g = small_grid();
    Tent T{{0.5, 1.0}, 0.0};
    TentFamily fam = TentFamily::dyadic(g, kGeo, T.I, 0.0625);
    TileField F(g);
    TileRegion r = tent_region(g, T);
    std::mt19937_64 rng(34);
    for (std::size_t i = 0; i < F.values.size(); ++i)
        if (r.mask[i]) F.values[i] = 0.5 + (rng() % 100) / 100.0;
    double sup = global_sup_size(SizeKind::energy, F, fam);
    CHECK(super_level_measure(F, SizeKind::energy, sup, fam) == 0.0);
    CHECK(super_level_measure(F, SizeKind::energy, 1e-9, fam) == doctest::Approx(1.0));

    TileField R = random_field(g, rng);
    double prev = kInf;
    double s = global_sup_size(SizeKind::mass, R, fam);
    for (int i = 0; i <= 20; ++i) {
        double m = super_level_measure(R, SizeKind::mass, s * i / 20.0, fam);
        CHECK(m <= prev + 1e-12);
        prev = m;
    }
}

TEST_CASE("outer L^p norm: zero, homogeneity, single tent closed form")
{
    auto g = small_grid();
    std::mt19937_64 rng(35);
    TentFamily fam = TentFamily::dyadic(g, kGeo, {0.5, 1.0}, 0.0625);
    CHECK(outer_lp_norm(TileField(g), SizeKind::energy, 2.0, fam) == 0.0);
    TileField F = random_field(g, rng);
    for (SizeKind k : {SizeKind::energy, SizeKind::mass}) {
        double a = outer_lp_norm(F, k, 1.6, fam);
        TileField G = F;
        for (auto& v : G.values) v *= 3.0;
        CHECK(a > 0.0);
        CHECK(outer_lp_norm(G, k, 1.6, fam) == doctest::Approx(3.0 * a).epsilon(0.05));
    }

    // constant field on one tent, family of that tent alone
    Tent T{{0.5, 0.5}, 100.0};
    TentFamily single(g, kGeo, {T});
    TileField C(g);
    TileRegion r = tent_region(g, T);
    for (std::size_t i = 0; i < C.values.size(); ++i) C.values[i] = r.mask[i] ? 2.0 : 0.0;
    for (double p : {1.5, 8.0 / 3.0}) {
        double s = size_e(C, T, kGeo);
        double closed = std::pow(T.I.length, 1.0 / p) * s;
        CHECK(outer_lp_norm(C, SizeKind::energy, p, single) == doctest::Approx(closed).epsilon(0.01));
    }
}

TEST_CASE("outer Hoelder: zero fields, constants, random triples")
{
    auto g = small_grid();
    std::mt19937_64 rng(36);
    Tent T{{0.5, 0.75}, -50.0};
    TileField Z(g), one(g);
    for (auto& v : one.values) v = 1.0;
    HolderCheck h0 = outer_holder_check(Z, one, T, kGeo);
    CHECK(h0.lhs == 0.0);
    CHECK(h0.pass);
    HolderCheck h1 = outer_holder_check(one, one, T, kGeo);
    CHECK(h1.lhs > 0.0);
    CHECK(h1.pass_literal);
    // direct summation of the left side
    double lhs = 0.0;
    for (std::size_t k = 0; k < g->scales().size(); ++k)
        for (std::size_t j = 0; j < g->scales()[k].eta_count; ++j)
            for (std::size_t i = 0; i < g->u_count(); ++i)
                if (tent_membership(g->tile(k, j, i), T, kGeo) != Membership::outside) lhs += g->weight(k);
    CHECK(h1.lhs == doctest::Approx(lhs).epsilon(1e-12));
    for (int trial = 0; trial < 100; ++trial) {
        TileField F = random_field(g, rng), A = random_field(g, rng);
        std::uniform_real_distribution<double> U(0.0, 1.0);
        Tent R{{U(rng), 0.1 + 0.9 * U(rng)}, -700.0 + 1400.0 * U(rng)};
        HolderCheck h = outer_holder_check(F, A, R, kGeo);
        CHECK(h.pass);
        CHECK(h.pass_literal);
    }
}

TEST_CASE("open sets and regions over them")
{
    OpenSet E;
    E.add(Interval::from_endpoints(0.125, 0.25));
    E.add(Interval::from_endpoints(0.5, 0.625));
    E.add(Interval::from_endpoints(0.1875, 0.3125));
    E.add(Interval::from_endpoints(0.3125, 0.375)); // touching, kept separate
    REQUIRE(E.components.size() == 3);
    CHECK(E.components[0].lo() == 0.125);
    CHECK(E.components[0].hi() == 0.3125);
    CHECK(E.measure() == 0.375);

    auto g = small_grid();
    TileRegion T = tent_over_open_set(E, g);
    for (std::size_t i = 0; i < T.mask.size(); ++i) {
        Tile x = g->tile(i);
        bool inside = false;
        for (const auto& c : E.components) inside = inside || (x.t < c.length && std::abs(x.u - c.center) < c.length - x.t);
        CHECK(static_cast<bool>(T.mask[i]) == inside);
    }
    Interval P{0.5, 0.25};
    TileRegion B = box_region(P, g);
    for (std::size_t i = 0; i < B.mask.size(); ++i) {
        Tile x = g->tile(i);
        bool inside = x.u >= P.lo() && x.u < P.hi() && x.t >= 0.5 * P.length && x.t < P.length;
        CHECK(static_cast<bool>(B.mask[i]) == inside);
    }
}
