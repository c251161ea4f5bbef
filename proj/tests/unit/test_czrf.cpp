#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "czw/czrf.hpp"
#include "czw/error.hpp"
#include "czw/maximal.hpp"

using namespace czw;

namespace {

GridFunction chi(const UniformGrid& g, double lo, double hi, double c = 1.0) {
    return GridFunction::sample(g, [=](double x) { return x >= lo && x < hi ? c : 0.0; });
}

GridFunction random_function(const UniformGrid& g, std::uint64_t seed, double scale) {
    std::mt19937_64 rng(seed);
    std::exponential_distribution<double> ex(1.0);
    GridFunction f(g);
    for (auto& v : f.values()) v = std::pow(ex(rng), 3.0) * scale;
    return f;
}

void check_invariants(const GridFunction& f, const CZDecomposition& cz) {
    const auto& g = f.grid();
    const std::size_t n = f.size();
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) total += std::abs(f[i]) * g.spacing();
    CHECK(cz.omega_measure(g) <= total / cz.lambda * (1 + 1e-12));
    std::vector<int> covered(n, 0);
    for (std::size_t j = 0; j < cz.cubes.size(); ++j) {
        const auto& q = cz.cubes[j];
        CHECK(q.average > cz.lambda);
        CHECK(q.average <= 2 * cz.lambda);
        CHECK(q.average == doctest::Approx(average(f.abs(), q.cells)).epsilon(1e-12));
        if (auto parent = q.interval.parent())
            CHECK(average(f.abs(), *parent) <= cz.lambda);
        double sum = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            if (!q.cells.contains(i)) CHECK(cz.bad[j][i] == 0.0);
            sum += cz.bad[j][i];
        }
        CHECK(std::abs(sum) <= 1e-12 * std::max(1.0, q.average * q.cells.size()));
        for (std::size_t i = q.cells.begin; i < q.cells.end; ++i) ++covered[i];
    }
    for (std::size_t i = 0; i < n; ++i) {
        CHECK(covered[i] <= 1);
        CHECK(static_cast<bool>(covered[i]) == cz.omega[i]);
        double recon = cz.good[i];
        for (const auto& b : cz.bad) recon += b[i];
        CHECK(recon == doctest::Approx(f[i]).epsilon(1e-12).scale(1.0));
        if (cz.omega[i]) {
            CHECK(std::abs(cz.good[i]) <= 2 * cz.lambda * (1 + 1e-12));
        } else {
            CHECK(cz.good[i] == f[i]);
            CHECK(std::abs(f[i]) <= cz.lambda);
        }
    }
}

}  // namespace

TEST_CASE("czrf: decomposition of a step") {
    const UniformGrid g(0.0, 1.0, 4);
    const auto f = chi(g, 0.0, 0.25, 4.0);
    auto cz = cz_decompose(f, 1.5);
    REQUIRE(cz.cubes.size() == 1);
    CHECK(cz.cubes[0].interval == DyadicInterval{1, 0});
    CHECK(cz.cubes[0].average == 2.0);
    for (std::size_t i = 0; i < g.size(); ++i) {
        CHECK(cz.good[i] == (i < 8 ? 2.0 : 0.0));
        CHECK(cz.bad[0][i] == (i < 8 ? f[i] - 2.0 : 0.0));
    }
    CHECK(cz.cubes[0].dilate.clamped);
    CHECK(cz.cubes[0].dilate.cells == CellRange{0, 16});
    check_invariants(f, cz);

    cz = cz_decompose(f, 5.0);
    CHECK(cz.cubes.empty());
    CHECK(cz.bad.empty());
    CHECK(cz.omega_measure(g) == 0.0);
    for (std::size_t i = 0; i < g.size(); ++i) CHECK(cz.good[i] == f[i]);

    CHECK_THROWS_AS(cz_decompose(f, 0.5), PreconditionError);
}

TEST_CASE("czrf: decomposition invariants on random inputs") {
    const UniformGrid g(-1.0, 1.0, 8);
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const auto f = random_function(g, seed, 1.0);
        const double root = average(f.abs(), CellRange{0, g.size()});
        for (double factor : {1.0, 1.5, 4.0}) check_invariants(f, cz_decompose(f, root * factor));
    }
}

TEST_CASE("czrf: weight off the dilates") {
    const UniformGrid g(0.0, 8.0, 6);
    const auto f = chi(g, 3.0, 3.125, 32.0);
    const auto cz = cz_decompose(f, 1.0);
    REQUIRE_FALSE(cz.cubes.empty());
    const auto w = GridFunction::constant(g, 2.0);
    const auto off = cz.weight_off_dilates(w);
    for (std::size_t i = 0; i < g.size(); ++i) CHECK(off[i] == (cz.dilated[i] ? 0.0 : 2.0));
    for (std::size_t i = 0; i < g.size(); ++i)
        if (cz.omega[i]) CHECK(cz.dilated[i]);
}

TEST_CASE("czrf: S operator") {
    const UniformGrid g(0.0, 1.0, 6);
    const Weight one(GridFunction::constant(g, 1.0));
    const auto h = chi(g, 0.0, 0.5);
    const auto s = rdf_S(h, one, 2.0, IntervalMode::AllIntervals);
    const auto m = hl_maximal(h, IntervalMode::AllIntervals);
    for (std::size_t i = 0; i < g.size(); ++i) CHECK(s[i] == doctest::Approx(m[i]).epsilon(1e-14));
    CHECK(rdf_S(GridFunction(g), one, 2.0, IntervalMode::AllIntervals).sup_norm() == 0.0);

    const auto step = make_weight({WeightKind::Step}, g);
    const auto sv = rdf_S(h, step, 2.0, IntervalMode::AllIntervals);
    GridFunction hv(g);
    for (std::size_t i = 0; i < g.size(); ++i) hv[i] = h[i] * std::sqrt(step[i]);
    const auto mhv = hl_maximal(hv, IntervalMode::AllIntervals);
    for (std::size_t i = 0; i < g.size(); ++i)
        CHECK(sv[i] == doctest::Approx(mhv[i] / std::sqrt(step[i])).epsilon(1e-14));
}

TEST_CASE("czrf: Rubio de Francia geometric case") {
    const UniformGrid g(0.0, 1.0, 5);
    const Weight one(GridFunction::constant(g, 1.0));
    const auto h = GridFunction::constant(g, 1.0);
    const auto r = rdf_build_with_norm(h, one, 2.0, 16, 2.0);
    for (std::size_t i = 0; i < g.size(); ++i) CHECK(r.Rh[i] == doctest::Approx(4.0 / 3.0).epsilon(1e-8));
    CHECK(r.diagnostics.domination_ok());
    CHECK(r.diagnostics.norm_ok());
    CHECK(r.diagnostics.a1_ok());
    CHECK(r.diagnostics.a1_of_product == doctest::Approx(1.0));
}

TEST_CASE("czrf: Rubio de Francia with zero input") {
    const UniformGrid g(0.0, 1.0, 5);
    const auto v = make_weight({WeightKind::Step}, g);
    const auto r = rdf_build(GridFunction(g), v, 2.0);
    CHECK(r.Rh.sup_norm() == 0.0);
    CHECK(r.diagnostics.domination_ok());
    CHECK(r.diagnostics.norm_ok());
    CHECK(r.diagnostics.a1_ok());
}

TEST_CASE("czrf: Rubio de Francia on a power weight") {
    const UniformGrid g(-1.0, 1.0, 8);
    const auto v = make_weight({WeightKind::Power, -0.5}, g);
    const auto h = chi(g, 0.0, 0.5);
    const auto r = rdf_build(h, v, 2.0, 12);
    CHECK(r.terms == 12);
    CHECK(r.B == doctest::Approx(2.0 * r.norm_estimate));
    CHECK(r.diagnostics.domination_ok());
    CHECK(r.diagnostics.norm_ok());
    CHECK(r.diagnostics.a1_ok());
    CHECK(r.tail_fraction < 1e-3);
    for (std::size_t i = 0; i < g.size(); ++i) {
        CHECK(std::isfinite(r.Rh[i]));
        CHECK(r.Rh[i] >= h[i]);
    }
}

TEST_CASE("czrf: A_1 property holds for any B") {
    const UniformGrid g(-1.0, 1.0, 7);
    const auto v = make_weight({WeightKind::LogLike}, g);
    const auto h = random_function(g, 3, 0.1);
    for (double B : {0.8, 1.5, 5.0}) {
        const auto r = rdf_build_with_norm(h, v, 3.0, 8, B);
        CHECK(r.diagnostics.a1_ok());
        CHECK(r.diagnostics.domination_ok());
    }
}

TEST_CASE("czrf: argument checks") {
    const UniformGrid g(0.0, 1.0, 4);
    const Weight one(GridFunction::constant(g, 1.0));
    const auto h = GridFunction::constant(g, 1.0);
    CHECK_THROWS(rdf_build(h, one, 1.0));
    CHECK_THROWS(rdf_build(h, one, 2.0, 0));
    CHECK_THROWS(rdf_build(h, one, 2.0, 4, 0.5));
    CHECK_THROWS(rdf_build(-1.0 * h, one, 2.0));
}
