#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "czw/error.hpp"
#include "czw/orlicz.hpp"
#include "czw/singular.hpp"

using namespace czw;

namespace {

GridFunction chi(const UniformGrid& g, double lo, double hi) {
    return GridFunction::sample(g, [=](double x) { return x >= lo && x < hi ? 1.0 : 0.0; });
}

GridFunction reflect(const GridFunction& f) {
    GridFunction out(f.grid());
    const std::size_t n = f.size();
    for (std::size_t i = 0; i < n; ++i) out[i] = f[n - 1 - i];
    return out;
}

GridFunction smooth_symbol(const UniformGrid& g, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const double a = u(rng), b = u(rng), c = u(rng);
    return GridFunction::sample(g, [=](double x) { return a * std::sin(x + b) + c * std::cos(2 * x); });
}

GridFunction random_function(const UniformGrid& g, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> n(0.0, 1.0);
    GridFunction f(g);
    for (auto& v : f.values()) v = n(rng);
    return f;
}

}  // namespace

TEST_CASE("singular: Hilbert transform of an indicator") {
    const UniformGrid g(-4.0, 4.0, 12);
    const auto f = chi(g, -1.0, 1.0);
    const double exact = std::log(3.0) / std::numbers::pi;
    CHECK(exact == doctest::Approx(0.349699).epsilon(1e-6));
    CHECK(hilbert_at(f, g.nearest_cell(2.0)) == doctest::Approx(exact).epsilon(1e-3));
    CHECK(hilbert_at(f, g.nearest_cell(-2.0)) == doctest::Approx(-exact).epsilon(1e-3));
    const auto hf = hilbert(f);
    CHECK(hf[g.nearest_cell(2.0)] == hilbert_at(f, g.nearest_cell(2.0)));
    CHECK(hilbert(GridFunction(g)).sup_norm() == 0.0);
}

TEST_CASE("singular: reflection antisymmetry is exact") {
    const UniformGrid g(-2.0, 2.0, 9);
    for (std::uint64_t seed : {1, 2, 3}) {
        const auto f = random_function(g, seed);
        const auto lhs = hilbert(reflect(f));
        const auto hf = hilbert(f);
        const std::size_t n = g.size();
        for (std::size_t i = 0; i < n; ++i) CHECK(lhs[i] == -hf[n - 1 - i]);
    }
}

TEST_CASE("singular: linearity") {
    const UniformGrid g(-2.0, 2.0, 8);
    const auto f = random_function(g, 4);
    const auto h = random_function(g, 5);
    const auto lhs = hilbert(2.0 * f + h);
    const auto hf = hilbert(f);
    const auto hh = hilbert(h);
    for (std::size_t i = 0; i < g.size(); ++i)
        CHECK(lhs[i] == doctest::Approx(2.0 * hf[i] + hh[i]).epsilon(1e-12).scale(1.0));
}

TEST_CASE("singular: commutator with constants") {
    const UniformGrid g(-4.0, 4.0, 9);
    const auto f = random_function(g, 6);
    const auto zero = commutator(GridFunction::constant(g, 3.7), f);
    for (std::size_t i = 0; i < g.size(); ++i) CHECK(zero[i] == 0.0);
    const auto b = smooth_symbol(g, 7);
    const auto base = commutator(b, f);
    const auto shifted = commutator(b + GridFunction::constant(g, 2.0), f);
    for (std::size_t i = 0; i < g.size(); ++i)
        CHECK(shifted[i] == doctest::Approx(base[i]).epsilon(1e-12).scale(1.0));
    // b Hf - H(bf) agrees up to rounding.
    const auto direct = b * hilbert(f) - hilbert(b * f);
    for (std::size_t i = 0; i < g.size(); ++i)
        CHECK(direct[i] == doctest::Approx(base[i]).epsilon(1e-11).scale(1.0));
    CHECK(commutator_at(b, f, 17) == base[17]);
}

TEST_CASE("singular: multilinear commutators") {
    const UniformGrid g(-4.0, 4.0, 8);
    const auto f = random_function(g, 8);
    const auto b1 = smooth_symbol(g, 9);
    const auto b2 = smooth_symbol(g, 10);
    const auto b3 = smooth_symbol(g, 11);
    const SymbolSet one({b1}, {1.0});
    const auto t1 = multilinear_commutator(one, 1, f);
    const auto c1 = commutator(b1, f);
    for (std::size_t i = 0; i < g.size(); ++i) CHECK(t1[i] == c1[i]);
    const auto t0 = multilinear_commutator(one, 0, f);
    const auto hf = hilbert(f);
    for (std::size_t i = 0; i < g.size(); ++i) CHECK(t0[i] == hf[i]);

    // Permuting the symbols permutes nothing in the result.
    const SymbolSet abc({b1, b2, b3}, {1.0, 1.0, 1.0});
    const SymbolSet cab({b3, b1, b2}, {1.0, 1.0, 1.0});
    const auto x = multilinear_commutator(abc, abc.full_mask(), f);
    const auto y = multilinear_commutator(cab, cab.full_mask(), f);
    for (std::size_t i = 0; i < g.size(); ++i) CHECK(x[i] == y[i]);
    CHECK(multilinear_commutator_at(abc, 5, f, 33) == multilinear_commutator(abc, 5, f)[33]);

    // With a constant symbol in the set everything vanishes.
    const SymbolSet with_const({b1, GridFunction::constant(g, 2.0)}, {1.0, 1.0});
    CHECK(multilinear_commutator(with_const, 3, f).sup_norm() == 0.0);
}

TEST_CASE("singular: symbol sets") {
    const UniformGrid g(-1.0, 1.0, 7);
    const auto b = make_symbol(SymbolSpec::parse("log"), g);
    const SymbolSet set({b, b}, {1.0, 2.0});
    CHECK(set.s_total() == doctest::Approx(2.0 / 3.0));
    CHECK(set.s_total(2) == doctest::Approx(2.0));
    CHECK(std::isinf(set.s_total(0)));
    CHECK(set.norm(0) == 1.0);
    CHECK(set.norm() == doctest::Approx(set.seminorm(0) * set.seminorm(1)));
    CHECK(set.full_mask() == 3u);
    CHECK_THROWS_AS(SymbolSet({}, {}), DomainError);
    CHECK_THROWS_AS(SymbolSet({b}, {0.5}), DomainError);
    CHECK_THROWS(SymbolSet(std::vector<GridFunction>(17, b), std::vector<double>(17, 1.0)));
}

TEST_CASE("singular: expansion identity") {
    const UniformGrid g(-4.0, 4.0, 8);
    const auto f = chi(g, 0.0, 1.0);
    const auto lg = make_symbol(SymbolSpec::parse("log"), g);
    std::vector<std::size_t> cells;
    for (std::size_t i = 0; i < g.size(); i += 7) cells.push_back(i);

    const SymbolSet two({lg, smooth_symbol(g, 1)}, {1.0, 1.0});
    const CellRange all{0, g.size()};
    const std::vector<double> means{average(two.symbol(0), all), average(two.symbol(1), all)};
    auto rep = expand_commutator_identity(two, means, f, cells);
    CHECK(rep.k == 2);
    CHECK(rep.residual() <= 1e-10 * rep.scale);
    const std::vector<double> zeros{0.0, 0.0};
    rep = expand_commutator_identity(two, zeros, f, cells);
    CHECK(rep.residual() <= 1e-10 * rep.scale);

    const SymbolSet three({smooth_symbol(g, 2), smooth_symbol(g, 3), smooth_symbol(g, 4)},
                          {1.0, 1.0, 1.0});
    const std::vector<double> lam{0.3, -0.2, 0.7};
    rep = expand_commutator_identity(three, lam, random_function(g, 12), cells);
    CHECK(rep.residual() <= 1e-9 * rep.scale);

    const SymbolSet single({lg}, {1.0});
    const std::vector<double> l1{0.0};
    CHECK_THROWS_AS(expand_commutator_identity(single, l1, f, cells), DomainError);
}

TEST_CASE("singular: expansion multiplicities are all -1") {
    for (std::size_t k = 2; k <= 5; ++k) {
        const auto c = expansion_multiplicities(k);
        const std::size_t full = (std::size_t{1} << k) - 1;
        REQUIRE(c.size() == full + 1);
        for (std::size_t m = 0; m < full; ++m) CHECK(c[m] == -1);
        CHECK(c[full] == 0);
    }
}

TEST_CASE("singular: commutator converges under refinement") {
    const auto at = [](int levels) {
        const UniformGrid g(-4.0, 4.0, levels);
        const auto b = make_symbol(SymbolSpec::parse("log"), g);
        return commutator_at(b, chi(g, 0.0, 1.0), g.nearest_cell(2.0));
    };
    const double ref = at(16);
    const double e10 = std::abs(at(10) - ref);
    const double e12 = std::abs(at(12) - ref);
    const double e14 = std::abs(at(14) - ref);
    CHECK(e12 < e10);
    CHECK(e14 < e12);
    CHECK(e14 <= 1e-2 * std::abs(ref));

    const auto at2 = [](int levels) {
        const UniformGrid g(-4.0, 4.0, levels);
        const auto b = make_symbol(SymbolSpec::parse("log"), g);
        const SymbolSet set({b, b}, {1.0, 1.0});
        return multilinear_commutator_at(set, 3, chi(g, 0.0, 1.0), g.nearest_cell(2.0));
    };
    const double ref2 = at2(16);
    CHECK(std::abs(at2(14) - ref2) < std::abs(at2(11) - ref2));
}

TEST_CASE("singular: symbol generators") {
    const UniformGrid g(-1.0, 1.0, 8);
    CHECK(osc_expls_norm(make_symbol(SymbolSpec::parse("constant"), g), 1.0) == 0.0);
    const double s1 = osc_expls_norm(make_symbol(SymbolSpec::parse("log"), g), 1.0);
    CHECK(std::isfinite(s1));
    CHECK(s1 > 0.0);
    const double s2 = osc_expls_norm(make_symbol(SymbolSpec::parse("abslog_power", 2.0), g), 2.0);
    CHECK(std::isfinite(s2));
    CHECK(s2 > 0.0);
    const auto step = make_symbol(SymbolSpec::parse("step_bmo"), g);
    CHECK(step[0] == 0.0);
    CHECK(step[g.size() - 1] == 1.0);
    const auto r1 = make_symbol(SymbolSpec::parse("random_bmo", 1.0, 4), g);
    const auto r2 = make_symbol(SymbolSpec::parse("random_bmo", 1.0, 4), g);
    for (std::size_t i = 0; i < g.size(); ++i) {
        CHECK(std::isfinite(r1[i]));
        CHECK(r1[i] == r2[i]);
    }
    CHECK_THROWS(SymbolSpec::parse("nonsense"));
}
