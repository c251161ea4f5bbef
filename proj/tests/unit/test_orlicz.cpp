#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "czw/error.hpp"
#include "czw/maximal.hpp"
#include "czw/orlicz.hpp"

using namespace czw;

namespace {

GridFunction random_function(const UniformGrid& g, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::exponential_distribution<double> ex(1.0);
    GridFunction f(g);
    for (auto& v : f.values()) v = ex(rng);
    return f;
}

// avg Phi(|f| / lambda) directly.
double modular(std::span<const double> v, const YoungSpec& spec, double lambda) {
    double s = 0.0;
    for (double x : v) s += evaluate(spec, std::abs(x) / lambda);
    return s / static_cast<double>(v.size());
}

}  // namespace

TEST_CASE("orlicz: constants and the L1 case") {
    const UniformGrid g(0.0, 1.0, 6);
    const CellRange all{0, g.size()};
    for (double rho : {0.5, 1.0, 2.0})
        CHECK(luxemburg_norm(GridFunction::constant(g, 3.0), all, YoungSpec::phi(rho)) ==
              doctest::Approx(3.0).epsilon(1e-10));
    const auto f = random_function(g, 1);
    CHECK(luxemburg_norm(f, all, YoungSpec::identity()) ==
          doctest::Approx(average(f.abs(), all)).epsilon(1e-10));
    CHECK(luxemburg_norm(GridFunction(g), all, YoungSpec::phi(1)) == 0.0);
}

TEST_CASE("orlicz: root satisfies the modular equation") {
    const UniformGrid g(0.0, 1.0, 7);
    const CellRange all{0, g.size()};
    for (const auto& spec : {YoungSpec::phi(1), YoungSpec::phi(3), YoungSpec::psi(1),
                             YoungSpec::psi(2), YoungSpec::power(2)}) {
        const auto f = random_function(g, 2);
        const double lam = luxemburg_norm(f, all, spec);
        const double m = modular(f.values(), spec, lam);
        CHECK(m <= 1.0);
        CHECK(m >= 1.0 - kLuxemburgTol);
    }
    // L^2 case is the quadratic mean.
    const auto f = random_function(g, 3);
    CHECK(luxemburg_norm(f, all, YoungSpec::power(2)) ==
          doctest::Approx(lp_norm(f, 2)).epsilon(1e-9));
}

TEST_CASE("orlicz: f(x) = x with Phi_1 against the analytic integral") {
    // (1/lambda) int_0^1 x (1 + log+(x/lambda)) dx = 1 for lambda < 1.
    const auto analytic = [](double lam) {
        return (0.25 + 0.5 * std::log(1.0 / lam) + 0.25 * lam * lam) / lam;
    };
    double lo = 0.1, hi = 0.999;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        (analytic(mid) > 1.0 ? lo : hi) = mid;
    }
    const UniformGrid g(0.0, 1.0, 14);
    const auto f = GridFunction::sample(g, [](double x) { return x; });
    CHECK(luxemburg_norm(f, CellRange{0, g.size()}, YoungSpec::phi(1)) ==
          doctest::Approx(lo).epsilon(1e-7));
}

TEST_CASE("orlicz: primed norm lies between one and two times the norm") {
    const UniformGrid g(0.0, 1.0, 6);
    const CellRange all{0, g.size()};
    CHECK(luxemburg_norm_primed(GridFunction(g), all, YoungSpec::phi(1)) == 0.0);
    const auto one = GridFunction::constant(g, 1.0);
    CHECK(luxemburg_norm_primed(one, all, YoungSpec::identity()) ==
          doctest::Approx(1.0).epsilon(1e-8));
    const auto half = GridFunction::sample(g, [](double x) { return x < 0.5 ? 1.0 : 0.0; });
    for (const auto& f : {half, random_function(g, 4), random_function(g, 5)}) {
        for (const auto& spec : {YoungSpec::phi(1), YoungSpec::phi(2), YoungSpec::psi(1)}) {
            const double n = luxemburg_norm(f, all, spec);
            const double np = luxemburg_norm_primed(f, all, spec);
            CHECK(np >= n * (1 - 1e-8));
            CHECK(np <= 2 * n * (1 + 1e-8));
        }
    }
}

TEST_CASE("orlicz: norm properties") {
    const UniformGrid g(-1.0, 1.0, 7);
    const CellRange all{0, g.size()};
    const auto f = random_function(g, 6);
    const auto h = random_function(g, 7);
    for (const auto& spec : {YoungSpec::phi(1), YoungSpec::psi(1), YoungSpec::psi(2)}) {
        const double nf = luxemburg_norm(f, all, spec);
        CHECK(luxemburg_norm(3.5 * f, all, spec) == doctest::Approx(3.5 * nf).epsilon(1e-9));
        CHECK(luxemburg_norm(f + h, all, spec) <= (nf + luxemburg_norm(h, all, spec)) * (1 + 1e-9));
        CHECK(luxemburg_norm(-1.0 * f, all, spec) == doctest::Approx(nf).epsilon(1e-12));
    }
    // Larger rho gives a larger norm.
    double prev = 0.0;
    for (double rho : {0.0, 0.5, 1.0, 2.0, 4.0}) {
        const double v = luxemburg_norm(f, all, YoungSpec::phi(rho));
        CHECK(v >= prev * (1 - 1e-10));
        prev = v;
    }
    CHECK_THROWS_AS(luxemburg_norm(f, all, YoungSpec::phi(1), 0.0), ConfigError);
}

TEST_CASE("orlicz: generalized Hoelder") {
    const UniformGrid g(0.0, 1.0, 8);
    const CellRange all{0, g.size()};
    const auto f = random_function(g, 8);
    const std::vector<GridFunction> single{f};
    const std::vector<YoungSpec> phi1{YoungSpec::phi(1)};
    auto hs = generalized_holder(single, phi1, YoungSpec::phi(1), 1.0, all);
    CHECK(hs.lhs == doctest::Approx(luxemburg_norm(f, all, YoungSpec::phi(1))));
    CHECK(hs.rhs == doctest::Approx(hs.lhs));

    const std::vector<GridFunction> with_zero{f, GridFunction(g)};
    const std::vector<YoungSpec> two{YoungSpec::psi(1), YoungSpec::phi(1)};
    const std::vector<double> s1{1.0};
    const double kappa1 = exp_llog_pairing_kappa(s1);
    hs = generalized_holder(with_zero, two, YoungSpec::identity(), kappa1, all);
    CHECK(hs.lhs == 0.0);
    CHECK(hs.rhs == 0.0);

    // exp L x exp L x L(log L)^2 into L^1 with truncated logs.
    const UniformGrid fine(0.0, 1.0, 12);
    const CellRange q{0, fine.size()};
    const auto lg = GridFunction::sample(fine, [](double x) {
        return std::min(std::abs(std::log(std::abs(x - 0.5))), 8.0);
    });
    const auto chi = GridFunction::sample(fine, [](double x) { return x < 0.3 ? 1.0 : 0.0; });
    const std::vector<double> s11{1.0, 1.0};
    const double kappa = exp_llog_pairing_kappa(s11);
    const std::vector<GridFunction> fs{lg, lg, chi};
    const std::vector<YoungSpec> specs{YoungSpec::psi(1), YoungSpec::psi(1), YoungSpec::phi(2.0)};
    hs = generalized_holder(fs, specs, YoungSpec::identity(), kappa, q);
    CHECK(hs.lhs > 0.0);
    CHECK(hs.lhs <= hs.rhs);

    CHECK_THROWS_AS(generalized_holder(fs, specs, YoungSpec::identity(), 0.1 * kappa, q),
                    PreconditionError);
}

TEST_CASE("orlicz: oscillation seminorms") {
    const UniformGrid g(-1.0, 1.0, 8);
    CHECK(osc_expls_norm(GridFunction::constant(g, 4.0), 1.0) == 0.0);
    CHECK(bmo_seminorm(GridFunction::constant(g, 4.0)) == 0.0);
    const auto b = GridFunction::sample(g, [](double x) { return std::log(std::abs(x)); });
    const double base = osc_expls_norm(b, 1.0);
    CHECK(base > 0.0);
    CHECK(osc_expls_norm(2.5 * b, 1.0) == doctest::Approx(2.5 * base).epsilon(1e-8));
    CHECK(osc_expls_norm(b + GridFunction::constant(g, 7.0), 1.0) ==
          doctest::Approx(base).epsilon(1e-8));
    CHECK(bmo_seminorm(b) <= base * (1 + 1e-9));
    CHECK(auto_stride(128) == 1);
    CHECK(auto_stride(1024) == 8);
}

TEST_CASE("orlicz: log seminorm is stable under refinement") {
    const auto at = [](int levels) {
        const UniformGrid g(-1.0, 1.0, levels);
        const double floor = g.spacing() / 4;
        const auto b = GridFunction::sample(
            g, [&](double x) { return std::log(std::max(std::abs(x), floor)); });
        return osc_expls_norm(b, 1.0);
    };
    const double coarse = at(12);
    const double fine = at(14);
    CHECK(std::isfinite(fine));
    CHECK(std::abs(fine - coarse) <= 0.05 * fine);
}

TEST_CASE("orlicz: maximal function") {
    const UniformGrid g(0.0, 1.0, 6);
    const auto f = random_function(g, 9);
    for (auto mode : {IntervalMode::AllIntervals, IntervalMode::Dyadic}) {
        const auto m = orlicz_maximal(f, YoungSpec::identity(), mode);
        const auto ref = hl_maximal(f, mode);
        for (std::size_t i = 0; i < g.size(); ++i) CHECK(m[i] == doctest::Approx(ref[i]).epsilon(1e-9));
        const auto one = orlicz_maximal(GridFunction::constant(g, 1.0), YoungSpec::phi(2), mode);
        for (std::size_t i = 0; i < g.size(); ++i) CHECK(one[i] == doctest::Approx(1.0).epsilon(1e-9));
    }
    // Pointwise above the Identity case and increasing in rho.
    const auto m1 = orlicz_maximal(f, YoungSpec::phi(1), IntervalMode::AllIntervals);
    const auto m2 = orlicz_maximal(f, YoungSpec::phi(2), IntervalMode::AllIntervals);
    const auto m0 = hl_maximal(f, IntervalMode::AllIntervals);
    for (std::size_t i = 0; i < g.size(); ++i) {
        CHECK(m1[i] >= m0[i] * (1 - 1e-9));
        CHECK(m2[i] >= m1[i] * (1 - 1e-9));
    }
}

TEST_CASE("orlicz: maximal function against brute force") {
    const UniformGrid g(0.0, 1.0, 8);
    const auto f = GridFunction::sample(g, [](double x) { return x < 0.25 ? 1.0 : 0.0; });
    const auto m = orlicz_maximal(f, YoungSpec::phi(1), IntervalMode::AllIntervals);
    const std::size_t x = g.cell_of(0.75);
    double brute = 0.0;
    for (std::size_t a = 0; a <= x; ++a)
        for (std::size_t b = x + 1; b <= g.size(); ++b)
            brute = std::max(brute, luxemburg_norm(f, CellRange{a, b}, YoungSpec::phi(1)));
    CHECK(m[x] == doctest::Approx(brute).epsilon(1e-9));
    CHECK(m[x] > 0.0);
}
