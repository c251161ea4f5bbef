#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "czw/maximal.hpp"
#include "czw/mode.hpp"

using namespace czw;

namespace {

GridFunction random_function(const UniformGrid& g, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> n(0.0, 1.0);
    GridFunction f(g);
    for (auto& v : f.values()) v = n(rng);
    return f;
}

// sup over intervals containing x of the mean of |f| (or of |f - f_Q| when sharp).
GridFunction brute(const GridFunction& f, bool sharp) {
    const std::size_t n = f.size();
    GridFunction out(f.grid());
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = a + 1; b <= n; ++b) {
            double mean = 0.0;
            for (std::size_t i = a; i < b; ++i) mean += f[i];
            mean /= static_cast<double>(b - a);
            double v = 0.0;
            for (std::size_t i = a; i < b; ++i) v += sharp ? std::abs(f[i] - mean) : std::abs(f[i]);
            v /= static_cast<double>(b - a);
            for (std::size_t i = a; i < b; ++i) out[i] = std::max(out[i], v);
        }
    return out;
}

}  // namespace

TEST_CASE("maximal: Hardy-Littlewood against brute force") {
    const UniformGrid g(0.0, 1.0, 6);
    const auto f = random_function(g, 1);
    const auto m = hl_maximal(f, IntervalMode::AllIntervals);
    const auto ref = brute(f, false);
    for (std::size_t i = 0; i < g.size(); ++i) CHECK(m[i] == doctest::Approx(ref[i]).epsilon(1e-12));

    const UniformGrid g8(0.0, 1.0, 8);
    const auto half = GridFunction::sample(g8, [](double x) { return x < 0.5 ? 1.0 : 0.0; });
    const auto mh = hl_maximal(half, IntervalMode::AllIntervals);
    CHECK(mh[g8.cell_of(0.75)] == doctest::Approx(brute(half, false)[g8.cell_of(0.75)]).epsilon(1e-13));
    // Best interval is [0, x+]: 128 / 193 cells.
    CHECK(mh[g8.cell_of(0.75)] == doctest::Approx(128.0 / 193.0).epsilon(1e-13));

    const auto one = hl_maximal(GridFunction::constant(g, 1.0), IntervalMode::Dyadic);
    for (std::size_t i = 0; i < g.size(); ++i) CHECK(one[i] == doctest::Approx(1.0));
}

TEST_CASE("maximal: sharp maximal against brute force") {
    const UniformGrid g(0.0, 1.0, 6);
    const auto f = random_function(g, 2);
    const auto m = sharp_maximal(f, IntervalMode::AllIntervals);
    const auto ref = brute(f, true);
    for (std::size_t i = 0; i < g.size(); ++i) CHECK(m[i] == doctest::Approx(ref[i]).epsilon(1e-11));
    const auto s1 = sharp_power(f, 1.0, IntervalMode::AllIntervals);
    const auto& sa = m;
    for (std::size_t i = 0; i < g.size(); ++i) CHECK(s1[i] == doctest::Approx(sa[i]).epsilon(1e-12));
    const auto zero = sharp_maximal(GridFunction::constant(g, 3.0), IntervalMode::AllIntervals);
    CHECK(zero.sup_norm() <= 1e-14);
    // Linear f: oscillation bounded by slope times domain length.
    const auto lin = GridFunction::sample(g, [](double x) { return 2.0 + 3.0 * x; });
    CHECK(sharp_maximal(lin, IntervalMode::AllIntervals).sup_norm() <= 3.0);
}

TEST_CASE("maximal: structural properties") {
    const UniformGrid g(-2.0, 2.0, 7);
    const auto f = random_function(g, 3);
    const auto h = random_function(g, 4);
    for (auto mode : {IntervalMode::AllIntervals, IntervalMode::Dyadic}) {
        const auto mf = hl_maximal(f, mode);
        const auto mh = hl_maximal(h, mode);
        const auto msum = hl_maximal(f + h, mode);
        const auto mscaled = hl_maximal(2.5 * f, mode);
        const auto sharp = sharp_maximal(f, mode);
        for (std::size_t i = 0; i < g.size(); ++i) {
            CHECK(msum[i] <= (mf[i] + mh[i]) * (1 + 1e-12));
            CHECK(mscaled[i] == doctest::Approx(2.5 * mf[i]).epsilon(1e-12));
            CHECK(mf[i] >= std::abs(f[i]) * (1 - 1e-12));
            CHECK(sharp[i] <= 2 * mf[i] * (1 + 1e-12));
        }
    }
    const auto all = hl_maximal(f, IntervalMode::AllIntervals);
    const auto dy = hl_maximal(f, IntervalMode::Dyadic);
    for (std::size_t i = 0; i < g.size(); ++i) CHECK(dy[i] <= all[i] * (1 + 1e-12));
}

TEST_CASE("maximal: power maximal") {
    const UniformGrid g(0.0, 1.0, 7);
    const auto f = random_function(g, 5);
    const auto m = hl_maximal(f, IntervalMode::AllIntervals);
    const auto p1 = power_maximal(f, 1.0, IntervalMode::AllIntervals);
    for (std::size_t i = 0; i < g.size(); ++i) CHECK(p1[i] == doctest::Approx(m[i]).epsilon(1e-12));
    const auto c = power_maximal(GridFunction::constant(g, 2.0), 0.3, IntervalMode::AllIntervals);
    for (std::size_t i = 0; i < g.size(); ++i) CHECK(c[i] == doctest::Approx(2.0).epsilon(1e-12));

    const auto half = GridFunction::sample(g, [](double x) { return x < 0.5 ? 1.0 : 0.0; });
    const auto ph = power_maximal(half, 0.5, IntervalMode::AllIntervals);
    const auto root = hl_maximal(half.pow(0.5), IntervalMode::AllIntervals);
    for (std::size_t i = 0; i < g.size(); ++i) CHECK(ph[i] == doctest::Approx(root[i] * root[i]).epsilon(1e-12));

    // Jensen: M_eps increases with eps.
    double eps_prev = 0.1;
    auto prev = power_maximal(f, eps_prev, IntervalMode::AllIntervals);
    for (double eps : {0.3, 0.6, 1.0}) {
        const auto cur = power_maximal(f, eps, IntervalMode::AllIntervals);
        for (std::size_t i = 0; i < g.size(); ++i) CHECK(cur[i] >= prev[i] * (1 - 1e-12));
        prev = cur;
    }
}

TEST_CASE("maximal: L^r maximal") {
    const UniformGrid g(-1.0, 1.0, 7);
    const auto f = random_function(g, 6);
    const auto m = hl_maximal(f, IntervalMode::AllIntervals);
    const auto r1 = lr_maximal(f, 1.0, IntervalMode::AllIntervals);
    for (std::size_t i = 0; i < g.size(); ++i) CHECK(r1[i] == doctest::Approx(m[i]).epsilon(1e-12));
    const auto c = lr_maximal(GridFunction::constant(g, 1.7), 2.0, IntervalMode::AllIntervals);
    for (std::size_t i = 0; i < g.size(); ++i) CHECK(c[i] == doctest::Approx(1.7).epsilon(1e-12));
    const auto w = GridFunction::sample(g, [](double x) { return std::pow(std::abs(x), -0.25); });
    const auto wr = lr_maximal(w, 1.2, IntervalMode::AllIntervals);
    const auto mw = hl_maximal(w, IntervalMode::AllIntervals);
    for (std::size_t i = 0; i < g.size(); ++i) {
        CHECK(std::isfinite(wr[i]));
        CHECK(wr[i] >= mw[i] * (1 - 1e-12));
    }
}

TEST_CASE("maximal: L log L against L^r comparison") {
    const UniformGrid g(-1.0, 1.0, 7);
    const auto one = GridFunction::constant(g, 1.0);
    for (double alpha : {0.25, 0.5, 0.9}) {
        const auto r = check_loglog_vs_lr(one, 0.5, alpha, IntervalMode::AllIntervals);
        CHECK(r.lhs_at_worst == doctest::Approx(1.0).epsilon(1e-9));
        CHECK(r.rhs_at_worst == doctest::Approx(std::pow(alpha, -1.5)).epsilon(1e-9));
        CHECK(r.worst_ratio == doctest::Approx(std::pow(alpha, 1.5)).epsilon(1e-9));
    }
    const auto w = GridFunction::sample(g, [](double x) { return std::pow(std::abs(x), -0.25); });
    CHECK(check_loglog_vs_lr(w, 0.5, 0.5, IntervalMode::AllIntervals).worst_ratio <= 1.0);
    CHECK(check_loglog_vs_lr(w, 1e-3, 0.5, IntervalMode::AllIntervals).worst_ratio <= 1.0);
}

TEST_CASE("maximal: mode selection") {
    CHECK(default_mode(1024) == IntervalMode::AllIntervals);
    CHECK(default_mode(2048) == IntervalMode::Dyadic);
    CHECK(parse_mode("dyadic", 16) == IntervalMode::Dyadic);
    CHECK(parse_mode("auto", 4096) == IntervalMode::Dyadic);
    CHECK(to_string(IntervalMode::AllIntervals) == "all-intervals");
    CHECK_THROWS(parse_mode("sometimes", 16));
}
