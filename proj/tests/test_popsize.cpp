#include "doctest.h"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "gpfv/farm.hpp"
#include "gpfv/popsize.hpp"
#include "gpfv/stats.hpp"

using namespace gpfv;

TEST_CASE("flow examples") {
    CHECK(flow(2.5, Drift{1.0, 1.0}, 0.0) == 2.5);
    CHECK(flow(2.0, Drift{1.0, 1.0}, std::log(2.0)) == doctest::Approx(1.5).epsilon(1e-14));
    CHECK(flow(1.0, Drift{0.0, 2.0}, 3.0) == doctest::Approx(7.0).epsilon(1e-14));
    CHECK(flow(1.0, Drift{0.0, 0.0}, 3.0) == 1.0);
    CHECK(flow(4.0, Drift{2.0, 0.0}, 1.0) == doctest::Approx(4.0 * std::exp(-2.0)));
}

TEST_CASE("apply_event examples") {
    CHECK(apply_event(3.0, Event(0.0, 0.4)) == doctest::Approx(3.4));
    CHECK(apply_event(3.0, Event(1.0, 0.4)) == 0.4);
    CHECK(apply_event(2.0, Event(0.5, 1.0)) == 2.0);
}

TEST_CASE("no jumps: deterministic flow towards 1") {
    Characteristic c;
    c.drift = {1.0, 1.0};
    const auto grid = uniform_grid(5.0, 50);
    const auto path = simulate_pop(c, 2.0, 5.0, 1, grid);
    CHECK(path.jumps.empty());
    double last = 2.0;
    for (const auto& g : path.grid) {
        CHECK(g.n == doctest::Approx(flow(2.0, c.drift, g.t)).epsilon(1e-14));
        CHECK(g.n <= last);
        last = g.n;
    }
    CHECK(sandwich_check(path).ok);
}

TEST_CASE("jump records obey the event map and the flow") {
    const auto c = wright_fisher_scaling(1.0);
    const auto path = simulate_pop(c, 1.0, 20.0, 9, uniform_grid(20.0, 10));
    REQUIRE_FALSE(path.jumps.empty());
    double n = 1.0, t = 0.0;
    for (const auto& j : path.jumps) {
        CHECK(j.n_before == flow(n, c.drift, j.t - t));
        CHECK(j.n_after == apply_event(j.n_before, j.z));
        CHECK(j.n_after > 0.0);
        n = j.n_after;
        t = j.t;
    }
}

TEST_CASE("simulate_pop is deterministic") {
    const auto c = wright_fisher_scaling(1.0 / 3.0);
    const auto grid = uniform_grid(10.0, 20);
    const auto a = simulate_pop(c, 1.0, 10.0, 77, grid);
    const auto b = simulate_pop(c, 1.0, 10.0, 77, grid);
    REQUIRE(a.jumps.size() == b.jumps.size());
    for (std::size_t i = 0; i < a.jumps.size(); ++i) {
        CHECK(a.jumps[i].t == b.jumps[i].t);
        CHECK(a.jumps[i].n_after == b.jumps[i].n_after);
    }
    CHECK(a.final_n == b.final_n);
}

TEST_CASE("sandwich bounds hold on random paths, including full replacement") {
    Characteristic c = wright_fisher_scaling(1.0);
    const auto grid = uniform_grid(10.0, 50);
    for (std::uint64_t r = 0; r < 200; ++r) {
        const auto path = simulate_pop(c, 1.0, 10.0, derive_seed(1, r, "sandwich"), grid);
        CHECK(sandwich_check(path).ok);
    }
    Characteristic replace;
    replace.drift = {0.5, 0.0};
    replace.jump = JumpMeasure(PointMassList{{{0.5, Event(1.0, 0.5)}, {1.0, Event(0.2, 0.1)}}});
    for (std::uint64_t r = 0; r < 50; ++r) {
        const auto path = simulate_pop(replace, 1.0, 10.0, derive_seed(2, r, "sandwich"), grid);
        CHECK(sandwich_check(path).ok);
    }
}

TEST_CASE("sandwich check catches a corrupted path") {
    const auto c = wright_fisher_scaling(1.0);
    auto path = simulate_pop(c, 1.0, 10.0, 4, uniform_grid(10.0, 10));
    path.grid.back().n *= 100.0;
    const auto r = sandwich_check(path);
    CHECK_FALSE(r.ok);
    CHECK(r.max_violation > 1.0);
}

TEST_CASE("generator of the size process, closed form for Wright-Fisher k=1") {
    // Pi = delta_0 x U[0,1]: int (e^{-(N+b)} - e^{-N}) db = -e^{-N} e^{-1}; drift term 0.5 - N.
    const auto c = wright_fisher_scaling(1.0);
    auto f = [](double n) { return std::exp(-n); };
    auto fp = [](double n) { return -std::exp(-n); };
    CHECK(generator_of_size(c, f, fp, 1.0) == doctest::Approx(0.5 * std::exp(-1.0) - std::exp(-2.0)).epsilon(1e-10));
    for (double n : {0.3, 2.0}) {
        const double expected = (0.5 - n) * -std::exp(-n) + std::exp(-n) * -std::exp(-1.0);
        CHECK(generator_of_size(c, f, fp, n) == doctest::Approx(expected).epsilon(1e-10));
    }
}

TEST_CASE("mean of N_T is the carrying capacity") {
    const auto c = wright_fisher_scaling(1.0);
    const std::vector<double> grid{10.0};
    const auto finals = farm(4000, [&](std::size_t r) {
        return simulate_pop(c, 1.0, 10.0, derive_seed(5, r, "events"), grid).final_n;
    });
    const auto s = summarize(finals);
    CHECK(std::abs(s.mean - 1.0) < 3.0 * s.se);
}

TEST_CASE("stationary stats: time mean and the degenerate case") {
    const auto s = stationary_stats(wright_fisher_scaling(1.0), 1.0, 50.0, 2000.0, 3);
    CHECK(s.time_mean == doctest::Approx(1.0).epsilon(0.05));
    CHECK(s.min_n > 0.0);
    double total = 0.0;
    for (double w : s.occupation.weights) total += w;
    CHECK(total == doctest::Approx(1.0));
    CHECK(s.warning.empty());

    Characteristic flat;
    flat.drift = {2.0, 1.0};
    const auto d = stationary_stats(flat, 3.0, 50.0, 10.0, 1);
    CHECK_FALSE(d.warning.empty());
    CHECK(d.time_mean == doctest::Approx(0.5).epsilon(1e-9));
}
