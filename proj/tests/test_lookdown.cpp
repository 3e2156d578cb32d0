#include "doctest.h"

#include <cmath>
#include <stdexcept>
#include <numeric>
#include <vector>

#include <boost/math/distributions/binomial.hpp>

#include "gpfv/farm.hpp"
#include "gpfv/lookdown.hpp"
#include "gpfv/popsize.hpp"
#include "gpfv/stats.hpp"

using namespace gpfv;

namespace {

std::vector<int> labels(int n) {
    std::vector<int> k(static_cast<std::size_t>(n));
    std::iota(k.begin(), k.end(), 1);
    return k;
}

Characteristic single_atom(double rate, double zd, double zb) {
    Characteristic c;
    c.drift = {0.0, 0.0};
    c.jump = JumpMeasure(PointMassList{{{rate, Event(zd, zb)}}});
    return c;
}

}  // namespace

TEST_CASE("mark_levels examples") {
    const std::vector<double> u{0.3, 0.7, 0.2};
    CHECK(mark_levels(u, 1.0) == LevelSet{1, 2, 3});
    CHECK(mark_levels(u, 0.0).empty());
    CHECK(mark_levels(u, 0.25) == LevelSet{3});
}

TEST_CASE("theta: the three-marks example") {
    const LevelSet j{2, 4, 5};
    const auto k = labels(6);
    CHECK(theta<int>(j, k) == std::vector<int>{1, 2, 3, 2, 2, 4});
}

TEST_CASE("theta: small cases") {
    const auto k = labels(3);
    CHECK(theta<int>(LevelSet{1, 2}, k) == std::vector<int>{1, 1, 2});
    CHECK(theta<int>(LevelSet{}, k) == k);
    CHECK(theta<int>(LevelSet{2}, k) == k);
    CHECK(theta<int>(LevelSet{1, 2, 3}, k) == std::vector<int>{1, 1, 1});
    CHECK(theta<int>(LevelSet{1, 3}, k) == std::vector<int>{1, 2, 1});
}

TEST_CASE("parent_level inverts theta") {
    Rng rng(4);
    for (int trial = 0; trial < 2000; ++trial) {
        const int n = 1 + static_cast<int>(rng.below(12));
        std::vector<double> u(static_cast<std::size_t>(n));
        for (auto& x : u) x = rng.uniform();
        const auto j = mark_levels(u, rng.uniform());
        const auto k = labels(n);
        const auto out = theta<int>(j, k);
        for (int l = 1; l <= n; ++l) {
            CHECK(out[static_cast<std::size_t>(l - 1)] == static_cast<int>(parent_level(static_cast<std::size_t>(l), j)));
        }
    }
}

TEST_CASE("theta is consistent in n") {
    Rng rng(6);
    for (int trial = 0; trial < 500; ++trial) {
        std::vector<double> u(10);
        for (auto& x : u) x = rng.uniform();
        const double zbar = rng.uniform();
        const auto big = theta<int>(mark_levels(u, zbar), labels(10));
        for (std::size_t m = 1; m <= 10; ++m) {
            const auto small = theta<int>(mark_levels(std::span<const double>(u).first(m), zbar), labels(static_cast<int>(m)));
            for (std::size_t i = 0; i < m; ++i) CHECK(small[i] == big[i]);
        }
    }
}

TEST_CASE("binomial participation weights sum to one") {
    for (int n : {1, 3, 8, 20}) {
        for (double zbar : {0.0, 0.13, 0.5, 0.99, 1.0}) {
            // Sum over subsets grouped by size.
            double sum = 0.0;
            for (int s = 0; s <= n; ++s) {
                sum += std::exp(std::lgamma(n + 1.0) - std::lgamma(s + 1.0) - std::lgamma(n - s + 1.0)) *
                       std::pow(zbar, s) * std::pow(1.0 - zbar, n - s);
            }
            CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
        }
    }
}

TEST_CASE("participation counts follow Binomial(n, zbar)") {
    // Pool events through the probability integral transform of |J| (randomized for discreteness).
    const auto c = wright_fisher_scaling(1.0);
    const std::size_t n = 16;
    const std::vector<double> types(n, 0.0);
    std::vector<double> observed(10, 0.0);
    std::size_t events = 0;
    Rng jitter(99);
    for (std::uint64_t r = 0; events < 100000; ++r) {
        const auto path = simulate_lookdown(c, 1.0, types, 200.0, derive_seed(31, r, "events"));
        for (const auto& e : path.events) {
            const boost::math::binomial_distribution<double> law(static_cast<double>(n), e.zbar);
            const double k = static_cast<double>(e.marked.size());
            const double lo = k > 0 ? boost::math::cdf(law, k - 1) : 0.0;
            const double hi = boost::math::cdf(law, k);
            const double pit = lo + jitter.uniform() * (hi - lo);
            observed[std::min<std::size_t>(9, static_cast<std::size_t>(pit * 10.0))] += 1.0;
            ++events;
        }
    }
    const std::vector<double> expected(10, static_cast<double>(events) / 10.0);
    CHECK(chi_square_pvalue(observed, expected) > 0.01);
}

TEST_CASE("without events the levels are frozen") {
    Characteristic c;
    c.drift = {1.0, 1.0};
    const std::vector<double> types{0.0, 1.0, 1.0, 0.0};
    const auto path = simulate_lookdown(c, 1.0, types, 10.0, 3);
    for (std::size_t i = 0; i < 4; ++i) {
        CHECK(path.final_state.levels[i].type == types[i]);
        CHECK(path.final_state.levels[i].ancestor == i + 1);
    }
}

TEST_CASE("a full-replacement event copies level one everywhere") {
    const auto c = single_atom(20.0, 1.0, 0.5);
    const std::vector<double> types{3.0, 1.0, 2.0, 5.0, 4.0};
    LookdownOptions o;
    o.fixation_levels = {1, 2, 5};
    const auto path = simulate_lookdown(c, 1.0, types, 1.0, 8, o);
    REQUIRE_FALSE(path.events.empty());
    const double t0 = path.events.front().t;
    for (const auto& l : path.final_state.levels) {
        CHECK(l.type == 3.0);
        CHECK(l.ancestor == 1);
    }
    CHECK(quasi_fixation_time(path, 1) == 0.0);
    for (std::size_t n : {2, 3, 5}) CHECK(quasi_fixation_time(path, n) == t0);
    for (const auto& [n, tau] : path.quasi_fixation) {
        REQUIRE(tau.has_value());
        CHECK(*tau == (n == 1 ? 0.0 : t0));
    }
}

TEST_CASE("quasi-fixation needs n within the simulated levels") {
    const auto c = wright_fisher_scaling(1.0);
    const auto path = simulate_lookdown(c, 1.0, std::vector<double>(4, 0.0), 1.0, 1);
    CHECK_THROWS(quasi_fixation_time(path, 5));
}

TEST_CASE("levels 1..m do not depend on the levels above") {
    const auto c = wright_fisher_scaling(1.0);
    const auto stream = sample_event_stream(c, 30.0, 21);
    std::vector<double> types(32);
    std::iota(types.begin(), types.end(), 0.0);
    const auto big = simulate_lookdown(stream, c.drift, 1.0, types);
    for (std::size_t m : {1, 4, 9}) {
        const auto small = simulate_lookdown(stream, c.drift, 1.0, std::span<const double>(types).first(m));
        for (std::size_t i = 0; i < m; ++i) CHECK(small.final_state.levels[i] == big.final_state.levels[i]);
        CHECK(small.final_state.n == big.final_state.n);
    }
}

TEST_CASE("lookdown N track equals the size process") {
    const auto c = wright_fisher_scaling(1.0 / 3.0);
    const auto stream = sample_event_stream(c, 10.0, 13);
    const auto pop = simulate_pop(stream, c.drift, 1.0, std::vector<double>{10.0});
    const auto ld = simulate_lookdown(stream, c.drift, 1.0, std::vector<double>(8, 0.0));
    CHECK(ld.final_state.n == pop.final_n);
    REQUIRE(ld.events.size() == pop.jumps.size());
    for (std::size_t i = 0; i < pop.jumps.size(); ++i) {
        CHECK(ld.events[i].zbar == effective_impact(pop.jumps[i].n_before, pop.jumps[i].z));
    }
}

TEST_CASE("marked levels share the pre-event ancestor of the lowest mark") {
    const auto c = wright_fisher_scaling(1.0);
    const auto stream = sample_event_stream(c, 20.0, 17);
    const std::vector<double> types(12, 0.0);
    // Replay events one at a time by growing the horizon.
    for (std::size_t i = 0; i + 1 < stream.events.size() && i < 40; ++i) {
        EventStream prefix{stream.events[i].t, stream.seed, {stream.events.begin(), stream.events.begin() + static_cast<long>(i)}};
        EventStream next{stream.events[i].t, stream.seed, {stream.events.begin(), stream.events.begin() + static_cast<long>(i + 1)}};
        const auto a = simulate_lookdown(prefix, c.drift, 1.0, types);
        const auto b = simulate_lookdown(next, c.drift, 1.0, types);
        const auto& j = b.events.back().marked;
        if (j.size() < 2) continue;
        for (auto l : j) CHECK(b.final_state.levels[l - 1].ancestor == a.final_state.levels[j[0] - 1].ancestor);
    }
}

TEST_CASE("empirical level frequency matches the forward frequency") {
    const auto c = wright_fisher_scaling(1.0);
    const std::size_t n = 64;
    const std::vector<double> tracked{0.0};
    const std::vector<double> types{0.0, 1.0};
    const std::vector<double> freqs{0.5, 0.5};
    const auto rho0 = TypeMeasure::from_frequencies(1.0, types, freqs);
    const auto diffs = farm(1000, [&](std::size_t r) {
        const std::uint64_t seed = derive_seed(41, r, "events");
        const auto path = simulate_lookdown(c, 1.0, n, rho0, 5.0, seed);
        // The forward frequency on the same stream starts from the empirical level frequency.
        const auto init = sample_initial_types(rho0, n, seed);
        const double w0 = std::count(init.begin(), init.end(), 0.0) / static_cast<double>(n);
        const auto start = TypeMeasure::from_frequencies(1.0, types, std::vector<double>{w0, 1.0 - w0});
        ForwardOptions o;
        o.tracked = tracked;
        const double w = simulate_forward(c, start, 5.0, seed, std::vector<double>{5.0}, o).frequency.back().w;
        return empirical_frequency(path.final_state, tracked) - w;
    });
    const auto s = summarize(diffs);
    CHECK(std::abs(s.mean) < 3.0 * s.se + 1e-12);
}
