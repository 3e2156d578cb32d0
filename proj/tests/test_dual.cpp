#include "doctest.h"

#include <cmath>
#include <stdexcept>
#include <set>
#include <sstream>
#include <vector>

#include "gpfv/dual.hpp"
#include "gpfv/farm.hpp"
#include "gpfv/stats.hpp"

using namespace gpfv;

namespace {

LookdownPath hand_path(std::size_t n, std::vector<LookdownEvent> events) {
    LookdownPath p;
    for (std::size_t i = 0; i < n; ++i) p.initial.levels.push_back({0.0, static_cast<std::uint32_t>(i + 1)});
    p.final_state = p.initial;
    p.horizon = 10.0;
    p.events = std::move(events);
    return p;
}

Environment two_half_events() {
    EventStream s{3.0, 0, {{1.0, Event(0.5, 0.5), 11}, {2.0, Event(0.5, 0.5), 12}}};
    return make_environment(s, Drift{0.0, 0.0}, 1.0);
}

}  // namespace

TEST_CASE("coupled trace: no events keeps the singletons") {
    const auto t = trace_coupled(hand_path(5, {}), 5, 3.0);
    CHECK(t.final_partition == Partition::singletons(5));
    CHECK(t.final_count() == 5);
    CHECK(t.lineages_at(3.0) == 5);
}

TEST_CASE("coupled trace: one event marking every level") {
    const auto t = trace_coupled(hand_path(4, {{1.0, Event(1.0, 1.0), 1.0, {1, 2, 3, 4}}}), 4, 3.0);
    CHECK(t.final_count() == 1);
    CHECK(t.final_partition.blocks[0] == std::vector<std::uint32_t>{1, 2, 3, 4});
}

TEST_CASE("coupled trace inverts the three-marks event") {
    const auto path = hand_path(6, {{1.0, Event(0.0, 0.5), 0.5, {2, 4, 5}}});
    const auto t = trace_coupled(path, 6, 3.0);
    CHECK(t.final_count() == 4);
    REQUIRE(t.jumps.size() == 1);
    CHECK(t.jumps[0].before == 6);
    CHECK(t.jumps[0].after == 4);
    CHECK(t.jumps[0].s == doctest::Approx(2.0));
    const Partition expected{{{1}, {2, 4, 5}, {3}, {6}}};
    CHECK(t.final_partition == expected);
    CHECK(t.block_levels == std::vector<std::uint32_t>{1, 2, 3, 4});
    // Forward: the labels after theta.
    std::vector<int> k{1, 2, 3, 4, 5, 6};
    const auto after = theta<int>(path.events[0].marked, k);
    std::set<int> distinct(after.begin(), after.end());
    CHECK(distinct.size() == 4);
}

TEST_CASE("lineage count is left-continuous") {
    const auto t = trace_coupled(hand_path(6, {{1.0, Event(0.0, 0.5), 0.5, {2, 4, 5}}}), 6, 3.0);
    CHECK(t.lineages_at(2.0) == 6);
    CHECK(t.lineages_at(2.0 + 1e-12) == 4);
}

TEST_CASE("coupled trace rejects bad arguments") {
    CHECK_THROWS_AS(trace_coupled(hand_path(3, {}), 4, 1.0), std::invalid_argument);
    auto p = hand_path(3, {});
    p.events_recorded = false;
    CHECK_THROWS_AS(trace_coupled(p, 2, 1.0), std::invalid_argument);
}

TEST_CASE("coupled duality on random paths is exact") {
    const auto c = wright_fisher_scaling(1.0);
    std::vector<double> types(32, 0.0);
    for (std::uint64_t r = 0; r < 100; ++r) {
        const auto path = simulate_lookdown(c, 1.0, types, 3.0, derive_seed(2, r, "events"));
        for (std::size_t y : {1, 2, 5, 16, 32}) {
            const auto t = trace_coupled(path, y, 3.0);
            CHECK(t.final_count() == distinct_ancestors(path.final_state, y));
            for (std::size_t b = 0; b < t.final_partition.size(); ++b) {
                for (auto level : t.final_partition.blocks[b]) {
                    CHECK(path.final_state.levels[level - 1].ancestor == t.block_levels[b]);
                }
            }
            std::size_t last = y;
            for (const auto& j : t.jumps) {
                CHECK(j.before == last);
                CHECK(j.after < j.before);
                last = j.after;
            }
        }
    }
}

TEST_CASE("quenched trace: zero and full impact") {
    EventStream deaths{5.0, 0, {{1.0, Event(0.3, 0.0), 1}, {2.0, Event(0.5, 0.0), 2}}};
    const auto env = make_environment(deaths, Drift{0.0, 0.0}, 1.0);
    CHECK(trace_quenched(env, 7, 5.0, 1).final_count() == 7);

    EventStream full{5.0, 0, {{1.0, Event(1.0, 0.4), 1}}};
    const auto env2 = make_environment(full, Drift{0.0, 0.0}, 1.0);
    for (std::uint64_t s = 0; s < 20; ++s) CHECK(trace_quenched(env2, 7, 5.0, s).final_count() == 1);
}

TEST_CASE("quenched trace: two half events merge a pair with probability 7/16") {
    const auto env = two_half_events();
    const auto merged = farm(10000, [&](std::size_t r) {
        return trace_quenched(env, 2, 3.0, derive_seed(5, r, "q")).final_count() == 1 ? 1.0 : 0.0;
    });
    const auto s = summarize(merged);
    CHECK(std::abs(s.mean - 7.0 / 16.0) < 3.0 * std::sqrt(7.0 / 16.0 * 9.0 / 16.0 / 10000.0));
}

TEST_CASE("dust probability examples") {
    CHECK(dust_probability(Environment{}, 5.0) == 1.0);
    CHECK(dust_probability(two_half_events(), 3.0) == doctest::Approx(0.25));
    CHECK(dust_probability(two_half_events(), 1.5) == doctest::Approx(0.5));
    EventStream full{5.0, 0, {{1.0, Event(0.2, 0.1), 1}, {2.0, Event(1.0, 0.4), 2}}};
    CHECK(dust_probability(make_environment(full, Drift{1.0, 1.0}, 1.0), 5.0) == 0.0);
}

TEST_CASE("dust probability is positive without full-death events") {
    const auto c = wright_fisher_scaling(1.0);
    for (std::uint64_t r = 0; r < 50; ++r) {
        CHECK(dust_probability(make_environment(c, 1.0, 10.0, r), 10.0) > 0.0);
    }
}

TEST_CASE("environment JSON lines round-trip bit for bit") {
    const auto c = wright_fisher_scaling(1.0 / 3.0);
    const auto env = make_environment(c, 1.0, 20.0, 8);
    check_environment(env, c.drift);
    std::stringstream io;
    write_environment(io, env);
    const auto back = read_environment(io, 20.0);
    CHECK(back.horizon == 20.0);
    REQUIRE(back.events.size() == env.events.size());
    for (std::size_t i = 0; i < env.events.size(); ++i) CHECK(back.events[i] == env.events[i]);
}

TEST_CASE("corrupted environments are refused") {
    const auto env = make_environment(wright_fisher_scaling(1.0), 1.0, 30.0, 8);
    REQUIRE(env.events.size() > 2);
    auto bad = env;
    bad.events[1].n_post = std::nextafter(bad.events[1].n_post, 10.0);
    CHECK_THROWS_AS(check_environment(bad), std::runtime_error);
    auto drifted = env;
    drifted.events[2].n_pre *= 1.0 + 1e-9;
    drifted.events[2].n_post = (1.0 - drifted.events[2].z.death) * drifted.events[2].n_pre + drifted.events[2].z.birth;
    CHECK_NOTHROW(check_environment(drifted));
    CHECK_THROWS_AS(check_environment(drifted, wright_fisher_scaling(1.0).drift), std::runtime_error);

    std::stringstream extra("{\"t\":1,\"z_d\":0,\"z_b\":0.5,\"N_pre\":1,\"N_post\":1.5,\"substream_key\":3,\"x\":1}\n");
    CHECK_THROWS(read_environment(extra));
}

TEST_CASE("moment duality without jumps and at absorbing points") {
    Characteristic still;
    still.drift = {1.0, 1.0};
    const auto a = moment_duality_stat(still, 0.3, 4, 2.0, 50, 1);
    CHECK(a.lhs == doctest::Approx(std::pow(0.3, 4)).epsilon(1e-12));
    CHECK(a.rhs == doctest::Approx(std::pow(0.3, 4)).epsilon(1e-12));
    for (double x : {0.0, 1.0}) {
        const auto s = moment_duality_stat(wright_fisher_scaling(1.0), x, 3, 2.0, 50, 2);
        CHECK(s.lhs == x);
        CHECK(s.rhs == x);
    }
}

TEST_CASE("annealed moment duality holds within Monte-Carlo error") {
    const auto s = moment_duality_stat(wright_fisher_scaling(1.0), 0.3, 5, 2.0, 4000, 3);
    CHECK(std::abs(s.lhs - s.rhs) < 3.0 * s.pooled_se);
}

TEST_CASE("duality functional on product test functions") {
    const std::vector<double> types{0.0, 1.0};
    const std::vector<double> freqs{0.3, 0.7};
    const auto rho = TypeMeasure::from_frequencies(2.0, types, freqs);
    const std::vector<std::function<double(double)>> g(3, [](double k) { return k == 0.0 ? 1.0 : 0.0; });
    CHECK(duality_functional(Partition::singletons(3), rho, g) == doctest::Approx(0.027));
    CHECK(duality_functional(Partition{{{1, 2, 3}}}, rho, g) == doctest::Approx(0.3));
    CHECK(duality_functional(Partition{{{1, 3}, {2}}}, rho, g) == doctest::Approx(0.09));
}
