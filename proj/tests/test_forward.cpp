#include "doctest.h"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "gpfv/farm.hpp"
#include "gpfv/forward.hpp"
#include "gpfv/popsize.hpp"
#include "gpfv/stats.hpp"

using namespace gpfv;

namespace {

TypeMeasure two_types(double total, double w) {
    const std::vector<double> types{0.0, 1.0};
    const std::vector<double> freqs{w, 1.0 - w};
    return TypeMeasure::from_frequencies(total, types, freqs);
}

}  // namespace

TEST_CASE("forward_step: pure birth on a single atom") {
    const auto m = TypeMeasure::equal_types(1.0, 1);
    const auto out = forward_step(m, Event(0.0, 0.5), 0.9);
    REQUIRE(out.atoms.size() == 1);
    CHECK(out.total == doctest::Approx(1.5));
    CHECK(out.mass_of(0.0) == doctest::Approx(1.5));
}

TEST_CASE("forward_step: full replacement picks the parent by inverse CDF") {
    const auto m = two_types(1.0, 0.3);
    double parent = -1.0;
    const auto out = forward_step(m, Event(1.0, 1.0), 0.2, &parent);
    CHECK(parent == 0.0);
    REQUIRE(out.atoms.size() == 1);
    CHECK(out.mass_of(0.0) == doctest::Approx(1.0));
    CHECK(out.total == 1.0);
    const auto other = forward_step(m, Event(1.0, 1.0), 0.31, &parent);
    CHECK(parent == 1.0);
    CHECK(other.mass_of(1.0) == doctest::Approx(1.0));
}

TEST_CASE("forward_step: frequency jump equals zbar") {
    const auto m = two_types(1.0, 0.5);
    const Event z(0.5, 0.5);
    const auto out = forward_step(m, z, 0.1);
    CHECK(out.mass_of(0.0) == doctest::Approx(0.75));
    CHECK(out.mass_of(1.0) == doctest::Approx(0.25));
    const double zbar = effective_impact(1.0, z);
    CHECK(out.frequency_of(0.0) - 0.5 == doctest::Approx(zbar * (1.0 - 0.5)));
}

TEST_CASE("forward_step conserves mass exactly") {
    Rng rng(3);
    auto m = TypeMeasure::equal_types(1.0, 20);
    for (int i = 0; i < 500; ++i) {
        const Event z(rng.uniform() * 0.9, rng.uniform());
        const double before = m.total;
        m = forward_step(m, z, rng.uniform());
        CHECK(m.total == (1.0 - z.death) * before + z.birth);
        double sum = 0.0;
        for (const auto& a : m.atoms) {
            CHECK(a.mass > kPruneTol);
            sum += a.mass;
        }
        CHECK(sum == doctest::Approx(m.total).epsilon(1e-12));
    }
}

TEST_CASE("forward_step refuses an empty measure") {
    CHECK_THROWS(forward_step(TypeMeasure{}, Event(0.1, 0.1), 0.5));
}

TEST_CASE("without jumps the type distribution is frozen") {
    Characteristic c;
    c.drift = {1.0, 1.0};
    const auto grid = uniform_grid(4.0, 8);
    ForwardOptions o;
    o.tracked = {0.0};
    const auto path = simulate_forward(c, two_types(2.0, 0.3), 4.0, 1, grid, o);
    for (const auto& f : path.frequency) {
        CHECK(f.w == doctest::Approx(0.3));
        CHECK(f.n == doctest::Approx(flow(2.0, c.drift, f.t)).epsilon(1e-14));
    }
}

TEST_CASE("N track of the forward path equals the size process bitwise") {
    const auto c = wright_fisher_scaling(1.0 / 3.0);
    const auto stream = sample_event_stream(c, 20.0, 12);
    const auto grid = uniform_grid(20.0, 40);
    const auto pop = simulate_pop(stream, c.drift, 1.0, grid);
    ForwardOptions o;
    o.tracked = {0.0};
    const auto fwd = simulate_forward(stream, c.drift, two_types(1.0, 0.5), grid, o);
    REQUIRE(fwd.frequency.size() == pop.grid.size());
    for (std::size_t i = 0; i < pop.grid.size(); ++i) CHECK(fwd.frequency[i].n == pop.grid[i].n);
    REQUIRE(fwd.jumps.size() == pop.jumps.size());
    for (std::size_t i = 0; i < pop.jumps.size(); ++i) {
        CHECK(fwd.jumps[i].zbar == effective_impact(pop.jumps[i].n_before, pop.jumps[i].z));
    }
}

TEST_CASE("the tracked frequency is a martingale") {
    const auto c = wright_fisher_scaling(1.0 / 3.0);
    const std::vector<double> grid{5.0};
    ForwardOptions o;
    o.tracked = {0.0};
    o.record_jumps = false;
    o.record_snapshots = false;
    const auto ws = farm(4000, [&](std::size_t r) {
        return simulate_forward(c, two_types(1.0, 0.5), 5.0, derive_seed(8, r, "events"), grid, o).frequency.back().w;
    });
    const auto s = summarize(ws);
    CHECK(std::abs(s.mean - 0.5) < 3.0 * s.se);
}

TEST_CASE("heterozygosity: monomorphic starts stay at zero") {
    const auto c = wright_fisher_scaling(1.0);
    ForwardOptions o;
    o.tracked = {0.0};
    for (double w0 : {0.0, 1.0}) {
        const auto m = w0 == 1.0 ? TypeMeasure::equal_types(1.0, 1) : TypeMeasure::from_frequencies(1.0, std::vector<double>{1.0}, std::vector<double>{1.0});
        const auto path = simulate_forward(c, m, 5.0, 2, uniform_grid(5.0, 10), o);
        for (const auto& h : heterozygosity(path)) CHECK(h.h == 0.0);
    }
}

TEST_CASE("heterozygosity hits zero at fixation and stays") {
    Characteristic c;
    c.drift = {1.0, 0.5};
    c.jump = JumpMeasure(PointMassList{{{1.0, Event(1.0, 1.0)}}});
    ForwardOptions o;
    o.tracked = {0.0};
    const auto path = simulate_forward(c, two_types(1.0, 0.5), 10.0, 5, uniform_grid(10.0, 100), o);
    REQUIRE(path.fixation_time.has_value());
    for (const auto& h : heterozygosity(path)) {
        if (h.t >= *path.fixation_time) CHECK(h.h == 0.0);
    }
}

TEST_CASE("surviving atoms never increase") {
    const auto c = truncate(twenty_type_showcase(), 1e-3).characteristic;
    const auto path = simulate_forward(c, TypeMeasure::equal_types(1.0, 20), 30.0, 4, uniform_grid(30.0, 300));
    std::size_t last = 20;
    for (const auto& [t, m] : path.snapshots) {
        CHECK(m.atoms.size() <= last);
        last = m.atoms.size();
    }
}

TEST_CASE("expected heterozygosity update is (1 - zbar^2) H") {
    // E over the parent draw of w'(1 - w') for w' = (1 - zbar) w + zbar 1{parent tracked}.
    for (double w : {0.1, 0.5, 0.77}) {
        for (const Event z : {Event(0.0, 0.3), Event(0.4, 0.9), Event(1.0, 0.2)}) {
            const auto m = two_types(1.3, w);
            const auto a = forward_step(m, z, w / 2.0);
            const auto b = forward_step(m, z, (1.0 + w) / 2.0);
            const double ha = a.frequency_of(0.0) * (1.0 - a.frequency_of(0.0));
            const double hb = b.frequency_of(0.0) * (1.0 - b.frequency_of(0.0));
            const double zbar = effective_impact(1.3, z);
            CHECK(w * ha + (1.0 - w) * hb == doctest::Approx((1.0 - zbar * zbar) * w * (1.0 - w)).epsilon(1e-12));
        }
    }
}
