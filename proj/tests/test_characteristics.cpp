#include "doctest.h"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "gpfv/characteristics.hpp"

using namespace gpfv;

namespace {

Characteristic point_mass(Drift drift, double rate, double zd, double zb) {
    Characteristic c;
    c.drift = drift;
    c.jump = JumpMeasure(PointMassList{{{rate, Event(zd, zb)}}});
    return c;
}

}  // namespace

TEST_CASE("events outside the event space are rejected") {
    CHECK_THROWS_AS(Event(0.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(Event(1.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(Event(1.5, 0.1), std::invalid_argument);
    CHECK_THROWS_AS(Event(0.5, -0.1), std::invalid_argument);
    CHECK_NOTHROW(Event(1.0, 0.3));
    CHECK_NOTHROW(Event(0.2, 0.0));
}

TEST_CASE("validate: worked examples") {
    Characteristic wf;
    wf.drift = {1.0, 0.5};
    wf.jump = JumpMeasure(ProductMeasure{1.0, PointShape{0.0}, UniformShape{0.0, 1.0}});
    CHECK(validate(wf).ok);

    CHECK(validate(point_mass({0.0, 0.0}, 1.0, 0.5, 0.5)).ok);

    const auto bad = validate(point_mass({1.0, 1.0}, 1.0, 0.5, 0.2));
    CHECK_FALSE(bad.ok);
    REQUIRE(bad.violations.size() == 1);
    CHECK(bad.violations[0] == "balance: lhs 1.5 ≠ rhs 1.2");
}

TEST_CASE("validate: non-normalizable power law is reported") {
    Characteristic c;
    c.drift = {1.0, 1.0};
    c.jump = JumpMeasure(ProductMeasure{1.0, PointShape{0.0}, PowerShape{1.0, 0.0, 1.0}});
    const auto r = validate(c);
    CHECK_FALSE(r.ok);
    REQUIRE_FALSE(r.violations.empty());
    CHECK(r.violations[0].rfind("shape z_b", 0) == 0);
}

TEST_CASE("validate: Feller flag tracks full-death atoms") {
    CHECK(validate(point_mass({0.0, 0.0}, 1.0, 0.5, 0.5)).feller);
    const auto r = validate(point_mass({0.0, 0.0}, 1.0, 1.0, 1.0));
    CHECK(r.ok);
    CHECK_FALSE(r.feller);
}

TEST_CASE("Wright-Fisher family validates and a perturbed drift does not") {
    for (double k : {1.0, 1.0 / 3.0, 0.1, 0.05}) {
        auto c = wright_fisher_scaling(k);
        CHECK(validate(c).ok);
        c.drift.birth += 1e-6;
        CHECK_FALSE(validate(c).ok);
    }
}

TEST_CASE("carrying capacity examples") {
    CHECK(carrying_capacity(wright_fisher_scaling(1.0)) == doctest::Approx(1.0));
    CHECK(carrying_capacity(point_mass({2.0, 1.0}, 1.0, 0.5, 1.5)) == doctest::Approx(1.0));
    Characteristic pure;
    pure.drift = {1.0, 3.0};
    CHECK(carrying_capacity(pure) == doctest::Approx(3.0));
    Characteristic none;
    none.drift = {0.0, 1.0};
    CHECK_THROWS_WITH_AS(carrying_capacity(none), "no death pressure", std::domain_error);
}

TEST_CASE("rescale to unit capacity") {
    Characteristic pure;
    pure.drift = {1.0, 3.0};
    const auto r = rescale_to_unit_capacity(pure);
    CHECK(r.drift.death == doctest::Approx(1.0));
    CHECK(r.drift.birth == doctest::Approx(1.0));

    const auto c = point_mass({2.0, 1.0}, 1.0, 0.5, 1.5);
    const auto same = rescale_to_unit_capacity(c);
    CHECK(same.drift == c.drift);
    const auto& atoms = std::get<PointMassList>(same.jump.parts()[0]).atoms;
    CHECK(atoms[0].z.death == doctest::Approx(0.5));
    CHECK(atoms[0].z.birth == doctest::Approx(1.5));

    Characteristic scaled = wright_fisher_scaling(0.5);
    scaled.drift.birth *= 4.0;
    CHECK(carrying_capacity(rescale_to_unit_capacity(scaled)) == doctest::Approx(1.0));
}

TEST_CASE("truncate: finite list below eps is unchanged") {
    const auto c = point_mass({1.0, 1.0}, 2.0, 0.3, 0.3);
    const auto t = truncate(c, 0.01);
    CHECK(t.report.dropped_rate == 0.0);
    CHECK(t.characteristic.drift == c.drift);
    CHECK(t.characteristic.jump.total_rate() == doctest::Approx(2.0));
}

TEST_CASE("truncate: 1/z_b density on [e^-4, 0.4] at eps 0.01") {
    // e^-4 > 0.01, so no mass lies below eps and nothing moves.
    const double lo4 = std::exp(-4.0);
    Characteristic c4;
    c4.drift = {1.0, 0.0};
    c4.jump = JumpMeasure(ProductMeasure{std::log(0.4 / lo4), PointShape{0.0}, PowerShape{1.0, lo4, 0.4}});
    const auto t4 = truncate(c4, 0.01);
    CHECK(t4.report.dropped_rate == 0.0);
    CHECK(t4.report.drift_compensation == Drift{});
    CHECK(t4.characteristic.jump.total_rate() == doctest::Approx(std::log(0.4 / lo4)));
}

TEST_CASE("truncate: 1/z_b density on [e^-6, 0.4] at eps 0.01") {
    const double lo = std::exp(-6.0);
    Characteristic c;
    c.drift = {1.0, 0.0};
    c.jump = JumpMeasure(ProductMeasure{std::log(0.4 / lo), PointShape{0.0}, PowerShape{1.0, lo, 0.4}});
    const auto t = truncate(c, 0.01);
    CHECK(t.report.dropped_rate == doctest::Approx(std::log(0.01 / lo)).epsilon(1e-12));
    CHECK(t.report.drift_compensation.birth == doctest::Approx(0.01 - lo).epsilon(1e-12));
    CHECK(t.report.drift_compensation.death == 0.0);
    CHECK(t.characteristic.jump.total_rate() == doctest::Approx(std::log(0.4 / 0.01)).epsilon(1e-12));
}

TEST_CASE("truncate: diagonal Lambda uniform at eps 0.1 keeps rate 9") {
    Characteristic c;
    c.drift = {1.0, 1.0};
    c.jump = JumpMeasure(DiagonalLambda{0.0, 1.0, 0.0, 0.0, 1.0});
    CHECK(std::isinf(c.jump.total_rate()));
    const auto t = truncate(c, 0.1);
    CHECK(t.characteristic.jump.total_rate() == doctest::Approx(9.0).epsilon(1e-12));
}

TEST_CASE("truncate preserves balance across a logarithmic sweep") {
    for (const auto& c : {diagonal_lambda(1.0, 0.5, 1.0), twenty_type_showcase(), wright_fisher_scaling(0.1)}) {
        for (double eps = 0.5; eps > 1e-6; eps /= 3.0) {
            const auto t = truncate(c, eps);
            CHECK(validate(t.characteristic).ok);
            CHECK(std::isfinite(t.characteristic.jump.total_rate()));
        }
    }
}

TEST_CASE("test functional of truncations increases to the untruncated value") {
    const TestFunction g{[](double d, double b) { return std::min(1.0, d + b); }, 1.0, 1.0};
    for (const auto& c : {diagonal_lambda(1.0, 0.5, 1.0), twenty_type_showcase()}) {
        const double full = test_functional(c, g);
        double previous = -1.0;
        double previous_gap = 1e300;
        for (double eps : {0.2, 0.1, 0.05, 0.02, 0.01, 0.005, 0.001}) {
            const double v = test_functional(truncate(c, eps).characteristic, g);
            const double gap = std::abs(v - full);
            CHECK(gap <= previous_gap + 1e-12);
            previous_gap = gap;
            previous = v;
        }
        CHECK(previous == doctest::Approx(full).epsilon(1e-3));
    }
}

TEST_CASE("test functional examples") {
    const auto c = point_mass({0.2, 0.7}, 2.0, 0.5, 0.25);
    CHECK(test_functional(c, {[](double, double) { return 0.0; }, 0.0, 0.0}) == 0.0);
    CHECK(test_functional(c, {[](double, double b) { return b; }, 0.0, 1.0}) == doctest::Approx(0.7 + 2.0 * 0.25));

    const auto wf = wright_fisher_scaling(1.0);
    const double v = test_functional(wf, {[](double d, double b) { return d + b; }, 1.0, 1.0});
    CHECK(v == doctest::Approx(2.0 * (wf.drift.death + wf.jump.death_moment())));
}

TEST_CASE("analytic moments agree with quadrature") {
    std::vector<Characteristic> family{wright_fisher_scaling(1.0), wright_fisher_scaling(0.05), twenty_type_showcase(),
                                       truncate(diagonal_lambda(1.0, 0.5, 1.0), 1e-3).characteristic};
    Characteristic product;
    product.jump = JumpMeasure(ProductMeasure{2.0, UniformShape{0.1, 0.6}, PowerShape{0.5, 0.0, 2.0}});
    family.push_back(product);
    for (const auto& c : family) {
        const auto& j = c.jump;
        CHECK(j.integrate([](double d, double) { return d; }) == doctest::Approx(j.death_moment()).epsilon(1e-8));
        CHECK(j.integrate([](double, double b) { return b; }) == doctest::Approx(j.birth_moment()).epsilon(1e-8));
        CHECK(j.integrate([](double, double b) { return b * b; }) ==
              doctest::Approx(j.birth_second_moment()).epsilon(1e-8));
    }
}

TEST_CASE("the showcase characteristic is balanced with unit capacity") {
    const auto c = twenty_type_showcase();
    CHECK(validate(c).ok);
    CHECK(carrying_capacity(c) == doctest::Approx(1.0));
}

TEST_CASE("effective impact") {
    CHECK(effective_impact(1.0, Event(0.5, 0.5)) == doctest::Approx(0.5));
    for (double n : {0.1, 1.0, 7.0}) {
        CHECK(effective_impact(n, Event(1.0, 0.4)) == 1.0);
        CHECK(effective_impact(n, Event(0.3, 0.0)) == 0.0);
    }
    double last = 0.0;
    for (double b = 0.1; b < 3.0; b += 0.1) {
        const double v = effective_impact(2.0, Event(0.4, b));
        CHECK(v > last);
        last = v;
    }
    last = 1.0;
    for (double n = 0.1; n < 10.0; n += 0.5) {
        const double v = effective_impact(n, Event(0.4, 0.3));
        CHECK(v < last);
        last = v;
    }
}

TEST_CASE("event streams: empty, Poisson count, mark frequencies") {
    Characteristic empty;
    empty.drift = {1.0, 1.0};
    CHECK(sample_event_stream(empty, 10.0, 1).events.empty());

    const auto two = point_mass({0.0, 0.0}, 2.0, 0.5, 0.5);
    const auto s = sample_event_stream(two, 1000.0, 42);
    CHECK(std::abs(static_cast<double>(s.events.size()) - 2000.0) < 3.0 * std::sqrt(2000.0));
    for (std::size_t i = 1; i < s.events.size(); ++i) CHECK(s.events[i - 1].t < s.events[i].t);

    Characteristic pair;
    pair.jump = JumpMeasure(PointMassList{{{1.0, Event(0.5, 0.5)}, {1.0, Event(0.2, 0.2)}}});
    const auto p = sample_event_stream(pair, 2000.0, 7);
    double first = 0.0;
    for (const auto& e : p.events) first += e.z.death == 0.5 ? 1.0 : 0.0;
    const double n = static_cast<double>(p.events.size());
    CHECK(std::abs(first / n - 0.5) < 3.0 * std::sqrt(0.25 / n));
}

TEST_CASE("event streams are pure and the lazy source agrees") {
    const auto c = wright_fisher_scaling(1.0);
    const auto a = sample_event_stream(c, 50.0, 3);
    const auto b = sample_event_stream(c, 50.0, 3);
    REQUIRE(a.events.size() == b.events.size());
    EventSource source(c, 3);
    for (std::size_t i = 0; i < a.events.size(); ++i) {
        CHECK(a.events[i].t == b.events[i].t);
        CHECK(a.events[i].z == b.events[i].z);
        CHECK(a.events[i].key == b.events[i].key);
        const auto e = source.next(50.0);
        REQUIRE(e.has_value());
        CHECK(e->t == a.events[i].t);
        CHECK(e->z == a.events[i].z);
        CHECK(e->key == a.events[i].key);
    }
    CHECK_FALSE(source.next(50.0).has_value());
}

TEST_CASE("infinite activity streams are refused") {
    CHECK_THROWS_AS(sample_event_stream(diagonal_lambda(1.0, 0.5, 1.0), 1.0, 1), std::invalid_argument);
}

TEST_CASE("thinning a stream matches the truncated rate") {
    const auto c = truncate(diagonal_lambda(1.0, 0.5, 1.0), 0.01).characteristic;
    const auto s = sample_event_stream(c, 200.0, 5);
    const auto thin = thin_stream(s, 0.05);
    for (const auto& e : thin.events) CHECK(std::max(e.z.death, e.z.birth) > 0.05);
    const double expected = 200.0 * truncate(diagonal_lambda(1.0, 0.5, 1.0), 0.05).characteristic.jump.total_rate();
    CHECK(std::abs(static_cast<double>(thin.events.size()) - expected) < 4.0 * std::sqrt(expected));
}

TEST_CASE("diagonal family with a birth scale is balanced with unit capacity") {
    const auto c = diagonal_lambda(1.0, 0.5, 1.0, 0.5);
    CHECK(c.drift.birth == doctest::Approx(2.0));
    CHECK(std::isinf(c.jump.total_rate()));
    CHECK(validate(c).ok);
    CHECK(carrying_capacity(c) == doctest::Approx(1.0));
    CHECK(validate(truncate(c, 0.01).characteristic).ok);
    CHECK_THROWS_AS(diagonal_lambda(1.0, 0.0, 1.0, 0.5), std::invalid_argument);
}
