#pragma once

// Events, characteristics (drift + jump measure), validation, truncation to
// finite activity, carrying-capacity rescaling and Poisson event streams.

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "gpfv/random.hpp"

namespace gpfv {

/// A reproduction event: kill a proportion `death` of the population and add
/// offspring mass `birth`. (0,0) and (1,0) are not events.
struct Event {
    double death = 0.0;
    double birth = 0.0;

    Event() = default;
    /// Throws std::invalid_argument outside [0,1] x [0,inf) or on (0,0), (1,0).
    Event(double death_proportion, double birth_mass);

    friend bool operator==(const Event&, const Event&) = default;
};

/// Continuous death rate (per capita) and birth mass per unit time.
struct Drift {
    double death = 0.0;
    double birth = 0.0;

    friend bool operator==(const Drift&, const Drift&) = default;
};

// ---------------------------------------------------------------------------
// Marginal shapes (probability laws on the line) used by product measures.

/// Uniform law on [lo, hi], lo < hi.
struct UniformShape {
    double lo = 0.0;
    double hi = 1.0;
};

/// Density proportional to x^-alpha on [lo, hi]. lo = 0 needs alpha < 1.
struct PowerShape {
    double alpha = 1.0;
    double lo = 0.0;
    double hi = 1.0;
};

/// Dirac mass.
struct PointShape {
    double at = 0.0;
};

using MarginalShape = std::variant<UniformShape, PowerShape, PointShape>;

/// P(X <= x).
double shape_cdf(const MarginalShape& s, double x);
/// E[X^p ; lo < X <= hi]. Point masses count when lo < at <= hi.
double shape_partial_moment(const MarginalShape& s, int p, double lo, double hi);
/// Law of X conditioned on lo < X <= hi, or nullopt if that has probability 0.
std::optional<MarginalShape> shape_restrict(const MarginalShape& s, double lo, double hi);
/// Inverse-CDF draw from u in (0,1).
double shape_sample(const MarginalShape& s, double u);
/// Image under x -> factor * x.
MarginalShape shape_scale(const MarginalShape& s, double factor);
/// Empty string when well formed, otherwise a diagnostic.
std::string shape_problem(const MarginalShape& s, double domain_hi);

// ---------------------------------------------------------------------------
// Jump measure families.

struct WeightedEvent {
    double rate = 0.0;
    Event z;
};

/// Finite sum of rate-weighted Dirac masses.
struct PointMassList {
    std::vector<WeightedEvent> atoms;
};

/// total_rate * (death law) x (birth law).
struct ProductMeasure {
    double total_rate = 0.0;
    MarginalShape death = PointShape{0.0};
    MarginalShape birth = UniformShape{0.0, 1.0};
};

/// Diagonal image of Lambda(du)/u^2 under u -> (u, birth_scale * u), restricted
/// to u in (u_min, 1], with Lambda(du) = scale * u^exponent du on (0,1].
/// The Kingman atom Lambda({0}) is carried as metadata only.
struct DiagonalLambda {
    double kingman_atom = 0.0;
    double scale = 1.0;
    double exponent = 0.0;
    double u_min = 0.0;
    double birth_scale = 1.0;
};

using JumpComponent = std::variant<PointMassList, ProductMeasure, DiagonalLambda>;

/// A sigma-finite measure on the event space, as a sum of parametric components.
class JumpMeasure {
public:
    JumpMeasure() = default;
    explicit JumpMeasure(std::vector<JumpComponent> parts);
    JumpMeasure(JumpComponent part);  // NOLINT

    const std::vector<JumpComponent>& parts() const { return parts_; }
    bool empty() const;

    /// Pi(Z); +inf for infinite activity.
    double total_rate() const;
    /// Integral of z_d dPi.
    double death_moment() const;
    /// Integral of z_b dPi.
    double birth_moment() const;
    /// Integral of z_b^2 dPi.
    double birth_second_moment() const;
    /// Pi({z_d = 1}).
    double full_death_rate() const;

    /// Adaptive quadrature of g over Pi. Throws std::runtime_error with the
    /// error estimate if the tolerance is not reached.
    double integrate(const std::function<double(double, double)>& g, double rel_tol = 1e-11) const;

    /// One mark from Pi / Pi(Z). Requires finite positive total rate.
    Event sample(Rng& rng) const;

private:
    std::vector<JumpComponent> parts_;
    std::vector<double> rates_;  // per component
};

struct Characteristic {
    Drift drift;
    JumpMeasure jump;
    double balance_tol = 1e-9;
};

struct ValidationReport {
    bool ok = true;
    bool feller = true;
    std::vector<std::string> violations;
};

ValidationReport validate(const Characteristic& c);

/// (gamma_b + int z_b) / (gamma_d + int z_d). Throws std::domain_error("no death pressure").
double carrying_capacity(const Characteristic& c);

/// Rescales births by 1/K so that the result has carrying capacity 1.
Characteristic rescale_to_unit_capacity(const Characteristic& c);

struct TruncationReport {
    double epsilon = 0.0;
    double dropped_rate = 0.0;
    Drift drift_compensation;
};

struct Truncation {
    Characteristic characteristic;
    TruncationReport report;
};

/// Keeps 1{max(z_d, z_b) > eps} Pi and moves the dropped first moments into the drift.
Truncation truncate(const Characteristic& c, double eps);

/// z_b / ((1 - z_d) N + z_b).
double effective_impact(double n, const Event& z);

/// A test function g with g(0) = 0 and its gradient at the origin.
struct TestFunction {
    std::function<double(double, double)> g;
    double grad_death = 0.0;
    double grad_birth = 0.0;
};

/// gamma . grad g(0) + int g dPi.
double test_functional(const Characteristic& c, const TestFunction& f);

// ---------------------------------------------------------------------------
// Poisson event streams.

struct StreamEvent {
    double t = 0.0;
    Event z;
    std::uint64_t key = 0;  ///< substream key for per-event uniforms
};

struct EventStream {
    double horizon = 0.0;
    std::uint64_t seed = 0;
    std::vector<StreamEvent> events;
};

/// Lazy generator of the same events sample_event_stream returns for this seed.
class EventSource {
public:
    EventSource(const Characteristic& c, std::uint64_t seed);

    /// Next event with t <= horizon, or nullopt once the stream passes it.
    std::optional<StreamEvent> next(double horizon);

private:
    const JumpMeasure* jump_;
    double rate_;
    std::uint64_t seed_;
    Rng rng_;
    double t_ = 0.0;
    std::uint64_t index_ = 0;
    bool done_ = false;
};

/// Poisson events on [0, horizon] with intensity dt x Pi. Pure in (c, horizon, seed).
/// Throws std::invalid_argument for infinite total rate.
EventStream sample_event_stream(const Characteristic& c, double horizon, std::uint64_t seed);

/// Sub-stream of events with max(z_d, z_b) > eps (a restriction of the Poisson
/// process, hence a stream for the truncation at eps).
EventStream thin_stream(const EventStream& stream, double eps);

// ---------------------------------------------------------------------------
// Built-in characteristics.

/// gamma = (1, 1 - k/2), Pi = delta_0 x Uniform[0, k] with unit rate.
Characteristic wright_fisher_scaling(double k);

/// Death-only and birth-only events with 1/x densities on [1e-4, 0.3] (rate 3/x)
/// and [1e-4, 0.4]; gamma = (0.74, 1) with the birth constant solved for balance.
Characteristic twenty_type_showcase();

/// Diagonal family Lambda(du) = scale * u^exponent du, events (u, birth_scale * u),
/// gamma_d = drift and gamma_b = drift + (1 - birth_scale) * int u dPi (balance).
/// With birth_scale = 1 the size started at 1 stays at 1.
Characteristic diagonal_lambda(double scale, double exponent, double drift, double birth_scale = 1.0);

}  // namespace gpfv
