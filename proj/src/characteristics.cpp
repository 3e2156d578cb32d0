#include "gpfv/characteristics.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <sstream>
#include <stdexcept>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

namespace gpfv {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

template <class... Ts>
struct Overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

// Integral of x^q over [lo, hi], 0 <= lo <= hi.
double power_integral(double q, double lo, double hi) {
    if (!(hi > lo)) return 0.0;
    if (q == -1.0) return lo > 0.0 ? std::log(hi / lo) : kInf;
    const double e = q + 1.0;
    if (lo == 0.0 && e <= 0.0) return kInf;
    return (std::pow(hi, e) - std::pow(lo, e)) / e;
}

double power_norm(const PowerShape& s) { return power_integral(-s.alpha, s.lo, s.hi); }

std::string format_number(double x) {
    std::ostringstream os;
    os << std::setprecision(12) << x;
    return os.str();
}

void check_quadrature(double value, double error) {
    if (!std::isfinite(value) || !(error <= 1e-7 * std::max(1.0, std::abs(value)))) {
        throw std::runtime_error("quadrature failed: value " + format_number(value) + ", error estimate " +
                                 format_number(error));
    }
}

double integrate_interval(const std::function<double(double)>& h, double lo, double hi, double rel_tol) {
    double error = 0.0;
    const double value = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(h, lo, hi, 20, rel_tol, &error);
    check_quadrature(value, error);
    return value;
}

// tanh-sinh probes points so close to 0 that the weight overflows; their share
// of an integrable singularity is below double precision.
double finite_or_zero(double v) { return std::isfinite(v) ? v : 0.0; }

// Integrable endpoint singularity at 0.
double integrate_from_zero(const std::function<double(double)>& h, double hi, double rel_tol) {
    boost::math::quadrature::tanh_sinh<double> integrator;
    double error = 0.0;
    double l1 = 0.0;
    const double value = integrator.integrate(h, 0.0, hi, rel_tol, &error, &l1);
    check_quadrature(value, error);
    return value;
}

// E[h(X)] under a marginal shape.
double shape_expectation(const MarginalShape& s, const std::function<double(double)>& h, double rel_tol) {
    return std::visit(
        Overloaded{
            [&](const PointShape& p) { return h(p.at); },
            [&](const UniformShape& u) { return integrate_interval(h, u.lo, u.hi, rel_tol) / (u.hi - u.lo); },
            [&](const PowerShape& p) {
                const double norm = power_norm(p);
                if (p.lo > 0.0) {
                    auto in_log = [&](double s) { return h(std::exp(s)) * std::exp(s * (1.0 - p.alpha)); };
                    return integrate_interval(in_log, std::log(p.lo), std::log(p.hi), rel_tol) / norm;
                }
                auto direct = [&](double x) { return x > 0.0 ? finite_or_zero(h(x) * std::pow(x, -p.alpha)) : 0.0; };
                return integrate_from_zero(direct, p.hi, rel_tol) / norm;
            },
        },
        s);
}

double diagonal_cut(const DiagonalLambda& d, double eps) { return eps / std::max(1.0, d.birth_scale); }

// Integral of u^p scale u^(exponent-2) over (lo, hi].
double diagonal_moment(const DiagonalLambda& d, int p, double lo, double hi) {
    return d.scale * power_integral(p + d.exponent - 2.0, std::max(lo, d.u_min), hi);
}

struct Moments {
    double rate = 0.0;
    double death = 0.0;
    double birth = 0.0;
    double birth_sq = 0.0;
    double full_death = 0.0;
};

Moments component_moments(const JumpComponent& part) {
    return std::visit(
        Overloaded{
            [](const PointMassList& l) {
                Moments m;
                for (const auto& a : l.atoms) {
                    m.rate += a.rate;
                    m.death += a.rate * a.z.death;
                    m.birth += a.rate * a.z.birth;
                    m.birth_sq += a.rate * a.z.birth * a.z.birth;
                    if (a.z.death == 1.0) m.full_death += a.rate;
                }
                return m;
            },
            [](const ProductMeasure& p) {
                Moments m;
                const double r = p.total_rate;
                m.rate = r;
                m.death = r * shape_partial_moment(p.death, 1, -kInf, kInf);
                m.birth = r * shape_partial_moment(p.birth, 1, -kInf, kInf);
                m.birth_sq = r * shape_partial_moment(p.birth, 2, -kInf, kInf);
                m.full_death = r * (shape_cdf(p.death, 1.0) - shape_cdf(p.death, std::nextafter(1.0, 0.0)));
                return m;
            },
            [](const DiagonalLambda& d) {
                Moments m;
                m.rate = diagonal_moment(d, 0, 0.0, 1.0);
                m.death = diagonal_moment(d, 1, 0.0, 1.0);
                m.birth = d.birth_scale * m.death;
                m.birth_sq = d.birth_scale * d.birth_scale * diagonal_moment(d, 2, 0.0, 1.0);
                return m;
            },
        },
        part);
}

}  // namespace

Event::Event(double death_proportion, double birth_mass) : death(death_proportion), birth(birth_mass) {
    if (!(death >= 0.0 && death <= 1.0) || !(birth >= 0.0) || !std::isfinite(birth)) {
        throw std::invalid_argument("event outside [0,1] x [0,inf): (" + format_number(death) + ", " +
                                    format_number(birth) + ")");
    }
    if (birth == 0.0 && (death == 0.0 || death == 1.0)) {
        throw std::invalid_argument("excluded event (" + format_number(death) + ", 0)");
    }
}

// ---------------------------------------------------------------------------

double shape_cdf(const MarginalShape& s, double x) {
    return std::visit(Overloaded{
                          [&](const PointShape& p) { return x >= p.at ? 1.0 : 0.0; },
                          [&](const UniformShape& u) { return std::clamp((x - u.lo) / (u.hi - u.lo), 0.0, 1.0); },
                          [&](const PowerShape& p) {
                              if (x <= p.lo) return 0.0;
                              if (x >= p.hi) return 1.0;
                              return power_integral(-p.alpha, p.lo, x) / power_norm(p);
                          },
                      },
                      s);
}

double shape_partial_moment(const MarginalShape& s, int p, double lo, double hi) {
    return std::visit(Overloaded{
                          [&](const PointShape& pt) { return (lo < pt.at && pt.at <= hi) ? std::pow(pt.at, p) : 0.0; },
                          [&](const UniformShape& u) {
                              const double a = std::max(lo, u.lo);
                              const double b = std::min(hi, u.hi);
                              return power_integral(p, a, b) / (u.hi - u.lo);
                          },
                          [&](const PowerShape& pw) {
                              const double a = std::max(lo, pw.lo);
                              const double b = std::min(hi, pw.hi);
                              return power_integral(p - pw.alpha, a, b) / power_norm(pw);
                          },
                      },
                      s);
}

std::optional<MarginalShape> shape_restrict(const MarginalShape& s, double lo, double hi) {
    return std::visit(Overloaded{
                          [&](const PointShape& p) -> std::optional<MarginalShape> {
                              if (lo < p.at && p.at <= hi) return MarginalShape{p};
                              return std::nullopt;
                          },
                          [&](const UniformShape& u) -> std::optional<MarginalShape> {
                              const double a = std::max(lo, u.lo);
                              const double b = std::min(hi, u.hi);
                              if (!(b > a)) return std::nullopt;
                              return MarginalShape{UniformShape{a, b}};
                          },
                          [&](const PowerShape& pw) -> std::optional<MarginalShape> {
                              const double a = std::max(lo, pw.lo);
                              const double b = std::min(hi, pw.hi);
                              if (!(b > a)) return std::nullopt;
                              return MarginalShape{PowerShape{pw.alpha, a, b}};
                          },
                      },
                      s);
}

double shape_sample(const MarginalShape& s, double u) {
    return std::visit(Overloaded{
                          [&](const PointShape& p) { return p.at; },
                          [&](const UniformShape& un) { return un.lo + u * (un.hi - un.lo); },
                          [&](const PowerShape& p) {
                              if (p.alpha == 1.0) return p.lo * std::pow(p.hi / p.lo, u);
                              const double e = 1.0 - p.alpha;
                              const double a = std::pow(p.lo, e);
                              const double b = std::pow(p.hi, e);
                              return std::clamp(std::pow(a + u * (b - a), 1.0 / e), p.lo, p.hi);
                          },
                      },
                      s);
}

MarginalShape shape_scale(const MarginalShape& s, double factor) {
    return std::visit(Overloaded{
                          [&](const PointShape& p) -> MarginalShape { return PointShape{p.at * factor}; },
                          [&](const UniformShape& u) -> MarginalShape { return UniformShape{u.lo * factor, u.hi * factor}; },
                          [&](const PowerShape& p) -> MarginalShape {
                              return PowerShape{p.alpha, p.lo * factor, p.hi * factor};
                          },
                      },
                      s);
}

std::string shape_problem(const MarginalShape& s, double domain_hi) {
    return std::visit(Overloaded{
                          [&](const PointShape& p) -> std::string {
                              if (!(p.at >= 0.0 && p.at <= domain_hi)) return "point mass outside its domain";
                              return {};
                          },
                          [&](const UniformShape& u) -> std::string {
                              if (!(u.lo >= 0.0 && u.hi <= domain_hi && u.lo < u.hi)) return "uniform bounds invalid";
                              return {};
                          },
                          [&](const PowerShape& p) -> std::string {
                              if (!(p.lo >= 0.0 && p.hi <= domain_hi && p.lo < p.hi)) return "power-law bounds invalid";
                              if (p.lo == 0.0 && p.alpha >= 1.0)
                                  return "non-normalizable marginal: power law with alpha >= 1 and lower bound 0";
                              return {};
                          },
                      },
                      s);
}

// ---------------------------------------------------------------------------

JumpMeasure::JumpMeasure(std::vector<JumpComponent> parts) : parts_(std::move(parts)) {
    for (const auto& p : parts_) rates_.push_back(component_moments(p).rate);
}

JumpMeasure::JumpMeasure(JumpComponent part) : JumpMeasure(std::vector<JumpComponent>{std::move(part)}) {}

bool JumpMeasure::empty() const { return total_rate() == 0.0; }

double JumpMeasure::total_rate() const {
    double r = 0.0;
    for (double x : rates_) r += x;
    return r;
}

double JumpMeasure::death_moment() const {
    double r = 0.0;
    for (const auto& p : parts_) r += component_moments(p).death;
    return r;
}

double JumpMeasure::birth_moment() const {
    double r = 0.0;
    for (const auto& p : parts_) r += component_moments(p).birth;
    return r;
}

double JumpMeasure::birth_second_moment() const {
    double r = 0.0;
    for (const auto& p : parts_) r += component_moments(p).birth_sq;
    return r;
}

double JumpMeasure::full_death_rate() const {
    double r = 0.0;
    for (const auto& p : parts_) r += component_moments(p).full_death;
    return r;
}

double JumpMeasure::integrate(const std::function<double(double, double)>& g, double rel_tol) const {
    double total = 0.0;
    for (const auto& part : parts_) {
        total += std::visit(
            Overloaded{
                [&](const PointMassList& l) {
                    double s = 0.0;
                    for (const auto& a : l.atoms) s += a.rate * g(a.z.death, a.z.birth);
                    return s;
                },
                [&](const ProductMeasure& p) {
                    if (p.total_rate == 0.0) return 0.0;
                    auto outer = [&](double d) {
                        return shape_expectation(p.birth, [&](double b) { return g(d, b); }, rel_tol);
                    };
                    return p.total_rate * shape_expectation(p.death, outer, rel_tol);
                },
                [&](const DiagonalLambda& d) {
                    if (d.u_min > 0.0) {
                        auto in_log = [&](double s) {
                            const double u = std::exp(s);
                            return g(u, d.birth_scale * u) * std::exp(s * (d.exponent - 1.0));
                        };
                        return d.scale * integrate_interval(in_log, std::log(d.u_min), 0.0, rel_tol);
                    }
                    auto direct = [&](double u) {
                        return u > 0.0 ? finite_or_zero(g(u, d.birth_scale * u) * std::pow(u, d.exponent - 2.0)) : 0.0;
                    };
                    return d.scale * integrate_from_zero(direct, 1.0, rel_tol);
                },
            },
            part);
    }
    return total;
}

Event JumpMeasure::sample(Rng& rng) const {
    const auto& rates = rates_;
    const double total = total_rate();
    if (!(total > 0.0) || !std::isfinite(total)) {
        throw std::invalid_argument("cannot sample a jump measure with total rate " + format_number(total));
    }
    double target = rng.uniform() * total;
    std::size_t k = 0;
    while (k + 1 < rates.size() && (target >= rates[k] || rates[k] == 0.0)) {
        target -= rates[k];
        ++k;
    }
    return std::visit(Overloaded{
                          [&](const PointMassList& l) {
                              double x = rng.uniform() * rates[k];
                              for (const auto& a : l.atoms) {
                                  if (x < a.rate) return a.z;
                                  x -= a.rate;
                              }
                              return l.atoms.back().z;
                          },
                          [&](const ProductMeasure& p) {
                              const double d = shape_sample(p.death, rng.uniform());
                              const double b = shape_sample(p.birth, rng.uniform());
                              return Event(d, b);
                          },
                          [&](const DiagonalLambda& d) {
                              const double u = shape_sample(PowerShape{2.0 - d.exponent, d.u_min, 1.0}, rng.uniform());
                              return Event(u, d.birth_scale * u);
                          },
                      },
                      parts_[k]);
}

// ---------------------------------------------------------------------------

ValidationReport validate(const Characteristic& c) {
    ValidationReport report;
    auto fail = [&](std::string msg) {
        report.ok = false;
        report.violations.push_back(std::move(msg));
    };

    if (!(c.drift.death >= 0.0) || !(c.drift.birth >= 0.0)) fail("drift: gamma must be nonnegative");

    bool shapes_ok = true;
    for (const auto& part : c.jump.parts()) {
        std::visit(Overloaded{
                       [&](const PointMassList& l) {
                           for (const auto& a : l.atoms) {
                               if (!(a.rate >= 0.0)) fail("rate: negative point-mass rate");
                               if (a.z.birth == 0.0 && (a.z.death == 0.0 || a.z.death == 1.0) && a.rate > 0.0)
                                   fail("excluded: point mass on an excluded event");
                           }
                       },
                       [&](const ProductMeasure& p) {
                           if (!(p.total_rate >= 0.0) || !std::isfinite(p.total_rate))
                               fail("rate: product total_rate must be finite and nonnegative");
                           for (const auto& [shape, hi, name] :
                                {std::tuple{&p.death, 1.0, "z_d"}, std::tuple{&p.birth, kInf, "z_b"}}) {
                               const auto problem = shape_problem(*shape, hi);
                               if (!problem.empty()) {
                                   shapes_ok = false;
                                   fail(std::string("shape ") + name + ": " + problem);
                               }
                           }
                           if (shapes_ok && p.total_rate > 0.0) {
                               const double birth_at_zero = shape_cdf(p.birth, 0.0);
                               const double death_at_zero = shape_cdf(p.death, 0.0);
                               const double death_at_one =
                                   1.0 - shape_cdf(p.death, std::nextafter(1.0, 0.0));
                               if (birth_at_zero > 0.0 && (death_at_zero > 0.0 || death_at_one > 0.0))
                                   fail("excluded: product measure charges (0,0) or (1,0)");
                           }
                       },
                       [&](const DiagonalLambda& d) {
                           if (!(d.scale >= 0.0) || !(d.kingman_atom >= 0.0) || !(d.birth_scale > 0.0))
                               fail("diagonal: scale, kingman_atom must be >= 0 and birth_scale > 0");
                           if (!(d.u_min >= 0.0 && d.u_min < 1.0)) fail("diagonal: u_min must lie in [0,1)");
                       },
                   },
                   part);
    }
    if (!shapes_ok) return report;

    const double md = c.jump.death_moment();
    const double mb = c.jump.birth_moment();
    if (!std::isfinite(md)) fail("subordinator: integral of z_d dPi is infinite");
    if (!std::isfinite(mb)) fail("subordinator: integral of z_b dPi is infinite");
    if (std::isfinite(md) && std::isfinite(mb)) {
        const double lhs = c.drift.death + md;
        const double rhs = c.drift.birth + mb;
        if (!(std::abs(lhs - rhs) <= c.balance_tol)) {
            fail("balance: lhs " + format_number(lhs) + " ≠ rhs " + format_number(rhs));
        }
    }
    report.feller = c.jump.full_death_rate() == 0.0;
    return report;
}

double carrying_capacity(const Characteristic& c) {
    const double denominator = c.drift.death + c.jump.death_moment();
    if (!(denominator > 0.0)) throw std::domain_error("no death pressure");
    return (c.drift.birth + c.jump.birth_moment()) / denominator;
}

Characteristic rescale_to_unit_capacity(const Characteristic& c) {
    const double k = carrying_capacity(c);
    if (!(k > 0.0)) throw std::domain_error("carrying capacity must be positive to rescale");
    if (k == 1.0) return c;
    Characteristic out = c;
    out.drift.birth = c.drift.birth / k;
    std::vector<JumpComponent> parts;
    for (const auto& part : c.jump.parts()) {
        parts.push_back(std::visit(Overloaded{
                                       [&](const PointMassList& l) -> JumpComponent {
                                           PointMassList scaled;
                                           for (const auto& a : l.atoms)
                                               scaled.atoms.push_back({a.rate, Event(a.z.death, a.z.birth / k)});
                                           return scaled;
                                       },
                                       [&](const ProductMeasure& p) -> JumpComponent {
                                           return ProductMeasure{p.total_rate, p.death, shape_scale(p.birth, 1.0 / k)};
                                       },
                                       [&](const DiagonalLambda& d) -> JumpComponent {
                                           DiagonalLambda scaled = d;
                                           scaled.birth_scale = d.birth_scale / k;
                                           return scaled;
                                       },
                                   },
                                   part));
    }
    out.jump = JumpMeasure(std::move(parts));
    return out;
}

Truncation truncate(const Characteristic& c, double eps) {
    if (!(eps > 0.0)) throw std::invalid_argument("truncation eps must be positive");
    Truncation out{c, TruncationReport{eps, 0.0, Drift{}}};
    auto& report = out.report;
    std::vector<JumpComponent> kept;

    for (const auto& part : c.jump.parts()) {
        std::visit(
            Overloaded{
                [&](const PointMassList& l) {
                    PointMassList retained;
                    for (const auto& a : l.atoms) {
                        if (std::max(a.z.death, a.z.birth) > eps) {
                            retained.atoms.push_back(a);
                        } else {
                            report.dropped_rate += a.rate;
                            report.drift_compensation.death += a.rate * a.z.death;
                            report.drift_compensation.birth += a.rate * a.z.birth;
                        }
                    }
                    if (!retained.atoms.empty()) kept.emplace_back(std::move(retained));
                },
                [&](const ProductMeasure& p) {
                    const double r = p.total_rate;
                    const double d_low = shape_partial_moment(p.death, 0, -kInf, eps);
                    const double d_high = shape_partial_moment(p.death, 0, eps, kInf);
                    const double b_low = shape_partial_moment(p.birth, 0, -kInf, eps);
                    const double b_high = shape_partial_moment(p.birth, 0, eps, kInf);
                    const double dropped = r * d_low * b_low;
                    if (dropped == 0.0) {
                        kept.emplace_back(p);
                        return;
                    }
                    report.dropped_rate += dropped;
                    report.drift_compensation.death += r * shape_partial_moment(p.death, 1, -kInf, eps) * b_low;
                    report.drift_compensation.birth += r * d_low * shape_partial_moment(p.birth, 1, -kInf, eps);
                    if (d_high > 0.0) {
                        kept.emplace_back(ProductMeasure{r * d_high, *shape_restrict(p.death, eps, kInf), p.birth});
                    }
                    if (d_low > 0.0 && b_high > 0.0) {
                        kept.emplace_back(ProductMeasure{r * d_low * b_high, *shape_restrict(p.death, -kInf, eps),
                                                         *shape_restrict(p.birth, eps, kInf)});
                    }
                },
                [&](const DiagonalLambda& d) {
                    const double cut = diagonal_cut(d, eps);
                    if (cut <= d.u_min) {
                        kept.emplace_back(d);
                        return;
                    }
                    const double cut_hi = std::min(cut, 1.0);
                    report.dropped_rate += diagonal_moment(d, 0, d.u_min, cut_hi);
                    const double moved = diagonal_moment(d, 1, d.u_min, cut_hi);
                    report.drift_compensation.death += moved;
                    report.drift_compensation.birth += d.birth_scale * moved;
                    if (cut < 1.0) {
                        DiagonalLambda retained = d;
                        retained.u_min = cut;
                        kept.emplace_back(retained);
                    }
                },
            },
            part);
    }

    out.characteristic.jump = JumpMeasure(std::move(kept));
    out.characteristic.drift.death += report.drift_compensation.death;
    out.characteristic.drift.birth += report.drift_compensation.birth;
    return out;
}

double effective_impact(double n, const Event& z) {
    const double denominator = (1.0 - z.death) * n + z.birth;
    if (!(n > 0.0) || !(denominator > 0.0)) {
        throw std::invalid_argument("effective impact needs N > 0 and (1 - z_d) N + z_b > 0");
    }
    return z.birth / denominator;
}

double test_functional(const Characteristic& c, const TestFunction& f) {
    return c.drift.death * f.grad_death + c.drift.birth * f.grad_birth + c.jump.integrate(f.g);
}

// ---------------------------------------------------------------------------

EventSource::EventSource(const Characteristic& c, std::uint64_t seed)
    : jump_(&c.jump), rate_(c.jump.total_rate()), seed_(seed), rng_(derive_seed(seed, 0, "events")) {
    if (!std::isfinite(rate_)) {
        throw std::invalid_argument("infinite total rate: truncate the characteristic first (choose eps > 0)");
    }
    done_ = rate_ == 0.0;
}

std::optional<StreamEvent> EventSource::next(double horizon) {
    if (done_) return std::nullopt;
    const double t = t_ + rng_.exponential(rate_);
    if (t > horizon) {
        done_ = true;
        return std::nullopt;
    }
    t_ = t;
    const Event z = jump_->sample(rng_);
    return StreamEvent{t, z, substream_key(seed_, index_++)};
}

EventStream sample_event_stream(const Characteristic& c, double horizon, std::uint64_t seed) {
    EventSource source(c, seed);
    EventStream stream{horizon, seed, {}};
    while (auto e = source.next(horizon)) stream.events.push_back(*e);
    return stream;
}

EventStream thin_stream(const EventStream& stream, double eps) {
    EventStream out{stream.horizon, stream.seed, {}};
    for (const auto& e : stream.events) {
        if (std::max(e.z.death, e.z.birth) > eps) out.events.push_back(e);
    }
    return out;
}

// ---------------------------------------------------------------------------

Characteristic wright_fisher_scaling(double k) {
    Characteristic c;
    c.drift = Drift{1.0, 1.0 - k / 2.0};
    c.jump = JumpMeasure(ProductMeasure{1.0, PointShape{0.0}, UniformShape{0.0, k}});
    return c;
}

Characteristic twenty_type_showcase() {
    constexpr double lo = 1e-4;
    constexpr double death_hi = 0.3;
    constexpr double birth_hi = 0.4;
    constexpr double death_density = 3.0;
    const Drift drift{0.74, 1.0};
    const double death_mean = death_density * (death_hi - lo);
    const double birth_density = (drift.death + death_mean - drift.birth) / (birth_hi - lo);

    Characteristic c;
    c.drift = drift;
    c.jump = JumpMeasure(std::vector<JumpComponent>{
        ProductMeasure{death_density * std::log(death_hi / lo), PowerShape{1.0, lo, death_hi}, PointShape{0.0}},
        ProductMeasure{birth_density * std::log(birth_hi / lo), PointShape{0.0}, PowerShape{1.0, lo, birth_hi}},
    });
    return c;
}

Characteristic diagonal_lambda(double scale, double exponent, double drift, double birth_scale) {
    if (!(birth_scale > 0.0)) throw std::invalid_argument("birth_scale must be positive");
    if (birth_scale != 1.0 && !(exponent > 0.0)) {
        throw std::invalid_argument("birth_scale != 1 needs exponent > 0 (finite int u dPi)");
    }
    Characteristic c;
    const double first_moment = birth_scale == 1.0 ? 0.0 : scale / exponent;
    c.drift = Drift{drift, drift + (1.0 - birth_scale) * first_moment};
    c.jump = JumpMeasure(DiagonalLambda{0.0, scale, exponent, 0.0, birth_scale});
    return c;
}

}  // namespace gpfv
