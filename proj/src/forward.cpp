#include "gpfv/forward.hpp"

#include <algorithm>
#include <stdexcept>

#include "gpfv/popsize.hpp"

namespace gpfv {

namespace {

double mass_sum(const TypeMeasure& m) {
    double s = 0.0;
    for (const auto& a : m.atoms) s += a.mass;
    return s;
}

void rescale(TypeMeasure& m, double new_total) {
    const double s = mass_sum(m);
    if (s > 0.0) {
        const double factor = new_total / s;
        for (auto& a : m.atoms) a.mass *= factor;
    }
    m.total = new_total;
}

double tracked_frequency(const TypeMeasure& m, std::span<const double> tracked) {
    double s = 0.0;
    for (double t : tracked) s += m.mass_of(t);
    return s / m.total;
}

}  // namespace

TypeMeasure TypeMeasure::from_frequencies(double total, std::span<const double> types, std::span<const double> freqs) {
    if (types.size() != freqs.size()) throw std::invalid_argument("types and frequencies differ in length");
    TypeMeasure m;
    m.total = total;
    for (std::size_t i = 0; i < types.size(); ++i) {
        if (freqs[i] < 0.0) throw std::invalid_argument("negative frequency");
        if (freqs[i] * total > kPruneTol) m.atoms.push_back({types[i], freqs[i] * total});
    }
    std::sort(m.atoms.begin(), m.atoms.end(), [](const Atom& a, const Atom& b) { return a.type < b.type; });
    if (m.atoms.empty()) throw std::invalid_argument("type measure has no mass");
    return m;
}

TypeMeasure TypeMeasure::equal_types(double total, std::size_t k) {
    std::vector<double> types(k);
    std::vector<double> freqs(k, 1.0 / static_cast<double>(k));
    for (std::size_t i = 0; i < k; ++i) types[i] = static_cast<double>(i);
    return from_frequencies(total, types, freqs);
}

double TypeMeasure::mass_of(double type) const {
    auto it = std::lower_bound(atoms.begin(), atoms.end(), type,
                               [](const Atom& a, double t) { return a.type < t; });
    return (it != atoms.end() && it->type == type) ? it->mass : 0.0;
}

double TypeMeasure::cdf(double kappa) const {
    double s = 0.0;
    for (const auto& a : atoms) {
        if (a.type > kappa) break;
        s += a.mass;
    }
    return s / total;
}

namespace {

// In place: m <- (1 - z_d) m + z_b delta_parent, with total updated by apply_event.
double step_in_place(TypeMeasure& m, const Event& z, double parent_draw) {
    if (!(m.total > 0.0) || m.atoms.empty()) throw std::invalid_argument("forward step on an empty measure");
    const double target = parent_draw * mass_sum(m);
    std::size_t parent = m.atoms.size() - 1;
    double cumulative = 0.0;
    for (std::size_t i = 0; i < m.atoms.size(); ++i) {
        cumulative += m.atoms[i].mass;
        if (target < cumulative) {
            parent = i;
            break;
        }
    }
    const Atom parent_atom = m.atoms[parent];
    m.total = apply_event(m.total, z);
    const double keep = 1.0 - z.death;
    for (auto& a : m.atoms) a.mass *= keep;
    m.atoms[parent].mass += z.birth;
    std::erase_if(m.atoms, [](const Atom& a) { return a.mass < kPruneTol; });
    if (m.atoms.empty()) m.atoms.push_back({parent_atom.type, m.total});
    return parent_atom.type;
}

}  // namespace

TypeMeasure forward_step(const TypeMeasure& m, const Event& z, double parent_draw, double* parent_type) {
    TypeMeasure out = m;
    const double parent = step_in_place(out, z, parent_draw);
    if (parent_type) *parent_type = parent;
    return out;
}

namespace {

// Shared loop over any event source: next() yields std::optional<StreamEvent>.
template <class Next>
ForwardPath run_forward(Next&& next, double horizon, const Drift& drift, const TypeMeasure& initial,
                        std::span<const double> grid, const ForwardOptions& options) {
    if (!(initial.total > 0.0) || initial.atoms.empty()) throw std::invalid_argument("initial measure is empty");
    ForwardPath path;
    TypeMeasure m = initial;
    SizeTracker size(initial.total, drift);
    std::size_t g = 0;

    auto emit = [&](double t) {
        const double n = size.peek(t);
        if (options.record_snapshots) {
            TypeMeasure snap = m;
            rescale(snap, n);
            path.snapshots.emplace_back(t, std::move(snap));
        }
        if (!options.tracked.empty()) path.frequency.push_back({t, n, tracked_frequency(m, options.tracked)});
    };

    if (m.atoms.size() == 1) path.fixation_time = 0.0;
    const bool stop = options.stop_at_fixation;
    while (!(stop && path.fixation_time)) {
        const std::optional<StreamEvent> e = next();
        if (!e) break;
        while (g < grid.size() && grid[g] < e->t) emit(grid[g++]);

        const double before = size.before(e->t);
        rescale(m, before);
        const double draw = Substream(e->key).uniform(kParentDrawIndex);
        const double parent = step_in_place(m, e->z, draw);
        m.total = size.jump(e->t, e->z);
        if (options.record_jumps) path.jumps.push_back({e->t, e->z, parent, effective_impact(before, e->z)});
        if (!path.fixation_time && m.atoms.size() == 1) path.fixation_time = e->t;
    }

    const bool stopped = stop && path.fixation_time;
    const double end = stopped ? *path.fixation_time : horizon;
    if (!stopped) {
        for (; g < grid.size(); ++g) emit(grid[g]);
    }
    rescale(m, size.peek(end));
    path.final_measure = std::move(m);
    path.final_time = end;
    return path;
}

}  // namespace

ForwardPath simulate_forward(const EventStream& stream, const Drift& drift, const TypeMeasure& initial,
                             std::span<const double> grid, const ForwardOptions& options) {
    std::size_t i = 0;
    auto next = [&]() -> std::optional<StreamEvent> {
        if (i < stream.events.size()) return stream.events[i++];
        return std::nullopt;
    };
    return run_forward(next, stream.horizon, drift, initial, grid, options);
}

ForwardPath simulate_forward(const Characteristic& c, const TypeMeasure& initial, double horizon,
                             std::uint64_t seed, std::span<const double> grid, const ForwardOptions& options) {
    EventSource source(c, seed);
    auto next = [&]() { return source.next(horizon); };
    return run_forward(next, horizon, c.drift, initial, grid, options);
}

std::vector<HeterozygositySample> heterozygosity(const ForwardPath& path) {
    if (path.frequency.empty()) throw std::invalid_argument("heterozygosity needs a tracked type set");
    std::vector<HeterozygositySample> h;
    h.reserve(path.frequency.size());
    for (const auto& s : path.frequency) h.push_back({s.t, s.w * (1.0 - s.w)});
    return h;
}

}  // namespace gpfv
