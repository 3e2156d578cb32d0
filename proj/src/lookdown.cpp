#include "gpfv/lookdown.hpp"

#include <algorithm>
#include <stdexcept>

#include "gpfv/popsize.hpp"

namespace gpfv {

LevelSet mark_levels(std::span<const double> uniforms, double zbar) {
    LevelSet marked;
    for (std::size_t i = 0; i < uniforms.size(); ++i) {
        if (uniforms[i] <= zbar) marked.push_back(static_cast<std::uint32_t>(i + 1));
    }
    return marked;
}

std::size_t parent_level(std::size_t level, std::span<const std::uint32_t> marked) {
    if (marked.size() <= 1 || level < marked[0]) return level;
    if (std::binary_search(marked.begin(), marked.end(), static_cast<std::uint32_t>(level))) return marked[0];
    return level - count_up_to(marked, level) + 1;
}

namespace {

bool levels_fixed(const std::vector<Level>& levels, std::size_t n) {
    const auto root = levels.front().ancestor;
    return std::all_of(levels.begin(), levels.begin() + static_cast<std::ptrdiff_t>(n),
                       [root](const Level& l) { return l.ancestor == root; });
}

template <class Next>
LookdownPath run_lookdown(Next&& next, double horizon, const Drift& drift, double n0,
                          std::span<const double> initial_types, const LookdownOptions& options) {
    if (initial_types.empty()) throw std::invalid_argument("lookdown needs at least one level");
    if (!(n0 > 0.0)) throw std::invalid_argument("N0 must be positive");
    const std::size_t n = initial_types.size();
    for (auto f : options.fixation_levels) {
        if (f == 0 || f > n) throw std::invalid_argument("quasi-fixation level outside 1..n");
    }

    LookdownPath path;
    path.horizon = horizon;
    path.events_recorded = options.record_events;
    path.initial.n = n0;
    path.initial.levels.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        path.initial.levels[i] = Level{initial_types[i], static_cast<std::uint32_t>(i + 1)};
    }
    std::vector<Level> levels = path.initial.levels;
    for (auto f : options.fixation_levels) {
        path.quasi_fixation.emplace_back(f, levels_fixed(levels, f) ? std::optional<double>(0.0) : std::nullopt);
    }
    auto all_fixed = [&] {
        return std::all_of(path.quasi_fixation.begin(), path.quasi_fixation.end(),
                           [](const auto& q) { return q.second.has_value(); });
    };

    SizeTracker size(n0, drift);
    std::vector<double> uniforms(n);
    double end = horizon;
    while (true) {
        if (options.stop_when_fixed && !path.quasi_fixation.empty() && all_fixed()) {
            end = size.time();
            break;
        }
        const std::optional<StreamEvent> e = next();
        if (!e) break;

        const double before = size.before(e->t);
        const double zbar = effective_impact(before, e->z);
        const Substream sub(e->key);
        for (std::size_t i = 0; i < n; ++i) uniforms[i] = sub.uniform(i + 1);
        LevelSet marked = mark_levels(uniforms, zbar);
        if (!path.first_mark_of_level_one && !marked.empty() && marked.front() == 1) {
            path.first_mark_of_level_one = e->t;
        }
        if (marked.size() >= 2) levels = theta<Level>(marked, levels);
        size.jump(e->t, e->z);

        for (auto& [f, when] : path.quasi_fixation) {
            if (!when && levels_fixed(levels, f)) when = e->t;
        }
        if (options.record_events) path.events.push_back({e->t, e->z, zbar, std::move(marked)});
    }

    path.final_state.levels = std::move(levels);
    path.final_state.t = end;
    path.final_state.n = size.peek(end);
    return path;
}

}  // namespace

LookdownPath simulate_lookdown(const EventStream& stream, const Drift& drift, double n0,
                               std::span<const double> initial_types, const LookdownOptions& options) {
    std::size_t i = 0;
    auto next = [&]() -> std::optional<StreamEvent> {
        if (i < stream.events.size()) return stream.events[i++];
        return std::nullopt;
    };
    return run_lookdown(next, stream.horizon, drift, n0, initial_types, options);
}

LookdownPath simulate_lookdown(const Characteristic& c, double n0, std::span<const double> initial_types,
                               double horizon, std::uint64_t seed, const LookdownOptions& options) {
    EventSource source(c, seed);
    auto next = [&]() { return source.next(horizon); };
    return run_lookdown(next, horizon, c.drift, n0, initial_types, options);
}

LookdownPath simulate_lookdown(const Characteristic& c, double n0, std::size_t levels, const TypeMeasure& initial,
                               double horizon, std::uint64_t seed, const LookdownOptions& options) {
    const auto types = sample_initial_types(initial, levels, seed);
    return simulate_lookdown(c, n0, types, horizon, seed, options);
}

std::vector<double> sample_initial_types(const TypeMeasure& rho0, std::size_t levels, std::uint64_t seed) {
    if (rho0.atoms.empty()) throw std::invalid_argument("initial type measure is empty");
    double sum = 0.0;
    for (const auto& a : rho0.atoms) sum += a.mass;
    Rng rng(derive_seed(seed, 0, "init"));
    std::vector<double> types(levels);
    for (auto& t : types) {
        double target = rng.uniform() * sum;
        t = rho0.atoms.back().type;
        for (const auto& a : rho0.atoms) {
            if (target < a.mass) {
                t = a.type;
                break;
            }
            target -= a.mass;
        }
    }
    return types;
}

std::optional<double> quasi_fixation_time(const LookdownPath& path, std::size_t n) {
    if (n == 0 || n > path.initial.levels.size()) throw std::invalid_argument("n exceeds the simulated level count");
    std::vector<std::uint32_t> labels(n);
    for (std::size_t i = 0; i < n; ++i) labels[i] = path.initial.levels[i].ancestor;
    auto fixed = [&] { return std::all_of(labels.begin(), labels.end(), [&](auto l) { return l == labels[0]; }); };
    if (fixed()) return 0.0;
    for (const auto& e : path.events) {
        if (e.marked.size() < 2) continue;
        const auto within = count_up_to(e.marked, n);
        if (within == 0) continue;
        const std::span<const std::uint32_t> head(e.marked.data(), within);
        labels = theta<std::uint32_t>(head, labels);
        if (fixed()) return e.t;
    }
    return std::nullopt;
}

double empirical_frequency(const LookdownState& state, std::span<const double> tracked) {
    std::size_t hits = 0;
    for (const auto& l : state.levels) {
        if (std::find(tracked.begin(), tracked.end(), l.type) != tracked.end()) ++hits;
    }
    return static_cast<double>(hits) / static_cast<double>(state.levels.size());
}

std::size_t distinct_ancestors(const LookdownState& state, std::size_t y) {
    if (y > state.levels.size()) throw std::invalid_argument("y exceeds the level count");
    std::vector<std::uint32_t> labels;
    for (std::size_t i = 0; i < y; ++i) labels.push_back(state.levels[i].ancestor);
    std::sort(labels.begin(), labels.end());
    return static_cast<std::size_t>(std::unique(labels.begin(), labels.end()) - labels.begin());
}

}  // namespace gpfv
