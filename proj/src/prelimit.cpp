#include "gpfv/prelimit.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "gpfv/lookdown.hpp"

namespace gpfv {

std::vector<double> insert_offspring(std::span<const double> levels, double parent,
                                     std::span<const std::size_t> positions) {
    std::vector<double> out(levels.size() + positions.size());
    std::size_t p = 0, old = 0;
    for (std::size_t i = 0; i < out.size(); ++i) {
        if (p < positions.size() && positions[p] == i) {
            out[i] = parent;
            ++p;
        } else {
            out[i] = levels[old++];
        }
    }
    return out;
}

namespace {

// Sorted uniform k-subset of {0, ..., n - 1} (selection sampling).
std::vector<std::size_t> sorted_subset(Rng& rng, std::size_t n, std::size_t k) {
    std::vector<std::size_t> out;
    out.reserve(k);
    for (std::size_t i = 0; i < n && out.size() < k; ++i) {
        const double need = static_cast<double>(k - out.size());
        if (rng.uniform() * static_cast<double>(n - i) < need) out.push_back(i);
    }
    return out;
}

double tracked_share(const std::vector<double>& types, std::span<const double> tracked) {
    if (types.empty()) return 0.0;
    std::size_t hits = 0;
    for (double t : types) {
        for (double k : tracked) {
            if (t == k) {
                ++hits;
                break;
            }
        }
    }
    return static_cast<double>(hits) / static_cast<double>(types.size());
}

}  // namespace

IbPath simulate_ib(const Characteristic& c, std::uint64_t m, double n0, std::span<const double> initial_types,
                   double horizon, std::uint64_t seed, std::span<const double> grid, const IbOptions& options) {
    if (m == 0) throw std::invalid_argument("m must be at least 1");
    if (!(n0 >= 0.0)) throw std::invalid_argument("N0 must be non-negative");
    IbPath path;
    path.m = m;
    path.initial_size = static_cast<std::uint64_t>(std::floor(static_cast<double>(m) * n0));
    const bool typed = options.track_types;
    if (typed && initial_types.size() != path.initial_size) {
        throw std::invalid_argument("initial type vector must have floor(m N0) entries");
    }

    std::vector<double> types;
    if (typed) types.assign(initial_types.begin(), initial_types.end());
    std::uint64_t n = path.initial_size;
    const double md = static_cast<double>(m);

    EventSource source(c, seed);
    Rng clock(derive_seed(seed, 0, "ib-clock"));
    Rng choice(derive_seed(seed, 0, "ib-choice"));

    std::size_t g = 0;
    auto emit_until = [&](double t) {
        while (g < grid.size() && grid[g] < t) {
            const double w = typed ? tracked_share(types, options.tracked) : 0.0;
            path.grid.push_back({grid[g], n, static_cast<double>(n) / md, w});
            ++g;
        }
    };

    double t = 0.0;
    std::optional<StreamEvent> next_event = source.next(horizon);
    while (true) {
        if (n == 0) {
            path.extinct = true;
            path.extinction_time = t;
            break;
        }
        const double death_rate = static_cast<double>(n) * c.drift.death;
        const double birth_rate = md * c.drift.birth;
        const double rate = death_rate + birth_rate;
        const double tc = rate > 0.0 ? t + clock.exponential(rate) : std::numeric_limits<double>::infinity();

        if (next_event && next_event->t <= tc) {
            const StreamEvent e = *next_event;
            next_event = source.next(horizon);
            emit_until(e.t);
            t = e.t;
            const auto killed = static_cast<std::uint64_t>(std::floor(static_cast<double>(n) * e.z.death));
            const auto born = static_cast<std::uint64_t>(std::floor(md * e.z.birth));
            if (killed == 0 && born == 0) continue;
            if (typed) {
                const double parent = types[choice.below(types.size())];
                if (killed > 0) {
                    const auto victims = sorted_subset(choice, types.size(), killed);
                    std::size_t v = 0, keep = 0;
                    for (std::size_t i = 0; i < types.size(); ++i) {
                        if (v < victims.size() && victims[v] == i) {
                            ++v;
                            continue;
                        }
                        types[keep++] = types[i];
                    }
                    types.resize(keep);
                }
                if (born > 0) {
                    const auto positions = sorted_subset(choice, types.size() + born, born);
                    types = insert_offspring(types, parent, positions);
                }
            }
            n = n - killed + born;
            path.deaths += killed;
            path.births += born;
            ++path.transitions;
            continue;
        }
        if (!(tc <= horizon)) break;
        emit_until(tc);
        t = tc;
        if (clock.uniform() * rate < death_rate) {
            if (typed) types.erase(types.begin() + static_cast<std::ptrdiff_t>(choice.below(types.size())));
            --n;
            ++path.deaths;
        } else {
            if (typed) {
                const double parent = types[choice.below(types.size())];
                const std::size_t position = choice.below(types.size() + 1);
                types.insert(types.begin() + static_cast<std::ptrdiff_t>(position), parent);
            }
            ++n;
            ++path.births;
        }
        ++path.transitions;
    }
    if (!path.extinct) emit_until(std::numeric_limits<double>::infinity());
    path.final_count = n;
    path.final_types = std::move(types);
    return path;
}

IbPath simulate_ib(const Characteristic& c, std::uint64_t m, double n0, const TypeMeasure& initial,
                   double horizon, std::uint64_t seed, std::span<const double> grid, const IbOptions& options) {
    std::vector<double> types;
    if (options.track_types) {
        const auto size = static_cast<std::size_t>(std::floor(static_cast<double>(m) * n0));
        types = sample_initial_types(initial, size, seed);
    }
    return simulate_ib(c, m, n0, types, horizon, seed, grid, options);
}

}  // namespace gpfv
