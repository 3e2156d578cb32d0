#include "gpfv/dual.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

#include "gpfv/farm.hpp"
#include "gpfv/popsize.hpp"
#include "gpfv/stats.hpp"

namespace gpfv {

Partition Partition::singletons(std::size_t y) {
    Partition p;
    for (std::size_t i = 1; i <= y; ++i) p.blocks.push_back({static_cast<std::uint32_t>(i)});
    return p;
}

std::size_t CoalescentTrace::lineages_at(double s) const {
    std::size_t count = y;
    for (const auto& j : jumps) {
        if (j.s >= s) break;
        count = j.after;
    }
    return count;
}

namespace {

using Block = std::vector<std::uint32_t>;

void merge_into(Block& into, const Block& from) {
    Block merged;
    merged.reserve(into.size() + from.size());
    std::merge(into.begin(), into.end(), from.begin(), from.end(), std::back_inserter(merged));
    into = std::move(merged);
}

Partition to_partition(std::vector<Block> blocks) {
    std::sort(blocks.begin(), blocks.end(), [](const Block& a, const Block& b) { return a.front() < b.front(); });
    return Partition{std::move(blocks)};
}

}  // namespace

CoalescentTrace trace_coupled(const LookdownPath& path, std::size_t y, double horizon) {
    const std::size_t n = path.initial.levels.size();
    if (y == 0 || y > n) throw std::invalid_argument("y must lie in 1..number of levels");
    if (!path.events_recorded) throw std::invalid_argument("lookdown path was run without recording its marks");
    CoalescentTrace trace;
    trace.y = y;
    trace.horizon = horizon;

    // Lineages sorted by current level; parent_level is monotone so order is kept.
    std::vector<std::uint32_t> levels(y);
    std::vector<Block> blocks(y);
    for (std::size_t i = 0; i < y; ++i) {
        levels[i] = static_cast<std::uint32_t>(i + 1);
        blocks[i] = {static_cast<std::uint32_t>(i + 1)};
    }

    for (auto it = path.events.rbegin(); it != path.events.rend(); ++it) {
        if (it->t > horizon || it->marked.size() < 2) continue;
        const std::size_t before = levels.size();
        std::vector<std::uint32_t> next_levels;
        std::vector<Block> next_blocks;
        for (std::size_t i = 0; i < levels.size(); ++i) {
            const auto p = static_cast<std::uint32_t>(parent_level(levels[i], it->marked));
            auto pos = std::lower_bound(next_levels.begin(), next_levels.end(), p);
            if (pos != next_levels.end() && *pos == p) {
                merge_into(next_blocks[static_cast<std::size_t>(pos - next_levels.begin())], blocks[i]);
            } else {
                const auto at = pos - next_levels.begin();
                next_levels.insert(pos, p);
                next_blocks.insert(next_blocks.begin() + at, std::move(blocks[i]));
            }
        }
        levels = std::move(next_levels);
        blocks = std::move(next_blocks);
        if (levels.size() < before) trace.jumps.push_back({horizon - it->t, it->t, before, levels.size()});
    }

    // Keep block levels aligned with the partition order.
    std::vector<std::size_t> order(blocks.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return blocks[a].front() < blocks[b].front(); });
    std::vector<Block> sorted_blocks;
    for (auto i : order) {
        trace.block_levels.push_back(levels[i]);
        sorted_blocks.push_back(std::move(blocks[i]));
    }
    trace.final_partition = Partition{std::move(sorted_blocks)};
    return trace;
}

Environment make_environment(const EventStream& stream, const Drift& drift, double n0) {
    Environment env;
    env.horizon = stream.horizon;
    env.n0 = n0;
    env.events.reserve(stream.events.size());
    SizeTracker size(n0, drift);
    for (const auto& e : stream.events) {
        const double pre = size.before(e.t);
        const double post = size.jump(e.t, e.z);
        env.events.push_back({e.t, e.z, pre, post, e.key});
    }
    return env;
}

Environment make_environment(const Characteristic& c, double n0, double horizon, std::uint64_t seed) {
    Environment env;
    env.horizon = horizon;
    env.n0 = n0;
    EventSource source(c, seed);
    SizeTracker size(n0, c.drift);
    while (const auto e = source.next(horizon)) {
        const double pre = size.before(e->t);
        const double post = size.jump(e->t, e->z);
        env.events.push_back({e->t, e->z, pre, post, e->key});
    }
    return env;
}

void check_environment(const Environment& env, const std::optional<Drift>& drift) {
    double prev_t = 0.0;
    double prev_n = env.n0;
    for (std::size_t i = 0; i < env.events.size(); ++i) {
        const auto& e = env.events[i];
        auto fail = [&](const std::string& what) {
            std::ostringstream msg;
            msg << "environment event " << i << " (t = " << e.t << "): " << what;
            throw std::runtime_error(msg.str());
        };
        if (e.t < prev_t) fail("times are not increasing");
        if (!(e.n_pre > 0.0)) fail("N_pre is not positive");
        if (e.n_post != (1.0 - e.z.death) * e.n_pre + e.z.birth) fail("N_post does not equal (1 - z_d) N_pre + z_b");
        if (std::abs(e.z.birth / e.n_post - effective_impact(e.n_pre, e.z)) > 1e-12) {
            fail("z_b / N_post disagrees with zbar at N_pre");
        }
        if (drift && e.n_pre != flow(prev_n, *drift, e.t - prev_t)) fail("N_pre does not follow the drift flow");
        prev_t = e.t;
        prev_n = e.n_post;
    }
}

void write_environment(std::ostream& out, const Environment& env) {
    for (const auto& e : env.events) {
        nlohmann::ordered_json j;
        j["t"] = e.t;
        j["z_d"] = e.z.death;
        j["z_b"] = e.z.birth;
        j["N_pre"] = e.n_pre;
        j["N_post"] = e.n_post;
        j["substream_key"] = e.key;
        out << j.dump() << '\n';
    }
}

Environment read_environment(std::istream& in, std::optional<double> horizon) {
    Environment env;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        try {
            const auto j = nlohmann::json::parse(line);
            if (!j.is_object()) throw std::runtime_error("expected a JSON object");
            for (auto it = j.begin(); it != j.end(); ++it) {
                const std::string& key = it.key();
                if (key != "t" && key != "z_d" && key != "z_b" && key != "N_pre" && key != "N_post" &&
                    key != "substream_key") {
                    throw std::runtime_error("unknown key '" + key + "'");
                }
            }
            EnvironmentEvent e;
            e.t = j.at("t").get<double>();
            e.z = Event(j.at("z_d").get<double>(), j.at("z_b").get<double>());
            e.n_pre = j.at("N_pre").get<double>();
            e.n_post = j.at("N_post").get<double>();
            e.key = j.at("substream_key").get<std::uint64_t>();
            env.events.push_back(e);
        } catch (const std::exception& ex) {
            throw std::runtime_error("environment line " + std::to_string(line_no) + ": " + ex.what());
        }
    }
    if (!env.events.empty()) env.n0 = env.events.front().n_pre;
    env.horizon = horizon ? *horizon : (env.events.empty() ? 0.0 : env.events.back().t);
    check_environment(env);
    return env;
}

CoalescentTrace trace_quenched(const Environment& env, std::size_t y, double horizon, std::uint64_t seed) {
    if (y == 0) throw std::invalid_argument("y must be at least 1");
    CoalescentTrace trace;
    trace.y = y;
    trace.horizon = horizon;
    std::vector<Block> blocks(y);
    for (std::size_t i = 0; i < y; ++i) blocks[i] = {static_cast<std::uint32_t>(i + 1)};

    Rng rng(derive_seed(seed, 0, "quenched"));
    std::vector<std::size_t> hit;
    for (auto it = env.events.rbegin(); it != env.events.rend(); ++it) {
        if (it->t > horizon) continue;
        if (blocks.size() == 1) break;
        const double p = it->z.birth / it->n_post;
        hit.clear();
        for (std::size_t i = 0; i < blocks.size(); ++i) {
            if (rng.uniform() < p) hit.push_back(i);
        }
        if (hit.size() < 2) continue;
        const std::size_t before = blocks.size();
        for (std::size_t k = hit.size(); k-- > 1;) {
            merge_into(blocks[hit[0]], blocks[hit[k]]);
            blocks.erase(blocks.begin() + static_cast<std::ptrdiff_t>(hit[k]));
        }
        trace.jumps.push_back({horizon - it->t, it->t, before, blocks.size()});
    }
    trace.final_partition = to_partition(std::move(blocks));
    return trace;
}

double dust_probability(const Environment& env, double t) {
    double p = 1.0;
    for (const auto& e : env.events) {
        if (e.t > t) break;
        p *= 1.0 - effective_impact(e.n_pre, e.z);
    }
    return p;
}

DualityStat moment_duality_stat(const Characteristic& c, double x, std::size_t y, double horizon,
                                std::size_t replicates, std::uint64_t seed) {
    if (!(x >= 0.0 && x <= 1.0)) throw std::invalid_argument("x must lie in [0, 1]");
    if (y == 0) throw std::invalid_argument("y must be at least 1");
    const double yd = static_cast<double>(y);
    const std::vector<double> types{0.0, 1.0};
    const std::vector<double> freqs{x, 1.0 - x};
    const TypeMeasure initial = TypeMeasure::from_frequencies(1.0, types, freqs);
    const std::vector<double> grid{horizon};

    ForwardOptions options;
    options.tracked = {0.0};
    options.record_jumps = false;
    options.record_snapshots = false;

    const auto lhs = farm(replicates, [&](std::size_t r) {
        const auto path = simulate_forward(c, initial, horizon, derive_seed(seed, r, "duality-forward"), grid, options);
        return std::pow(path.frequency.back().w, yd);
    });
    const auto rhs = farm(replicates, [&](std::size_t r) {
        const auto env = make_environment(c, 1.0, horizon, derive_seed(seed, r, "duality-environment"));
        const auto trace = trace_quenched(env, y, horizon, derive_seed(seed, r, "duality-marks"));
        return std::pow(x, static_cast<double>(trace.final_count()));
    });
    const Summary a = summarize(lhs);
    const Summary b = summarize(rhs);
    return {a.mean, b.mean, a.se, b.se, pooled_se(a, b), replicates};
}

double duality_functional(const Partition& partition, const TypeMeasure& rho,
                          const std::vector<std::function<double(double)>>& g) {
    double mass = 0.0;
    for (const auto& a : rho.atoms) mass += a.mass;
    if (!(mass > 0.0)) throw std::invalid_argument("duality functional needs a non-zero measure");
    double value = 1.0;
    for (const auto& block : partition.blocks) {
        double integral = 0.0;
        for (const auto& a : rho.atoms) {
            double prod = 1.0;
            for (auto i : block) {
                if (i == 0 || i > g.size()) throw std::invalid_argument("partition element without a test function");
                prod *= g[i - 1](a.type);
            }
            integral += a.mass * prod;
        }
        value *= integral / mass;
    }
    return value;
}

}  // namespace gpfv
