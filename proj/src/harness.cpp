#include "gpfv/harness.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

#include "gpfv/dual.hpp"
#include "gpfv/farm.hpp"
#include "gpfv/forward.hpp"
#include "gpfv/lookdown.hpp"
#include "gpfv/muller.hpp"
#include "gpfv/popsize.hpp"
#include "gpfv/prelimit.hpp"
#include "gpfv/stats.hpp"
#include "gpfv/verify.hpp"

namespace gpfv {

using nlohmann::ordered_json;

namespace {

constexpr std::size_t kMaxReplicateFiles = 10;

std::string replicate_name(const std::string& stem, std::size_t r, const std::string& ext) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "_r%03zu", r);
    return stem + buf + ext;
}

void write_text(const std::filesystem::path& dir, const std::string& name, const std::string& text,
                std::vector<std::string>& files) {
    std::filesystem::create_directories(dir);
    std::ofstream out(dir / name, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + (dir / name).string());
    out << text;
    files.push_back(name);
}

template <class Writer>
std::string to_text(Writer&& w) {
    std::ostringstream s;
    w(s);
    return s.str();
}

ordered_json summary_json(const Summary& s) {
    return {{"n", s.n}, {"mean", s.mean}, {"sd", s.sd}, {"se", s.se}, {"ci_lo", s.ci_lo}, {"ci_hi", s.ci_hi},
            {"ci_level", s.ci_level}};
}

TypeMeasure initial_measure(const RunConfig& config) {
    std::vector<double> types(config.frequencies.size());
    for (std::size_t i = 0; i < types.size(); ++i) types[i] = static_cast<double>(i);
    return TypeMeasure::from_frequencies(config.n0, types, config.frequencies);
}

std::string svg_for(const ForwardPath& path, const std::string& title) {
    std::istringstream in(to_text([&](std::ostream& o) { write_trajectory_csv(o, path); }));
    MullerStyle style;
    style.title = title;
    return muller_svg(read_trajectory_csv(in), style);
}

RunOutcome run_popsize(const RunConfig& config, const Characteristic& c) {
    RunOutcome outcome;
    const auto grid = uniform_grid(config.horizon, config.grid);
    const auto paths = farm(config.replicates, [&](std::size_t r) {
        return simulate_pop(c, config.n0, config.horizon, derive_seed(config.seed, r, "popsize"), grid);
    });
    std::vector<double> final_n;
    double min_n = config.n0;
    std::size_t sandwich_failures = 0;
    for (std::size_t r = 0; r < paths.size(); ++r) {
        const auto& p = paths[r];
        final_n.push_back(p.final_n);
        for (const auto& g : p.grid) min_n = std::min(min_n, g.n);
        for (const auto& j : p.jumps) min_n = std::min({min_n, j.n_before, j.n_after});
        if (!sandwich_check(p).ok) ++sandwich_failures;
        if (r < kMaxReplicateFiles) {
            write_text(config.out, replicate_name("popsize", r, ".csv"),
                       to_text([&](std::ostream& o) { write_popsize_csv(o, p); }), outcome.files);
        }
    }
    outcome.summary = {{"final_n", summary_json(summarize(final_n))},
                       {"min_n", min_n},
                       {"sandwich_failures", sandwich_failures}};
    outcome.status = sandwich_failures == 0 && min_n > 0.0 ? 0 : 1;
    return outcome;
}

RunOutcome run_forward(const RunConfig& config, const Characteristic& c) {
    RunOutcome outcome;
    const auto grid = uniform_grid(config.horizon, config.grid);
    const TypeMeasure initial = initial_measure(config);
    ForwardOptions options;
    options.tracked = {0.0};
    options.record_jumps = false;
    const auto paths = farm(config.replicates, [&](std::size_t r) {
        ForwardOptions o = options;
        o.record_snapshots = r < kMaxReplicateFiles;
        return simulate_forward(c, initial, config.horizon, derive_seed(config.seed, r, "forward"), grid, o);
    });
    std::vector<double> w_final;
    std::size_t fixed = 0;
    for (std::size_t r = 0; r < paths.size(); ++r) {
        const auto& p = paths[r];
        w_final.push_back(p.frequency.back().w);
        if (p.final_measure.atoms.size() == 1) ++fixed;
        if (r < kMaxReplicateFiles) {
            write_text(config.out, replicate_name("trajectory", r, ".csv"),
                       to_text([&](std::ostream& o) { write_trajectory_csv(o, p); }), outcome.files);
            write_text(config.out, replicate_name("muller", r, ".svg"), svg_for(p, "replicate " + std::to_string(r)),
                       outcome.files);
        }
    }
    outcome.summary = {{"w0", config.frequencies.front()},
                       {"w_T", summary_json(summarize(w_final))},
                       {"fixed_by_T", fixed}};
    return outcome;
}

RunOutcome run_lookdown(const RunConfig& config, const Characteristic& c) {
    RunOutcome outcome;
    const TypeMeasure initial = initial_measure(config);
    std::set<std::size_t> tracked_levels{std::min<std::size_t>(2, config.levels), std::min<std::size_t>(4, config.levels),
                                         config.levels};
    LookdownOptions options;
    options.fixation_levels.assign(tracked_levels.begin(), tracked_levels.end());
    const auto paths = farm(config.replicates, [&](std::size_t r) {
        return simulate_lookdown(c, config.n0, config.levels, initial, config.horizon,
                                 derive_seed(config.seed, r, "lookdown"), options);
    });
    const std::vector<double> type_a{0.0};
    std::vector<double> freq;
    std::vector<std::size_t> fixed(options.fixation_levels.size(), 0);
    for (std::size_t r = 0; r < paths.size(); ++r) {
        const auto& p = paths[r];
        freq.push_back(empirical_frequency(p.final_state, type_a));
        for (std::size_t i = 0; i < p.quasi_fixation.size(); ++i) {
            if (p.quasi_fixation[i].second) ++fixed[i];
        }
        if (r < kMaxReplicateFiles) {
            write_text(config.out, replicate_name("lookdown_events", r, ".csv"),
                       to_text([&](std::ostream& o) { write_lookdown_events_csv(o, p); }), outcome.files);
            ordered_json state = ordered_json::array();
            for (const auto& l : p.final_state.levels) state.push_back({{"type", l.type}, {"ancestor", l.ancestor}});
            ordered_json snap{{"t", p.final_state.t}, {"N", p.final_state.n}, {"levels", state}};
            write_text(config.out, replicate_name("lookdown_state", r, ".json"), snap.dump(2) + "\n", outcome.files);
        }
    }
    ordered_json qf = ordered_json::object();
    for (std::size_t i = 0; i < fixed.size(); ++i) {
        qf[std::to_string(options.fixation_levels[i])] =
            static_cast<double>(fixed[i]) / static_cast<double>(config.replicates);
    }
    outcome.summary = {{"type0_frequency_T", summary_json(summarize(freq))}, {"quasi_fixed_fraction", qf}};
    return outcome;
}

RunOutcome run_prelimit(const RunConfig& config, const Characteristic& c) {
    RunOutcome outcome;
    const auto grid = uniform_grid(config.horizon, config.grid);
    const TypeMeasure initial = initial_measure(config);
    IbOptions options;
    options.tracked = {0.0};
    const auto paths = farm(config.replicates, [&](std::size_t r) {
        return simulate_ib(c, config.m, config.n0, initial, config.horizon, derive_seed(config.seed, r, "prelimit"),
                           grid, options);
    });
    std::vector<double> scaled, w;
    std::size_t extinct = 0;
    for (std::size_t r = 0; r < paths.size(); ++r) {
        const auto& p = paths[r];
        if (p.extinct) {
            ++extinct;
            scaled.push_back(0.0);
        } else {
            scaled.push_back(p.grid.back().scaled);
            w.push_back(p.grid.back().w);
        }
        if (r < kMaxReplicateFiles) {
            write_text(config.out, replicate_name("prelimit", r, ".csv"),
                       to_text([&](std::ostream& o) { write_prelimit_csv(o, p); }), outcome.files);
        }
    }
    outcome.summary = {{"m", config.m},
                       {"scaled_size_T", summary_json(summarize(scaled))},
                       {"w_T", summary_json(summarize(w))},
                       {"extinct", extinct}};
    return outcome;
}

RunOutcome run_dual(const RunConfig& config, const Characteristic& c) {
    RunOutcome outcome;
    for (std::size_t r = 0; r < std::min(config.replicates, kMaxReplicateFiles); ++r) {
        const auto env = make_environment(c, config.n0, config.horizon, derive_seed(config.seed, r, "dual-env"));
        write_text(config.out, replicate_name("environment", r, ".jsonl"),
                   to_text([&](std::ostream& o) { write_environment(o, env); }), outcome.files);
    }
    const std::size_t levels = std::max(config.levels, config.y);
    std::vector<double> types(levels);
    for (std::size_t i = 0; i < levels; ++i) types[i] = static_cast<double>(i);
    const auto agree = farm(config.replicates, [&](std::size_t r) {
        const auto path = simulate_lookdown(c, config.n0, types, config.horizon, derive_seed(config.seed, r, "dual-coupled"));
        const auto trace = trace_coupled(path, config.y, config.horizon);
        return static_cast<int>(trace.final_count() == distinct_ancestors(path.final_state, config.y));
    });
    const std::size_t matches = static_cast<std::size_t>(std::count(agree.begin(), agree.end(), 1));
    const auto stat = moment_duality_stat(c, config.x, config.y, config.horizon, config.replicates, config.seed);
    const bool moment_ok = std::abs(stat.lhs - stat.rhs) < 3.0 * stat.pooled_se || stat.lhs == stat.rhs;
    outcome.summary = {{"coupled_matches", matches},
                       {"replicates", config.replicates},
                       {"moment_lhs", stat.lhs},
                       {"moment_rhs", stat.rhs},
                       {"pooled_se", stat.pooled_se},
                       {"moment_within_3se", moment_ok}};
    outcome.status = matches == config.replicates && moment_ok ? 0 : 1;
    return outcome;
}

}  // namespace

Characteristic runnable_characteristic(const RunConfig& config) {
    const Characteristic& c = config.characteristic;
    if (config.eps) return truncate(c, *config.eps).characteristic;
    if (!std::isfinite(c.jump.total_rate())) {
        throw ConfigError(
            "characteristic has infinite activity: set \"eps\" in the config or pass --eps to truncate small events");
    }
    return c;
}

double pair_merger_rate(const Characteristic& c) {
    return c.jump.integrate([](double d, double b) {
        const double denom = 1.0 - d + b;
        return denom > 0.0 ? (b / denom) * (b / denom) : 0.0;
    });
}

std::vector<ClosednessRow> closedness_study(const Characteristic& c, std::vector<double> eps, double horizon, double n0,
                                            std::size_t replicates, std::uint64_t seed) {
    if (eps.empty()) throw std::invalid_argument("closedness study needs at least one eps");
    std::sort(eps.begin(), eps.end(), std::greater<>());
    std::vector<double> levels;
    for (double e : eps) {
        if (!(e > 0.0)) throw std::invalid_argument("eps must be positive");
        levels.push_back(e);
        levels.push_back(e / 2.0);
    }
    std::sort(levels.begin(), levels.end(), std::greater<>());
    levels.erase(std::unique(levels.begin(), levels.end()), levels.end());

    std::vector<Truncation> truncations;
    for (double e : levels) truncations.push_back(truncate(c, e));
    const Characteristic& finest = truncations.back().characteristic;

    const auto finals = farm(replicates, [&](std::size_t r) {
        const auto stream = sample_event_stream(finest, horizon, derive_seed(seed, r, "closedness"));
        std::vector<double> out;
        for (std::size_t i = 0; i < levels.size(); ++i) {
            const auto thinned = i + 1 == levels.size() ? stream : thin_stream(stream, levels[i]);
            out.push_back(simulate_pop(thinned, truncations[i].characteristic.drift, n0, {}).final_n);
        }
        return out;
    });
    auto column = [&](std::size_t i) {
        std::vector<double> col;
        for (const auto& f : finals) col.push_back(f[i]);
        return col;
    };
    std::vector<ClosednessRow> rows;
    for (double e : eps) {
        const auto i = static_cast<std::size_t>(std::find(levels.begin(), levels.end(), e) - levels.begin());
        const auto h = static_cast<std::size_t>(std::find(levels.begin(), levels.end(), e / 2.0) - levels.begin());
        const auto a = column(i);
        rows.push_back({e, ks_distance(a, column(h)), truncations[i].report.dropped_rate, summarize(a).mean});
    }
    return rows;
}

HeterozygosityCurve heterozygosity_curve(const Characteristic& c, double w0, double horizon, std::size_t intervals,
                                         std::size_t replicates, std::uint64_t seed) {
    const auto grid = uniform_grid(horizon, intervals);
    const std::vector<double> types{0.0, 1.0};
    const std::vector<double> freqs{w0, 1.0 - w0};
    const TypeMeasure initial = TypeMeasure::from_frequencies(1.0, types, freqs);
    ForwardOptions options;
    options.tracked = {0.0};
    options.stop_at_fixation = true;
    options.record_jumps = false;
    options.record_snapshots = false;
    const auto hs = farm(replicates, [&](std::size_t r) {
        const auto path = simulate_forward(c, initial, horizon, derive_seed(seed, r, "heterozygosity"), grid, options);
        // Grid times after a fixation are not emitted; H stays 0 there.
        std::vector<double> h(grid.size(), 0.0);
        for (std::size_t g = 0; g < path.frequency.size(); ++g) h[g] = path.frequency[g].w * (1.0 - path.frequency[g].w);
        return h;
    });
    HeterozygosityCurve curve;
    curve.t = grid;
    for (std::size_t g = 0; g < grid.size(); ++g) {
        std::vector<double> col;
        col.reserve(hs.size());
        for (const auto& h : hs) col.push_back(h[g]);
        const Summary s = summarize(col);
        curve.mean_h.push_back(s.mean);
        curve.se_h.push_back(s.se);
    }
    return curve;
}

std::vector<WfStudyEntry> wf_study(const std::vector<double>& ks, std::size_t replicates, std::uint64_t seed,
                                   const std::string& out_dir) {
    std::vector<WfStudyEntry> entries;
    std::vector<std::string> files;
    for (std::size_t i = 0; i < ks.size(); ++i) {
        WfStudyEntry e;
        e.k = ks[i];
        const Characteristic c = wright_fisher_scaling(e.k);
        e.lambda_hat = pair_merger_rate(c);
        e.horizon = 2.0 / e.lambda_hat;

        const std::string stem = "wf_k" + std::to_string(i);
        if (!out_dir.empty()) {
            ForwardOptions options;
            options.record_jumps = false;
            const auto grid = uniform_grid(e.horizon, 400);
            const auto path = simulate_forward(c, TypeMeasure::equal_types(1.0, 20), e.horizon,
                                               derive_seed(seed, i, "wf-muller"), grid, options);
            std::ostringstream title;
            title << "k = " << format_double(e.k) << ", T = 2 / lambda = " << format_double(std::round(e.horizon));
            e.trajectory_csv = stem + "_trajectory.csv";
            e.muller_svg = stem + "_muller.svg";
            write_text(out_dir, e.trajectory_csv, to_text([&](std::ostream& o) { write_trajectory_csv(o, path); }),
                       files);
            write_text(out_dir, e.muller_svg, svg_for(path, title.str()), files);
        }
        if (replicates > 0) {
            const auto curve = heterozygosity_curve(c, 0.5, 3.0 / e.lambda_hat, 60, replicates,
                                                    derive_seed(seed, i, "wf-heterozygosity"));
            e.fitted_rate = fit_exponential_decay(curve.t, curve.mean_h).rate;
        }
        entries.push_back(e);
    }
    return entries;
}

RunOutcome run(const RunConfig& config) {
    switch (config.experiment) {
        case ExperimentKind::popsize:
            return run_popsize(config, runnable_characteristic(config));
        case ExperimentKind::forward:
            return run_forward(config, runnable_characteristic(config));
        case ExperimentKind::lookdown:
            return run_lookdown(config, runnable_characteristic(config));
        case ExperimentKind::prelimit:
            return run_prelimit(config, runnable_characteristic(config));
        case ExperimentKind::dual:
            return run_dual(config, runnable_characteristic(config));
        case ExperimentKind::verify_suite: {
            RunOutcome outcome;
            VerifyOptions options;
            options.seed = config.seed;
            options.base = runnable_characteristic(config);
            options.artifact_dir = config.out;
            const auto results = run_verify_suite(options);
            write_text(config.out, "report.json", verify_report(results, options), outcome.files);
            bool all = true;
            for (const auto& r : results) all = all && r.pass;
            outcome.status = all ? 0 : 1;
            outcome.summary = {{"all_pass", all}};
            for (const auto& r : results) outcome.summary[std::to_string(r.id)] = r.pass;
            return outcome;
        }
        case ExperimentKind::wf_study: {
            RunOutcome outcome;
            const auto entries = wf_study({1.0, 1.0 / 3.0, 1.0 / 10.0, 1.0 / 20.0}, config.replicates, config.seed, config.out);
            ordered_json rows = ordered_json::array();
            for (const auto& e : entries) {
                rows.push_back({{"k", e.k}, {"lambda_hat", e.lambda_hat}, {"muller_horizon", e.horizon},
                                {"fitted_rate", e.fitted_rate}, {"trajectory", e.trajectory_csv}, {"svg", e.muller_svg}});
                outcome.files.push_back(e.trajectory_csv);
                outcome.files.push_back(e.muller_svg);
            }
            outcome.summary = {{"entries", rows}};
            write_text(config.out, "wf_study.json", outcome.summary.dump(2) + "\n", outcome.files);
            return outcome;
        }
        case ExperimentKind::closedness_study: {
            RunOutcome outcome;
            std::vector<double> eps{0.1, 0.05, 0.025};
            if (config.eps) eps = {*config.eps, *config.eps / 2.0, *config.eps / 4.0};
            const auto rows =
                closedness_study(config.characteristic, eps, config.horizon, config.n0, config.replicates, config.seed);
            std::ostringstream csv;
            csv << "eps,ks_vs_half,dropped_rate,mean_N_T\n";
            ordered_json table = ordered_json::array();
            bool decreasing = true;
            for (std::size_t i = 0; i < rows.size(); ++i) {
                const auto& r = rows[i];
                csv << format_double(r.eps) << ',' << format_double(r.ks) << ',' << format_double(r.dropped_rate) << ','
                    << format_double(r.mean_n) << '\n';
                table.push_back({{"eps", r.eps}, {"ks", r.ks}, {"dropped_rate", r.dropped_rate}, {"mean_N_T", r.mean_n}});
                if (i > 0 && !(r.ks < rows[i - 1].ks)) decreasing = false;
            }
            write_text(config.out, "closedness.csv", csv.str(), outcome.files);
            outcome.summary = {{"rows", table}, {"strictly_decreasing", decreasing}};
            write_text(config.out, "closedness.json", outcome.summary.dump(2) + "\n", outcome.files);
            outcome.status = decreasing ? 0 : 1;
            return outcome;
        }
    }
    throw std::logic_error("unhandled experiment kind");
}

}  // namespace gpfv
