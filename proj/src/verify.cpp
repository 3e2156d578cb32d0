#include "gpfv/verify.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <optional>
#include <tuple>

#include "gpfv/dual.hpp"
#include "gpfv/farm.hpp"
#include "gpfv/forward.hpp"
#include "gpfv/harness.hpp"
#include "gpfv/io.hpp"
#include "gpfv/lookdown.hpp"
#include "gpfv/popsize.hpp"
#include "gpfv/prelimit.hpp"
#include "gpfv/stats.hpp"

namespace gpfv {

using nlohmann::ordered_json;

namespace {

std::uint64_t rep_seed(const VerifyOptions& o, int criterion, std::size_t r) {
    return derive_seed(o.seed, r, "criterion-" + std::to_string(criterion));
}

CriterionResult balance_validation(const VerifyOptions&) {
    CriterionResult res{1, "balance and validation of the k-scaled characteristics", true, ordered_json::object()};
    ordered_json rows = ordered_json::array();
    for (double k : {1.0, 1.0 / 3.0, 1.0 / 10.0, 1.0 / 20.0}) {
        const Characteristic c = wright_fisher_scaling(k);
        Characteristic perturbed = c;
        perturbed.drift.birth += 1e-6;
        const bool ok = validate(c).ok;
        const auto bad = validate(perturbed);
        res.pass = res.pass && ok && !bad.ok;
        rows.push_back({{"k", k},
                        {"valid", ok},
                        {"perturbed_valid", bad.ok},
                        {"perturbed_message", bad.violations.empty() ? "" : bad.violations.front()}});
    }
    res.stats["characteristics"] = rows;
    return res;
}

CriterionResult theta_figure(const VerifyOptions&) {
    CriterionResult res{2, "theta on the six-level event with J = {2,4,5}", false, ordered_json::object()};
    const std::vector<std::uint32_t> marked{2, 4, 5};
    const std::vector<int> k{1, 2, 3, 4, 5, 6};
    const auto out = theta<int>(marked, k);
    res.pass = out == std::vector<int>{1, 2, 3, 2, 2, 4};
    res.stats["image"] = out;
    return res;
}

struct SandwichRun {
    std::size_t paths = 0;
    std::size_t violations = 0;
    double max_violation = 0.0;
    double min_n = std::numeric_limits<double>::infinity();
};

SandwichRun sandwich_run(const VerifyOptions& o, int criterion) {
    const auto grid = uniform_grid(10.0, 200);
    const auto results = farm(1000, [&](std::size_t r) {
        const auto path = simulate_pop(o.base, 1.0, 10.0, rep_seed(o, criterion, r), grid);
        const auto check = sandwich_check(path, 1e-9);
        double min_n = path.n0;
        for (const auto& g : path.grid) min_n = std::min(min_n, g.n);
        for (const auto& j : path.jumps) min_n = std::min({min_n, j.n_before, j.n_after});
        return std::tuple<bool, double, double>{check.ok, check.max_violation, min_n};
    });
    SandwichRun run;
    run.paths = results.size();
    for (const auto& [ok, v, m] : results) {
        if (!ok) ++run.violations;
        run.max_violation = std::max(run.max_violation, v);
        run.min_n = std::min(run.min_n, m);
    }
    return run;
}

CriterionResult sandwich(const VerifyOptions& o) {
    CriterionResult res{3, "pathwise sandwich bounds on 1000 paths, T = 10", false, ordered_json::object()};
    const auto run = sandwich_run(o, 3);
    res.pass = run.violations == 0;
    res.stats = {{"paths", run.paths}, {"violating_paths", run.violations}, {"max_relative_excess", run.max_violation}};
    return res;
}

CriterionResult positivity(const VerifyOptions& o) {
    CriterionResult res{4, "positivity of N over the sandwich paths", false, ordered_json::object()};
    const auto run = sandwich_run(o, 3);
    res.pass = run.min_n > 0.0;
    res.stats = {{"paths", run.paths}, {"min_n", run.min_n}};
    return res;
}

CriterionResult generator(const VerifyOptions& o) {
    CriterionResult res{5, "generator of N against short-time differences, f = exp(-N)", false, ordered_json::object()};
    const double h = 1e-3;
    const std::size_t reps = 100000;
    auto f = [](double n) { return std::exp(-n); };
    const double lf = generator_of_size(o.base, f, [](double n) { return -std::exp(-n); }, 1.0);
    const auto diffs = farm(reps, [&](std::size_t r) {
        const auto path = simulate_pop(o.base, 1.0, h, rep_seed(o, 5, r), {});
        return (f(path.final_n) - f(1.0)) / h;
    });
    const Summary s = summarize(diffs);
    res.pass = std::abs(s.mean - lf) < 3.0 * s.se;
    res.stats = {{"h", h}, {"replicates", reps}, {"generator", lf}, {"estimate", s.mean}, {"se", s.se},
                 {"z", (s.mean - lf) / s.se}};
    return res;
}

CriterionResult martingale(const VerifyOptions& o) {
    CriterionResult res{6, "frequency martingale, k = 1/3, w0 = 0.5, T = 5", true, ordered_json::object()};
    const Characteristic c = wright_fisher_scaling(1.0 / 3.0);
    const std::size_t reps = 10000;
    const auto grid = uniform_grid(5.0, 10);
    const TypeMeasure initial = TypeMeasure::equal_types(1.0, 2);
    ForwardOptions options;
    options.tracked = {0.0};
    options.record_jumps = false;
    options.record_snapshots = false;
    const auto ws = farm(reps, [&](std::size_t r) {
        const auto path = simulate_forward(c, initial, 5.0, rep_seed(o, 6, r), grid, options);
        std::vector<double> w;
        for (const auto& s : path.frequency) w.push_back(s.w);
        return w;
    });
    ordered_json rows = ordered_json::array();
    double worst = 0.0;
    for (std::size_t g = 1; g < grid.size(); ++g) {
        std::vector<double> col;
        for (const auto& w : ws) col.push_back(w[g]);
        const Summary s = summarize(col);
        const double z = std::abs(s.mean - 0.5) / s.se;
        worst = std::max(worst, z);
        res.pass = res.pass && std::abs(s.mean - 0.5) < 3.0 * s.se;
        rows.push_back({{"t", grid[g]}, {"mean", s.mean}, {"se", s.se}});
    }
    res.stats = {{"replicates", reps}, {"grid", rows}, {"max_abs_z", worst}};
    return res;
}

CriterionResult coupled_duality(const VerifyOptions& o) {
    CriterionResult res{7, "coupled duality, 64 levels, y in {2, 5, 16}, T = 3", false, ordered_json::object()};
    const std::size_t reps = 500;
    std::vector<double> types(64);
    std::iota(types.begin(), types.end(), 0.0);
    const std::vector<std::size_t> ys{2, 5, 16};
    const auto agree = farm(reps, [&](std::size_t r) {
        const auto path = simulate_lookdown(o.base, 1.0, types, 3.0, rep_seed(o, 7, r));
        std::vector<int> ok;
        for (auto y : ys) {
            const auto trace = trace_coupled(path, y, 3.0);
            ok.push_back(trace.final_count() == distinct_ancestors(path.final_state, y) ? 1 : 0);
        }
        return ok;
    });
    ordered_json rows = ordered_json::array();
    bool all = true;
    for (std::size_t i = 0; i < ys.size(); ++i) {
        std::size_t matches = 0;
        for (const auto& a : agree) matches += static_cast<std::size_t>(a[i]);
        all = all && matches == reps;
        rows.push_back({{"y", ys[i]}, {"matches", matches}, {"replicates", reps}});
    }
    res.pass = all;
    res.stats["by_y"] = rows;
    return res;
}

CriterionResult annealed_duality(const VerifyOptions& o) {
    CriterionResult res{8, "annealed moment duality, x = 0.3, y = 5, T = 2", false, ordered_json::object()};
    const auto stat = moment_duality_stat(o.base, 0.3, 5, 2.0, 20000, derive_seed(o.seed, 0, "criterion-8"));
    res.pass = std::abs(stat.lhs - stat.rhs) < 3.0 * stat.pooled_se;
    res.stats = {{"replicates_per_side", stat.replicates}, {"lhs", stat.lhs}, {"rhs", stat.rhs},
                 {"pooled_se", stat.pooled_se}, {"z", (stat.lhs - stat.rhs) / stat.pooled_se}};
    return res;
}

CriterionResult fixation(const VerifyOptions& o) {
    CriterionResult res{9, "fixation probability equals w0", true, ordered_json::object()};
    const std::size_t reps = 5000;
    const double horizon = 1e5;
    ForwardOptions options;
    options.stop_at_fixation = true;
    options.record_jumps = false;
    options.record_snapshots = false;
    ordered_json rows = ordered_json::array();
    int idx = 0;
    for (double w0 : {0.2, 0.5, 0.8}) {
        const std::vector<double> types{0.0, 1.0};
        const std::vector<double> freqs{w0, 1.0 - w0};
        const TypeMeasure initial = TypeMeasure::from_frequencies(1.0, types, freqs);
        const auto outcome = farm(reps, [&](std::size_t r) {
            const auto path = simulate_forward(o.base, initial, horizon, rep_seed(o, 90 + idx, r), {}, options);
            if (!path.fixation_time) return 2;
            return path.final_measure.atoms.front().type == 0.0 ? 1 : 0;
        });
        const auto fixed_a = static_cast<double>(std::count(outcome.begin(), outcome.end(), 1));
        const auto unfixed = static_cast<std::size_t>(std::count(outcome.begin(), outcome.end(), 2));
        const double p = fixed_a / static_cast<double>(reps);
        const double half = 2.5758293035489 * std::sqrt(w0 * (1.0 - w0) / static_cast<double>(reps));
        const bool ok = std::abs(p - w0) <= half && unfixed == 0;
        res.pass = res.pass && ok;
        rows.push_back({{"w0", w0}, {"fixed_a", p}, {"ci_half_width", half}, {"unfixed", unfixed}, {"pass", ok}});
        ++idx;
    }
    res.stats = {{"replicates", reps}, {"horizon", horizon}, {"by_w0", rows}};
    return res;
}

CriterionResult quasi_fixation(const VerifyOptions& o) {
    CriterionResult res{10, "quasi-fixation of levels 1..4 in finite time", false, ordered_json::object()};
    const std::size_t reps = 2000;
    const std::vector<double> sweep{5, 10, 20, 40, 80, 160};
    const std::vector<double> types{0, 1, 2, 3};
    LookdownOptions options;
    options.fixation_levels = {4};
    options.stop_when_fixed = true;
    options.record_events = false;
    const auto taus = farm(reps, [&](std::size_t r) {
        const auto path = simulate_lookdown(o.base, 1.0, types, sweep.back(), rep_seed(o, 10, r), options);
        const auto tau = path.quasi_fixation.front().second;
        return tau ? *tau : std::numeric_limits<double>::infinity();
    });
    ordered_json rows = ordered_json::array();
    bool monotone = true, exceeded = false;
    double prev = -1.0;
    std::optional<double> first_t;
    for (double t : sweep) {
        const double frac = static_cast<double>(std::count_if(taus.begin(), taus.end(), [&](double x) { return x <= t; })) /
                            static_cast<double>(reps);
        monotone = monotone && frac >= prev;
        if (frac > 0.95 && !first_t) first_t = t;
        exceeded = exceeded || frac > 0.95;
        prev = frac;
        rows.push_back({{"T", t}, {"fraction", frac}});
    }
    res.pass = monotone && exceeded;
    res.stats = {{"replicates", reps}, {"sweep", rows}, {"monotone", monotone}};
    res.stats["first_T_above_0.95"] = first_t ? ordered_json(*first_t) : ordered_json(nullptr);
    return res;
}

CriterionResult dust(const VerifyOptions& o) {
    CriterionResult res{11, "dust: level 1 untouched by t = 1", false, ordered_json::object()};
    const std::size_t reps = 10000;
    const double t = 1.0;
    std::vector<double> types(8);
    std::iota(types.begin(), types.end(), 0.0);
    LookdownOptions options;
    options.record_events = false;
    const auto pairs = farm(reps, [&](std::size_t r) {
        const auto seed = rep_seed(o, 11, r);
        const auto path = simulate_lookdown(o.base, 1.0, types, t, seed, options);
        const double untouched = path.first_mark_of_level_one ? 0.0 : 1.0;
        const auto env = make_environment(o.base, 1.0, t, seed);
        return std::pair<double, double>{untouched, dust_probability(env, t)};
    });
    std::vector<double> u, p, d;
    for (const auto& [a, b] : pairs) {
        u.push_back(a);
        p.push_back(b);
        d.push_back(a - b);
    }
    const Summary su = summarize(u), sp = summarize(p), sd = summarize(d);
    res.pass = std::abs(sd.mean) < 3.0 * sd.se && su.mean > 0.0;
    res.stats = {{"replicates", reps}, {"untouched_fraction", su.mean}, {"mean_product", sp.mean},
                 {"paired_difference", sd.mean}, {"paired_se", sd.se}, {"full_death_rate", o.base.jump.full_death_rate()}};
    return res;
}

CriterionResult ergodicity(const VerifyOptions& o) {
    CriterionResult res{12, "ergodicity of N from N0 = 0.1 and N0 = 10", false, ordered_json::object()};
    const std::size_t reps = 10000;
    const double horizon = 50.0;
    auto finals = [&](double n0, int stream) {
        return farm(reps, [&](std::size_t r) {
            return simulate_pop(o.base, n0, horizon, rep_seed(o, stream, r), {}).final_n;
        });
    };
    const auto low = finals(0.1, 120);
    const auto high = finals(10.0, 121);
    const double tv = binned_tv(low, high, 64);
    const double k = carrying_capacity(o.base);
    const auto st = stationary_stats(o.base, 1.0, 50.0, 1e4, derive_seed(o.seed, 0, "criterion-12-time"));
    const bool tv_ok = tv < 0.05;
    const bool mean_ok = std::abs(st.time_mean - k) < 0.05 * k;
    res.pass = tv_ok && mean_ok;
    res.stats = {{"replicates_each", reps}, {"bins", 64}, {"tv", tv}, {"time_mean", st.time_mean},
                 {"carrying_capacity", k}, {"tv_ok", tv_ok}, {"time_mean_ok", mean_ok}};
    return res;
}

CriterionResult closedness(const VerifyOptions& o) {
    CriterionResult res{13, "truncation stability on the diagonal family", false, ordered_json::object()};
    // Births at half the death proportion so that N_T is not pinned at 1.
    const Characteristic c = diagonal_lambda(1.0, 0.5, 1.0, 0.5);
    // Coupled KS differences between levels are a few 1e-3; 1e5 replicates resolve them.
    const std::size_t reps = 100000;
    const auto rows = closedness_study(c, {0.1, 0.05, 0.025}, 5.0, 1.0, reps, derive_seed(o.seed, 0, "criterion-13"));
    ordered_json table = ordered_json::array();
    bool decreasing = true;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        table.push_back({{"eps", rows[i].eps}, {"ks_vs_half", rows[i].ks}, {"mean_n", rows[i].mean_n}});
        if (i > 0 && !(rows[i].ks < rows[i - 1].ks)) decreasing = false;
    }
    res.pass = decreasing && rows.back().ks < 0.05;
    res.stats = {{"replicates", reps}, {"T", 5.0}, {"infinite_activity", std::isinf(c.jump.total_rate())}, {"rows", table},
                 {"strictly_decreasing", decreasing}};
    return res;
}

CriterionResult wright_fisher(const VerifyOptions& o) {
    CriterionResult res{14, "heterozygosity decay at k = 1/20 and Muller figures", false, ordered_json::object()};
    const std::vector<double> ks{1.0, 1.0 / 3.0, 1.0 / 10.0, 1.0 / 20.0};
    const auto entries = wf_study(ks, 0, derive_seed(o.seed, 0, "criterion-14-figures"), o.artifact_dir);
    const Characteristic c = wright_fisher_scaling(1.0 / 20.0);
    const double lambda = pair_merger_rate(c);
    const auto curve = heterozygosity_curve(c, 0.5, 3.0 / lambda, 60, 2000, derive_seed(o.seed, 0, "criterion-14"));
    const auto fit = fit_exponential_decay(curve.t, curve.mean_h);
    const double rel = std::abs(fit.rate - lambda) / lambda;
    res.pass = rel < 0.15;
    ordered_json figures = ordered_json::array();
    for (const auto& e : entries) {
        figures.push_back({{"k", e.k}, {"lambda_hat", e.lambda_hat}, {"horizon", e.horizon}, {"svg", e.muller_svg}});
    }
    res.stats = {{"lambda_hat", lambda}, {"fitted_rate", fit.rate}, {"relative_error", rel},
                 {"fit_window", 3.0 / lambda}, {"replicates", 2000}, {"figures", figures}};
    return res;
}

CriterionResult prelimit(const VerifyOptions& o) {
    CriterionResult res{15, "individual-based model approaches the limit in m", false, ordered_json::object()};
    const std::size_t reps = 1000;
    const double horizon = 5.0;
    IbOptions options;
    options.track_types = false;
    const auto finals = farm(reps, [&](std::size_t r) {
        const auto seed = rep_seed(o, 15, r);
        std::array<double, 3> out{};
        out[0] = simulate_pop(o.base, 1.0, horizon, seed, {}).final_n;
        std::size_t i = 1;
        for (std::uint64_t m : {100u, 1000u}) {
            const auto path = simulate_ib(o.base, m, 1.0, std::vector<double>{}, horizon, seed, {}, options);
            out[i++] = static_cast<double>(path.final_count) / static_cast<double>(m);
        }
        return out;
    });
    std::vector<double> limit, m100, m1000;
    for (const auto& f : finals) {
        limit.push_back(f[0]);
        m100.push_back(f[1]);
        m1000.push_back(f[2]);
    }
    const double ks100 = ks_distance(m100, limit);
    const double ks1000 = ks_distance(m1000, limit);
    res.pass = ks1000 < ks100;
    res.stats = {{"replicates", reps}, {"ks_m100", ks100}, {"ks_m1000", ks1000}};
    return res;
}

}  // namespace

const std::vector<Criterion>& criteria() {
    static const std::vector<Criterion> all{
        {1, "balance and validation", 1.0, balance_validation},
        {2, "theta on the six-level event", std::numeric_limits<double>::infinity(), theta_figure},
        {3, "pathwise sandwich bounds", 10.0, sandwich},
        {4, "positivity", std::numeric_limits<double>::infinity(), positivity},
        {5, "generator consistency", 60.0, generator},
        {6, "frequency martingale", 60.0, martingale},
        {7, "exact coupled duality", 120.0, coupled_duality},
        {8, "annealed moment duality", 120.0, annealed_duality},
        {9, "fixation frequency", std::numeric_limits<double>::infinity(), fixation},
        {10, "quasi-fixation finiteness", std::numeric_limits<double>::infinity(), quasi_fixation},
        {11, "dust", std::numeric_limits<double>::infinity(), dust},
        {12, "ergodicity", std::numeric_limits<double>::infinity(), ergodicity},
        {13, "closedness under truncation", std::numeric_limits<double>::infinity(), closedness},
        {14, "heterozygosity decay and figures", std::numeric_limits<double>::infinity(), wright_fisher},
        {15, "prelimit convergence", std::numeric_limits<double>::infinity(), prelimit},
    };
    return all;
}

std::vector<CriterionResult> run_verify_suite(const VerifyOptions& options) {
    std::vector<CriterionResult> out;
    for (const auto& c : criteria()) out.push_back(c.run(options));
    return out;
}

std::string verify_report(const std::vector<CriterionResult>& results, const VerifyOptions& options) {
    ordered_json report;
    report["seed"] = options.seed;
    report["base_characteristic"] = characteristic_to_json(options.base);
    ordered_json list = ordered_json::array();
    bool all = true;
    for (const auto& r : results) {
        list.push_back({{"id", r.id}, {"title", r.title}, {"pass", r.pass}, {"stats", r.stats}});
        all = all && r.pass;
    }
    report["criteria"] = list;
    report["all_pass"] = all;
    return report.dump(2) + "\n";
}

}  // namespace gpfv
