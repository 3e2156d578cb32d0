#include "gpfv/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/normal.hpp>

namespace gpfv {

Summary summarize(std::span<const double> xs, double ci_level) {
    Summary s;
    s.n = xs.size();
    s.ci_level = ci_level;
    if (xs.empty()) return s;
    double sum = 0.0;
    for (double x : xs) sum += x;
    s.mean = sum / static_cast<double>(s.n);
    if (s.n > 1) {
        double ss = 0.0;
        for (double x : xs) ss += (x - s.mean) * (x - s.mean);
        s.sd = std::sqrt(ss / static_cast<double>(s.n - 1));
        s.se = s.sd / std::sqrt(static_cast<double>(s.n));
    }
    const boost::math::normal unit;
    const double z = boost::math::quantile(unit, 0.5 + 0.5 * ci_level);
    s.ci_lo = s.mean - z * s.se;
    s.ci_hi = s.mean + z * s.se;
    return s;
}

double pooled_se(const Summary& a, const Summary& b) { return std::hypot(a.se, b.se); }

double ks_distance(std::vector<double> a, std::vector<double> b) {
    if (a.empty() || b.empty()) throw std::invalid_argument("KS distance needs two non-empty samples");
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    const double na = static_cast<double>(a.size());
    const double nb = static_cast<double>(b.size());
    std::size_t i = 0, j = 0;
    double d = 0.0;
    while (i < a.size() && j < b.size()) {
        const double x = std::min(a[i], b[j]);
        while (i < a.size() && a[i] <= x) ++i;
        while (j < b.size() && b[j] <= x) ++j;
        d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
    }
    return d;
}

double binned_tv(std::span<const double> a, std::span<const double> b, std::size_t bins) {
    if (a.empty() || b.empty() || bins == 0) throw std::invalid_argument("binned TV needs data and bins");
    double lo = a[0], hi = a[0];
    for (auto xs : {a, b}) {
        for (double x : xs) {
            lo = std::min(lo, x);
            hi = std::max(hi, x);
        }
    }
    if (hi <= lo) return 0.0;
    const double width = (hi - lo) / static_cast<double>(bins);
    auto histogram = [&](std::span<const double> xs) {
        std::vector<double> h(bins, 0.0);
        for (double x : xs) {
            auto k = static_cast<std::size_t>((x - lo) / width);
            h[std::min(k, bins - 1)] += 1.0 / static_cast<double>(xs.size());
        }
        return h;
    };
    const auto ha = histogram(a);
    const auto hb = histogram(b);
    double tv = 0.0;
    for (std::size_t k = 0; k < bins; ++k) tv += std::abs(ha[k] - hb[k]);
    return 0.5 * tv;
}

double chi_square_statistic(std::span<const double> observed, std::span<const double> expected) {
    if (observed.size() != expected.size()) throw std::invalid_argument("observed and expected differ in length");
    double stat = 0.0;
    for (std::size_t k = 0; k < observed.size(); ++k) {
        if (expected[k] <= 0.0) throw std::invalid_argument("expected count must be positive");
        const double d = observed[k] - expected[k];
        stat += d * d / expected[k];
    }
    return stat;
}

double chi_square_pvalue(std::span<const double> observed, std::span<const double> expected, std::size_t fitted) {
    if (observed.size() < fitted + 2) throw std::invalid_argument("too few cells for a chi-square test");
    const double stat = chi_square_statistic(observed, expected);
    const boost::math::chi_squared dist(static_cast<double>(observed.size() - 1 - fitted));
    return boost::math::cdf(boost::math::complement(dist, stat));
}

ExponentialFit fit_exponential_decay(std::span<const double> t, std::span<const double> y) {
    if (t.size() != y.size()) throw std::invalid_argument("t and y differ in length");
    double st = 0, sy = 0, stt = 0, sty = 0;
    std::size_t n = 0;
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (!(y[i] > 0.0)) continue;
        const double ly = std::log(y[i]);
        st += t[i];
        sy += ly;
        stt += t[i] * t[i];
        sty += t[i] * ly;
        ++n;
    }
    if (n < 2) throw std::invalid_argument("exponential fit needs two positive points");
    const double dn = static_cast<double>(n);
    const double denom = dn * stt - st * st;
    if (denom == 0.0) throw std::invalid_argument("exponential fit needs distinct times");
    const double slope = (dn * sty - st * sy) / denom;
    ExponentialFit fit;
    fit.rate = -slope;
    fit.intercept = (sy - slope * st) / dn;
    fit.points = n;
    return fit;
}

}  // namespace gpfv
