#include "slow.hpp"

#include <algorithm>
#include <cmath>

namespace berw {

std::vector<std::int32_t> srw_positions(std::uint64_t seed, std::uint64_t length) {
    std::vector<std::int32_t> pos(length + 1);
    SplitMix rng(mix64(seed ^ 0x51D3ULL));
    std::int32_t p = 0;
    pos[0] = 0;
    for (std::uint64_t i = 1; i <= length; ++i) {
        p += rng.next_bit() ? 1 : -1;
        pos[i] = p;
    }
    return pos;
}

PathExtrema::PathExtrema(std::vector<std::int32_t> positions) : positions_(std::move(positions)) {
    if (positions_.empty()) throw ContractError("path needs at least one point");
    std::size_t n = positions_.size();
    log2_.assign(n + 1, 0);
    for (std::size_t i = 2; i <= n; ++i) log2_[i] = log2_[i / 2] + 1;
    int levels = log2_[n] + 1;
    min_table_.assign(levels, {});
    max_table_.assign(levels, {});
    min_table_[0] = positions_;
    max_table_[0] = positions_;
    for (int j = 1; j < levels; ++j) {
        std::size_t span = std::size_t(1) << j;
        std::size_t rows = n - span + 1;
        min_table_[j].resize(rows);
        max_table_[j].resize(rows);
        for (std::size_t i = 0; i < rows; ++i) {
            min_table_[j][i] =
                std::min(min_table_[j - 1][i], min_table_[j - 1][i + span / 2]);
            max_table_[j][i] =
                std::max(max_table_[j - 1][i], max_table_[j - 1][i + span / 2]);
        }
    }
}

void PathExtrema::check(std::uint64_t s, std::uint64_t e) const {
    if (s > e || e >= positions_.size())
        throw ContractError("interval [" + std::to_string(s) + "," + std::to_string(e) +
                            "] outside path");
}

std::int32_t PathExtrema::min_on(std::uint64_t s, std::uint64_t e) const {
    check(s, e);
    std::uint64_t count = e - s + 1;
    int j = log2_[count];
    std::uint64_t span = std::uint64_t(1) << j;
    return std::min(min_table_[j][s], min_table_[j][e + 1 - span]);
}

std::int32_t PathExtrema::max_on(std::uint64_t s, std::uint64_t e) const {
    check(s, e);
    std::uint64_t count = e - s + 1;
    int j = log2_[count];
    std::uint64_t span = std::uint64_t(1) << j;
    return std::max(max_table_[j][s], max_table_[j][e + 1 - span]);
}

bool is_slow(const PathExtrema& path, std::uint64_t s, std::uint64_t len, double eps) {
    if (eps <= 0.0) throw ContractError("eps must be positive");
    if (len == 0) return true;
    std::uint64_t spread = path.range_card(s, s + len) - 1;
    return static_cast<double>(spread) <= eps * std::sqrt(static_cast<double>(len));
}

namespace {

void collect_maximal(const PathExtrema& path, double eps, std::uint32_t scale,
                     std::uint64_t offset, std::vector<DyadicInterval>& out) {
    DyadicInterval d{scale, offset};
    if (is_slow(path, d.lo(), d.len(), eps)) {
        out.push_back(d);
        return;
    }
    if (scale == 0) return;
    collect_maximal(path, eps, scale - 1, 2 * offset, out);
    collect_maximal(path, eps, scale - 1, 2 * offset + 1, out);
}

} // namespace

SlowCover maximal_slow_dyadic_cover(const PathExtrema& path, double eps, std::uint32_t k) {
    std::uint64_t horizon = std::uint64_t(1) << k;
    if (path.length() < horizon)
        throw ContractError("path shorter than 2^k");
    SlowCover cover;
    cover.k = k;
    cover.eps = eps;
    collect_maximal(path, eps, k, 0, cover.members);
    for (const auto& d : cover.members) cover.covered_steps += d.len();
    cover.covered_fraction =
        static_cast<double>(cover.covered_steps) / static_cast<double>(horizon);
    return cover;
}

namespace {

/// Checks the O(k) dyadic intervals of [0, 2^k] containing s for slowness,
/// scanning each directly; no tables needed.
bool point_is_covered(const std::vector<std::int32_t>& pos, std::uint32_t k, std::uint64_t s,
                      double eps) {
    for (std::uint32_t i = 0; i <= k; ++i) {
        std::uint64_t len = std::uint64_t(1) << i;
        std::uint64_t max_offset = (std::uint64_t(1) << k) / len - 1;
        std::uint64_t j = s >> i;
        for (int side = 0; side < 2; ++side) {
            std::uint64_t off;
            if (side == 0) {
                if (j > max_offset) continue;
                off = j;
            } else {
                if ((s & (len - 1)) != 0 || s == 0 || j == 0) continue;
                off = j - 1;
            }
            std::uint64_t lo = off << i;
            std::int32_t mn = pos[lo], mx = pos[lo];
            for (std::uint64_t u = lo + 1; u <= lo + len; ++u) {
                mn = std::min(mn, pos[u]);
                mx = std::max(mx, pos[u]);
            }
            if (static_cast<double>(mx - mn) <= eps * std::sqrt(static_cast<double>(len)))
                return true;
        }
    }
    return false;
}

McEstimate bernoulli_estimate(std::uint64_t hits, std::uint64_t n) {
    McEstimate e;
    e.n = n;
    if (n == 0) return e;
    double p = static_cast<double>(hits) / static_cast<double>(n);
    e.mean = p;
    e.se = std::sqrt(p * (1.0 - p) / static_cast<double>(n));
    return e;
}

} // namespace

McEstimate uncovered_probability(std::uint64_t master_seed, std::uint32_t n_seeds, double eps,
                                 std::uint32_t k, std::uint64_t s) {
    std::uint64_t horizon = std::uint64_t(1) << k;
    if (s > horizon) throw ContractError("s beyond 2^k");
    std::uint64_t uncovered = 0;
    for (std::uint32_t i = 0; i < n_seeds; ++i) {
        auto pos = srw_positions(derive_seed(master_seed, i), horizon);
        if (!point_is_covered(pos, k, s, eps)) ++uncovered;
    }
    return bernoulli_estimate(uncovered, n_seeds);
}

namespace {

double log_cosh(double theta) {
    double t = std::fabs(theta);
    return t + std::log1p(std::exp(-2.0 * t)) - std::log(2.0);
}

} // namespace

double g_of_theta(double a, double theta) { return theta * a - log_cosh(theta); }

ThetaRoot solve_theta(double a) {
    if (!(a > 0.0 && a < 1.0)) throw ContractError("theta root requires a in (0,1)");
    double lo = 2.0 * a;
    double hi = std::log(2.0) / (1.0 - a);
    // g is concave with g(0) = 0, g'(0) = a > 0; positive on (0, theta_a) and
    // negative beyond, and theta_a < log2/(1-a) strictly.
    for (int it = 0; it < 200 && hi - lo > 1e-15 * (1.0 + hi); ++it) {
        double mid = 0.5 * (lo + hi);
        if (g_of_theta(a, mid) > 0.0)
            lo = mid;
        else
            hi = mid;
    }
    double theta = 0.5 * (lo + hi);
    // Newton polish; g'(theta) = a - tanh(theta), bounded away from 0 at the root.
    for (int it = 0; it < 8; ++it) {
        double g = g_of_theta(a, theta);
        double gp = a - std::tanh(theta);
        if (gp == 0.0) break;
        double next = theta - g / gp;
        if (!(next > 0.0)) break;
        theta = next;
        if (std::fabs(g_of_theta(a, theta)) < 1e-13) break;
    }
    ThetaRoot root{a, theta, std::fabs(g_of_theta(a, theta))};
    double ub = 2.0 * a * (1.0 + 1.0 / ((1.0 - a) * (1.0 - a)));
    if (root.residual >= 1e-12)
        throw ContractError("theta solver residual too large at a=" + std::to_string(a));
    if (!(2.0 * a <= root.theta * (1.0 + 1e-12) && root.theta <= ub * (1.0 + 1e-12)))
        throw ContractError("theta root outside proven bounds at a=" + std::to_string(a));
    return root;
}

RangeSupEstimate range_sup_functional(std::uint64_t master_seed, std::uint32_t n_seeds,
                                      double l, double gamma, std::uint64_t k_max) {
    if (gamma <= 0.0) throw ContractError("gamma must be positive");
    if (n_seeds == 0) throw ContractError("need at least one seed");
    RangeSupEstimate out;
    double sqrt_l = std::sqrt(l);
    double sum = 0.0, sum_sq = 0.0;
    std::uint64_t early = 0;
    for (std::uint32_t i = 0; i < n_seeds; ++i) {
        SplitMix rng(mix64(derive_seed(master_seed, i) ^ 0x5157ULL));
        std::int64_t p = 0, mn = 0, mx = 0;
        double best = sqrt_l - gamma * l; // k = 0 term, R_0 = 1
        std::uint64_t best_k = 0;
        for (std::uint64_t k = 1; k <= k_max; ++k) {
            p += rng.next_bit() ? 1 : -1;
            mn = std::min(mn, p);
            mx = std::max(mx, p);
            double v = static_cast<double>(mx - mn + 1) * sqrt_l -
                       gamma * (static_cast<double>(k) + l);
            if (v > best) {
                best = v;
                best_k = k;
            }
        }
        if (best_k < k_max / 2) ++early;
        sum += best;
        sum_sq += best * best;
    }
    double mean = sum / n_seeds;
    double var = n_seeds > 1 ? (sum_sq - n_seeds * mean * mean) / (n_seeds - 1) : 0.0;
    out.value = {mean, std::sqrt(std::max(var, 0.0) / n_seeds), n_seeds};
    out.argmax_early_fraction = static_cast<double>(early) / n_seeds;
    out.stabilized = out.argmax_early_fraction >= 0.99;
    return out;
}

McEstimate hitting_time_tail(double m, double k, std::uint64_t trials, std::uint64_t seed) {
    if (!(m >= 2.0)) throw ContractError("hitting_time_tail requires m >= 2");
    if (!(k >= 1.0)) throw ContractError("hitting_time_tail requires k >= 1");
    std::int64_t target = static_cast<std::int64_t>(std::floor(m));
    std::uint64_t horizon = static_cast<std::uint64_t>(std::floor(k * m * m));
    std::uint64_t survived = 0;
    SplitMix rng(mix64(seed ^ 0x7A11ULL));
    for (std::uint64_t trial = 0; trial < trials; ++trial) {
        std::int64_t p = 0;
        std::uint64_t t = 0;
        for (; t < horizon; ++t) {
            p += rng.next_bit() ? 1 : -1;
            if (p >= target || p <= -target) break;
        }
        if (t == horizon) ++survived;
    }
    return bernoulli_estimate(survived, trials);
}

} // namespace berw
