#include "excursions.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

namespace berw {

namespace {

constexpr std::uint64_t kSaltClock = 0xC10CULL;
constexpr std::uint64_t kSaltPick = 0x91CCULL;
constexpr std::uint64_t kSaltStack = 0x57ACULL;
constexpr std::uint64_t kSaltSigns = 0x5167ULL;

std::uint32_t sample_poisson(SplitMix& rng, double rate) {
    // Knuth inversion; fine for the rates we use (tens). The product
    // underflows for very large rates, so reject those outright.
    if (rate > 500.0)
        throw ContractError("event rate too large for the clock generator");
    double limit = std::exp(-rate);
    double prod = 1.0;
    std::uint32_t n = 0;
    while (true) {
        prod *= rng.next_open_closed();
        if (prod <= limit) return n;
        ++n;
    }
}

struct Firing {
    double time;
    Site site;
};

/// Ordering centred at u: u, u+1, u-1, u+2, u-2, ...
std::uint64_t centred_rank(std::int64_t u, std::int64_t p) {
    std::int64_t d = p - u;
    if (d == 0) return 0;
    if (d > 0) return 2 * static_cast<std::uint64_t>(d) - 1;
    return 2 * static_cast<std::uint64_t>(-d);
}

} // namespace

StripResult simulate_strip(const StripConfig& cfg) {
    if (cfg.half_width < 0) throw ContractError("half_width must be >= 0");
    if (cfg.horizon <= 0.0) throw ContractError("horizon must be positive");

    const std::int64_t x_lo = -cfg.half_width - cfg.box_margin_x;
    const std::int64_t x_hi = cfg.half_width + cfg.box_margin_x;
    const std::int64_t y_lo = -cfg.box_margin_y;
    const std::int64_t y_hi = cfg.box_margin_y;

    // All firings within the box and horizon, globally time-ordered.
    std::vector<Firing> firings;
    for (std::int64_t x = x_lo; x <= x_hi; ++x) {
        for (std::int64_t y = y_lo; y <= y_hi; ++y) {
            Site s{x, y};
            SplitMix clock(prf64(cfg.seed, pack_site(s), 0, kSaltClock));
            std::uint32_t count = sample_poisson(clock, cfg.horizon);
            for (std::uint32_t i = 0; i < count; ++i)
                firings.push_back({clock.next_open_closed() * cfg.horizon, s});
        }
    }
    std::sort(firings.begin(), firings.end(),
              [](const Firing& a, const Firing& b) { return a.time < b.time; });

    StripResult res;
    res.firings = firings.size();

    const std::size_t n_particles = static_cast<std::size_t>(2 * cfg.half_width + 1);
    res.particles.resize(n_particles);
    std::vector<Site> position(n_particles);
    std::vector<std::uint32_t> sign_used(n_particles, 0);
    std::unordered_map<std::uint64_t, std::vector<std::uint32_t>> occupancy;
    for (std::size_t i = 0; i < n_particles; ++i) {
        std::int64_t x = static_cast<std::int64_t>(i) - cfg.half_width;
        res.particles[i].start_x = x;
        res.particles[i].departures.assign(static_cast<std::size_t>(cfg.level_stat_max), 0);
        position[i] = {x, 0};
        occupancy[pack_site(position[i])].push_back(static_cast<std::uint32_t>(i));
    }
    std::size_t n_active = n_particles;

    std::unordered_map<std::uint64_t, std::uint32_t> fired;    // clock rings per site
    std::unordered_map<std::uint64_t, std::uint32_t> consumed; // stack pointer per site
    std::uint64_t hash = mix64(cfg.seed ^ 0xE7E7ULL);

    for (const Firing& f : firings) {
        if (n_active == 0) break;
        std::uint64_t key = pack_site(f.site);
        std::uint32_t ring = ++fired[key];
        auto occ_it = occupancy.find(key);
        if (occ_it == occupancy.end() || occ_it->second.empty()) continue;

        std::vector<std::uint32_t>& here = occ_it->second;
        std::sort(here.begin(), here.end(), [&](std::uint32_t a, std::uint32_t b) {
            return centred_rank(f.site.x, res.particles[a].start_x) <
                   centred_rank(f.site.x, res.particles[b].start_x);
        });
        double u = (static_cast<double>(prf64(cfg.seed, key, ring, kSaltPick) >> 11) + 1.0) *
                   0x1p-53;
        std::size_t m = here.size();
        std::size_t pick = std::min(m - 1, static_cast<std::size_t>(std::ceil(u * m) - 1));
        std::uint32_t id = here[pick];

        std::uint32_t k = ++consumed[key];
        ++res.instructions_consumed;
        bool plus = prf64(cfg.seed, key, k, kSaltStack) & 1;
        Dir dir;
        if (k == 1) {
            if (cfg.version == StripVersion::B) {
                std::uint32_t w = ++sign_used[id];
                plus = prf64(cfg.seed, zigzag32(res.particles[id].start_x), w, kSaltSigns) & 1;
            }
            dir = plus ? Dir::PlusY : Dir::MinusY;
        } else {
            dir = plus ? Dir::PlusX : Dir::MinusX;
        }

        StripParticleStats& st = res.particles[id];
        Site from = position[id];
        Site to = step(from, dir);
        if (is_vertical(dir)) {
            ++st.vertical_moves;
            if (from.y >= 1 && from.y <= cfg.level_stat_max)
                ++st.departures[static_cast<std::size_t>(from.y - 1)];
        }
        hash = mix_combine(hash, key);
        hash = mix_combine(hash, (static_cast<std::uint64_t>(k) << 8) |
                                     (static_cast<std::uint64_t>(id) << 3) |
                                     static_cast<std::uint64_t>(dir));

        here.erase(here.begin() + static_cast<std::ptrdiff_t>(pick));
        position[id] = to;
        bool out_of_box = to.x < x_lo || to.x > x_hi || to.y < y_lo || to.y > y_hi;
        if (out_of_box) {
            st.truncated = true;
            --n_active;
        } else if (to.y == 0) {
            st.returned = true; // stops on re-entry to level 0
            --n_active;
        } else {
            occupancy[pack_site(to)].push_back(id);
        }
    }

    // Finish cut-off excursions on the vertical-sign stream alone. Time spent
    // above the tracked band returns to it almost surely and produces no
    // tracked departures, so it is skipped.
    const std::int64_t band = cfg.level_stat_max;
    for (std::size_t id = 0; id < n_particles; ++id) {
        StripParticleStats& st = res.particles[id];
        st.completed_departures = st.departures;
        if (st.truncated || st.returned) continue;
        SplitMix cont(prf64(cfg.seed, id, 0, 0xC017ULL));
        std::int64_t pos = position[id].y;
        if (pos == 0 && st.vertical_moves == 0) {
            // Never moved: the whole excursion is still ahead. The first sign
            // is the departure from level 0, which is not tracked.
            pos = cont.next_bit() ? 1 : -1;
        }
        while (pos > 0) {
            if (pos > band) {
                pos = band;
                continue;
            }
            ++st.completed_departures[static_cast<std::size_t>(pos - 1)];
            pos += cont.next_bit() ? 1 : -1;
        }
        // Negative side: no departures from positive levels before the return.
    }

    res.event_hash = hash;
    return res;
}

namespace {

std::vector<McEstimate> level_means(const std::vector<std::vector<double>>& samples) {
    std::vector<McEstimate> out(samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const auto& xs = samples[i];
        McEstimate e;
        e.n = xs.size();
        if (!xs.empty()) {
            double sum = 0.0, sq = 0.0;
            for (double x : xs) {
                sum += x;
                sq += x * x;
            }
            e.mean = sum / static_cast<double>(xs.size());
            double var = xs.size() > 1 ? (sq - static_cast<double>(xs.size()) * e.mean * e.mean) /
                                             (static_cast<double>(xs.size()) - 1)
                                       : 0.0;
            e.se = std::sqrt(std::max(var, 0.0) / static_cast<double>(xs.size()));
        }
        out[i] = e;
    }
    return out;
}

} // namespace

StripSummary summarize_strip(const StripResult& result) {
    StripSummary s;
    s.total = static_cast<std::uint32_t>(result.particles.size());
    std::size_t levels = result.particles.empty() ? 0 : result.particles[0].departures.size();
    std::vector<std::vector<double>> completed(levels), realized(levels);
    double tau_sum = 0.0;
    for (const auto& p : result.particles) {
        if (p.truncated) {
            ++s.truncated;
            continue;
        }
        for (std::size_t i = 0; i < levels; ++i)
            completed[i].push_back(p.completed_departures[i]);
        if (!p.returned) {
            ++s.live_at_horizon;
            continue;
        }
        ++s.returned;
        tau_sum += p.vertical_moves;
        for (std::size_t i = 0; i < levels; ++i) realized[i].push_back(p.departures[i]);
    }
    std::uint32_t considered = s.total - s.truncated;
    s.return_rate = considered > 0 ? static_cast<double>(s.returned) / considered : 0.0;
    s.truncation_rate = s.total > 0 ? static_cast<double>(s.truncated) / s.total : 0.0;
    s.mean_vertical_moves = s.returned > 0 ? tau_sum / s.returned : 0.0;
    s.departures_per_level = level_means(completed);
    s.realized_departures_per_level = level_means(realized);
    return s;
}

McEstimate srw_excursion_departures(int level, std::uint64_t trials, std::uint64_t seed) {
    if (level < 1) throw ContractError("level must be >= 1");
    SplitMix rng(mix64(seed ^ 0xE8C2ULL));
    double sum = 0.0, sum_sq = 0.0;
    const std::int64_t i = level;
    for (std::uint64_t trial = 0; trial < trials; ++trial) {
        std::uint64_t departures = 0;
        if (rng.next_bit()) {
            // Positive excursion; walk the corridor [0, i]. Departures at i go
            // up half the time (the walk then a.s. comes back to i without
            // reaching 0, so skip straight to the next visit) and down half
            // the time (simulate until 0 or i).
            std::int64_t pos = 1;
            while (pos != 0) {
                if (pos == i) {
                    ++departures;
                    pos = rng.next_bit() ? i : i - 1;
                    continue;
                }
                pos += rng.next_bit() ? 1 : -1;
            }
        }
        sum += static_cast<double>(departures);
        sum_sq += static_cast<double>(departures) * static_cast<double>(departures);
    }
    McEstimate e;
    e.n = trials;
    e.mean = sum / static_cast<double>(trials);
    double var = trials > 1 ? (sum_sq - trials * e.mean * e.mean) / (trials - 1) : 0.0;
    e.se = std::sqrt(std::max(var, 0.0) / static_cast<double>(trials));
    return e;
}

namespace {

struct ChainField {
    std::int64_t half = 0;
    std::vector<std::vector<double>> times; // ascending firing times per site

    std::size_t index(std::int64_t x, std::int64_t y) const {
        std::size_t side = static_cast<std::size_t>(2 * half + 1);
        return static_cast<std::size_t>(x + half) * side + static_cast<std::size_t>(y + half);
    }

    /// Largest firing time <= bound, or -1 if none.
    double latest_before(std::int64_t x, std::int64_t y, double bound) const {
        const auto& v = times[index(x, y)];
        auto it = std::upper_bound(v.begin(), v.end(), bound);
        if (it == v.begin()) return -1.0;
        return *(it - 1);
    }
};

void count_chains(const ChainField& field, std::int64_t x, std::int64_t y, double bound,
                  int depth, int target, std::vector<std::pair<std::int64_t, std::int64_t>>& used,
                  std::uint64_t& count) {
    double t = field.latest_before(x, y, bound);
    if (t < 0.0) return;
    if (depth == target) {
        ++count;
        return;
    }
    static constexpr std::int64_t dx[4] = {1, -1, 0, 0};
    static constexpr std::int64_t dy[4] = {0, 0, 1, -1};
    used.emplace_back(x, y);
    for (int d = 0; d < 4; ++d) {
        std::int64_t nx = x + dx[d], ny = y + dy[d];
        bool seen = false;
        for (const auto& u : used)
            if (u.first == nx && u.second == ny) {
                seen = true;
                break;
            }
        if (!seen) count_chains(field, nx, ny, t, depth + 1, target, used, count);
    }
    used.pop_back();
}

} // namespace

McEstimate count_descending_chains(double t, int n, std::int64_t box_half_width,
                                   std::uint64_t trials, std::uint64_t seed) {
    if (t < 0.0) throw ContractError("time bound must be >= 0");
    if (n < 1) throw ContractError("chain length must be >= 1");
    if (box_half_width < n + 1)
        throw ContractError("box too small: need half width >= n + 1");

    double sum = 0.0, sum_sq = 0.0;
    for (std::uint64_t trial = 0; trial < trials; ++trial) {
        ChainField field;
        field.half = box_half_width;
        std::size_t side = static_cast<std::size_t>(2 * box_half_width + 1);
        field.times.resize(side * side);
        for (std::int64_t x = -box_half_width; x <= box_half_width; ++x) {
            for (std::int64_t y = -box_half_width; y <= box_half_width; ++y) {
                SplitMix clock(prf64(derive_seed(seed, trial), pack_site({x, y}), 0, kSaltClock));
                std::uint32_t c = t > 0.0 ? sample_poisson(clock, t) : 0;
                auto& v = field.times[field.index(x, y)];
                v.resize(c);
                for (std::uint32_t i = 0; i < c; ++i) v[i] = clock.next_open_closed() * t;
                std::sort(v.begin(), v.end());
            }
        }
        std::uint64_t count = 0;
        std::vector<std::pair<std::int64_t, std::int64_t>> used;
        static constexpr std::int64_t dx[4] = {1, -1, 0, 0};
        static constexpr std::int64_t dy[4] = {0, 0, 1, -1};
        for (int d = 0; d < 4; ++d) count_chains(field, dx[d], dy[d], t, 1, n, used, count);
        sum += static_cast<double>(count);
        sum_sq += static_cast<double>(count) * static_cast<double>(count);
    }
    McEstimate e;
    e.n = trials;
    e.mean = sum / static_cast<double>(trials);
    double var = trials > 1 ? (sum_sq - trials * e.mean * e.mean) / (trials - 1) : 0.0;
    e.se = std::sqrt(std::max(var, 0.0) / static_cast<double>(trials));
    return e;
}

} // namespace berw
