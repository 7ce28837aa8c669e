#pragma once

#include <cstdint>
#include <vector>

#include "errors.hpp"
#include "geometry.hpp"
#include "rng.hpp"
#include "slow.hpp"

namespace berw {

enum class StripVersion : std::uint8_t { A = 0, B = 1 };

/// Finite truncation of the strip system: one particle per site of
/// Z x {0} with |x| <= half_width, rate-1 clocks on a finite box, horizon T.
struct StripConfig {
    std::uint64_t seed = 1;
    std::int64_t half_width = 5;   ///< W
    double horizon = 50.0;         ///< T
    std::int64_t box_margin_x = 16;
    std::int64_t box_margin_y = 16;
    StripVersion version = StripVersion::A;
    int level_stat_max = 3; ///< track departures from levels 1..this
};

struct StripParticleStats {
    std::int64_t start_x = 0;
    bool returned = false;  ///< hit level 0 again by T
    bool truncated = false; ///< left the box; excluded from statistics
    std::uint32_t vertical_moves = 0; ///< tau*
    std::vector<std::uint32_t> departures; ///< from levels 1..level_stat_max, by T
    /// Departures over the particle's full excursion. A particle's vertical
    /// signs are fresh fair bits whatever the other particles do, so an
    /// excursion cut off by the horizon is finished by drawing the remaining
    /// signs; for returned particles this equals `departures`.
    std::vector<std::uint32_t> completed_departures;
};

struct StripResult {
    std::vector<StripParticleStats> particles;
    std::uint64_t firings = 0;
    std::uint64_t instructions_consumed = 0;
    std::uint64_t event_hash = 0; ///< digest of the full event log
};

struct StripSummary {
    std::uint32_t total = 0;
    std::uint32_t returned = 0;
    std::uint32_t live_at_horizon = 0;
    std::uint32_t truncated = 0;
    double return_rate = 0.0;     ///< returned / (total - truncated)
    double truncation_rate = 0.0; ///< truncated / total
    double mean_vertical_moves = 0.0; ///< over returned particles
    /// Full-excursion departure counts, over all non-truncated particles.
    std::vector<McEstimate> departures_per_level;
    /// Horizon-truncated counts over returned particles only (biased low for
    /// short horizons; kept for the truncation-rate diagnostics).
    std::vector<McEstimate> realized_departures_per_level;
};

/// Event-driven exact simulation of the strip system. On the n-th firing at a
/// site, a uniform variable picks one of the live particles there (ordering
/// centred at the site's abscissa: x, x+1, x-1, x+2, ...); it consumes the
/// site's next unused instruction and steps. Particles stop on re-entry to
/// level 0. Version B replaces the sign of every index-1 (vertical)
/// instruction a particle consumes with the particle's private sign sequence;
/// the joint law is unchanged.
StripResult simulate_strip(const StripConfig& cfg);

StripSummary summarize_strip(const StripResult& result);

/// MC mean of the number of departures from level `level` (>= 1) per simple
/// random walk excursion from 0. Time above `level` is skipped exactly: the
/// walk returns to the level almost surely and contributes no departures
/// from it meanwhile.
McEstimate srw_excursion_departures(int level, std::uint64_t trials, std::uint64_t seed);

/// MC mean count of distinct-vertex chains (V_1..V_n), V_1 adjacent to the
/// origin, each consecutive pair adjacent, admitting firing times
/// t >= T_1 >= ... >= T_n of rate-1 clocks. box_half_width must be at least
/// n + 1 so no chain can be clipped.
McEstimate count_descending_chains(double t, int n, std::int64_t box_half_width,
                                   std::uint64_t trials, std::uint64_t seed);

} // namespace berw
