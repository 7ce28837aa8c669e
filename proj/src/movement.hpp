#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "environment.hpp"
#include "errors.hpp"
#include "geometry.hpp"
#include "site_table.hpp"

namespace berw {

struct Particle {
    std::uint32_t id = 0;
    Site start;
    Site position;
    bool ceased = false;
};

/// Invitation order. A finite list; the engine cycles it, so every listed
/// particle is conceptually invited infinitely often.
using MovementList = std::vector<std::uint32_t>;

/// Multiset of consumed stack addresses, stored as per-site counts. Because
/// consumption at a site is always the prefix {1..c}, the count determines the
/// exact address set.
class UsedSet {
public:
    void bump(Site s) { ++counts_.at(s); }

    std::uint32_t count_at(Site s) const { return counts_.get(s); }
    std::size_t sites() const { return counts_.size(); }

    std::uint64_t total() const {
        std::uint64_t t = 0;
        counts_.for_each([&](Site, std::uint32_t c) { t += c; });
        return t;
    }

    bool operator==(const UsedSet& other) const {
        if (sites() != other.sites()) return false;
        bool eq = true;
        counts_.for_each([&](Site s, std::uint32_t c) {
            if (other.counts_.get(s) != c) eq = false;
        });
        return eq;
    }

    /// Addresswise containment: every (site, k) used here is used by other.
    bool subset_of(const UsedSet& other) const {
        bool ok = true;
        counts_.for_each([&](Site s, std::uint32_t c) {
            if (other.counts_.get(s) < c) ok = false;
        });
        return ok;
    }

private:
    SiteCountMap counts_;
};

struct MovementResult {
    UsedSet used;
    std::vector<Particle> particles;
    std::uint64_t instructions_consumed = 0;
    std::uint64_t invitations = 0;
    bool all_ceased = false; // every listed particle ceased before the budget ran out
};

/// Replays the particle/stack semantics: the invited particle, unless ceased,
/// consumes the first unused instruction at its current site, takes the step,
/// and ceases if the instruction says so. Invitations to ceased particles
/// consume nothing. Stops when every listed particle has ceased or when
/// step_budget instructions have been consumed.
MovementResult run_movement_list(const Environment& env, std::vector<Particle> particles,
                                 const MovementList& list, std::uint64_t step_budget);

enum class AbelianOutcome { Equal, Different, Indeterminate };

/// Compares the used sets produced by two movement lists over the same
/// particles and environment. Indeterminate if either run exhausted its
/// budget with live particles.
AbelianOutcome abelian_equal(const Environment& env, const std::vector<Particle>& particles,
                             const MovementList& a, const MovementList& b,
                             std::uint64_t budget);

/// Convenience: particles at the given sites, ids 0..n-1.
std::vector<Particle> make_particles(const std::vector<Site>& starts);

} // namespace berw
