#include "movement.hpp"

namespace berw {

MovementResult run_movement_list(const Environment& env, std::vector<Particle> particles,
                                 const MovementList& list, std::uint64_t step_budget) {
    MovementResult res;
    if (particles.empty() || list.empty()) {
        res.particles = std::move(particles);
        res.all_ceased = true;
        return res;
    }
    for (std::uint32_t id : list)
        if (id >= particles.size())
            throw ContractError("movement list references particle id " + std::to_string(id) +
                                " out of range");

    SiteCountMap consumed(64);
    std::size_t live_listed = 0;
    {
        // A particle can appear several times in the list; count each id once.
        std::vector<bool> listed(particles.size(), false);
        for (std::uint32_t id : list) listed[id] = true;
        for (std::size_t i = 0; i < particles.size(); ++i)
            if (listed[i] && !particles[i].ceased) ++live_listed;
    }

    std::size_t cursor = 0;
    while (live_listed > 0 && res.instructions_consumed < step_budget) {
        std::uint32_t id = list[cursor];
        cursor = (cursor + 1) % list.size();
        ++res.invitations;
        Particle& p = particles[id];
        if (p.ceased) continue;
        std::uint32_t& c = consumed.at(p.position);
        Instruction ins = env.instruction(p.position, c + 1);
        ++c;
        res.used.bump(p.position);
        ++res.instructions_consumed;
        p.position = step(p.position, ins.dir);
        if (ins.cease) {
            p.ceased = true;
            --live_listed;
        }
    }
    res.all_ceased = (live_listed == 0);
    res.particles = std::move(particles);
    return res;
}

AbelianOutcome abelian_equal(const Environment& env, const std::vector<Particle>& particles,
                             const MovementList& a, const MovementList& b,
                             std::uint64_t budget) {
    MovementResult ra = run_movement_list(env, particles, a, budget);
    MovementResult rb = run_movement_list(env, particles, b, budget);
    if (!ra.all_ceased || !rb.all_ceased) return AbelianOutcome::Indeterminate;
    return ra.used == rb.used ? AbelianOutcome::Equal : AbelianOutcome::Different;
}

std::vector<Particle> make_particles(const std::vector<Site>& starts) {
    std::vector<Particle> ps;
    ps.reserve(starts.size());
    for (std::size_t i = 0; i < starts.size(); ++i)
        ps.push_back({static_cast<std::uint32_t>(i), starts[i], starts[i], false});
    return ps;
}

} // namespace berw
