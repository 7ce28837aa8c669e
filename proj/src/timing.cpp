#include "timing.hpp"

#include <algorithm>

#include "site_table.hpp"

namespace berw {

namespace {

class AlwaysRule : public TimingRule {
public:
    AlwaysRule(StepKind kind, std::string name) : kind_(kind), name_(std::move(name)) {}
    std::string name() const override { return name_; }
    StepKind next(const WalkView&, SplitMix&) override { return kind_; }

private:
    StepKind kind_;
    std::string name_;
};

class CoinRule : public TimingRule {
public:
    std::string name() const override { return "coin"; }
    StepKind next(const WalkView&, SplitMix& aux) override {
        return aux.next_bit() ? StepKind::Vertical : StepKind::Horizontal;
    }
};

class BerwRule : public TimingRule {
public:
    std::string name() const override { return "berw"; }
    StepKind next(const WalkView& view, SplitMix&) override {
        return view.fresh_current() ? StepKind::Vertical : StepKind::Horizontal;
    }
};

// Coordinate blocks of doubling length: times [2^j - 1, 2^{j+1} - 1) use one
// coordinate, alternating with j.
class BlockRule : public TimingRule {
public:
    std::string name() const override { return "block"; }
    StepKind next(const WalkView& view, SplitMix&) override {
        std::uint64_t v = view.t() + 1;
        int j = 0;
        while (v > 1) {
            v >>= 1;
            ++j;
        }
        return (j % 2 == 0) ? StepKind::Horizontal : StepKind::Vertical;
    }
};

} // namespace

std::unique_ptr<TimingRule> make_rule(const std::string& name) {
    if (name == "berw") return std::make_unique<BerwRule>();
    if (name == "coin") return std::make_unique<CoinRule>();
    if (name == "block") return std::make_unique<BlockRule>();
    if (name == "always-h") return std::make_unique<AlwaysRule>(StepKind::Horizontal, "always-h");
    if (name == "always-v") return std::make_unique<AlwaysRule>(StepKind::Vertical, "always-v");
    throw ContractError("unknown timing rule '" + name + "'");
}

struct BuildContext {
    static void bind(WalkView& view, PathSource& x, PathSource& y, bool guard) {
        view.x_ = &x;
        view.y_ = &y;
        view.guard_y_ = guard;
    }
    static void update(WalkView& view, std::uint64_t t, Site z, bool fresh, std::uint64_t n,
                       std::uint64_t m) {
        view.t_ = t;
        view.z_ = z;
        view.fresh_ = fresh;
        view.n_ = n;
        view.m_ = m;
    }
};

BuildResult build_walk(PathSource& x, PathSource& y, TimingRule& rule, std::uint64_t horizon,
                       const BuildOptions& options) {
    BuildResult res;
    WalkView view;
    BuildContext::bind(view, x, y, rule.y_adapted());
    SplitMix aux(mix64(options.aux_seed ^ 0xau));

    SiteSet visited(1024);
    Site z{0, 0};
    visited.insert(z);
    bool fresh = true;
    std::uint64_t fresh_arrivals = 0;
    std::uint64_t n = 0, m = 0;
    std::int64_t x_min = 0, x_max = 0, y_min = 0, y_max = 0;

    std::vector<std::uint64_t> cps;
    {
        cps.push_back(0);
        for (std::uint64_t t = 1; t <= horizon && t != 0; t <<= 1) cps.push_back(t);
        for (std::uint64_t t : options.extra_checkpoints)
            if (t <= horizon) cps.push_back(t);
        cps.push_back(horizon);
        std::sort(cps.begin(), cps.end());
        cps.erase(std::unique(cps.begin(), cps.end()), cps.end());
    }
    std::size_t cp_idx = 0;
    auto emit = [&](std::uint64_t t) {
        while (cp_idx < cps.size() && cps[cp_idx] == t) {
            CheckpointRow row;
            row.t = t;
            row.range = visited.size();
            row.vertical_steps = fresh_arrivals;
            row.x_min = x_min;
            row.x_max = x_max;
            row.y_min = y_min;
            row.y_max = y_max;
            row.n_horizontal = n;
            row.m_vertical = m;
            res.series.checkpoints.push_back(row);
            ++cp_idx;
        }
    };

    std::vector<std::uint64_t> jumps;
    std::uint64_t prev_jump = 0;
    std::uint64_t sigma_sum = 0, sigma_max = 0, sigma_count = 0;

    if (options.record_path) {
        res.path.reserve(horizon + 1);
        res.path.push_back(z);
    }
    emit(0);

    for (std::uint64_t t = 0; t < horizon; ++t) {
        BuildContext::update(view, t, z, fresh, n, m);
        StepKind kind = rule.next(view, aux);
        if (kind == StepKind::Horizontal) {
            ++n;
            z.x = x.position(n);
            std::uint64_t inc = (t + 1) - prev_jump;
            prev_jump = t + 1;
            sigma_sum += inc;
            sigma_max = std::max(sigma_max, inc);
            ++sigma_count;
            if (options.record_q) jumps.push_back(t + 1);
        } else {
            ++m;
            z.y = y.position(m);
        }
        fresh = visited.insert(z);
        if (fresh) ++fresh_arrivals;
        x_min = std::min(x_min, z.x);
        x_max = std::max(x_max, z.x);
        y_min = std::min(y_min, z.y);
        y_max = std::max(y_max, z.y);
        if (options.record_path) res.path.push_back(z);
        emit(t + 1);
    }

    res.final_position = z;
    if (options.record_q) res.q = TimingSequence(horizon, std::move(jumps));
    res.sigma.count = sigma_count;
    res.sigma.valid = sigma_count > 0;
    res.sigma.mean = sigma_count > 0 ? static_cast<double>(sigma_sum) / sigma_count : 0.0;
    res.sigma.max = sigma_max;
    res.max_x_index_read = std::max(view.max_x_read(), n);
    return res;
}

SigmaStats sigma_stats(const TimingSequence& q) {
    SigmaStats s;
    const auto& jumps = q.horizontal_times();
    if (jumps.empty()) return s;
    std::uint64_t prev = 0, sum = 0;
    for (std::uint64_t j : jumps) {
        std::uint64_t inc = j - prev;
        sum += inc;
        s.max = std::max(s.max, inc);
        prev = j;
    }
    s.count = jumps.size();
    s.mean = static_cast<double>(sum) / static_cast<double>(s.count);
    s.valid = true;
    return s;
}

PhiImage phi_map(const TimingSequence& q, std::uint64_t a, std::uint64_t b) {
    if (a > b) throw ContractError("phi_map needs a <= b");
    if (b > q.horizontal_count())
        throw ContractError("phi_map interval end " + std::to_string(b) +
                            " beyond N_T=" + std::to_string(q.horizontal_count()));
    PhiImage img;
    img.u_minus = (a == 0) ? 0 : q.sigma(a);
    img.u_plus = (b < q.horizontal_count()) ? q.sigma(b + 1) - 1 : q.horizon();
    return img;
}

} // namespace berw
