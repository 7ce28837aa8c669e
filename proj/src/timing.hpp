#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "errors.hpp"
#include "geometry.hpp"
#include "rng.hpp"
#include "walk.hpp"

namespace berw {

/// Source of a 1-D nearest-neighbour path by position index.
class PathSource {
public:
    virtual ~PathSource() = default;
    virtual std::int64_t position(std::uint64_t i) = 0;
};

/// Fixed, pre-recorded path; reading past the end is a contract error.
class FixedPathSource : public PathSource {
public:
    explicit FixedPathSource(Path1D path) : path_(std::move(path)) {}

    std::int64_t position(std::uint64_t i) override {
        if (i >= path_.positions.size())
            throw ContractError("fixed path exhausted at index " + std::to_string(i));
        return path_.positions[i];
    }

private:
    Path1D path_;
};

/// Seeded simple random walk, extended lazily so rules may inspect arbitrarily
/// deep prefixes without materializing an infinite path.
class LazySrwSource : public PathSource {
public:
    explicit LazySrwSource(std::uint64_t seed) : rng_(mix64(seed)) {}

    std::int64_t position(std::uint64_t i) override {
        while (positions_.size() <= i) {
            std::int64_t last = positions_.back();
            positions_.push_back(last + (rng_.next_bit() ? 1 : -1));
        }
        return positions_[i];
    }

    std::uint64_t materialized() const { return positions_.size() - 1; }

private:
    SplitMix rng_;
    std::vector<std::int64_t> positions_{0};
};

enum class StepKind : std::uint8_t { Horizontal = 0, Vertical = 1 };

/// What a rule may look at when deciding step t+1. Access to Y is guarded for
/// rules declared Y-adapted: indices beyond M_t raise a contract error naming
/// the offending time.
class WalkView {
public:
    std::uint64_t t() const { return t_; }
    Site z() const { return z_; }
    bool fresh_current() const { return fresh_; }
    std::uint64_t n() const { return n_; }
    std::uint64_t m() const { return m_; }

    std::int64_t x(std::uint64_t i) const {
        if (i > max_x_read_) max_x_read_ = i;
        return x_->position(i);
    }

    std::int64_t y(std::uint64_t i) const {
        if (guard_y_ && i > m_)
            throw ContractError("Y-adapted rule read Y index " + std::to_string(i) +
                                " beyond M_t=" + std::to_string(m_) + " at t=" +
                                std::to_string(t_));
        if (i > max_y_read_) max_y_read_ = i;
        return y_->position(i);
    }

    std::uint64_t max_x_read() const { return max_x_read_; }

private:
    friend struct BuildContext;
    PathSource* x_ = nullptr;
    PathSource* y_ = nullptr;
    std::uint64_t t_ = 0, n_ = 0, m_ = 0;
    Site z_{0, 0};
    bool fresh_ = true;
    bool guard_y_ = false;
    mutable std::uint64_t max_x_read_ = 0;
    mutable std::uint64_t max_y_read_ = 0;
};

/// Decision procedure for the interlacing of X and Y. Rules are reusable only
/// if stateless; the harness re-instantiates per run regardless.
class TimingRule {
public:
    virtual ~TimingRule() = default;
    virtual std::string name() const = 0;
    /// Whether the rule promises never to read unconsumed Y steps. Enforced
    /// mechanically by the guarded view, not assumed.
    virtual bool y_adapted() const { return true; }
    virtual StepKind next(const WalkView& view, SplitMix& aux) = 0;
};

/// berw: vertical iff the walk stands on a first-visited site. coin: an
/// independent fair coin (2-D SRW). block: alternate coordinates in blocks of
/// doubling length. always-h / always-v: degenerate single-coordinate walks.
std::unique_ptr<TimingRule> make_rule(const std::string& name);

struct SigmaStats {
    std::uint64_t count = 0; ///< completed increments
    double mean = 0.0;
    std::uint64_t max = 0;
    bool valid = false; ///< false when there was no horizontal step
};

struct BuildOptions {
    std::uint64_t aux_seed = 0;      ///< seed of the rule's private randomness
    bool record_path = false;        ///< keep Z_0..Z_T
    bool record_q = true;            ///< keep the timing sequence
    std::vector<std::uint64_t> extra_checkpoints;
};

struct BuildResult {
    std::vector<Site> path; ///< when recorded
    Site final_position;
    RangeSeries series;
    TimingSequence q; ///< empty horizon 0 if not recorded
    SigmaStats sigma;
    std::uint64_t max_x_index_read = 0;
};

/// Generates Z_t = (X_{N_t}, Y_{M_t}) for T steps under the given rule.
BuildResult build_walk(PathSource& x, PathSource& y, TimingRule& rule, std::uint64_t horizon,
                       const BuildOptions& options = {});

/// Increment statistics of the horizontal jump times of a timing sequence.
SigmaStats sigma_stats(const TimingSequence& q);

/// Image of the X-time interval [a, b] on the Z timeline: [U-, U+] with
/// U- the first time N_t = a and U+ the last time N_t = b.
struct PhiImage {
    std::uint64_t u_minus = 0;
    std::uint64_t u_plus = 0;

    std::uint64_t length() const { return u_plus - u_minus; }
};

PhiImage phi_map(const TimingSequence& q, std::uint64_t a, std::uint64_t b);

} // namespace berw
