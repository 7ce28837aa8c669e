#pragma once

#include <cstdint>
#include <istream>
#include <memory>
#include <string>
#include <unordered_map>

#include "errors.hpp"
#include "geometry.hpp"
#include "rng.hpp"

namespace berw {

/// One stack entry: a unit step, optionally followed by a stop order.
struct Instruction {
    Dir dir = Dir::PlusY;
    bool cease = false;

    friend bool operator==(const Instruction&, const Instruction&) = default;
};

/// Per-site instruction stacks, addressed as (site, k) with k >= 1.
/// Index 1 is vertical, indices >= 2 are horizontal. Implementations must be
/// pure: the same address always yields the same instruction.
class Environment {
public:
    virtual ~Environment() = default;

    Instruction instruction(Site s, std::uint32_t k) const {
        if (k == 0) throw ContractError("instruction index k must be >= 1");
        return instruction_impl(s, k);
    }

protected:
    virtual Instruction instruction_impl(Site s, std::uint32_t k) const = 0;
};

/// The balanced environment: fair vertical sign at k = 1, fair horizontal sign
/// at k >= 2, all signs independent across addresses. Backed by a stateless
/// keyed bit mixer so no stack is ever materialized and identical addresses
/// agree across runs, reorderings and processes.
class RandomEnvironment : public Environment {
public:
    explicit RandomEnvironment(std::uint64_t seed) : seed_(seed) {}

    std::uint64_t seed() const { return seed_; }

protected:
    Instruction instruction_impl(Site s, std::uint32_t k) const override {
        bool plus = prf64(seed_, pack_site(s), k, 0x1145ULL) & 1;
        if (k == 1) return {plus ? Dir::PlusY : Dir::MinusY, false};
        return {plus ? Dir::PlusX : Dir::MinusX, false};
    }

private:
    std::uint64_t seed_;
};

/// Degenerate deterministic environment: one fixed vertical direction at k = 1
/// and one fixed horizontal direction at k >= 2. Handy as a hand-checkable
/// oracle (e.g. vertical = up, horizontal = right forces a straight-up walk).
class ConstantEnvironment : public Environment {
public:
    ConstantEnvironment(Dir vertical, Dir horizontal)
        : vertical_(vertical), horizontal_(horizontal) {
        if (!is_vertical(vertical) || !is_horizontal(horizontal))
            throw ContractError("ConstantEnvironment needs a vertical and a horizontal direction");
    }

protected:
    Instruction instruction_impl(Site, std::uint32_t k) const override {
        return {k == 1 ? vertical_ : horizontal_, false};
    }

private:
    Dir vertical_;
    Dir horizontal_;
};

/// Finite hand-written stacks loaded from text, one record per line:
///   x y k dir cease
/// with dir in {+x,-x,+y,-y} and cease in {0,1}. Lines starting with '#' are
/// comments. Addresses outside the script fall through to an optional base
/// environment; with no base they are a contract error.
class ScriptedEnvironment : public Environment {
public:
    explicit ScriptedEnvironment(std::shared_ptr<const Environment> base = nullptr)
        : base_(std::move(base)) {}

    static ScriptedEnvironment parse(std::istream& in,
                                     std::shared_ptr<const Environment> base = nullptr);

    void set(Site s, std::uint32_t k, Instruction ins);

protected:
    Instruction instruction_impl(Site s, std::uint32_t k) const override;

private:
    static std::uint64_t address_key(Site s, std::uint32_t k) {
        return mix_combine(pack_site(s), k);
    }

    std::unordered_map<std::uint64_t, Instruction> table_;
    std::shared_ptr<const Environment> base_;
};

/// Wraps a base environment, stamping a cease flag on each instruction
/// independently with probability p (deterministically per address). Used to
/// build terminating particle systems for the order-independence tests.
class CeaseAugmentedEnvironment : public Environment {
public:
    CeaseAugmentedEnvironment(std::shared_ptr<const Environment> base, double p,
                              std::uint64_t salt)
        : base_(std::move(base)), p_(p), salt_(salt) {
        if (!base_) throw ContractError("cease augmentation needs a base environment");
        if (!(p >= 0.0 && p <= 1.0)) throw ContractError("cease probability must be in [0,1]");
    }

protected:
    Instruction instruction_impl(Site s, std::uint32_t k) const override {
        Instruction ins = base_->instruction(s, k);
        std::uint64_t u = prf64(salt_, pack_site(s), k, 0xCEA5EULL);
        double x = (static_cast<double>(u >> 11) + 1.0) * 0x1p-53;
        if (x <= p_) ins.cease = true;
        return ins;
    }

private:
    std::shared_ptr<const Environment> base_;
    double p_;
    std::uint64_t salt_;
};

} // namespace berw
