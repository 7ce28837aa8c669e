#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace berw {

/// Violation of an operation's preconditions or of an enforced contract
/// (e.g. a timing rule reading vertical randomness it must not see).
class ContractError : public std::runtime_error {
public:
    explicit ContractError(const std::string& what) : std::runtime_error(what) {}
};

/// A run hit a configured resource limit. Carries how far the run got.
class ResourceError : public std::runtime_error {
public:
    ResourceError(const std::string& what, std::uint64_t reached_t)
        : std::runtime_error(what), reached_t_(reached_t) {}

    std::uint64_t reached_t() const { return reached_t_; }

private:
    std::uint64_t reached_t_;
};

} // namespace berw
