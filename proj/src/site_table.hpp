#pragma once

#include <cstdint>
#include <vector>

#include "geometry.hpp"
#include "rng.hpp"

namespace berw {

namespace detail {
inline std::size_t table_capacity_for(std::size_t expected) {
    std::size_t cap = 64;
    // Keep load factor below ~0.7.
    while (cap < expected + expected / 2 + 8) cap <<= 1;
    return cap;
}
} // namespace detail

/// Open-addressed hash set of lattice sites, keyed by packed coordinates.
/// Linear probing over a power-of-two table; keys stored +1 so 0 marks empty.
class SiteSet {
public:
    explicit SiteSet(std::size_t expected = 1024)
        : slots_(detail::table_capacity_for(expected), 0),
          mask_(slots_.size() - 1) {}

    std::size_t size() const { return count_; }

    /// Inserts; returns true if the site was not present before.
    bool insert(Site s) {
        if (count_ * 3 >= slots_.size() * 2) grow();
        return insert_key(pack_site(s) + 1);
    }

    bool contains(Site s) const {
        std::uint64_t key = pack_site(s) + 1;
        std::size_t i = mix64(key) & mask_;
        while (true) {
            std::uint64_t v = slots_[i];
            if (v == key) return true;
            if (v == 0) return false;
            i = (i + 1) & mask_;
        }
    }

    template <typename F>
    void for_each(F&& f) const {
        for (std::uint64_t v : slots_)
            if (v != 0) f(unpack_site(v - 1));
    }

private:
    bool insert_key(std::uint64_t key) {
        std::size_t i = mix64(key) & mask_;
        while (true) {
            std::uint64_t v = slots_[i];
            if (v == key) return false;
            if (v == 0) {
                slots_[i] = key;
                ++count_;
                return true;
            }
            i = (i + 1) & mask_;
        }
    }

    void grow() {
        std::vector<std::uint64_t> old;
        old.swap(slots_);
        slots_.assign(old.size() * 2, 0);
        mask_ = slots_.size() - 1;
        count_ = 0;
        for (std::uint64_t v : old)
            if (v != 0) insert_key(v);
    }

    std::vector<std::uint64_t> slots_;
    std::size_t mask_;
    std::size_t count_ = 0;
};

/// Open-addressed map from lattice site to a 32-bit counter.
class SiteCountMap {
public:
    explicit SiteCountMap(std::size_t expected = 1024)
        : keys_(detail::table_capacity_for(expected), 0),
          vals_(keys_.size(), 0),
          mask_(keys_.size() - 1) {}

    std::size_t size() const { return count_; }

    /// Reference to the counter for s, inserting 0 if absent.
    std::uint32_t& at(Site s) {
        if (count_ * 3 >= keys_.size() * 2) grow();
        return slot(pack_site(s) + 1);
    }

    /// Counter value, 0 if absent (no insertion).
    std::uint32_t get(Site s) const {
        std::uint64_t key = pack_site(s) + 1;
        std::size_t i = mix64(key) & mask_;
        while (true) {
            std::uint64_t v = keys_[i];
            if (v == key) return vals_[i];
            if (v == 0) return 0;
            i = (i + 1) & mask_;
        }
    }

    bool contains(Site s) const {
        std::uint64_t key = pack_site(s) + 1;
        std::size_t i = mix64(key) & mask_;
        while (true) {
            std::uint64_t v = keys_[i];
            if (v == key) return true;
            if (v == 0) return false;
            i = (i + 1) & mask_;
        }
    }

    template <typename F>
    void for_each(F&& f) const {
        for (std::size_t i = 0; i < keys_.size(); ++i)
            if (keys_[i] != 0) f(unpack_site(keys_[i] - 1), vals_[i]);
    }

private:
    std::uint32_t& slot(std::uint64_t key) {
        std::size_t i = mix64(key) & mask_;
        while (true) {
            std::uint64_t v = keys_[i];
            if (v == key) return vals_[i];
            if (v == 0) {
                keys_[i] = key;
                vals_[i] = 0;
                ++count_;
                return vals_[i];
            }
            i = (i + 1) & mask_;
        }
    }

    void grow() {
        std::vector<std::uint64_t> okeys;
        std::vector<std::uint32_t> ovals;
        okeys.swap(keys_);
        ovals.swap(vals_);
        keys_.assign(okeys.size() * 2, 0);
        vals_.assign(keys_.size(), 0);
        mask_ = keys_.size() - 1;
        count_ = 0;
        for (std::size_t i = 0; i < okeys.size(); ++i)
            if (okeys[i] != 0) slot(okeys[i]) = ovals[i];
    }

    std::vector<std::uint64_t> keys_;
    std::vector<std::uint32_t> vals_;
    std::size_t mask_;
    std::size_t count_ = 0;
};

} // namespace berw
