#pragma once

#include <cstdint>
#include <cstdlib>
#include <string>

namespace berw {

/// Lattice site in Z^2.
struct Site {
    std::int64_t x = 0;
    std::int64_t y = 0;

    friend bool operator==(const Site& a, const Site& b) = default;
};

/// Unit step directions. PlusX/MinusX are horizontal (e1), PlusY/MinusY vertical (e2).
enum class Dir : std::uint8_t { PlusX = 0, MinusX = 1, PlusY = 2, MinusY = 3 };

inline bool is_horizontal(Dir d) { return d == Dir::PlusX || d == Dir::MinusX; }
inline bool is_vertical(Dir d) { return d == Dir::PlusY || d == Dir::MinusY; }

inline Site step(Site s, Dir d) {
    switch (d) {
        case Dir::PlusX: return {s.x + 1, s.y};
        case Dir::MinusX: return {s.x - 1, s.y};
        case Dir::PlusY: return {s.x, s.y + 1};
        case Dir::MinusY: return {s.x, s.y - 1};
    }
    return s;
}

inline const char* dir_name(Dir d) {
    switch (d) {
        case Dir::PlusX: return "+x";
        case Dir::MinusX: return "-x";
        case Dir::PlusY: return "+y";
        case Dir::MinusY: return "-y";
    }
    return "?";
}

inline std::uint64_t zigzag32(std::int64_t v) {
    return static_cast<std::uint64_t>((static_cast<std::uint64_t>(v) << 1) ^
                                      static_cast<std::uint64_t>(v >> 63)) &
           0xffffffffULL;
}

/// Pack a site into one 64-bit key. Coordinates must fit in 32 signed bits,
/// which any walk we can afford to run satisfies by a wide margin.
inline std::uint64_t pack_site(Site s) {
    return zigzag32(s.x) | (zigzag32(s.y) << 32);
}

inline std::int64_t unzigzag32(std::uint64_t u) {
    return static_cast<std::int64_t>(u >> 1) ^ -static_cast<std::int64_t>(u & 1);
}

inline Site unpack_site(std::uint64_t key) {
    return {unzigzag32(key & 0xffffffffULL), unzigzag32(key >> 32)};
}

inline std::string site_str(Site s) {
    return "(" + std::to_string(s.x) + "," + std::to_string(s.y) + ")";
}

} // namespace berw
