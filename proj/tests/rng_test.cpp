#include <doctest.h>

#include <cmath>

#include "rng.hpp"

using namespace berw;

TEST_CASE("prf64 is a pure function of its keys") {
    CHECK(prf64(42, 1, 2, 3) == prf64(42, 1, 2, 3));
    CHECK(prf64(42, 1, 2, 3) != prf64(43, 1, 2, 3));
    CHECK(prf64(42, 1, 2, 3) != prf64(42, 2, 1, 3));
}

TEST_CASE("derived seeds differ across indices and masters") {
    CHECK(derive_seed(7, 0) != derive_seed(7, 1));
    CHECK(derive_seed(7, 0) != derive_seed(8, 0));
    CHECK(derive_seed(7, 123) == derive_seed(7, 123));
}

TEST_CASE("splitmix bits are fair within MC error") {
    SplitMix rng(12345);
    const int n = 200000;
    int ones = 0;
    for (int i = 0; i < n; ++i) ones += rng.next_bit() ? 1 : 0;
    double p = static_cast<double>(ones) / n;
    double se = std::sqrt(0.25 / n);
    CHECK(std::fabs(p - 0.5) < 5 * se);
}

TEST_CASE("open-closed uniforms stay in (0, 1]") {
    SplitMix rng(99);
    double mn = 1.0, mx = 0.0, sum = 0.0;
    const int n = 100000;
    for (int i = 0; i < n; ++i) {
        double u = rng.next_open_closed();
        mn = std::min(mn, u);
        mx = std::max(mx, u);
        sum += u;
    }
    CHECK(mn > 0.0);
    CHECK(mx <= 1.0);
    CHECK(std::fabs(sum / n - 0.5) < 0.01);
}
