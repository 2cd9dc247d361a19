#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <random>
#include <vector>

#include "permtest/kernels.hpp"

namespace {

using permtest::kernels::PairSums;
using permtest::kernels::RelCounts;

struct Case {
    std::vector<double> values;
    std::vector<std::uint8_t> flags;
};

Case random_case(std::mt19937_64& rng, std::size_t n, bool integer_valued) {
    Case c;
    c.values.resize(n);
    c.flags.resize(n);
    std::uniform_real_distribution<double> real(-10.0, 10.0);
    std::uniform_int_distribution<int> ints(-8, 8);
    std::uniform_int_distribution<int> bit(0, 1);
    for (std::size_t i = 0; i < n; ++i) {
        c.values[i] = integer_valued ? static_cast<double>(ints(rng)) : real(rng);
        c.flags[i] = static_cast<std::uint8_t>(bit(rng));
    }
    return c;
}

RelCounts direct_count(const std::vector<double>& v, double t) {
    RelCounts c;
    for (double x : v) {
        c.greater += x > t;
        c.equal += x == t;
    }
    return c;
}

PairSums direct_sums(const Case& c) {
    PairSums s;
    for (std::size_t i = 0; i < c.values.size(); ++i) {
        if (c.flags[i])
            s.selected += c.values[i];
        else
            s.rest += c.values[i];
    }
    return s;
}

} // namespace

TEST_SUITE_BEGIN("kernels");

TEST_CASE("dispatched backend is one of the implementations") {
    const char* name = permtest::kernels::active_backend();
    CHECK((std::strcmp(name, "scalar") == 0 || std::strcmp(name, "avx2") == 0));
}

TEST_CASE("count_rel matches a direct count across sizes and thresholds") {
    std::mt19937_64 rng(7);
    for (std::size_t n : {0u, 1u, 2u, 3u, 4u, 5u, 7u, 8u, 16u, 31u, 64u, 129u}) {
        const Case c = random_case(rng, n, false);
        for (int rep = 0; rep < 4; ++rep) {
            double t;
            if (n > 0 && rep % 2 == 0) {
                t = c.values[rep % n]; // hit exact equality
            } else {
                t = std::uniform_real_distribution<double>(-10.0, 10.0)(rng);
            }
            const RelCounts want = direct_count(c.values, t);
            const RelCounts got = permtest::kernels::count_rel(c.values.data(), n, t);
            CHECK(got.greater == want.greater);
            CHECK(got.equal == want.equal);
        }
    }
}

TEST_CASE("pair_select_sum matches a direct accumulation") {
    std::mt19937_64 rng(11);
    for (std::size_t n : {0u, 1u, 3u, 4u, 6u, 8u, 13u, 16u, 40u, 127u}) {
        const Case c = random_case(rng, n, false);
        const PairSums want = direct_sums(c);
        const PairSums got =
            permtest::kernels::pair_select_sum(c.values.data(), c.flags.data(), n);
        CHECK(got.selected == doctest::Approx(want.selected).epsilon(1e-12));
        CHECK(got.rest == doctest::Approx(want.rest).epsilon(1e-12));
    }
}

TEST_CASE("pair_select_sum is exact on integer-valued data") {
    std::mt19937_64 rng(13);
    for (std::size_t n : {1u, 4u, 5u, 8u, 16u, 33u, 64u}) {
        const Case c = random_case(rng, n, true);
        const PairSums want = direct_sums(c);
        const PairSums got =
            permtest::kernels::pair_select_sum(c.values.data(), c.flags.data(), n);
        CHECK(got.selected == want.selected);
        CHECK(got.rest == want.rest);
    }
}

#if defined(PERMTEST_HAVE_AVX2_KERNELS)
TEST_CASE("avx2 and scalar kernels are equivalent") {
    if (!__builtin_cpu_supports("avx2")) {
        MESSAGE("avx2 unavailable on this host; skipping");
        return;
    }
    std::mt19937_64 rng(17);
    for (std::size_t n : {0u, 1u, 2u, 3u, 4u, 5u, 6u, 7u, 8u, 9u, 15u, 16u, 17u, 63u, 130u}) {
        const Case real_case = random_case(rng, n, false);
        const Case int_case = random_case(rng, n, true);

        for (const Case* c : {&real_case, &int_case}) {
            double t = n > 0 ? c->values[n / 2] : 0.25;
            const RelCounts a =
                permtest::kernels::scalar::count_rel(c->values.data(), n, t);
            const RelCounts b = permtest::kernels::avx2::count_rel(c->values.data(), n, t);
            CHECK(a.greater == b.greater);
            CHECK(a.equal == b.equal);
        }

        const PairSums sa = permtest::kernels::scalar::pair_select_sum(
            real_case.values.data(), real_case.flags.data(), n);
        const PairSums sb = permtest::kernels::avx2::pair_select_sum(
            real_case.values.data(), real_case.flags.data(), n);
        CHECK(sa.selected == doctest::Approx(sb.selected).epsilon(1e-12));
        CHECK(sa.rest == doctest::Approx(sb.rest).epsilon(1e-12));

        // integer sums reassociate exactly
        const PairSums ia = permtest::kernels::scalar::pair_select_sum(
            int_case.values.data(), int_case.flags.data(), n);
        const PairSums ib = permtest::kernels::avx2::pair_select_sum(
            int_case.values.data(), int_case.flags.data(), n);
        CHECK(ia.selected == ib.selected);
        CHECK(ia.rest == ib.rest);
    }
}
#endif

TEST_SUITE_END();
