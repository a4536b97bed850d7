#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <vector>

#include "conglab/errors.hpp"
#include "conglab/sums.hpp"

using namespace conglab;

namespace {

Residue naive(int parts, long target, const RingPtr& ring, std::vector<int> neg,
              const EngineLimits& limits = {}) {
    return signed_sum_naive({parts, target, make_pattern(parts, std::move(neg)), ring}, limits);
}

Residue series(int parts, long target, const RingPtr& ring, std::vector<int> neg,
               const EngineLimits& limits = {}) {
    return signed_sum_series({parts, target, make_pattern(parts, std::move(neg)), ring}, limits);
}

}  // namespace

TEST_CASE("pattern validation") {
    CHECK_THROWS_AS(make_pattern(3, {0}), Error);
    CHECK_THROWS_AS(make_pattern(3, {4}), Error);
    CHECK(make_pattern(3, {3, 1, 1}).negated == std::vector<int>{1, 3});
    CHECK_THROWS_AS(make_pattern(0, {}), Error);
}

TEST_CASE("pinned composition sums") {
    CHECK(naive(3, 5, make_ring(5, 1), {1}).value() == 3);
    CHECK(series(3, 5, make_ring(5, 1), {1}).value() == 3);
    CHECK(naive(3, 6, make_ring(3, 1), {1}).value() == 1);
    CHECK(naive(3, 3, make_ring(3, 1), {}).value() == 1);
    CHECK(series(3, 50, make_ring(5, 2), {1}).value() == 5);
    CHECK(naive(3, 14, make_ring(7, 1), {1}).value() == 3);

    // 4 * S({1}) + 3 * S({1,2}) at length 4, target 50
    auto ring = make_ring(5, 3);
    auto combo = Residue(4, ring) * series(4, 50, ring, {1}) +
                 Residue(3, ring) * series(4, 50, ring, {1, 2});
    CHECK(combo.value() == 55);
}

TEST_CASE("degenerate targets") {
    auto ring = make_ring(5, 1);
    CHECK(naive(3, 2, ring, {1}).is_zero());   // no composition of 2 into 3 parts
    CHECK(series(3, 2, ring, {1}).is_zero());
    CHECK(naive(3, 3, ring, {1}).value() == ring->modulus - 1);  // single all-ones term, sign -1
    CHECK(naive(2, 4, ring, {}) == from_rational(11, 12, ring));  // 1/3 + 1/3 + 1/4
}

TEST_CASE("exact rational reference") {
    // p = 3, two parts: compositions of 4 avoiding multiples of 3 leave (2,2)
    CHECK(signed_sum_exact(2, 4, 3, make_pattern(2, {})) == mpq_class(1, 4));
    // negating the first slot flips the sign of odd first parts
    CHECK(signed_sum_exact(3, 5, 5, make_pattern(3, {1})) == mpq_class(-3, 4));
    for (long target : {5L, 6L, 7L, 9L, 12L}) {
        for (int parts : {2, 3}) {
            for (auto& neg : std::vector<std::vector<int>>{{}, {1}, {1, 2}}) {
                auto pat = make_pattern(parts, neg);
                mpq_class exact = signed_sum_exact(parts, target, 5, pat);
                auto ring = make_ring(5, 2);
                Residue want = from_rational(exact.get_num(), exact.get_den(), ring);
                CHECK(signed_sum_naive({parts, target, pat, ring}) == want);
                CHECK(signed_sum_series({parts, target, pat, ring}) == want);
            }
        }
    }
}

TEST_CASE("engines agree across a grid") {
    for (long p : {3L, 5L, 7L}) {
        for (int s : {1, 2, 3}) {
            auto ring = make_ring(p, s);
            for (int parts : {2, 3, 4}) {
                for (long target : {7L, 15L, 26L}) {
                    for (auto& neg : std::vector<std::vector<int>>{{}, {1}, {2}, {1, 2}}) {
                        auto a = naive(parts, target, ring, neg);
                        auto b = series(parts, target, ring, neg);
                        CHECK(a == b);
                    }
                }
            }
        }
    }
}

TEST_CASE("word size fast path matches the generic path") {
    EngineLimits generic;
    generic.force_generic = true;
    for (long p : {3L, 7L}) {
        auto ring = make_ring(p, 3);
        for (long target : {10L, 21L}) {
            CHECK(naive(3, target, ring, {2}) == naive(3, target, ring, {2}, generic));
            CHECK(naive(4, target, ring, {1, 3}) == naive(4, target, ring, {1, 3}, generic));
        }
    }
}

TEST_CASE("sign symmetries") {
    auto ring = make_ring(5, 2);
    for (long target : {8L, 13L, 20L}) {
        // compositions reverse: negating slot 1 and negating the last slot agree
        CHECK(naive(3, target, ring, {1}) == naive(3, target, ring, {3}));
        CHECK(naive(4, target, ring, {1, 2}) == naive(4, target, ring, {3, 4}));
        // negating every slot scales the whole sum by (-1)^target
        auto all = naive(3, target, ring, {1, 2, 3});
        auto none = naive(3, target, ring, {});
        CHECK(all == (target % 2 ? -none : none));
    }
}

TEST_CASE("single pass class walker matches per pattern enumeration") {
    for (long p : {3L, 5L}) {
        auto ring = make_ring(p, 2);
        for (int parts : {2, 3, 4}) {
            for (long target : {9L, 16L, 25L}) {
                auto classes = signed_sum_all_classes(parts, target, ring);
                REQUIRE(classes.size() == static_cast<size_t>(parts) + 1);
                for (int c = 0; c <= parts; ++c) {
                    std::vector<int> neg;
                    for (int t = 1; t <= c; ++t) neg.push_back(t);
                    CHECK(classes[c] == naive(parts, target, ring, neg));
                }
            }
        }
    }
}

TEST_CASE("budget refusals") {
    EngineLimits tight;
    tight.enumeration_budget = 100;
    CHECK_THROWS_AS(naive(3, 200, make_ring(5, 1), {1}, tight), BudgetExceededError);
    EngineLimits small_cap;
    small_cap.target_cap = 100;
    CHECK_THROWS_AS(series(3, 101, make_ring(5, 1), {1}, small_cap), TargetTooLargeError);
    EngineLimits absurd;
    absurd.target_cap = EngineLimits::target_hard_cap + 1;
    CHECK_THROWS_AS(series(3, EngineLimits::target_hard_cap + 1, make_ring(5, 1), {1}, absurd),
                    TargetTooLargeError);
}

TEST_CASE("pinned distinct index sums") {
    CHECK(distinct_sum({{2, 1}, SumRange::upto_p_minus_1, make_ring(7, 3)}).value() == 147);
    CHECK(distinct_sum({{1, 1}, SumRange::upto_p_minus_1, make_ring(5, 2)}).value() == 5);
    CHECK(distinct_sum({{1}, SumRange::upto_2p_coprime, make_ring(7, 3)}).value() == 147);
    CHECK(distinct_sum({{1, 1, 2}, SumRange::upto_p_minus_1, make_ring(7, 2)}).value() == 28);
    CHECK(distinct_sum({{1, 1, 2}, SumRange::upto_2p_coprime, make_ring(7, 2)}).value() == 7);
    CHECK_THROWS_AS(distinct_sum({{1, 1, 1, 1, 1}, SumRange::upto_p_minus_1, make_ring(31, 2)}),
                    UnsupportedArityError);
    CHECK_THROWS_AS(distinct_sum({{3, 3}, SumRange::upto_p_minus_1, make_ring(7, 2)}), Error);
}

TEST_CASE("distinct sums against direct enumeration") {
    // two exponents, range 1..p-1: sum over ordered pairs a != b of a^-x b^-y
    for (long p : {7L, 11L}) {
        auto ring = make_ring(p, 2);
        for (int x : {1, 2}) {
            for (int y : {1, 2}) {
                if (x + y + 3 > p) continue;
                Residue want(0, ring);
                for (long a = 1; a < p; ++a)
                    for (long b = 1; b < p; ++b) {
                        if (a == b) continue;
                        want = want + inv(Residue(a, ring).pow(x)) * inv(Residue(b, ring).pow(y));
                    }
                CHECK(distinct_sum({{x, y}, SumRange::upto_p_minus_1, ring}) == want);
            }
        }
    }
}

TEST_CASE("power sums over both ranges") {
    // range 1..p-1, alpha = 1: the Wolstenholme sum, zero mod p^2 for p >= 5
    CHECK(power_sum(1, SumRange::upto_p_minus_1, make_ring(7, 2)).is_zero());
    CHECK(power_sum(1, SumRange::upto_p_minus_1, make_ring(13, 2)).is_zero());
    for (long p : {5L, 7L, 11L}) {
        for (int s : {1, 2}) {
            auto ring = make_ring(p, s);
            for (int alpha : {1, 2, 3}) {
                Residue direct(0, ring);
                for (long l = 1; l < p; ++l) direct = direct + inv(Residue(l, ring).pow(alpha));
                CHECK(power_sum(alpha, SumRange::upto_p_minus_1, ring) == direct);
                Residue wide(0, ring);
                for (long l = 1; l < 2 * p; ++l) {
                    if (l % p == 0) continue;
                    wide = wide + inv(Residue(l, ring).pow(alpha));
                }
                CHECK(power_sum(alpha, SumRange::upto_2p_coprime, ring) == wide);
            }
        }
    }
}

TEST_CASE("composition count magnitude") {
    CHECK(composition_count(3, 5) == doctest::Approx(6.0));
    CHECK(composition_count(2, 10) == doctest::Approx(9.0));
    CHECK(composition_count(1, 4) == doctest::Approx(1.0));
}
