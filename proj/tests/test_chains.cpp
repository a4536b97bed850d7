#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "conglab/errors.hpp"
#include "conglab/sums.hpp"

using namespace conglab;

TEST_CASE("pinned exact chain sums") {
    CHECK(chain_sum_exact(2, 2, 3) == mpq_class(1, 2));
    CHECK(chain_sum_exact(2, 3, 3) == mpq_class(1, 2));
    CHECK(chain_sum_exact(2, 6, 3) == mpq_class(7, 8));
    CHECK(chain_sum_exact(3, 6, 3) == mpq_class(3, 8));
    CHECK(chain_sum_exact(3, 10, 5) == mpq_class(800, 567));
    CHECK(chain_sum_exact(2, 1, 3) == 0);  // no strictly increasing pair fits
}

TEST_CASE("exact chain sum against direct enumeration") {
    for (long p : {3L, 5L}) {
        for (long bound : {4L, 7L, 11L}) {
            mpq_class direct = 0;
            for (long a = 1; a <= bound; ++a) {
                if (a % p == 0) continue;
                for (long b = a + 1; b <= bound; ++b) {
                    if (b % p == 0 || (b - a) % p == 0) continue;
                    direct += mpq_class(1, a * b);
                }
            }
            CHECK(chain_sum_exact(2, bound, p) == direct);
        }
    }
}

TEST_CASE("chain engines agree") {
    for (long p : {3L, 5L}) {
        for (int depth : {2, 3, 4}) {
            for (long bound : {6L, 10L, 15L, 27L}) {
                ChainSpec spec{depth, bound, p, 3};
                auto a = chain_sum(spec, Engine::naive);
                auto b = chain_sum(spec, Engine::series);
                CHECK(padic_agrees(a, b));
            }
        }
    }
}

TEST_CASE("chain engines match the exact value") {
    for (long p : {3L, 5L, 7L}) {
        for (int depth : {2, 3}) {
            for (long bound : {8L, 13L, 20L}) {
                mpq_class exact = chain_sum_exact(depth, bound, p);
                ChainSpec spec{depth, bound, p, 3};
                auto series = chain_sum(spec, Engine::series);
                auto want = PAdicScalar::from_rational(exact.get_num(), exact.get_den(),
                                                       mpz_class(p), 3);
                CHECK(padic_agrees(series, want));
            }
        }
    }
}

TEST_CASE("pinned residue through the p-adic view") {
    ChainSpec spec{2, 3, 3, 1};
    CHECK(chain_sum(spec, Engine::naive).integer_residue(1) == 2);  // 1/2 mod 3
}

TEST_CASE("interior indices may be divisible by p") {
    // only the endpoints and the gaps must avoid p; the middle slot of a
    // depth 3 chain takes multiples of 3 freely
    mpq_class direct = 0;
    long p = 3, bound = 7;
    bool middle_hit_p = false;
    for (long a = 1; a <= bound; ++a) {
        if (a % p == 0) continue;
        for (long b = a + 1; b <= bound; ++b) {
            if ((b - a) % p == 0) continue;
            for (long c = b + 1; c <= bound; ++c) {
                if (c % p == 0 || (c - b) % p == 0) continue;
                direct += mpq_class(1, a * b) * mpq_class(1, c);
                if (b % p == 0) middle_hit_p = true;
            }
        }
    }
    CHECK(middle_hit_p);
    CHECK(direct == mpq_class(3, 5));
    CHECK(chain_sum_exact(3, bound, p) == direct);
}

TEST_CASE("factorial bridge from compositions to chains") {
    // target * S_n(target) == n! * C_{n-1}(target) whenever p divides target
    for (long p : {3L, 5L}) {
        for (int parts : {3, 4}) {
            long fact = 1;
            for (int i = 2; i <= parts; ++i) fact *= i;
            for (long target = p; target <= 30; target += p) {
                mpq_class lhs =
                    mpq_class(target) * signed_sum_exact(parts, target, p, make_pattern(parts, {}));
                CHECK(lhs == fact * chain_sum_exact(parts - 1, target, p));
            }
        }
    }
}

TEST_CASE("chain input validation") {
    CHECK_THROWS_AS(chain_sum_exact(1, 10, 3), Error);
    CHECK_THROWS_AS(chain_sum({2, 10, 4, 1}, Engine::naive), Error);
    EngineLimits tight;
    tight.target_cap = 50;
    CHECK_THROWS_AS(chain_sum({2, 51, 3, 1}, Engine::series, tight), TargetTooLargeError);
}
