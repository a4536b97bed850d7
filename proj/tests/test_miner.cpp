#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "conglab/errors.hpp"
#include "conglab/miner.hpp"

using namespace conglab;

TEST_CASE("rational reconstruction from residues") {
    // 1/2 is 4 mod 7 and 6 mod 11
    auto v = reconstruct_rational({{7, 4}, {11, 6}});
    REQUIRE(v.has_value());
    CHECK(*v == mpq_class(1, 2));

    v = reconstruct_rational({{5, 3}, {7, 5}});
    REQUIRE(v.has_value());
    CHECK(*v == mpq_class(-2));

    v = reconstruct_rational({{5, 1}, {7, 1}});
    REQUIRE(v.has_value());
    CHECK(*v == mpq_class(1));

    CHECK_THROWS_AS(reconstruct_rational({{7, 4}}), Error);
    CHECK_THROWS_AS(reconstruct_rational({{7, 4}, {7, 4}}), Error);
    CHECK_THROWS_AS(reconstruct_rational({{7, 9}, {11, 6}}), Error);
}

TEST_CASE("reconstruction round trips random fractions") {
    const long primes[] = {101, 103, 107, 109, 113};
    for (long num = -9; num <= 9; ++num) {
        for (long den = 1; den <= 9; ++den) {
            mpq_class q(num, den);
            q.canonicalize();
            std::vector<ResidueSample> samples;
            for (long p : primes) {
                mpz_class inv_den, c;
                mpz_class pz(p);
                mpz_invert(inv_den.get_mpz_t(), q.get_den().get_mpz_t(), pz.get_mpz_t());
                c = (q.get_num() * inv_den) % pz;
                if (c < 0) c += pz;
                samples.push_back({pz, c});
            }
            auto v = reconstruct_rational(samples);
            REQUIRE(v.has_value());
            CHECK(*v == q);
        }
    }
}

TEST_CASE("per prime coefficient residues") {
    auto t3 = hypothesis_for_claim(find_claim("mix4_2pr"));
    CHECK(coefficient_residue(t3, 7).c_p == 4);  // 216/5 mod 7
    CHECK_THROWS_AS(coefficient_residue(t3, 5), NonIntegralSampleError);

    auto t2 = hypothesis_for_claim(find_claim("alt3_pr"));
    CHECK(coefficient_residue(t2, 7).c_p == 4);  // 1/2 mod 7

    // an offset that makes the Bernoulli index odd cannot be inverted
    auto odd = t2;
    odd.bernoulli_offset = 4;
    CHECK_THROWS_AS(coefficient_residue(odd, 11), BernoulliVanishesError);
    // offset 1 lands on the (p-1) denominator pole
    auto pole = t2;
    pole.bernoulli_offset = 1;
    CHECK_THROWS_AS(coefficient_residue(pole, 11), BernoulliVanishesError);
}

TEST_CASE("hypothesis extraction") {
    CHECK(hypothesis_for_claim(find_claim("alt3_pr")).parts == 3);
    CHECK(hypothesis_for_claim(find_claim("alt3_2pr")).doubler == 2);
    // second-power-only statements and the distinct families have no first
    // power branch to mine
    CHECK_THROWS_AS(hypothesis_for_claim(find_claim("sum4_2pr_hi")), Error);
    CHECK_THROWS_AS(hypothesis_for_claim(find_claim("dist_p")), Error);
}

TEST_CASE("mining rediscovers cataloged constants") {
    auto outcome = mine(hypothesis_for_claim(find_claim("alt3_pr")));
    REQUIRE(outcome.value.has_value());
    CHECK(*outcome.value == mpq_class(1, 2));
    REQUIRE(outcome.held_out_ok.has_value());
    CHECK(*outcome.held_out_ok);
    CHECK(outcome.held_out_prime > 0);

    outcome = mine(hypothesis_for_claim(find_claim("sum3_mpr")));
    REQUIRE(outcome.value.has_value());
    CHECK(*outcome.value == mpq_class(-2));
    CHECK(*outcome.held_out_ok);
}

TEST_CASE("mining widens the prime set when the bound is missed") {
    auto outcome = mine(hypothesis_for_claim(find_claim("mix4_2pr")));
    REQUIRE(outcome.value.has_value());
    CHECK(*outcome.value == mpq_class(216, 5));
    CHECK(*outcome.held_out_ok);
    CHECK(outcome.extended);  // four seed primes cannot pin 216/5
    bool skipped_five = false;
    for (const auto& s : outcome.skipped)
        if (s.first == 5) skipped_five = true;
    CHECK(skipped_five);  // p = 5 divides the denominator, sample refused
}

TEST_CASE("seed count does not change the answer") {
    auto outcome = mine(hypothesis_for_claim(find_claim("alt3_pr")), 5);
    REQUIRE(outcome.value.has_value());
    CHECK(*outcome.value == mpq_class(1, 2));
}

TEST_CASE("explicit prime lists are respected") {
    auto outcome = mine(hypothesis_for_claim(find_claim("alt3_pr")), 4, {3, 5, 7, 11});
    REQUIRE(outcome.value.has_value());
    CHECK(*outcome.value == mpq_class(1, 2));
    for (const auto& s : outcome.samples) CHECK(s.p <= 11);
    CHECK(outcome.held_out_prime > 11);  // confirmation stays out of the listed set
}

TEST_CASE("inconsistent residues do not silently reconstruct") {
    // residues stitched together from two different statements: either no
    // fraction fits the bound or the held out prime rejects the candidate
    auto t2 = hypothesis_for_claim(find_claim("alt3_pr"));
    auto t4 = hypothesis_for_claim(find_claim("mix5_2pr"));
    std::vector<ResidueSample> mixed = {
        coefficient_residue(t2, 7), coefficient_residue(t2, 11),
        coefficient_residue(t4, 13), coefficient_residue(t4, 17)};
    auto v = reconstruct_rational(mixed);
    if (v.has_value()) {
        CHECK(*v != mpq_class(1, 2));
        CHECK(*v != mpq_class(12));
        // confirm against a fresh honest sample; the imposter cannot pass
        auto fresh = coefficient_residue(t2, 19);
        mpz_class pz = fresh.p;
        mpz_class den_inv;
        REQUIRE(mpz_invert(den_inv.get_mpz_t(), mpq_class(*v).get_den().get_mpz_t(),
                           pz.get_mpz_t()) != 0);
        mpz_class pred = (v->get_num() * den_inv) % pz;
        if (pred < 0) pred += pz;
        CHECK(pred != fresh.c_p);
    }
}
