#include "conglab/identities.hpp"

#include "conglab/errors.hpp"

#include <set>
#include <string>

namespace conglab {

namespace {

std::string tag(const char* head, long p, long extra_a, long extra_b) {
    std::string s(head);
    s += " p=" + std::to_string(p);
    if (extra_a >= 0) s += " n=" + std::to_string(extra_a);
    if (extra_b >= 0) s += " N=" + std::to_string(extra_b);
    return s;
}

long factorial(int n) {
    long f = 1;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
}

long valuation_of(long n, long p) {
    long v = 0;
    while (n % p == 0) {
        n /= p;
        ++v;
    }
    return v;
}

std::vector<int> prefix_slots(int count) {
    std::vector<int> out;
    for (int i = 1; i <= count; ++i) out.push_back(i);
    return out;
}

}  // namespace

std::vector<IdentityCheck> chain_identity_suite(const IdentityConfig& config) {
    std::vector<IdentityCheck> out;
    for (long p : config.primes) {
        mpz_class pz(p);
        for (long target = p; target <= config.exact_bound; target += p) {
            for (int n = 3; n <= config.parts_max; ++n) {
                mpq_class lhs =
                    target * signed_sum_exact(n, target, pz, make_pattern(n, {}), config.limits);
                mpq_class rhs =
                    factorial(n) * chain_sum_exact(n - 1, target, pz, config.limits);
                out.push_back({"chain", tag("exact", p, n, target), lhs == rhs});
            }
        }

        // beyond the exact range the identity is compared digit by digit, on
        // targets m p^r with a small multiplier
        std::set<long> targets;
        for (long power = p; power <= config.padic_bound; power *= p)
            for (long m = 1; m <= 3; ++m)
                if (m * power > config.exact_bound && m * power <= config.padic_bound)
                    targets.insert(m * power);
        for (long target : targets) {
            long digits = 2 + valuation_of(target, p);
            RingPtr ring = make_ring(pz, 2);
            for (int n = 3; n <= config.parts_max; ++n) {
                Residue sum = signed_sum_series({n, target, make_pattern(n, {}), ring},
                                                config.limits);
                PAdicScalar lhs =
                    padic_mul(PAdicScalar::from_integer(sum.value(), pz, 2),
                              PAdicScalar::from_integer(mpz_class(target), pz, digits + 4));
                PAdicScalar chain =
                    chain_sum({n - 1, target, pz, digits}, Engine::series, config.limits);
                PAdicScalar rhs = padic_mul(
                    chain, PAdicScalar::from_integer(mpz_class(factorial(n)), pz, digits + 4));
                out.push_back({"chain", tag("padic", p, n, target), padic_agrees(lhs, rhs)});
            }
        }
    }
    return out;
}

std::vector<IdentityCheck> parity_identity_suite(const IdentityConfig& config) {
    std::vector<IdentityCheck> out;
    for (long p : config.primes) {
        mpz_class pz(p);
        long power = 1;
        for (long r = 1; r <= config.r_max; ++r) {
            power *= p;
            long twice = 2 * power;
            std::string where = " p=" + std::to_string(p) + " r=" + std::to_string(r);

            mpq_class s3 = signed_sum_exact(3, twice, pz, make_pattern(3, {1}), config.limits);
            mpq_class d2 = chain_sum_exact(2, power, pz, config.limits) -
                           chain_sum_exact(2, twice, pz, config.limits);
            out.push_back({"parity", "split3" + where, power * s3 == d2});

            mpq_class s4a = signed_sum_exact(4, twice, pz, make_pattern(4, {1}), config.limits);
            mpq_class s4b =
                signed_sum_exact(4, twice, pz, make_pattern(4, {1, 2}), config.limits);
            mpq_class d3 = chain_sum_exact(3, power, pz, config.limits) -
                           chain_sum_exact(3, twice, pz, config.limits);
            out.push_back({"parity", "split4" + where, power * (4 * s4a + 3 * s4b) == 12 * d3});

            mpq_class s5a = signed_sum_exact(5, twice, pz, make_pattern(5, {1}), config.limits);
            mpq_class s5b =
                signed_sum_exact(5, twice, pz, make_pattern(5, {1, 2}), config.limits);
            mpq_class d4 = chain_sum_exact(4, power, pz, config.limits) -
                           chain_sum_exact(4, twice, pz, config.limits);
            out.push_back({"parity", "split5" + where, power * (s5a + 2 * s5b) == 12 * d4});

            RingPtr ring = make_ring(pz, static_cast<int>(r));
            Residue big = signed_sum_series({3, twice, make_pattern(3, {1}), ring}, config.limits);
            Residue small =
                signed_sum_series({3, power, make_pattern(3, {1}), ring}, config.limits);
            Residue two(mpz_class(2), ring);
            out.push_back({"parity", "doubling" + where, big == two * small});
        }
    }
    return out;
}

std::vector<IdentityCheck> oracle_equivalence_suite(const IdentityConfig& config) {
    std::vector<IdentityCheck> out;
    for (int n = 3; n <= config.parts_max; ++n) {
        for (long p : config.primes) {
            mpz_class pz(p);
            for (int s = 1; s <= config.oracle_prec_max; ++s) {
                RingPtr ring = make_ring(pz, s);
                bool all_ok = true;
                for (long target = n; target <= config.oracle_target_max; ++target) {
                    std::vector<Residue> classes =
                        signed_sum_all_classes(n, target, ring, config.limits);
                    for (int c = 0; c <= n; ++c) {
                        Residue dense = signed_sum_series(
                            {n, target, make_pattern(n, prefix_slots(c)), ring}, config.limits);
                        if (!(dense == classes[static_cast<size_t>(c)])) all_ok = false;
                    }
                }
                std::string name = "dense n=" + std::to_string(n) + " p=" + std::to_string(p) +
                                   " s=" + std::to_string(s) +
                                   " targets<=" + std::to_string(config.oracle_target_max);
                out.push_back({"oracle", name, all_ok});
            }
        }
    }
    return out;
}

}
