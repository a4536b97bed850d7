#pragma once

#include "conglab/sums.hpp"

#include <string>
#include <vector>

namespace conglab {

struct IdentityCheck {
    std::string suite;
    std::string name;
    bool ok = false;
};

struct IdentityConfig {
    std::vector<long> primes = {3, 5, 7};
    long r_max = 2;
    int parts_max = 5;        // composition length covered by the chain identity
    long exact_bound = 40;    // exact rational targets up to here
    long padic_bound = 200;   // p-adic targets up to here
    long oracle_target_max = 60;
    int oracle_prec_max = 3;
    EngineLimits limits;
};

// N * S_n(N) = n! * C_{n-1}(N) for targets divisible by p, where C_d is the
// increasing-chain sum of depth d.  Checked over Q up to exact_bound and
// p-adically up to padic_bound.
std::vector<IdentityCheck> chain_identity_suite(const IdentityConfig& config = {});

// The three sign-splitting factorizations through chain-sum differences at
// targets 2p^r, plus the doubling congruence relating targets 2p^r and p^r.
// All checked over Q except the doubling step, which lives mod p^r.
std::vector<IdentityCheck> parity_identity_suite(const IdentityConfig& config = {});

// The dense engine must agree with direct enumeration on every sign class.
// One record per (length, p, precision) cell of the grid.
std::vector<IdentityCheck> oracle_equivalence_suite(const IdentityConfig& config = {});

}
