#pragma once

#include "conglab/claims.hpp"

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace conglab {

struct ResidueSample {
    mpz_class p;
    mpz_class c_p;   // 0 <= c_p < p
};

// First-power shape being rediscovered: the left-hand combination is assumed
// congruent to c * p^p_power * B(p - bernoulli_offset) mod p^(p_power + 1)
// for some fixed rational c, and each prime pins c modulo p.
struct MiningHypothesis {
    int parts = 0;
    int doubler = 1;
    std::vector<LhsTerm> lhs;
    int bernoulli_offset = 0;
    long p_power = 0;
    long p_min = 3;
};

// Pulls the r = 1 branch out of a cataloged claim.  Distinct families and
// claims that only start at the second power are rejected.
MiningHypothesis hypothesis_for_claim(const CongruenceClaim& claim);

// One prime's worth of evidence.  Throws BernoulliVanishesError when the
// Bernoulli factor cannot be inverted (odd index, denominator pole, or an
// irregular pair) and NonIntegralSampleError when p^p_power does not divide
// the left side.
ResidueSample coefficient_residue(const MiningHypothesis& hypothesis, const mpz_class& p,
                                  const EngineLimits& limits = {});

// Unique a/b with |a|, b bounded by sqrt(M/2), b coprime to M = prod p_i and
// a = b x mod M; empty when no such fraction exists.
std::optional<mpq_class> reconstruct_rational(const std::vector<ResidueSample>& samples);

struct MiningOutcome {
    std::vector<ResidueSample> samples;                       // fed into reconstruction
    std::vector<std::pair<mpz_class, std::string>> skipped;   // prime -> reason
    std::optional<mpq_class> value;
    mpz_class held_out_prime;                                 // 0 when never reached
    std::optional<bool> held_out_ok;
    bool extended = false;       // needed more than the seed primes
    std::vector<std::string> log;
};

// Collects samples at the smallest applicable primes, reconstructs, and
// confirms on a further prime that took no part in the reconstruction.  A
// candidate that fails its confirmation is folded back in and the search
// widens, up to an internal prime budget.  With an explicit prime list the
// set is fixed: reconstruction uses exactly the usable listed primes and
// only the confirmation prime is chosen automatically.
MiningOutcome mine(const MiningHypothesis& hypothesis, int seed_primes = 4,
                   const std::vector<long>& primes = {}, const EngineLimits& limits = {});

}
