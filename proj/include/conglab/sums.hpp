#pragma once

#include <gmpxx.h>

#include <vector>

#include "conglab/modring.hpp"

namespace conglab {

// Sign assignment for an n-part composition sum: each position listed in
// `negated` (1-based) contributes (-1)^{index at that position} to the sign
// of a summand.
struct SignPattern {
    int parts = 0;
    std::vector<int> negated;  // sorted, unique
};

// sorts, deduplicates and range-checks the positions
SignPattern make_pattern(int parts, std::vector<int> negated);

// Sum over all compositions of `target` into `parts` indices coprime to p of
// sign(pattern) / (product of indices), valued in Z/p^s.
struct SumSpec {
    int parts = 0;
    long target = 0;
    SignPattern pattern;
    RingPtr ring;
};

struct EngineLimits {
    // the enumeration engine refuses when ~target^(parts-1) exceeds this
    double enumeration_budget = 1e8;
    // the series engine refuses targets above target_cap
    long target_cap = 20000;
    static constexpr long target_hard_cap = 100000;
    // auto engine selection enumerates below this composition count and
    // convolves above it
    double auto_naive_threshold = 1e6;
    // cross-check hook: route around the word-size fast path
    bool force_generic = false;
};

Residue signed_sum_naive(const SumSpec& spec, const EngineLimits& limits = {});
Residue signed_sum_series(const SumSpec& spec, const EngineLimits& limits = {});

// One enumeration pass accumulating every sign class at once; entry c holds
// the sum for the pattern negating positions 1..c (c = 0..parts).
std::vector<Residue> signed_sum_all_classes(int parts, long target, const RingPtr& ring,
                                            const EngineLimits& limits = {});

// exact rational value of the same sum; small targets only
mpq_class signed_sum_exact(int parts, long target, const mpz_class& p, const SignPattern& pattern,
                           const EngineLimits& limits = {});

enum class Engine { naive, series };

// Sum over u_1 < ... < u_d <= bound with u_1, u_d and every consecutive
// difference coprime to p, of 1/(u_1 ... u_d). Interior indices may be
// divisible by p, so the value lives in Q_p and carries a valuation.
struct ChainSpec {
    int depth = 0;  // >= 2
    long bound = 0;
    mpz_class p;
    long precision = 0;  // requested absolute precision
};

PAdicScalar chain_sum(const ChainSpec& spec, Engine engine, const EngineLimits& limits = {});
mpq_class chain_sum_exact(int depth, long bound, const mpz_class& p,
                          const EngineLimits& limits = {});

enum class SumRange { upto_p_minus_1, upto_2p_coprime };

// Sum over pairwise distinct indices l_1, ..., l_n in the chosen range of
// 1/(l_1^a_1 ... l_n^a_n). Requires sum(alphas) <= p - 3.
struct DistinctSumSpec {
    std::vector<int> alphas;
    SumRange range = SumRange::upto_p_minus_1;
    RingPtr ring;
};

Residue distinct_sum(const DistinctSumSpec& spec);

// sum of l^(-alpha) over the chosen range
Residue power_sum(int alpha, SumRange range, const RingPtr& ring);

// C(target-1, parts-1) as a double; budget decisions only need the magnitude
double composition_count(int parts, long target);

}  // namespace conglab
