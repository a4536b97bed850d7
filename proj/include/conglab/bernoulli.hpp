#pragma once

#include <gmpxx.h>

#include <optional>

#include "conglab/modring.hpp"

namespace conglab {

// Largest index served by the exact recurrence table.
constexpr unsigned kBernoulliIndexCap = 400;

// Exact B_k by the defining recurrence, memoized. Reads are lock-free once an
// index has been published; the table grows under a single writer lock.
// Throws IndexTooLargeError beyond kBernoulliIndexCap.
const mpq_class& bernoulli_exact(unsigned k);

// B_k mod p through power sums: sum_{a=1}^{p-1} a^k = S_k(p) satisfies
// S_k(p) ≡ B_k * p (mod p^2), so S_k(p)/p mod p is B_k mod p without ever
// touching the exact table. Requires k = 0 or even k with 2 <= k <= p-3;
// throws PoleOrUnsupportedError otherwise.
Residue bernoulli_mod_p(unsigned k, const mpz_class& p);

// B_k as a residue in the given ring. Dispatches to the power-sum route when
// the ring is Z/p and the index qualifies, to the exact table otherwise.
// Throws PAdicPoleError when p divides the denominator of B_k (von
// Staudt-Clausen: exactly when (p-1) | k for even k > 0).
Residue bernoulli_residue(unsigned k, const RingPtr& ring);

enum class BernoulliMethod { recurrence, power_sum };

struct BernoulliValue {
    unsigned k = 0;
    std::optional<mpq_class> exact;
    std::optional<Residue> residue;
    BernoulliMethod method = BernoulliMethod::recurrence;
};

// Both views of B_k where available; `method` records how the residue was
// obtained.
BernoulliValue bernoulli_value(unsigned k, const RingPtr& ring);

}  // namespace conglab
