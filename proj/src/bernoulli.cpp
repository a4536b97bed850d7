#include "conglab/bernoulli.hpp"

#include <atomic>
#include <deque>
#include <mutex>

namespace conglab {

namespace {

// deque keeps references stable while the table grows, so readers may hold on
// to entries below `published` without any lock
std::deque<mpq_class> table;
std::atomic<size_t> published{0};
std::mutex writer;

void grow_table(unsigned k) {
    std::lock_guard<std::mutex> lock(writer);
    size_t have = published.load(std::memory_order_acquire);
    if (k < have) return;
    if (have == 0) {
        table.emplace_back(1);  // B_0
        have = 1;
    }
    mpz_class binom;
    for (size_t n = have; n <= k; ++n) {
        // sum_{i=0}^{n} C(n+1, i) B_i = 0, solved for B_n
        mpq_class acc(0);
        for (size_t i = 0; i < n; ++i) {
            mpz_bin_uiui(binom.get_mpz_t(), n + 1, i);
            acc += mpq_class(binom) * table[i];
        }
        acc /= mpq_class(static_cast<long>(n) + 1);
        table.emplace_back(-acc);
    }
    published.store(k + 1, std::memory_order_release);
}

}  // namespace

const mpq_class& bernoulli_exact(unsigned k) {
    if (k > kBernoulliIndexCap)
        throw IndexTooLargeError("exact Bernoulli table capped at index " +
                                 std::to_string(kBernoulliIndexCap) + ", requested " +
                                 std::to_string(k));
    if (k >= published.load(std::memory_order_acquire)) grow_table(k);
    return table[k];
}

Residue bernoulli_mod_p(unsigned k, const mpz_class& p) {
    auto ring = make_ring(p, 1);
    if (k == 0) return Residue(1, ring);
    if (k % 2 != 0 || k < 2 || mpz_class(k) > p - 3)
        throw PoleOrUnsupportedError("power-sum route needs k = 0 or even k in [2, p-3], got k=" +
                                     std::to_string(k) + " at p=" + p.get_str());
    // Faulhaber: (k+1) S_k(p) = sum_{j=0}^{k} C(k+1,j) B_j p^(k+1-j). Every
    // j <= k-1 term carries p^2 or more, and none of those B_j has p in its
    // denominator (von Staudt-Clausen: that would need (p-1) | j, impossible
    // for 0 < j <= k <= p-3; the j = k-1 term also has B_{k-1} = 0 outright
    // for even k >= 4, odd-index Bernoulli numbers vanish). So mod p^2 only
    // j = k survives: S_k(p) ≡ B_k p, and k+1 < p is invertible. The test
    // suite checks both halves of this argument rather than assuming them.
    mpz_class p2 = p * p;
    mpz_class s = 0, a = 1, t;
    mpz_class e(k);
    for (; a < p; ++a) {
        mpz_powm(t.get_mpz_t(), a.get_mpz_t(), e.get_mpz_t(), p2.get_mpz_t());
        s += t;
    }
    mpz_fdiv_r(s.get_mpz_t(), s.get_mpz_t(), p2.get_mpz_t());
    if (!mpz_divisible_p(s.get_mpz_t(), p.get_mpz_t()))
        throw Error("power sum not divisible by p; broken invariant");
    return Residue(s / p, ring);
}

namespace {

Residue exact_residue(unsigned k, const RingPtr& ring) {
    const mpq_class& b = bernoulli_exact(k);
    const mpz_class den(b.get_den());
    if (mpz_divisible_p(den.get_mpz_t(), ring->p.get_mpz_t()))
        throw PAdicPoleError("B_" + std::to_string(k) + " has " + ring->p.get_str() +
                             " in its denominator");
    return from_rational(mpz_class(b.get_num()), den, ring);
}

bool power_sum_applies(unsigned k, const RingPtr& ring) {
    return ring->s == 1 && k % 2 == 0 && k >= 2 && mpz_class(k) <= ring->p - 3;
}

}  // namespace

Residue bernoulli_residue(unsigned k, const RingPtr& ring) {
    if (k >= 3 && k % 2 == 1) return Residue(0, ring);
    if (power_sum_applies(k, ring)) return bernoulli_mod_p(k, ring->p);
    return exact_residue(k, ring);
}

BernoulliValue bernoulli_value(unsigned k, const RingPtr& ring) {
    BernoulliValue v;
    v.k = k;
    if (power_sum_applies(k, ring)) {
        v.method = BernoulliMethod::power_sum;
        v.residue = bernoulli_mod_p(k, ring->p);
        if (k <= kBernoulliIndexCap) v.exact = bernoulli_exact(k);
    } else {
        v.method = BernoulliMethod::recurrence;
        if (k >= 3 && k % 2 == 1) {
            v.exact = mpq_class(0);
            v.residue = Residue(0, ring);
        } else {
            v.exact = bernoulli_exact(k);
            v.residue = exact_residue(k, ring);
        }
    }
    return v;
}

}  // namespace conglab
