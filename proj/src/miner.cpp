#include "conglab/miner.hpp"

#include "conglab/bernoulli.hpp"
#include "conglab/errors.hpp"

#include <algorithm>
#include <set>

namespace conglab {

namespace {

constexpr int kMaxSamples = 12;
constexpr long kPrimeSearchBound = 5000;

mpz_class pow_pz(const mpz_class& p, long e) {
    mpz_class out;
    mpz_pow_ui(out.get_mpz_t(), p.get_mpz_t(), static_cast<unsigned long>(e));
    return out;
}

long next_odd_prime(long after) {
    long n = std::max(after, 1L) + 1;
    if (n % 2 == 0) ++n;
    for (; n <= kPrimeSearchBound; n += 2)
        if (is_probable_prime(mpz_class(n))) return n;
    throw Error("prime search bound exhausted");
}

}  // namespace

MiningHypothesis hypothesis_for_claim(const CongruenceClaim& claim) {
    if (claim.family) throw Error(claim.id + ": distinct families are not mined");
    const ClaimBranch* first = nullptr;
    for (const auto& b : claim.branches)
        if (b.r_lo == 1) first = &b;
    if (first == nullptr) throw Error(claim.id + ": no first-power branch to mine");
    MiningHypothesis hyp;
    hyp.parts = claim.parts;
    hyp.doubler = claim.doubler;
    hyp.lhs = claim.lhs;
    hyp.bernoulli_offset = first->bernoulli_offset;
    hyp.p_power = first->p_power.at(1);
    hyp.p_min = claim.p_min;
    return hyp;
}

ResidueSample coefficient_residue(const MiningHypothesis& hypothesis, const mpz_class& p,
                                  const EngineLimits& limits) {
    if (hypothesis.parts < 2) throw Error("hypothesis needs at least two parts");
    if (hypothesis.p_power < 0) throw Error("negative power of p");
    if (p < hypothesis.p_min) throw InapplicableError("below the smallest applicable prime");
    if (!p.fits_slong_p()) throw TargetTooLargeError("p out of supported range");

    long index = p.get_si() - hypothesis.bernoulli_offset;
    if (index < 0) throw InapplicableError("Bernoulli index would be negative");
    if (index % 2 == 1 && index >= 3)
        throw BernoulliVanishesError("odd Bernoulli index vanishes");
    if (index > 0 && index % (p.get_si() - 1) == 0)
        throw BernoulliVanishesError("Bernoulli index sits on a denominator pole");

    RingPtr unit_ring = make_ring(p, 1);
    Residue bern = bernoulli_residue(index, unit_ring);
    if (bern.is_zero()) throw BernoulliVanishesError("Bernoulli factor is divisible by p");

    long e = hypothesis.p_power + 1;
    RingPtr ring = make_ring(p, static_cast<int>(e));
    long target = hypothesis.doubler * p.get_si();

    Residue lhs(mpz_class(0), ring);
    for (const auto& term : hypothesis.lhs) {
        SumSpec spec{hypothesis.parts, target, make_pattern(hypothesis.parts, term.negated),
                     ring};
        Residue part = composition_count(hypothesis.parts, target) <= limits.auto_naive_threshold
                           ? signed_sum_naive(spec, limits)
                           : signed_sum_series(spec, limits);
        lhs = lhs + Residue(mpz_class(term.coeff), ring) * part;
    }

    mpz_class shift = pow_pz(p, hypothesis.p_power);
    if (!mpz_divisible_p(lhs.value().get_mpz_t(), shift.get_mpz_t()))
        throw NonIntegralSampleError("left side is not divisible by the predicted power of p");
    mpz_class reduced = lhs.value() / shift;

    Residue c = Residue(reduced, unit_ring) * inv(bern);
    return {p, c.value()};
}

std::optional<mpq_class> reconstruct_rational(const std::vector<ResidueSample>& samples) {
    if (samples.size() < 2) throw Error("need at least two residue samples");
    std::set<mpz_class> seen;
    for (const auto& s : samples) {
        if (s.p < 2) throw Error("bad sample prime");
        if (s.c_p < 0 || s.c_p >= s.p) throw Error("sample residue out of range");
        if (!seen.insert(s.p).second) throw Error("duplicate sample prime");
    }

    mpz_class modulus = 1;
    mpz_class x = 0;
    for (const auto& s : samples) {
        // lift x from mod modulus to mod modulus * p
        mpz_class inv_mod;
        if (mpz_invert(inv_mod.get_mpz_t(), modulus.get_mpz_t(), s.p.get_mpz_t()) == 0)
            throw Error("sample primes are not coprime");
        mpz_class delta = ((s.c_p - x) * inv_mod) % s.p;
        if (delta < 0) delta += s.p;
        x += modulus * delta;
        modulus *= s.p;
    }

    mpz_class bound;
    mpz_class half = modulus / 2;
    mpz_sqrt(bound.get_mpz_t(), half.get_mpz_t());

    mpz_class r0 = modulus, r1 = x;
    mpz_class t0 = 0, t1 = 1;
    while (r1 > bound) {
        mpz_class q = r0 / r1;
        mpz_class r2 = r0 - q * r1;
        mpz_class t2 = t0 - q * t1;
        r0 = r1;
        r1 = r2;
        t0 = t1;
        t1 = t2;
    }
    mpz_class num = r1, den = t1;
    if (den < 0) {
        num = -num;
        den = -den;
    }
    if (den == 0 || den > bound) return std::nullopt;
    if (gcd(num, den) != 1) return std::nullopt;
    if (gcd(den, modulus) != 1) return std::nullopt;
    mpq_class value(num);
    value /= mpq_class(den);
    return value;
}

namespace {

// value mod q, defined only when the denominator is a unit
std::optional<mpz_class> rational_mod(const mpq_class& value, const mpz_class& q) {
    if (mpz_divisible_p(value.get_den().get_mpz_t(), q.get_mpz_t())) return std::nullopt;
    RingPtr ring = make_ring(q, 1);
    return from_rational(value.get_num(), value.get_den(), ring).value();
}

}  // namespace

MiningOutcome mine(const MiningHypothesis& hypothesis, int seed_primes,
                   const std::vector<long>& primes, const EngineLimits& limits) {
    if (seed_primes < 2) throw Error("need at least two seed primes");
    MiningOutcome out;

    auto try_prime = [&](long p) -> bool {
        try {
            out.samples.push_back(coefficient_residue(hypothesis, mpz_class(p), limits));
            return true;
        } catch (const BernoulliVanishesError& ex) {
            out.skipped.push_back({mpz_class(p), ex.what()});
        } catch (const NonIntegralSampleError& ex) {
            out.skipped.push_back({mpz_class(p), ex.what()});
        }
        return false;
    };

    long cursor = hypothesis.p_min - 1;
    auto next_usable = [&]() -> long {
        for (;;) {
            cursor = next_odd_prime(cursor);
            if (try_prime(cursor)) return cursor;
        }
    };

    bool fixed_set = !primes.empty();
    if (fixed_set) {
        std::vector<long> sorted(primes.begin(), primes.end());
        std::sort(sorted.begin(), sorted.end());
        for (long p : sorted) {
            if (p < 3 || !is_probable_prime(mpz_class(p))) throw Error("bad prime in list");
            try_prime(p);
            cursor = std::max(cursor, p);
        }
        if (out.samples.size() < 2) {
            out.log.push_back("fewer than two usable primes in the list");
            return out;
        }
    } else {
        while (static_cast<int>(out.samples.size()) < seed_primes) next_usable();
    }

    for (;;) {
        out.value = reconstruct_rational(out.samples);
        if (!out.value) {
            out.log.push_back("no fraction within the bound for " +
                              std::to_string(out.samples.size()) + " primes");
            if (fixed_set || static_cast<int>(out.samples.size()) >= kMaxSamples) return out;
            next_usable();
            out.extended = true;
            continue;
        }

        // confirmation prime: the next usable one that keeps the denominator a unit
        long q;
        std::optional<mpz_class> expected;
        for (;;) {
            q = next_usable();
            expected = rational_mod(*out.value, mpz_class(q));
            if (expected) break;
            // the sample at q is valid evidence either way; keep it and look on
            out.extended = true;
        }
        const ResidueSample& fresh = out.samples.back();
        out.held_out_prime = q;
        out.held_out_ok = fresh.c_p == *expected;
        if (*out.held_out_ok) {
            out.samples.pop_back();  // confirmation stays out of the reconstruction set
            out.log.push_back("confirmed at p=" + std::to_string(q));
            return out;
        }
        out.log.push_back("candidate " + out.value->get_str() + " rejected at p=" +
                          std::to_string(q));
        if (fixed_set || static_cast<int>(out.samples.size()) >= kMaxSamples) return out;
        out.extended = true;
    }
}

}
