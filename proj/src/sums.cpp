#include "conglab/sums.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>

namespace conglab {

SignPattern make_pattern(int parts, std::vector<int> negated) {
    if (parts < 1) throw Error("sign pattern needs at least one part");
    std::sort(negated.begin(), negated.end());
    negated.erase(std::unique(negated.begin(), negated.end()), negated.end());
    for (int pos : negated)
        if (pos < 1 || pos > parts)
            throw Error("negated position " + std::to_string(pos) + " outside 1.." +
                        std::to_string(parts));
    SignPattern pat;
    pat.parts = parts;
    pat.negated = std::move(negated);
    return pat;
}

namespace {

uint64_t mulmod64(uint64_t a, uint64_t b, uint64_t m) {
    return static_cast<uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

// a^-1 mod m for gcd(a, m) = 1
uint64_t invmod64(uint64_t a, uint64_t m) {
    int64_t t = 0, newt = 1;
    int64_t r = static_cast<int64_t>(m), newr = static_cast<int64_t>(a % m);
    while (newr != 0) {
        int64_t q = r / newr;
        int64_t tmp = t - q * newt;
        t = newt;
        newt = tmp;
        tmp = r - q * newr;
        r = newr;
        newr = tmp;
    }
    if (t < 0) t += static_cast<int64_t>(m);
    return static_cast<uint64_t>(t);
}

// Additions stay below 2^64 as long as the modulus is below 2^63, which is
// the word-path admission test.
struct WordRing {
    using value_type = uint64_t;
    uint64_t m;
    uint64_t p;
    value_type zero() const { return 0; }
    value_type one() const { return 1 % m; }
    bool is_zero(value_type v) const { return v == 0; }
    value_type add(value_type a, value_type b) const {
        value_type s = a + b;
        return s >= m ? s - m : s;
    }
    value_type sub(value_type a, value_type b) const { return a >= b ? a - b : a + m - b; }
    value_type neg(value_type a) const { return a == 0 ? 0 : m - a; }
    value_type mul(value_type a, value_type b) const { return mulmod64(a, b, m); }
    bool index_coprime(long i) const { return static_cast<uint64_t>(i) % p != 0; }
    // inv[i] = 0 marks p | i; 0 is never a legitimate inverse
    std::vector<value_type> inverse_table(long n) const {
        std::vector<value_type> inv(static_cast<size_t>(n) + 1, 0);
        for (long i = 1; i <= n; ++i)
            if (index_coprime(i)) inv[i] = invmod64(static_cast<uint64_t>(i) % m, m);
        return inv;
    }
};

struct BigRing {
    using value_type = mpz_class;
    mpz_class m;
    mpz_class p;
    value_type zero() const { return mpz_class(0); }
    value_type one() const { return mpz_class(1); }
    bool is_zero(const value_type& v) const { return v == 0; }
    value_type add(const value_type& a, const value_type& b) const {
        value_type s = a + b;
        if (s >= m) s -= m;
        return s;
    }
    value_type sub(const value_type& a, const value_type& b) const {
        value_type s = a - b;
        if (s < 0) s += m;
        return s;
    }
    value_type neg(const value_type& a) const { return a == 0 ? a : value_type(m - a); }
    value_type mul(const value_type& a, const value_type& b) const {
        value_type r = a * b;
        mpz_fdiv_r(r.get_mpz_t(), r.get_mpz_t(), m.get_mpz_t());
        return r;
    }
    std::vector<value_type> inverse_table(long n) const {
        std::vector<value_type> inv(static_cast<size_t>(n) + 1, mpz_class(0));
        mpz_class x;
        for (long i = 1; i <= n; ++i) {
            x = i;
            if (mpz_divisible_p(x.get_mpz_t(), p.get_mpz_t())) continue;
            mpz_class r;
            mpz_invert(r.get_mpz_t(), x.get_mpz_t(), m.get_mpz_t());
            inv[i] = r;
        }
        return inv;
    }
};

bool word_path_usable(const mpz_class& modulus) {
    return mpz_fits_ulong_p(modulus.get_mpz_t()) && modulus.get_ui() < (1ULL << 63);
}

void validate_sum_spec(const SumSpec& spec) {
    if (!spec.ring) throw Error("sum spec carries no ring");
    if (spec.parts < 2) throw Error("composition sums need at least two parts");
    if (spec.target < 1) throw Error("target must be positive");
    if (spec.pattern.parts != spec.parts)
        throw Error("sign pattern arity does not match the spec");
    for (int pos : spec.pattern.negated)
        if (pos < 1 || pos > spec.parts) throw Error("negated position outside the pattern");
}

void check_enumeration_budget(long base, int exponent, const EngineLimits& limits) {
    if (std::pow(static_cast<double>(base), exponent) > limits.enumeration_budget)
        throw BudgetExceededError("enumeration of ~" + std::to_string(base) + "^" +
                                  std::to_string(exponent) + " tuples exceeds the budget");
}

void check_series_target(long target, const EngineLimits& limits) {
    long cap = std::min(limits.target_cap, EngineLimits::target_hard_cap);
    if (target > cap)
        throw TargetTooLargeError("series target " + std::to_string(target) + " above cap " +
                                  std::to_string(cap));
}

template <class Ring>
struct NaiveRunner {
    const Ring& R;
    int parts;
    const std::vector<typename Ring::value_type>& inv;
    const std::vector<char>& negpos;  // negpos[t] for 0-based position t
    typename Ring::value_type acc;

    NaiveRunner(const Ring& r, int n, const std::vector<typename Ring::value_type>& i,
                const std::vector<char>& np)
        : R(r), parts(n), inv(i), negpos(np), acc(r.zero()) {}

    void rec(int idx, long rem, typename Ring::value_type prod, bool negate) {
        if (idx == parts - 1) {
            if (rem < 1 || R.is_zero(inv[rem])) return;  // p | last part
            auto v = R.mul(prod, inv[rem]);
            if (negate ^ (negpos[idx] && (rem & 1L)))
                acc = R.sub(acc, v);
            else
                acc = R.add(acc, v);
            return;
        }
        long reserve = parts - 1 - idx;
        bool flip = negpos[idx] != 0;
        for (long i = 1; i + reserve <= rem; ++i) {
            if (R.is_zero(inv[i])) continue;
            rec(idx + 1, rem - i, R.mul(prod, inv[i]), negate ^ (flip && (i & 1L)));
        }
    }
};

// Walks the same tree once while scoring every sign class: class c negates
// positions 1..c, so its sign at a leaf is the parity of the first c indices,
// tracked incrementally in par.
template <class Ring>
struct AllClassRunner {
    const Ring& R;
    int parts;
    const std::vector<typename Ring::value_type>& inv;
    std::vector<char> par;  // par[c] = parity of indices at positions 1..c
    std::vector<typename Ring::value_type> acc;

    AllClassRunner(const Ring& r, int n, const std::vector<typename Ring::value_type>& i)
        : R(r), parts(n), inv(i), par(static_cast<size_t>(n) + 1, 0),
          acc(static_cast<size_t>(n) + 1, r.zero()) {}

    void rec(int idx, long rem, typename Ring::value_type prod) {
        if (idx == parts - 1) {
            if (rem < 1 || R.is_zero(inv[rem])) return;
            par[parts] = static_cast<char>(par[parts - 1] ^ (rem & 1L));
            auto v = R.mul(prod, inv[rem]);
            for (int c = 0; c <= parts; ++c)
                acc[c] = par[c] ? R.sub(acc[c], v) : R.add(acc[c], v);
            return;
        }
        long reserve = parts - 1 - idx;
        for (long i = 1; i + reserve <= rem; ++i) {
            if (R.is_zero(inv[i])) continue;
            par[idx + 1] = static_cast<char>(par[idx] ^ (i & 1L));
            rec(idx + 1, rem - i, R.mul(prod, inv[i]));
        }
    }
};

template <class Ring>
typename Ring::value_type naive_impl(const Ring& R, int parts, long target,
                                     const std::vector<char>& negpos) {
    auto inv = R.inverse_table(target);
    NaiveRunner<Ring> runner(R, parts, inv, negpos);
    runner.rec(0, target, R.one(), false);
    return runner.acc;
}

template <class Ring>
typename Ring::value_type series_impl(const Ring& R, int parts, long target,
                                      const std::vector<char>& negpos) {
    using V = typename Ring::value_type;
    auto inv = R.inverse_table(target);
    // Only two distinct per-position factors exist: sum of x^i/i over coprime
    // i, with or without the alternating sign.
    bool any_neg = std::any_of(negpos.begin(), negpos.end(), [](char c) { return c != 0; });
    std::vector<V> minus;
    if (any_neg) {
        minus = inv;
        for (long i = 1; i <= target; i += 2)
            if (!R.is_zero(minus[i])) minus[i] = R.neg(minus[i]);
    }
    auto factor = [&](int t) -> const std::vector<V>& { return negpos[t] ? minus : inv; };

    std::vector<V> g = factor(0);
    for (int t = 1; t + 1 < parts; ++t) {
        const std::vector<V>& f = factor(t);
        std::vector<V> h(static_cast<size_t>(target) + 1, R.zero());
        // g is supported on [t, target] before this step; j outer keeps the
        // inner walk over f and h contiguous
        for (long j = t; j < target; ++j) {
            if (R.is_zero(g[j])) continue;
            const V gj = g[j];
            for (long i = 1; i <= target - j; ++i) {
                if (R.is_zero(f[i])) continue;
                h[j + i] = R.add(h[j + i], R.mul(gj, f[i]));
            }
        }
        g.swap(h);
    }
    // only the target coefficient of the final product is wanted
    const std::vector<V>& f = factor(parts - 1);
    V acc = R.zero();
    for (long j = parts - 1; j < target; ++j) {
        if (R.is_zero(g[j]) || R.is_zero(f[target - j])) continue;
        acc = R.add(acc, R.mul(g[j], f[target - j]));
    }
    return acc;
}

std::vector<char> negation_mask(const SignPattern& pattern) {
    std::vector<char> mask(static_cast<size_t>(pattern.parts), 0);
    for (int pos : pattern.negated) mask[pos - 1] = 1;
    return mask;
}

template <class Impl>
Residue run_in_ring(const SumSpec& spec, const EngineLimits& limits, Impl&& impl) {
    auto mask = negation_mask(spec.pattern);
    if (!limits.force_generic && word_path_usable(spec.ring->modulus)) {
        WordRing R{spec.ring->modulus.get_ui(), spec.ring->p.get_ui()};
        return Residue(mpz_class(impl(R, spec.parts, spec.target, mask)), spec.ring);
    }
    BigRing R{spec.ring->modulus, spec.ring->p};
    return Residue(impl(R, spec.parts, spec.target, mask), spec.ring);
}

}  // namespace

Residue signed_sum_naive(const SumSpec& spec, const EngineLimits& limits) {
    validate_sum_spec(spec);
    check_enumeration_budget(spec.target, spec.parts - 1, limits);
    return run_in_ring(spec, limits, [](const auto& R, int n, long N, const auto& mask) {
        return naive_impl(R, n, N, mask);
    });
}

Residue signed_sum_series(const SumSpec& spec, const EngineLimits& limits) {
    validate_sum_spec(spec);
    check_series_target(spec.target, limits);
    return run_in_ring(spec, limits, [](const auto& R, int n, long N, const auto& mask) {
        return series_impl(R, n, N, mask);
    });
}

std::vector<Residue> signed_sum_all_classes(int parts, long target, const RingPtr& ring,
                                            const EngineLimits& limits) {
    SumSpec spec{parts, target, make_pattern(parts, {}), ring};
    validate_sum_spec(spec);
    check_enumeration_budget(target, parts - 1, limits);
    std::vector<Residue> out;
    out.reserve(static_cast<size_t>(parts) + 1);
    if (!limits.force_generic && word_path_usable(ring->modulus)) {
        WordRing R{ring->modulus.get_ui(), ring->p.get_ui()};
        auto inv = R.inverse_table(target);
        AllClassRunner<WordRing> runner(R, parts, inv);
        runner.rec(0, target, R.one());
        for (auto v : runner.acc) out.emplace_back(mpz_class(v), ring);
    } else {
        BigRing R{ring->modulus, ring->p};
        auto inv = R.inverse_table(target);
        AllClassRunner<BigRing> runner(R, parts, inv);
        runner.rec(0, target, R.one());
        for (const auto& v : runner.acc) out.emplace_back(v, ring);
    }
    return out;
}

mpq_class signed_sum_exact(int parts, long target, const mpz_class& p, const SignPattern& pattern,
                           const EngineLimits& limits) {
    if (parts < 2) throw Error("composition sums need at least two parts");
    if (pattern.parts != parts) throw Error("sign pattern arity does not match");
    if (target < 1) throw Error("target must be positive");
    check_enumeration_budget(target, parts - 1, limits);
    auto mask = negation_mask(pattern);
    mpq_class acc(0);
    auto coprime = [&](long i) { return !mpz_divisible_p(mpz_class(i).get_mpz_t(), p.get_mpz_t()); };
    std::function<void(int, long, const mpz_class&, bool)> rec = [&](int idx, long rem,
                                                                    const mpz_class& den,
                                                                    bool negate) {
        if (idx == parts - 1) {
            if (rem < 1 || !coprime(rem)) return;
            mpq_class term(1);
            term /= mpq_class(den * rem);
            if (negate ^ (mask[idx] && (rem & 1L))) term = -term;
            acc += term;
            return;
        }
        long reserve = parts - 1 - idx;
        for (long i = 1; i + reserve <= rem; ++i) {
            if (!coprime(i)) continue;
            rec(idx + 1, rem - i, mpz_class(den * i), negate ^ (mask[idx] && (i & 1L)));
        }
    };
    rec(0, target, mpz_class(1), false);
    return acc;
}

// ---- chains ----

namespace {

void validate_chain_spec(const ChainSpec& spec) {
    if (spec.depth < 2) throw Error("chain depth must be >= 2");
    if (spec.bound < 1) throw Error("chain bound must be >= 1");
    if (spec.precision < 1) throw Error("chain precision must be >= 1");
    if (spec.p == 2 || !is_probable_prime(spec.p))
        throw Error("chain sums need an odd prime, got " + spec.p.get_str());
}

}  // namespace

mpq_class chain_sum_exact(int depth, long bound, const mpz_class& p, const EngineLimits& limits) {
    ChainSpec spec{depth, bound, p, 1};
    validate_chain_spec(spec);
    check_enumeration_budget(bound, depth, limits);
    auto coprime = [&](long x) { return !mpz_divisible_p(mpz_class(x).get_mpz_t(), p.get_mpz_t()); };
    mpq_class acc(0);
    std::function<void(int, long, const mpz_class&)> rec = [&](int level, long last,
                                                               const mpz_class& den) {
        if (level == depth) {
            mpq_class term(1);
            term /= mpq_class(den);
            acc += term;
            return;
        }
        // leave room for the remaining depth - level - 1 indices
        for (long u = last + 1; u <= bound - (depth - level - 1); ++u) {
            if (level == 0 ? !coprime(u) : !coprime(u - last)) continue;
            if (level == depth - 1 && !coprime(u)) continue;
            rec(level + 1, u, mpz_class(den * u));
        }
    };
    rec(0, 0, mpz_class(1));
    return acc;
}

namespace {

PAdicScalar rational_to_padic(const mpq_class& q, const mpz_class& p, long prec) {
    if (q == 0) return PAdicScalar::zero(p, prec);
    // Valuation first: nonzero scalars must be known to at least one digit,
    // but an arithmetic result at or above p^prec is simply zero at this
    // precision rather than a construction error.
    mpz_class num(q.get_num()), den(q.get_den());
    long val = 0;
    while (mpz_divisible_p(num.get_mpz_t(), p.get_mpz_t())) {
        mpz_divexact(num.get_mpz_t(), num.get_mpz_t(), p.get_mpz_t());
        ++val;
    }
    while (mpz_divisible_p(den.get_mpz_t(), p.get_mpz_t())) {
        mpz_divexact(den.get_mpz_t(), den.get_mpz_t(), p.get_mpz_t());
        --val;
    }
    if (val >= prec) return PAdicScalar::zero(p, prec);
    return PAdicScalar::from_rational(mpz_class(q.get_num()), mpz_class(q.get_den()), p, prec);
}

PAdicScalar chain_series(const ChainSpec& spec, const EngineLimits& limits) {
    check_series_target(spec.bound, limits);
    const mpz_class& p = spec.p;
    long N = spec.bound;
    // headroom for the interior divisions by multiples of p
    long vmax = 0;
    for (mpz_class q = p; q <= N; q *= p) ++vmax;
    long work = spec.precision + static_cast<long>(spec.depth - 1) * vmax;
    auto coprime = [&](long x) { return !mpz_divisible_p(mpz_class(x).get_mpz_t(), p.get_mpz_t()); };

    std::vector<PAdicScalar> g;
    g.reserve(static_cast<size_t>(N) + 1);
    for (long v = 0; v <= N; ++v) {
        if (v >= 1 && coprime(v))
            g.push_back(PAdicScalar::from_rational(1, v, p, work));
        else
            g.push_back(PAdicScalar::zero(p, work));
    }
    for (int t = 2; t <= spec.depth; ++t) {
        std::vector<PAdicScalar> h;
        h.reserve(static_cast<size_t>(N) + 1);
        for (long v = 0; v < t; ++v) h.push_back(PAdicScalar::zero(p, work));
        for (long v = t; v <= N; ++v) {
            PAdicScalar acc = PAdicScalar::zero(p, work);
            for (long w = t - 1; w < v; ++w) {
                if (!coprime(v - w)) continue;
                acc = padic_add(acc, g[w]);
            }
            h.push_back(padic_div_exact(acc, v));
        }
        g.swap(h);
    }
    PAdicScalar total = PAdicScalar::zero(p, work);
    for (long v = spec.depth; v <= N; ++v) {
        if (!coprime(v)) continue;  // the last chain index must be coprime
        total = padic_add(total, g[v]);
    }
    if (total.precision() < spec.precision)
        throw PrecisionExhaustedError("chain series ended below the requested precision");
    return total;
}

}  // namespace

PAdicScalar chain_sum(const ChainSpec& spec, Engine engine, const EngineLimits& limits) {
    validate_chain_spec(spec);
    if (engine == Engine::naive) {
        mpq_class q = chain_sum_exact(spec.depth, spec.bound, spec.p, limits);
        return rational_to_padic(q, spec.p, spec.precision);
    }
    return chain_series(spec, limits);
}

// ---- distinct-index sums ----

Residue power_sum(int alpha, SumRange range, const RingPtr& ring) {
    if (alpha < 1) throw Error("exponent must be >= 1");
    if (!ring) throw Error("power sum carries no ring");
    mpz_class bound = range == SumRange::upto_p_minus_1 ? mpz_class(ring->p - 1)
                                                        : mpz_class(2 * ring->p);
    if (bound < 1) throw RangeEmptyError("summation range is empty");
    Residue acc(0, ring);
    for (mpz_class l = 1; l <= bound; ++l) {
        if (mpz_divisible_p(l.get_mpz_t(), ring->p.get_mpz_t())) continue;
        acc = acc + inv(Residue(l, ring)).pow(static_cast<unsigned long>(alpha));
    }
    return acc;
}

Residue distinct_sum(const DistinctSumSpec& spec) {
    if (!spec.ring) throw Error("distinct sum carries no ring");
    int n = static_cast<int>(spec.alphas.size());
    if (n < 1 || n > 4)
        throw UnsupportedArityError("distinct sums support 1..4 indices, got " + std::to_string(n));
    long weight = 0;
    for (int a : spec.alphas) {
        if (a < 1) throw Error("exponents must be >= 1");
        weight += a;
    }
    if (mpz_class(weight) > spec.ring->p - 3)
        throw Error("total exponent weight " + std::to_string(weight) + " above p-3");

    std::map<int, Residue> power_cache;
    auto P = [&](int a) {
        auto it = power_cache.find(a);
        if (it == power_cache.end())
            it = power_cache.emplace(a, power_sum(a, spec.range, spec.ring)).first;
        return it->second;
    };

    // Inclusion-exclusion over set partitions: colliding indices merge into
    // blocks, each block B contributing (-1)^(|B|-1) (|B|-1)! P(sum of its
    // exponents). Partitions are walked as restricted growth strings.
    Residue total(0, spec.ring);
    std::vector<int> assign(static_cast<size_t>(n), 0);
    std::function<void(int, int)> walk = [&](int i, int used) {
        if (i == n) {
            std::vector<int> block_weight(static_cast<size_t>(used), 0);
            std::vector<int> block_size(static_cast<size_t>(used), 0);
            for (int t = 0; t < n; ++t) {
                block_weight[assign[t]] += spec.alphas[t];
                block_size[assign[t]] += 1;
            }
            long w = 1;
            Residue term(1, spec.ring);
            for (int b = 0; b < used; ++b) {
                for (int f = 2; f < block_size[b]; ++f) w *= f;  // (|B|-1)!
                if (block_size[b] % 2 == 0) w = -w;              // (-1)^(|B|-1)
                term = term * P(block_weight[b]);
            }
            total = total + Residue(w, spec.ring) * term;
            return;
        }
        for (int c = 0; c <= used; ++c) {
            assign[i] = c;
            walk(i + 1, std::max(used, c + 1));
        }
    };
    walk(0, 0);
    return total;
}

double composition_count(int parts, long target) {
    if (parts < 1 || target < parts) return 0.0;
    double c = 1.0;
    for (int i = 1; i < parts; ++i) c = c * static_cast<double>(target - i) / i;
    return c;
}

}  // namespace conglab
