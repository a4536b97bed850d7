#include "conglab/claims.hpp"

#include "conglab/bernoulli.hpp"
#include "conglab/errors.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <mutex>
#include <set>
#include <thread>

namespace conglab {

namespace {

mpq_class rat(long num, long den = 1) {
    mpq_class q(num, den);
    q.canonicalize();
    return q;
}

mpz_class pow_pz(const mpz_class& p, long e) {
    mpz_class out;
    mpz_pow_ui(out.get_mpz_t(), p.get_mpz_t(), static_cast<unsigned long>(e));
    return out;
}

void require_odd_prime(const mpz_class& p) {
    if (p <= 2 || mpz_even_p(p.get_mpz_t())) throw EvenPrimeError("p must be an odd prime");
    if (!is_probable_prime(p)) throw NotPrimeError("p must be an odd prime");
}

const ClaimBranch* branch_for(const CongruenceClaim& claim, long r) {
    for (const auto& b : claim.branches)
        if (r >= b.r_lo && (b.r_hi == 0 || r <= b.r_hi)) return &b;
    return nullptr;
}

// coeff * p^p_power * B(index) in Z/p^e.  When p divides the coefficient
// denominator the product only makes sense assembled over Q first; the two
// routes agree whenever both are defined.
Residue assemble_rhs(const mpq_class& coeff, long p_power, long index, const RingPtr& ring,
                     bool force_exact) {
    if (index < 0) throw Error("negative Bernoulli index in right-hand side");
    bool p_divides_den = mpz_divisible_p(coeff.get_den().get_mpz_t(), ring->p.get_mpz_t()) != 0;
    if (p_divides_den || force_exact) {
        mpq_class value = coeff * bernoulli_exact(index);
        value *= mpq_class(pow_pz(ring->p, p_power));
        return from_rational(value.get_num(), value.get_den(), ring);
    }
    Residue b = bernoulli_residue(index, ring);
    Residue scale = from_rational(coeff.get_num(), coeff.get_den(), ring);
    return scale * b * Residue(ring->p, ring).pow(static_cast<unsigned long>(p_power));
}

double ms_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
        .count();
}

}  // namespace

mpq_class CoeffPoly::at(long m) const {
    mpq_class acc = 0;
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * m + *it;
    return acc;
}

CoeffPoly constant_coeff(const mpq_class& value) { return CoeffPoly{{value}}; }

const std::vector<CongruenceClaim>& catalog() {
    static const std::vector<CongruenceClaim> entries = [] {
        std::vector<CongruenceClaim> v;

        {
            CongruenceClaim c;
            c.id = "alt3_2pr";
            c.parts = 3;
            c.doubler = 2;
            c.lhs = {{1, {1}}};
            c.branches = {{1, 0, constant_coeff(1), {1, -1}, 3, {1, 0}}};
            v.push_back(std::move(c));
        }
        {
            CongruenceClaim c;
            c.id = "alt3_pr";
            c.parts = 3;
            c.doubler = 1;
            c.lhs = {{1, {1}}};
            c.branches = {{1, 0, constant_coeff(rat(1, 2)), {1, -1}, 3, {1, 0}}};
            v.push_back(std::move(c));
        }
        {
            CongruenceClaim c;
            c.id = "mix4_2pr";
            c.parts = 4;
            c.doubler = 2;
            c.p_min = 5;
            c.lhs = {{4, {1}}, {3, {1, 2}}};
            c.branches = {{1, 1, constant_coeff(rat(216, 5)), {0, 1}, 5, {0, 2}},
                          {2, 0, constant_coeff(rat(36, 5)), {1, 0}, 5, {1, 1}}};
            c.note = "combined four-slot sums; the first power splits off its own branch";
            v.push_back(std::move(c));
        }
        {
            CongruenceClaim c;
            c.id = "mix5_2pr";
            c.parts = 5;
            c.doubler = 2;
            c.p_min = 7;
            c.lhs = {{1, {1}}, {2, {1, 2}}};
            c.branches = {{1, 1, constant_coeff(12), {0, 0}, 5, {0, 1}},
                          {2, 0, constant_coeff(6), {1, -1}, 5, {1, 0}}};
            v.push_back(std::move(c));
        }
        {
            CongruenceClaim c;
            c.id = "sum3_mpr";
            c.parts = 3;
            c.doubler = 1;
            c.uses_m = true;
            c.lhs = {{1, {}}};
            c.branches = {{1, 0, CoeffPoly{{0, -2}}, {1, -1}, 3, {1, 0}}};
            c.note = "the multiplier need not be coprime to p here";
            v.push_back(std::move(c));
        }
        {
            CongruenceClaim c;
            c.id = "dist_p";
            c.p_min = 5;
            c.family = DistinctFamily{SumRange::upto_p_minus_1, 1, rat(1, 2)};
            c.note = "distinct indices below p";
            v.push_back(std::move(c));
        }
        {
            CongruenceClaim c;
            c.id = "dist_2p";
            c.p_min = 5;
            c.family = DistinctFamily{SumRange::upto_2p_coprime, 2, 2};
            c.note = "distinct indices below 2p and coprime to p";
            v.push_back(std::move(c));
        }
        {
            CongruenceClaim c;
            c.id = "sum4_2p";
            c.parts = 4;
            c.doubler = 2;
            c.p_min = 5;
            c.r_max = 1;
            c.lhs = {{1, {}}};
            c.branches = {{1, 1, constant_coeff(-48), {0, 1}, 5, {0, 2}}};
            v.push_back(std::move(c));
        }
        {
            CongruenceClaim c;
            c.id = "sum4_2pr_hi";
            c.parts = 4;
            c.doubler = 2;
            c.p_min = 5;
            c.r_min = 2;
            c.lhs = {{1, {}}};
            c.branches = {{2, 0, constant_coeff(rat(-48, 5)), {1, 0}, 5, {1, 1}}};
            c.note = "picks up where sum4_2p stops; the first power behaves differently";
            v.push_back(std::move(c));
        }
        {
            CongruenceClaim c;
            c.id = "sum5_mpr";
            c.parts = 5;
            c.doubler = 1;
            c.uses_m = true;
            c.requires_m_coprime = true;
            c.p_min = 7;
            c.lhs = {{1, {}}};
            c.branches = {{1, 1, CoeffPoly{{0, -20, 0, -4}}, {0, 0}, 5, {0, 1}},
                          {2, 0, CoeffPoly{{0, -20}}, {1, -1}, 5, {1, 0}}};
            c.note = "cubic multiplier term only at the first power";
            v.push_back(std::move(c));
        }
        {
            CongruenceClaim c;
            c.id = "sum3_p3";
            c.parts = 3;
            c.doubler = 1;
            c.r_max = 1;
            c.lhs = {{1, {}}};
            c.branches = {{1, 1, constant_coeff(-2), {0, 0}, 3, {0, 1}}};
            c.note = "same statement as sum3_p but already valid at p = 3";
            v.push_back(std::move(c));
        }
        {
            CongruenceClaim c;
            c.id = "sum2_p";
            c.parts = 2;
            c.doubler = 1;
            c.p_min = 5;
            c.r_max = 1;
            c.lhs = {{1, {}}};
            c.branches = {{1, 1, constant_coeff(rat(-2, 3)), {0, 1}, 3, {0, 2}}};
            v.push_back(std::move(c));
        }
        {
            CongruenceClaim c;
            c.id = "sum3_p";
            c.parts = 3;
            c.doubler = 1;
            c.p_min = 5;
            c.r_max = 1;
            c.lhs = {{1, {}}};
            c.branches = {{1, 1, constant_coeff(-2), {0, 0}, 3, {0, 1}}};
            c.note = "see sum3_p3 for the p = 3 case";
            v.push_back(std::move(c));
        }
        {
            CongruenceClaim c;
            c.id = "sum4_p";
            c.parts = 4;
            c.doubler = 1;
            c.p_min = 7;
            c.r_max = 1;
            c.lhs = {{1, {}}};
            c.branches = {{1, 1, constant_coeff(rat(-48, 5)), {0, 1}, 5, {0, 2}}};
            v.push_back(std::move(c));
        }
        {
            CongruenceClaim c;
            c.id = "sum5_p";
            c.parts = 5;
            c.doubler = 1;
            c.p_min = 7;
            c.r_max = 1;
            c.lhs = {{1, {}}};
            c.branches = {{1, 1, constant_coeff(-24), {0, 0}, 5, {0, 1}}};
            v.push_back(std::move(c));
        }
        {
            CongruenceClaim c;
            c.id = "sum6_p";
            c.parts = 6;
            c.doubler = 1;
            c.p_min = 11;
            c.r_max = 1;
            c.lhs = {{1, {}}};
            c.branches = {{1, 1, constant_coeff(rat(-2160, 7)), {0, 1}, 7, {0, 2}}};
            v.push_back(std::move(c));
        }
        {
            CongruenceClaim c;
            c.id = "sum2_pr";
            c.parts = 2;
            c.doubler = 1;
            c.p_min = 5;
            c.lhs = {{1, {}}};
            c.branches = {{1, 0, constant_coeff(rat(-2, 3)), {1, 0}, 3, {1, 1}}};
            c.note = "fails numerically at p = 3, hence the floor of 5";
            v.push_back(std::move(c));
        }
        {
            CongruenceClaim c;
            c.id = "sum4_pr_hi";
            c.parts = 4;
            c.doubler = 1;
            c.p_min = 5;
            c.r_min = 2;
            c.lhs = {{1, {}}};
            c.branches = {{2, 0, constant_coeff(rat(-24, 5)), {1, 0}, 5, {1, 1}}};
            v.push_back(std::move(c));
        }
        {
            CongruenceClaim c;
            c.id = "alt3_2mpr";
            c.parts = 3;
            c.doubler = 2;
            c.uses_m = true;
            c.requires_m_coprime = true;
            c.lhs = {{1, {1}}};
            c.branches = {{1, 0, CoeffPoly{{0, 1}}, {1, -1}, 3, {1, 0}}};
            v.push_back(std::move(c));
        }
        {
            CongruenceClaim c;
            c.id = "alt3_mpr";
            c.parts = 3;
            c.doubler = 1;
            c.uses_m = true;
            c.requires_m_coprime = true;
            c.lhs = {{1, {1}}};
            c.branches = {{1, 0, CoeffPoly{{0, rat(1, 2)}}, {1, -1}, 3, {1, 0}}};
            v.push_back(std::move(c));
        }

        return v;
    }();
    return entries;
}

const CongruenceClaim& find_claim(const std::string& id) {
    for (const auto& c : catalog())
        if (c.id == id) return c;
    throw Error("unknown claim id: " + id);
}

void validate_catalog() {
    std::set<std::string> seen;
    for (const auto& c : catalog()) {
        if (c.id.empty()) throw Error("catalog entry without an id");
        if (!seen.insert(c.id).second) throw Error("duplicate claim id: " + c.id);
        if (c.family) {
            if (c.parts != 0 || !c.lhs.empty() || !c.branches.empty())
                throw Error(c.id + ": distinct family must not carry composition data");
            continue;
        }
        if (c.parts < 2) throw Error(c.id + ": composition length below 2");
        if (c.doubler != 1 && c.doubler != 2) throw Error(c.id + ": doubler must be 1 or 2");
        if (c.lhs.empty()) throw Error(c.id + ": no left-hand terms");
        for (const auto& t : c.lhs) {
            if (t.coeff == 0) throw Error(c.id + ": zero left-hand coefficient");
            make_pattern(c.parts, t.negated);  // throws if slots are out of range
        }
        if (c.branches.empty()) throw Error(c.id + ": no branches");
        long expect = c.r_min;
        for (const auto& b : c.branches) {
            if (b.r_lo != expect) throw Error(c.id + ": branch gap or overlap");
            if (b.coeff.coeffs.empty()) throw Error(c.id + ": branch without coefficient");
            if (b.bernoulli_offset < 2) throw Error(c.id + ": Bernoulli offset below 2");
            long probe = b.r_lo;
            if (b.p_power.at(probe) < 0) throw Error(c.id + ": negative power of p");
            if (b.modulus_exp.at(probe) < 1) throw Error(c.id + ": modulus exponent below 1");
            if (b.p_power.at(probe) >= b.modulus_exp.at(probe) + 1)
                throw Error(c.id + ": power of p exceeds the modulus");
            if (b.r_hi == 0) {
                expect = -1;
                break;
            }
            expect = b.r_hi + 1;
        }
        if (expect == -1) {
            if (c.r_max != 0) throw Error(c.id + ": unbounded branch under bounded r range");
        } else if (c.r_max == 0 || expect != c.r_max + 1) {
            throw Error(c.id + ": branches do not tile the r range");
        }
    }
}

Residue claim_rhs(const CongruenceClaim& claim, const mpz_class& p, long r, long m,
                  bool force_exact_rational) {
    if (claim.family) throw Error(claim.id + ": distinct family has no branch table");
    const ClaimBranch* br = branch_for(claim, r);
    if (br == nullptr) throw InapplicableError(claim.id + ": no branch covers this exponent");
    if (!p.fits_slong_p()) throw TargetTooLargeError("p out of supported range");
    long e = br->modulus_exp.at(r);
    RingPtr ring = make_ring(p, static_cast<int>(e));
    long index = p.get_si() - br->bernoulli_offset;
    return assemble_rhs(br->coeff.at(m), br->p_power.at(r), index, ring, force_exact_rational);
}

VerificationReport evaluate_claim(const CongruenceClaim& claim, const mpz_class& p, long r,
                                  long m, EngineChoice engine, const EngineLimits& limits) {
    if (claim.family) {
        if (r < 1 || r > (1 << 20)) throw BadExponentError("r out of range");
        if (m != 1) {
            VerificationReport rep;
            rep.claim_id = claim.id;
            rep.p = p;
            rep.r = r;
            rep.m = m;
            rep.engine = "inapplicable";
            rep.detail = "statement has no multiplier";
            return rep;
        }
        return evaluate_distinct(claim, p, {static_cast<int>(r)});
    }

    if (r < 1) throw BadExponentError("r must be positive");
    if (m < 1) throw Error("m must be positive");
    require_odd_prime(p);

    VerificationReport rep;
    rep.claim_id = claim.id;
    rep.p = p;
    rep.r = r;
    rep.m = m;

    const ClaimBranch* br = branch_for(claim, r);
    if (br != nullptr) rep.modulus = pow_pz(p, br->modulus_exp.at(r));

    std::string why;
    if (p < claim.p_min)
        why = "needs p >= " + std::to_string(claim.p_min);
    else if (!claim.uses_m && m != 1)
        why = "statement has no multiplier";
    else if (claim.requires_m_coprime && gcd(mpz_class(m), p) != 1)
        why = "multiplier must be coprime to p";
    else if (br == nullptr)
        why = "no branch covers this exponent";
    if (!why.empty()) {
        rep.engine = "inapplicable";
        rep.detail = why;
        return rep;
    }

    mpz_class target_z = claim.doubler * mpz_class(m) * pow_pz(p, r);
    if (!target_z.fits_slong_p()) {
        rep.engine = "budget_exceeded";
        rep.detail = "target out of engine range";
        return rep;
    }
    long target = target_z.get_si();

    Engine used;
    switch (engine) {
        case EngineChoice::naive:
            used = Engine::naive;
            break;
        case EngineChoice::series:
            used = Engine::series;
            break;
        default:
            used = composition_count(claim.parts, target) <= limits.auto_naive_threshold
                       ? Engine::naive
                       : Engine::series;
            break;
    }

    auto t0 = std::chrono::steady_clock::now();
    try {
        RingPtr ring = make_ring(p, static_cast<int>(br->modulus_exp.at(r)));
        Residue lhs(mpz_class(0), ring);
        for (const auto& term : claim.lhs) {
            SumSpec spec{claim.parts, target, make_pattern(claim.parts, term.negated), ring};
            Residue part = used == Engine::naive ? signed_sum_naive(spec, limits)
                                                 : signed_sum_series(spec, limits);
            lhs = lhs + Residue(mpz_class(term.coeff), ring) * part;
        }
        Residue rhs = claim_rhs(claim, p, r, m, false);
        rep.lhs = lhs.value();
        rep.rhs = rhs.value();
        rep.verified = lhs == rhs;
        rep.engine = used == Engine::naive ? "naive" : "series";
    } catch (const BudgetExceededError& ex) {
        rep.engine = "budget_exceeded";
        rep.detail = ex.what();
    } catch (const TargetTooLargeError& ex) {
        rep.engine = "budget_exceeded";
        rep.detail = ex.what();
    } catch (const IndexTooLargeError& ex) {
        rep.engine = "budget_exceeded";
        rep.detail = ex.what();
    }
    rep.elapsed_ms = ms_since(t0);
    return rep;
}

VerificationReport evaluate_claim(const std::string& id, const mpz_class& p, long r, long m,
                                  EngineChoice engine, const EngineLimits& limits) {
    return evaluate_claim(find_claim(id), p, r, m, engine, limits);
}

VerificationReport evaluate_distinct(const CongruenceClaim& claim, const mpz_class& p,
                                     const std::vector<int>& alphas) {
    if (!claim.family) throw Error(claim.id + ": not a distinct-index family");
    if (alphas.empty()) throw Error("empty exponent tuple");
    for (int a : alphas)
        if (a < 1) throw Error("exponents must be positive");
    require_odd_prime(p);

    VerificationReport rep;
    rep.claim_id = claim.id;
    rep.p = p;
    rep.alphas = alphas;
    std::sort(rep.alphas.begin(), rep.alphas.end());

    long salpha = 0;
    for (int a : rep.alphas) salpha += a;
    rep.r = salpha;

    int n = static_cast<int>(rep.alphas.size());
    bool even = salpha % 2 == 0;
    long e = even ? 2 : 3;
    rep.modulus = pow_pz(p, e);

    if (p < claim.p_min) {
        rep.engine = "inapplicable";
        rep.detail = "needs p >= " + std::to_string(claim.p_min);
        return rep;
    }
    if (p < salpha + 3) {
        rep.engine = "inapplicable";
        rep.detail = "needs exponent sum <= p - 3";
        return rep;
    }

    auto t0 = std::chrono::steady_clock::now();
    RingPtr ring = make_ring(p, static_cast<int>(e));
    Residue lhs = distinct_sum({rep.alphas, claim.family->range, ring});

    mpq_class fact = 1;
    for (int i = 2; i < n; ++i) fact *= i;
    mpq_class coeff;
    long k;
    long a;
    if (even) {
        coeff = claim.family->even_scale * fact * mpq_class(salpha, salpha + 1);
        if (n % 2 == 0) coeff = -coeff;
        k = salpha + 1;
        a = 1;
    } else {
        coeff = claim.family->odd_scale * fact * mpq_class(salpha * (salpha + 1), salpha + 2);
        if (n % 2 == 1) coeff = -coeff;
        k = salpha + 2;
        a = 2;
    }
    coeff.canonicalize();
    Residue rhs = assemble_rhs(coeff, a, p.get_si() - k, ring, false);

    rep.lhs = lhs.value();
    rep.rhs = rhs.value();
    rep.verified = lhs == rhs;
    rep.engine = "direct";
    rep.elapsed_ms = ms_since(t0);
    return rep;
}

namespace {

struct SuiteInstance {
    const CongruenceClaim* claim = nullptr;
    long p = 0;
    long r = 0;
    long m = 1;
    std::vector<int> alphas;
};

std::vector<long> odd_primes_upto(long bound) {
    std::vector<long> out;
    for (long n = 3; n <= bound; n += 2)
        if (is_probable_prime(mpz_class(n))) out.push_back(n);
    return out;
}

std::vector<std::vector<int>> exponent_tuples(int max_len, long max_sum) {
    std::vector<std::vector<int>> out;
    std::vector<int> cur;
    auto walk = [&](auto&& self, int lo, long left) -> void {
        if (!cur.empty()) out.push_back(cur);
        if (static_cast<int>(cur.size()) == max_len) return;
        for (int a = lo; a <= left; ++a) {
            cur.push_back(a);
            self(self, a, left - a);
            cur.pop_back();
        }
    };
    walk(walk, 1, max_sum);
    return out;
}

}  // namespace

std::vector<VerificationReport> run_suite(const SuiteConfig& config) {
    std::vector<const CongruenceClaim*> selected;
    if (config.claim_ids.empty()) {
        for (const auto& c : catalog()) selected.push_back(&c);
    } else {
        for (const auto& id : config.claim_ids) selected.push_back(&find_claim(id));
    }

    std::vector<long> primes = odd_primes_upto(config.p_max);
    int tuple_len = std::min(config.distinct_parts_max, 4);
    std::vector<std::vector<int>> tuples = exponent_tuples(tuple_len, config.r_max);

    std::vector<SuiteInstance> instances;
    for (const CongruenceClaim* c : selected) {
        for (long p : primes) {
            if (c->family) {
                for (const auto& t : tuples) instances.push_back({c, p, 0, 1, t});
                continue;
            }
            for (long r = 1; r <= config.r_max; ++r) {
                if (c->uses_m) {
                    for (long m : config.m_values) instances.push_back({c, p, r, m, {}});
                } else {
                    instances.push_back({c, p, r, 1, {}});
                }
            }
        }
    }

    auto run_one = [&](const SuiteInstance& inst) {
        mpz_class p(inst.p);
        if (inst.claim->family) return evaluate_distinct(*inst.claim, p, inst.alphas);
        return evaluate_claim(*inst.claim, p, inst.r, inst.m, config.engine, config.limits);
    };

    std::vector<VerificationReport> out(instances.size());
    int jobs = std::max(1, config.jobs);
    if (jobs == 1 || instances.size() < 2) {
        for (size_t i = 0; i < instances.size(); ++i) out[i] = run_one(instances[i]);
    } else {
        std::atomic<size_t> next{0};
        std::exception_ptr failure;
        std::mutex failure_mu;
        auto worker = [&] {
            for (;;) {
                size_t i = next.fetch_add(1);
                if (i >= instances.size()) return;
                try {
                    out[i] = run_one(instances[i]);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(failure_mu);
                    if (!failure) failure = std::current_exception();
                }
            }
        };
        std::vector<std::thread> pool;
        for (int t = 0; t < jobs; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
        if (failure) std::rethrow_exception(failure);
    }

    std::sort(out.begin(), out.end(), [](const VerificationReport& a, const VerificationReport& b) {
        if (a.claim_id != b.claim_id) return a.claim_id < b.claim_id;
        if (a.p != b.p) return a.p < b.p;
        if (a.r != b.r) return a.r < b.r;
        if (a.m != b.m) return a.m < b.m;
        return a.alphas < b.alphas;
    });
    return out;
}

}
