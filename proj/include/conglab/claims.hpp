#pragma once

#include "conglab/modring.hpp"
#include "conglab/sums.hpp"

#include <optional>
#include <string>
#include <vector>

namespace conglab {

// Exponent that depends linearly on the power r appearing in the target, so
// one branch row can cover every r it applies to.
struct AffineInR {
    long slope = 0;
    long intercept = 0;

    long at(long r) const { return slope * r + intercept; }
};

// Rational polynomial in the multiplier m, degree at most 3.  coeffs[j]
// multiplies m^j.
struct CoeffPoly {
    std::vector<mpq_class> coeffs;

    mpq_class at(long m) const;
};

CoeffPoly constant_coeff(const mpq_class& value);

// One right-hand side shape, valid for r_lo <= r <= r_hi (r_hi == 0 means
// unbounded above).  The asserted statement is
//
//   sum of left-hand terms == coeff(m) * p^p_power(r) * B(p - bernoulli_offset)
//                                               (mod p^modulus_exp(r))
struct ClaimBranch {
    long r_lo = 1;
    long r_hi = 0;
    CoeffPoly coeff;
    AffineInR p_power;
    int bernoulli_offset = 0;
    AffineInR modulus_exp;
};

// One additive term on the left: an integer multiple of the signed
// composition sum with the listed slots negated.
struct LhsTerm {
    long coeff = 1;
    std::vector<int> negated;
};

// The distinct-index statements form a pair of families differing only in
// the index range and in how the two parity cases scale a shared base
// formula.  With n the tuple length and r the exponent sum:
//
//   even r:  scale * (-1)^(n-1) * (n-1)! * r/(r+1) * B(p-r-1) * p    mod p^2
//   odd r:   scale * (-1)^n * (n-1)! * r(r+1)/(r+2) * B(p-r-2) * p^2 mod p^3
struct DistinctFamily {
    SumRange range = SumRange::upto_p_minus_1;
    mpq_class even_scale;
    mpq_class odd_scale;
};

struct CongruenceClaim {
    std::string id;
    int parts = 0;            // composition length n; 0 for the distinct families
    int doubler = 1;          // target is doubler * m * p^r
    bool uses_m = false;
    bool requires_m_coprime = false;
    long p_min = 3;
    long r_min = 1;
    long r_max = 0;           // 0 = unbounded
    std::vector<LhsTerm> lhs;
    std::vector<ClaimBranch> branches;
    std::optional<DistinctFamily> family;
    std::string note;
};

const std::vector<CongruenceClaim>& catalog();
const CongruenceClaim& find_claim(const std::string& id);

// Structural pass over the whole catalog; throws Error on a malformed entry.
// Branches must tile r_min.. with no gap or overlap, left-hand patterns must
// fit the arity, and every exponent must stay legal on its branch.
void validate_catalog();

// One checked instance.  Skips keep verified empty and put the reason in
// engine ("inapplicable" or "budget_exceeded") plus detail; evaluated rows
// carry the engine that produced the left side.
struct VerificationReport {
    std::string claim_id;
    mpz_class p;
    long r = 0;
    long m = 1;
    std::vector<int> alphas;        // distinct-family rows only
    mpz_class modulus;              // 0 when no branch covers the instance
    std::optional<mpz_class> lhs;
    std::optional<mpz_class> rhs;
    std::optional<bool> verified;
    std::string engine;
    std::string detail;
    double elapsed_ms = 0.0;
};

enum class EngineChoice { automatic, naive, series };

// Right-hand side of a composition claim, reduced into Z/p^e for the branch
// covering r.  force_exact_rational assembles over Q and reduces once at the
// end; the default reduces Bernoulli numbers inside the ring when the
// coefficient denominator is a unit.  Both routes must agree.
Residue claim_rhs(const CongruenceClaim& claim, const mpz_class& p, long r, long m,
                  bool force_exact_rational = false);

// Evaluates one instance end to end and never throws for instances the
// statement excludes; those come back as skip records.  Engine failures
// (budget, target range) become budget_exceeded records.  Malformed input
// (m < 1, r < 1, composite p) throws.
VerificationReport evaluate_claim(const CongruenceClaim& claim, const mpz_class& p, long r,
                                  long m = 1, EngineChoice engine = EngineChoice::automatic,
                                  const EngineLimits& limits = {});
VerificationReport evaluate_claim(const std::string& id, const mpz_class& p, long r, long m = 1,
                                  EngineChoice engine = EngineChoice::automatic,
                                  const EngineLimits& limits = {});

// Distinct-family instance for an explicit exponent tuple.  r in the report
// is the exponent sum; the tuple itself lands in alphas.
VerificationReport evaluate_distinct(const CongruenceClaim& claim, const mpz_class& p,
                                     const std::vector<int>& alphas);

struct SuiteConfig {
    std::vector<std::string> claim_ids;   // empty = whole catalog
    long p_max = 13;
    long r_max = 2;
    std::vector<long> m_values = {1};
    int distinct_parts_max = 3;           // tuple length cap for the distinct pair
    EngineChoice engine = EngineChoice::automatic;
    EngineLimits limits;
    int jobs = 1;
};

// Every instance of the requested grid appears in the result, skips
// included; nothing is dropped silently.  Deterministic order
// (claim id, p, r, m, exponent tuple).
std::vector<VerificationReport> run_suite(const SuiteConfig& config);

}
