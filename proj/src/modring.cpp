#include "conglab/modring.hpp"

#include <sstream>
#include <utility>

namespace conglab {

namespace {

// n - 1 = d * 2^r with d odd
bool miller_rabin_witness(const mpz_class& n, const mpz_class& a, const mpz_class& d, unsigned long r) {
    mpz_class x;
    mpz_powm(x.get_mpz_t(), a.get_mpz_t(), d.get_mpz_t(), n.get_mpz_t());
    mpz_class nm1 = n - 1;
    if (x == 1 || x == nm1) return false;
    for (unsigned long i = 1; i < r; ++i) {
        x = (x * x) % n;
        if (x == nm1) return false;
    }
    return true;  // composite witness
}

}  // namespace

bool is_probable_prime(const mpz_class& n) {
    if (n < 2) return false;
    static const unsigned long small_primes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
    for (unsigned long q : small_primes) {
        if (n == q) return true;
        if (mpz_divisible_ui_p(n.get_mpz_t(), q)) return false;
    }
    if (mpz_sizeinbase(n.get_mpz_t(), 2) > 64)
        return mpz_probab_prime_p(n.get_mpz_t(), 32) > 0;
    // The twelve bases above are a deterministic test for every n < 2^64.
    mpz_class d = n - 1;
    unsigned long r = mpz_scan1(d.get_mpz_t(), 0);
    mpz_fdiv_q_2exp(d.get_mpz_t(), d.get_mpz_t(), r);
    for (unsigned long a : small_primes)
        if (miller_rabin_witness(n, mpz_class(a), d, r)) return false;
    return true;
}

RingPtr make_ring(const mpz_class& p, int s) {
    if (p == 2) throw EvenPrimeError("p = 2: rings here are odd prime powers");
    if (!is_probable_prime(p)) throw NotPrimeError("not a prime: " + p.get_str());
    if (s < 1) throw BadExponentError("exponent must be >= 1, got " + std::to_string(s));
    auto ring = std::make_shared<PrimePower>();
    ring->p = p;
    ring->s = s;
    mpz_pow_ui(ring->modulus.get_mpz_t(), p.get_mpz_t(), static_cast<unsigned long>(s));
    return ring;
}

Residue::Residue(mpz_class value, RingPtr ring) : v_(std::move(value)), ring_(std::move(ring)) {
    mpz_fdiv_r(v_.get_mpz_t(), v_.get_mpz_t(), ring_->modulus.get_mpz_t());
}

bool Residue::is_unit() const {
    mpz_class g;
    mpz_gcd(g.get_mpz_t(), v_.get_mpz_t(), ring_->p.get_mpz_t());
    return g == 1;
}

Residue Residue::operator-() const { return Residue(ring_->modulus - v_, ring_); }

Residue Residue::pow(unsigned long e) const {
    mpz_class r;
    mpz_powm_ui(r.get_mpz_t(), v_.get_mpz_t(), e, ring_->modulus.get_mpz_t());
    return Residue(std::move(r), ring_);
}

namespace {
void require_same_ring(const Residue& a, const Residue& b) {
    if (!a.ring() || !b.ring() || !a.ring()->same(*b.ring()))
        throw Error("residues from different rings");
}
}  // namespace

Residue operator+(const Residue& a, const Residue& b) {
    require_same_ring(a, b);
    return Residue(a.v_ + b.v_, a.ring_);
}

Residue operator-(const Residue& a, const Residue& b) {
    require_same_ring(a, b);
    return Residue(a.v_ - b.v_, a.ring_);
}

Residue operator*(const Residue& a, const Residue& b) {
    require_same_ring(a, b);
    return Residue(a.v_ * b.v_, a.ring_);
}

bool operator==(const Residue& a, const Residue& b) {
    require_same_ring(a, b);
    return a.v_ == b.v_;
}

Residue inv(const Residue& a) {
    mpz_class r;
    if (a.is_zero() || mpz_invert(r.get_mpz_t(), a.value().get_mpz_t(), a.modulus().get_mpz_t()) == 0)
        throw NonUnitError("not invertible mod " + a.modulus().get_str() + ": " + a.value().get_str());
    return Residue(std::move(r), a.ring());
}

Residue from_rational(const mpz_class& num, const mpz_class& den, const RingPtr& ring) {
    if (den == 0) throw NonUnitDenominatorError("zero denominator");
    mpz_class g;
    mpz_gcd(g.get_mpz_t(), den.get_mpz_t(), ring->p.get_mpz_t());
    if (g != 1)
        throw NonUnitDenominatorError("denominator " + den.get_str() + " shares a factor with " +
                                      ring->p.get_str());
    mpz_class dinv;
    mpz_invert(dinv.get_mpz_t(), den.get_mpz_t(), ring->modulus.get_mpz_t());
    return Residue(num * dinv, ring);
}

// ---- p-adic scalars ----

namespace {
mpz_class pow_p(const mpz_class& p, long e) {
    mpz_class r;
    mpz_pow_ui(r.get_mpz_t(), p.get_mpz_t(), static_cast<unsigned long>(e));
    return r;
}
}  // namespace

PAdicScalar PAdicScalar::zero(const mpz_class& p, long prec) {
    return PAdicScalar(p, 0, 0, prec, true);
}

PAdicScalar PAdicScalar::from_unit(const mpz_class& p, long val, const mpz_class& unit, long prec) {
    if (prec <= val)
        throw PrecisionExhaustedError("absolute precision " + std::to_string(prec) +
                                      " carries no information at valuation " + std::to_string(val));
    mpz_class m = pow_p(p, prec - val);
    mpz_class u;
    mpz_fdiv_r(u.get_mpz_t(), unit.get_mpz_t(), m.get_mpz_t());
    if (mpz_divisible_p(u.get_mpz_t(), p.get_mpz_t()))
        throw Error("unit part divisible by p");
    return PAdicScalar(p, val, std::move(u), prec, false);
}

PAdicScalar PAdicScalar::from_integer(const mpz_class& n, const mpz_class& p, long prec) {
    if (prec < 1) throw PrecisionExhaustedError("precision must be >= 1");
    mpz_class m = pow_p(p, prec);
    mpz_class v;
    mpz_fdiv_r(v.get_mpz_t(), n.get_mpz_t(), m.get_mpz_t());
    if (v == 0) return zero(p, prec);
    long val = static_cast<long>(mpz_remove(v.get_mpz_t(), v.get_mpz_t(), p.get_mpz_t()));
    return from_unit(p, val, v, prec);
}

PAdicScalar PAdicScalar::from_rational(const mpz_class& num, const mpz_class& den,
                                       const mpz_class& p, long prec) {
    if (den == 0) throw Error("zero denominator");
    if (num == 0) return zero(p, prec);
    mpz_class n = num, d = den;
    long vn = static_cast<long>(mpz_remove(n.get_mpz_t(), n.get_mpz_t(), p.get_mpz_t()));
    long vd = static_cast<long>(mpz_remove(d.get_mpz_t(), d.get_mpz_t(), p.get_mpz_t()));
    long val = vn - vd;
    if (prec <= val)
        throw PrecisionExhaustedError("rational has valuation " + std::to_string(val) +
                                      " at or above requested precision " + std::to_string(prec));
    mpz_class m = pow_p(p, prec - val);
    mpz_class dinv;
    mpz_invert(dinv.get_mpz_t(), d.get_mpz_t(), m.get_mpz_t());
    return from_unit(p, val, n * dinv, prec);
}

const mpz_class& PAdicScalar::unit() const {
    if (zero_) throw Error("zero-flagged scalar has no unit part");
    return unit_;
}

mpz_class PAdicScalar::integer_residue(long k) const {
    if (k > prec_) throw PrecisionExhaustedError("requested " + std::to_string(k) +
                                                 " digits, have " + std::to_string(prec_));
    mpz_class m = pow_p(p_, k);
    if (zero_) return 0;
    if (val_ < 0) throw Error("negative valuation, not an integer");
    mpz_class r = pow_p(p_, val_) * unit_;
    mpz_fdiv_r(r.get_mpz_t(), r.get_mpz_t(), m.get_mpz_t());
    return r;
}

std::string PAdicScalar::str() const {
    std::ostringstream os;
    if (zero_) {
        os << "O(" << p_ << "^" << prec_ << ")";
    } else {
        os << p_ << "^" << val_ << "*" << unit_ << " + O(" << p_ << "^" << prec_ << ")";
    }
    return os.str();
}

bool operator==(const PAdicScalar& a, const PAdicScalar& b) {
    if (a.p_ != b.p_ || a.prec_ != b.prec_ || a.zero_ != b.zero_) return false;
    if (a.zero_) return true;
    return a.val_ == b.val_ && a.unit_ == b.unit_;
}

PAdicScalar padic_add(const PAdicScalar& a, const PAdicScalar& b) {
    if (a.prime() != b.prime()) throw Error("p-adic scalars over different primes");
    const mpz_class& p = a.prime();
    long prec = std::min(a.precision(), b.precision());
    if (a.is_zero() && b.is_zero()) return PAdicScalar::zero(p, prec);
    if (a.is_zero() || b.is_zero()) {
        const PAdicScalar& x = a.is_zero() ? b : a;
        if (x.valuation() >= prec) return PAdicScalar::zero(p, prec);
        return PAdicScalar::from_unit(p, x.valuation(), x.unit(), prec);
    }
    long v0 = std::min(a.valuation(), b.valuation());
    if (v0 >= prec) return PAdicScalar::zero(p, prec);
    // lift both to integers scaled by p^-v0, combine mod p^(prec - v0)
    mpz_class m;
    mpz_pow_ui(m.get_mpz_t(), p.get_mpz_t(), static_cast<unsigned long>(prec - v0));
    mpz_class xa, xb;
    mpz_pow_ui(xa.get_mpz_t(), p.get_mpz_t(), static_cast<unsigned long>(a.valuation() - v0));
    mpz_pow_ui(xb.get_mpz_t(), p.get_mpz_t(), static_cast<unsigned long>(b.valuation() - v0));
    mpz_class sum = xa * a.unit() + xb * b.unit();
    mpz_fdiv_r(sum.get_mpz_t(), sum.get_mpz_t(), m.get_mpz_t());
    if (sum == 0) return PAdicScalar::zero(p, prec);
    long extra = static_cast<long>(mpz_remove(sum.get_mpz_t(), sum.get_mpz_t(), p.get_mpz_t()));
    long val = v0 + extra;
    if (val >= prec) return PAdicScalar::zero(p, prec);
    return PAdicScalar::from_unit(p, val, sum, prec);
}

PAdicScalar padic_mul(const PAdicScalar& a, const PAdicScalar& b) {
    if (a.prime() != b.prime()) throw Error("p-adic scalars over different primes");
    const mpz_class& p = a.prime();
    // valuation() of a zero flag is its precision: the sharpest safe bound
    long prec = std::min(a.precision() + b.valuation(), b.precision() + a.valuation());
    if (a.is_zero() || b.is_zero()) return PAdicScalar::zero(p, prec);
    return PAdicScalar::from_unit(p, a.valuation() + b.valuation(), a.unit() * b.unit(), prec);
}

PAdicScalar padic_inv(const PAdicScalar& a) {
    if (a.is_zero())
        throw PrecisionExhaustedError("inverting a scalar indistinguishable from zero");
    const mpz_class& p = a.prime();
    long rel = a.precision() - a.valuation();
    mpz_class m;
    mpz_pow_ui(m.get_mpz_t(), p.get_mpz_t(), static_cast<unsigned long>(rel));
    mpz_class uinv;
    mpz_invert(uinv.get_mpz_t(), a.unit().get_mpz_t(), m.get_mpz_t());
    // relative precision survives inversion: prec - 2*val
    return PAdicScalar::from_unit(p, -a.valuation(), uinv, a.precision() - 2 * a.valuation());
}

PAdicScalar padic_div_exact(const PAdicScalar& a, const mpz_class& d) {
    if (d == 0) throw Error("division by zero");
    const mpz_class& p = a.prime();
    mpz_class u = d;
    long e = static_cast<long>(mpz_remove(u.get_mpz_t(), u.get_mpz_t(), p.get_mpz_t()));
    long prec = a.precision() - e;
    if (a.is_zero()) {
        if (prec < 1) throw PrecisionExhaustedError("precision exhausted dividing by " + d.get_str());
        return PAdicScalar::zero(p, prec);
    }
    mpz_class m;
    mpz_pow_ui(m.get_mpz_t(), p.get_mpz_t(), static_cast<unsigned long>(prec - (a.valuation() - e)));
    mpz_class uinv;
    mpz_invert(uinv.get_mpz_t(), u.get_mpz_t(), m.get_mpz_t());
    return PAdicScalar::from_unit(p, a.valuation() - e, a.unit() * uinv, prec);
}

bool padic_agrees(const PAdicScalar& a, const PAdicScalar& b) {
    if (a.prime() != b.prime()) return false;
    long prec = std::min(a.precision(), b.precision());
    auto truncate = [&](const PAdicScalar& x) {
        if (x.is_zero() || x.valuation() >= prec) return PAdicScalar::zero(x.prime(), prec);
        return PAdicScalar::from_unit(x.prime(), x.valuation(), x.unit(), prec);
    };
    return truncate(a) == truncate(b);
}

}  // namespace conglab
