#pragma once

#include <gmpxx.h>

#include <memory>
#include <string>

#include "conglab/errors.hpp"

namespace conglab {

// Deterministic Miller-Rabin below 2^64, probabilistic above.
bool is_probable_prime(const mpz_class& n);

// Z/p^s for an odd prime p and exponent s >= 1. Immutable once built; shared
// between residues so that ring identity is a value comparison, not a pointer
// comparison.
struct PrimePower {
    mpz_class p;
    int s = 1;
    mpz_class modulus;  // p^s

    bool same(const PrimePower& o) const { return s == o.s && p == o.p; }
};

using RingPtr = std::shared_ptr<const PrimePower>;

// Throws NotPrimeError / EvenPrimeError / BadExponentError.
RingPtr make_ring(const mpz_class& p, int s);

class Residue {
  public:
    Residue() = default;
    // value is reduced into [0, modulus)
    Residue(mpz_class value, RingPtr ring);

    const mpz_class& value() const { return v_; }
    const RingPtr& ring() const { return ring_; }
    const mpz_class& modulus() const { return ring_->modulus; }

    bool is_zero() const { return v_ == 0; }
    bool is_unit() const;

    Residue operator-() const;
    Residue pow(unsigned long e) const;

    friend Residue operator+(const Residue& a, const Residue& b);
    friend Residue operator-(const Residue& a, const Residue& b);
    friend Residue operator*(const Residue& a, const Residue& b);
    friend bool operator==(const Residue& a, const Residue& b);
    friend bool operator!=(const Residue& a, const Residue& b) { return !(a == b); }

  private:
    mpz_class v_;
    RingPtr ring_;
};

// Throws NonUnitError when gcd(value, p) > 1.
Residue inv(const Residue& a);

// num/den reduced into the ring; throws NonUnitDenominatorError when
// gcd(den, p) > 1.
Residue from_rational(const mpz_class& num, const mpz_class& den, const RingPtr& ring);

// A scalar in Q_p known to absolute precision `prec`: value = p^val * unit
// with unit a unit of Z_p tracked modulo p^(prec - val). The zero flag means
// "indistinguishable from 0 at this precision": |value| <= p^-prec.
// Invariant for nonzero scalars: prec > val (otherwise the scalar carries no
// information and construction throws PrecisionExhaustedError).
class PAdicScalar {
  public:
    static PAdicScalar zero(const mpz_class& p, long prec);
    static PAdicScalar from_unit(const mpz_class& p, long val, const mpz_class& unit, long prec);
    // any integer, valuation extracted; zero flag when p^prec | n
    static PAdicScalar from_integer(const mpz_class& n, const mpz_class& p, long prec);
    static PAdicScalar from_rational(const mpz_class& num, const mpz_class& den,
                                     const mpz_class& p, long prec);

    const mpz_class& prime() const { return p_; }
    bool is_zero() const { return zero_; }
    // valuation of a zero-flagged scalar is unknown; by convention report the
    // precision, the best known lower bound
    long valuation() const { return zero_ ? prec_ : val_; }
    const mpz_class& unit() const;  // throws on zero flag
    long precision() const { return prec_; }

    // the value reduced mod p^k as an integer residue; requires k <= prec and
    // valuation >= 0
    mpz_class integer_residue(long k) const;

    std::string str() const;

    friend bool operator==(const PAdicScalar& a, const PAdicScalar& b);
    friend bool operator!=(const PAdicScalar& a, const PAdicScalar& b) { return !(a == b); }

  private:
    PAdicScalar(mpz_class p, long val, mpz_class unit, long prec, bool zero)
        : p_(std::move(p)), val_(val), unit_(std::move(unit)), prec_(prec), zero_(zero) {}

    mpz_class p_;
    long val_ = 0;
    mpz_class unit_;
    long prec_ = 0;
    bool zero_ = true;
};

// prec = min(a.prec, b.prec); cancellation raises the valuation or yields the
// zero flag.
PAdicScalar padic_add(const PAdicScalar& a, const PAdicScalar& b);
// prec = min(a.prec + b.val, b.prec + a.val)
PAdicScalar padic_mul(const PAdicScalar& a, const PAdicScalar& b);
// valuation negates, relative precision is preserved; throws
// PrecisionExhaustedError on a zero-flagged input.
PAdicScalar padic_inv(const PAdicScalar& a);
// division by an exact nonzero integer d = p^e * u: costs e digits of
// absolute precision, nothing else.
PAdicScalar padic_div_exact(const PAdicScalar& a, const mpz_class& d);

// equality after truncating both sides to min(a.prec, b.prec)
bool padic_agrees(const PAdicScalar& a, const PAdicScalar& b);

}  // namespace conglab
