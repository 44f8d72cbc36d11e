//! Exact p-adic valuation and modular arithmetic primitives.
//!
//! Valuations are exact integers; the absolute value `p^(-v)` never needs to
//! be materialized because every comparison in the library reduces to an
//! integer comparison of valuations.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// A p-adic valuation: a finite integer or infinity (the valuation of 0).
///
/// The derived ordering places `Infinity` above every finite value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Valuation {
    Finite(i64),
    Infinity,
}

impl Valuation {
    pub fn is_infinite(self) -> bool {
        matches!(self, Valuation::Infinity)
    }

    pub fn finite(self) -> Option<i64> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::Infinity => None,
        }
    }

    /// Sum of valuations, with infinity absorbing (valuation of a product).
    pub fn add(self, other: Valuation) -> Valuation {
        match (self, other) {
            (Valuation::Finite(a), Valuation::Finite(b)) => Valuation::Finite(a + b),
            _ => Valuation::Infinity,
        }
    }

    /// Difference of valuations (valuation of a quotient); the subtrahend
    /// must be finite.
    pub fn sub_finite(self, other: i64) -> Valuation {
        match self {
            Valuation::Finite(a) => Valuation::Finite(a - other),
            Valuation::Infinity => Valuation::Infinity,
        }
    }
}

impl std::fmt::Display for Valuation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::Infinity => write!(f, "inf"),
        }
    }
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin, correct for all n < 2^64.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for q in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == q {
            return true;
        }
        if n % q == 0 {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0u32;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    // This witness set decides primality for every n < 2^64.
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Validates that `p` is prime, rejecting composites before any computation.
pub fn require_prime(p: u64) -> Result<u64> {
    if is_prime(p) {
        Ok(p)
    } else {
        Err(Error::NotPrime(p))
    }
}

/// A prime together with a working precision: arithmetic happens modulo p^k.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PadicContext {
    p: u64,
    precision: u32,
}

impl PadicContext {
    pub fn new(p: u64, precision: u32) -> Result<Self> {
        require_prime(p)?;
        if precision == 0 {
            return Err(Error::InvalidSpec("precision must be >= 1".into()));
        }
        Ok(PadicContext { p, precision })
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    /// p^precision as an arbitrary-precision integer.
    pub fn modulus(&self) -> BigUint {
        BigUint::from(self.p).pow(self.precision)
    }
}

/// Exact exponent of `p` in `n`; `Infinity` iff n = 0.
pub fn vp_int(n: &BigInt, p: u64) -> Valuation {
    if n.is_zero() {
        return Valuation::Infinity;
    }
    let p = BigInt::from(p);
    let mut m = n.abs();
    let mut v = 0i64;
    loop {
        let (q, r) = m.div_rem(&p);
        if !r.is_zero() {
            return Valuation::Finite(v);
        }
        m = q;
        v += 1;
    }
}

/// Valuation of the rational numerator/denominator; may be negative.
pub fn vp_rat(numerator: &BigInt, denominator: &BigInt, p: u64) -> Result<Valuation> {
    if denominator.is_zero() {
        return Err(Error::ZeroDenominator);
    }
    match vp_int(denominator, p) {
        Valuation::Finite(d) => Ok(vp_int(numerator, p).sub_finite(d)),
        Valuation::Infinity => unreachable!("nonzero denominator has finite valuation"),
    }
}

/// Inverse of `u` modulo a prime power, by the extended Euclidean algorithm.
/// Errors if `u` shares a factor with the modulus.
pub fn mod_inverse(u: &BigInt, modulus: &BigUint) -> Result<BigUint> {
    let m = BigInt::from(modulus.clone());
    let u = u.mod_floor(&m);
    let e = u.extended_gcd(&m);
    if !e.gcd.is_one() {
        return Err(Error::NotAUnit(format!("{u} mod {m}")));
    }
    let inv = e.x.mod_floor(&m);
    Ok(inv.to_biguint().expect("mod_floor of positive modulus is nonnegative"))
}

/// True iff the p-adic distance between x and y is at most p^(-k),
/// i.e. nu_p(x - y) >= k.
pub fn padic_distance_at_least(x: &BigInt, y: &BigInt, p: u64, k: u32) -> bool {
    vp_int(&(x - y), p) >= Valuation::Finite(k as i64)
}
