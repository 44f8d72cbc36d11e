//! Root finding for monic integer polynomials over the p-adic integers,
//! and the resulting irreducibility test for cubics over Q_p.
//!
//! A monic cubic is reducible over Q_p exactly when it has a root in Z_p,
//! so a finite root search modulo p^(2d+1), d = nu_p(disc), decides
//! irreducibility: a residue solving f to that precision has a residual
//! valuation exceeding twice the derivative's, which lifts by the
//! strengthened form of Hensel's lemma, and conversely any Z_p root
//! reduces to such a residue.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::padic::{require_prime, vp_int, Valuation};

/// Precision cap: root enumeration refuses moduli beyond p^13.
pub const MAX_ENUMERATION_PRECISION: i64 = 13;

/// Monic integer cubic x^3 + c2 x^2 + c1 x + c0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CubicPoly {
    pub c2: BigInt,
    pub c1: BigInt,
    pub c0: BigInt,
}

impl CubicPoly {
    pub fn new(c2: impl Into<BigInt>, c1: impl Into<BigInt>, c0: impl Into<BigInt>) -> Self {
        CubicPoly {
            c2: c2.into(),
            c1: c1.into(),
            c0: c0.into(),
        }
    }

    /// Characteristic polynomial x^3 - a x^2 - b x - 1 of the third-order
    /// family with unit tail.
    pub fn characteristic(a: &BigInt, b: &BigInt) -> Self {
        CubicPoly {
            c2: -a,
            c1: -b,
            c0: BigInt::from(-1),
        }
    }

    /// Ascending coefficients [c0, c1, c2, 1].
    pub fn to_monic(&self) -> MonicPoly {
        MonicPoly::new(vec![
            self.c0.clone(),
            self.c1.clone(),
            self.c2.clone(),
            BigInt::one(),
        ])
        .expect("cubic with leading 1 is monic")
    }
}

impl std::fmt::Display for CubicPoly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "x^3 + ({})x^2 + ({})x + ({})", self.c2, self.c1, self.c0)
    }
}

/// Exact discriminant of a monic cubic.
pub fn discriminant_cubic(f: &CubicPoly) -> BigInt {
    let (c2, c1, c0) = (&f.c2, &f.c1, &f.c0);
    BigInt::from(18) * c2 * c1 * c0 - BigInt::from(4) * c2.pow(3) * c0 + c2 * c2 * c1 * c1
        - BigInt::from(4) * c1.pow(3)
        - BigInt::from(27) * c0 * c0
}

/// Monic integer polynomial of degree 1..=3, coefficients ascending.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonicPoly {
    coeffs: Vec<BigInt>,
}

impl MonicPoly {
    pub fn new(coeffs: Vec<BigInt>) -> Result<Self> {
        let degree = coeffs.len().saturating_sub(1);
        if !(1..=3).contains(&degree) {
            return Err(Error::InvalidSpec(format!(
                "polynomial degree must be 1..=3, got {degree}"
            )));
        }
        if !coeffs.last().unwrap().is_one() {
            return Err(Error::InvalidSpec("polynomial must be monic".into()));
        }
        Ok(MonicPoly { coeffs })
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        let mut acc = BigInt::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    fn derivative(&self) -> Vec<BigInt> {
        self.coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| BigInt::from(i as u64) * c)
            .collect()
    }

    /// Discriminant of the monic polynomial (1 for linear).
    pub fn discriminant(&self) -> BigInt {
        match self.degree() {
            1 => BigInt::one(),
            2 => &self.coeffs[1] * &self.coeffs[1] - BigInt::from(4) * &self.coeffs[0],
            3 => discriminant_cubic(&CubicPoly {
                c2: self.coeffs[2].clone(),
                c1: self.coeffs[1].clone(),
                c0: self.coeffs[0].clone(),
            }),
            _ => unreachable!(),
        }
    }
}

fn trim(mut c: Vec<BigInt>) -> Vec<BigInt> {
    while c.last().is_some_and(Zero::is_zero) {
        c.pop();
    }
    c
}

fn content(c: &[BigInt]) -> BigInt {
    c.iter().fold(BigInt::zero(), |g, x| g.gcd(x))
}

fn primitive(c: Vec<BigInt>) -> Vec<BigInt> {
    let c = trim(c);
    if c.is_empty() {
        return c;
    }
    let mut g = content(&c);
    if c.last().unwrap().is_negative() {
        g = -g;
    }
    c.into_iter().map(|x| x / &g).collect()
}

fn pseudo_rem(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    let lb = b.last().unwrap();
    while r.len() > db {
        let lr = r.last().unwrap().clone();
        let shift = r.len() - 1 - db;
        for c in r.iter_mut() {
            *c *= lb;
        }
        for (i, bc) in b.iter().enumerate() {
            r[shift + i] -= &lr * bc;
        }
        r = trim(r);
        if r.is_empty() {
            break;
        }
    }
    r
}

fn poly_gcd(a: Vec<BigInt>, b: Vec<BigInt>) -> Vec<BigInt> {
    let mut a = primitive(a);
    let mut b = primitive(b);
    if a.len() < b.len() {
        std::mem::swap(&mut a, &mut b);
    }
    while !b.is_empty() {
        let r = primitive(pseudo_rem(&a, &b));
        a = b;
        b = r;
    }
    a
}

/// f divided by gcd(f, f'): same roots, square-free, still monic.
pub fn squarefree_part(f: &MonicPoly) -> MonicPoly {
    let g = poly_gcd(f.coeffs.to_vec(), f.derivative());
    if g.len() <= 1 {
        return f.clone();
    }
    // For monic f, Gauss's lemma forces the primitive gcd to be monic.
    debug_assert!(g.last().unwrap().is_one());
    // synthetic division of f by g; remainder must vanish
    let mut rem = f.coeffs.to_vec();
    let dg = g.len() - 1;
    let mut quot = vec![BigInt::zero(); rem.len() - dg];
    for i in (0..quot.len()).rev() {
        let c = rem[i + dg].clone();
        quot[i] = c.clone();
        for (j, gc) in g.iter().enumerate() {
            rem[i + j] -= &c * gc;
        }
    }
    debug_assert!(rem.iter().all(Zero::is_zero));
    MonicPoly::new(quot).expect("quotient of monic by monic is monic")
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn eval_mod(coeffs: &[u64], x: u64, m: u64) -> u64 {
    let mut acc = 0u64;
    for &c in coeffs.iter().rev() {
        acc = (mul_mod(acc, x, m) + c) % m;
    }
    acc
}

fn reduce_coeffs(f: &MonicPoly, m: u64) -> Vec<u64> {
    let mb = BigInt::from(m);
    f.coeffs
        .iter()
        .map(|c| u64::try_from(c.mod_floor(&mb)).unwrap())
        .collect()
}

/// True iff the square-free monic polynomial `f` has a root in Z_p.
///
/// Enumerates all residues modulo p^(2d+1) with d = nu_p(disc f); any
/// residue solving f to that precision certifies a Hensel-liftable root.
pub fn has_root_in_zp(f: &MonicPoly, p: u64) -> Result<bool> {
    require_prime(p)?;
    if f.degree() == 1 {
        return Ok(true); // -c0 is an integer root
    }
    let disc = f.discriminant();
    let d = match vp_int(&disc, p) {
        Valuation::Finite(d) => d,
        Valuation::Infinity => {
            return Err(Error::InvalidSpec(
                "has_root_in_zp requires a square-free polynomial".into(),
            ))
        }
    };
    // No root mod p already rules out a root mod any higher power.
    let fp = reduce_coeffs(f, p);
    if (0..p).all(|r| eval_mod(&fp, r, p) != 0) {
        return Ok(false);
    }
    let precision = 2 * d + 1;
    if precision > MAX_ENUMERATION_PRECISION {
        return Err(Error::ResourceGuard(format!(
            "root search needs precision p^{precision}, beyond the p^{MAX_ENUMERATION_PRECISION} cap"
        )));
    }
    let modulus = (p as u128).pow(precision as u32);
    if modulus > u64::MAX as u128 / 4 {
        return Err(Error::ResourceGuard(format!(
            "root search modulus {modulus} too large to enumerate"
        )));
    }
    let m = modulus as u64;
    let fm = reduce_coeffs(f, m);
    Ok((0..m).any(|r| eval_mod(&fm, r, m) == 0))
}

/// Irreducibility of a monic integer cubic over Q_p.
///
/// A monic cubic factors over Q_p iff it has a linear factor, and any
/// Q_p-root of a monic integer polynomial lies in Z_p, so the root search
/// alone decides. A vanishing discriminant means a repeated algebraic
/// root, which already forces a factorization over Q.
pub fn is_irreducible_cubic_over_qp(f: &CubicPoly, p: u64) -> Result<bool> {
    require_prime(p)?;
    if discriminant_cubic(f).is_zero() {
        return Ok(false);
    }
    Ok(!has_root_in_zp(&f.to_monic(), p)?)
}
