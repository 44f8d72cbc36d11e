//! Exact and modular generation of recurrence terms, closed forms, and
//! period detection of state vectors modulo prime powers.

use std::collections::HashMap;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::padic::PadicContext;

/// Bit-length guard for exact term generation.
pub const MAX_TERM_BITS: u64 = 1_000_000;

/// Default number of terms for probes and CLI runs.
pub const DEFAULT_TERM_CAP: usize = 2000;

/// Period detection refuses state spaces larger than this.
pub const STATE_SPACE_BOUND: u128 = 100_000_000;

/// One of the three recurrence families the library understands.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RecurrenceSpec {
    /// x_n = a_1 x_{n-1} + ... + a_k x_{n-k}, order k >= 2, a_k != 0.
    GeneralOrderK {
        coeffs: Vec<BigInt>,
        init: Vec<BigInt>,
    },
    /// x_n = x_{n-1} + 2 x_{n-2} + ... + n x_0, with x_0 = 1 fixed.
    FullHistoryArithmetic,
    /// x_n = a x_{n-1} + a r x_{n-2} + ... + a r^{n-1} x_0.
    FullHistoryGeometric { x0: BigInt, a: BigInt, r: BigInt },
}

impl RecurrenceSpec {
    pub fn general(coeffs: Vec<BigInt>, init: Vec<BigInt>) -> Result<Self> {
        let spec = RecurrenceSpec::GeneralOrderK { coeffs, init };
        spec.validate()?;
        Ok(spec)
    }

    pub fn full_history_geometric(x0: BigInt, a: BigInt, r: BigInt) -> Result<Self> {
        let spec = RecurrenceSpec::FullHistoryGeometric { x0, a, r };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            RecurrenceSpec::GeneralOrderK { coeffs, init } => {
                if coeffs.len() < 2 {
                    return Err(Error::InvalidSpec("order must be at least 2".into()));
                }
                if coeffs.len() != init.len() {
                    return Err(Error::InvalidSpec(format!(
                        "order {} needs {} initial values, got {}",
                        coeffs.len(),
                        coeffs.len(),
                        init.len()
                    )));
                }
                if coeffs.last().unwrap().is_zero() {
                    return Err(Error::InvalidSpec("trailing coefficient a_k must be nonzero".into()));
                }
                if init.iter().all(Zero::is_zero) {
                    return Err(Error::InvalidSpec(
                        "initial values must not all be zero (quotient set undefined)".into(),
                    ));
                }
                Ok(())
            }
            RecurrenceSpec::FullHistoryArithmetic => Ok(()),
            RecurrenceSpec::FullHistoryGeometric { x0, .. } => {
                if x0.is_zero() {
                    return Err(Error::InvalidSpec(
                        "x0 = 0 makes the whole sequence zero (quotient set undefined)".into(),
                    ));
                }
                Ok(())
            }
        }
    }

    /// Recurrence order for the fixed-order kind.
    pub fn order(&self) -> Option<usize> {
        match self {
            RecurrenceSpec::GeneralOrderK { coeffs, .. } => Some(coeffs.len()),
            _ => None,
        }
    }
}

/// Exact terms x_0..x_N of a recurrence.
#[derive(Debug, Clone)]
pub struct TermSequence {
    spec: RecurrenceSpec,
    terms: Vec<BigInt>,
}

impl TermSequence {
    pub fn spec(&self) -> &RecurrenceSpec {
        &self.spec
    }

    pub fn terms(&self) -> &[BigInt] {
        &self.terms
    }
}

fn guard_bits(x: &BigInt) -> Result<()> {
    if x.bits() > MAX_TERM_BITS {
        Err(Error::ResourceGuard(format!(
            "term exceeds {MAX_TERM_BITS} bits"
        )))
    } else {
        Ok(())
    }
}

/// Generates x_0..x_count exactly.
pub fn generate_terms(spec: &RecurrenceSpec, count: usize) -> Result<TermSequence> {
    spec.validate()?;
    let mut terms: Vec<BigInt> = Vec::with_capacity(count + 1);
    match spec {
        RecurrenceSpec::GeneralOrderK { coeffs, init } => {
            let k = coeffs.len();
            terms.extend(init.iter().cloned());
            terms.truncate(count + 1);
            for n in k..=count {
                let mut x = BigInt::zero();
                for (j, c) in coeffs.iter().enumerate() {
                    x += c * &terms[n - 1 - j];
                }
                guard_bits(&x)?;
                terms.push(x);
            }
        }
        RecurrenceSpec::FullHistoryArithmetic => {
            // x_n = sum_{i<n} (n - i) x_i = n * A - B with
            // A = sum_{i<n} x_i, B = sum_{i<n} i * x_i.
            let mut a_sum = BigInt::zero();
            let mut b_sum = BigInt::zero();
            terms.push(BigInt::from(1));
            for n in 1..=count {
                let prev = &terms[n - 1];
                a_sum += prev;
                b_sum += BigInt::from(n as u64 - 1) * prev;
                let x = BigInt::from(n as u64) * &a_sum - &b_sum;
                guard_bits(&x)?;
                terms.push(x);
            }
        }
        RecurrenceSpec::FullHistoryGeometric { x0, a, r } => {
            // x_n = a * S_{n-1}, where S_n = x_n + r * S_{n-1}.
            terms.push(x0.clone());
            let mut s = x0.clone();
            for _ in 1..=count {
                let x = a * &s;
                guard_bits(&x)?;
                s = &x + r * &s;
                guard_bits(&s)?;
                terms.push(x);
            }
        }
    }
    Ok(TermSequence {
        spec: spec.clone(),
        terms,
    })
}

/// Residues of x_0..x_count modulo p^k; agrees with `generate_terms`
/// reduced, but never materializes the exact terms.
pub fn generate_terms_mod(
    spec: &RecurrenceSpec,
    ctx: &PadicContext,
    count: usize,
) -> Result<Vec<BigUint>> {
    spec.validate()?;
    let m = BigInt::from(ctx.modulus());
    let reduce = |x: &BigInt| -> BigInt { x.mod_floor(&m) };
    let to_unsigned = |x: BigInt| -> BigUint {
        x.to_biguint().expect("mod_floor result is nonnegative")
    };
    let mut residues: Vec<BigInt> = Vec::with_capacity(count + 1);
    match spec {
        RecurrenceSpec::GeneralOrderK { coeffs, init } => {
            let k = coeffs.len();
            let coeffs: Vec<BigInt> = coeffs.iter().map(reduce).collect();
            residues.extend(init.iter().map(reduce));
            residues.truncate(count + 1);
            for n in k..=count {
                let mut x = BigInt::zero();
                for (j, c) in coeffs.iter().enumerate() {
                    x += c * &residues[n - 1 - j];
                }
                residues.push(x.mod_floor(&m));
            }
        }
        RecurrenceSpec::FullHistoryArithmetic => {
            let mut a_sum = BigInt::zero();
            let mut b_sum = BigInt::zero();
            residues.push(reduce(&BigInt::from(1)));
            for n in 1..=count {
                let prev = &residues[n - 1];
                a_sum = (a_sum + prev).mod_floor(&m);
                b_sum = (b_sum + BigInt::from(n as u64 - 1) * prev).mod_floor(&m);
                let x = (BigInt::from(n as u64) * &a_sum - &b_sum).mod_floor(&m);
                residues.push(x);
            }
        }
        RecurrenceSpec::FullHistoryGeometric { x0, a, r } => {
            let a = reduce(a);
            let r = reduce(r);
            residues.push(reduce(x0));
            let mut s = residues[0].clone();
            for _ in 1..=count {
                let x = (&a * &s).mod_floor(&m);
                s = (&x + &r * &s).mod_floor(&m);
                residues.push(x);
            }
        }
    }
    Ok(residues.into_iter().map(to_unsigned).collect())
}

/// Fibonacci by fast doubling: F(0)=0, F(1)=1.
pub fn fib(n: u64) -> BigInt {
    fn pair(n: u64) -> (BigInt, BigInt) {
        if n == 0 {
            return (BigInt::zero(), BigInt::from(1));
        }
        let (f, g) = pair(n / 2); // (F(m), F(m+1)), m = n/2
        let two_g_minus_f = (&g << 1) - &f;
        let f2m = &f * &two_g_minus_f;
        let f2m1 = &f * &f + &g * &g;
        if n % 2 == 0 {
            (f2m, f2m1)
        } else {
            let next = &f2m + &f2m1;
            (f2m1, next)
        }
    }
    pair(n).0
}

/// Closed form of the arithmetic full-history recurrence: F(2n).
pub fn closed_form_full_history_arithmetic(n: u64) -> BigInt {
    fib(2 * n)
}

/// Closed form of the geometric full-history recurrence for n >= 1:
/// a * x0 * (a + r)^(n-1).
pub fn closed_form_full_history_geometric(x0: &BigInt, a: &BigInt, r: &BigInt, n: u64) -> BigInt {
    a * x0 * (a + r).pow(u32::try_from(n - 1).expect("exponent fits u32"))
}

/// Smallest (preperiod, period) such that the order-k state vector modulo
/// p^k repeats. Only defined for the fixed-order kind.
pub fn find_period_mod(spec: &RecurrenceSpec, ctx: &PadicContext) -> Result<(usize, usize)> {
    let (coeffs, init) = match spec {
        RecurrenceSpec::GeneralOrderK { coeffs, init } => (coeffs, init),
        _ => {
            return Err(Error::InvalidSpec(
                "period detection needs a fixed-order recurrence".into(),
            ))
        }
    };
    spec.validate()?;
    let order = coeffs.len() as u32;
    let pk = (ctx.prime() as u128).checked_pow(ctx.precision());
    let states = pk.and_then(|m| m.checked_pow(order));
    match states {
        Some(s) if s <= STATE_SPACE_BOUND => {}
        _ => {
            return Err(Error::ResourceGuard(format!(
                "state space p^(k*order) exceeds {STATE_SPACE_BOUND}"
            )))
        }
    }
    let m = pk.unwrap() as u64;
    let mbig = BigInt::from(m);
    let cmod: Vec<u64> = coeffs
        .iter()
        .map(|c| u64::try_from(c.mod_floor(&mbig)).unwrap())
        .collect();
    let mut state: Vec<u64> = init
        .iter()
        .map(|x| u64::try_from(x.mod_floor(&mbig)).unwrap())
        .collect();
    let mut seen: HashMap<Vec<u64>, usize> = HashMap::new();
    let mut step = 0usize;
    loop {
        if let Some(&first) = seen.get(&state) {
            return Ok((first, step - first));
        }
        seen.insert(state.clone(), step);
        let mut next = 0u128;
        for (j, c) in cmod.iter().enumerate() {
            next += *c as u128 * state[state.len() - 1 - j] as u128;
        }
        state.rotate_left(1);
        *state.last_mut().unwrap() = (next % m as u128) as u64;
        step += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    fn bigs(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn fibonacci_spec() -> RecurrenceSpec {
        RecurrenceSpec::general(bigs(&[1, 1]), bigs(&[0, 1])).unwrap()
    }

    #[test]
    fn validation() {
        assert!(RecurrenceSpec::general(bigs(&[1]), bigs(&[1])).is_err());
        assert!(RecurrenceSpec::general(bigs(&[1, 0]), bigs(&[0, 1])).is_err());
        assert!(RecurrenceSpec::general(bigs(&[1, 1]), bigs(&[0, 0])).is_err());
        assert!(RecurrenceSpec::general(bigs(&[1, 1]), bigs(&[1])).is_err());
        assert!(RecurrenceSpec::full_history_geometric(
            BigInt::zero(),
            BigInt::one(),
            BigInt::one()
        )
        .is_err());
    }

    #[test]
    fn general_order_3_terms() {
        let spec = RecurrenceSpec::general(bigs(&[1, 0, 1]), bigs(&[0, 0, 1])).unwrap();
        let seq = generate_terms(&spec, 8).unwrap();
        assert_eq!(seq.terms(), &bigs(&[0, 0, 1, 1, 1, 2, 3, 4, 6])[..]);
    }

    #[test]
    fn full_history_arithmetic_terms() {
        let seq = generate_terms(&RecurrenceSpec::FullHistoryArithmetic, 5).unwrap();
        assert_eq!(seq.terms(), &bigs(&[1, 1, 3, 8, 21, 55])[..]);
    }

    #[test]
    fn full_history_geometric_terms() {
        let spec = RecurrenceSpec::full_history_geometric(
            BigInt::one(),
            BigInt::from(2),
            BigInt::one(),
        )
        .unwrap();
        let seq = generate_terms(&spec, 3).unwrap();
        assert_eq!(seq.terms(), &bigs(&[1, 2, 6, 18])[..]);
    }

    #[test]
    fn fib_examples() {
        assert_eq!(fib(0), BigInt::zero());
        assert_eq!(fib(1), BigInt::one());
        assert_eq!(fib(10), BigInt::from(55));
        assert_eq!(fib(24), BigInt::from(46368));
        // cross-check fast doubling against plain iteration
        let mut a = BigInt::zero();
        let mut b = BigInt::one();
        for n in 0..200u64 {
            assert_eq!(fib(n), a, "F_{n}");
            let c = &a + &b;
            a = b;
            b = c;
        }
    }

    #[test]
    fn closed_form_arithmetic_matches_recursion() {
        let seq = generate_terms(&RecurrenceSpec::FullHistoryArithmetic, 300).unwrap();
        for (n, term) in seq.terms().iter().enumerate() {
            if n >= 1 {
                assert_eq!(term, &closed_form_full_history_arithmetic(n as u64));
            }
        }
    }

    #[test]
    fn closed_form_geometric_matches_recursion() {
        for x0 in -5i64..=5 {
            for a in -5i64..=5 {
                for r in -5i64..=5 {
                    if x0 == 0 {
                        continue;
                    }
                    let spec = RecurrenceSpec::full_history_geometric(
                        BigInt::from(x0),
                        BigInt::from(a),
                        BigInt::from(r),
                    )
                    .unwrap();
                    let seq = generate_terms(&spec, 200).unwrap();
                    for n in 1..=200u64 {
                        assert_eq!(
                            seq.terms()[n as usize],
                            closed_form_full_history_geometric(
                                &BigInt::from(x0),
                                &BigInt::from(a),
                                &BigInt::from(r),
                                n
                            ),
                            "x0={x0} a={a} r={r} n={n}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn geometric_degenerate_tail() {
        // a + r = 0 annihilates all terms from n = 2 on
        assert_eq!(
            closed_form_full_history_geometric(&BigInt::from(5), &BigInt::from(3), &BigInt::from(-3), 4),
            BigInt::zero()
        );
        assert_eq!(
            closed_form_full_history_geometric(&BigInt::from(7), &BigInt::from(3), &BigInt::from(2), 1),
            BigInt::from(21)
        );
    }

    #[test]
    fn substitution_check() {
        let specs = vec![
            RecurrenceSpec::general(bigs(&[3, -2, 5]), bigs(&[1, 0, 2])).unwrap(),
            RecurrenceSpec::general(bigs(&[1, 1]), bigs(&[0, 1])).unwrap(),
            RecurrenceSpec::general(bigs(&[-4, 7]), bigs(&[2, -1])).unwrap(),
        ];
        for spec in &specs {
            let seq = generate_terms(spec, 100).unwrap();
            let (coeffs, _) = match spec {
                RecurrenceSpec::GeneralOrderK { coeffs, init } => (coeffs, init),
                _ => unreachable!(),
            };
            let k = coeffs.len();
            for n in k..=100 {
                let mut acc = BigInt::zero();
                for (j, c) in coeffs.iter().enumerate() {
                    acc += c * &seq.terms()[n - 1 - j];
                }
                assert_eq!(acc, seq.terms()[n]);
            }
        }
    }

    #[test]
    fn modular_consistency() {
        let specs = vec![
            fibonacci_spec(),
            RecurrenceSpec::general(bigs(&[3, -2, 5]), bigs(&[1, 0, 2])).unwrap(),
            RecurrenceSpec::FullHistoryArithmetic,
            RecurrenceSpec::full_history_geometric(
                BigInt::from(2),
                BigInt::from(-3),
                BigInt::from(4),
            )
            .unwrap(),
        ];
        for spec in &specs {
            for (p, k) in [(2u64, 5u32), (3, 4), (5, 4), (7, 2)] {
                let ctx = PadicContext::new(p, k).unwrap();
                let m = BigInt::from(ctx.modulus());
                let exact = generate_terms(spec, 200).unwrap();
                let residues = generate_terms_mod(spec, &ctx, 200).unwrap();
                for (x, r) in exact.terms().iter().zip(&residues) {
                    assert_eq!(x.mod_floor(&m).to_biguint().unwrap(), *r);
                }
            }
        }
    }

    #[test]
    fn fibonacci_parity_residues() {
        let ctx = PadicContext::new(2, 1).unwrap();
        let residues = generate_terms_mod(&fibonacci_spec(), &ctx, 6).unwrap();
        let expect: Vec<BigUint> = [0u32, 1, 1, 0, 1, 1, 0]
            .iter()
            .map(|&x| BigUint::from(x))
            .collect();
        assert_eq!(residues, expect);
    }

    #[test]
    fn full_history_arithmetic_mod_5() {
        let ctx = PadicContext::new(5, 1).unwrap();
        let residues = generate_terms_mod(&RecurrenceSpec::FullHistoryArithmetic, &ctx, 5).unwrap();
        let expect: Vec<BigUint> = [1u32, 1, 3, 3, 1, 0]
            .iter()
            .map(|&x| BigUint::from(x))
            .collect();
        assert_eq!(residues, expect);
    }

    #[test]
    fn single_term_request() {
        let spec = RecurrenceSpec::general(bigs(&[1, 1]), bigs(&[4, 1])).unwrap();
        let ctx = PadicContext::new(3, 1).unwrap();
        assert_eq!(
            generate_terms_mod(&spec, &ctx, 0).unwrap(),
            vec![BigUint::from(1u32)]
        );
    }

    #[test]
    fn period_fibonacci_mod_2() {
        let ctx = PadicContext::new(2, 1).unwrap();
        assert_eq!(find_period_mod(&fibonacci_spec(), &ctx).unwrap(), (0, 3));
    }

    #[test]
    fn period_lucas_mod_5() {
        let spec = RecurrenceSpec::general(bigs(&[1, 1]), bigs(&[2, 1])).unwrap();
        let ctx = PadicContext::new(5, 1).unwrap();
        assert_eq!(find_period_mod(&spec, &ctx).unwrap(), (0, 4));
    }

    #[test]
    fn invertible_state_map_has_no_preperiod() {
        // p not dividing a_k makes the mod-p state map invertible
        for a1 in -3i64..=3 {
            for a2 in [-3i64, -1, 1, 2, 3] {
                for p in [2u64, 3, 5] {
                    if a2 % p as i64 == 0 {
                        continue;
                    }
                    let spec = RecurrenceSpec::general(bigs(&[a1, a2]), bigs(&[1, 1])).unwrap();
                    let ctx = PadicContext::new(p, 1).unwrap();
                    let (pre, _) = find_period_mod(&spec, &ctx).unwrap();
                    assert_eq!(pre, 0, "a1={a1} a2={a2} p={p}");
                }
            }
        }
    }

    #[test]
    fn periodicity_holds_past_preperiod() {
        let spec = RecurrenceSpec::general(bigs(&[2, 4]), bigs(&[1, 3])).unwrap();
        let ctx = PadicContext::new(2, 3).unwrap();
        let (pre, period) = find_period_mod(&spec, &ctx).unwrap();
        let residues = generate_terms_mod(&spec, &ctx, pre + 3 * period + 10).unwrap();
        for n in pre..residues.len() - period {
            assert_eq!(residues[n], residues[n + period]);
        }
    }

    #[test]
    fn state_space_guard() {
        let spec = RecurrenceSpec::general(bigs(&[1, 1, 1, 1]), bigs(&[1, 0, 0, 0])).unwrap();
        let ctx = PadicContext::new(101, 2).unwrap();
        assert!(matches!(
            find_period_mod(&spec, &ctx),
            Err(Error::ResourceGuard(_))
        ));
    }
}
