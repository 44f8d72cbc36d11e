//! Rule engine mapping (recurrence, prime) to a density verdict with
//! full provenance.
//!
//! Every rule records the hypotheses it checked and the values it saw, so
//! a verdict can be audited without re-deriving the mathematics. NotDense
//! structural rules run before Dense sufficient conditions; the rule
//! order cannot change a verdict because Dense and NotDense rules are
//! never allowed to co-fire (checked at runtime, and exhaustively in
//! tests).

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::padic::{require_prime, vp_int, PadicContext, Valuation};
use crate::polyqp::{discriminant_cubic, is_irreducible_cubic_over_qp, CubicPoly};
use crate::recurrence::{find_period_mod, generate_terms_mod, RecurrenceSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Outcome {
    Dense,
    NotDense,
    Unknown,
}

impl std::fmt::Display for Outcome {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Outcome::Dense => write!(f, "Dense"),
            Outcome::NotDense => write!(f, "NotDense"),
            Outcome::Unknown => write!(f, "Unknown"),
        }
    }
}

/// One checked rule hypothesis: the condition text and the value observed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Hypothesis {
    pub condition: String,
    pub value: String,
}

impl Hypothesis {
    fn new(condition: impl Into<String>, value: impl std::fmt::Display) -> Self {
        Hypothesis {
            condition: condition.into(),
            value: value.to_string(),
        }
    }
}

/// The classifier's answer for one (recurrence, prime) pair.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub outcome: Outcome,
    pub rule: String,
    pub hypotheses: Vec<Hypothesis>,
    pub notes: Vec<String>,
}

impl Verdict {
    fn unknown(notes: Vec<String>) -> Self {
        Verdict {
            outcome: Outcome::Unknown,
            rule: "none".into(),
            hypotheses: Vec::new(),
            notes,
        }
    }
}

/// A structural template the recurrence matches, with extracted parameters.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FamilyMatch {
    /// Second order, init (0, 1), coefficients (r, s).
    GarciaA { r: BigInt, s: BigInt },
    /// Second order, init (2, r), coefficients (r, s): the companion
    /// Lucas-type sequence.
    GarciaB { r: BigInt, s: BigInt },
    /// Second order with coefficients (2a, -a^2), arbitrary init.
    SquareForm { a: BigInt, x0: BigInt, x1: BigInt },
    /// Third order, coefficients (a, b, 1), init (0, 0, 1).
    ThirdOrderUnitTail { a: BigInt, b: BigInt },
    /// Any fixed-order recurrence (the valuation-gap rule applies).
    OrderKValuation,
    FullHistoryArithmetic,
    FullHistoryGeometric,
}

/// All family templates the spec matches exactly.
pub fn match_families(spec: &RecurrenceSpec) -> Vec<FamilyMatch> {
    let mut out = Vec::new();
    match spec {
        RecurrenceSpec::GeneralOrderK { coeffs, init } => {
            if coeffs.len() == 2 {
                let (r, s) = (&coeffs[0], &coeffs[1]);
                if init[0].is_zero() && init[1] == BigInt::from(1) {
                    out.push(FamilyMatch::GarciaA {
                        r: r.clone(),
                        s: s.clone(),
                    });
                }
                if init[0] == BigInt::from(2) && &init[1] == r {
                    out.push(FamilyMatch::GarciaB {
                        r: r.clone(),
                        s: s.clone(),
                    });
                }
                if r.is_even() {
                    let a: BigInt = r / 2;
                    if !a.is_zero() && *s == -(&a * &a) {
                        out.push(FamilyMatch::SquareForm {
                            a,
                            x0: init[0].clone(),
                            x1: init[1].clone(),
                        });
                    }
                }
            }
            if coeffs.len() == 3
                && coeffs[2] == BigInt::from(1)
                && init[0].is_zero()
                && init[1].is_zero()
                && init[2] == BigInt::from(1)
            {
                out.push(FamilyMatch::ThirdOrderUnitTail {
                    a: coeffs[0].clone(),
                    b: coeffs[1].clone(),
                });
            }
            out.push(FamilyMatch::OrderKValuation);
        }
        RecurrenceSpec::FullHistoryArithmetic => out.push(FamilyMatch::FullHistoryArithmetic),
        RecurrenceSpec::FullHistoryGeometric { .. } => {
            out.push(FamilyMatch::FullHistoryGeometric)
        }
    }
    out
}

fn vp_min<'a>(values: impl Iterator<Item = &'a BigInt>, p: u64) -> Valuation {
    values
        .map(|x| vp_int(x, p))
        .min()
        .unwrap_or(Valuation::Infinity)
}

/// Valuation-gap rule for any fixed-order recurrence: p not dividing a_k
/// together with min nu_p(a_j) (j < k) strictly above the spread of the
/// initial valuations pins nu_p(x_n) to nu_p(x_{n mod k}) forever, so the
/// quotient valuations stay bounded.
pub fn rule_not_dense_order_k(spec: &RecurrenceSpec, p: u64) -> Option<Verdict> {
    let (coeffs, init) = match spec {
        RecurrenceSpec::GeneralOrderK { coeffs, init } => (coeffs, init),
        _ => return None,
    };
    let k = coeffs.len();
    let vak = vp_int(&coeffs[k - 1], p);
    if vak != Valuation::Finite(0) {
        return None;
    }
    // the spread is finite only when every initial value is nonzero
    let init_vals: Vec<i64> = init.iter().map(|x| vp_int(x, p).finite()).collect::<Option<_>>()?;
    let spread = init_vals.iter().max().unwrap() - init_vals.iter().min().unwrap();
    let lead_min = vp_min(coeffs[..k - 1].iter(), p);
    if lead_min <= Valuation::Finite(spread) {
        return None;
    }
    let bound_m = init_vals.iter().max().unwrap();
    Some(Verdict {
        outcome: Outcome::NotDense,
        rule: "order-k valuation".into(),
        hypotheses: vec![
            Hypothesis::new(format!("nu_{p}(a_{k}) = 0"), vak),
            Hypothesis::new(format!("min nu_{p}(a_j), 1 <= j < {k}"), lead_min),
            Hypothesis::new(
                format!("max nu_{p}(x_m) - nu_{p}(x_n), 0 <= m,n < {k}"),
                spread,
            ),
        ],
        notes: vec![format!(
            "quotient valuations bounded by M = {bound_m} (max initial valuation)"
        )],
    })
}

/// Exhaustive divisibility scan for the Lucas-type companion sequence
/// b_0 = 2, b_1 = r: true iff some b_n with n >= 1 is divisible by p.
/// One full period of the state vector mod p covers every reachable
/// state, so the scan is decisive.
pub fn lucas_family_divisibility(r: &BigInt, s: &BigInt, p: u64) -> Result<bool> {
    require_prime(p)?;
    if p == 2 {
        return Err(Error::InvalidSpec(
            "lucas_family_divisibility is only stated for odd primes".into(),
        ));
    }
    let spec = RecurrenceSpec::general(
        vec![r.clone(), s.clone()],
        vec![BigInt::from(2), r.clone()],
    )?;
    let ctx = PadicContext::new(p, 1)?;
    let (pre, period) = find_period_mod(&spec, &ctx)?;
    let residues = generate_terms_mod(&spec, &ctx, pre + period)?;
    Ok(residues.iter().skip(1).any(Zero::is_zero))
}

/// The three second-order rules: the (a)/(b) dichotomy for init (0, 1),
/// the divisibility criterion for init (2, r), and the square-coefficient
/// uniform-distribution rule.
pub fn rule_second_order(family: &FamilyMatch, p: u64) -> Result<Option<Verdict>> {
    match family {
        FamilyMatch::GarciaA { r, s } => {
            let vs = vp_int(s, p);
            let vr = vp_int(r, p);
            if vs == Valuation::Finite(0) {
                return Ok(Some(Verdict {
                    outcome: Outcome::Dense,
                    rule: "second-order (b)".into(),
                    hypotheses: vec![Hypothesis::new(format!("nu_{p}(s) = 0"), vs)],
                    notes: vec![],
                }));
            }
            if vr == Valuation::Finite(0) {
                return Ok(Some(Verdict {
                    outcome: Outcome::NotDense,
                    rule: "second-order (a)".into(),
                    hypotheses: vec![
                        Hypothesis::new(format!("nu_{p}(s) >= 1"), vs),
                        Hypothesis::new(format!("nu_{p}(r) = 0"), vr),
                    ],
                    notes: vec![],
                }));
            }
            Ok(None)
        }
        FamilyMatch::GarciaB { r, s } => {
            if p == 2 {
                // the divisibility criterion is only stated for odd primes
                return Ok(None);
            }
            let divisible = lucas_family_divisibility(r, s, p)?;
            let hyp = Hypothesis::new(
                format!("exists n >= 1 with {p} | b_n (full period scan)"),
                divisible,
            );
            Ok(Some(Verdict {
                outcome: if divisible {
                    Outcome::Dense
                } else {
                    Outcome::NotDense
                },
                rule: "second-order (c)".into(),
                hypotheses: vec![hyp],
                notes: vec![],
            }))
        }
        FamilyMatch::SquareForm { a, x0, x1 } => {
            let crit = a * (x1 - a * x0);
            if vp_int(&crit, p) == Valuation::Finite(0) {
                return Ok(Some(Verdict {
                    outcome: Outcome::Dense,
                    rule: "square-form".into(),
                    hypotheses: vec![Hypothesis::new(
                        format!("nu_{p}(a*(x1 - a*x0)) = 0"),
                        &crit,
                    )],
                    notes: vec![
                        "terms are uniformly distributed modulo every power of p".into(),
                    ],
                }));
            }
            Ok(None)
        }
        _ => Ok(None),
    }
}

/// Sufficient condition for the third-order family with unit tail:
/// (a+b)(b-a-2) < 0 and an irreducible characteristic cubic over Q_p.
pub fn rule_third_order_dense(a: &BigInt, b: &BigInt, p: u64) -> Result<Option<Verdict>> {
    let sign_product = (a + b) * (b - a - BigInt::from(2));
    if !sign_product.is_negative() {
        return Ok(None);
    }
    let poly = CubicPoly::characteristic(a, b);
    if discriminant_cubic(&poly).is_zero() {
        // repeated algebraic root: the sufficient condition says nothing
        return Ok(None);
    }
    if !is_irreducible_cubic_over_qp(&poly, p)? {
        return Ok(None);
    }
    Ok(Some(Verdict {
        outcome: Outcome::Dense,
        rule: "third-order unit-tail".into(),
        hypotheses: vec![
            Hypothesis::new("(a+b)(b-a-2) < 0", sign_product),
            Hypothesis::new(format!("{poly} irreducible over Q_{p}"), true),
        ],
        notes: vec![],
    }))
}

fn geometric_verdict(x0: &BigInt, a: &BigInt, r: &BigInt, p: u64) -> Verdict {
    let leading = a * x0 * (a + r);
    let mut notes = Vec::new();
    if leading.is_zero() {
        notes.push(
            "degenerate: the sequence is eventually zero, so the quotient set is finite"
                .to_string(),
        );
    }
    Verdict {
        outcome: Outcome::NotDense,
        rule: "full-history geometric".into(),
        hypotheses: vec![Hypothesis::new(
            format!("terms form a geometric progression a*x0*(a+r)^(n-1), never dense in Q_{p}"),
            format!("a*x0*(a+r) = {leading}"),
        )],
        notes,
    }
}

/// Applies every rule whose template the spec matches and returns the
/// verdict, erroring if a Dense rule and a NotDense rule both fire.
pub fn classify(spec: &RecurrenceSpec, p: u64) -> Result<Verdict> {
    require_prime(p)?;
    spec.validate()?;
    let mut fired: Vec<Verdict> = Vec::new();
    match spec {
        RecurrenceSpec::FullHistoryArithmetic => fired.push(Verdict {
            outcome: Outcome::Dense,
            rule: "full-history arithmetic".into(),
            hypotheses: vec![Hypothesis::new(
                "terms equal F(2n), whose quotient set is dense in every Q_p",
                true,
            )],
            notes: vec![],
        }),
        RecurrenceSpec::FullHistoryGeometric { x0, a, r } => {
            fired.push(geometric_verdict(x0, a, r, p))
        }
        RecurrenceSpec::GeneralOrderK { .. } => {
            if let Some(v) = rule_not_dense_order_k(spec, p) {
                fired.push(v);
            }
            for family in match_families(spec) {
                if let Some(v) = rule_second_order(&family, p)? {
                    fired.push(v);
                }
                if let FamilyMatch::ThirdOrderUnitTail { a, b } = &family {
                    if let Some(v) = rule_third_order_dense(a, b, p)? {
                        fired.push(v);
                    }
                }
            }
        }
    }
    let any_dense = fired.iter().any(|v| v.outcome == Outcome::Dense);
    let any_not_dense = fired.iter().any(|v| v.outcome == Outcome::NotDense);
    if any_dense && any_not_dense {
        return Err(Error::Inconsistent(format!(
            "rules disagree for p = {p}: {:?}",
            fired.iter().map(|v| &v.rule).collect::<Vec<_>>()
        )));
    }
    Ok(fired.into_iter().next().unwrap_or_else(|| {
        Verdict::unknown(vec![format!(
            "no theorem rule applies at p = {p}; run the probe for empirical evidence"
        )])
    }))
}
