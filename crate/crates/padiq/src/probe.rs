//! Brute-force empirical evidence: residue coverage of quotient sets
//! modulo p^k, quotient-valuation spectra, uniformity histograms, and the
//! witness indices from the full-history density argument.
//!
//! Probes work on exact big-integer terms, never on modular streams: a
//! modular stream cannot certify a valuation larger than its own
//! precision. The probe reports evidence only; it never emits a verdict.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::padic::{mod_inverse, require_prime, vp_int, PadicContext, Valuation};
use crate::recurrence::{fib, generate_terms, generate_terms_mod, RecurrenceSpec};

/// Probes refuse moduli beyond this many residues.
pub const MODULUS_GUARD: u64 = 1_000_000;

/// Residue-coverage and valuation-spectrum evidence for one probe run.
#[derive(Debug, Clone)]
pub struct CoverageReport {
    pub p: u64,
    pub precision: u32,
    pub terms_used: usize,
    pub modulus: u64,
    /// Residue t -> first witness pair (n, m) with
    /// nu_p(x_n - t*x_m) >= k + nu_p(x_m).
    pub covered: BTreeMap<u64, (usize, usize)>,
    /// |covered| / p^k in lowest terms.
    pub coverage_ratio: (u64, u64),
    /// Observed set of nu_p(x_n) - nu_p(x_m) over nonzero terms.
    pub valuation_spectrum: BTreeSet<i64>,
    /// Heuristic only: the spectrum did not grow over the last half of
    /// the scan.
    pub spectrum_bounded_hint: bool,
}

impl CoverageReport {
    pub fn is_full(&self) -> bool {
        self.coverage_ratio == (1, 1)
    }
}

/// Valuation differences clipped to a window.
#[derive(Debug, Clone)]
pub struct SpectrumReport {
    pub values: BTreeSet<i64>,
    pub out_of_window: bool,
}

fn guarded_modulus(p: u64, k: u32) -> Result<u64> {
    let m = (p as u128).checked_pow(k);
    match m {
        Some(m) if m <= MODULUS_GUARD as u128 => Ok(m as u64),
        _ => Err(Error::ResourceGuard(format!(
            "modulus p^k exceeds {MODULUS_GUARD}"
        ))),
    }
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

struct TermClasses {
    /// valuation -> (unit residue mod p^k -> smallest term index)
    classes: BTreeMap<i64, BTreeMap<u64, usize>>,
    zero_indices: Vec<usize>,
}

fn classify_terms(terms: &[BigInt], p: u64, m: u64) -> TermClasses {
    let mbig = BigInt::from(m);
    let pbig = BigInt::from(p);
    let mut classes: BTreeMap<i64, BTreeMap<u64, usize>> = BTreeMap::new();
    let mut zero_indices = Vec::new();
    for (i, x) in terms.iter().enumerate() {
        match vp_int(x, p) {
            Valuation::Infinity => zero_indices.push(i),
            Valuation::Finite(v) => {
                let unit = x / pbig.pow(u32::try_from(v).expect("term valuation fits u32"));
                let residue = u64::try_from(unit.mod_floor(&mbig)).unwrap();
                classes.entry(v).or_default().entry(residue).or_insert(i);
            }
        }
    }
    TermClasses {
        classes,
        zero_indices,
    }
}

fn spectrum_of(classes: &BTreeMap<i64, BTreeMap<u64, usize>>) -> BTreeSet<i64> {
    let vals: Vec<i64> = classes.keys().copied().collect();
    let mut spectrum = BTreeSet::new();
    for &a in &vals {
        for &b in &vals {
            spectrum.insert(a - b);
        }
    }
    spectrum
}

/// Which residues t mod p^k are p-adically approximated by some quotient
/// x_n / x_m to precision k, i.e. nu_p(x_n - t*x_m) >= k + nu_p(x_m).
///
/// Works per valuation class on unit parts: a pair with nu_p(x_n) >=
/// nu_p(x_m) hits exactly t = p^(v_n - v_m) * u_n * u_m^(-1) mod p^k, and
/// a pair with nu_p(x_n) < nu_p(x_m) hits nothing.
pub fn residue_coverage(
    spec: &RecurrenceSpec,
    p: u64,
    precision: u32,
    n_terms: usize,
) -> Result<CoverageReport> {
    require_prime(p)?;
    let m = guarded_modulus(p, precision)?;
    let seq = generate_terms(spec, n_terms)?;
    let all = classify_terms(seq.terms(), p, m);

    let mut covered: BTreeMap<u64, (usize, usize)> = BTreeMap::new();
    let mut record = |t: u64, n: usize, mm: usize| {
        let entry = covered.entry(t).or_insert((n, mm));
        if (n, mm) < *entry {
            *entry = (n, mm);
        }
    };

    // a zero term approximates t = 0 against any nonzero denominator
    if let Some(&zn) = all.zero_indices.first() {
        let min_nonzero = all
            .classes
            .values()
            .flat_map(|units| units.values())
            .copied()
            .min();
        if let Some(m0) = min_nonzero {
            record(0, zn, m0);
        }
    }

    let mbig = BigInt::from(m);
    for (&vm, units_m) in &all.classes {
        for (&um, &im) in units_m {
            let inv = mod_inverse(&BigInt::from(um), &mbig.to_biguint().unwrap())?;
            let inv = u64::try_from(&inv).unwrap();
            for (&vn, units_n) in all.classes.range(vm..) {
                let e = (vn - vm) as u32;
                // p^e mod p^k collapses to 0 once e >= k
                let pe = if e >= precision {
                    0
                } else {
                    (p as u128).pow(e) as u64 % m
                };
                let scale = mul_mod(pe, inv, m);
                for (&un, &in_) in units_n {
                    record(mul_mod(scale, un, m), in_, im);
                }
            }
        }
    }

    let g = (covered.len() as u64).gcd(&m);
    let coverage_ratio = if covered.is_empty() {
        (0, m)
    } else {
        (covered.len() as u64 / g, m / g)
    };

    let valuation_spectrum = spectrum_of(&all.classes);
    let half = classify_terms(&seq.terms()[..=n_terms / 2], p, m);
    let spectrum_bounded_hint = spectrum_of(&half.classes) == valuation_spectrum;

    Ok(CoverageReport {
        p,
        precision,
        terms_used: n_terms,
        modulus: m,
        covered,
        coverage_ratio,
        valuation_spectrum,
        spectrum_bounded_hint,
    })
}

/// Exact set of nu_p(x_n) - nu_p(x_m) over nonzero terms with n, m <=
/// n_terms, clipped to [-window, window].
pub fn quotient_valuation_spectrum(
    spec: &RecurrenceSpec,
    p: u64,
    n_terms: usize,
    window: i64,
) -> Result<SpectrumReport> {
    require_prime(p)?;
    let seq = generate_terms(spec, n_terms)?;
    let mut vals = BTreeSet::new();
    for x in seq.terms() {
        if let Valuation::Finite(v) = vp_int(x, p) {
            vals.insert(v);
        }
    }
    let mut values = BTreeSet::new();
    let mut out_of_window = false;
    for &a in &vals {
        for &b in &vals {
            let d = a - b;
            if d.abs() <= window {
                values.insert(d);
            } else {
                out_of_window = true;
            }
        }
    }
    Ok(SpectrumReport {
        values,
        out_of_window,
    })
}

/// Histogram of x_0..x_N modulo p^k, one count per residue.
pub fn uniformity_histogram(
    spec: &RecurrenceSpec,
    p: u64,
    precision: u32,
    n_terms: usize,
) -> Result<Vec<u64>> {
    require_prime(p)?;
    let m = guarded_modulus(p, precision)?;
    let ctx = PadicContext::new(p, precision)?;
    let residues = generate_terms_mod(spec, &ctx, n_terms)?;
    let mut counts = vec![0u64; m as usize];
    for r in residues {
        counts[usize::try_from(&r).unwrap()] += 1;
    }
    Ok(counts)
}

/// Witness index from the full-history density argument: the least m <=
/// bound with nu_p(F_m) >= level, returned with k = m * p^(level-1) * (p-1).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Witness {
    pub m: u64,
    pub k: u64,
}

pub fn witness_index(p: u64, level: u32, bound: u64) -> Result<Witness> {
    require_prime(p)?;
    if level == 0 {
        return Err(Error::InvalidSpec("witness level must be >= 1".into()));
    }
    let target = Valuation::Finite(level as i64);
    let mut a = BigInt::zero(); // F_0
    let mut b = BigInt::from(1); // F_1
    for m in 1..=bound {
        std::mem::swap(&mut a, &mut b); // a = F_m
        b += &a; // b = F_{m+1}
        if vp_int(&a, p) >= target {
            let k = (m as u128)
                .checked_mul((p as u128).pow(level - 1))
                .and_then(|x| x.checked_mul(p as u128 - 1))
                .filter(|&x| x <= u64::MAX as u128)
                .ok_or_else(|| {
                    Error::ResourceGuard("witness index k overflows u64".into())
                })?;
            return Ok(Witness { m, k: k as u64 });
        }
    }
    Err(Error::SearchExhausted {
        prime: p,
        level,
        bound,
    })
}

/// Checks the proof congruence x_{kn}/x_k = n (mod p^level) for the
/// full-history arithmetic sequence x_i = F(2i), division-free:
/// nu_p(F(2kn) - n*F(2k)) >= level + nu_p(F(2k)) for all 1 <= n <= nmax.
pub fn verify_witness(p: u64, level: u32, k: u64, nmax: u64) -> Result<bool> {
    require_prime(p)?;
    let xk = fib(2 * k);
    let vk = match vp_int(&xk, p) {
        Valuation::Finite(v) => v,
        Valuation::Infinity => return Ok(false), // only F_0 = 0, so k = 0
    };
    let need = Valuation::Finite(level as i64 + vk);
    for n in 1..=nmax {
        let xkn = fib(2 * k * n);
        let diff = &xkn - BigInt::from(n) * &xk;
        if vp_int(&diff, p) < need {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::padic::vp_rat;

    fn bigs(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn general(coeffs: &[i64], init: &[i64]) -> RecurrenceSpec {
        RecurrenceSpec::general(bigs(coeffs), bigs(init)).unwrap()
    }

    fn fibonacci() -> RecurrenceSpec {
        general(&[1, 1], &[0, 1])
    }

    #[test]
    fn fibonacci_mod_2_full_coverage() {
        let report = residue_coverage(&fibonacci(), 2, 1, 10).unwrap();
        assert_eq!(report.coverage_ratio, (1, 1));
        assert!(report.covered.contains_key(&0));
        assert!(report.covered.contains_key(&1));
    }

    #[test]
    fn bounded_valuations_block_zero_coverage() {
        let spec = general(&[5, 1], &[1, 1]);
        let report = residue_coverage(&spec, 5, 1, 200).unwrap();
        assert!(!report.covered.contains_key(&0));
        assert!(report.covered.keys().all(|&t| t % 5 != 0));
        assert!(report.coverage_ratio.0 * 5 <= report.coverage_ratio.1 * 4);
        assert_eq!(
            report.valuation_spectrum,
            BTreeSet::from([0]),
            "all terms are 5-adic units"
        );
        assert!(report.spectrum_bounded_hint);
    }

    #[test]
    fn self_quotient_covers_one() {
        for spec in [fibonacci(), general(&[3, -2, 5], &[1, 0, 2])] {
            let report = residue_coverage(&spec, 3, 2, 30).unwrap();
            assert!(report.covered.contains_key(&1));
        }
    }

    #[test]
    fn coverage_witnesses_are_valid_and_deterministic() {
        let report = residue_coverage(&fibonacci(), 3, 2, 40).unwrap();
        let seq = generate_terms(&fibonacci(), 40).unwrap();
        for (&t, &(n, m)) in &report.covered {
            let xm = &seq.terms()[m];
            assert!(!xm.is_zero());
            let vm = vp_int(xm, 3).finite().unwrap();
            let diff = &seq.terms()[n] - BigInt::from(t) * xm;
            assert!(
                vp_int(&diff, 3) >= Valuation::Finite(2 + vm),
                "t={t} witness ({n},{m})"
            );
        }
        let again = residue_coverage(&fibonacci(), 3, 2, 40).unwrap();
        assert_eq!(report.covered, again.covered);
    }

    #[test]
    fn coverage_monotone_in_term_count() {
        let spec = general(&[1, 1], &[2, 1]);
        let mut previous: Option<BTreeMap<u64, (usize, usize)>> = None;
        for n in [10usize, 40, 160] {
            let report = residue_coverage(&spec, 5, 2, n).unwrap();
            if let Some(prev) = &previous {
                for t in prev.keys() {
                    assert!(report.covered.contains_key(t), "lost residue {t} at N={n}");
                }
            }
            previous = Some(report.covered);
        }
    }

    #[test]
    fn coverage_consistent_across_precision() {
        let report2 = residue_coverage(&fibonacci(), 3, 2, 60).unwrap();
        let report1 = residue_coverage(&fibonacci(), 3, 1, 60).unwrap();
        for &t in report2.covered.keys() {
            assert!(report1.covered.contains_key(&(t % 3)));
        }
    }

    /// The bucketed division-free criterion must agree with the direct
    /// rational-arithmetic definition of quotient approximation.
    #[test]
    fn division_free_criterion_matches_rational_oracle() {
        let cases = [
            (fibonacci(), 2u64, 2u32),
            (fibonacci(), 5, 3),
            (general(&[1, 1], &[2, 1]), 5, 2),
            (general(&[2, 4], &[1, 3]), 2, 3),
            (general(&[5, 1], &[1, 1]), 5, 1),
        ];
        for (spec, p, k) in cases {
            let n = 50usize;
            let report = residue_coverage(&spec, p, k, n).unwrap();
            let seq = generate_terms(&spec, n).unwrap();
            let m = (p as i64).pow(k) as u64;
            for t in 0..m {
                let mut reachable = false;
                'outer: for xm in seq.terms() {
                    if xm.is_zero() {
                        continue;
                    }
                    for xn in seq.terms() {
                        // nu_p(x_n/x_m - t) >= k, as a rational
                        let num = xn - BigInt::from(t) * xm;
                        if vp_rat(&num, xm, p).unwrap() >= Valuation::Finite(k as i64) {
                            reachable = true;
                            break 'outer;
                        }
                    }
                }
                assert_eq!(
                    report.covered.contains_key(&t),
                    reachable,
                    "spec={spec:?} p={p} k={k} t={t}"
                );
            }
        }
    }

    #[test]
    fn spectrum_examples() {
        let s = quotient_valuation_spectrum(&general(&[5, 1], &[1, 1]), 5, 500, 5).unwrap();
        assert_eq!(s.values, BTreeSet::from([0]));
        assert!(!s.out_of_window);

        let s = quotient_valuation_spectrum(&fibonacci(), 2, 50, 4).unwrap();
        for d in -3..=3 {
            assert!(s.values.contains(&d), "missing {d}");
        }

        let geo = RecurrenceSpec::full_history_geometric(
            BigInt::from(1),
            BigInt::from(2),
            BigInt::from(1),
        )
        .unwrap();
        let s = quotient_valuation_spectrum(&geo, 3, 100, 3).unwrap();
        assert_eq!(s.values, (-3..=3).collect());
        assert!(s.out_of_window);
    }

    #[test]
    fn histogram_examples() {
        // x_n = n is exactly equidistributed
        let spec = general(&[2, -1], &[0, 1]);
        let counts = uniformity_histogram(&spec, 3, 2, 8999).unwrap();
        assert_eq!(counts, vec![1000u64; 9]);

        // no term of the bounded-valuation sequence is divisible by 5
        let counts = uniformity_histogram(&general(&[5, 1], &[1, 1]), 5, 1, 500).unwrap();
        assert_eq!(counts[0], 0);
    }

    #[test]
    fn histogram_guard() {
        assert!(matches!(
            uniformity_histogram(&fibonacci(), 2, 21, 10),
            Err(Error::ResourceGuard(_))
        ));
    }

    #[test]
    fn witness_examples() {
        assert_eq!(witness_index(2, 2, 50).unwrap(), Witness { m: 6, k: 12 });
        assert_eq!(witness_index(5, 1, 50).unwrap(), Witness { m: 5, k: 20 });
        assert!(matches!(
            witness_index(3, 1, 2),
            Err(Error::SearchExhausted { .. })
        ));
    }

    #[test]
    fn verify_witness_examples() {
        assert!(verify_witness(2, 2, 12, 20).unwrap());
        assert!(verify_witness(5, 1, 20, 20).unwrap());
        // n = 1 alone is trivially satisfied for any k
        assert!(verify_witness(7, 1, 3, 1).unwrap());
    }
}
