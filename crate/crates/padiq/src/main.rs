use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use num_bigint::BigInt;

use padiq::classifier::{classify, lucas_family_divisibility};
use padiq::error::{Error, Result};
use padiq::padic::PadicContext;
use padiq::polyqp::{discriminant_cubic, is_irreducible_cubic_over_qp, CubicPoly};
use padiq::probe::{residue_coverage, verify_witness, witness_index};
use padiq::recurrence::{generate_terms, generate_terms_mod, RecurrenceSpec};
use padiq::report::Report;
use padiq::specfile::{parse_spec, serialize_spec};

#[derive(Parser)]
#[command(
    name = "padiq",
    version,
    about = "Classify p-adic density of quotient sets of linear recurrences"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Classify density of the quotient set in Q_p by theorem rules
    Classify {
        /// Recurrence spec file
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        prime: u64,
        /// Emit one machine-readable JSON object
        #[arg(long)]
        json: bool,
        /// Attach brute-force coverage evidence
        #[arg(long)]
        probe: bool,
        /// Probe precision k (coverage modulo p^k)
        #[arg(long, default_value_t = 2)]
        precision: u32,
        /// Probe term count
        #[arg(long, default_value_t = 2000)]
        terms: usize,
    },
    /// Print recurrence terms, exactly or modulo p^k
    Terms {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        count: usize,
        /// Reduce modulo this prime
        #[arg(long = "mod")]
        modulus: Option<u64>,
        /// Power of the prime to reduce by
        #[arg(long, default_value_t = 1)]
        precision: u32,
    },
    /// Residue coverage and valuation spectrum of the quotient set
    Probe {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        prime: u64,
        #[arg(long)]
        precision: u32,
        #[arg(long)]
        terms: usize,
        #[arg(long)]
        json: bool,
    },
    /// Is the monic cubic x^3 + c2 x^2 + c1 x + c0 irreducible over Q_p?
    Irreducible {
        /// Coefficients c2,c1,c0
        #[arg(long, allow_hyphen_values = true)]
        cubic: String,
        #[arg(long)]
        prime: u64,
    },
    /// Witness index k with x_{kn}/x_k = n (mod p^level) for the
    /// arithmetic full-history sequence
    Witness {
        #[arg(long)]
        prime: u64,
        #[arg(long)]
        level: u32,
        /// Verify the congruence for n = 1..NMAX
        #[arg(long, value_name = "NMAX")]
        verify: Option<u64>,
        /// Search bound for the Fibonacci index
        #[arg(long, default_value_t = 10_000)]
        bound: u64,
    },
    /// Does p divide some term of the companion sequence b_0 = 2, b_1 = r?
    LucasCheck {
        #[arg(long, allow_hyphen_values = true)]
        r: i64,
        #[arg(long, allow_hyphen_values = true)]
        s: i64,
        #[arg(long)]
        prime: u64,
    },
}

fn load_spec(path: &PathBuf) -> Result<RecurrenceSpec> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::InvalidSpec(format!("cannot read {}: {e}", path.display())))?;
    parse_spec(&text)
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Classify {
            spec,
            prime,
            json,
            probe,
            precision,
            terms,
        } => {
            let spec = load_spec(&spec)?;
            let verdict = classify(&spec, prime)?;
            let mut report = Report::new()
                .with_verdict(&verdict)
                .with_input(serialize_spec(&spec).replace('\n', "; "));
            if probe {
                let coverage = residue_coverage(&spec, prime, precision, terms)?;
                report = report.with_coverage(&coverage);
            }
            print!("{}", if json { report.to_json() + "\n" } else { report.to_text() });
        }
        Command::Terms {
            spec,
            count,
            modulus,
            precision,
        } => {
            let spec = load_spec(&spec)?;
            match modulus {
                Some(p) => {
                    let ctx = PadicContext::new(p, precision)?;
                    for (n, r) in generate_terms_mod(&spec, &ctx, count)?.iter().enumerate() {
                        println!("x_{n} = {r}  (mod {p}^{precision})");
                    }
                }
                None => {
                    for (n, x) in generate_terms(&spec, count)?.terms().iter().enumerate() {
                        println!("x_{n} = {x}");
                    }
                }
            }
        }
        Command::Probe {
            spec,
            prime,
            precision,
            terms,
            json,
        } => {
            let spec = load_spec(&spec)?;
            let coverage = residue_coverage(&spec, prime, precision, terms)?;
            let report = Report::new()
                .with_coverage(&coverage)
                .with_input(serialize_spec(&spec).replace('\n', "; "));
            print!("{}", if json { report.to_json() + "\n" } else { report.to_text() });
        }
        Command::Irreducible { cubic, prime } => {
            let parts: Vec<&str> = cubic.split(',').collect();
            if parts.len() != 3 {
                return Err(Error::InvalidSpec(format!(
                    "--cubic expects c2,c1,c0, got {cubic:?}"
                )));
            }
            let coeff = |s: &str| -> Result<BigInt> {
                s.trim()
                    .parse()
                    .map_err(|_| Error::InvalidSpec(format!("bad coefficient {s:?}")))
            };
            let f = CubicPoly::new(coeff(parts[0])?, coeff(parts[1])?, coeff(parts[2])?);
            let irreducible = is_irreducible_cubic_over_qp(&f, prime)?;
            println!("polynomial: {f}");
            println!("discriminant: {}", discriminant_cubic(&f));
            println!("irreducible over Q_{prime}: {irreducible}");
        }
        Command::Witness {
            prime,
            level,
            verify,
            bound,
        } => {
            let w = witness_index(prime, level, bound)?;
            print!("m={} (nu_{prime}(F_{}) >= {level}), k={}", w.m, w.m, w.k);
            if let Some(nmax) = verify {
                let ok = verify_witness(prime, level, w.k, nmax)?;
                print!(", verified={ok} (n up to {nmax})");
            }
            println!();
        }
        Command::LucasCheck { r, s, prime } => {
            let divisible = lucas_family_divisibility(&BigInt::from(r), &BigInt::from(s), prime)?;
            println!(
                "exists n >= 1 with {prime} | b_n (b_0 = 2, b_1 = {r}, b_n = {r} b_(n-1) + {s} b_(n-2)): {divisible}"
            );
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
