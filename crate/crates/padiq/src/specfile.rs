//! Line-oriented key = value format for recurrence specs.
//!
//! ```text
//! # Fibonacci
//! kind = general
//! order = 2
//! coeffs = 1, 1
//! init = 0, 1
//! ```

use std::collections::HashMap;

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::recurrence::RecurrenceSpec;

fn parse_int(s: &str, line: usize) -> Result<BigInt> {
    s.trim()
        .parse()
        .map_err(|_| Error::Parse {
            line,
            msg: format!("expected an integer, got {:?}", s.trim()),
        })
}

fn parse_int_list(s: &str, line: usize) -> Result<Vec<BigInt>> {
    s.split(',').map(|tok| parse_int(tok, line)).collect()
}

/// Parses the spec document; errors carry the offending line number.
pub fn parse_spec(text: &str) -> Result<RecurrenceSpec> {
    let mut fields: HashMap<&str, (String, usize)> = HashMap::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(Error::Parse {
                line: line_no,
                msg: format!("expected key = value, got {line:?}"),
            });
        };
        let key = key.trim();
        let known = ["kind", "order", "coeffs", "init", "x0", "a", "r"];
        let Some(&key) = known.iter().find(|&&k| k == key) else {
            return Err(Error::Parse {
                line: line_no,
                msg: format!("unknown key {key:?}"),
            });
        };
        if fields.insert(key, (value.trim().to_string(), line_no)).is_some() {
            return Err(Error::Parse {
                line: line_no,
                msg: format!("duplicate key {key:?}"),
            });
        }
    }
    let Some((kind, kind_line)) = fields.remove("kind") else {
        return Err(Error::Parse {
            line: 1,
            msg: "missing required key \"kind\"".into(),
        });
    };
    let take = |fields: &mut HashMap<&str, (String, usize)>, key: &str| -> Result<(String, usize)> {
        fields.remove(key).ok_or_else(|| Error::Parse {
            line: kind_line,
            msg: format!("kind {kind:?} requires key {key:?}"),
        })
    };
    let spec = match kind.as_str() {
        "general" => {
            let (order_s, order_line) = take(&mut fields, "order")?;
            let order: usize = order_s.parse().map_err(|_| Error::Parse {
                line: order_line,
                msg: format!("order must be a positive integer, got {order_s:?}"),
            })?;
            let (coeffs_s, coeffs_line) = take(&mut fields, "coeffs")?;
            let coeffs = parse_int_list(&coeffs_s, coeffs_line)?;
            if coeffs.len() != order {
                return Err(Error::Parse {
                    line: coeffs_line,
                    msg: format!("expected {order} coefficients, got {}", coeffs.len()),
                });
            }
            let (init_s, init_line) = take(&mut fields, "init")?;
            let init = parse_int_list(&init_s, init_line)?;
            if init.len() != order {
                return Err(Error::Parse {
                    line: init_line,
                    msg: format!("expected {order} initial values, got {}", init.len()),
                });
            }
            RecurrenceSpec::GeneralOrderK { coeffs, init }
        }
        "full_history_arithmetic" => RecurrenceSpec::FullHistoryArithmetic,
        "full_history_geometric" => {
            let (x0_s, x0_line) = take(&mut fields, "x0")?;
            let (a_s, a_line) = take(&mut fields, "a")?;
            let (r_s, r_line) = take(&mut fields, "r")?;
            RecurrenceSpec::FullHistoryGeometric {
                x0: parse_int(&x0_s, x0_line)?,
                a: parse_int(&a_s, a_line)?,
                r: parse_int(&r_s, r_line)?,
            }
        }
        other => {
            return Err(Error::Parse {
                line: kind_line,
                msg: format!(
                    "unknown kind {other:?} (expected general, full_history_arithmetic, \
                     or full_history_geometric)"
                ),
            })
        }
    };
    if let Some((key, (_, line))) = fields.iter().next() {
        return Err(Error::Parse {
            line: *line,
            msg: format!("key {key:?} does not apply to kind {kind:?}"),
        });
    }
    spec.validate()?;
    Ok(spec)
}

fn join(values: &[BigInt]) -> String {
    values
        .iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join(", ")
}

/// Canonical serialization; `parse_spec(serialize_spec(s)) == s`.
pub fn serialize_spec(spec: &RecurrenceSpec) -> String {
    match spec {
        RecurrenceSpec::GeneralOrderK { coeffs, init } => format!(
            "kind = general\norder = {}\ncoeffs = {}\ninit = {}\n",
            coeffs.len(),
            join(coeffs),
            join(init)
        ),
        RecurrenceSpec::FullHistoryArithmetic => "kind = full_history_arithmetic\n".into(),
        RecurrenceSpec::FullHistoryGeometric { x0, a, r } => {
            format!("kind = full_history_geometric\nx0 = {x0}\na = {a}\nr = {r}\n")
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parses_fibonacci() {
        let spec = parse_spec("kind=general\norder=2\ncoeffs=1,1\ninit=0,1").unwrap();
        assert_eq!(
            spec,
            RecurrenceSpec::GeneralOrderK {
                coeffs: vec![BigInt::from(1), BigInt::from(1)],
                init: vec![BigInt::from(0), BigInt::from(1)],
            }
        );
    }

    #[test]
    fn parses_geometric() {
        let spec = parse_spec("kind=full_history_geometric\nx0=1\na=2\nr=1").unwrap();
        assert_eq!(
            spec,
            RecurrenceSpec::FullHistoryGeometric {
                x0: BigInt::from(1),
                a: BigInt::from(2),
                r: BigInt::from(1),
            }
        );
    }

    #[test]
    fn comments_and_whitespace() {
        let spec = parse_spec(
            "# Lucas numbers\n\n kind = general  # fixed order\norder = 2\n coeffs = 1 , 1\ninit = 2, 1\n",
        )
        .unwrap();
        assert_eq!(
            spec,
            RecurrenceSpec::GeneralOrderK {
                coeffs: vec![BigInt::from(1), BigInt::from(1)],
                init: vec![BigInt::from(2), BigInt::from(1)],
            }
        );
    }

    #[test]
    fn rejects_zero_trailing_coefficient() {
        let err = parse_spec("kind=general\norder=2\ncoeffs=1,0\ninit=0,1").unwrap_err();
        assert!(matches!(err, Error::InvalidSpec(_)));
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        match parse_spec("kind=general\norder=2\ncoeffs=1,q\ninit=0,1") {
            Err(Error::Parse { line: 3, .. }) => {}
            other => panic!("expected parse error at line 3, got {other:?}"),
        }
        match parse_spec("kind=general\norder=2\ncoeffs=1,2,3\ninit=0,1") {
            Err(Error::Parse { line: 3, .. }) => {}
            other => panic!("expected arity error at line 3, got {other:?}"),
        }
        match parse_spec("kind=nonsense") {
            Err(Error::Parse { line: 1, .. }) => {}
            other => panic!("expected kind error, got {other:?}"),
        }
        match parse_spec("order=2") {
            Err(Error::Parse { .. }) => {}
            other => panic!("expected missing-kind error, got {other:?}"),
        }
        match parse_spec("kind=full_history_arithmetic\norder=2") {
            Err(Error::Parse { line: 2, .. }) => {}
            other => panic!("expected stray-key error, got {other:?}"),
        }
    }

    #[test]
    fn canonical_form_is_stable() {
        let spec = parse_spec("kind = general\norder=2\ncoeffs= 6,-9\ninit=1, 4 # spread").unwrap();
        let canon = serialize_spec(&spec);
        assert_eq!(canon, "kind = general\norder = 2\ncoeffs = 6, -9\ninit = 1, 4\n");
        assert_eq!(serialize_spec(&parse_spec(&canon).unwrap()), canon);
    }

    fn arb_spec() -> impl Strategy<Value = RecurrenceSpec> {
        let general = (2usize..=4).prop_flat_map(|k| {
            (
                proptest::collection::vec(-20i64..=20, k),
                proptest::collection::vec(-20i64..=20, k),
            )
                .prop_filter_map("valid general spec", |(coeffs, init)| {
                    RecurrenceSpec::general(
                        coeffs.iter().map(|&c| BigInt::from(c)).collect(),
                        init.iter().map(|&c| BigInt::from(c)).collect(),
                    )
                    .ok()
                })
        });
        let geometric = (-20i64..=20, -20i64..=20, -20i64..=20).prop_filter_map(
            "valid geometric spec",
            |(x0, a, r)| {
                RecurrenceSpec::full_history_geometric(
                    BigInt::from(x0),
                    BigInt::from(a),
                    BigInt::from(r),
                )
                .ok()
            },
        );
        prop_oneof![
            general,
            geometric,
            Just(RecurrenceSpec::FullHistoryArithmetic)
        ]
    }

    proptest! {
        #[test]
        fn round_trip(spec in arb_spec()) {
            let text = serialize_spec(&spec);
            prop_assert_eq!(parse_spec(&text).unwrap(), spec);
        }
    }
}
