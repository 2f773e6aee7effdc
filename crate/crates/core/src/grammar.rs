//! Compact text grammar naming systems, observables, sequences and weights.
//!
//! The grammar is a stable interface used by the CLI and by config files:
//!
//! * systems: `rot:alpha=sqrt(2)-1`, `rot2:alpha1=1/3,alpha2=sqrt(2)`,
//!   `skew:alpha=(sqrt(5)-1)/2`
//! * observables: `char:1` / `char:0,1` (frequency vector),
//!   `arc:axis=0,a=1/3,b=2/3`
//! * sequences: `arith:q=3,r=1`, `beatty:theta=sqrt(2),gamma=0`, `primes`,
//!   `squarefree`, `beatty_primes:theta=sqrt(2),gamma=0`
//! * weights: `mangoldt`, `mangoldt_prime`, `mangoldt_wb:w=5,b=7`,
//!   `mangoldt_beatty:theta=sqrt(2),gamma=0`,
//!   `mangoldt_beatty_wb:theta=sqrt(2),gamma=0,w=3,b=1`,
//!   `indicator:<sequence>`, `exp:alpha=1/3`, `const`
//! * scan sequences (for spectrum runs): any weight, or `exp:alpha=...`
//!   for e(nα), `exp2:alpha=...` for e(n²α); a leading `seq:` tag is
//!   accepted and ignored.

use crate::dynsys::{Observable, TorusSystem};
use crate::numbers::{ExactScalar, parse_exact};
use crate::seqgen::{IndexKind, WeightKind};
use crate::{Complex64, e};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("spec parse error: {0}")]
pub struct GrammarError(pub String);

type Result<T> = std::result::Result<T, GrammarError>;

fn err(msg: impl Into<String>) -> GrammarError {
    GrammarError(msg.into())
}

/// Split "head:rest" (rest may be empty).
fn split_head(s: &str) -> (&str, &str) {
    match s.split_once(':') {
        Some((h, r)) => (h, r),
        None => (s, ""),
    }
}

/// Parse "k1=v1,k2=v2,..." with the given required keys, in any order.
fn keyed(rest: &str, keys: &[&str]) -> Result<Vec<String>> {
    let mut values: Vec<Option<String>> = vec![None; keys.len()];
    for part in rest.split(',').filter(|p| !p.is_empty()) {
        let (k, v) = part
            .split_once('=')
            .ok_or_else(|| err(format!("expected key=value, found {part:?}")))?;
        let idx = keys
            .iter()
            .position(|kk| *kk == k)
            .ok_or_else(|| err(format!("unknown key {k:?} (expected one of {keys:?})")))?;
        if values[idx].is_some() {
            return Err(err(format!("duplicate key {k:?}")));
        }
        values[idx] = Some(v.to_string());
    }
    values
        .into_iter()
        .enumerate()
        .map(|(i, v)| v.ok_or_else(|| err(format!("missing key {:?}", keys[i]))))
        .collect()
}

fn exact(s: &str) -> Result<ExactScalar> {
    parse_exact(s).map_err(|e| err(e.to_string()))
}

pub fn parse_system(s: &str) -> Result<TorusSystem> {
    let (head, rest) = split_head(s);
    match head {
        "rot" => {
            let v = keyed(rest, &["alpha"])?;
            Ok(TorusSystem::rotation1(exact(&v[0])?))
        }
        "rot2" => {
            let v = keyed(rest, &["alpha1", "alpha2"])?;
            Ok(TorusSystem::Rotation {
                alphas: vec![exact(&v[0])?, exact(&v[1])?],
            })
        }
        "skew" => {
            let v = keyed(rest, &["alpha"])?;
            Ok(TorusSystem::skew2(exact(&v[0])?))
        }
        _ => Err(err(format!("unknown system kind {head:?}"))),
    }
}

/// `dim` is the dimension the observable must act on (the system dimension,
/// or k·dim for pair-orbit observables).
pub fn parse_observable(s: &str, dim: usize) -> Result<Observable> {
    let (head, rest) = split_head(s);
    match head {
        "char" => {
            let freqs: Vec<i64> = rest
                .split(',')
                .map(|p| p.trim().parse::<i64>().map_err(|_| err(format!("bad frequency {p:?}"))))
                .collect::<Result<_>>()?;
            if freqs.len() != dim {
                return Err(err(format!(
                    "char frequency vector has {} entries, system dimension is {dim}",
                    freqs.len()
                )));
            }
            Ok(Observable::Character { freqs })
        }
        "arc" => {
            let v = keyed(rest, &["axis", "a", "b"])?;
            let axis: usize = v[0].parse().map_err(|_| err("bad axis"))?;
            if axis >= dim {
                return Err(err(format!("axis {axis} out of range for dimension {dim}")));
            }
            let a = exact(&v[1])?.to_f64().rem_euclid(1.0);
            let b = exact(&v[2])?.to_f64().rem_euclid(1.0);
            Ok(Observable::ArcIndicator { axis, a, b })
        }
        _ => Err(err(format!("unknown observable kind {head:?}"))),
    }
}

pub fn parse_index_kind(s: &str) -> Result<IndexKind> {
    let (head, rest) = split_head(s);
    match head {
        "arith" => {
            let v = keyed(rest, &["q", "r"])?;
            let q: i64 = v[0].parse().map_err(|_| err("bad q"))?;
            let r: i64 = v[1].parse().map_err(|_| err("bad r"))?;
            if q < 1 {
                return Err(err("q must be >= 1"));
            }
            Ok(IndexKind::Arithmetic { q, r })
        }
        "beatty" => {
            let v = keyed(rest, &["theta", "gamma"])?;
            Ok(IndexKind::Beatty { theta: exact(&v[0])?, gamma: exact(&v[1])? })
        }
        "primes" => Ok(IndexKind::Primes),
        "squarefree" => Ok(IndexKind::Squarefree),
        "beatty_primes" => {
            let v = keyed(rest, &["theta", "gamma"])?;
            Ok(IndexKind::BeattyPrimes { theta: exact(&v[0])?, gamma: exact(&v[1])? })
        }
        _ => Err(err(format!("unknown sequence kind {head:?}"))),
    }
}

pub fn parse_weight_kind(s: &str) -> Result<WeightKind> {
    let (head, rest) = split_head(s);
    match head {
        "mangoldt" => Ok(WeightKind::Mangoldt),
        "mangoldt_prime" => Ok(WeightKind::MangoldtPrime),
        "mangoldt_wb" => {
            let v = keyed(rest, &["w", "b"])?;
            Ok(WeightKind::MangoldtWb {
                w: v[0].parse().map_err(|_| err("bad w"))?,
                b: v[1].parse().map_err(|_| err("bad b"))?,
            })
        }
        "mangoldt_beatty" => {
            let v = keyed(rest, &["theta", "gamma"])?;
            Ok(WeightKind::MangoldtBeatty { theta: exact(&v[0])?, gamma: exact(&v[1])? })
        }
        "mangoldt_beatty_wb" => {
            let v = keyed(rest, &["theta", "gamma", "w", "b"])?;
            Ok(WeightKind::MangoldtBeattyWb {
                theta: exact(&v[0])?,
                gamma: exact(&v[1])?,
                w: v[2].parse().map_err(|_| err("bad w"))?,
                b: v[3].parse().map_err(|_| err("bad b"))?,
            })
        }
        "indicator" => {
            let kind = parse_index_kind(rest)?;
            // the sequence object is built by the caller with the right range
            Ok(WeightKind::Indicator(std::sync::Arc::new(
                crate::seqgen::IndexSequence::build(kind, 1).map_err(|e| err(e.to_string()))?,
            )))
        }
        "exp" => {
            let v = keyed(rest, &["alpha"])?;
            Ok(WeightKind::TrigPoly {
                terms: vec![(Complex64::new(1.0, 0.0), exact(&v[0])?)],
            })
        }
        "const" => {
            if rest.is_empty() {
                Ok(WeightKind::Const(Complex64::new(1.0, 0.0)))
            } else {
                let v = keyed(rest, &["c"])?;
                Ok(WeightKind::Const(Complex64::new(exact(&v[0])?.to_f64(), 0.0)))
            }
        }
        _ => Err(err(format!("unknown weight kind {head:?}"))),
    }
}

/// Sequence generator for spectrum scans.
#[derive(Debug, Clone)]
pub enum ScanSequence {
    /// e(nα)
    Exp(ExactScalar),
    /// e(n²α)
    Exp2(ExactScalar),
    Weight(WeightKind),
}

pub fn parse_scan_sequence(s: &str) -> Result<ScanSequence> {
    let s = s.strip_prefix("seq:").unwrap_or(s);
    let (head, rest) = split_head(s);
    match head {
        "exp" => {
            let v = keyed(rest, &["alpha"])?;
            Ok(ScanSequence::Exp(exact(&v[0])?))
        }
        "exp2" => {
            let v = keyed(rest, &["alpha"])?;
            Ok(ScanSequence::Exp2(exact(&v[0])?))
        }
        _ => Ok(ScanSequence::Weight(parse_weight_kind(s)?)),
    }
}

impl ScanSequence {
    pub fn materialize(&self, n_len: usize) -> std::result::Result<Vec<Complex64>, String> {
        match self {
            ScanSequence::Exp(alpha) => (1..=n_len)
                .map(|n| {
                    alpha
                        .mul_int(n as i128)
                        .and_then(|v| v.reduce_mod1())
                        .map(|v| e(v.to_f64()))
                        .map_err(|e| e.to_string())
                })
                .collect(),
            ScanSequence::Exp2(alpha) => (1..=n_len)
                .map(|n| {
                    alpha
                        .mul_int((n as i128) * (n as i128))
                        .and_then(|v| v.reduce_mod1())
                        .map(|v| e(v.to_f64()))
                        .map_err(|e| e.to_string())
                })
                .collect(),
            ScanSequence::Weight(kind) => {
                let w = crate::seqgen::WeightSequence::build(rebuild_for_range(kind, n_len as u64), n_len as u64)
                    .map_err(|e| e.to_string())?;
                (1..=n_len as u64)
                    .map(|n| w.eval(n).map_err(|e| e.to_string()))
                    .collect()
            }
        }
    }
}

/// Indicator weights parsed from text carry a placeholder range; rebuild the
/// underlying sequence to cover [1, n].
pub fn rebuild_for_range(kind: &WeightKind, n: u64) -> WeightKind {
    match kind {
        WeightKind::Indicator(idx) => WeightKind::Indicator(std::sync::Arc::new(
            crate::seqgen::IndexSequence::build(idx.kind().clone(), n)
                .expect("rebuilding a previously valid sequence"),
        )),
        other => other.clone(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn systems_round_trip() {
        assert_eq!(
            parse_system("rot:alpha=sqrt(2)-1").unwrap(),
            TorusSystem::rotation1(parse_exact("sqrt(2)-1").unwrap())
        );
        assert_eq!(
            parse_system("skew:alpha=(sqrt(5)-1)/2").unwrap(),
            TorusSystem::skew2(parse_exact("(sqrt(5)-1)/2").unwrap())
        );
        assert!(parse_system("rot2:alpha1=1/3,alpha2=sqrt(2)").is_ok());
        assert!(parse_system("torus:alpha=1").is_err());
        assert!(parse_system("rot:beta=1").is_err());
    }

    #[test]
    fn observables_parse() {
        assert_eq!(
            parse_observable("char:1", 1).unwrap(),
            Observable::Character { freqs: vec![1] }
        );
        assert_eq!(
            parse_observable("char:0,1", 2).unwrap(),
            Observable::Character { freqs: vec![0, 1] }
        );
        assert!(parse_observable("char:1", 2).is_err());
        let arc = parse_observable("arc:axis=0,a=1/3,b=2/3", 1).unwrap();
        match arc {
            Observable::ArcIndicator { axis: 0, a, b } => {
                assert!((a - 1.0 / 3.0).abs() < 1e-15 && (b - 2.0 / 3.0).abs() < 1e-15);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn sequences_and_weights_parse() {
        assert!(matches!(
            parse_index_kind("arith:q=3,r=1").unwrap(),
            IndexKind::Arithmetic { q: 3, r: 1 }
        ));
        assert!(matches!(parse_index_kind("primes").unwrap(), IndexKind::Primes));
        assert!(matches!(
            parse_index_kind("beatty:theta=sqrt(2),gamma=0").unwrap(),
            IndexKind::Beatty { .. }
        ));
        assert!(matches!(
            parse_weight_kind("mangoldt_wb:w=5,b=7").unwrap(),
            WeightKind::MangoldtWb { w: 5, b: 7 }
        ));
        assert!(matches!(
            parse_weight_kind("indicator:squarefree").unwrap(),
            WeightKind::Indicator(_)
        ));
        assert!(parse_index_kind("arith:q=0,r=1").is_err());
        assert!(parse_weight_kind("riemann").is_err());
    }

    #[test]
    fn scan_sequences_materialize() {
        let s = parse_scan_sequence("seq:exp:alpha=1/4").unwrap();
        let v = s.materialize(8).unwrap();
        assert!((v[0] - Complex64::new(0.0, 1.0)).norm() < 1e-15);
        assert!((v[3] - Complex64::new(1.0, 0.0)).norm() < 1e-15);
        let s2 = parse_scan_sequence("exp2:alpha=1/2").unwrap();
        let v2 = s2.materialize(4).unwrap();
        // e(n²/2): n=1 → −1, n=2 → +1
        assert!((v2[0] + Complex64::new(1.0, 0.0)).norm() < 1e-12);
        assert!((v2[1] - Complex64::new(1.0, 0.0)).norm() < 1e-12);
    }
}
