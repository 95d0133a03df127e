use crate::builder::Construction;
use crate::{Complex64, LogComplex, Value};
use serde::{Deserialize, Serialize};
use std::f64::consts::LN_2;

const LN4: f64 = 2.0 * LN_2;

/// Position of a modulus in the annulus system. `A_k = [R_k/4, 4R_k]` is
/// closed and `B_k = (4R_k, R_{k+1}/4)` open, so the regions partition the
/// plane; `D1` is `|z| < R_1/4`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Region {
    A(usize),
    B(usize),
    D1,
    OutOfLedger,
    Ambiguous,
}

/// Classification of `log |z|`. `B_K` is recognised when `R_{K+1}` is known;
/// beyond it (or beyond `4R_K` without `R_{K+1}`) the result is `OutOfLedger`.
pub fn classify_region(c: &Construction, log_modulus: f64) -> Region {
    if log_modulus.is_nan() {
        return Region::Ambiguous;
    }
    let first = c.levels[0].log_r;
    if log_modulus < first - LN4 {
        return Region::D1;
    }
    // last level whose inner edge is at or below the modulus
    let idx = c.levels.partition_point(|l| l.log_r - LN4 <= log_modulus);
    let k = idx.max(1);
    let lk = c.levels[k - 1].log_r;
    if log_modulus <= lk + LN4 {
        return Region::A(k);
    }
    match c.log_r(k + 1) {
        Some(next) if log_modulus < next - LN4 => Region::B(k),
        _ => Region::OutOfLedger,
    }
}

/// Classification of a modulus interval: a region only when both ends agree.
pub fn classify_interval(c: &Construction, lo: f64, hi: f64) -> Region {
    let a = classify_region(c, lo);
    if a == classify_region(c, hi) {
        a
    } else {
        Region::Ambiguous
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FinalClass {
    /// Entered a band `B_k`; conclusive.
    FastEscaping,
    /// Stayed in the annuli until the ledger ran out; not a membership proof.
    JuliaCandidate,
    /// Every recorded position was in `D_1`.
    TrappedD1,
    /// Budget exhausted or the orbit could not be continued.
    Budget,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OrbitStep {
    pub region: Region,
    pub log_modulus: f64,
}

/// `steps[0]` is the starting point; every later entry is one application of `f`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrbitRecord {
    pub start: Complex64,
    pub steps: Vec<OrbitStep>,
    pub final_class: FinalClass,
}

impl OrbitRecord {
    pub fn iterations(&self) -> usize {
        self.steps.len() - 1
    }

    pub fn first_b_level(&self) -> Option<usize> {
        self.steps.iter().find_map(|s| match s.region {
            Region::B(k) => Some(k),
            _ => None,
        })
    }
}

/// Iterates `f` from `z0` for at most `budget` applications, stopping at the
/// first band entry or when the orbit leaves the ledger. Images are
/// classified with the tail bound applied to both sides, so a point near a
/// region boundary is `Ambiguous` rather than guessed; the orbit continues
/// from such points while a full value is available.
pub fn iterate_orbit(c: &Construction, z0: Complex64, budget: usize) -> OrbitRecord {
    let mut z = LogComplex::from_cartesian(z0);
    let log0 = z.log_abs();
    let mut steps = vec![OrbitStep { region: classify_region(c, log0), log_modulus: log0 }];
    let finish = |steps: Vec<OrbitStep>, class| OrbitRecord { start: z0, steps, final_class: class };
    for used in 0..=budget {
        let last = *steps.last().expect("nonempty");
        match last.region {
            Region::B(_) => return finish(steps, FinalClass::FastEscaping),
            Region::OutOfLedger => return finish(steps, FinalClass::JuliaCandidate),
            _ => {}
        }
        if used == budget {
            break;
        }
        let Ok(e) = c.eval(&z) else {
            steps.push(OrbitStep { region: Region::Ambiguous, log_modulus: f64::NAN });
            return finish(steps, FinalClass::Budget);
        };
        let t = e.tail_log();
        let (lo, hi) = (e.value.log_abs_lo() - t, e.value.log_abs_hi() + t);
        let region = classify_interval(c, lo, hi);
        let mid = if e.value.is_point() { e.value.log_abs_lo() } else { 0.5 * (lo + hi) };
        steps.push(OrbitStep { region, log_modulus: mid });
        match e.value {
            Value::Point(p) => z = p,
            Value::Modulus(_) => {
                if !matches!(region, Region::B(_) | Region::OutOfLedger) {
                    return finish(steps, FinalClass::Budget);
                }
            }
        }
    }
    let class = if steps.iter().all(|s| s.region == Region::D1) { FinalClass::TrappedD1 } else { FinalClass::Budget };
    finish(steps, class)
}
