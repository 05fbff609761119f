//! Pseudo-convergent sequences of Hahn series, checked on finite prefixes.

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};
use crate::group::GroupElement;
use crate::series::HahnSeries;

#[derive(Debug, Clone)]
pub struct PseudoSequence {
    entries: Vec<HahnSeries>,
    gauges: Vec<GroupElement>,
}

impl PseudoSequence {
    pub fn entries(&self) -> &[HahnSeries] {
        &self.entries
    }

    /// `w_τ = ν(y_{τ+1} − y_τ)`, strictly increasing.
    pub fn gauges(&self) -> &[GroupElement] {
        &self.gauges
    }

    pub fn last_gauge(&self) -> &GroupElement {
        self.gauges.last().expect("at least two gauges")
    }

    /// The largest gauge exceeds `target`.
    pub fn passes(&self, target: &GroupElement) -> Result<bool> {
        Ok(self.last_gauge().compare(target)? == Ordering::Greater)
    }
}

impl fmt::Display for PseudoSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let g: Vec<String> = self.gauges.iter().map(|g| g.to_string()).collect();
        write!(f, "gauges {}", g.join(" < "))
    }
}

/// Valuation of `d`, certified to lie below `d`'s cutoff.
fn certified_valuation(d: &HahnSeries, what: &str) -> Result<GroupElement> {
    match d.terms().first() {
        Some((e, _)) => Ok(e.clone()),
        None => Err(Error::NotPseudoConvergent(format!(
            "{what} vanishes below the cutoff {}",
            d.cutoff()
        ))),
    }
}

/// Checks `ν(y_τ′ − y_τ) < ν(y_τ″ − y_τ′)` for all `τ < τ′ < τ″` in the prefix,
/// together with `ν(y_τ′ − y_τ) = w_τ` for every `τ′ > τ`.
pub fn check_pseudo_convergent(entries: Vec<HahnSeries>) -> Result<PseudoSequence> {
    if entries.len() < 3 {
        return Err(Error::Precondition(
            "a pseudo-convergent prefix needs at least 3 entries".into(),
        ));
    }
    let mut gauges = Vec::with_capacity(entries.len() - 1);
    for t in 0..entries.len() - 1 {
        let d = entries[t + 1].sub(&entries[t])?;
        gauges.push(certified_valuation(&d, &format!("y_{} - y_{}", t + 1, t))?);
    }
    for (t, w) in gauges.windows(2).enumerate() {
        if w[0].compare(&w[1])? != Ordering::Less {
            return Err(Error::NotPseudoConvergent(format!(
                "gauge w_{} = {} is not below w_{} = {}",
                t,
                w[0],
                t + 1,
                w[1]
            )));
        }
    }
    for t in 0..entries.len() {
        for t2 in t + 2..entries.len() {
            let d = entries[t2].sub(&entries[t])?;
            let v = certified_valuation(&d, &format!("y_{t2} - y_{t}"))?;
            if v != gauges[t] {
                return Err(Error::NotPseudoConvergent(format!(
                    "v(y_{t2} - y_{t}) = {v} differs from w_{t} = {}",
                    gauges[t]
                )));
            }
        }
    }
    Ok(PseudoSequence { entries, gauges })
}

/// Whether `ν(d) ≥ bound`, failing if the cutoff hides the answer.
fn valuation_at_least(d: &HahnSeries, bound: &GroupElement) -> Result<bool> {
    if let Some((e, _)) = d.terms().first() {
        if e.compare(bound)? == Ordering::Less {
            return Ok(false);
        }
    }
    if d.cutoff().compare(bound)? == Ordering::Less {
        return Err(Error::CutoffTooSmall(format!("v >= {bound}")));
    }
    Ok(true)
}

/// `ν(z − y_τ) ≥ w_τ` for every `τ` of the prefix.
pub fn is_limit(z: &HahnSeries, seq: &PseudoSequence) -> Result<bool> {
    for (y, w) in seq.entries.iter().zip(&seq.gauges) {
        if !valuation_at_least(&z.sub(y)?, w)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `ν(z1 − z2) > w_τ` for every gauge: the difference lies in the breadth
/// as seen at prefix scale.
pub fn limit_difference_check(
    z1: &HahnSeries,
    z2: &HahnSeries,
    seq: &PseudoSequence,
) -> Result<bool> {
    let d = z1.sub(z2)?;
    let top = seq.last_gauge();
    if let Some((e, _)) = d.terms().first() {
        if e.compare(top)? != Ordering::Greater {
            return Ok(false);
        }
        return Ok(true);
    }
    if d.cutoff().compare(top)? != Ordering::Greater {
        return Err(Error::CutoffTooSmall(format!("v > {top}")));
    }
    Ok(true)
}
