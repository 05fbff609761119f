//! Totally ordered abelian groups `Z^r` embedded in the reals through a
//! weight vector, with certified sign decisions.
//!
//! A weight is either an exact rational or the constant π. The value of an
//! element is `Σ coords[i] * weights[i]`; only contexts whose weights are
//! linearly independent over Q are accepted, so two elements are equal iff
//! their coordinate vectors are equal and the order never has to declare
//! equality from numerics.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const INITIAL_PRECISION_BITS: u32 = 64;
pub const DEFAULT_PRECISION_CEILING: u32 = 4096;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Weight {
    Rational(BigRational),
    Pi,
}

impl Weight {
    fn is_positive(&self) -> bool {
        match self {
            Weight::Rational(q) => q.is_positive(),
            Weight::Pi => true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GroupContext {
    weights: Vec<Weight>,
    precision_ceiling: u32,
}

pub type Ctx = Arc<GroupContext>;

impl GroupContext {
    /// Builds a context, rejecting weight sets that are not Q-independent.
    /// With rationals and π as the only weight kinds this means at most one
    /// rational weight and at most one π weight.
    pub fn new(weights: Vec<Weight>) -> Result<Ctx> {
        Self::with_ceiling(weights, DEFAULT_PRECISION_CEILING)
    }

    pub fn with_ceiling(weights: Vec<Weight>, precision_ceiling: u32) -> Result<Ctx> {
        if weights.is_empty() {
            return Err(Error::InvalidContext("rank must be at least 1".into()));
        }
        if let Some(w) = weights.iter().find(|w| !w.is_positive()) {
            return Err(Error::InvalidContext(format!(
                "weight {w:?} is not positive"
            )));
        }
        let rationals = weights
            .iter()
            .filter(|w| matches!(w, Weight::Rational(_)))
            .count();
        let pis = weights.len() - rationals;
        if rationals > 1 || pis > 1 {
            return Err(Error::InvalidContext(
                "weights are linearly dependent over Q".into(),
            ));
        }
        if precision_ceiling < 2 {
            return Err(Error::InvalidContext("precision ceiling too small".into()));
        }
        Ok(Arc::new(GroupContext {
            weights,
            precision_ceiling,
        }))
    }

    /// `Z` ordered by the weight `w`.
    pub fn rational(w: BigRational) -> Ctx {
        Self::new(vec![Weight::Rational(w)]).expect("positive rational weight")
    }

    /// `Z` with its usual order.
    pub fn integers() -> Ctx {
        Self::rational(BigRational::one())
    }

    /// `Z + Zπ`, coordinates `(integer part, π part)`.
    pub fn integers_plus_pi() -> Ctx {
        Self::new(vec![Weight::Rational(BigRational::one()), Weight::Pi]).expect("independent")
    }

    pub fn rank(&self) -> usize {
        self.weights.len()
    }

    pub fn weights(&self) -> &[Weight] {
        &self.weights
    }

    pub fn precision_ceiling(&self) -> u32 {
        self.precision_ceiling
    }

    pub fn independence_flag(&self) -> bool {
        true
    }

    /// Splits a coordinate vector into its exact rational part and its π coefficient.
    fn split(&self, coords: &[i64]) -> (BigRational, BigInt) {
        let mut rat = BigRational::zero();
        let mut pi = BigInt::zero();
        for (c, w) in coords.iter().zip(&self.weights) {
            match w {
                Weight::Rational(q) => rat += q * BigInt::from(*c),
                Weight::Pi => pi += BigInt::from(*c),
            }
        }
        (rat, pi)
    }

    /// The element with value `rational + pi_coeff * π`, if it exists in the group.
    pub fn element_from_value(
        self: &Arc<Self>,
        rational: &BigRational,
        pi_coeff: i64,
    ) -> Result<GroupElement> {
        let mut coords = vec![0i64; self.rank()];
        let mut rat_done = rational.is_zero();
        let mut pi_done = pi_coeff == 0;
        for (i, w) in self.weights.iter().enumerate() {
            match w {
                Weight::Rational(q) => {
                    let c = rational / q;
                    if !c.is_integer() {
                        return Err(Error::Parse(format!(
                            "{rational} is not a multiple of the weight {q}"
                        )));
                    }
                    coords[i] = c
                        .to_integer()
                        .to_i64()
                        .ok_or_else(|| Error::Parse("coordinate overflow".into()))?;
                    rat_done = true;
                }
                Weight::Pi => {
                    coords[i] = pi_coeff;
                    pi_done = true;
                }
            }
        }
        if !rat_done || !pi_done {
            return Err(Error::Parse("value not representable in this group".into()));
        }
        Ok(GroupElement::new(self.clone(), coords))
    }

    /// Parses values such as `64`, `13/4`, `6pi`, `10+3pi` or `-3+π`.
    pub fn parse_element(self: &Arc<Self>, s: &str) -> Result<GroupElement> {
        let cleaned: String = s
            .replace('π', "pi")
            .chars()
            .filter(|c| !c.is_whitespace())
            .collect();
        if cleaned.is_empty() {
            return Err(Error::Parse("empty group element".into()));
        }
        let mut terms = Vec::new();
        let mut start = 0;
        for (i, ch) in cleaned.char_indices() {
            if (ch == '+' || ch == '-') && i > start {
                terms.push(&cleaned[start..i]);
                start = i;
            }
        }
        terms.push(&cleaned[start..]);
        let mut rational = BigRational::zero();
        let mut pi = 0i64;
        for term in terms {
            let term = term.strip_prefix('+').unwrap_or(term);
            if let Some(coeff) = term.strip_suffix("pi") {
                let coeff = coeff.strip_suffix('*').unwrap_or(coeff);
                let k = match coeff {
                    "" => 1,
                    "-" => -1,
                    c => c
                        .parse::<i64>()
                        .map_err(|_| Error::Parse(format!("bad π coefficient in {s:?}")))?,
                };
                pi += k;
            } else {
                rational += parse_rational(term)?;
            }
        }
        self.element_from_value(&rational, pi)
    }

    pub fn zero(self: &Arc<Self>) -> GroupElement {
        GroupElement::new(self.clone(), vec![0; self.rank()])
    }

    pub fn descriptor(&self) -> GroupDescriptor {
        GroupDescriptor {
            rank: self.rank(),
            weights: self
                .weights
                .iter()
                .map(|w| match w {
                    Weight::Rational(q) => WeightDescriptor::Rat { rat: q.to_string() },
                    Weight::Pi => WeightDescriptor::Const {
                        r#const: "pi".into(),
                    },
                })
                .collect(),
        }
    }
}

/// `{"rank":2,"weights":[{"rat":"1"},{"const":"pi"}]}`
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct GroupDescriptor {
    pub rank: usize,
    pub weights: Vec<WeightDescriptor>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(untagged)]
pub enum WeightDescriptor {
    Rat { rat: String },
    Const { r#const: String },
}

impl GroupDescriptor {
    pub fn build(&self, precision_ceiling: u32) -> Result<Ctx> {
        if self.rank != self.weights.len() {
            return Err(Error::Parse(format!(
                "rank {} but {} weights",
                self.rank,
                self.weights.len()
            )));
        }
        let weights = self
            .weights
            .iter()
            .map(|w| match w {
                WeightDescriptor::Rat { rat } => parse_rational(rat).map(Weight::Rational),
                WeightDescriptor::Const { r#const } if r#const == "pi" => Ok(Weight::Pi),
                WeightDescriptor::Const { r#const } => {
                    Err(Error::Parse(format!("unsupported constant {:?}", r#const)))
                }
            })
            .collect::<Result<Vec<_>>>()?;
        GroupContext::with_ceiling(weights, precision_ceiling)
    }
}

pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let parse_int = |t: &str| {
        t.trim()
            .parse::<BigInt>()
            .map_err(|_| Error::Parse(format!("bad number {s:?}")))
    };
    match s.split_once('/') {
        Some((n, d)) => {
            let d = parse_int(d)?;
            if d.is_zero() {
                return Err(Error::Parse(format!("zero denominator in {s:?}")));
            }
            Ok(BigRational::new(parse_int(n)?, d))
        }
        None => Ok(BigRational::from_integer(parse_int(s)?)),
    }
}

#[derive(Clone)]
pub struct GroupElement {
    coords: Vec<i64>,
    ctx: Ctx,
}

impl PartialEq for GroupElement {
    fn eq(&self, other: &Self) -> bool {
        self.coords == other.coords && same_ctx(&self.ctx, &other.ctx)
    }
}

impl Eq for GroupElement {}

impl std::hash::Hash for GroupElement {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.coords.hash(state);
    }
}

pub fn same_ctx(a: &Ctx, b: &Ctx) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

impl GroupElement {
    pub fn new(ctx: Ctx, coords: Vec<i64>) -> Self {
        assert_eq!(
            coords.len(),
            ctx.rank(),
            "coordinate vector has wrong length"
        );
        GroupElement { coords, ctx }
    }

    pub fn coords(&self) -> &[i64] {
        &self.coords
    }

    pub fn ctx(&self) -> &Ctx {
        &self.ctx
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&c| c == 0)
    }

    fn check(&self, other: &Self) -> Result<()> {
        if same_ctx(&self.ctx, &other.ctx) {
            Ok(())
        } else {
            Err(Error::ContextMismatch)
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(self.zip(other, |a, b| a + b))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(self.zip(other, |a, b| a - b))
    }

    fn zip(&self, other: &Self, f: impl Fn(i64, i64) -> i64) -> Self {
        GroupElement {
            coords: self
                .coords
                .iter()
                .zip(&other.coords)
                .map(|(&a, &b)| f(a, b))
                .collect(),
            ctx: self.ctx.clone(),
        }
    }

    pub fn neg(&self) -> Self {
        self.scale(-1)
    }

    pub fn scale(&self, k: i64) -> Self {
        GroupElement {
            coords: self.coords.iter().map(|c| c * k).collect(),
            ctx: self.ctx.clone(),
        }
    }

    pub fn compare(&self, other: &Self) -> Result<Ordering> {
        self.check(other)?;
        if self.coords == other.coords {
            return Ok(Ordering::Equal);
        }
        let diff = self.zip(other, |a, b| a - b);
        diff.sign()
    }

    /// Sign from coordinate signs alone: every weight is positive, and a
    /// context has at most one rational and one π weight.
    fn quick_sign(&self) -> Option<Ordering> {
        let mut rat: Option<(i64, &BigRational)> = None;
        let mut pi = 0i64;
        for (c, w) in self.coords.iter().zip(&self.ctx.weights) {
            match w {
                Weight::Rational(q) => rat = Some((*c, q)),
                Weight::Pi => pi = *c,
            }
        }
        let sp = pi.signum();
        let (c, q) = match rat {
            Some((c, q)) if c != 0 => (c, q),
            _ => return Some(sp.cmp(&0)),
        };
        let sc = c.signum();
        if sp == 0 || sc == sp {
            return Some(sc.cmp(&0));
        }
        if self.ctx.precision_ceiling < INITIAL_PRECISION_BITS {
            return None;
        }
        // value has the sign of c·a + pi·b·π for q = a/b
        let n = BigInt::from(c) * q.numer();
        let m = BigInt::from(pi) * q.denom();
        fast_sign(&n, &m)
    }

    /// Certified sign of the value. Never returns `Equal` for a nonzero vector.
    pub fn sign(&self) -> Result<Ordering> {
        if self.is_zero() {
            return Ok(Ordering::Equal);
        }
        if let Some(s) = self.quick_sign() {
            return Ok(s);
        }
        let (rat, pi) = self.ctx.split(&self.coords);
        if pi.is_zero() {
            return Ok(rat.numer().sign_cmp());
        }
        // value = (n + pi * d * π) / d with d > 0
        let n = rat.numer().clone();
        let m = pi * rat.denom();
        let ceiling = self.ctx.precision_ceiling;
        if ceiling >= INITIAL_PRECISION_BITS {
            if let Some(s) = fast_sign(&n, &m) {
                return Ok(s);
            }
        }
        let mut bits = INITIAL_PRECISION_BITS.min(ceiling);
        loop {
            let (lo, hi) = pi_bounds(bits);
            let a = BigRational::from_integer(n.clone());
            let mr = BigRational::from_integer(m.clone());
            let (x, y) = (&a + &mr * &lo, &a + &mr * &hi);
            if x.is_positive() && y.is_positive() {
                return Ok(Ordering::Greater);
            }
            if x.is_negative() && y.is_negative() {
                return Ok(Ordering::Less);
            }
            if bits >= ceiling {
                return Err(Error::PrecisionCeiling { bits });
            }
            bits = (bits * 2).min(ceiling);
        }
    }

    pub fn is_nonnegative(&self) -> Result<bool> {
        Ok(self.sign()? != Ordering::Less)
    }

    pub fn is_positive(&self) -> Result<bool> {
        Ok(self.sign()? == Ordering::Greater)
    }

    pub fn min(&self, other: &Self) -> Result<Self> {
        Ok(if self.compare(other)? == Ordering::Greater {
            other.clone()
        } else {
            self.clone()
        })
    }

    pub fn max(&self, other: &Self) -> Result<Self> {
        Ok(if self.compare(other)? == Ordering::Less {
            other.clone()
        } else {
            self.clone()
        })
    }

    /// Approximate real value; for display and sanity checks only.
    pub fn to_f64(&self) -> f64 {
        let (rat, pi) = self.ctx.split(&self.coords);
        rat.to_f64().unwrap_or(f64::NAN) + pi.to_f64().unwrap_or(f64::NAN) * std::f64::consts::PI
    }

    /// Exact rational value for contexts without π.
    pub fn rational_value(&self) -> Option<BigRational> {
        let (rat, pi) = self.ctx.split(&self.coords);
        pi.is_zero().then_some(rat)
    }

    /// Largest `k >= 0` with `k * self <= other`; `self` must be positive and
    /// `other` nonnegative.
    pub fn floor_div(&self, other: &Self) -> Result<i64> {
        if !self.is_positive()? {
            return Err(Error::Precondition(
                "floor_div by a non-positive element".into(),
            ));
        }
        let approx = (other.to_f64() / self.to_f64()).floor();
        let mut k = if approx.is_finite() && approx > 0.0 {
            approx as i64
        } else {
            0
        };
        while k > 0 && self.scale(k).compare(other)? == Ordering::Greater {
            k -= 1;
        }
        while self.scale(k + 1).compare(other)? != Ordering::Greater {
            k += 1;
        }
        Ok(k)
    }
}

trait SignCmp {
    fn sign_cmp(&self) -> Ordering;
}

impl SignCmp for BigInt {
    fn sign_cmp(&self) -> Ordering {
        self.cmp(&BigInt::zero())
    }
}

const FAST_BITS: u32 = 60;

/// Sign of `n + m π` using 60-bit integer bounds on π, when both fit in i64.
fn fast_sign(n: &BigInt, m: &BigInt) -> Option<Ordering> {
    static BOUNDS: OnceLock<(i128, i128)> = OnceLock::new();
    let (lo, hi) = *BOUNDS.get_or_init(|| {
        let (lo, hi) = pi_bounds(128);
        let scale = BigRational::from_integer(BigInt::one() << FAST_BITS);
        let lo = (lo * &scale).floor().to_integer().to_i128().unwrap();
        let hi = (hi * &scale).ceil().to_integer().to_i128().unwrap();
        (lo, hi)
    });
    let n = n.to_i64()? as i128;
    let m = m.to_i64()? as i128;
    let base = n << FAST_BITS;
    let (a, b) = (base + m * lo, base + m * hi);
    if a > 0 && b > 0 {
        Some(Ordering::Greater)
    } else if a < 0 && b < 0 {
        Some(Ordering::Less)
    } else {
        None
    }
}

/// Certified rational bounds `lo < π < hi` with width about `2^-bits`.
pub fn pi_bounds(bits: u32) -> (BigRational, BigRational) {
    static CACHE: OnceLock<Mutex<HashMap<u32, (BigRational, BigRational)>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(b) = cache.lock().unwrap().get(&bits) {
        return b.clone();
    }
    let scale = BigInt::one() << bits;
    // Machin: π = 16 atan(1/5) - 4 atan(1/239)
    let (a5, n5) = atan_inv_fixed(5, &scale);
    let (a239, n239) = atan_inv_fixed(239, &scale);
    let approx = a5 * 16 - a239 * 4;
    // each truncated term and the alternating tail contribute < 1 ulp
    let err = BigInt::from(16 * (n5 + 1) + 4 * (n239 + 1) + 1);
    let denom = scale;
    let lo = BigRational::new(&approx - &err, denom.clone());
    let hi = BigRational::new(&approx + &err, denom);
    cache.lock().unwrap().insert(bits, (lo.clone(), hi.clone()));
    (lo, hi)
}

/// `floor`-truncated fixed-point sum of the arctangent series of `1/n`,
/// returning the sum and the number of terms.
fn atan_inv_fixed(n: u32, scale: &BigInt) -> (BigInt, u64) {
    let n = BigInt::from(n);
    let n2 = &n * &n;
    let mut power = scale.div_floor(&n);
    let mut sum = BigInt::zero();
    let mut k: u64 = 0;
    while !power.is_zero() {
        let term = power.div_floor(&BigInt::from(2 * k + 1));
        if k.is_multiple_of(2) {
            sum += term;
        } else {
            sum -= term;
        }
        power = power.div_floor(&n2);
        k += 1;
    }
    (sum, k)
}

impl fmt::Debug for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (rat, pi) = self.ctx.split(&self.coords);
        if pi.is_zero() {
            return write!(f, "{rat}");
        }
        let pi_part = if pi.is_one() {
            "π".to_string()
        } else if pi == -BigInt::one() {
            "-π".to_string()
        } else {
            format!("{pi}π")
        };
        if rat.is_zero() {
            write!(f, "{pi_part}")
        } else if pi.is_positive() {
            write!(f, "{rat}+{pi_part}")
        } else {
            write!(f, "{rat}{pi_part}")
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_elements() {
        let p = GroupContext::integers_plus_pi();
        assert_eq!(p.parse_element("10+3pi").unwrap().coords(), &[10, 3]);
        assert_eq!(p.parse_element("6pi").unwrap().coords(), &[0, 6]);
        assert_eq!(p.parse_element("-3 + π").unwrap().coords(), &[-3, 1]);
        let q = GroupContext::rational(BigRational::new(1.into(), 8.into()));
        assert_eq!(q.parse_element("13/4").unwrap().coords(), &[26]);
        assert!(q.parse_element("1/3").is_err());
        assert!(GroupContext::integers().parse_element("pi").is_err());
    }

    fn zpi(a: i64, b: i64) -> GroupElement {
        GroupElement::new(GroupContext::integers_plus_pi(), vec![a, b])
    }

    #[test]
    fn pi_bounds_bracket_pi() {
        for bits in [8, 64, 256, 1024] {
            let (lo, hi) = pi_bounds(bits);
            assert!(lo < hi);
            assert!(lo.to_f64().unwrap() <= std::f64::consts::PI + 1e-15);
            assert!(hi.to_f64().unwrap() >= std::f64::consts::PI - 1e-15);
        }
        let (lo, hi) = pi_bounds(256);
        // 3.14159265358979323846264338327950288
        let known = BigRational::new(
            "314159265358979323846264338327950288".parse().unwrap(),
            BigInt::from(10).pow(35),
        );
        let ulp = BigRational::new(BigInt::one(), BigInt::from(10).pow(35));
        assert!(lo < &known + &ulp && hi > &known - &ulp);
        assert!(&hi - &lo < BigRational::new(BigInt::one(), BigInt::one() << 240));
    }

    #[test]
    fn add_examples() {
        assert_eq!(zpi(1, 0).add(&zpi(0, 1)).unwrap(), zpi(1, 1));
        assert_eq!(zpi(2, 3).add(&zpi(0, 0)).unwrap(), zpi(2, 3));
        assert_eq!(zpi(6, 0).add(&zpi(0, 1)).unwrap(), zpi(6, 1));
        assert_eq!(zpi(6, 1).to_string(), "6+π");
    }

    #[test]
    fn add_rejects_mismatched_contexts() {
        let a = GroupElement::new(GroupContext::integers(), vec![1]);
        let b = GroupElement::new(
            GroupContext::rational(BigRational::new(1.into(), 2.into())),
            vec![1],
        );
        assert_eq!(a.add(&b), Err(Error::ContextMismatch));
    }

    #[test]
    fn compare_examples() {
        assert_eq!(zpi(1, 1).compare(&zpi(1, 1)).unwrap(), Ordering::Equal);
        assert_eq!(zpi(4, -1).compare(&zpi(0, 0)).unwrap(), Ordering::Greater);
        assert_eq!(zpi(-3, 1).compare(&zpi(0, 0)).unwrap(), Ordering::Greater);
        assert!(zpi(0, 0).is_nonnegative().unwrap());
        assert!(zpi(-3, 1).is_nonnegative().unwrap());
        assert!(!zpi(1, -1).is_nonnegative().unwrap());
    }

    #[test]
    fn close_convergents_need_refinement() {
        // 33215π - 104348 ≈ 1.1e-5 and beyond fit the fast path; large
        // coordinates force the big-rational refinement loop.
        let big = zpi(-245850922, 78256779);
        assert_eq!(big.sign().unwrap(), Ordering::Greater);
        let huge = GroupElement::new(GroupContext::integers_plus_pi(), vec![-(1i64 << 62), 0]);
        assert_eq!(huge.sign().unwrap(), Ordering::Less);
        let mixed = zpi(-1_317_897_429_860_437_163, 419_499_601_043_436_313);
        assert!(mixed.sign().is_ok());
    }

    #[test]
    fn precision_ceiling_is_reported() {
        let ctx =
            GroupContext::with_ceiling(vec![Weight::Rational(BigRational::one()), Weight::Pi], 8)
                .unwrap();
        let x = GroupElement::new(ctx, vec![-3, 1]);
        assert_eq!(x.sign(), Err(Error::PrecisionCeiling { bits: 8 }));
    }

    #[test]
    fn dependent_weights_rejected() {
        let two = BigRational::from_integer(2.into());
        assert!(GroupContext::new(vec![
            Weight::Rational(BigRational::one()),
            Weight::Rational(two)
        ])
        .is_err());
        assert!(GroupContext::new(vec![Weight::Pi, Weight::Pi]).is_err());
        assert!(GroupContext::new(vec![Weight::Rational(-BigRational::one())]).is_err());
        assert!(GroupContext::new(vec![]).is_err());
    }

    #[test]
    fn descriptor_round_trip() {
        let json = r#"{"rank":2,"weights":[{"rat":"1"},{"const":"pi"}]}"#;
        let d: GroupDescriptor = serde_json::from_str(json).unwrap();
        let ctx = d.build(DEFAULT_PRECISION_CEILING).unwrap();
        assert_eq!(*ctx, *GroupContext::integers_plus_pi());
        assert_eq!(serde_json::to_string(&ctx.descriptor()).unwrap(), json);
    }

    #[test]
    fn floor_div_certified() {
        // floor((4-π)/(π-3)) = 6
        assert_eq!(zpi(-3, 1).floor_div(&zpi(4, -1)).unwrap(), 6);
    }
}
