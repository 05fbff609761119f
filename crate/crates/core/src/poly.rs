//! Sparse multivariate polynomials over an exact [`Field`].

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::field::{Coeff, Field};

/// Exponent vectors are ordered lexicographically, which fixes the term order
/// used for display and normalization.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Polynomial {
    nvars: usize,
    field: Field,
    terms: BTreeMap<Vec<u32>, Coeff>,
}

impl Polynomial {
    pub fn zero(nvars: usize, field: Field) -> Self {
        Polynomial {
            nvars,
            field,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, field: Field, c: Coeff) -> Self {
        Self::monomial(nvars, field, vec![0; nvars], c)
    }

    pub fn one(nvars: usize, field: Field) -> Self {
        Self::constant(nvars, field, field.one())
    }

    pub fn var(nvars: usize, field: Field, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Self::monomial(nvars, field, e, field.one())
    }

    pub fn monomial(nvars: usize, field: Field, exps: Vec<u32>, c: Coeff) -> Self {
        let mut p = Self::zero(nvars, field);
        p.add_term(exps, c);
        p
    }

    pub fn from_terms(
        nvars: usize,
        field: Field,
        terms: impl IntoIterator<Item = (Vec<u32>, Coeff)>,
    ) -> Result<Self> {
        let mut p = Self::zero(nvars, field);
        for (e, c) in terms {
            if e.len() != nvars {
                return Err(Error::Parse(format!(
                    "exponent vector {e:?} has length != {nvars}"
                )));
            }
            p.add_term(e, field.reduce(&c)?);
        }
        Ok(p)
    }

    pub fn add_term(&mut self, exps: Vec<u32>, c: Coeff) {
        assert_eq!(exps.len(), self.nvars);
        let f = self.field;
        let entry = self.terms.entry(exps).or_insert_with(Coeff::zero);
        *entry = f.add(entry, &c);
        self.terms.retain(|_, c| !c.is_zero());
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &Coeff)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, exps: &[u32]) -> Coeff {
        self.terms.get(exps).cloned().unwrap_or_else(Coeff::zero)
    }

    fn check(&self, other: &Self) {
        assert_eq!(self.nvars, other.nvars, "polynomial arity mismatch");
        assert_eq!(self.field, other.field, "polynomial field mismatch");
    }

    pub fn add(&self, other: &Self) -> Self {
        self.check(other);
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        self.scale(&self.field.neg(&self.field.one()))
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, k: &Coeff) -> Self {
        let mut out = Self::zero(self.nvars, self.field);
        for (e, c) in &self.terms {
            out.add_term(e.clone(), self.field.mul(c, k));
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.check(other);
        let mut acc: BTreeMap<Vec<u32>, Coeff> = BTreeMap::new();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                let entry = acc.entry(e).or_insert_with(Coeff::zero);
                *entry = self.field.add(entry, &self.field.mul(c1, c2));
            }
        }
        acc.retain(|_, c| !c.is_zero());
        Polynomial {
            nvars: self.nvars,
            field: self.field,
            terms: acc,
        }
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one(self.nvars, self.field);
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }

    /// Substitutes `vars[i] = value` for every listed variable.
    pub fn specialize(&self, assignments: &[(usize, Coeff)]) -> Result<Self> {
        let mut out = Self::zero(self.nvars, self.field);
        for (e, c) in &self.terms {
            let mut e = e.clone();
            let mut c = c.clone();
            for (i, v) in assignments {
                c = self.field.mul(&c, &self.field.pow(v, e[*i] as i64)?);
                e[*i] = 0;
            }
            out.add_term(e, c);
        }
        Ok(out)
    }

    /// Partial derivative with respect to variable `i`.
    pub fn derivative(&self, i: usize) -> Self {
        let mut out = Self::zero(self.nvars, self.field);
        for (e, c) in &self.terms {
            if e[i] > 0 {
                let mut e2 = e.clone();
                e2[i] -= 1;
                out.add_term(e2, self.field.mul(c, &self.field.from_i64(e[i] as i64)));
            }
        }
        out
    }

    pub fn evaluate(&self, point: &[Coeff]) -> Result<Coeff> {
        let mut acc = self.field.zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (x, k) in point.iter().zip(e) {
                t = self.field.mul(&t, &self.field.pow(x, *k as i64)?);
            }
            acc = self.field.add(&acc, &t);
        }
        Ok(acc)
    }

    pub fn display_with(&self, names: &[String]) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut out = String::new();
        for (idx, (e, c)) in self.terms.iter().rev().enumerate() {
            let mono: Vec<String> = e
                .iter()
                .zip(names)
                .filter(|(k, _)| **k > 0)
                .map(|(k, n)| {
                    if *k == 1 {
                        n.clone()
                    } else {
                        format!("{n}^{k}")
                    }
                })
                .collect();
            let neg = c < &Coeff::zero();
            let abs = if neg { -c.clone() } else { c.clone() };
            let body = match (mono.is_empty(), abs.is_one()) {
                (true, _) => abs.to_string(),
                (false, true) => mono.join("*"),
                (false, false) => format!("{}*{}", abs, mono.join("*")),
            };
            if idx == 0 {
                out.push_str(if neg { "-" } else { "" });
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            out.push_str(&body);
        }
        out
    }

    pub fn default_names(&self, prefix: &str) -> Vec<String> {
        (1..=self.nvars).map(|i| format!("{prefix}{i}")).collect()
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display_with(&self.default_names("u")))
    }
}
