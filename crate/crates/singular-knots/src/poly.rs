//! Laurent polynomials in `A` and `B_1 .. B_arity` over arbitrary-precision
//! integers. Terms are kept in a sorted map keyed by exponent vector, so equal
//! polynomials have identical representations and print identically.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use std::collections::BTreeMap;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PolyError {
    #[error("operands have B-arity {0} and {1}")]
    ArityMismatch(usize, usize),
    #[error("B{0} appears with {1} distinct exponents, patterns allow at most 2")]
    PatternOverflow(usize, usize),
    #[error("B{0}^{1} cannot be evaluated at 0")]
    NegativeExponentAtZero(usize, i32),
    #[error("B{0}^{1} is not integral at {2}")]
    NonIntegralSubstitution(usize, i32, i64),
}

/// Exponents of one term. Derived `Ord` is lexicographic in (a, b), which is
/// the canonical term order everywhere (printing, machine output).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Exps {
    pub a: i32,
    pub b: Vec<i32>,
}

/// Laurent polynomial in `A, B_1 .. B_arity`. Zero coefficients are never
/// stored; the zero polynomial has no terms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LaurentPoly {
    arity: usize,
    terms: BTreeMap<Exps, BigInt>,
}

impl LaurentPoly {
    pub fn zero(arity: usize) -> Self {
        LaurentPoly {
            arity,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(arity: usize) -> Self {
        Self::monomial(arity, 1, 0, &vec![0; arity])
    }

    /// coeff * A^a * B1^b[0] * ...  Panics if `b.len() != arity`.
    pub fn monomial(arity: usize, coeff: impl Into<BigInt>, a: i32, b: &[i32]) -> Self {
        assert_eq!(b.len(), arity, "exponent vector length");
        let mut p = Self::zero(arity);
        p.add_term(Exps { a, b: b.to_vec() }, &coeff.into());
        p
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exps, &BigInt)> {
        self.terms.iter()
    }

    pub fn coeff(&self, a: i32, b: &[i32]) -> BigInt {
        self.terms
            .get(&Exps { a, b: b.to_vec() })
            .cloned()
            .unwrap_or_else(BigInt::zero)
    }

    pub(crate) fn add_term(&mut self, e: Exps, c: &BigInt) {
        if c.is_zero() {
            return;
        }
        debug_assert_eq!(e.b.len(), self.arity);
        let entry = self.terms.entry(e);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c.clone());
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    /// self += coeff * A^a_shift * B^b_shift * p. The workhorse of the state
    /// sums: accumulates a shifted copy without building intermediates.
    pub(crate) fn add_scaled_shifted(
        &mut self,
        p: &LaurentPoly,
        coeff: &BigInt,
        a_shift: i32,
        b_shift: &[i32],
    ) {
        debug_assert_eq!(p.arity, self.arity);
        debug_assert_eq!(b_shift.len(), self.arity);
        for (e, c) in &p.terms {
            let b = e.b.iter().zip(b_shift).map(|(x, s)| x + s).collect();
            self.add_term(
                Exps {
                    a: e.a + a_shift,
                    b,
                },
                &(c * coeff),
            );
        }
    }

    pub fn try_add(&self, rhs: &LaurentPoly) -> Result<LaurentPoly, PolyError> {
        if self.arity != rhs.arity {
            return Err(PolyError::ArityMismatch(self.arity, rhs.arity));
        }
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), c);
        }
        Ok(out)
    }

    pub fn try_mul(&self, rhs: &LaurentPoly) -> Result<LaurentPoly, PolyError> {
        if self.arity != rhs.arity {
            return Err(PolyError::ArityMismatch(self.arity, rhs.arity));
        }
        let mut out = Self::zero(self.arity);
        for (e, c) in &self.terms {
            out.add_scaled_shifted(rhs, c, e.a, &e.b);
        }
        Ok(out)
    }

    pub fn neg(&self) -> LaurentPoly {
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c = -&*c;
        }
        out
    }

    pub fn try_sub(&self, rhs: &LaurentPoly) -> Result<LaurentPoly, PolyError> {
        self.try_add(&rhs.neg())
    }

    /// Multiply by coeff * A^a * B^b in place.
    pub fn scale(&mut self, coeff: &BigInt, a: i32, b: &[i32]) {
        let old = std::mem::replace(self, Self::zero(self.arity));
        self.add_scaled_shifted(&old, coeff, a, b);
    }

    /// Forget which double point is which: every B_i becomes B1, exponents
    /// summed per term. Total, any arity (including 0).
    pub fn identify_b_variables(&self) -> LaurentPoly {
        let mut out = LaurentPoly::zero(1);
        for (e, c) in &self.terms {
            out.add_term(
                Exps {
                    a: e.a,
                    b: vec![e.b.iter().sum()],
                },
                c,
            );
        }
        out
    }

    /// Group terms by their B-exponent vector; values are polynomials in A
    /// alone (arity 0). Errors if some B_i takes 3 or more distinct exponents.
    pub fn decompose_by_b_pattern(&self) -> Result<BTreeMap<Vec<i32>, LaurentPoly>, PolyError> {
        for i in 0..self.arity {
            let distinct: std::collections::BTreeSet<i32> =
                self.terms.keys().map(|e| e.b[i]).collect();
            if distinct.len() > 2 {
                return Err(PolyError::PatternOverflow(i + 1, distinct.len()));
            }
        }
        let mut out: BTreeMap<Vec<i32>, LaurentPoly> = BTreeMap::new();
        for (e, c) in &self.terms {
            out.entry(e.b.clone())
                .or_insert_with(|| LaurentPoly::zero(0))
                .add_term(Exps { a: e.a, b: vec![] }, c);
        }
        Ok(out)
    }

    /// Evaluate B_i at an integer, keeping the arity (the slot's exponent
    /// becomes 0). `i` is 1-based. Exact or an error: B_i^-k needs value
    /// with |value| = 1, and value 0 forbids negative exponents.
    pub fn substitute_b(&self, i: usize, value: i64) -> Result<LaurentPoly, PolyError> {
        assert!(i >= 1 && i <= self.arity, "B index out of range");
        let slot = i - 1;
        let mut out = Self::zero(self.arity);
        for (e, c) in &self.terms {
            let k = e.b[slot];
            let factor = if k >= 0 {
                int_pow(value, k as u32)
            } else if value == 0 {
                return Err(PolyError::NegativeExponentAtZero(i, k));
            } else if value == 1 || value == -1 {
                int_pow(value, k.unsigned_abs())
            } else {
                return Err(PolyError::NonIntegralSubstitution(i, k, value));
            };
            let mut b = e.b.clone();
            b[slot] = 0;
            out.add_term(Exps { a: e.a, b }, &(c * factor));
        }
        Ok(out)
    }

    /// Substitute A -> A^-1.
    pub fn invert_a(&self) -> LaurentPoly {
        let mut out = Self::zero(self.arity);
        for (e, c) in &self.terms {
            out.add_term(
                Exps {
                    a: -e.a,
                    b: e.b.clone(),
                },
                c,
            );
        }
        out
    }

    /// Substitute A -> A^k. With k = 0 this collapses A entirely.
    pub fn scale_a_exponents(&self, k: i32) -> LaurentPoly {
        let mut out = Self::zero(self.arity);
        for (e, c) in &self.terms {
            out.add_term(
                Exps {
                    a: e.a * k,
                    b: e.b.clone(),
                },
                c,
            );
        }
        out
    }

    /// (min, max) exponent of B_i across terms; None for the zero polynomial.
    pub fn b_degree_range(&self, i: usize) -> Option<(i32, i32)> {
        assert!(i >= 1 && i <= self.arity, "B index out of range");
        let mut it = self.terms.keys().map(|e| e.b[i - 1]);
        let first = it.next()?;
        let (mut lo, mut hi) = (first, first);
        for k in it {
            lo = lo.min(k);
            hi = hi.max(k);
        }
        Some((lo, hi))
    }

    /// (min, max) exponent of A; None for the zero polynomial.
    pub fn a_degree_range(&self) -> Option<(i32, i32)> {
        let mut it = self.terms.keys().map(|e| e.a);
        let first = it.next()?;
        Some(it.fold((first, first), |(lo, hi), a| (lo.min(a), hi.max(a))))
    }

    /// Terms as (coefficient decimal string, A exponent, B exponents), in
    /// canonical order. The machine-readable form.
    pub fn to_triples(&self) -> Vec<(String, i32, Vec<i32>)> {
        self.terms
            .iter()
            .map(|(e, c)| (c.to_string(), e.a, e.b.clone()))
            .collect()
    }
}

fn int_pow(value: i64, k: u32) -> BigInt {
    let base = BigInt::from(value);
    let mut out = BigInt::one();
    for _ in 0..k {
        out *= &base;
    }
    out
}

impl fmt::Display for LaurentPoly {
    /// Canonical text: terms in exponent order joined by " + ", each term
    /// `c*A^k*Bi^e` with zero exponents omitted. A bare constant term prints
    /// as the integer alone.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let mut factors: Vec<String> = Vec::new();
            if e.a != 0 {
                factors.push(format!("A^{}", e.a));
            }
            for (i, k) in e.b.iter().enumerate() {
                if *k != 0 {
                    factors.push(format!("B{}^{}", i + 1, k));
                }
            }
            if factors.is_empty() {
                write!(f, "{}", c)?;
            } else {
                write!(f, "{}*{}", c, factors.join("*"))?;
            }
        }
        Ok(())
    }
}
