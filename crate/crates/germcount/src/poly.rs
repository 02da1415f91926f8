//! Sparse multivariate polynomials with exact rational coefficients.
//!
//! Terms are keyed by exponent vector under graded lexicographic order
//! (total degree first, then lexicographic on exponents), ascending. For
//! local-ring work this means iteration starts at the lowest-order term,
//! which is what the jet engine and the Nakayama bound want.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

/// Ordered list of variable names shared by every polynomial in a
/// computation, optionally carrying a positive weight per variable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VariableContext {
    names: Vec<String>,
    weights: Option<Vec<u64>>,
}

impl VariableContext {
    /// Panics on duplicate or empty names: contexts are built from validated
    /// germ files or internally, so a bad one is a programming error.
    pub fn new(names: Vec<String>) -> Arc<Self> {
        Self::build(names, None)
    }

    /// As `new`, with one positive weight per variable. Panics on a zero
    /// weight or a length mismatch.
    pub fn with_weights(names: Vec<String>, weights: Vec<u64>) -> Arc<Self> {
        Self::build(names, Some(weights))
    }

    fn build(names: Vec<String>, weights: Option<Vec<u64>>) -> Arc<Self> {
        assert!(!names.is_empty(), "variable context needs at least one variable");
        for (i, a) in names.iter().enumerate() {
            assert!(!a.is_empty(), "empty variable name");
            for b in &names[..i] {
                assert_ne!(a, b, "duplicate variable name {a:?}");
            }
        }
        if let Some(w) = &weights {
            assert_eq!(w.len(), names.len(), "one weight per variable");
            assert!(w.iter().all(|&x| x >= 1), "weights must be positive");
        }
        Arc::new(VariableContext { names, weights })
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn weights(&self) -> Option<&[u64]> {
        self.weights.as_deref()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }
}

/// Weighted-degree classification of a nonzero polynomial.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WeightedDegree {
    Homogeneous(u64),
    Inhomogeneous(u64, u64),
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum DegreeError {
    #[error("weighted degree of the zero polynomial is undefined")]
    ZeroPolynomial,
    #[error("variable context has no weights")]
    MissingWeights,
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
#[error("non-exact polynomial division (remainder is not zero)")]
pub struct NonExactDivision;

/// Exponent vector of one monomial.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial {
    exps: Vec<u32>,
}

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial { exps: vec![0; nvars] }
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        Self::var_pow(nvars, i, 1)
    }

    pub fn var_pow(nvars: usize, i: usize, e: u32) -> Self {
        let mut exps = vec![0; nvars];
        exps[i] = e;
        Monomial { exps }
    }

    pub fn from_exps(exps: Vec<u32>) -> Self {
        Monomial { exps }
    }

    pub fn exps(&self) -> &[u32] {
        &self.exps
    }

    pub fn nvars(&self) -> usize {
        self.exps.len()
    }

    pub fn degree(&self) -> u32 {
        self.exps.iter().sum()
    }

    pub fn weighted_degree(&self, weights: &[u64]) -> u64 {
        self.exps
            .iter()
            .zip(weights)
            .map(|(&e, &w)| e as u64 * w)
            .sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        debug_assert_eq!(self.exps.len(), other.exps.len());
        Monomial {
            exps: self
                .exps
                .iter()
                .zip(&other.exps)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn is_one(&self) -> bool {
        self.exps.iter().all(|&e| e == 0)
    }

    /// Every exponent vector with total degree strictly below `bound`,
    /// in ascending graded lexicographic order.
    pub fn all_below_degree(nvars: usize, bound: u32) -> Vec<Monomial> {
        let mut out = Vec::new();
        let mut exps = vec![0u32; nvars];
        fn rec(exps: &mut Vec<u32>, i: usize, remaining: u32, out: &mut Vec<Monomial>) {
            if i == exps.len() {
                out.push(Monomial { exps: exps.clone() });
                return;
            }
            for e in 0..=remaining {
                exps[i] = e;
                rec(exps, i + 1, remaining - e, out);
            }
            exps[i] = 0;
        }
        if bound > 0 {
            rec(&mut exps, 0, bound - 1, &mut out);
        }
        out.sort();
        out
    }
}

/// Graded lexicographic, ascending: lower total degree first, ties broken
/// lexicographically on the exponent vector.
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.exps.cmp(&other.exps))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Sparse polynomial over Q. Zero coefficients are never stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Polynomial {
    ctx: Arc<VariableContext>,
    terms: BTreeMap<Monomial, BigRational>,
}

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

impl Polynomial {
    pub fn zero(ctx: &Arc<VariableContext>) -> Self {
        Polynomial {
            ctx: Arc::clone(ctx),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(ctx: &Arc<VariableContext>, c: BigRational) -> Self {
        let mut p = Self::zero(ctx);
        if !c.is_zero() {
            p.terms.insert(Monomial::one(ctx.len()), c);
        }
        p
    }

    pub fn one(ctx: &Arc<VariableContext>) -> Self {
        Self::constant(ctx, BigRational::one())
    }

    pub fn variable(ctx: &Arc<VariableContext>, i: usize) -> Self {
        assert!(i < ctx.len());
        let mut p = Self::zero(ctx);
        p.terms
            .insert(Monomial::var(ctx.len(), i), BigRational::one());
        p
    }

    pub fn monomial(ctx: &Arc<VariableContext>, m: Monomial, c: BigRational) -> Self {
        assert_eq!(m.nvars(), ctx.len());
        let mut p = Self::zero(ctx);
        if !c.is_zero() {
            p.terms.insert(m, c);
        }
        p
    }

    pub fn ctx(&self) -> &Arc<VariableContext> {
        &self.ctx
    }

    pub fn num_vars(&self) -> usize {
        self.ctx.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in ascending graded lexicographic order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigRational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> BigRational {
        self.terms.get(m).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn constant_term(&self) -> BigRational {
        self.coefficient(&Monomial::one(self.ctx.len()))
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.degree()).max()
    }

    /// Order of vanishing at the origin: the minimal total degree of a term.
    /// `None` for the zero polynomial.
    pub fn order(&self) -> Option<u32> {
        // BTreeMap iterates in grlex ascending order, so the first key is minimal.
        self.terms.keys().next().map(|m| m.degree())
    }

    fn insert_term(terms: &mut BTreeMap<Monomial, BigRational>, m: Monomial, c: BigRational) {
        if c.is_zero() {
            return;
        }
        match terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = o.get() + &c;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    pub fn from_terms<I>(ctx: &Arc<VariableContext>, iter: I) -> Self
    where
        I: IntoIterator<Item = (Monomial, BigRational)>,
    {
        let mut terms = BTreeMap::new();
        for (m, c) in iter {
            assert_eq!(m.nvars(), ctx.len());
            Self::insert_term(&mut terms, m, c);
        }
        Polynomial {
            ctx: Arc::clone(ctx),
            terms,
        }
    }

    pub fn scale(&self, c: &BigRational) -> Polynomial {
        if c.is_zero() {
            return Self::zero(&self.ctx);
        }
        Polynomial {
            ctx: Arc::clone(&self.ctx),
            terms: self
                .terms
                .iter()
                .map(|(m, a)| (m.clone(), a * c))
                .collect(),
        }
    }

    pub fn times_monomial(&self, m: &Monomial) -> Polynomial {
        Polynomial {
            ctx: Arc::clone(&self.ctx),
            terms: self
                .terms
                .iter()
                .map(|(k, c)| (k.mul(m), c.clone()))
                .collect(),
        }
    }

    /// Drop every term of total degree >= `bound`.
    pub fn truncate_below(&self, bound: u32) -> Polynomial {
        Polynomial {
            ctx: Arc::clone(&self.ctx),
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() < bound)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Polynomial {
        let mut acc = Self::one(&self.ctx);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Formal `order`-fold partial derivative with respect to variable `i`.
    pub fn partial_derivative(&self, i: usize, order: u32) -> Polynomial {
        assert!(i < self.ctx.len());
        let mut cur = self.clone();
        for _ in 0..order {
            let mut terms = BTreeMap::new();
            for (m, c) in &cur.terms {
                let e = m.exps()[i];
                if e == 0 {
                    continue;
                }
                let mut exps = m.exps().to_vec();
                exps[i] = e - 1;
                Self::insert_term(
                    &mut terms,
                    Monomial::from_exps(exps),
                    c * BigRational::from_integer(BigInt::from(e)),
                );
            }
            cur = Polynomial {
                ctx: Arc::clone(&self.ctx),
                terms,
            };
        }
        cur
    }

    /// Substitute `images[i]` for variable `i`. All images must share one
    /// context, which becomes the context of the result. Powers of each image
    /// are computed once and reused across terms.
    pub fn substitute(&self, images: &[Polynomial]) -> Polynomial {
        assert_eq!(images.len(), self.ctx.len());
        let target = images
            .first()
            .map(|p| Arc::clone(p.ctx()))
            .expect("substitute needs at least one image");
        for im in images {
            assert_eq!(im.ctx, target, "substitution images in mixed contexts");
        }
        let mut max_exp = vec![0u32; self.ctx.len()];
        for m in self.terms.keys() {
            for (i, &e) in m.exps().iter().enumerate() {
                max_exp[i] = max_exp[i].max(e);
            }
        }
        // powers[i][e] = images[i]^e, built only as far as needed
        let powers: Vec<Vec<Polynomial>> = images
            .iter()
            .enumerate()
            .map(|(i, im)| {
                let mut v = vec![Polynomial::one(&target)];
                for _ in 0..max_exp[i] {
                    let next = &v[v.len() - 1] * im;
                    v.push(next);
                }
                v
            })
            .collect();
        let mut acc = Polynomial::zero(&target);
        for (m, c) in &self.terms {
            let mut t = Polynomial::constant(&target, c.clone());
            for (i, &e) in m.exps().iter().enumerate() {
                if e > 0 {
                    t = &t * &powers[i][e as usize];
                }
            }
            acc = &acc + &t;
        }
        acc
    }

    /// Transport into another context along `var_map`: variable `i` here
    /// becomes variable `var_map[i]` there. The map need not be injective;
    /// exponents of variables sent to the same target add up (this is how
    /// restriction to a diagonal works).
    pub fn map_context(
        &self,
        target: &Arc<VariableContext>,
        var_map: &[usize],
    ) -> Polynomial {
        assert_eq!(var_map.len(), self.ctx.len());
        for &j in var_map {
            assert!(j < target.len());
        }
        let mut terms = BTreeMap::new();
        for (m, c) in &self.terms {
            let mut exps = vec![0u32; target.len()];
            for (i, &e) in m.exps().iter().enumerate() {
                exps[var_map[i]] += e;
            }
            Self::insert_term(&mut terms, Monomial::from_exps(exps), c.clone());
        }
        Polynomial {
            ctx: Arc::clone(target),
            terms,
        }
    }

    /// `Some(d)` when every term has the same weighted degree `d` (the zero
    /// polynomial counts as homogeneous of any degree and returns `Some(0)`),
    /// `None` when degrees are mixed.
    pub fn weighted_homogeneous_degree(&self, weights: &[u64]) -> Option<u64> {
        assert_eq!(weights.len(), self.ctx.len());
        let mut it = self.terms.keys();
        let d = match it.next() {
            None => return Some(0),
            Some(m) => m.weighted_degree(weights),
        };
        for m in it {
            if m.weighted_degree(weights) != d {
                return None;
            }
        }
        Some(d)
    }

    /// Weighted-degree classification under the context's own weights.
    pub fn weighted_degree(&self) -> Result<WeightedDegree, DegreeError> {
        let weights = self.ctx.weights().ok_or(DegreeError::MissingWeights)?;
        let mut lo: Option<u64> = None;
        let mut hi: Option<u64> = None;
        for m in self.terms.keys() {
            let d = m.weighted_degree(weights);
            lo = Some(lo.map_or(d, |v| v.min(d)));
            hi = Some(hi.map_or(d, |v| v.max(d)));
        }
        match (lo, hi) {
            (Some(a), Some(b)) if a == b => Ok(WeightedDegree::Homogeneous(a)),
            (Some(a), Some(b)) => Ok(WeightedDegree::Inhomogeneous(a, b)),
            _ => Err(DegreeError::ZeroPolynomial),
        }
    }

    /// Exact polynomial quotient: `self = q * d` with zero remainder.
    /// Fails when the division leaves a remainder, which callers treat as a
    /// programming error upstream.
    pub fn exact_quotient(&self, d: &Polynomial) -> Result<Polynomial, NonExactDivision> {
        assert_eq!(self.ctx, d.ctx, "polynomial contexts differ");
        assert!(!d.is_zero(), "division by the zero polynomial");
        let (dlead, dcoef) = {
            let (m, c) = d.terms.iter().next_back().expect("nonzero divisor");
            (m.clone(), c.clone())
        };
        let mut rem = self.clone();
        let mut quo = Polynomial::zero(&self.ctx);
        while let Some((rlead, rcoef)) = rem
            .terms
            .iter()
            .next_back()
            .map(|(m, c)| (m.clone(), c.clone()))
        {
            let mut exps = Vec::with_capacity(rlead.nvars());
            for (a, b) in rlead.exps().iter().zip(dlead.exps()) {
                if a < b {
                    return Err(NonExactDivision);
                }
                exps.push(a - b);
            }
            let t = Polynomial::monomial(&self.ctx, Monomial::from_exps(exps), &rcoef / &dcoef);
            quo = &quo + &t;
            rem = &rem - &(&t * d);
        }
        Ok(quo)
    }

    /// Clear denominators and strip integer content: the primitive integer
    /// polynomial with the same zero set, terms in grlex ascending order.
    /// Returns an empty vector for the zero polynomial.
    pub fn primitive_integer_terms(&self) -> Vec<(Monomial, BigInt)> {
        use num_integer::Integer;
        if self.terms.is_empty() {
            return Vec::new();
        }
        let mut denom_lcm = BigInt::one();
        for c in self.terms.values() {
            denom_lcm = denom_lcm.lcm(c.denom());
        }
        let mut rows: Vec<(Monomial, BigInt)> = self
            .terms
            .iter()
            .map(|(m, c)| (m.clone(), c.numer() * (&denom_lcm / c.denom())))
            .collect();
        let mut content = BigInt::zero();
        for (_, v) in &rows {
            content = content.gcd(v);
        }
        if !content.is_one() {
            for (_, v) in &mut rows {
                *v = &*v / &content;
            }
        }
        rows
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        assert_eq!(self.ctx, rhs.ctx, "polynomial contexts differ");
        let mut terms = self.terms.clone();
        for (m, c) in &rhs.terms {
            Polynomial::insert_term(&mut terms, m.clone(), c.clone());
        }
        Polynomial {
            ctx: Arc::clone(&self.ctx),
            terms,
        }
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        assert_eq!(self.ctx, rhs.ctx, "polynomial contexts differ");
        let mut terms = self.terms.clone();
        for (m, c) in &rhs.terms {
            Polynomial::insert_term(&mut terms, m.clone(), -c.clone());
        }
        Polynomial {
            ctx: Arc::clone(&self.ctx),
            terms,
        }
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial {
            ctx: Arc::clone(&self.ctx),
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), -c.clone()))
                .collect(),
        }
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        assert_eq!(self.ctx, rhs.ctx, "polynomial contexts differ");
        let mut terms = BTreeMap::new();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                Polynomial::insert_term(&mut terms, ma.mul(mb), ca * cb);
            }
        }
        Polynomial {
            ctx: Arc::clone(&self.ctx),
            terms,
        }
    }
}

fn fmt_monomial(m: &Monomial, ctx: &VariableContext, out: &mut String) {
    let mut first = true;
    for (i, &e) in m.exps().iter().enumerate() {
        if e == 0 {
            continue;
        }
        if !first {
            out.push('*');
        }
        first = false;
        out.push_str(ctx.name(i));
        if e > 1 {
            out.push('^');
            out.push_str(&e.to_string());
        }
    }
}

impl fmt::Display for Polynomial {
    /// Ascending degree, explicit `*` between coefficient and variables,
    /// rationals as `a/b`. The zero polynomial prints as `0`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut s = String::new();
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            if i == 0 {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            let a = c.abs();
            if m.is_one() {
                s.push_str(&a.to_string());
            } else {
                if !a.is_one() {
                    s.push_str(&a.to_string());
                    s.push('*');
                }
                fmt_monomial(m, &self.ctx, &mut s);
            }
        }
        write!(f, "{s}")
    }
}
