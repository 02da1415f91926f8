//! Exact local colength dim O/I at the origin, by truncated-jet linear
//! algebra with a Nakayama stopping rule.
//!
//! At jet order N the row space W_N is spanned by the truncations to degree
//! < N of all products x^alpha * g, g a generator, |alpha| + ord(g) < N. If
//! every monomial of degree exactly N-1 lies in W_N, then m^{N-1} is
//! contained in I + m^N and Nakayama promotes that to m^{N-1} in I, so the
//! quotient has stabilized one level earlier and its dimension there is the
//! answer. Everything is integer arithmetic: rows are cleared of
//! denominators up front and the elimination is fraction-free.

use crate::par;
use crate::poly::Monomial;
use crate::schemes::IdealPresentation;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;
use std::collections::HashMap;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ColengthValue {
    Finite(usize),
    /// No stabilization up to the configured jet bound. Not a proof that the
    /// colength is infinite.
    NotFiniteUpTo(u32),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColengthResult {
    pub value: ColengthValue,
    /// Jet order at which the stopping rule fired.
    pub stabilized_at: Option<u32>,
    pub quotient_basis: Option<Vec<Monomial>>,
}

impl ColengthResult {
    pub fn is_finite(&self) -> bool {
        matches!(self.value, ColengthValue::Finite(_))
    }

    pub fn finite(&self) -> Option<usize> {
        match self.value {
            ColengthValue::Finite(c) => Some(c),
            ColengthValue::NotFiniteUpTo(_) => None,
        }
    }
}

/// A sparse integer row over the jet monomial basis, entries sorted by
/// column.
type Row = Vec<(usize, BigInt)>;

fn strip_content(row: &mut Row) {
    let mut content = BigInt::zero();
    for (_, c) in row.iter() {
        content = content.gcd(c);
    }
    if !content.is_zero() && content != BigInt::from(1) {
        for (_, c) in row.iter_mut() {
            *c = &*c / &content;
        }
    }
}

/// pivot and row share their lead column; cancel it and return the
/// content-stripped combination pivot_lead*row - row_lead*pivot.
fn combine(pivot: &Row, row: &Row) -> Row {
    debug_assert_eq!(pivot[0].0, row[0].0);
    let g = pivot[0].1.gcd(&row[0].1);
    let a = &pivot[0].1 / &g;
    let b = &row[0].1 / &g;
    let mut out: Row = Vec::with_capacity(pivot.len() + row.len());
    let mut i = 1;
    let mut j = 1;
    while i < row.len() || j < pivot.len() {
        let next = if j >= pivot.len() || (i < row.len() && row[i].0 < pivot[j].0) {
            let e = (row[i].0, &a * &row[i].1);
            i += 1;
            e
        } else if i >= row.len() || pivot[j].0 < row[i].0 {
            let e = (pivot[j].0, -(&b * &pivot[j].1));
            j += 1;
            e
        } else {
            let c = &a * &row[i].1 - &b * &pivot[j].1;
            let e = (row[i].0, c);
            i += 1;
            j += 1;
            e
        };
        if !next.1.is_zero() {
            out.push(next);
        }
    }
    strip_content(&mut out);
    out
}

/// Incremental echelonization keyed by lead column. The set of lead columns
/// only depends on the row space, not on insertion order.
struct Eliminator {
    pivots: HashMap<usize, Row>,
}

impl Eliminator {
    fn new() -> Self {
        Eliminator { pivots: HashMap::new() }
    }

    fn insert(&mut self, mut row: Row) {
        loop {
            let Some(&(lead, _)) = row.first() else { return };
            match self.pivots.get(&lead) {
                None => {
                    self.pivots.insert(lead, row);
                    return;
                }
                Some(p) => row = combine(p, &row),
            }
        }
    }

    fn rank(&self) -> usize {
        self.pivots.len()
    }
}

struct Level {
    ncols: usize,
    eliminator: Eliminator,
    columns: Vec<Monomial>,
}

impl Level {
    fn dim(&self) -> usize {
        self.ncols - self.eliminator.rank()
    }

    /// The stopping rule: every top-degree monomial is a pivot lead. Leads
    /// can only move toward higher columns during reduction and the
    /// top-degree block sits at the end of the column order, so this is
    /// exactly membership of the whole degree-(N-1) block in the row space.
    fn all_top_degree_pivoted(&self, n_jet: u32) -> bool {
        let first_top = self
            .columns
            .partition_point(|m| m.degree() < n_jet - 1);
        (first_top..self.ncols).all(|c| self.eliminator.pivots.contains_key(&c))
    }

    fn non_pivot_columns(&self) -> Vec<Monomial> {
        (0..self.ncols)
            .filter(|c| !self.eliminator.pivots.contains_key(c))
            .map(|c| self.columns[c].clone())
            .collect()
    }
}

fn eliminate_level(ideal: &IdealPresentation, n_jet: u32) -> Level {
    assert!(n_jet >= 1);
    let nvars = ideal.ring.len();
    let columns = Monomial::all_below_degree(nvars, n_jet);
    let index: HashMap<Monomial, usize> = columns
        .iter()
        .cloned()
        .enumerate()
        .map(|(i, m)| (m, i))
        .collect();
    let prepared: Vec<(Vec<(Monomial, BigInt)>, u32)> = ideal
        .generators
        .iter()
        .filter(|g| !g.is_zero())
        .map(|g| {
            let terms = g.primitive_integer_terms();
            let ord = terms[0].0.degree();
            (terms, ord)
        })
        .collect();
    let batches: Vec<Vec<Row>> = par::map_vec(prepared, |(terms, ord)| {
        if ord >= n_jet {
            return Vec::new();
        }
        Monomial::all_below_degree(nvars, n_jet - ord)
            .into_iter()
            .map(|alpha| {
                terms
                    .iter()
                    .map(|(m, c)| (m.mul(&alpha), c.clone()))
                    .filter(|(mm, _)| mm.degree() < n_jet)
                    .map(|(mm, c)| (index[&mm], c))
                    .collect::<Row>()
            })
            .collect()
    });
    let mut rows: Vec<Row> = batches.into_iter().flatten().collect();
    // favor sparse rows per lead; ties keep generation order, so the whole
    // elimination is deterministic
    rows.sort_by_key(|r| (r[0].0, r.len()));
    let mut eliminator = Eliminator::new();
    for row in rows {
        eliminator.insert(row);
    }
    Level {
        ncols: columns.len(),
        eliminator,
        columns,
    }
}

/// dim of O/(I + m^N): monomials of degree < N minus the rank of the
/// truncated-multiples matrix.
pub fn jet_quotient_dim(ideal: &IdealPresentation, n_jet: u32) -> usize {
    eliminate_level(ideal, n_jet).dim()
}

/// Monomials spanning O/(I + m^N): the non-pivot columns.
pub fn jet_quotient_basis(ideal: &IdealPresentation, n_jet: u32) -> Vec<Monomial> {
    eliminate_level(ideal, n_jet).non_pivot_columns()
}

pub fn local_colength(ideal: &IdealPresentation, max_jet: u32) -> ColengthResult {
    colength_impl(ideal, max_jet, false)
}

pub fn local_colength_with_basis(ideal: &IdealPresentation, max_jet: u32) -> ColengthResult {
    colength_impl(ideal, max_jet, true)
}

fn colength_impl(ideal: &IdealPresentation, max_jet: u32, want_basis: bool) -> ColengthResult {
    assert!(max_jet >= 2, "need at least jet order 2");
    if ideal
        .generators
        .iter()
        .any(|g| !g.constant_term().is_zero())
    {
        // a unit generator: the local quotient is 0 without any elimination
        return ColengthResult {
            value: ColengthValue::Finite(0),
            stabilized_at: None,
            quotient_basis: want_basis.then(Vec::new),
        };
    }
    let nvars = ideal.ring.len();
    let mut prev_dim = 1usize;
    let mut prev_basis = vec![Monomial::one(nvars)];
    for n in 2..=max_jet {
        let level = eliminate_level(ideal, n);
        if level.all_top_degree_pivoted(n) {
            return ColengthResult {
                value: ColengthValue::Finite(prev_dim),
                stabilized_at: Some(n),
                quotient_basis: want_basis.then_some(prev_basis),
            };
        }
        prev_dim = level.dim();
        if want_basis {
            prev_basis = level.non_pivot_columns();
        }
    }
    ColengthResult {
        value: ColengthValue::NotFiniteUpTo(max_jet),
        stabilized_at: None,
        quotient_basis: None,
    }
}
