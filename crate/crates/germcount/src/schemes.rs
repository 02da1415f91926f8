//! Partition-indexed ideals attached to a germ: the k-fold multiple point
//! ideal, the diagonal ideal of a partition, their sum, the restriction to
//! the small diagonal, the map F_P built from those restricted generators,
//! and the ideal of maximal minors of its Jacobian.

use crate::divdiff::{diagonal_context, MultiPointContext};
use crate::germ::GermSpec;
use crate::partition::Partition;
use crate::poly::{Polynomial, VariableContext};
use std::collections::HashMap;
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Provenance {
    MultiPoint(usize),
    Diagonal(Partition),
    StableType(Partition),
    Restricted(Partition),
    FpMap(Partition),
    Minors(Partition),
    Invariant(Partition),
}

/// An ordered generating set of an ideal in a fixed polynomial ring. No
/// normalization is performed: generators appear in construction order and
/// may include zeros.
#[derive(Debug, Clone)]
pub struct IdealPresentation {
    pub ring: Arc<VariableContext>,
    pub generators: Vec<Polynomial>,
    pub provenance: Provenance,
}

impl IdealPresentation {
    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }
}

/// Ideal of the k-fold multiple point space in (x, z_1..z_k): the divided
/// differences V_i^k(h_j), component index outside, difference order inside.
pub fn multiple_point_ideal(germ: &GermSpec, k: usize) -> IdealPresentation {
    assert!(k >= 2, "multiple point spaces need k >= 2");
    let mpc = MultiPointContext::new(germ, k);
    let mut generators = Vec::with_capacity(germ.m() * (k - 1));
    for h in &germ.components {
        let vs = mpc.divided_differences(h);
        generators.extend(vs.into_iter().skip(1));
    }
    IdealPresentation {
        ring: mpc.ring.clone(),
        generators,
        provenance: Provenance::MultiPoint(k),
    }
}

/// Ideal of the partition diagonal: consecutive differences z_i - z_{i+1}
/// within each block, k - l generators.
pub fn diagonal_ideal(mpc: &MultiPointContext, partition: &Partition) -> IdealPresentation {
    assert_eq!(partition.k() as usize, mpc.k, "partition must sum to k");
    let mut generators = Vec::with_capacity(mpc.k - partition.ell());
    for (block, &r) in partition.parts().iter().enumerate() {
        let start = partition.block_start(block);
        for s in 1..r as usize {
            let a = Polynomial::variable(&mpc.ring, mpc.z_var(start + s));
            let b = Polynomial::variable(&mpc.ring, mpc.z_var(start + s + 1));
            generators.push(&a - &b);
        }
    }
    IdealPresentation {
        ring: mpc.ring.clone(),
        generators,
        provenance: Provenance::Diagonal(partition.clone()),
    }
}

/// Ideal of the closure of the stable type: multiple point generators
/// followed by the diagonal generators.
pub fn stable_type_ideal(germ: &GermSpec, partition: &Partition) -> IdealPresentation {
    let k = partition.k() as usize;
    let mut ideal = multiple_point_ideal(germ, k);
    let mpc = MultiPointContext::new(germ, k);
    ideal
        .generators
        .extend(diagonal_ideal(&mpc, partition).generators);
    ideal.provenance = Provenance::StableType(partition.clone());
    ideal
}

/// Restriction of the stable type ideal to the small diagonal of the
/// partition, in the ring (x, t_1..t_l). The diagonal generators restrict to
/// zero and are dropped; every restricted divided difference is kept, zero
/// or not, so the generator count is always (k-1)(p-n+1).
pub fn restricted_ideal(germ: &GermSpec, partition: &Partition) -> IdealPresentation {
    let mut ideal = restricted_ideal_with_parts(germ, partition.parts());
    ideal.provenance = Provenance::Restricted(partition.clone());
    ideal
}

/// Same construction with the blocks taken in the given (not necessarily
/// sorted) order; block i maps to t_i. Used to check that the colength does
/// not depend on how the parts are listed.
pub fn restricted_ideal_with_parts(germ: &GermSpec, parts: &[u32]) -> IdealPresentation {
    assert!(parts.iter().all(|&r| r >= 1));
    let k: usize = parts.iter().map(|&r| r as usize).sum();
    assert!(k >= 2);
    // a scratch partition with the same part sizes carries the block layout;
    // restriction only needs sizes in order, which new() would resort, so
    // build the variable map directly
    let mpc = MultiPointContext::new(germ, k);
    let sorted = Partition::new(parts.to_vec()).unwrap();
    let target = diagonal_context(germ, &sorted);
    let n = germ.n;
    let mut var_map = Vec::with_capacity(mpc.ring.len());
    for a in 0..n - 1 {
        var_map.push(a);
    }
    for (block, &r) in parts.iter().enumerate() {
        for _ in 0..r {
            var_map.push(n - 1 + block);
        }
    }
    let mut generators = Vec::with_capacity(germ.m() * (k - 1));
    for h in &germ.components {
        let vs = mpc.divided_differences(h);
        for v in vs.into_iter().skip(1) {
            generators.push(v.map_context(&target, &var_map));
        }
    }
    IdealPresentation {
        ring: target,
        generators,
        provenance: Provenance::Restricted(sorted),
    }
}

/// The map F_P whose fiber over 0 is the restricted multiple point scheme:
/// source (x, t_1..t_l), target dimension (p-n+1)(k-1).
#[derive(Debug, Clone)]
pub struct FpMap {
    pub ring: Arc<VariableContext>,
    pub components: Vec<Polynomial>,
    /// number of difference-type components, (p-n+1)(l-1)
    pub g_count: usize,
    /// number of derivative-type components, (p-n+1)(k-l)
    pub h_count: usize,
    pub partition: Partition,
}

impl FpMap {
    pub fn q(&self) -> usize {
        self.components.len()
    }

    pub fn source_dim(&self) -> usize {
        self.ring.len()
    }
}

/// Canonical realization of F_P: the restricted divided differences, in
/// ideal-generator order. This is the form whose zero fiber is the
/// restricted multiple point scheme on the nose.
pub fn fp_map(germ: &GermSpec, partition: &Partition) -> FpMap {
    assert!(partition.k() >= 2);
    let ideal = restricted_ideal(germ, partition);
    let m = germ.m();
    let k = partition.k() as usize;
    let ell = partition.ell();
    FpMap {
        ring: ideal.ring,
        components: ideal.generators,
        g_count: m * (ell - 1),
        h_count: m * (k - ell),
        partition: partition.clone(),
    }
}

/// Generic-point presentation of F_P: difference components
/// h_j(x, t_1) - h_j(x, t_i) for i = 2..l, then derivative components
/// (d^s h_j / dz^s)(x, t_i) for s = 1..r_i-1. Cuts out the same set away
/// from collisions of the t_i; kept for cross-checking colengths on
/// zero-dimensional examples.
pub fn fp_map_raw(germ: &GermSpec, partition: &Partition) -> FpMap {
    assert!(partition.k() >= 2);
    let ell = partition.ell();
    let target = diagonal_context(germ, partition);
    let n = germ.n;
    let eval_at = |i: usize| -> Vec<Polynomial> {
        // images of (x_1..x_{n-1}, z) under evaluation at the i-th diagonal
        // coordinate, 1-based i
        let mut images = Vec::with_capacity(n);
        for a in 0..n - 1 {
            images.push(Polynomial::variable(&target, a));
        }
        images.push(Polynomial::variable(&target, n - 1 + (i - 1)));
        images
    };
    let mut differences = Vec::new();
    let mut derivatives = Vec::new();
    for h in &germ.components {
        for i in 2..=ell {
            let at_first = h.substitute(&eval_at(1));
            let at_i = h.substitute(&eval_at(i));
            differences.push(&at_first - &at_i);
        }
    }
    for h in &germ.components {
        for (block, &r) in partition.parts().iter().enumerate() {
            for s in 1..r {
                derivatives.push(h.partial_derivative(n - 1, s).substitute(&eval_at(block + 1)));
            }
        }
    }
    let g_count = differences.len();
    let h_count = derivatives.len();
    let mut components = differences;
    components.extend(derivatives);
    FpMap {
        ring: target,
        components,
        g_count,
        h_count,
        partition: partition.clone(),
    }
}

/// Jacobian matrix of the components with respect to every source variable,
/// row per component, column per variable.
pub fn jacobian(map: &FpMap) -> Vec<Vec<Polynomial>> {
    map.components
        .iter()
        .map(|c| (0..map.ring.len()).map(|v| c.partial_derivative(v, 1)).collect())
        .collect()
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MinorsError {
    #[error("cannot take {q}x{q} minors of a {rows}x{cols} matrix")]
    TooLarge { q: usize, rows: usize, cols: usize },
}

/// All q x q minors of the Jacobian of F_P, column subsets in lexicographic
/// order. Determinants are expanded by cofactors along the last row, with
/// the subdeterminants memoized per column subset so the work is shared
/// across overlapping minors.
pub fn jacobian_minors(map: &FpMap, q: usize) -> Result<IdealPresentation, MinorsError> {
    let rows = map.q();
    let cols = map.source_dim();
    if q > rows || q > cols {
        return Err(MinorsError::TooLarge { q, rows, cols });
    }
    let jac = jacobian(map);
    let mut memo: HashMap<u64, Polynomial> = HashMap::new();
    memo.insert(0, Polynomial::one(&map.ring));
    let mut generators = Vec::new();
    let mut subset = Vec::with_capacity(q);
    enumerate_subsets(cols, q, 0, &mut subset, &mut |cols_chosen| {
        generators.push(det_of_subset(&jac, cols_chosen, &map.ring, &mut memo));
    });
    Ok(IdealPresentation {
        ring: map.ring.clone(),
        generators,
        provenance: Provenance::Minors(map.partition.clone()),
    })
}

fn enumerate_subsets(
    cols: usize,
    want: usize,
    from: usize,
    acc: &mut Vec<usize>,
    emit: &mut impl FnMut(&[usize]),
) {
    if acc.len() == want {
        emit(acc);
        return;
    }
    let still_needed = want - acc.len();
    for c in from..=cols - still_needed {
        acc.push(c);
        enumerate_subsets(cols, want, c + 1, acc, emit);
        acc.pop();
    }
}

/// Determinant of the submatrix on rows 0..|cols| and the given columns,
/// expanding along the last of those rows.
fn det_of_subset(
    jac: &[Vec<Polynomial>],
    cols: &[usize],
    ring: &Arc<VariableContext>,
    memo: &mut HashMap<u64, Polynomial>,
) -> Polynomial {
    let key = cols.iter().fold(0u64, |acc, &c| acc | (1u64 << c));
    if let Some(hit) = memo.get(&key) {
        return hit.clone();
    }
    let r = cols.len();
    let mut det = Polynomial::zero(ring);
    for (pos, &c) in cols.iter().enumerate() {
        let entry = &jac[r - 1][c];
        if entry.is_zero() {
            continue;
        }
        let rest: Vec<usize> = cols.iter().copied().filter(|&other| other != c).collect();
        let sub = det_of_subset(jac, &rest, ring, memo);
        let signed = if (r - 1 + pos) % 2 == 0 {
            &det + &(entry * &sub)
        } else {
            &det - &(entry * &sub)
        };
        det = signed;
    }
    memo.insert(key, det.clone());
    det
}
