//! Stable type enumeration and the two counting routes: local colength of
//! the restricted ideal divided by the stabilizer order, and the weighted
//! Bezout closed form for weighted-homogeneous germs.

use crate::colength::{local_colength, ColengthValue};
use crate::germ::GermSpec;
use crate::partition::{partitions_of, Partition};
use crate::schemes::restricted_ideal;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StableTypeDescriptor {
    pub partition: Partition,
    pub dimension: i64,
    pub zero_dimensional: bool,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CountError {
    #[error("need n < p, got n = {n}, p = {p}")]
    BadDimensions { n: usize, p: usize },
    #[error("partition {partition} has dimension {dimension}, not a discrete stable type")]
    NotZeroDimensional { partition: Partition, dimension: i64 },
    #[error("colength did not stabilize up to jet order {bound} for partition {partition}")]
    NotFinite { partition: Partition, bound: u32 },
    #[error("colength {colength} for partition {partition} is not divisible by the stabilizer order {stabilizer}")]
    NotDivisible {
        partition: Partition,
        colength: u64,
        stabilizer: u64,
    },
    #[error("germ is not weighted homogeneous and no weight system could be inferred")]
    NotWeightedHomogeneous,
    #[error("degree {degree} minus {i} times the distinguished weight {w} is negative; the closed form does not apply")]
    NegativeFactor { degree: u64, i: u32, w: u64 },
    #[error("closed-form numerator {numerator} is not divisible by the weight product {denominator}")]
    NonIntegralColength { numerator: i128, denominator: i128 },
    #[error("an empty scheme has no Milnor number")]
    EmptyScheme,
}

/// Every partition of every k >= 2 whose stable type has non-negative
/// expected dimension, in k-ascending then reverse-lexicographic order.
pub fn enumerate_stable_partitions(
    n: usize,
    p: usize,
) -> Result<Vec<StableTypeDescriptor>, CountError> {
    if n >= p {
        return Err(CountError::BadDimensions { n, p });
    }
    // dimension is maximized at l = k, where it is p - k(p-n); beyond
    // p/(p-n) every partition of k is negative-dimensional
    let k_max = p / (p - n);
    let mut out = Vec::new();
    for k in 2..=k_max {
        for partition in partitions_of(k as u32) {
            let dimension = partition.dimension(n, p);
            if dimension >= 0 {
                out.push(StableTypeDescriptor {
                    zero_dimensional: dimension == 0,
                    partition,
                    dimension,
                });
            }
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CountMethod {
    Colength,
    ClosedForm,
    Both,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountReport {
    pub partition: Partition,
    pub method: CountMethod,
    pub colength: u64,
    pub stabilizer: u64,
    pub count: u64,
    /// set when both methods ran
    pub agreement: Option<bool>,
    /// jet order where the colength engine stabilized, when it ran
    pub stabilized_at: Option<u32>,
}

fn require_zero_dimensional(germ: &GermSpec, partition: &Partition) -> Result<(), CountError> {
    let dimension = partition.dimension(germ.n, germ.p);
    if dimension != 0 {
        return Err(CountError::NotZeroDimensional {
            partition: partition.clone(),
            dimension,
        });
    }
    Ok(())
}

/// Count by the degree of the projection: local colength of the restricted
/// ideal, divided by the stabilizer order of the partition.
pub fn count_by_colength(
    germ: &GermSpec,
    partition: &Partition,
    max_jet: u32,
) -> Result<CountReport, CountError> {
    require_zero_dimensional(germ, partition)?;
    let ideal = restricted_ideal(germ, partition);
    let result = local_colength(&ideal, max_jet);
    let colength = match result.value {
        ColengthValue::Finite(c) => c as u64,
        ColengthValue::NotFiniteUpTo(bound) => {
            return Err(CountError::NotFinite {
                partition: partition.clone(),
                bound,
            })
        }
    };
    let stabilizer = partition.stabilizer_order();
    if colength % stabilizer != 0 {
        return Err(CountError::NotDivisible {
            partition: partition.clone(),
            colength,
            stabilizer,
        });
    }
    Ok(CountReport {
        partition: partition.clone(),
        method: CountMethod::Colength,
        colength,
        stabilizer,
        count: colength / stabilizer,
        agreement: None,
        stabilized_at: result.stabilized_at,
    })
}

/// Weighted Bezout count: the restricted generators are weighted
/// homogeneous of degrees d_j - i*w_z, the diagonal directions contribute
/// w_z each, so the colength is the degree product over the weight product.
pub fn count_by_formula(germ: &GermSpec, partition: &Partition) -> Result<CountReport, CountError> {
    require_zero_dimensional(germ, partition)?;
    let (weights, degrees) = match (&germ.weights, &germ.degrees) {
        (Some(w), Some(d)) => (w.clone(), d.clone()),
        _ => infer_weights(germ).ok_or(CountError::NotWeightedHomogeneous)?,
    };
    let k = partition.k();
    let ell = partition.ell();
    let w_z = weights[germ.n - 1];
    let mut numerator: i128 = 1;
    let mut saw_zero = false;
    for &d in &degrees {
        for i in 1..k {
            let factor = d as i128 - (i as i128) * (w_z as i128);
            if factor < 0 {
                return Err(CountError::NegativeFactor { degree: d, i, w: w_z });
            }
            if factor == 0 {
                saw_zero = true;
            }
            numerator *= factor;
        }
    }
    let stabilizer = partition.stabilizer_order();
    let colength = if saw_zero {
        0
    } else {
        let mut denominator: i128 = 1;
        for &w in &weights[..germ.n - 1] {
            denominator *= w as i128;
        }
        for _ in 0..ell {
            denominator *= w_z as i128;
        }
        if numerator % denominator != 0 {
            return Err(CountError::NonIntegralColength {
                numerator,
                denominator,
            });
        }
        (numerator / denominator) as u64
    };
    if colength % stabilizer != 0 {
        return Err(CountError::NotDivisible {
            partition: partition.clone(),
            colength,
            stabilizer,
        });
    }
    Ok(CountReport {
        partition: partition.clone(),
        method: CountMethod::ClosedForm,
        colength,
        stabilizer,
        count: colength / stabilizer,
        agreement: None,
        stabilized_at: None,
    })
}

/// Run the colength route, and the closed form too when a weight system is
/// available; report whether they agree. Without weights this degrades to
/// the plain colength count.
pub fn count_both(
    germ: &GermSpec,
    partition: &Partition,
    max_jet: u32,
) -> Result<CountReport, CountError> {
    let by_colength = count_by_colength(germ, partition, max_jet)?;
    let has_weights = germ.weights.is_some() || infer_weights(germ).is_some();
    if !has_weights {
        return Ok(by_colength);
    }
    let by_formula = count_by_formula(germ, partition)?;
    Ok(CountReport {
        method: CountMethod::Both,
        agreement: Some(
            by_formula.colength == by_colength.colength && by_formula.count == by_colength.count,
        ),
        ..by_colength
    })
}

/// Milnor number of a zero-dimensional ICIS fiber from its length.
pub fn milnor_from_colength(colength: u64) -> Result<u64, CountError> {
    if colength == 0 {
        return Err(CountError::EmptyScheme);
    }
    Ok(colength - 1)
}

/// Smallest positive integer weight system making every component weighted
/// homogeneous, with the degrees it induces. The weight relations of each
/// component form a linear system; a one-dimensional solution space is
/// scaled to the primitive integer ray, an underdetermined system is
/// resolved by a bounded search ordered by (total weight, lex).
pub fn infer_weights(germ: &GermSpec) -> Option<(Vec<u64>, Vec<u64>)> {
    let n = germ.n;
    let mut rows: Vec<Vec<BigRational>> = Vec::new();
    for h in &germ.components {
        let mut terms = h.terms();
        let Some((first, _)) = terms.next() else { continue };
        for (m, _) in terms {
            let row: Vec<BigRational> = (0..n)
                .map(|i| {
                    BigRational::from(BigInt::from(m.exps()[i] as i64 - first.exps()[i] as i64))
                })
                .collect();
            rows.push(row);
        }
    }
    let basis = rational_nullspace(rows, n);
    let weights = match basis.len() {
        0 => return None,
        1 => primitive_positive(&basis[0])?,
        _ => search_weights(germ, n)?,
    };
    let degrees: Vec<u64> = germ
        .components
        .iter()
        .map(|h| h.weighted_homogeneous_degree(&weights))
        .collect::<Option<Vec<u64>>>()?;
    if degrees.iter().any(|&d| d == 0) {
        return None;
    }
    Some((weights, degrees))
}

/// Basis of the nullspace of the given rows, by reduced row echelon form.
fn rational_nullspace(mut rows: Vec<Vec<BigRational>>, n: usize) -> Vec<Vec<BigRational>> {
    let mut pivot_cols: Vec<usize> = Vec::new();
    let mut rank = 0usize;
    for col in 0..n {
        let Some(pivot) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, pivot);
        let lead = rows[rank][col].clone();
        for entry in rows[rank].iter_mut() {
            *entry = &*entry / &lead;
        }
        for r in 0..rows.len() {
            if r != rank && !rows[r][col].is_zero() {
                let factor = rows[r][col].clone();
                for c in 0..n {
                    let sub = &rows[rank][c] * &factor;
                    rows[r][c] = &rows[r][c] - &sub;
                }
            }
        }
        pivot_cols.push(col);
        rank += 1;
    }
    let mut basis = Vec::new();
    for free in (0..n).filter(|c| !pivot_cols.contains(c)) {
        let mut v = vec![BigRational::zero(); n];
        v[free] = BigRational::one();
        for (r, &pc) in pivot_cols.iter().enumerate() {
            v[pc] = -rows[r][free].clone();
        }
        basis.push(v);
    }
    basis
}

/// Scale a rational ray to primitive positive integers; None when entries
/// vanish or mix signs.
fn primitive_positive(v: &[BigRational]) -> Option<Vec<u64>> {
    if v.iter().any(|e| e.is_zero()) {
        return None;
    }
    let mut lcm_denom = BigInt::one();
    for e in v {
        lcm_denom = lcm_denom.lcm(e.denom());
    }
    let ints: Vec<BigInt> = v
        .iter()
        .map(|e| e.numer() * (&lcm_denom / e.denom()))
        .collect();
    if !(ints.iter().all(|i| i.is_positive()) || ints.iter().all(|i| i.is_negative())) {
        return None;
    }
    let mut content = BigInt::zero();
    for i in &ints {
        content = content.gcd(i);
    }
    ints.iter()
        .map(|i| (i.abs() / &content).try_into().ok())
        .collect()
}

/// Deterministic search over positive weight vectors ordered by total sum
/// then lexicographically, for systems with more than one degree of
/// freedom.
fn search_weights(germ: &GermSpec, n: usize) -> Option<Vec<u64>> {
    const MAX_TOTAL: u64 = 48;
    let fits = |w: &[u64]| {
        germ.components
            .iter()
            .all(|h| h.weighted_homogeneous_degree(w).is_some())
    };
    let mut w = vec![1u64; n];
    for total in n as u64..=MAX_TOTAL {
        if fill_weights(&mut w, 0, total, &fits) {
            return Some(w);
        }
    }
    None
}

fn fill_weights(w: &mut Vec<u64>, slot: usize, remaining: u64, fits: &impl Fn(&[u64]) -> bool) -> bool {
    let slots_left = w.len() - slot;
    if slots_left == 1 {
        w[slot] = remaining;
        return remaining >= 1 && fits(w);
    }
    for v in 1..=remaining - (slots_left as u64 - 1) {
        w[slot] = v;
        if fill_weights(w, slot + 1, remaining - v, fits) {
            return true;
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::germ::germ_from_strs;

    fn crosscap() -> GermSpec {
        germ_from_strs("crosscap", &["x", "y"], &["x*y + y^3", "y^4"], Some(vec![2, 1]))
    }

    fn p1() -> GermSpec {
        germ_from_strs(
            "p1",
            &["x", "y", "z"],
            &["y*z + z^4", "x*z + z^3"],
            Some(vec![2, 3, 1]),
        )
    }

    #[test]
    fn stable_partitions_for_surface_to_three_space() {
        let all = enumerate_stable_partitions(2, 3).unwrap();
        let zero: Vec<String> = all
            .iter()
            .filter(|d| d.zero_dimensional)
            .map(|d| d.partition.to_string())
            .collect();
        assert_eq!(zero, vec!["(2)", "(1,1,1)"]);
    }

    #[test]
    fn stable_partitions_for_three_to_four_space() {
        let all = enumerate_stable_partitions(3, 4).unwrap();
        let names: Vec<String> = all.iter().map(|d| d.partition.to_string()).collect();
        assert_eq!(names, vec!["(2)", "(1,1)", "(2,1)", "(1,1,1)", "(1,1,1,1)"]);
        let zero: Vec<String> = all
            .iter()
            .filter(|d| d.zero_dimensional)
            .map(|d| d.partition.to_string())
            .collect();
        assert_eq!(zero, vec!["(2,1)", "(1,1,1,1)"]);
        assert!(enumerate_stable_partitions(3, 3).is_err());
    }

    #[test]
    fn closed_form_for_the_table_germ() {
        let report = count_by_formula(&p1(), &Partition::new(vec![2, 1]).unwrap()).unwrap();
        assert_eq!(report.colength, 2);
        assert_eq!(report.stabilizer, 1);
        assert_eq!(report.count, 2);
        // quadruple points vanish: one degree factor is exactly zero
        let quad = count_by_formula(&p1(), &Partition::new(vec![1, 1, 1, 1]).unwrap()).unwrap();
        assert_eq!(quad.count, 0);
    }

    #[test]
    fn closed_form_triple_points_of_the_crosscap_germ() {
        let report = count_by_formula(&crosscap(), &Partition::new(vec![1, 1, 1]).unwrap()).unwrap();
        assert_eq!(report.colength, 6);
        assert_eq!(report.stabilizer, 6);
        assert_eq!(report.count, 1);
    }

    #[test]
    fn closed_form_rejects_positive_dimensional_types() {
        let err = count_by_formula(&p1(), &Partition::new(vec![2]).unwrap()).unwrap_err();
        assert!(matches!(err, CountError::NotZeroDimensional { dimension: 1, .. }));
    }

    #[test]
    fn colength_count_for_double_points_of_example_germ() {
        let g = germ_from_strs(
            "mixed_tails",
            &["x", "y"],
            &["x^2*y + y^6 + y^7", "x*y^2 + y^4 + y^6 + y^9"],
            None,
        );
        let report = count_by_colength(&g, &Partition::new(vec![2]).unwrap(), 24).unwrap();
        assert_eq!(report.colength, 6);
        assert_eq!(report.stabilizer, 1);
        assert_eq!(report.count, 6);
        assert!(report.stabilized_at.is_some());
    }

    #[test]
    fn colength_count_for_triple_points_of_example_germ() {
        let g = germ_from_strs(
            "mixed_tails",
            &["x", "y"],
            &["x^2*y + y^6 + y^7", "x*y^2 + y^4 + y^6 + y^9"],
            None,
        );
        let report = count_by_colength(&g, &Partition::new(vec![1, 1, 1]).unwrap(), 24).unwrap();
        // cross-checked against an independent Groebner computation: the jet
        // dimensions plateau 47, 48, 48, so the local colength is 48
        assert_eq!(report.colength, 48);
        assert_eq!(report.stabilizer, 6);
        assert_eq!(report.count, 8);
    }

    #[test]
    fn both_methods_agree_on_the_crosscap_germ() {
        let report = count_both(&crosscap(), &Partition::new(vec![1, 1, 1]).unwrap(), 24).unwrap();
        assert_eq!(report.method, CountMethod::Both);
        assert_eq!(report.agreement, Some(true));
        assert_eq!(report.count, 1);
        assert!(report.stabilized_at.is_some());
    }

    #[test]
    fn non_finite_count_is_an_error_value() {
        // both derivatives vanish on the whole line x = 0
        let g = germ_from_strs("cyl", &["x", "z"], &["x*z", "x*z^2"], None);
        let err = count_by_colength(&g, &Partition::new(vec![2]).unwrap(), 8).unwrap_err();
        assert!(matches!(err, CountError::NotFinite { bound: 8, .. }));
    }

    #[test]
    fn weight_inference_from_scratch() {
        let g = germ_from_strs("crosscap", &["x", "y"], &["x*y + y^3", "y^4"], None);
        let (w, d) = infer_weights(&g).unwrap();
        assert_eq!(w, vec![2, 1]);
        assert_eq!(d, vec![3, 4]);
        let t = germ_from_strs("p1", &["x", "y", "z"], &["y*z + z^4", "x*z + z^3"], None);
        let (w, d) = infer_weights(&t).unwrap();
        assert_eq!(w, vec![2, 3, 1]);
        assert_eq!(d, vec![4, 3]);
    }

    #[test]
    fn weight_inference_fails_on_mixed_tails() {
        let g = germ_from_strs(
            "mixed",
            &["x", "y", "z"],
            &["x*z + z^3", "y*z^2 + z^4 + z^3"],
            None,
        );
        assert_eq!(infer_weights(&g), None);
    }

    #[test]
    fn weight_inference_underdetermined_prefers_small_weights() {
        let g = germ_from_strs("whitney", &["x", "z"], &["z^2", "x*z"], None);
        let (w, d) = infer_weights(&g).unwrap();
        assert_eq!(w, vec![1, 1]);
        assert_eq!(d, vec![2, 2]);
    }

    #[test]
    fn cusp_counts_one_double_point() {
        let g = germ_from_strs("cusp", &["z"], &["z^2", "z^3"], Some(vec![1]));
        let both = count_both(&g, &Partition::new(vec![1, 1]).unwrap(), 24).unwrap();
        assert_eq!(both.colength, 2);
        assert_eq!(both.count, 1);
        assert_eq!(both.agreement, Some(true));
    }

    #[test]
    fn milnor_numbers_shift_by_one() {
        assert_eq!(milnor_from_colength(2).unwrap(), 1);
        assert_eq!(milnor_from_colength(5).unwrap(), 4);
        assert_eq!(milnor_from_colength(1).unwrap(), 0);
        assert!(milnor_from_colength(0).is_err());
    }
}
