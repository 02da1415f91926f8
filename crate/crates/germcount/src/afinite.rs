//! Finiteness invariants per partition: N(f,P) is the local colength of the
//! ideal spanned by the components of F_P together with the maximal minors
//! of its Jacobian. A germ passes the screen when every multiplicity-free
//! invariant and every discrete count is finite; a difference in any finite
//! invariant certifies two germs as non-equivalent.

use crate::colength::{local_colength, ColengthResult, ColengthValue};
use crate::counting::{count_by_colength, enumerate_stable_partitions, CountError};
use crate::germ::{corank_check, Corank, GermSpec};
use crate::par;
use crate::partition::Partition;
use crate::schemes::{fp_map, jacobian_minors, IdealPresentation, Provenance};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum AfiniteError {
    #[error("partition {partition} needs at least two points")]
    TooFewPoints { partition: Partition },
    #[error("partition {partition} has negative expected dimension {dimension}")]
    NegativeDimension { partition: Partition, dimension: i64 },
    #[error("germ '{name}' is immersive at the origin; nothing to screen")]
    Immersive { name: String },
    #[error("source/target dimensions differ: ({n1},{p1}) vs ({n2},{p2})")]
    DimensionMismatch {
        n1: usize,
        p1: usize,
        n2: usize,
        p2: usize,
    },
    #[error(transparent)]
    Count(#[from] CountError),
}

#[derive(Debug, Clone)]
pub struct InvariantReport {
    pub partition: Partition,
    pub n_value: ColengthResult,
    /// true for the multiplicity-free partitions the finiteness screen
    /// quantifies over
    pub required_by_theorem: bool,
}

/// N(f,P): local colength of (components of F_P) + (q x q Jacobian minors),
/// q = (p-n+1)(k-1), in the source ring of F_P. Never errs on
/// non-finiteness; the bound is carried in the result value.
pub fn invariant_n(
    germ: &GermSpec,
    partition: &Partition,
    max_jet: u32,
) -> Result<InvariantReport, AfiniteError> {
    if partition.k() < 2 {
        return Err(AfiniteError::TooFewPoints {
            partition: partition.clone(),
        });
    }
    let dimension = partition.dimension(germ.n, germ.p);
    if dimension < 0 {
        return Err(AfiniteError::NegativeDimension {
            partition: partition.clone(),
            dimension,
        });
    }
    let map = fp_map(germ, partition);
    // source dim minus q equals the expected dimension, so the dimension
    // check above guarantees the minors exist
    let minors = jacobian_minors(&map, map.q()).expect("minor size fits the Jacobian");
    let mut generators = map.components;
    generators.extend(minors.generators);
    let ideal = IdealPresentation {
        ring: map.ring,
        generators,
        provenance: Provenance::Invariant(partition.clone()),
    };
    Ok(InvariantReport {
        partition: partition.clone(),
        n_value: local_colength(&ideal, max_jet),
        required_by_theorem: partition.is_multiplicity_free(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Afinity {
    Yes,
    NotUpToBound(u32),
}

/// One discrete count inside a verdict; a count that fails to stabilize is
/// recorded as a bound, not an error.
#[derive(Debug, Clone)]
pub struct CountEvidence {
    pub partition: Partition,
    pub value: ColengthValue,
    pub count: Option<u64>,
    pub stabilized_at: Option<u32>,
}

#[derive(Debug, Clone)]
pub struct Verdict {
    pub afinite: Afinity,
    pub invariants: Vec<InvariantReport>,
    pub counts: Vec<CountEvidence>,
}

fn count_evidence(
    germ: &GermSpec,
    partition: &Partition,
    max_jet: u32,
) -> Result<CountEvidence, AfiniteError> {
    match count_by_colength(germ, partition, max_jet) {
        Ok(r) => Ok(CountEvidence {
            partition: partition.clone(),
            value: ColengthValue::Finite(r.colength as usize),
            count: Some(r.count),
            stabilized_at: r.stabilized_at,
        }),
        Err(CountError::NotFinite { bound, .. }) => Ok(CountEvidence {
            partition: partition.clone(),
            value: ColengthValue::NotFiniteUpTo(bound),
            count: None,
            stabilized_at: None,
        }),
        Err(e) => Err(e.into()),
    }
}

/// Full finiteness screen: N(f,P) for every multiplicity-free partition
/// with a stable type, plus the count of every zero-dimensional one. Yes
/// only when all of them are finite; otherwise the verdict names the jet
/// bound that was exhausted.
pub fn verdict(germ: &GermSpec, max_jet: u32) -> Result<Verdict, AfiniteError> {
    if corank_check(germ) == Corank::Immersive {
        return Err(AfiniteError::Immersive {
            name: germ.name.clone(),
        });
    }
    let descriptors = enumerate_stable_partitions(germ.n, germ.p)?;
    let free: Vec<Partition> = descriptors
        .iter()
        .filter(|d| d.partition.is_multiplicity_free())
        .map(|d| d.partition.clone())
        .collect();
    let zero: Vec<Partition> = descriptors
        .iter()
        .filter(|d| d.zero_dimensional)
        .map(|d| d.partition.clone())
        .collect();
    let invariants: Vec<InvariantReport> =
        par::map_vec(free, |p| invariant_n(germ, &p, max_jet))
            .into_iter()
            .collect::<Result<_, _>>()?;
    let counts: Vec<CountEvidence> =
        par::map_vec(zero, |p| count_evidence(germ, &p, max_jet))
            .into_iter()
            .collect::<Result<_, _>>()?;
    let all_finite = invariants.iter().all(|r| r.n_value.is_finite())
        && counts
            .iter()
            .all(|c| matches!(c.value, ColengthValue::Finite(_)));
    Ok(Verdict {
        afinite: if all_finite {
            Afinity::Yes
        } else {
            Afinity::NotUpToBound(max_jet)
        },
        invariants,
        counts,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Quantity {
    InvariantN,
    Count,
}

/// One side-by-side comparison cell pair. For count rows the values are the
/// counts themselves; for invariant rows, the colengths N(f,P).
#[derive(Debug, Clone)]
pub struct DistinguishRow {
    pub quantity: Quantity,
    pub partition: Partition,
    pub left: ColengthValue,
    pub right: ColengthValue,
    /// set only when both sides are finite and unequal; a bound on either
    /// side never certifies anything
    pub differs: bool,
}

#[derive(Debug, Clone)]
pub struct DistinguishReport {
    pub left_name: String,
    pub right_name: String,
    pub rows: Vec<DistinguishRow>,
    pub certified_distinct: bool,
}

/// Compare every computed invariant and count of two germs with the same
/// source and target dimensions. Any row where both sides are finite and
/// unequal certifies the germs as non-equivalent.
pub fn distinguish(
    g1: &GermSpec,
    g2: &GermSpec,
    max_jet: u32,
) -> Result<DistinguishReport, AfiniteError> {
    if (g1.n, g1.p) != (g2.n, g2.p) {
        return Err(AfiniteError::DimensionMismatch {
            n1: g1.n,
            p1: g1.p,
            n2: g2.n,
            p2: g2.p,
        });
    }
    let descriptors = enumerate_stable_partitions(g1.n, g1.p)?;
    let mut tasks: Vec<(Quantity, Partition)> = Vec::new();
    for d in &descriptors {
        if d.partition.is_multiplicity_free() {
            tasks.push((Quantity::InvariantN, d.partition.clone()));
        }
        if d.zero_dimensional {
            tasks.push((Quantity::Count, d.partition.clone()));
        }
    }
    let rows: Vec<DistinguishRow> = par::map_vec(tasks, |(quantity, partition)| {
        let cell = |g: &GermSpec| -> Result<ColengthValue, AfiniteError> {
            Ok(match quantity {
                Quantity::InvariantN => invariant_n(g, &partition, max_jet)?.n_value.value,
                Quantity::Count => match count_evidence(g, &partition, max_jet)? {
                    CountEvidence {
                        count: Some(c), ..
                    } => ColengthValue::Finite(c as usize),
                    CountEvidence { value, .. } => value,
                },
            })
        };
        let left = cell(g1)?;
        let right = cell(g2)?;
        let differs = match (&left, &right) {
            (ColengthValue::Finite(a), ColengthValue::Finite(b)) => a != b,
            _ => false,
        };
        Ok(DistinguishRow {
            quantity,
            partition,
            left,
            right,
            differs,
        })
    })
    .into_iter()
    .collect::<Result<_, AfiniteError>>()?;
    let certified_distinct = rows.iter().any(|r| r.differs);
    Ok(DistinguishReport {
        left_name: g1.name.clone(),
        right_name: g2.name.clone(),
        rows,
        certified_distinct,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::germ::germ_from_strs;

    /// (x, y, xz + z^3, yz^2 + tail): the two-component family whose screen
    /// behavior depends on the multiplicity and parity of the tail.
    fn family(tail: &str) -> GermSpec {
        germ_from_strs(
            "family",
            &["x", "y", "z"],
            &["x*z + z^3", &format!("y*z^2 + {tail}")],
            None,
        )
    }

    fn pinch() -> GermSpec {
        germ_from_strs("pinch", &["x", "z"], &["z^2", "x*z"], None)
    }

    fn triple_line() -> GermSpec {
        germ_from_strs("triple_line", &["x", "z"], &["z^3", "x*z"], None)
    }

    #[test]
    fn odd_tails_have_finite_double_point_invariants() {
        for (tail, expected) in [("z^3", 1), ("z^5", 3), ("z^7", 5)] {
            let r = invariant_n(&family(tail), &Partition::new(vec![1, 1]).unwrap(), 16).unwrap();
            assert_eq!(r.n_value.value, ColengthValue::Finite(expected), "{tail}");
            assert!(r.required_by_theorem);
        }
    }

    #[test]
    fn even_tails_exhaust_the_jet_bound() {
        for tail in ["z^4", "z^6"] {
            let r = invariant_n(&family(tail), &Partition::new(vec![1, 1]).unwrap(), 10).unwrap();
            assert_eq!(r.n_value.value, ColengthValue::NotFiniteUpTo(10), "{tail}");
        }
    }

    #[test]
    fn triple_point_invariants_of_the_family() {
        let r3 = invariant_n(&family("z^3"), &Partition::new(vec![1, 1, 1]).unwrap(), 14).unwrap();
        assert_eq!(r3.n_value.value, ColengthValue::Finite(1));
        let r4 = invariant_n(&family("z^4"), &Partition::new(vec![1, 1, 1]).unwrap(), 14).unwrap();
        assert_eq!(r4.n_value.value, ColengthValue::Finite(4));
    }

    #[test]
    fn repeated_parts_are_not_required_by_the_screen() {
        let r = invariant_n(&pinch(), &Partition::new(vec![2]).unwrap(), 12).unwrap();
        assert!(!r.required_by_theorem);
        assert!(r.n_value.is_finite());
    }

    #[test]
    fn rejects_single_point_and_negative_dimension() {
        let e = invariant_n(&pinch(), &Partition::new(vec![1]).unwrap(), 8).unwrap_err();
        assert!(matches!(e, AfiniteError::TooFewPoints { .. }));
        let e = invariant_n(&pinch(), &Partition::new(vec![2, 2]).unwrap(), 8).unwrap_err();
        assert!(matches!(e, AfiniteError::NegativeDimension { .. }));
    }

    #[test]
    fn stable_pinch_point_passes_the_screen() {
        let v = verdict(&pinch(), 12).unwrap();
        assert_eq!(v.afinite, Afinity::Yes);
        assert_eq!(v.invariants.len(), 2);
        assert_eq!(v.counts.len(), 2);
        let double = &v.counts[0];
        assert_eq!(double.partition.parts(), &[2]);
        assert_eq!(double.count, Some(1));
        // a divided difference of z^2 restricts to a unit on the small
        // diagonal, so the triple-point scheme is empty
        let triple = &v.counts[1];
        assert_eq!(triple.partition.parts(), &[1, 1, 1]);
        assert_eq!(triple.count, Some(0));
    }

    #[test]
    fn triple_line_fails_the_screen_at_the_bound() {
        let v = verdict(&triple_line(), 10).unwrap();
        assert_eq!(v.afinite, Afinity::NotUpToBound(10));
        let triple = v
            .counts
            .iter()
            .find(|c| c.partition.parts() == [1, 1, 1])
            .unwrap();
        assert_eq!(triple.value, ColengthValue::NotFiniteUpTo(10));
    }

    #[test]
    fn immersive_germs_are_rejected() {
        let imm = germ_from_strs("imm", &["x", "z"], &["z", "z^2"], None);
        assert!(matches!(
            verdict(&imm, 8),
            Err(AfiniteError::Immersive { .. })
        ));
    }

    #[test]
    fn distinguish_certifies_a_count_difference() {
        let p1 = germ_from_strs(
            "p1",
            &["x", "y", "z"],
            &["y*z + z^4", "x*z + z^3"],
            Some(vec![2, 3, 1]),
        );
        let p2 = germ_from_strs(
            "p2",
            &["x", "y", "z"],
            &["y*z + z^5", "x*z + z^3"],
            Some(vec![2, 4, 1]),
        );
        let report = distinguish(&p1, &p2, 12).unwrap();
        assert!(report.certified_distinct);
        let row = report
            .rows
            .iter()
            .find(|r| r.quantity == Quantity::Count && r.partition.parts() == [2, 1])
            .unwrap();
        assert_eq!(row.left, ColengthValue::Finite(2));
        assert_eq!(row.right, ColengthValue::Finite(3));
        assert!(row.differs);
    }

    #[test]
    fn distinguish_is_blank_on_identical_germs() {
        let f = family("z^3");
        let report = distinguish(&f, &f, 10).unwrap();
        assert!(!report.certified_distinct);
        assert!(report.rows.iter().all(|r| !r.differs));
    }

    #[test]
    fn distinguish_rejects_dimension_mismatch() {
        let e = distinguish(&pinch(), &family("z^3"), 8).unwrap_err();
        assert!(matches!(e, AfiniteError::DimensionMismatch { .. }));
    }

    #[test]
    fn distinguish_separates_low_and_high_multiplicity_tails() {
        let f1 = family("z^2 + z^7");
        let f2 = family("z^5 + z^6 + z^7");
        // jet bound kept low: the quadruple-point rows sweep a six-variable
        // ring, and the certifying double-point row stabilizes early
        let report = distinguish(&f1, &f2, 6).unwrap();
        let row = report
            .rows
            .iter()
            .find(|r| r.quantity == Quantity::InvariantN && r.partition.parts() == [1, 1])
            .unwrap();
        assert!(row.differs, "left {:?} right {:?}", row.left, row.right);
        assert!(report.certified_distinct);
    }
}
