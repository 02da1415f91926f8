//! Germ files and validated germ descriptions.
//!
//! A germ file describes a corank-1 map germ f: (C^n,0) -> (C^p,0) in
//! prenormal form f(x, z) = (x, h_1(x,z), ..., h_{p-n+1}(x,z)): it lists the
//! n source variables (the last one is the distinguished variable z) and the
//! component expressions h_j. The identity part x is implicit. The target
//! dimension is p = (n-1) + number of components.

use crate::parse::{parse_polynomial_with, ParseError};
use crate::poly::{Monomial, Polynomial, VariableContext};
use num_rational::BigRational;
use num_traits::Zero;
use serde::Deserialize;
use std::collections::BTreeMap;
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct GermFile {
    name: String,
    vars: Vec<String>,
    components: Vec<String>,
    #[serde(default)]
    weights: Option<Vec<u64>>,
    #[serde(default)]
    degrees: Option<Vec<u64>>,
}

/// A validated corank-1 germ in prenormal form.
#[derive(Debug, Clone)]
pub struct GermSpec {
    pub name: String,
    /// Source dimension n; the context has exactly n variables and the last
    /// one is the distinguished variable z.
    pub n: usize,
    /// Target dimension p = n - 1 + components.len().
    pub p: usize,
    pub ctx: Arc<VariableContext>,
    pub components: Vec<Polynomial>,
    pub weights: Option<Vec<u64>>,
    pub degrees: Option<Vec<u64>>,
}

#[derive(Debug, Error)]
pub enum GermError {
    #[error("germ file is not valid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("germ file needs at least one variable")]
    NoVariables,
    #[error("duplicate or empty variable name {0:?}")]
    BadVariable(String),
    #[error("component {index}: {source}")]
    Component {
        index: usize,
        #[source]
        source: ParseError,
    },
    #[error("component {0} has a nonzero constant term")]
    NonzeroConstantTerm(usize),
    #[error("target dimension p = {p} must exceed source dimension n = {n}; give at least two components")]
    TargetTooSmall { n: usize, p: usize },
    #[error("expected {expected} weights (one per variable), got {got}")]
    WeightCount { expected: usize, got: usize },
    #[error("weights must be positive integers")]
    ZeroWeight,
    #[error("expected {expected} degrees (one per component), got {got}")]
    DegreeCount { expected: usize, got: usize },
    #[error("degrees were given without weights")]
    DegreesWithoutWeights,
    #[error("component {index} ({text}) is not weighted-homogeneous under weights {weights:?}")]
    NotHomogeneous {
        index: usize,
        text: String,
        weights: Vec<u64>,
    },
    #[error("component {index} has weighted degree {got}, but degree {expected} was declared")]
    DegreeMismatch {
        index: usize,
        expected: u64,
        got: u64,
    },
}

/// Whether the differential at the origin already has full rank.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Corank {
    Singular,
    Immersive,
}

impl GermSpec {
    /// Number of components p - n + 1.
    pub fn m(&self) -> usize {
        self.components.len()
    }

    /// Index of the distinguished variable z in the context.
    pub fn z_index(&self) -> usize {
        self.n - 1
    }

    /// Names of the identity variables x_1..x_{n-1}.
    pub fn x_names(&self) -> &[String] {
        &self.ctx.names()[..self.n - 1]
    }

    /// Weight of the distinguished variable, when weights are present.
    pub fn z_weight(&self) -> Option<u64> {
        self.weights.as_ref().map(|w| w[self.n - 1])
    }

    /// Build and validate from already-parsed pieces; used by tests and by
    /// the file loader below.
    pub fn from_parts(
        name: String,
        vars: Vec<String>,
        component_texts: &[String],
        weights: Option<Vec<u64>>,
        degrees: Option<Vec<u64>>,
        params: &BTreeMap<String, BigRational>,
    ) -> Result<GermSpec, GermError> {
        if vars.is_empty() {
            return Err(GermError::NoVariables);
        }
        for (i, a) in vars.iter().enumerate() {
            if a.is_empty() || vars[..i].contains(a) {
                return Err(GermError::BadVariable(a.clone()));
            }
        }
        let n = vars.len();
        let p = n - 1 + component_texts.len();
        if p <= n {
            return Err(GermError::TargetTooSmall { n, p });
        }
        if let Some(w) = &weights {
            if w.len() != n {
                return Err(GermError::WeightCount {
                    expected: n,
                    got: w.len(),
                });
            }
            if w.iter().any(|&x| x == 0) {
                return Err(GermError::ZeroWeight);
            }
        }
        if degrees.is_some() && weights.is_none() {
            return Err(GermError::DegreesWithoutWeights);
        }
        if let (Some(w), Some(d)) = (&weights, &degrees) {
            let _ = w;
            if d.len() != component_texts.len() {
                return Err(GermError::DegreeCount {
                    expected: component_texts.len(),
                    got: d.len(),
                });
            }
        }
        let ctx = match &weights {
            Some(w) => VariableContext::with_weights(vars, w.clone()),
            None => VariableContext::new(vars),
        };
        let mut components = Vec::with_capacity(component_texts.len());
        for (index, text) in component_texts.iter().enumerate() {
            let h = parse_polynomial_with(text, &ctx, params)
                .map_err(|source| GermError::Component { index, source })?;
            if !h.constant_term().is_zero() {
                return Err(GermError::NonzeroConstantTerm(index));
            }
            components.push(h);
        }
        // with weights, every component must be weighted-homogeneous; its
        // degree is inferred, then checked against a declared degree if any
        let mut inferred_degrees = None;
        if let Some(w) = &weights {
            let mut ds = Vec::with_capacity(components.len());
            for (index, h) in components.iter().enumerate() {
                match h.weighted_homogeneous_degree(w) {
                    Some(d) if !h.is_zero() => ds.push(d),
                    _ => {
                        return Err(GermError::NotHomogeneous {
                            index,
                            text: component_texts[index].clone(),
                            weights: w.clone(),
                        })
                    }
                }
            }
            if let Some(declared) = &degrees {
                for (index, (&got, &expected)) in ds.iter().zip(declared).enumerate() {
                    if got != expected {
                        return Err(GermError::DegreeMismatch {
                            index,
                            expected,
                            got,
                        });
                    }
                }
            }
            inferred_degrees = Some(ds);
        }
        Ok(GermSpec {
            name,
            n,
            p,
            ctx,
            components,
            weights,
            degrees: inferred_degrees,
        })
    }
}

/// Parse and validate a germ file. `params` supplies values for named
/// parameters appearing in component expressions (CLI `--set`).
pub fn parse_germ_file(
    bytes: &[u8],
    params: &BTreeMap<String, BigRational>,
) -> Result<GermSpec, GermError> {
    let file: GermFile = serde_json::from_slice(bytes)?;
    GermSpec::from_parts(
        file.name,
        file.vars,
        &file.components,
        file.weights,
        file.degrees,
        params,
    )
}

/// Immersive iff some component has a nonzero linear term in z alone, i.e.
/// some derivative dh_j/dz has a nonzero value at the origin. The prenormal
/// machinery is vacuous for immersive germs.
pub fn corank_check(g: &GermSpec) -> Corank {
    let zlin = Monomial::var(g.n, g.z_index());
    for h in &g.components {
        if !h.coefficient(&zlin).is_zero() {
            return Corank::Immersive;
        }
    }
    Corank::Singular
}

#[cfg(test)]
pub(crate) fn germ_from_strs(
    name: &str,
    vars: &[&str],
    components: &[&str],
    weights: Option<Vec<u64>>,
) -> GermSpec {
    GermSpec::from_parts(
        name.to_string(),
        vars.iter().map(|s| s.to_string()).collect(),
        &components
            .iter()
            .map(|s| s.to_string())
            .collect::<Vec<String>>(),
        weights,
        None,
        &BTreeMap::new(),
    )
    .unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn no_params() -> BTreeMap<String, BigRational> {
        BTreeMap::new()
    }

    #[test]
    fn crosscap_file_with_inferred_degrees() {
        let bytes = br#"{
            "name": "crosscap-family",
            "vars": ["x", "y"],
            "components": ["x*y + y^3", "y^4"],
            "weights": [2, 1]
        }"#;
        let g = parse_germ_file(bytes, &no_params()).unwrap();
        assert_eq!(g.n, 2);
        assert_eq!(g.p, 3);
        assert_eq!(g.m(), 2);
        assert_eq!(g.degrees, Some(vec![3, 4]));
        assert_eq!(g.z_weight(), Some(1));
        assert_eq!(corank_check(&g), Corank::Singular);
    }

    #[test]
    fn inhomogeneous_weights_rejected() {
        let bytes = br#"{
            "name": "bad-weights",
            "vars": ["x", "y"],
            "components": ["x*y + y^3", "y^4"],
            "weights": [1, 1]
        }"#;
        let e = parse_germ_file(bytes, &no_params()).unwrap_err();
        assert!(matches!(e, GermError::NotHomogeneous { index: 0, .. }), "{e}");
    }

    #[test]
    fn constant_term_rejected() {
        let bytes = br#"{
            "name": "unit",
            "vars": ["z"],
            "components": ["1 + z", "z^2"]
        }"#;
        let e = parse_germ_file(bytes, &no_params()).unwrap_err();
        assert!(matches!(e, GermError::NonzeroConstantTerm(0)), "{e}");
    }

    #[test]
    fn single_component_means_p_equals_n() {
        let bytes = br#"{
            "name": "plane-curve",
            "vars": ["x", "z"],
            "components": ["z^2"]
        }"#;
        let e = parse_germ_file(bytes, &no_params()).unwrap_err();
        assert!(matches!(e, GermError::TargetTooSmall { n: 2, p: 2 }), "{e}");
    }

    #[test]
    fn unknown_fields_rejected() {
        let bytes = br#"{
            "name": "extra",
            "vars": ["z"],
            "components": ["z^2", "z^3"],
            "color": "red"
        }"#;
        assert!(matches!(
            parse_germ_file(bytes, &no_params()),
            Err(GermError::Json(_))
        ));
    }

    #[test]
    fn corank_detects_immersive_germs() {
        let imm = germ_from_strs("imm", &["x", "z"], &["z", "z^2"], None);
        assert_eq!(corank_check(&imm), Corank::Immersive);
        let sing = germ_from_strs("sing", &["x", "z"], &["z^2", "z^3"], None);
        assert_eq!(corank_check(&sing), Corank::Singular);
        // y*z has no plain-z linear term
        let mixed = germ_from_strs("mixed", &["y", "z"], &["y*z + z^2", "z^3"], None);
        assert_eq!(corank_check(&mixed), Corank::Singular);
    }

    #[test]
    fn declared_degrees_checked() {
        let good = GermSpec::from_parts(
            "g".into(),
            vec!["x".into(), "z".into()],
            &["x*z + z^3".to_string(), "z^4".to_string()],
            Some(vec![2, 1]),
            Some(vec![3, 4]),
            &no_params(),
        );
        assert!(good.is_ok());
        let bad = GermSpec::from_parts(
            "g".into(),
            vec!["x".into(), "z".into()],
            &["x*z + z^3".to_string(), "z^4".to_string()],
            Some(vec![2, 1]),
            Some(vec![3, 5]),
            &no_params(),
        );
        assert!(matches!(
            bad,
            Err(GermError::DegreeMismatch {
                index: 1,
                expected: 5,
                got: 4
            })
        ));
        let orphan = GermSpec::from_parts(
            "g".into(),
            vec!["x".into(), "z".into()],
            &["x*z + z^3".to_string(), "z^4".to_string()],
            None,
            Some(vec![3, 4]),
            &no_params(),
        );
        assert!(matches!(orphan, Err(GermError::DegreesWithoutWeights)));
    }

    #[test]
    fn parameters_reach_components() {
        let mut params = BTreeMap::new();
        params.insert("a3".to_string(), BigRational::from_integer(1.into()));
        let g = GermSpec::from_parts(
            "family".into(),
            vec!["x".into(), "y".into(), "z".into()],
            &["x*z + z^3".to_string(), "y*z^2 + a3*z^3".to_string()],
            None,
            None,
            &params,
        )
        .unwrap();
        assert_eq!(g.p, 4);
        // unbound parameter is an unknown identifier
        let e = GermSpec::from_parts(
            "family".into(),
            vec!["x".into(), "y".into(), "z".into()],
            &["x*z + z^3".to_string(), "y*z^2 + a9*z^3".to_string()],
            None,
            None,
            &no_params(),
        )
        .unwrap_err();
        assert!(matches!(e, GermError::Component { index: 1, .. }), "{e}");
    }
}
