//! Divided differences V_i^k, the block projections pi_i(P), and restriction
//! to the diagonal of a partition.
//!
//! V_i^k(h) is the coefficient of z^i in the unique degree-(k-1) polynomial
//! interpolating h(x, .) through the nodes z_1..z_k. It is computed by
//! expanding the Newton form of the interpolant, never by dividing
//! determinants: the divided difference [z_1..z_m] z^d is the complete
//! homogeneous symmetric polynomial of degree d-m+1, so everything stays
//! division-free and exact.

use crate::germ::GermSpec;
use crate::partition::Partition;
use crate::poly::{Monomial, Polynomial, VariableContext};
use num_rational::BigRational;
use num_traits::One;
use std::collections::BTreeMap;
use std::sync::Arc;

/// The ring of k copies of the source: variables (x_1..x_{n-1}, z_1..z_k),
/// with weights extended so every z_a carries the z-weight.
#[derive(Debug, Clone)]
pub struct MultiPointContext {
    pub germ: GermSpec,
    pub k: usize,
    pub ring: Arc<VariableContext>,
}

/// Pick a stem such that stem+index collides with none of the reserved
/// names.
fn free_stem(base: &str, count: usize, reserved: &[String]) -> String {
    let mut stem = base.to_string();
    loop {
        let clash = (1..=count).any(|a| reserved.contains(&format!("{stem}{a}")));
        if !clash {
            return stem;
        }
        stem.push('_');
    }
}

impl MultiPointContext {
    pub fn new(germ: &GermSpec, k: usize) -> Self {
        assert!(k >= 1);
        let xs = germ.x_names().to_vec();
        let stem = free_stem(germ.ctx.name(germ.z_index()), k, &xs);
        let mut names = xs;
        for a in 1..=k {
            names.push(format!("{stem}{a}"));
        }
        let ring = match &germ.weights {
            Some(w) => {
                let mut weights = w[..germ.n - 1].to_vec();
                weights.extend(std::iter::repeat(w[germ.n - 1]).take(k));
                VariableContext::with_weights(names, weights)
            }
            None => VariableContext::new(names),
        };
        MultiPointContext {
            germ: germ.clone(),
            k,
            ring,
        }
    }

    /// Index of z_a (1-based a) in the ring.
    pub fn z_var(&self, a: usize) -> usize {
        assert!((1..=self.k).contains(&a));
        self.germ.n - 1 + (a - 1)
    }

    /// All interpolant coefficients V_0^k(h) .. V_{k-1}^k(h) at once.
    pub fn divided_differences(&self, h: &Polynomial) -> Vec<Polynomial> {
        assert_eq!(h.ctx(), &self.germ.ctx, "h must live in the germ's source ring");
        let n = self.germ.n;
        // split h into sum_d c_d(x) z^d
        let mut by_z_degree: BTreeMap<u32, Vec<(Monomial, BigRational)>> = BTreeMap::new();
        for (m, c) in h.terms() {
            let d = m.exps()[n - 1];
            let mut exps = vec![0u32; self.ring.len()];
            exps[..n - 1].copy_from_slice(&m.exps()[..n - 1]);
            by_z_degree
                .entry(d)
                .or_default()
                .push((Monomial::from_exps(exps), c.clone()));
        }
        let mut out = vec![Polynomial::zero(&self.ring); self.k];
        for (d, terms) in by_z_degree {
            let x_part = Polynomial::from_terms(&self.ring, terms);
            let coeffs = self.interpolant_of_power(d);
            for (v, coeff) in out.iter_mut().zip(coeffs) {
                if !coeff.is_zero() {
                    *v = &*v + &(&x_part * &coeff);
                }
            }
        }
        out
    }

    /// V_i^k(h) for one i, 0 <= i <= k-1.
    pub fn divided_difference(&self, h: &Polynomial, i: usize) -> Polynomial {
        assert!(i < self.k, "coefficient index {i} out of range for k = {}", self.k);
        self.divided_differences(h).into_iter().nth(i).unwrap()
    }

    /// Coefficients (in z^0..z^{k-1}) of the interpolant of z^d through
    /// z_1..z_k, via the Newton form: the m-th divided difference of z^d is
    /// the complete homogeneous polynomial of degree d-m+1 in z_1..z_m, and
    /// the m-th Newton basis polynomial is prod_{j<m} (z - z_j).
    fn interpolant_of_power(&self, d: u32) -> Vec<Polynomial> {
        let k = self.k;
        let mut out = vec![Polynomial::zero(&self.ring); k];
        // coefficient vector of the current Newton basis product; starts as
        // the empty product, 1
        let mut basis = vec![Polynomial::one(&self.ring)];
        for m in 1..=k {
            let dd = self.complete_homogeneous(d as i64 - m as i64 + 1, m);
            if !dd.is_zero() {
                for (t, b) in basis.iter().enumerate() {
                    out[t] = &out[t] + &(&dd * b);
                }
            }
            if m < k {
                // multiply the basis product by (z - z_m)
                let zm = Polynomial::variable(&self.ring, self.z_var(m));
                let mut next = vec![Polynomial::zero(&self.ring); basis.len() + 1];
                for (j, b) in basis.iter().enumerate() {
                    next[j + 1] = &next[j + 1] + b;
                    next[j] = &next[j] - &(&zm * b);
                }
                basis = next;
            }
        }
        out
    }

    /// Sum of all monomials of total degree r in z_1..z_m (complete
    /// homogeneous); 1 for r = 0, 0 for r < 0.
    fn complete_homogeneous(&self, r: i64, m: usize) -> Polynomial {
        if r < 0 {
            return Polynomial::zero(&self.ring);
        }
        let r = r as u32;
        let mut terms = Vec::new();
        let mut exps = vec![0u32; self.ring.len()];
        let base = self.germ.n - 1;
        fn rec(
            exps: &mut Vec<u32>,
            base: usize,
            slot: usize,
            m: usize,
            remaining: u32,
            terms: &mut Vec<(Monomial, BigRational)>,
        ) {
            if slot + 1 == m {
                exps[base + slot] = remaining;
                terms.push((Monomial::from_exps(exps.clone()), BigRational::one()));
                exps[base + slot] = 0;
                return;
            }
            for e in 0..=remaining {
                exps[base + slot] = e;
                rec(exps, base, slot + 1, m, remaining - e, terms);
            }
            exps[base + slot] = 0;
        }
        rec(&mut exps, base, 0, m, r, &mut terms);
        Polynomial::from_terms(&self.ring, terms)
    }

    /// The substitution realizing pi_i(P): x stays, z goes to the first node
    /// of block i (1-based i <= l). Usable with Polynomial::substitute.
    pub fn projection(&self, partition: &Partition, i: usize) -> Vec<Polynomial> {
        assert_eq!(partition.k() as usize, self.k, "partition must sum to k");
        assert!((1..=partition.ell()).contains(&i), "block index out of range");
        let n = self.germ.n;
        let mut images = Vec::with_capacity(n);
        for a in 0..n - 1 {
            images.push(Polynomial::variable(&self.ring, a));
        }
        let node = partition.block_start(i - 1) + 1;
        images.push(Polynomial::variable(&self.ring, self.z_var(node)));
        images
    }
}

/// The ring (x_1..x_{n-1}, t_1..t_l) of the diagonal of a partition, weights
/// extended like the multi-point ring.
pub fn diagonal_context(germ: &GermSpec, partition: &Partition) -> Arc<VariableContext> {
    let ell = partition.ell();
    let xs = germ.x_names().to_vec();
    let stem = free_stem("t", ell, &xs);
    let mut names = xs;
    for a in 1..=ell {
        names.push(format!("{stem}{a}"));
    }
    match &germ.weights {
        Some(w) => {
            let mut weights = w[..germ.n - 1].to_vec();
            weights.extend(std::iter::repeat(w[germ.n - 1]).take(ell));
            VariableContext::with_weights(names, weights)
        }
        None => VariableContext::new(names),
    }
}

/// j_l^*: send every z in block i to t_i. Diagonal generators of the
/// partition go to zero; everything else is evaluated on the diagonal.
pub fn restrict_to_diagonal(
    mpc: &MultiPointContext,
    partition: &Partition,
    target: &Arc<VariableContext>,
    p: &Polynomial,
) -> Polynomial {
    assert_eq!(p.ctx(), &mpc.ring);
    assert_eq!(partition.k() as usize, mpc.k);
    let n = mpc.germ.n;
    let mut var_map = Vec::with_capacity(mpc.ring.len());
    for a in 0..n - 1 {
        var_map.push(a);
    }
    for (block, &r) in partition.parts().iter().enumerate() {
        for _ in 0..r {
            var_map.push(n - 1 + block);
        }
    }
    p.map_context(target, &var_map)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::germ::germ_from_strs;
    use crate::poly::WeightedDegree;

    fn twisted_germ() -> GermSpec {
        germ_from_strs(
            "twisted",
            &["x", "y", "z"],
            &["y*z + z^4", "x*z + z^3"],
            Some(vec![2, 3, 1]),
        )
    }

    #[test]
    fn two_point_difference_quotient() {
        let g = germ_from_strs("ex", &["x", "y"], &["x^2*y + y^6 + y^7", "x*y^2 + y^4"], None);
        let mpc = MultiPointContext::new(&g, 2);
        for h in &g.components {
            // V_1^2(h) * (z_1 - z_2) = h(z_1) - h(z_2)
            let v1 = mpc.divided_difference(h, 1);
            let h1 = h.substitute(&mpc.projection(&Partition::new(vec![1, 1]).unwrap(), 1));
            let h2 = h.substitute(&mpc.projection(&Partition::new(vec![1, 1]).unwrap(), 2));
            let z1 = Polynomial::variable(&mpc.ring, mpc.z_var(1));
            let z2 = Polynomial::variable(&mpc.ring, mpc.z_var(2));
            let quotient = (&h1 - &h2).exact_quotient(&(&z1 - &z2)).unwrap();
            assert_eq!(v1, quotient);
        }
    }

    #[test]
    fn three_point_values_of_low_powers() {
        let g = twisted_germ();
        let mpc = MultiPointContext::new(&g, 3);
        let z = Polynomial::variable(&g.ctx, 2);
        // the interpolant of z^j for j <= k-1 is z^j itself
        for j in 0..=2u32 {
            let vs = mpc.divided_differences(&z.pow(j));
            for (i, v) in vs.iter().enumerate() {
                if i as u32 == j {
                    assert_eq!(*v, Polynomial::one(&mpc.ring), "V_{i}^3(z^{j})");
                } else {
                    assert!(v.is_zero(), "V_{i}^3(z^{j})");
                }
            }
        }
    }

    #[test]
    fn three_point_coefficients_of_h_are_symmetric_functions() {
        let g = twisted_germ();
        let mpc = MultiPointContext::new(&g, 3);
        // h = x*z + z^3: V_1 = x - e_2, V_2 = e_1
        let h = &g.components[1];
        let vs = mpc.divided_differences(h);
        let x = Polynomial::variable(&mpc.ring, 0);
        let z1 = Polynomial::variable(&mpc.ring, mpc.z_var(1));
        let z2 = Polynomial::variable(&mpc.ring, mpc.z_var(2));
        let z3 = Polynomial::variable(&mpc.ring, mpc.z_var(3));
        let e1 = &(&z1 + &z2) + &z3;
        let e2 = &(&(&z1 * &z2) + &(&z1 * &z3)) + &(&z2 * &z3);
        let e3 = &(&z1 * &z2) * &z3;
        assert_eq!(vs[1], &x - &e2);
        assert_eq!(vs[2], e1);
        // V_0(x*z + z^3) = e_3 * e_0-term: interpolating through the nodes,
        // the constant coefficient is x*0 + e_3 (classical for z^3)
        assert_eq!(vs[0], e3);
    }

    #[test]
    fn interpolation_identity_four_points() {
        let g = germ_from_strs("id4", &["x", "z"], &["x*z^2 + z^5", "z^6 + x^2*z"], None);
        let mpc = MultiPointContext::new(&g, 4);
        let part = Partition::new(vec![1, 1, 1, 1]).unwrap();
        for h in &g.components {
            let vs = mpc.divided_differences(h);
            for node in 1..=4usize {
                let zj = Polynomial::variable(&mpc.ring, mpc.z_var(node));
                let mut interp = Polynomial::zero(&mpc.ring);
                for (i, v) in vs.iter().enumerate() {
                    interp = &interp + &(v * &zj.pow(i as u32));
                }
                let direct = h.substitute(&mpc.projection(&part, node));
                assert_eq!(interp, direct, "node {node}");
            }
        }
    }

    #[test]
    fn weighted_degree_drops_by_i_times_z_weight() {
        let g = twisted_germ();
        let mpc = MultiPointContext::new(&g, 3);
        for (h, d) in g.components.iter().zip(g.degrees.as_ref().unwrap()) {
            let vs = mpc.divided_differences(h);
            for (i, v) in vs.iter().enumerate() {
                if v.is_zero() {
                    continue;
                }
                assert_eq!(
                    v.weighted_degree(),
                    Ok(WeightedDegree::Homogeneous(d - i as u64)),
                    "V_{i} of degree-{d} component"
                );
            }
        }
    }

    #[test]
    fn projections_pick_block_leaders() {
        let g = twisted_germ();
        let mpc = MultiPointContext::new(&g, 3);
        let p21 = Partition::new(vec![2, 1]).unwrap();
        let z = Polynomial::variable(&g.ctx, 2);
        let img1 = z.substitute(&mpc.projection(&p21, 1));
        let img2 = z.substitute(&mpc.projection(&p21, 2));
        assert_eq!(img1, Polynomial::variable(&mpc.ring, mpc.z_var(1)));
        assert_eq!(img2, Polynomial::variable(&mpc.ring, mpc.z_var(3)));
        let p111 = Partition::new(vec![1, 1, 1]).unwrap();
        let img3 = z.substitute(&mpc.projection(&p111, 3));
        assert_eq!(img3, Polynomial::variable(&mpc.ring, mpc.z_var(3)));
    }

    #[test]
    fn restriction_of_block_of_two_is_the_derivative() {
        // for a block of size 2 the restricted difference quotient is the
        // z-derivative on the diagonal
        let g = germ_from_strs(
            "mixed_tails",
            &["x", "y"],
            &["x^2*y + y^6 + y^7", "x*y^2 + y^4 + y^6 + y^9"],
            None,
        );
        let mpc = MultiPointContext::new(&g, 2);
        let p2 = Partition::new(vec![2]).unwrap();
        let diag = diagonal_context(&g, &p2);
        for h in &g.components {
            let v1 = mpc.divided_difference(h, 1);
            let restricted = restrict_to_diagonal(&mpc, &p2, &diag, &v1);
            let dh = h.partial_derivative(1, 1);
            // the derivative lives in (x, y); rename y -> t_1
            let expected = dh.map_context(&diag, &[0, 1]);
            assert_eq!(restricted, expected);
        }
    }

    #[test]
    fn diagonal_kills_block_differences() {
        let g = twisted_germ();
        let mpc = MultiPointContext::new(&g, 3);
        let p21 = Partition::new(vec![2, 1]).unwrap();
        let diag = diagonal_context(&g, &p21);
        let z1 = Polynomial::variable(&mpc.ring, mpc.z_var(1));
        let z2 = Polynomial::variable(&mpc.ring, mpc.z_var(2));
        let z3 = Polynomial::variable(&mpc.ring, mpc.z_var(3));
        assert!(restrict_to_diagonal(&mpc, &p21, &diag, &(&z1 - &z2)).is_zero());
        let r = restrict_to_diagonal(&mpc, &p21, &diag, &(&z1 - &z3));
        let t1 = Polynomial::variable(&diag, 2);
        let t2 = Polynomial::variable(&diag, 3);
        assert_eq!(r, &t1 - &t2);
    }

    #[test]
    fn z_names_avoid_x_collisions() {
        let g = germ_from_strs("clash", &["z1", "z"], &["z1*z + z^2", "z^3"], None);
        let mpc = MultiPointContext::new(&g, 2);
        let names = mpc.ring.names();
        assert_eq!(names[0], "z1");
        assert_eq!(names.len(), 3);
        assert_ne!(names[1], "z1");
        assert_ne!(names[2], "z1");
    }
}
