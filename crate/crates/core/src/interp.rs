//! Newton divided-difference interpolation over complex scalars.
//!
//! This is the finite-node stand-in for the holomorphic interpolation steps
//! of the constructions: every shear function is pinned down by finitely
//! many (node, value) pairs, and the Newton form reproduces those nodes
//! exactly in the exact backend.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::{Backend, Scalar};

/// Finite interpolation data with pairwise-distinct nodes.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InterpTable {
    pub nodes: Vec<Scalar>,
    pub values: Vec<Scalar>,
}

impl InterpTable {
    /// `tol` only matters in the float backend, where nodes must be
    /// separated by more than `10 * tol`.
    pub fn new(nodes: Vec<Scalar>, values: Vec<Scalar>, tol: f64) -> Result<InterpTable> {
        if nodes.len() != values.len() {
            return Err(Error::InvalidInput(
                "node and value lists differ in length".into(),
            ));
        }
        if nodes.is_empty() {
            return Err(Error::InvalidInput("empty interpolation table".into()));
        }
        let backend = nodes[0].backend();
        if nodes
            .iter()
            .chain(values.iter())
            .any(|s| s.backend() != backend)
        {
            return Err(Error::BackendMismatch("interpolation table"));
        }
        for i in 0..nodes.len() {
            for j in (i + 1)..nodes.len() {
                let clash = match backend {
                    Backend::Exact => nodes[i] == nodes[j],
                    Backend::Float => nodes[i].dist_f64(&nodes[j]) <= 10.0 * tol,
                };
                if clash {
                    return Err(Error::DuplicateNodes(format!(
                        "nodes {} and {} collide",
                        nodes[i], nodes[j]
                    )));
                }
            }
        }
        Ok(InterpTable { nodes, values })
    }
}

/// Polynomial in Newton form: `c0 + c1*(u - x0) + c2*(u - x0)(u - x1) + ...`
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NewtonPoly {
    pub nodes: Vec<Scalar>,
    pub coeffs: Vec<Scalar>,
}

impl NewtonPoly {
    pub fn constant(c: Scalar) -> NewtonPoly {
        NewtonPoly {
            nodes: vec![],
            coeffs: vec![c],
        }
    }

    /// Dense monomial coefficients `[c0, c1, ...]` read as `c0 + c1*u + ...`
    /// (all Newton nodes at zero).
    pub fn from_dense(coeffs: Vec<Scalar>) -> NewtonPoly {
        assert!(!coeffs.is_empty());
        let backend = coeffs[0].backend();
        let nodes = vec![Scalar::zero(backend); coeffs.len() - 1];
        NewtonPoly { nodes, coeffs }
    }

    pub fn degree_bound(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    /// Horner-style nested evaluation.
    pub fn eval(&self, u: &Scalar) -> Scalar {
        let k = self.coeffs.len();
        let mut acc = self.coeffs[k - 1].clone();
        for i in (0..k - 1).rev() {
            acc = acc.mul(&u.sub(&self.nodes[i])).add(&self.coeffs[i]);
        }
        acc
    }
}

/// Builds the Newton interpolant through the table by divided differences.
pub fn newton_build(table: &InterpTable) -> Result<NewtonPoly> {
    let n = table.nodes.len();
    let mut dd: Vec<Scalar> = table.values.clone();
    // dd[i] holds f[x_{i-j} .. x_i] at stage j
    for j in 1..n {
        for i in (j..n).rev() {
            let num = dd[i].sub(&dd[i - 1]);
            let den = table.nodes[i].sub(&table.nodes[i - j]);
            dd[i] = num.div(&den)?;
        }
    }
    Ok(NewtonPoly {
        nodes: table.nodes[..n - 1].to_vec(),
        coeffs: dd,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn exact(vals: &[i64]) -> Vec<Scalar> {
        vals.iter().map(|&v| Scalar::exact_int(v)).collect()
    }

    #[test]
    fn single_node_is_constant() {
        let t = InterpTable::new(exact(&[2]), exact(&[7]), 1e-9).unwrap();
        let p = newton_build(&t).unwrap();
        assert_eq!(p.eval(&Scalar::exact_int(100)), Scalar::exact_int(7));
    }

    #[test]
    fn identity_line() {
        let t = InterpTable::new(exact(&[0, 1]), exact(&[0, 1]), 1e-9).unwrap();
        let p = newton_build(&t).unwrap();
        let u = Scalar::Exact(crate::scalar::GaussRat::new(
            num_rational::BigRational::new(5.into(), 1.into()),
            num_rational::BigRational::new(2.into(), 1.into()),
        ));
        assert_eq!(p.eval(&u), u);
    }

    #[test]
    fn f_data_of_swap_table() {
        // nodes (2, 3), values (-1, -1/4): the V-shear data for {1->2, 2->1}
        let t = InterpTable::new(
            exact(&[2, 3]),
            vec![Scalar::exact_int(-1), Scalar::exact_ratio(-1, 4)],
            1e-9,
        )
        .unwrap();
        let p = newton_build(&t).unwrap();
        assert_eq!(p.eval(&Scalar::exact_int(2)), Scalar::exact_int(-1));
        assert_eq!(p.eval(&Scalar::exact_int(3)), Scalar::exact_ratio(-1, 4));
    }

    #[test]
    fn duplicate_nodes_rejected() {
        assert!(matches!(
            InterpTable::new(exact(&[1, 1]), exact(&[0, 0]), 1e-9),
            Err(Error::DuplicateNodes(_))
        ));
        let close = vec![Scalar::float(0.0, 0.0), Scalar::float(1e-12, 0.0)];
        assert!(InterpTable::new(close, vec![Scalar::float(0.0, 0.0); 2], 1e-9).is_err());
    }

    #[test]
    fn dense_form_evaluates_as_monomials() {
        // 1 + u
        let p = NewtonPoly::from_dense(exact(&[1, 1]));
        assert_eq!(p.eval(&Scalar::exact_int(41)), Scalar::exact_int(42));
    }

    proptest! {
        #[test]
        fn node_reproduction_is_exact(raw in proptest::collection::vec((-40i64..40, -40i64..40), 2..12)) {
            // dedupe nodes, keep first value per node
            let mut seen = std::collections::BTreeSet::new();
            let mut nodes = Vec::new();
            let mut values = Vec::new();
            for (n, v) in raw {
                if seen.insert(n) {
                    nodes.push(Scalar::exact_int(n));
                    values.push(Scalar::exact_ratio(v, 7));
                }
            }
            prop_assume!(nodes.len() >= 2);
            let t = InterpTable::new(nodes.clone(), values.clone(), 1e-9).unwrap();
            let p = newton_build(&t).unwrap();
            for (n, v) in nodes.iter().zip(values.iter()) {
                prop_assert_eq!(&p.eval(n), v);
            }
        }

        #[test]
        fn row_permutation_does_not_change_the_polynomial(
            shift in 1usize..5,
            probe in -50i64..50,
        ) {
            let nodes: Vec<i64> = vec![1, 3, -2, 7, 12];
            let values: Vec<(i64, i64)> = vec![(1, 2), (-3, 5), (0, 1), (7, 3), (-1, 4)];
            let build = |order: &[usize]| {
                let t = InterpTable::new(
                    order.iter().map(|&i| Scalar::exact_int(nodes[i])).collect(),
                    order.iter().map(|&i| Scalar::exact_ratio(values[i].0, values[i].1)).collect(),
                    1e-9,
                ).unwrap();
                newton_build(&t).unwrap()
            };
            let id: Vec<usize> = (0..5).collect();
            let rot: Vec<usize> = (0..5).map(|i| (i + shift) % 5).collect();
            let p = build(&id);
            let q = build(&rot);
            let u = Scalar::exact_ratio(probe, 3);
            prop_assert_eq!(p.eval(&u), q.eval(&u));
        }
    }
}
