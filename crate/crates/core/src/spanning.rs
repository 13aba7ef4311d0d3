//! First-order matching at integer points: Taylor data of vector fields at
//! (j, 0), the 4x4 spanning system over Q(i)(sqrt 3, sqrt 5), and the order
//! of vanishing of a field at a point.
//!
//! The four spanning fields, realized at desk scale with polynomials
//! vanishing on a finite integer window, are
//!
//!   V  = a(z) d/dw
//!   Z  = b(z) d/dz
//!   V' = c(z - w/sqrt5) (d/dz + sqrt5 d/dw)
//!   W' = d(z - w/sqrt3) (d/dz + sqrt3 d/dw)
//!
//! and matching the linear part (alpha z + beta w) d/dz + (gamma z + delta w)
//! d/dw at a point amounts to one constant 4x4 solve per point.

use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::quadext::QuadExt;
use crate::ring::{Ring, RingElem, VarKind};
use crate::scalar::GaussRat;
use crate::vector_field::SymbolicVectorField;

/// Degree-1 Taylor data of a planar field at a point, with an optional
/// common power of the frequency symbol factored out.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearPart {
    pub alpha: QuadExt,
    pub beta: QuadExt,
    pub gamma: QuadExt,
    pub delta: QuadExt,
    pub p_scale: u32,
}

impl LinearPart {
    pub fn new(alpha: QuadExt, beta: QuadExt, gamma: QuadExt, delta: QuadExt) -> LinearPart {
        LinearPart {
            alpha,
            beta,
            gamma,
            delta,
            p_scale: 0,
        }
    }

    pub fn from_ints(alpha: i64, beta: i64, gamma: i64, delta: i64) -> LinearPart {
        LinearPart::new(
            QuadExt::from_int(alpha),
            QuadExt::from_int(beta),
            QuadExt::from_int(gamma),
            QuadExt::from_int(delta),
        )
    }

    pub fn as_vec(&self) -> [&QuadExt; 4] {
        [&self.alpha, &self.beta, &self.gamma, &self.delta]
    }
}

/// Derivative prescriptions (a_j, b_j, c_j, d_j) for the four spanning
/// fields at one point.
#[derive(Debug, Clone, PartialEq)]
pub struct SpanningSolution {
    pub a: QuadExt,
    pub b: QuadExt,
    pub c: QuadExt,
    pub d: QuadExt,
}

/// The constant coefficient matrix of the spanning system.
pub fn spanning_matrix() -> [[QuadExt; 4]; 4] {
    let z = QuadExt::zero;
    let o = QuadExt::one;
    [
        [z(), o(), o(), o()],
        [
            z(),
            z(),
            QuadExt::inv_sqrt5().neg(),
            QuadExt::inv_sqrt3().neg(),
        ],
        [o(), z(), QuadExt::sqrt5(), QuadExt::sqrt3()],
        [z(), z(), o().neg(), o().neg()],
    ]
}

/// Determinant by signed permutation expansion (the generic 4x4 routine).
pub fn det4(m: &[[QuadExt; 4]; 4]) -> QuadExt {
    let mut det = QuadExt::zero();
    let perms: [([usize; 4], i64); 24] = {
        let mut out = [([0usize; 4], 0i64); 24];
        let mut idx = 0;
        let base = [0usize, 1, 2, 3];
        // Heap's enumeration is overkill for 24; enumerate directly.
        for p0 in 0..4 {
            for p1 in 0..4 {
                if p1 == p0 {
                    continue;
                }
                for p2 in 0..4 {
                    if p2 == p0 || p2 == p1 {
                        continue;
                    }
                    let p3 = 6 - p0 - p1 - p2;
                    let perm = [p0, p1, p2, p3];
                    let mut sign = 1i64;
                    for i in 0..4 {
                        for j in (i + 1)..4 {
                            if perm[i] > perm[j] {
                                sign = -sign;
                            }
                        }
                    }
                    out[idx] = (perm, sign);
                    idx += 1;
                }
            }
        }
        let _ = base;
        out
    };
    for (perm, sign) in perms {
        let mut term = QuadExt::from_int(sign);
        for (row, &col) in perm.iter().enumerate() {
            term = term.mul(&m[row][col]);
        }
        det = det.add(&term);
    }
    det
}

/// 1/sqrt5 - 1/sqrt3, the exact determinant of the spanning matrix.
pub fn spanning_det_closed_form() -> QuadExt {
    QuadExt::inv_sqrt5().sub(&QuadExt::inv_sqrt3())
}

fn spanning_det_checked() -> &'static QuadExt {
    static DET: OnceLock<QuadExt> = OnceLock::new();
    DET.get_or_init(|| {
        let det = det4(&spanning_matrix());
        assert_eq!(
            det,
            spanning_det_closed_form(),
            "spanning matrix determinant must be 1/sqrt5 - 1/sqrt3"
        );
        det
    })
}

/// Solves the spanning system for a prescribed linear part. The matrix is
/// constant and invertible, so this cannot fail.
pub fn spanning_matrix_solve(target: &LinearPart) -> SpanningSolution {
    spanning_det_checked();
    let m = spanning_matrix();
    let rhs = target.as_vec();
    // Gaussian elimination on the 4x5 augmented system over the field.
    let mut aug: Vec<Vec<QuadExt>> = (0..4)
        .map(|i| {
            let mut row: Vec<QuadExt> = m[i].to_vec();
            row.push(rhs[i].clone());
            row
        })
        .collect();
    for col in 0..4 {
        let pivot = (col..4)
            .find(|&r| !aug[r][col].is_zero())
            .expect("matrix is invertible");
        aug.swap(col, pivot);
        let inv = aug[col][col].inv().expect("nonzero pivot");
        for k in col..5 {
            aug[col][k] = aug[col][k].mul(&inv);
        }
        for r in 0..4 {
            if r == col || aug[r][col].is_zero() {
                continue;
            }
            let factor = aug[r][col].clone();
            for k in col..5 {
                let delta = factor.mul(&aug[col][k]);
                aug[r][k] = aug[r][k].sub(&delta);
            }
        }
    }
    SpanningSolution {
        a: aug[0][4].clone(),
        b: aug[1][4].clone(),
        c: aug[2][4].clone(),
        d: aug[3][4].clone(),
    }
}

/// Matrix times solution: the linear part the four matched fields produce.
pub fn reassemble_linear_part(sol: &SpanningSolution) -> LinearPart {
    let m = spanning_matrix();
    let x = [&sol.a, &sol.b, &sol.c, &sol.d];
    let mut out = [
        QuadExt::zero(),
        QuadExt::zero(),
        QuadExt::zero(),
        QuadExt::zero(),
    ];
    for (row, slot) in out.iter_mut().enumerate() {
        for col in 0..4 {
            *slot = slot.add(&m[row][col].mul(x[col]));
        }
    }
    let [alpha, beta, gamma, delta] = out;
    LinearPart::new(alpha, beta, gamma, delta)
}

// ---------------------------------------------------------------------------
// Taylor extraction at integer points
// ---------------------------------------------------------------------------

/// Recenters a planar field at (j, 0), replacing the trig generators by
/// their exact series in the local coordinate truncated at `cap`:
/// at an integer j, sin(p(j+e)) = p e - p^3 e^3/6 + O(e^5) and
/// cos(p(j+e)) = 1 - p^2 e^2/2 + O(e^4). With `normalize` each sine factor
/// is read as sin(pz)/p, making its derivative 1 at the points.
pub fn recenter_at_integer(
    field: &SymbolicVectorField,
    j: i64,
    normalize: bool,
    cap: Option<u32>,
) -> Result<SymbolicVectorField> {
    let ring = field.ring().clone();
    let zi = ring.var_index("z")?;
    let wi = ring.var_index("w")?;
    let z = ring.var_by_index(zi);
    let shift = z.add(&ring.constant(GaussRat::from_int(j)));

    let mut comps = Vec::new();
    for (idx, comp) in field.components() {
        let mut e = comp.substitute(zi, &shift);
        for pair in ring.trig_pairs() {
            if pair.base != zi {
                continue;
            }
            let p = ring.var_by_index(pair.freq);
            let sixth = GaussRat::from_ratio(-1, 6);
            let s_series = if normalize {
                // z - p^2 z^3 / 6
                z.add(&p.pow(2).mul(&z.pow(3)).scale(&sixth))
            } else {
                // p z - p^3 z^3 / 6
                p.mul(&z).add(&p.pow(3).mul(&z.pow(3)).scale(&sixth))
            };
            let c_series = ring
                .int(1)
                .add(&p.pow(2).mul(&z.pow(2)).scale(&GaussRat::from_ratio(-1, 2)));
            e = e.substitute(pair.sin, &s_series);
            e = e.substitute(pair.cos, &c_series);
        }
        if let Some(cap) = cap {
            e = e.truncate_total_degree(&[zi, wi], cap);
        }
        comps.push((idx, e));
    }
    SymbolicVectorField::new(ring, comps)
}

/// Converts a ring element supported on constant symbols (the frequency p
/// and the root symbols) into a QuadExt value with a uniform p power.
fn elem_to_quadext(e: &RingElem) -> Result<(QuadExt, Option<u32>)> {
    let ring = e.ring().clone();
    let mut out = QuadExt::zero();
    let mut p_power: Option<u32> = None;
    for (exps, coef) in e.terms() {
        let mut r3 = 0u32;
        let mut r5 = 0u32;
        let mut p = 0u32;
        for (idx, &ex) in exps.iter().enumerate() {
            if ex == 0 {
                continue;
            }
            match ring.var_kind(idx) {
                VarKind::ConstSym => p += ex,
                VarKind::SqrtConst(3) => r3 += ex,
                VarKind::SqrtConst(5) => r5 += ex,
                _ => {
                    return Err(Error::NonScalarLinearPart(format!(
                        "coefficient contains {}",
                        ring.var_name(idx)
                    )))
                }
            }
        }
        match p_power {
            None => p_power = Some(p),
            Some(existing) if existing != p => {
                return Err(Error::NonScalarLinearPart(
                    "mixed powers of the frequency symbol".into(),
                ))
            }
            _ => {}
        }
        // exponents of the root symbols are 0 or 1 after normal form
        let slot = match (r3, r5) {
            (0, 0) => &mut out.one,
            (1, 0) => &mut out.r3,
            (0, 1) => &mut out.r5,
            (1, 1) => &mut out.r15,
            _ => unreachable!("normal form keeps root exponents in 0..=1"),
        };
        *slot = slot.add(coef);
    }
    Ok((out, p_power))
}

/// Extracts the degree-1 Taylor data of a field at (j, 0). The field must
/// vanish at the point.
pub fn linear_part_at(
    field: &SymbolicVectorField,
    j: i64,
    normalize: bool,
) -> Result<LinearPart> {
    let ring = field.ring().clone();
    let zi = ring.var_index("z")?;
    let wi = ring.var_index("w")?;
    let local = recenter_at_integer(field, j, normalize, Some(1))?;

    let mut coeffs = Vec::with_capacity(4);
    let mut p_power: Option<u32> = None;
    for comp_var in [zi, wi] {
        let comp = local.component(comp_var);
        let constant = comp.coefficient_of(&[(zi, 0), (wi, 0)]);
        if !constant.is_zero() {
            return Err(Error::DoesNotVanish(format!(
                "component d/d{} has value {} at ({j}, 0)",
                ring.var_name(comp_var),
                constant
            )));
        }
        for pattern in [[(zi, 1), (wi, 0)], [(zi, 0), (wi, 1)]] {
            let (q, p) = elem_to_quadext(&comp.coefficient_of(&pattern))?;
            if !q.is_zero() {
                match (p_power, p) {
                    (None, p) => p_power = p,
                    (Some(a), Some(b)) if a != b => {
                        return Err(Error::NonScalarLinearPart(
                            "linear part mixes powers of the frequency symbol".into(),
                        ))
                    }
                    _ => {}
                }
            }
            coeffs.push(q);
        }
    }
    let delta = coeffs.pop().unwrap();
    let gamma = coeffs.pop().unwrap();
    let beta = coeffs.pop().unwrap();
    let alpha = coeffs.pop().unwrap();
    Ok(LinearPart {
        alpha,
        beta,
        gamma,
        delta,
        p_scale: p_power.unwrap_or(0),
    })
}

/// Order of vanishing of a field at a point, clamped at three.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VanishOrder {
    Finite(u32),
    AtLeastThree,
    Infinite,
}

impl VanishOrder {
    pub fn at_least(&self, k: u32) -> bool {
        match self {
            VanishOrder::Finite(d) => *d >= k,
            VanishOrder::AtLeastThree => k <= 3,
            VanishOrder::Infinite => true,
        }
    }
}

/// Minimal total degree of the Taylor expansion of the components at
/// (j, 0); degrees three and higher are reported as `AtLeastThree`.
pub fn order_vanishing(field: &SymbolicVectorField, j: i64) -> Result<VanishOrder> {
    if field.is_zero() {
        return Ok(VanishOrder::Infinite);
    }
    let ring = field.ring().clone();
    let zi = ring.var_index("z")?;
    let wi = ring.var_index("w")?;
    let has_trig = ring.trig_pairs().iter().any(|p| p.base == zi);
    let cap = if has_trig { Some(3) } else { None };
    let local = recenter_at_integer(field, j, false, cap)?;
    let mut min: Option<u32> = None;
    for (_, comp) in local.components() {
        if let Some(d) = comp.min_total_degree(&[zi, wi]) {
            min = Some(min.map_or(d, |m| m.min(d)));
        }
    }
    Ok(match min {
        // Everything at degree <= 3 cancelled; with a truncation cap this
        // means the true order exceeds the cap, without one the recentered
        // field would have been zero outright.
        None => VanishOrder::AtLeastThree,
        Some(d) if d >= 3 => VanishOrder::AtLeastThree,
        Some(d) => VanishOrder::Finite(d),
    })
}

// ---------------------------------------------------------------------------
// Desk-scale realization of the four spanning fields
// ---------------------------------------------------------------------------

/// Ring for the spanning fields: z, w with sqrt(3) and sqrt(5) adjoined.
pub fn spanning_ring() -> Ring {
    Ring::poly_with_roots(&["z", "w"], &[("r3", 3), ("r5", 5)])
}

/// The four matched fields for a window of integer points.
#[derive(Debug, Clone)]
pub struct MatchedFields {
    pub v: SymbolicVectorField,
    pub z: SymbolicVectorField,
    pub v_prime: SymbolicVectorField,
    pub w_prime: SymbolicVectorField,
}

impl MatchedFields {
    pub fn total(&self) -> SymbolicVectorField {
        self.v
            .add(&self.z)
            .and_then(|s| s.add(&self.v_prime))
            .and_then(|s| s.add(&self.w_prime))
            .expect("uniform ring")
    }
}

fn quad_to_elem(ring: &Ring, q: &QuadExt) -> RingElem {
    let r3 = ring.var("r3").expect("spanning ring");
    let r5 = ring.var("r5").expect("spanning ring");
    ring.constant(q.one.clone())
        .add(&r3.scale(&q.r3))
        .add(&r5.scale(&q.r5))
        .add(&r3.mul(&r5).scale(&q.r15))
}

/// Newton divided differences with integer nodes and QuadExt values; only
/// scalar division by node differences is needed.
fn dd_quadext(nodes: &[i64], values: &[QuadExt]) -> Vec<QuadExt> {
    let n = nodes.len();
    let mut dd = values.to_vec();
    for j in 1..n {
        for i in (j..n).rev() {
            let num = dd[i].sub(&dd[i - 1]);
            let den = GaussRat::from_int(nodes[i] - nodes[i - j]);
            dd[i] = num.scale(&den.inv().expect("distinct nodes"));
        }
    }
    dd
}

/// Polynomial in the variable `z` that vanishes to order exactly one on the
/// window with prescribed derivative `values[i]` at `window[i]`.
fn poly_with_prescribed_derivatives(
    ring: &Ring,
    window: &[i64],
    values: &[QuadExt],
) -> RingElem {
    let z = ring.var("z").expect("spanning ring");
    // vanishing product and its derivative at each node
    let mut prod = ring.int(1);
    for &j in window {
        prod = prod.mul(&z.sub(&ring.int(j)));
    }
    let h_values: Vec<QuadExt> = window
        .iter()
        .zip(values)
        .map(|(&j, v)| {
            let mut dprod = 1i64;
            for &m in window {
                if m != j {
                    dprod *= j - m;
                }
            }
            v.scale(&GaussRat::from_ratio(1, dprod))
        })
        .collect();
    let coeffs = dd_quadext(window, &h_values);
    // expand the Newton form of h and multiply by the vanishing product
    let mut h = quad_to_elem(ring, &coeffs[coeffs.len() - 1]);
    for i in (0..coeffs.len() - 1).rev() {
        h = h
            .mul(&z.sub(&ring.int(window[i])))
            .add(&quad_to_elem(ring, &coeffs[i]));
    }
    prod.mul(&h)
}

/// Builds V, Z, V', W' with the prescribed per-point derivative data.
pub fn build_matched_fields(
    ring: &Ring,
    window: &[i64],
    solutions: &[SpanningSolution],
) -> Result<MatchedFields> {
    if window.len() != solutions.len() || window.is_empty() {
        return Err(Error::InvalidInput(
            "window and solution lists must align and be nonempty".into(),
        ));
    }
    let zi = ring.var_index("z")?;
    let w = ring.var("w")?;
    let z = ring.var("z")?;
    let r3 = ring.var("r3")?;
    let r5 = ring.var("r5")?;

    let take = |f: fn(&SpanningSolution) -> &QuadExt| -> Vec<QuadExt> {
        solutions.iter().map(|s| f(s).clone()).collect()
    };
    let a_poly = poly_with_prescribed_derivatives(ring, window, &take(|s| &s.a));
    let b_poly = poly_with_prescribed_derivatives(ring, window, &take(|s| &s.b));
    let c_poly = poly_with_prescribed_derivatives(ring, window, &take(|s| &s.c));
    let d_poly = poly_with_prescribed_derivatives(ring, window, &take(|s| &s.d));

    // arguments z - w/sqrt5 and z - w/sqrt3
    let arg5 = z.sub(&r5.mul(&w).scale(&GaussRat::from_ratio(1, 5)));
    let arg3 = z.sub(&r3.mul(&w).scale(&GaussRat::from_ratio(1, 3)));
    let c_comp = c_poly.substitute(zi, &arg5);
    let d_comp = d_poly.substitute(zi, &arg3);

    Ok(MatchedFields {
        v: SymbolicVectorField::from_named(ring, &[("w", a_poly)])?,
        z: SymbolicVectorField::from_named(ring, &[("z", b_poly)])?,
        v_prime: SymbolicVectorField::from_named(
            ring,
            &[("z", c_comp.clone()), ("w", r5.mul(&c_comp))],
        )?,
        w_prime: SymbolicVectorField::from_named(
            ring,
            &[("z", d_comp.clone()), ("w", r3.mul(&d_comp))],
        )?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::Ring;

    #[test]
    fn determinant_exact_and_by_cofactors() {
        let det = det4(&spanning_matrix());
        assert_eq!(det, spanning_det_closed_form());
        // cofactor expansion along column 1: only row 3 contributes, with
        // minor det [[1,1,1],[0,-1/sqrt5,-1/sqrt3],[0,-1,-1]]
        let minor = QuadExt::inv_sqrt5()
            .neg()
            .mul(&QuadExt::one().neg())
            .sub(&QuadExt::inv_sqrt3().neg().mul(&QuadExt::one().neg()));
        assert_eq!(det, minor);
        // float rendering
        let expect = 1.0 / 5f64.sqrt() - 1.0 / 3f64.sqrt();
        assert!((det.to_c64().re - expect).abs() <= 1e-12);
        assert!((det.to_c64().re - (-0.130_136_673_7)).abs() < 1e-9);
    }

    #[test]
    fn solve_pure_targets() {
        // gamma-only target is matched by V alone
        let sol = spanning_matrix_solve(&LinearPart::from_ints(0, 0, 1, 0));
        assert_eq!(sol.a, QuadExt::one());
        assert!(sol.b.is_zero() && sol.c.is_zero() && sol.d.is_zero());
        // alpha-only target is matched by Z alone
        let sol = spanning_matrix_solve(&LinearPart::from_ints(1, 0, 0, 0));
        assert_eq!(sol.b, QuadExt::one());
        assert!(sol.a.is_zero() && sol.c.is_zero() && sol.d.is_zero());
    }

    #[test]
    fn solve_round_trips() {
        let targets = [
            LinearPart::from_ints(1, 2, 3, 4),
            LinearPart::from_ints(-7, 0, 5, 1),
            LinearPart::new(
                QuadExt::sqrt3(),
                QuadExt::from_ratio(1, 2),
                QuadExt::sqrt5().neg(),
                QuadExt::from_int(2),
            ),
        ];
        for t in targets {
            let sol = spanning_matrix_solve(&t);
            let back = reassemble_linear_part(&sol);
            assert_eq!(back.alpha, t.alpha);
            assert_eq!(back.beta, t.beta);
            assert_eq!(back.gamma, t.gamma);
            assert_eq!(back.delta, t.delta);
        }
    }

    #[test]
    fn linear_part_of_simple_fields() {
        let ring = spanning_ring();
        let z = ring.var("z").unwrap();
        let w = ring.var("w").unwrap();

        let zdz = SymbolicVectorField::from_named(&ring, &[("z", z.clone())]).unwrap();
        let lp = linear_part_at(&zdz, 0, false).unwrap();
        assert_eq!(lp, LinearPart::from_ints(1, 0, 0, 0));

        // (z - w/sqrt5)(d/dz + sqrt5 d/dw) -> (1, -1/sqrt5, sqrt5, -1)
        let r5 = ring.var("r5").unwrap();
        let arg = z.sub(&r5.mul(&w).scale(&GaussRat::from_ratio(1, 5)));
        let f = SymbolicVectorField::from_named(
            &ring,
            &[("z", arg.clone()), ("w", r5.mul(&arg))],
        )
        .unwrap();
        let lp = linear_part_at(&f, 0, false).unwrap();
        assert_eq!(
            lp,
            LinearPart::new(
                QuadExt::one(),
                QuadExt::inv_sqrt5().neg(),
                QuadExt::sqrt5(),
                QuadExt::one().neg(),
            )
        );
    }

    #[test]
    fn linear_part_of_sine_field() {
        let ring = Ring::poly_with_trig(&["z", "w"], "z");
        let s = ring.var("s").unwrap();
        let f = SymbolicVectorField::from_named(&ring, &[("w", s)]).unwrap();
        // raw: gamma = p, reported as (0,0,1,0) with one power of p factored
        let raw = linear_part_at(&f, 0, false).unwrap();
        assert_eq!(raw.gamma, QuadExt::one());
        assert_eq!(raw.p_scale, 1);
        // unit-derivative normalization: plain (0,0,1,0)
        let norm = linear_part_at(&f, 3, true).unwrap();
        assert_eq!(norm.gamma, QuadExt::one());
        assert_eq!(norm.p_scale, 0);
        assert!(norm.alpha.is_zero() && norm.beta.is_zero() && norm.delta.is_zero());
    }

    #[test]
    fn non_vanishing_field_is_rejected() {
        let ring = spanning_ring();
        let f =
            SymbolicVectorField::from_named(&ring, &[("z", ring.int(1))]).unwrap();
        assert!(matches!(
            linear_part_at(&f, 0, false),
            Err(Error::DoesNotVanish(_))
        ));
    }

    #[test]
    fn order_of_vanishing_basics() {
        let ring = spanning_ring();
        let z = ring.var("z").unwrap();
        let zdz = SymbolicVectorField::from_named(&ring, &[("z", z.clone())]).unwrap();
        assert_eq!(order_vanishing(&zdz, 0).unwrap(), VanishOrder::Finite(1));
        let z2dw =
            SymbolicVectorField::from_named(&ring, &[("w", z.pow(2))]).unwrap();
        assert_eq!(order_vanishing(&z2dw, 0).unwrap(), VanishOrder::Finite(2));
        assert_eq!(
            order_vanishing(&SymbolicVectorField::zero(&ring), 5).unwrap(),
            VanishOrder::Infinite
        );
        // z^4 d/dz vanishes to order 4 at 0, reported as at-least-three
        let z4 = SymbolicVectorField::from_named(&ring, &[("z", z.pow(4))]).unwrap();
        assert_eq!(order_vanishing(&z4, 0).unwrap(), VanishOrder::AtLeastThree);
        // sin field vanishes to order 1 at every integer
        let tring = Ring::poly_with_trig(&["z", "w"], "z");
        let s = tring.var("s").unwrap();
        let sf = SymbolicVectorField::from_named(&tring, &[("w", s)]).unwrap();
        for j in [-2, 0, 7] {
            assert_eq!(order_vanishing(&sf, j).unwrap(), VanishOrder::Finite(1));
        }
    }

    #[test]
    fn matched_fields_have_prescribed_linear_parts() {
        let ring = spanning_ring();
        let window = [-1i64, 0, 1];
        let sols: Vec<SpanningSolution> = [
            LinearPart::from_ints(1, 0, 2, 0),
            LinearPart::from_ints(0, 3, 0, -1),
            LinearPart::from_ints(-2, 1, 1, 1),
        ]
        .iter()
        .map(spanning_matrix_solve)
        .collect();
        let matched = build_matched_fields(&ring, &window, &sols).unwrap();
        let total = matched.total();
        // each matched part vanishes on the window to order >= 1
        for &j in &window {
            for part in [&matched.v, &matched.z, &matched.v_prime, &matched.w_prime] {
                assert!(order_vanishing(part, j).unwrap().at_least(1));
            }
        }
        // and the assembled linear parts are the prescribed targets
        let expect = [
            LinearPart::from_ints(1, 0, 2, 0),
            LinearPart::from_ints(0, 3, 0, -1),
            LinearPart::from_ints(-2, 1, 1, 1),
        ];
        for (&j, target) in window.iter().zip(expect.iter()) {
            let lp = linear_part_at(&total, j, false).unwrap();
            assert_eq!(&lp, target);
        }
    }
}
