//! The spectral ball of 2x2 matrices, the eigenvalue fibration
//! pi = (tr, det), and the fiberwise three-step conjugation program
//! [[l, k], [0, m]] -> [[l, l(k)], [0, m]].
//!
//! Conjugation flows preserve pi, so every trace point stays in the fiber;
//! the shear data are F = f(lambda - mu - c) with f solving
//! (k - tau) f^2 + (2k - tau) f + (k - l(k)) = 0 (tau = lambda - mu) and
//! G = g(b) with g(l(k)) = -1/(1 + f(k)).

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::interp::{InterpTable, NewtonPoly};
use crate::mat2::Mat2;
use crate::report::{CaseRecord, Certificate, Report, Residual, SuiteConfig};
use crate::scalar::{solve_quadratic_min_modulus, Backend, Scalar};
use crate::tame_sl2::{perturb_value, InjectionTable};
use crate::vector_field::spectral_field_checks;

/// A matrix viewed as a point of the spectral ball; membership (both
/// eigenvalues in the open unit disc) is checked on demand.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectralMatrix {
    pub m: Mat2,
}

impl SpectralMatrix {
    pub fn new(m: Mat2) -> SpectralMatrix {
        SpectralMatrix { m }
    }

    /// Eigenvalue moduli strictly below 1 + tol (numerical check).
    pub fn in_spectral_ball(&self, tol: f64) -> bool {
        let tr = self.m.trace().to_c64();
        let det = self.m.det().to_c64();
        let disc = (tr * tr - 4.0 * det).sqrt();
        let l1 = (tr + disc) / 2.0;
        let l2 = (tr - disc) / 2.0;
        l1.norm() < 1.0 + tol && l2.norm() < 1.0 + tol
    }
}

/// (tr, det), the symmetrized eigenvalue map.
pub fn pi_map(m: &Mat2) -> (Scalar, Scalar) {
    (m.trace(), m.det())
}

/// Conjugation by [[1,t],[0,1]]: fixes c, preserves tr and det.
pub fn conj_flow_v(t: &Scalar, m: &Mat2) -> Result<Mat2> {
    if t.backend() != m.backend()? {
        return Err(Error::BackendMismatch("conj_flow_v"));
    }
    let a = m.a.add(&t.mul(&m.c));
    let d = m.d.sub(&t.mul(&m.c));
    let b = m.b.add(&t.mul(&m.d.sub(&m.a))).sub(&t.mul(t).mul(&m.c));
    Ok(Mat2 {
        a,
        b,
        c: m.c.clone(),
        d,
    })
}

/// Conjugation by [[1,0],[t,1]]: fixes b, preserves tr and det.
pub fn conj_flow_w(t: &Scalar, m: &Mat2) -> Result<Mat2> {
    if t.backend() != m.backend()? {
        return Err(Error::BackendMismatch("conj_flow_w"));
    }
    let a = m.a.sub(&t.mul(&m.b));
    let d = m.d.add(&t.mul(&m.b));
    let c = m.c.add(&t.mul(&m.a.sub(&m.d))).sub(&t.mul(t).mul(&m.b));
    Ok(Mat2 {
        a,
        b: m.b.clone(),
        c,
        d,
    })
}

/// One fiber task: eigenvalues and the index injection.
#[derive(Debug, Clone, Serialize)]
pub struct FiberTask {
    pub lambda: Scalar,
    pub mu: Scalar,
    pub table: InjectionTable,
}

impl FiberTask {
    pub fn new(lambda: Scalar, mu: Scalar, table: InjectionTable) -> Result<FiberTask> {
        if lambda.backend() != mu.backend() {
            return Err(Error::BackendMismatch("fiber task eigenvalues"));
        }
        for (name, v) in [("lambda", &lambda), ("mu", &mu)] {
            let inside = match v {
                Scalar::Exact(g) => {
                    g.modulus_sq() < num_rational::BigRational::from_integer(1.into())
                }
                Scalar::Float(c) => c.norm_sqr() < 1.0,
            };
            if !inside {
                return Err(Error::InvalidInput(format!(
                    "{name} = {v} is not in the open unit disc"
                )));
            }
        }
        Ok(FiberTask { lambda, mu, table })
    }

    pub fn backend(&self) -> Backend {
        self.lambda.backend()
    }

    pub fn tau(&self) -> Scalar {
        self.lambda.sub(&self.mu)
    }

    /// [[lambda, k], [0, mu]]
    pub fn fiber_point(&self, k: i64) -> Mat2 {
        let backend = self.backend();
        Mat2 {
            a: self.lambda.clone(),
            b: Scalar::from_int(k, backend),
            c: Scalar::zero(backend),
            d: self.mu.clone(),
        }
    }
}

/// Solves (k - tau) f^2 + (2k - tau) f + (k - l) = 0 with the shared branch
/// rule; the degenerate k = tau case is linear. The product form
/// -(1 + f)(-k - k f + tau f) = l with l >= 1 makes f = -1 impossible,
/// which is asserted.
pub fn solve_fiber_f(k: i64, l: i64, tau: &Scalar) -> Result<Scalar> {
    let backend = tau.backend();
    let a2 = Scalar::from_int(k, backend).sub(tau);
    let a1 = Scalar::from_int(2 * k, backend).sub(tau);
    let a0 = Scalar::from_int(k - l, backend);
    let f = solve_quadratic_min_modulus(&a2, &a1, &a0)?;
    if f == Scalar::from_int(-1, backend) {
        return Err(Error::InternalContradiction(format!(
            "f(k) = -1 at (k, l) = ({k}, {l})"
        )));
    }
    Ok(f)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ConjGenerator {
    V,
    W,
}

/// Kernel coordinate of a fiber step: (lambda - mu) - c for V-conjugations
/// (tr is constant on the fiber, so this is a kernel function), b for
/// W-conjugations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum FiberCoordinate {
    TauMinusC,
    B,
}

#[derive(Debug, Clone)]
pub struct FiberStep {
    pub gen: ConjGenerator,
    pub coordinate: FiberCoordinate,
    pub poly: NewtonPoly,
    pub source: Option<InterpTable>,
}

#[derive(Debug, Clone)]
pub struct FiberProgram {
    pub lambda: Scalar,
    pub mu: Scalar,
    pub steps: Vec<FiberStep>,
}

#[derive(Debug, Clone)]
pub struct FiberRun {
    pub end: Mat2,
    pub trace: Vec<Mat2>,
}

impl FiberStep {
    fn coordinate_value(&self, tau: &Scalar, m: &Mat2) -> Scalar {
        match self.coordinate {
            FiberCoordinate::TauMinusC => tau.sub(&m.c),
            FiberCoordinate::B => m.b.clone(),
        }
    }

    pub fn apply(&self, tau: &Scalar, m: &Mat2) -> Result<Mat2> {
        let t = self.poly.eval(&self.coordinate_value(tau, m));
        match self.gen {
            ConjGenerator::V => conj_flow_v(&t, m),
            ConjGenerator::W => conj_flow_w(&t, m),
        }
    }
}

impl FiberProgram {
    pub fn apply(&self, start: &Mat2) -> Result<FiberRun> {
        let tau = self.lambda.sub(&self.mu);
        let mut trace = Vec::with_capacity(self.steps.len() + 1);
        trace.push(start.clone());
        let mut current = start.clone();
        for step in &self.steps {
            current = step.apply(&tau, &current)?;
            trace.push(current.clone());
        }
        Ok(FiberRun {
            end: current,
            trace,
        })
    }
}

pub fn build_fiber_program(task: &FiberTask) -> Result<FiberProgram> {
    build_fiber_program_with(task, None)
}

pub fn build_fiber_program_with(
    task: &FiberTask,
    perturb: Option<usize>,
) -> Result<FiberProgram> {
    let backend = task.backend();
    let tau = task.tau();
    let mut f_nodes = Vec::new();
    let mut f_values = Vec::new();
    let mut g_nodes = Vec::new();
    let mut g_values = Vec::new();
    for (i, &(k, l)) in task.table.rows().iter().enumerate() {
        let f = solve_fiber_f(k, l, &tau)?;
        f_nodes.push(Scalar::from_int(k, backend));
        f_values.push(if perturb == Some(i) {
            perturb_value(&f)
        } else {
            f.clone()
        });
        g_nodes.push(Scalar::from_int(l, backend));
        g_values.push(
            Scalar::from_int(-1, backend).div(&Scalar::one(backend).add(&f))?,
        );
    }

    let step1 = FiberStep {
        gen: ConjGenerator::W,
        coordinate: FiberCoordinate::B,
        poly: NewtonPoly::constant(Scalar::one(backend)),
        source: None,
    };
    let f_table = InterpTable::new(f_nodes, f_values, 1e-9)?;
    let step2 = FiberStep {
        gen: ConjGenerator::V,
        coordinate: FiberCoordinate::TauMinusC,
        poly: crate::interp::newton_build(&f_table)?,
        source: Some(f_table),
    };
    let g_table = InterpTable::new(g_nodes, g_values, 1e-9)?;
    let step3 = FiberStep {
        gen: ConjGenerator::W,
        coordinate: FiberCoordinate::B,
        poly: crate::interp::newton_build(&g_table)?,
        source: Some(g_table),
    };
    Ok(FiberProgram {
        lambda: task.lambda.clone(),
        mu: task.mu.clone(),
        steps: vec![step1, step2, step3],
    })
}

/// Per row: endpoint [[l, l(k)], [0, m]], pi constant along the trace (this
/// pins every trace point to the fiber, hence inside the spectral ball),
/// and the middle matrix's b-entry already equal to l(k).
pub fn verify_fiber_program(
    task: &FiberTask,
    prog: &FiberProgram,
    cfg: &SuiteConfig,
) -> Report {
    let start = std::time::Instant::now();
    let mut report = Report::new("verify-spectral", cfg.clone());
    let backend = task.backend();

    let cases: Vec<CaseRecord> = task
        .table
        .rows()
        .par_iter()
        .enumerate()
        .map(|(i, &(k, l))| {
            let label = format!("{k} -> {l}");
            let point = task.fiber_point(k);
            let target = task.fiber_point(l);
            let (tr0, det0) = pi_map(&point);
            match prog.apply(&point) {
                Err(e) => CaseRecord::fail(
                    i,
                    label,
                    Residual::ExactMismatch,
                    format!("program application failed: {e}"),
                ),
                Ok(run) => {
                    let end_dist = run.end.dist_f64(&target);
                    let pi_drift = run
                        .trace
                        .iter()
                        .map(|p| {
                            let (tr, det) = pi_map(p);
                            tr.dist_f64(&tr0).max(det.dist_f64(&det0))
                        })
                        .fold(0.0f64, f64::max);
                    let mid_b_dist = run.trace[2].b.dist_f64(&Scalar::from_int(l, backend));
                    let (end_ok, pi_ok) = match backend {
                        Backend::Exact => (run.end == target, pi_drift == 0.0),
                        Backend::Float => (end_dist <= cfg.tol, pi_drift <= 1e-12),
                    };
                    let residual = match backend {
                        Backend::Exact => {
                            if end_ok && pi_ok {
                                Residual::ExactZero
                            } else {
                                Residual::ExactMismatch
                            }
                        }
                        Backend::Float => Residual::Float(end_dist),
                    };
                    if end_ok && pi_ok {
                        let mut rec = CaseRecord::pass(i, label, residual);
                        rec.detail = Some(format!(
                            "pi drift {pi_drift:.3e}, middle b residual {mid_b_dist:.3e}"
                        ));
                        rec
                    } else {
                        CaseRecord::fail(
                            i,
                            label,
                            residual,
                            format!(
                                "endpoint {} (target {}), pi drift {pi_drift:.3e}",
                                run.end, target
                            ),
                        )
                    }
                }
            }
        })
        .collect();
    for c in cases {
        report.push(c);
    }
    for cert in fiber_kernel_certificates() {
        report.push_certificate(&cert);
    }
    for step in &prog.steps {
        if let Some(t) = &step.source {
            report.attach_table(format!("{:?}-conjugation shear", step.gen), t.clone());
        }
    }
    report.finalize(start.elapsed().as_secs_f64());
    report
}

/// The coordinate functions of the fiber steps are annihilated by their
/// conjugation fields: V kills c (and constants), W kills b; both preserve
/// tr and det.
pub fn fiber_kernel_certificates() -> Vec<Certificate> {
    let ring = crate::vector_field::sl2_ring();
    let v = crate::vector_field::spectral_field_v(&ring);
    let w = crate::vector_field::spectral_field_w(&ring);
    let c = ring.var("c").unwrap();
    let b = ring.var("b").unwrap();
    let mut out = Vec::new();
    let vc = v.apply(&c).unwrap();
    out.push(if vc.is_zero() {
        Certificate::pass("spectral V annihilates c", "F = f(tau - c) is a V-kernel shear")
    } else {
        Certificate::fail("spectral V annihilates c", format!("residual {vc}"))
    });
    let wb = w.apply(&b).unwrap();
    out.push(if wb.is_zero() {
        Certificate::pass("spectral W annihilates b", "G = g(b) is a W-kernel shear")
    } else {
        Certificate::fail("spectral W annihilates b", format!("residual {wb}"))
    });
    out.extend(spectral_field_checks());
    out
}

/// The middle matrix the proof displays after the V-conjugation, with the
/// lower-left entry lambda - mu - k (conjugation by upper triangulars fixes
/// c; the fiber pair (lambda, mu) keeps its difference in that slot).
pub fn expected_middle_matrix(task: &FiberTask, k: i64, l: i64) -> Result<Mat2> {
    let backend = task.backend();
    let tau = task.tau();
    let f = solve_fiber_f(k, l, &tau)?;
    let kk = Scalar::from_int(k, backend);
    let a = tau.mul(&f).add(&task.lambda).sub(&kk.mul(&f)).sub(&kk);
    let b = Scalar::from_int(l, backend);
    let c = tau.sub(&kk);
    let d = tau
        .mul(&f)
        .sub(&task.mu)
        .sub(&kk.mul(&f))
        .sub(&kk)
        .neg();
    Ok(Mat2 { a, b, c, d })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn float_task(lambda: (f64, f64), mu: (f64, f64), pairs: &[(i64, i64)]) -> FiberTask {
        FiberTask::new(
            Scalar::float(lambda.0, lambda.1),
            Scalar::float(mu.0, mu.1),
            InjectionTable::new(pairs.to_vec()).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn pi_map_examples() {
        let i = Mat2::identity(Backend::Exact);
        assert_eq!(pi_map(&i), (Scalar::exact_int(2), Scalar::exact_int(1)));
        let swap = Mat2::from_ints(0, 1, 1, 0, Backend::Exact);
        assert_eq!(pi_map(&swap), (Scalar::exact_int(0), Scalar::exact_int(-1)));
        // upper-triangular fiber representative
        let m = Mat2 {
            a: Scalar::exact_ratio(1, 2),
            b: Scalar::exact_int(3),
            c: Scalar::exact_int(0),
            d: Scalar::exact_ratio(-1, 4),
        };
        let (tr, det) = pi_map(&m);
        assert_eq!(tr, Scalar::exact_ratio(1, 4));
        assert_eq!(det, Scalar::exact_ratio(-1, 8));
    }

    #[test]
    fn conjugation_time_zero_and_pi_invariance() {
        let m = Mat2::from_ints(2, 1, 1, 1, Backend::Exact);
        let z = Scalar::exact_int(0);
        assert_eq!(conj_flow_v(&z, &m).unwrap(), m);
        assert_eq!(conj_flow_w(&z, &m).unwrap(), m);
    }

    #[test]
    fn w_conjugation_of_fiber_point_matches_display() {
        // phi_W^1([[l, k], [0, m]]) = [[l-k, k], [l-m-k, m+k]]
        let task = float_task((0.5, 0.0), (-0.25, 0.0), &[(3, 3)]);
        let m = task.fiber_point(3);
        let out = conj_flow_w(&Scalar::one(Backend::Float), &m).unwrap();
        let expect = Mat2 {
            a: Scalar::float(0.5 - 3.0, 0.0),
            b: Scalar::float(3.0, 0.0),
            c: Scalar::float(0.5 - (-0.25) - 3.0, 0.0),
            d: Scalar::float(-0.25 + 3.0, 0.0),
        };
        assert!(out.approx_eq(&expect, 1e-14));
    }

    #[test]
    fn fiber_f_examples() {
        // identity: f = 0 for any tau
        for tau in [Scalar::float(0.0, 0.0), Scalar::float(0.3, -0.2)] {
            for k in 1..6 {
                assert!(solve_fiber_f(k, k, &tau).unwrap().is_zero());
            }
        }
        // (k=1, l=2, tau=0): f^2 + 2f - 1 = 0, smaller root sqrt(2) - 1
        let f = solve_fiber_f(1, 2, &Scalar::float(0.0, 0.0)).unwrap();
        assert!((f.to_c64().re - (2f64.sqrt() - 1.0)).abs() < 1e-12);
        // degenerate linear branch (k = tau): f = (l - k)/(2k - tau)
        let f = solve_fiber_f(1, 2, &Scalar::float(1.0, 0.0)).unwrap();
        assert!(f.approx_eq(&Scalar::float(1.0, 0.0), 1e-14));
        // residual of the displayed product equation -(1+f)(-k - kf + tau f) = l
        let tau = Scalar::float(0.3, 0.1);
        let f = solve_fiber_f(2, 7, &tau).unwrap();
        let k = Scalar::float(2.0, 0.0);
        let lhs = Scalar::float(-1.0, 0.0)
            .mul(&Scalar::float(1.0, 0.0).add(&f))
            .mul(&k.neg().sub(&k.mul(&f)).add(&tau.mul(&f)));
        assert!(lhs.approx_eq(&Scalar::float(7.0, 0.0), 1e-12));
    }

    #[test]
    fn identity_task_fixes_points_exactly_in_exact_backend() {
        let task = FiberTask::new(
            Scalar::exact_ratio(1, 2),
            Scalar::exact_ratio(-1, 4),
            InjectionTable::identity(&[1, 2, 3]).unwrap(),
        )
        .unwrap();
        let prog = build_fiber_program(&task).unwrap();
        let report = verify_fiber_program(&task, &prog, &SuiteConfig::exact());
        assert!(report.all_pass(), "{report:?}");
        for k in 1..=3 {
            let run = prog.apply(&task.fiber_point(k)).unwrap();
            assert_eq!(run.end, task.fiber_point(k));
        }
    }

    #[test]
    fn double_eigenvalue_fiber_1_to_2() {
        // lambda = mu = 0, {1 -> 2}: f = sqrt(2) - 1, g(2) = -1/sqrt(2),
        // endpoint [[0, 2], [0, 0]]
        let task = float_task((0.0, 0.0), (0.0, 0.0), &[(1, 2)]);
        let prog = build_fiber_program(&task).unwrap();
        let g = prog.steps[2].poly.eval(&Scalar::float(2.0, 0.0));
        assert!((g.to_c64().re + 1.0 / 2f64.sqrt()).abs() < 1e-12);
        let run = prog.apply(&task.fiber_point(1)).unwrap();
        assert!(run.end.dist_f64(&task.fiber_point(2)) <= 1e-9);
    }

    #[test]
    fn mixed_fiber_verifies() {
        let task = float_task((0.5, 0.0), (-0.25, 0.0), &[(1, 3), (2, 1)]);
        let prog = build_fiber_program(&task).unwrap();
        let report = verify_fiber_program(&task, &prog, &SuiteConfig::float(1e-9));
        assert!(report.all_pass(), "{report:?}");
    }

    #[test]
    fn middle_matrix_matches_corrected_display() {
        let task = float_task((0.31, 0.12), (-0.4, 0.05), &[(1, 4), (2, 2), (3, 1)]);
        let prog = build_fiber_program(&task).unwrap();
        for &(k, l) in task.table.rows() {
            let run = prog.apply(&task.fiber_point(k)).unwrap();
            let expect = expected_middle_matrix(&task, k, l).unwrap();
            assert!(
                run.trace[2].dist_f64(&expect) <= 1e-9,
                "k={k}: {} vs {}",
                run.trace[2],
                expect
            );
        }
    }

    #[test]
    fn corrupted_f_fails_only_affected_row() {
        let task = float_task((0.1, 0.2), (0.3, -0.1), &[(1, 2), (2, 5), (3, 1)]);
        let prog = build_fiber_program_with(&task, Some(2)).unwrap();
        let report = verify_fiber_program(&task, &prog, &SuiteConfig::float(1e-9));
        let rows: Vec<bool> = report.cases.iter().take(3).map(|c| c.pass).collect();
        assert_eq!(rows, vec![true, true, false], "{report:?}");
    }

    #[test]
    fn task_validation_rejects_outside_disc() {
        assert!(FiberTask::new(
            Scalar::float(1.0, 0.0),
            Scalar::float(0.0, 0.0),
            InjectionTable::identity(&[1]).unwrap(),
        )
        .is_err());
        assert!(FiberTask::new(
            Scalar::exact_int(0),
            Scalar::exact_ratio(5, 4),
            InjectionTable::identity(&[1]).unwrap(),
        )
        .is_err());
    }

    #[test]
    fn spectral_ball_membership_probe() {
        let inside = SpectralMatrix::new(task_point(0.5, -0.25, 100));
        assert!(inside.in_spectral_ball(1e-9));
        let outside = SpectralMatrix::new(Mat2::from_ints(2, 0, 0, 0, Backend::Float));
        assert!(!outside.in_spectral_ball(1e-9));
    }

    fn task_point(l: f64, m: f64, k: i64) -> Mat2 {
        Mat2 {
            a: Scalar::float(l, 0.0),
            b: Scalar::float(k as f64, 0.0),
            c: Scalar::float(0.0, 0.0),
            d: Scalar::float(m, 0.0),
        }
    }

    proptest! {
        #[test]
        fn pi_invariant_under_conjugation_flows(
            t_re in -2.0f64..2.0, t_im in -2.0f64..2.0,
            a in -2.0f64..2.0, b in -2.0f64..2.0, c in -2.0f64..2.0, d in -2.0f64..2.0,
        ) {
            let m = Mat2 {
                a: Scalar::float(a, 0.1),
                b: Scalar::float(b, -0.2),
                c: Scalar::float(c, 0.0),
                d: Scalar::float(d, 0.3),
            };
            let t = Scalar::float(t_re, t_im);
            let (tr0, det0) = pi_map(&m);
            for out in [conj_flow_v(&t, &m).unwrap(), conj_flow_w(&t, &m).unwrap()] {
                let (tr, det) = pi_map(&out);
                let scale = 1.0 + tr0.modulus_sq_f64().max(det0.modulus_sq_f64()).sqrt();
                prop_assert!(tr.dist_f64(&tr0) <= 1e-12 * scale);
                prop_assert!(det.dist_f64(&det0) <= 1e-12 * scale);
            }
        }

        #[test]
        fn pi_exactly_invariant_exact_backend(
            t in -9i64..10, a in -5i64..6, b in -5i64..6, c in -5i64..6, d in -5i64..6,
        ) {
            let m = Mat2::from_ints(a, b, c, d, Backend::Exact);
            let ts = Scalar::exact_int(t);
            let (tr0, det0) = pi_map(&m);
            for out in [conj_flow_v(&ts, &m).unwrap(), conj_flow_w(&ts, &m).unwrap()] {
                let (tr, det) = pi_map(&out);
                prop_assert_eq!(&tr, &tr0);
                prop_assert_eq!(&det, &det0);
            }
        }
    }
}
