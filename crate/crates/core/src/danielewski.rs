//! The Danielewski surface z^2 - z - x y = 0: its basic complete flows and
//! the three-step program (n, 0, 1) -> (l(n), 0, 1).
//!
//! Steps: psi at time 1, then the phi-shear f(y - 1) with f solving
//! l = n + f (2n+1) + f^2 (n+1), then the psi-shear g(x) with
//! g(l) = (1 - (n+1)(1 + f)) / l. The final y-coordinate is checked, not
//! set: the surface relation forces it to zero once z returns to 1.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::interp::{InterpTable, NewtonPoly};
use crate::report::{CaseRecord, Certificate, Report, Residual, SuiteConfig};
use crate::ring::RingElem;
use crate::scalar::{solve_quadratic_min_modulus, Backend, Scalar};
use crate::tame_sl2::{perturb_value, InjectionTable};
use crate::vector_field::{dani_field_checks, dani_field_phi, dani_field_psi, dani_ring};

/// A point of the surface.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DanielewskiPoint {
    pub x: Scalar,
    pub y: Scalar,
    pub z: Scalar,
}

impl DanielewskiPoint {
    pub fn new(x: Scalar, y: Scalar, z: Scalar, tol: f64) -> Result<DanielewskiPoint> {
        let p = DanielewskiPoint { x, y, z };
        let r = p.relation_residual();
        let ok = match r.backend() {
            Backend::Exact => r.is_zero(),
            Backend::Float => r.modulus_sq_f64().sqrt() <= tol,
        };
        if !ok {
            return Err(Error::InvalidInput(format!(
                "point does not satisfy z^2 - z - xy = 0 (residual {r})"
            )));
        }
        Ok(p)
    }

    pub fn new_unchecked(x: Scalar, y: Scalar, z: Scalar) -> DanielewskiPoint {
        DanielewskiPoint { x, y, z }
    }

    /// The n-th point (n, 0, 1) of the standard tame set.
    pub fn tame_point(n: i64, backend: Backend) -> DanielewskiPoint {
        DanielewskiPoint::new_unchecked(
            Scalar::from_int(n, backend),
            Scalar::zero(backend),
            Scalar::one(backend),
        )
    }

    pub fn backend(&self) -> Backend {
        self.x.backend()
    }

    /// z^2 - z - x y
    pub fn relation_residual(&self) -> Scalar {
        self.z
            .mul(&self.z)
            .sub(&self.z)
            .sub(&self.x.mul(&self.y))
    }

    pub fn dist_f64(&self, rhs: &DanielewskiPoint) -> f64 {
        self.x
            .dist_f64(&rhs.x)
            .max(self.y.dist_f64(&rhs.y))
            .max(self.z.dist_f64(&rhs.z))
    }
}

impl std::fmt::Display for DanielewskiPoint {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}, {}, {})", self.x, self.y, self.z)
    }
}

/// Flow of y d/dz + (2z - 1) d/dx:
/// (x, y, z) -> (x + t(2z - 1) + t^2 y, y, z + t y).
pub fn flow_phi(t: &Scalar, p: &DanielewskiPoint) -> Result<DanielewskiPoint> {
    if t.backend() != p.backend() {
        return Err(Error::BackendMismatch("flow_phi"));
    }
    let two_z_m1 = p.z.add(&p.z).sub(&Scalar::one(p.backend()));
    Ok(DanielewskiPoint::new_unchecked(
        p.x.add(&t.mul(&two_z_m1)).add(&t.mul(t).mul(&p.y)),
        p.y.clone(),
        p.z.add(&t.mul(&p.y)),
    ))
}

/// Flow of x d/dz + (2z - 1) d/dy:
/// (x, y, z) -> (x, y + t(2z - 1) + t^2 x, z + t x).
pub fn flow_psi(t: &Scalar, p: &DanielewskiPoint) -> Result<DanielewskiPoint> {
    if t.backend() != p.backend() {
        return Err(Error::BackendMismatch("flow_psi"));
    }
    let two_z_m1 = p.z.add(&p.z).sub(&Scalar::one(p.backend()));
    Ok(DanielewskiPoint::new_unchecked(
        p.x.clone(),
        p.y.add(&t.mul(&two_z_m1)).add(&t.mul(t).mul(&p.x)),
        p.z.add(&t.mul(&p.x)),
    ))
}

/// Hyperbolic flow (x, y, z) -> (e^{2t} x, e^{-2t} y, z); float backend
/// except at t = 0.
pub fn flow_scale(t: &Scalar, p: &DanielewskiPoint) -> Result<DanielewskiPoint> {
    if t.backend() != p.backend() {
        return Err(Error::BackendMismatch("flow_scale"));
    }
    if t.is_zero() {
        return Ok(p.clone());
    }
    let e2 = t.add(t).exp()?;
    Ok(DanielewskiPoint::new_unchecked(
        p.x.mul(&e2),
        p.y.div(&e2)?,
        p.z.clone(),
    ))
}

/// f(n) solving l = n + f (2n+1) + f^2 (n+1), root chosen by the shared
/// branch rule. The discriminant 1 + 4 l (n+1) is positive; in the exact
/// backend it must additionally be a perfect square.
pub fn solve_step_f(n: i64, l: i64, backend: Backend) -> Result<Scalar> {
    solve_quadratic_min_modulus(
        &Scalar::from_int(n + 1, backend),
        &Scalar::from_int(2 * n + 1, backend),
        &Scalar::from_int(n - l, backend),
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum DaniGenerator {
    Phi,
    Psi,
    Scale,
}

/// One step: a polynomial shear in a kernel coordinate of the generator.
#[derive(Debug, Clone)]
pub struct DaniStep {
    pub gen: DaniGenerator,
    pub coordinate: RingElem,
    pub poly: NewtonPoly,
    pub source: Option<InterpTable>,
}

impl DaniStep {
    pub fn value_at(&self, p: &DanielewskiPoint) -> Result<Scalar> {
        let coord = self
            .coordinate
            .eval_scalar(&[p.x.clone(), p.y.clone(), p.z.clone()])?;
        Ok(self.poly.eval(&coord))
    }

    pub fn apply(&self, p: &DanielewskiPoint) -> Result<DanielewskiPoint> {
        let t = self.value_at(p)?;
        match self.gen {
            DaniGenerator::Phi => flow_phi(&t, p),
            DaniGenerator::Psi => flow_psi(&t, p),
            DaniGenerator::Scale => flow_scale(&t, p),
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct DaniProgram {
    pub steps: Vec<DaniStep>,
}

#[derive(Debug, Clone)]
pub struct DaniRun {
    pub end: DanielewskiPoint,
    pub trace: Vec<DanielewskiPoint>,
}

impl DaniProgram {
    pub fn apply(&self, start: &DanielewskiPoint) -> Result<DaniRun> {
        let mut trace = Vec::with_capacity(self.steps.len() + 1);
        trace.push(start.clone());
        let mut current = start.clone();
        for step in &self.steps {
            current = step.apply(&current)?;
            trace.push(current.clone());
        }
        Ok(DaniRun {
            end: current,
            trace,
        })
    }

    /// Symbolic proof that each step's coordinate lies in the kernel of its
    /// generator field.
    pub fn kernel_certificates(&self) -> Vec<Certificate> {
        let ring = dani_ring();
        self.steps
            .iter()
            .enumerate()
            .map(|(i, step)| {
                let field = match step.gen {
                    DaniGenerator::Phi => dani_field_phi(&ring),
                    DaniGenerator::Psi => dani_field_psi(&ring),
                    DaniGenerator::Scale => crate::vector_field::dani_field_scale(&ring),
                };
                let name = format!("step {i}: {:?} annihilates {}", step.gen, step.coordinate);
                match field.apply(&step.coordinate) {
                    Ok(r) if r.is_zero() => Certificate::pass(name, "in the kernel"),
                    Ok(r) => Certificate::fail(name, format!("residual {r}")),
                    Err(e) => Certificate::fail(name, e.to_string()),
                }
            })
            .collect()
    }
}

pub(crate) fn coordinate_x() -> RingElem {
    dani_ring().var("x").unwrap()
}

pub(crate) fn coordinate_y_minus_1() -> RingElem {
    let ring = dani_ring();
    ring.var("y").unwrap().sub(&ring.int(1))
}

/// g(l) = (1 - (n+1)(1 + f)) / l, the closing shear value.
pub(crate) fn solve_step_g(n: i64, l: i64, f: &Scalar) -> Result<Scalar> {
    let backend = f.backend();
    let one = Scalar::one(backend);
    one.sub(&Scalar::from_int(n + 1, backend).mul(&one.add(f)))
        .div(&Scalar::from_int(l, backend))
}

pub fn build_dani_program(table: &InjectionTable, backend: Backend) -> Result<DaniProgram> {
    build_dani_program_with(table, backend, None)
}

pub fn build_dani_program_with(
    table: &InjectionTable,
    backend: Backend,
    perturb: Option<usize>,
) -> Result<DaniProgram> {
    let mut f_nodes = Vec::new();
    let mut f_values = Vec::new();
    let mut g_nodes = Vec::new();
    let mut g_values = Vec::new();
    for (i, &(n, l)) in table.rows().iter().enumerate() {
        let f = solve_step_f(n, l, backend)?;
        f_nodes.push(Scalar::from_int(n, backend));
        f_values.push(if perturb == Some(i) {
            perturb_value(&f)
        } else {
            f.clone()
        });
        g_nodes.push(Scalar::from_int(l, backend));
        g_values.push(solve_step_g(n, l, &f)?);
    }
    assemble_dani_program(backend, f_nodes, f_values, g_nodes, g_values)
}

pub(crate) fn assemble_dani_program(
    backend: Backend,
    f_nodes: Vec<Scalar>,
    f_values: Vec<Scalar>,
    g_nodes: Vec<Scalar>,
    g_values: Vec<Scalar>,
) -> Result<DaniProgram> {
    let step1 = DaniStep {
        gen: DaniGenerator::Psi,
        coordinate: coordinate_x(),
        poly: NewtonPoly::constant(Scalar::one(backend)),
        source: None,
    };
    let f_table = InterpTable::new(f_nodes, f_values, 1e-9)?;
    let step2 = DaniStep {
        gen: DaniGenerator::Phi,
        coordinate: coordinate_y_minus_1(),
        poly: crate::interp::newton_build(&f_table)?,
        source: Some(f_table),
    };
    let g_table = InterpTable::new(g_nodes, g_values, 1e-9)?;
    let step3 = DaniStep {
        gen: DaniGenerator::Psi,
        coordinate: coordinate_x(),
        poly: crate::interp::newton_build(&g_table)?,
        source: Some(g_table),
    };
    Ok(DaniProgram {
        steps: vec![step1, step2, step3],
    })
}

/// Endpoint (l, 0, 1), surface relation along the whole trace, and the
/// forced y = 0 at the end, per row.
pub fn verify_dani_program(
    table: &InjectionTable,
    prog: &DaniProgram,
    cfg: &SuiteConfig,
) -> Report {
    let start = std::time::Instant::now();
    let mut report = Report::new("verify-dani", cfg.clone());
    let backend = cfg.backend;

    let cases: Vec<CaseRecord> = table
        .rows()
        .par_iter()
        .enumerate()
        .map(|(i, &(n, l))| {
            let label = format!("{n} -> {l}");
            let point = DanielewskiPoint::tame_point(n, backend);
            let target = DanielewskiPoint::tame_point(l, backend);
            match prog.apply(&point) {
                Err(e) => CaseRecord::fail(
                    i,
                    label,
                    Residual::ExactMismatch,
                    format!("program application failed: {e}"),
                ),
                Ok(run) => {
                    let end_dist = run.end.dist_f64(&target);
                    let y_dist = run.end.y.dist_f64(&Scalar::zero(backend));
                    let rel_ok = run.trace.iter().all(|p| {
                        let r = p.relation_residual();
                        match backend {
                            Backend::Exact => r.is_zero(),
                            Backend::Float => r.modulus_sq_f64().sqrt() <= cfg.tol,
                        }
                    });
                    let end_ok = match backend {
                        Backend::Exact => run.end == target,
                        Backend::Float => end_dist <= cfg.tol && y_dist <= cfg.tol,
                    };
                    let residual = match backend {
                        Backend::Exact => {
                            if end_ok && rel_ok {
                                Residual::ExactZero
                            } else {
                                Residual::ExactMismatch
                            }
                        }
                        Backend::Float => Residual::Float(end_dist),
                    };
                    if end_ok && rel_ok {
                        CaseRecord::pass(i, label, residual)
                    } else {
                        CaseRecord::fail(
                            i,
                            label,
                            residual,
                            format!(
                                "endpoint {} (target {}), relation ok: {rel_ok}",
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
    for cert in prog.kernel_certificates() {
        report.push_certificate(&cert);
    }
    for step in &prog.steps {
        if let Some(t) = &step.source {
            report.attach_table(format!("{:?}-shear", step.gen), t.clone());
        }
    }
    report.finalize(start.elapsed().as_secs_f64());
    report
}

/// Symbolic certificates that the three fields annihilate the defining
/// polynomial of the surface.
pub fn field_annihilates_relation() -> Vec<Certificate> {
    dani_field_checks()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn exact_point(x: i64, z: i64) -> DanielewskiPoint {
        // pick y from the relation: y = (z^2 - z) / x
        let y = Scalar::exact_ratio(z * z - z, x);
        DanielewskiPoint::new(Scalar::exact_int(x), y, Scalar::exact_int(z), 1e-9).unwrap()
    }

    #[test]
    fn point_invariant_enforced() {
        assert!(DanielewskiPoint::new(
            Scalar::exact_int(1),
            Scalar::exact_int(1),
            Scalar::exact_int(1),
            1e-9
        )
        .is_err());
        assert!(DanielewskiPoint::new(
            Scalar::exact_int(2),
            Scalar::exact_int(1),
            Scalar::exact_int(2),
            1e-9
        )
        .is_ok());
    }

    #[test]
    fn psi_time_one_on_tame_points() {
        for n in [1i64, 2, 5, 100] {
            let p = DanielewskiPoint::tame_point(n, Backend::Exact);
            let q = flow_psi(&Scalar::exact_int(1), &p).unwrap();
            assert_eq!(
                q,
                DanielewskiPoint::new_unchecked(
                    Scalar::exact_int(n),
                    Scalar::exact_int(n + 1),
                    Scalar::exact_int(n + 1),
                )
            );
        }
    }

    #[test]
    fn phi_time_one_shifts_tame_points() {
        let p = DanielewskiPoint::tame_point(4, Backend::Exact);
        let q = flow_phi(&Scalar::exact_int(1), &p).unwrap();
        assert_eq!(q, DanielewskiPoint::tame_point(5, Backend::Exact));
    }

    #[test]
    fn time_zero_flows_fix_points() {
        let p = exact_point(3, 2);
        let zero = Scalar::exact_int(0);
        assert_eq!(flow_phi(&zero, &p).unwrap(), p);
        assert_eq!(flow_psi(&zero, &p).unwrap(), p);
        assert_eq!(flow_scale(&zero, &p).unwrap(), p);
    }

    #[test]
    fn scale_flow_float_only_and_fixes_y_zero_line() {
        let p = exact_point(3, 2);
        assert!(matches!(
            flow_scale(&Scalar::exact_int(1), &p),
            Err(Error::ExactUnavailable(_))
        ));
        let q = DanielewskiPoint::new(
            Scalar::float(1.0, 0.0),
            Scalar::float(0.0, 0.0),
            Scalar::float(1.0, 0.0),
            1e-9,
        )
        .unwrap();
        let t = Scalar::float(0.37, 0.0);
        let out = flow_scale(&t, &q).unwrap();
        assert!(out.y.is_zero());
        assert!(out.z.approx_eq(&Scalar::float(1.0, 0.0), 0.0));
        assert!(out
            .x
            .approx_eq(&Scalar::float((2.0f64 * 0.37).exp(), 0.0), 1e-12));
    }

    #[test]
    fn step_f_examples() {
        for n in 1..10 {
            assert!(solve_step_f(n, n, Backend::Exact).unwrap().is_zero());
        }
        assert_eq!(
            solve_step_f(1, 3, Backend::Exact).unwrap(),
            Scalar::exact_ratio(1, 2)
        );
        // (2, 1): roots of 3f^2 + 5f + 1, smaller modulus ~ -0.232408
        let f = solve_step_f(2, 1, Backend::Float).unwrap();
        assert!((f.to_c64().re + 0.232_408).abs() < 1e-5);
        // back-substitution residual
        let n = 2.0;
        let l = n + f.to_c64().re * (2.0 * n + 1.0) + f.to_c64().re.powi(2) * (n + 1.0);
        assert!((l - 1.0).abs() <= 1e-12);
        // irrational root is unavailable exactly
        assert!(matches!(
            solve_step_f(2, 1, Backend::Exact),
            Err(Error::ExactUnavailable(_))
        ));
    }

    #[test]
    fn walkthrough_1_to_3_is_exact() {
        let t = InjectionTable::new(vec![(1, 3)]).unwrap();
        let prog = build_dani_program(&t, Backend::Exact).unwrap();
        let run = prog
            .apply(&DanielewskiPoint::tame_point(1, Backend::Exact))
            .unwrap();
        assert_eq!(
            run.trace[1],
            DanielewskiPoint::new_unchecked(
                Scalar::exact_int(1),
                Scalar::exact_int(2),
                Scalar::exact_int(2),
            )
        );
        assert_eq!(
            run.trace[2],
            DanielewskiPoint::new_unchecked(
                Scalar::exact_int(3),
                Scalar::exact_int(2),
                Scalar::exact_int(3),
            )
        );
        assert_eq!(run.end, DanielewskiPoint::tame_point(3, Backend::Exact));
        // g(3) = -2/3
        let g = prog.steps[2].poly.eval(&Scalar::exact_int(3));
        assert_eq!(g, Scalar::exact_ratio(-2, 3));
    }

    #[test]
    fn identity_table_program_fixes_points() {
        let t = InjectionTable::identity(&[1, 2, 3, 4]).unwrap();
        let prog = build_dani_program(&t, Backend::Exact).unwrap();
        let report = verify_dani_program(&t, &prog, &SuiteConfig::exact());
        assert!(report.all_pass(), "{report:?}");
        // g(n) = -1 on the identity table
        for n in 1..=4 {
            assert_eq!(
                prog.steps[2].poly.eval(&Scalar::exact_int(n)),
                Scalar::exact_int(-1)
            );
        }
    }

    #[test]
    fn swap_table_verifies_float() {
        let t = InjectionTable::new(vec![(1, 2), (2, 1)]).unwrap();
        let prog = build_dani_program(&t, Backend::Float).unwrap();
        let cfg = SuiteConfig::float(1e-9);
        let report = verify_dani_program(&t, &prog, &cfg);
        assert!(report.all_pass(), "{report:?}");
    }

    #[test]
    fn corrupted_g_fails_only_affected_row() {
        let t = InjectionTable::new(vec![(1, 2), (2, 3), (3, 1)]).unwrap();
        let mut prog = build_dani_program(&t, Backend::Float).unwrap();
        // corrupt the g node of row 1 by rebuilding its table with a bumped value
        let src = prog.steps[2].source.clone().unwrap();
        let mut vals = src.values.clone();
        vals[1] = perturb_value(&vals[1]);
        let bad = InterpTable::new(src.nodes.clone(), vals, 1e-9).unwrap();
        prog.steps[2].poly = crate::interp::newton_build(&bad).unwrap();
        let cfg = SuiteConfig::float(1e-9);
        let report = verify_dani_program(&t, &prog, &cfg);
        let rows: Vec<bool> = report.cases.iter().take(3).map(|c| c.pass).collect();
        assert_eq!(rows, vec![true, false, true], "{report:?}");
    }

    #[test]
    fn annihilation_certificates() {
        assert!(field_annihilates_relation().iter().all(|c| c.pass));
    }

    proptest! {
        #[test]
        fn flows_preserve_the_relation_exactly(
            tn in -9i64..10, td in 1i64..10,
            x in 1i64..20, z in -10i64..10,
        ) {
            let p = exact_point(x, z);
            let t = Scalar::exact_ratio(tn, td);
            for q in [flow_phi(&t, &p).unwrap(), flow_psi(&t, &p).unwrap()] {
                prop_assert!(q.relation_residual().is_zero());
            }
        }

        #[test]
        fn flow_group_laws(
            sn in -9i64..10, tn in -9i64..10,
            x in 1i64..20, z in -10i64..10,
        ) {
            let p = exact_point(x, z);
            let s = Scalar::exact_int(sn);
            let t = Scalar::exact_int(tn);
            let st = Scalar::exact_int(sn + tn);
            prop_assert_eq!(
                flow_phi(&s, &flow_phi(&t, &p).unwrap()).unwrap(),
                flow_phi(&st, &p).unwrap()
            );
            prop_assert_eq!(
                flow_psi(&s, &flow_psi(&t, &p).unwrap()).unwrap(),
                flow_psi(&st, &p).unwrap()
            );
        }

        #[test]
        fn scale_flow_relation_residual_small(
            t in -1.0f64..1.0, x in 0.5f64..3.0, z in -2.0f64..2.0,
        ) {
            let y = (z * z - z) / x;
            let p = DanielewskiPoint::new(
                Scalar::float(x, 0.0),
                Scalar::float(y, 0.0),
                Scalar::float(z, 0.0),
                1e-9,
            ).unwrap();
            let q = flow_scale(&Scalar::float(t, 0.0), &p).unwrap();
            prop_assert!(q.relation_residual().modulus_sq_f64().sqrt() <= 1e-12);
        }

        #[test]
        fn step_f_back_substitution(n in 1i64..50, l in 1i64..50) {
            let f = solve_step_f(n, l, Backend::Float).unwrap().to_c64();
            let lhs = n as f64 + f.re * (2 * n + 1) as f64 + (f * f).re * (n + 1) as f64;
            prop_assert!((lhs - l as f64).abs() <= 1e-9);
        }
    }
}
