//! The four-step automorphism program sending [[1,n],[0,1]] to
//! [[1,l(n)],[0,1]] for a finite injective table: a W-shear by b+1, a
//! V-shear interpolating f at c = n+1, a diagonal scale by mu(n) read off a
//! U-kernel coordinate, and a closing W-shear interpolating g at b = l(n).

use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::flows::{
    AutomorphismProgram, AutomorphismStep, Generator, ScaleData, ScaleFunction, ShearFunction,
};
use crate::interp::{newton_build, InterpTable, NewtonPoly};
use crate::mat2::{mat_mul, Mat2, SL2Element};
use crate::report::{CaseRecord, Report, Residual, SuiteConfig};
use crate::ring::RingElem;
use crate::scalar::{Backend, GaussRat, Scalar};
use crate::vector_field::sl2_ring;

/// A finite injective assignment n -> l(n) on positive integers.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InjectionTable {
    pairs: Vec<(i64, i64)>,
}

impl InjectionTable {
    pub fn new(pairs: Vec<(i64, i64)>) -> Result<InjectionTable> {
        if pairs.is_empty() {
            return Err(Error::InvalidTable("table is empty".into()));
        }
        for &(n, l) in &pairs {
            if n < 1 || l < 1 {
                return Err(Error::InvalidTable(format!(
                    "entries must be >= 1, got ({n}, {l})"
                )));
            }
        }
        for i in 0..pairs.len() {
            for j in (i + 1)..pairs.len() {
                if pairs[i].0 == pairs[j].0 {
                    return Err(Error::InvalidTable(format!(
                        "duplicate source index {}",
                        pairs[i].0
                    )));
                }
                if pairs[i].1 == pairs[j].1 {
                    return Err(Error::InvalidTable(format!(
                        "duplicate target index {} (not injective)",
                        pairs[i].1
                    )));
                }
            }
        }
        Ok(InjectionTable { pairs })
    }

    pub fn identity(indices: &[i64]) -> Result<InjectionTable> {
        InjectionTable::new(indices.iter().map(|&n| (n, n)).collect())
    }

    pub fn rows(&self) -> &[(i64, i64)] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }
}

/// f(n+1) = (n - l) / ((1+n) l - n^2 - n - 1), the interpolation value of
/// the V-shear at the n-th point. The denominator vanishes only if (n+1)
/// divides n^2 + n + 1, which forces n = 0 and so never happens here.
pub fn solve_f_value(n: i64, l: i64, backend: Backend) -> Result<Scalar> {
    let den = (1 + n) * l - n * n - n - 1;
    if den == 0 {
        return Err(Error::InternalContradiction(format!(
            "f-denominator vanished at (n, l) = ({n}, {l})"
        )));
    }
    let exact = GaussRat::from_ratio(n - l, den);
    Ok(match backend {
        Backend::Exact => Scalar::Exact(exact),
        Backend::Float => Scalar::Float(exact.to_c64()),
    })
}

/// mu(n) = f(n+1) (1 + n) + 1 = 1 / (n^2 - l n + n - l + 1).
fn mu_value(n: i64, l: i64) -> Result<GaussRat> {
    let den = n * n - l * n + n - l + 1;
    if den == 0 {
        return Err(Error::InternalContradiction(format!(
            "mu vanished at (n, l) = ({n}, {l})"
        )));
    }
    Ok(GaussRat::from_ratio(1, den))
}

/// Smallest theta in 0..=64 making u = bd + theta*bc injective on the list.
pub fn choose_separating_theta(points: &[(Scalar, Scalar)], tol: f64) -> Result<u64> {
    const LIMIT: u64 = 64;
    'theta: for theta in 0..=LIMIT {
        let mut us: Vec<Scalar> = Vec::with_capacity(points.len());
        for (bc, bd) in points {
            let th = Scalar::from_int(theta as i64, bc.backend());
            us.push(bd.add(&th.mul(bc)));
        }
        for i in 0..us.len() {
            for j in (i + 1)..us.len() {
                let clash = match us[i].backend() {
                    Backend::Exact => us[i] == us[j],
                    Backend::Float => us[i].dist_f64(&us[j]) <= 10.0 * tol,
                };
                if clash {
                    continue 'theta;
                }
            }
        }
        return Ok(theta);
    }
    Err(Error::ThetaExhausted(LIMIT as usize + 1))
}

/// Exact per-row construction data.
pub(crate) struct RowData {
    pub(crate) n: i64,
    pub(crate) l: i64,
    pub(crate) f: GaussRat,
    pub(crate) mu: GaussRat,
    pub(crate) g: GaussRat,
    pub(crate) bc: GaussRat,
    pub(crate) bd: GaussRat,
}

pub(crate) fn solve_rows(table: &InjectionTable) -> Result<Vec<RowData>> {
    table
        .rows()
        .iter()
        .map(|&(n, l)| {
            let f = solve_f_value(n, l, Backend::Exact)?
                .as_exact()
                .cloned()
                .expect("exact by construction");
            let mu = mu_value(n, l)?;
            // g at b = l is -(n+1) mu(n)
            let g = mu.mul(&GaussRat::from_int(-(n + 1)));
            // entries of P(n): b = l mu, c = n + 1, d = n^2 + n + 1
            let b = mu.mul(&GaussRat::from_int(l));
            let bc = b.mul(&GaussRat::from_int(n + 1));
            let bd = b.mul(&GaussRat::from_int(n * n + n + 1));
            Ok(RowData {
                n,
                l,
                f,
                mu,
                g,
                bc,
                bd,
            })
        })
        .collect()
}

pub(crate) fn to_backend(g: &GaussRat, backend: Backend) -> Scalar {
    match backend {
        Backend::Exact => Scalar::Exact(g.clone()),
        Backend::Float => Scalar::Float(g.to_c64()),
    }
}

fn coordinate_b() -> RingElem {
    sl2_ring().var("b").unwrap()
}

fn coordinate_c() -> RingElem {
    sl2_ring().var("c").unwrap()
}

fn coordinate_u(theta: u64) -> RingElem {
    let ring = sl2_ring();
    let b = ring.var("b").unwrap();
    let c = ring.var("c").unwrap();
    let d = ring.var("d").unwrap();
    b.mul(&d)
        .add(&b.mul(&c).scale(&GaussRat::from_int(theta as i64)))
}

/// Bumps one interpolation value; the fault injection behind the negative
/// controls (exit-1 paths) of the verification suites.
pub fn perturb_value(v: &Scalar) -> Scalar {
    match v.backend() {
        Backend::Exact => v.add(&Scalar::exact_int(1)),
        Backend::Float => v.add(&Scalar::float(1e-3, 0.0)),
    }
}

pub fn build_sl2_program(table: &InjectionTable, backend: Backend) -> Result<AutomorphismProgram> {
    build_sl2_program_with(table, backend, None)
}

/// `perturb` bumps the f-interpolation value of that row index, leaving the
/// rest of the construction untouched.
pub fn build_sl2_program_with(
    table: &InjectionTable,
    backend: Backend,
    perturb: Option<usize>,
) -> Result<AutomorphismProgram> {
    let rows = solve_rows(table)?;
    if let Some(p) = perturb {
        if p >= rows.len() {
            return Err(Error::InvalidInput(format!(
                "perturb index {p} out of range"
            )));
        }
    }

    // V-shear: nodes c = n + 1, values f (perturbed copy if requested)
    let f_nodes: Vec<Scalar> = rows
        .iter()
        .map(|r| Scalar::from_int(r.n + 1, backend))
        .collect();
    let f_values: Vec<Scalar> = rows
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let v = to_backend(&r.f, backend);
            if perturb == Some(i) {
                perturb_value(&v)
            } else {
                v
            }
        })
        .collect();

    // scale: separating coordinate u = bd + theta*bc and mu values
    let theta_points: Vec<(Scalar, Scalar)> = rows
        .iter()
        .map(|r| (to_backend(&r.bc, backend), to_backend(&r.bd, backend)))
        .collect();
    let theta = choose_separating_theta(&theta_points, 1e-9)?;
    let u_values: Vec<Scalar> = rows
        .iter()
        .map(|r| {
            let u = r.bd.add(&r.bc.mul(&GaussRat::from_int(theta as i64)));
            to_backend(&u, backend)
        })
        .collect();
    let mu_values: Vec<Scalar> = rows.iter().map(|r| to_backend(&r.mu, backend)).collect();

    // closing W-shear: nodes b = l(n), values g
    let g_nodes: Vec<Scalar> = rows
        .iter()
        .map(|r| Scalar::from_int(r.l, backend))
        .collect();
    let g_values: Vec<Scalar> = rows.iter().map(|r| to_backend(&r.g, backend)).collect();

    assemble_program(
        backend, f_nodes, f_values, theta, u_values, mu_values, g_nodes, g_values,
    )
}

/// Shared assembly for the plain and quotient-descended variants.
#[allow(clippy::too_many_arguments)]
pub(crate) fn assemble_program(
    backend: Backend,
    f_nodes: Vec<Scalar>,
    f_values: Vec<Scalar>,
    theta: u64,
    u_values: Vec<Scalar>,
    mu_values: Vec<Scalar>,
    g_nodes: Vec<Scalar>,
    g_values: Vec<Scalar>,
) -> Result<AutomorphismProgram> {
    let one = Scalar::one(backend);

    let step1 = AutomorphismStep::Shear(ShearFunction::new(
        Generator::W,
        coordinate_b(),
        NewtonPoly::from_dense(vec![one.clone(), one.clone()]),
    ));

    let f_table = InterpTable::new(f_nodes, f_values, 1e-9)?;
    let step2 = AutomorphismStep::Shear(ShearFunction::interpolated(
        Generator::V,
        coordinate_c(),
        f_table,
    )?);

    let u_table = InterpTable::new(u_values.clone(), mu_values.clone(), 1e-9)?;
    let data = match backend {
        Backend::Exact => ScaleData::ExactValues(
            u_values.iter().cloned().zip(mu_values.iter().cloned()).collect(),
        ),
        Backend::Float => {
            let logs: Vec<Scalar> = mu_values
                .iter()
                .map(|mu| mu.ln())
                .collect::<Result<_>>()?;
            let h_table = InterpTable::new(u_values, logs, 1e-9)?;
            ScaleData::LogInterpolant(newton_build(&h_table)?)
        }
    };
    let step3 = AutomorphismStep::ScaleShear(ScaleFunction {
        coordinate: coordinate_u(theta),
        data,
        source: Some(u_table),
    });

    let g_table = InterpTable::new(g_nodes, g_values, 1e-9)?;
    let step4 = AutomorphismStep::Shear(ShearFunction::interpolated(
        Generator::W,
        coordinate_b(),
        g_table,
    )?);

    Ok(AutomorphismProgram::new(vec![step1, step2, step3, step4]))
}

/// Per-row re-derivation of P(n) by an explicit matrix product chain, plus
/// the two index-recovery identities bd/bc = n + 1/(n+1) and
/// 1/bd = 1/l - (n+1)/(n^2+n+1), all checked exactly in the exact backend.
pub fn index_recovery_certificate(table: &InjectionTable, cfg: &SuiteConfig) -> Result<Report> {
    let mut report = Report::new("index-recovery", cfg.clone());
    let rows = solve_rows(table)?;
    let backend = cfg.backend;

    let mut seen: Vec<(Scalar, Scalar)> = Vec::new();
    for (i, row) in rows.iter().enumerate() {
        // oracle route: P(n) from the literal matrix chain
        let start = Mat2::from_ints(1, row.n, 0, 1, backend);
        let w1 = Mat2::from_ints(1, 0, row.n + 1, 1, backend);
        let f = to_backend(&row.f, backend);
        let vf = Mat2::new(
            Scalar::one(backend),
            f,
            Scalar::zero(backend),
            Scalar::one(backend),
        )?;
        let p = mat_mul(&vf, &mat_mul(&w1, &start)?)?;

        let bc = p.b.mul(&p.c);
        let bd = p.b.mul(&p.d);

        // bd * (n+1) = bc * (n^2+n+1), multiplied out to avoid division
        let lhs = bd.mul(&Scalar::from_int(row.n + 1, backend));
        let rhs = bc.mul(&Scalar::from_int(row.n * row.n + row.n + 1, backend));
        // 1/bd = 1/l - (n+1)/(n^2+n+1)
        let inv_bd = bd.inv()?;
        let target = Scalar::from_int(row.l, backend).inv()?.sub(
            &Scalar::from_int(row.n + 1, backend)
                .div(&Scalar::from_int(row.n * row.n + row.n + 1, backend))?,
        );

        let (ok_ratio, ok_inv, residual) = match backend {
            Backend::Exact => (
                lhs == rhs,
                inv_bd == target,
                if lhs == rhs && inv_bd == target {
                    Residual::ExactZero
                } else {
                    Residual::ExactMismatch
                },
            ),
            Backend::Float => {
                let r1 = lhs.dist_f64(&rhs) / (1.0 + rhs.modulus_sq_f64().sqrt());
                let r2 = inv_bd.dist_f64(&target);
                (
                    r1 <= cfg.tol,
                    r2 <= cfg.tol,
                    Residual::Float(r1.max(r2)),
                )
            }
        };

        let distinct = !seen
            .iter()
            .any(|(pbc, pbd)| pbc == &bc && pbd == &bd);
        seen.push((bc, bd));

        let label = format!("recover n = {} from P(n)", row.n);
        if ok_ratio && ok_inv && distinct {
            report.push(CaseRecord::pass(i, label, residual));
        } else {
            report.push(CaseRecord::fail(
                i,
                label,
                residual,
                format!(
                    "ratio identity: {ok_ratio}, inverse identity: {ok_inv}, (bc,bd) distinct: {distinct}"
                ),
            ));
        }
    }
    report.finalize(0.0);
    Ok(report)
}

fn det_ok(m: &Mat2, backend: Backend, tol: f64) -> bool {
    match backend {
        Backend::Exact => m.det() == Scalar::exact_int(1),
        Backend::Float => m.det().approx_eq(&Scalar::float(1.0, 0.0), tol),
    }
}

/// Applies the program to every table point and checks the endpoint and the
/// determinant along the whole trace. Failures become report entries.
pub fn verify_sl2_program(
    table: &InjectionTable,
    prog: &AutomorphismProgram,
    cfg: &SuiteConfig,
) -> Report {
    let start = std::time::Instant::now();
    let mut report = Report::new("verify-sl2", cfg.clone());
    let backend = cfg.backend;

    let cases: Vec<CaseRecord> = table
        .rows()
        .par_iter()
        .enumerate()
        .map(|(i, &(n, l))| {
            let label = format!("{n} -> {l}");
            let point = SL2Element::upper_unipotent(n, backend);
            let target = Mat2::from_ints(1, l, 0, 1, backend);
            match prog.apply(&point) {
                Err(e) => CaseRecord::fail(
                    i,
                    label,
                    Residual::ExactMismatch,
                    format!("program application failed: {e}"),
                ),
                Ok(run) => {
                    let dist = run.end.matrix().dist_f64(&target);
                    let end_ok = match backend {
                        Backend::Exact => run.end.matrix() == &target,
                        Backend::Float => dist <= cfg.tol,
                    };
                    let dets_ok = run
                        .trace
                        .iter()
                        .all(|p| det_ok(p.matrix(), backend, cfg.tol));
                    let residual = match backend {
                        Backend::Exact => {
                            if end_ok {
                                Residual::ExactZero
                            } else {
                                Residual::ExactMismatch
                            }
                        }
                        Backend::Float => Residual::Float(dist),
                    };
                    if end_ok && dets_ok {
                        CaseRecord::pass(i, label, residual)
                    } else {
                        CaseRecord::fail(
                            i,
                            label,
                            residual,
                            format!(
                                "endpoint {} (target {}), det ok along trace: {dets_ok}",
                                run.end.matrix(),
                                target
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
        match step {
            AutomorphismStep::Shear(s) => {
                if let Some(t) = &s.source {
                    report.attach_table(format!("{:?}-shear", s.generator), t.clone());
                }
            }
            AutomorphismStep::ScaleShear(s) => {
                if let Some(t) = &s.source {
                    report.attach_table("U-scale (mu)", t.clone());
                }
            }
            AutomorphismStep::Basic { .. } => {}
        }
    }
    report.finalize(start.elapsed().as_secs_f64());
    report
}

/// Convenience used by f64 diagnostics.
pub fn scalar_to_f64(s: &Scalar) -> f64 {
    match s {
        Scalar::Exact(g) => g.modulus_sq().to_f64().unwrap_or(f64::NAN).sqrt(),
        Scalar::Float(c) => c.norm(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table(pairs: &[(i64, i64)]) -> InjectionTable {
        InjectionTable::new(pairs.to_vec()).unwrap()
    }

    #[test]
    fn table_invariants() {
        assert!(InjectionTable::new(vec![(1, 2), (2, 2)]).is_err());
        assert!(InjectionTable::new(vec![(1, 2), (1, 3)]).is_err());
        assert!(InjectionTable::new(vec![(0, 2)]).is_err());
        assert!(InjectionTable::new(vec![(1, 0)]).is_err());
        assert!(InjectionTable::new(vec![]).is_err());
        assert!(InjectionTable::new(vec![(1, 2), (2, 1)]).is_ok());
    }

    #[test]
    fn f_values() {
        assert_eq!(
            solve_f_value(1, 2, Backend::Exact).unwrap(),
            Scalar::exact_int(-1)
        );
        for n in 1..20 {
            assert!(solve_f_value(n, n, Backend::Exact).unwrap().is_zero());
        }
        assert_eq!(
            solve_f_value(2, 1, Backend::Exact).unwrap(),
            Scalar::exact_ratio(-1, 4)
        );
        // oracle: f must satisfy (n + f (1+n+n^2)) / (f (1+n) + 1) = l
        for (n, l) in [(1i64, 2i64), (2, 1), (3, 7), (5, 5), (4, 9)] {
            let f = solve_f_value(n, l, Backend::Exact).unwrap();
            let num = Scalar::exact_int(n).add(&f.mul(&Scalar::exact_int(1 + n + n * n)));
            let den = f.mul(&Scalar::exact_int(1 + n)).add(&Scalar::exact_int(1));
            assert_eq!(num.div(&den).unwrap(), Scalar::exact_int(l));
        }
    }

    #[test]
    fn theta_selection() {
        let pts = |raw: &[(i64, i64)]| {
            raw.iter()
                .map(|&(bc, bd)| (Scalar::exact_int(bc), Scalar::exact_int(bd)))
                .collect::<Vec<_>>()
        };
        // distinct bd: theta = 0
        assert_eq!(
            choose_separating_theta(&pts(&[(1, 5), (2, 4), (3, 3)]), 1e-9).unwrap(),
            0
        );
        // bd collides, bd + bc separates
        assert_eq!(
            choose_separating_theta(&pts(&[(1, 5), (2, 5)]), 1e-9).unwrap(),
            1
        );
        // bd collides and bd + bc collides; bd + 2 bc gives 7, 9, 8
        assert_eq!(
            choose_separating_theta(&pts(&[(1, 5), (2, 5), (2, 4)]), 1e-9).unwrap(),
            2
        );
        // a fully degenerate list exhausts the search
        assert!(matches!(
            choose_separating_theta(&pts(&[(1, 5), (1, 5)]), 1e-9),
            Err(Error::ThetaExhausted(_))
        ));
    }

    #[test]
    fn walkthrough_table_1_to_2() {
        // hand chain: P(1) = [[-1,-2],[2,3]], scale by diag(-1,-1) gives
        // [[1,2],[-2,-3]], then [[1,0],[2,1]] lands on [[1,2],[0,1]]
        let t = table(&[(1, 2)]);
        let prog = build_sl2_program(&t, Backend::Exact).unwrap();
        let run = prog
            .apply(&SL2Element::upper_unipotent(1, Backend::Exact))
            .unwrap();
        assert_eq!(
            run.trace[1].matrix(),
            &Mat2::from_ints(1, 1, 2, 3, Backend::Exact)
        );
        assert_eq!(
            run.trace[2].matrix(),
            &Mat2::from_ints(-1, -2, 2, 3, Backend::Exact)
        );
        assert_eq!(
            run.trace[3].matrix(),
            &Mat2::from_ints(1, 2, -2, -3, Backend::Exact)
        );
        assert_eq!(
            run.end.matrix(),
            &Mat2::from_ints(1, 2, 0, 1, Backend::Exact)
        );
    }

    #[test]
    fn identity_table_fixes_every_point() {
        let t = InjectionTable::identity(&[1, 2, 3, 4, 5]).unwrap();
        let prog = build_sl2_program(&t, Backend::Exact).unwrap();
        for n in 1..=5 {
            let run = prog
                .apply(&SL2Element::upper_unipotent(n, Backend::Exact))
                .unwrap();
            assert_eq!(
                run.end.matrix(),
                &Mat2::from_ints(1, n, 0, 1, Backend::Exact)
            );
        }
    }

    #[test]
    fn three_row_table_verifies() {
        let t = table(&[(1, 2), (2, 5), (3, 1)]);
        let prog = build_sl2_program(&t, Backend::Exact).unwrap();
        let report = verify_sl2_program(&t, &prog, &SuiteConfig::exact());
        assert!(report.all_pass(), "{report:?}");
    }

    #[test]
    fn float_backend_small_table() {
        let t = table(&[(1, 2), (2, 1)]);
        let prog = build_sl2_program(&t, Backend::Float).unwrap();
        let cfg = SuiteConfig::float(1e-9);
        let report = verify_sl2_program(&t, &prog, &cfg);
        assert!(report.all_pass(), "{report:?}");
    }

    #[test]
    fn index_recovery_examples() {
        // {1 -> 2}: bc = -4, bd = -6, bd/bc = 3/2 = 1 + 1/2
        let t = table(&[(1, 2)]);
        let rows = solve_rows(&t).unwrap();
        assert_eq!(to_backend(&rows[0].bc, Backend::Exact), Scalar::exact_int(-4));
        assert_eq!(to_backend(&rows[0].bd, Backend::Exact), Scalar::exact_int(-6));
        let r = index_recovery_certificate(&t, &SuiteConfig::exact()).unwrap();
        assert!(r.all_pass());

        let ident = InjectionTable::identity(&(1..=10).collect::<Vec<_>>()).unwrap();
        assert!(index_recovery_certificate(&ident, &SuiteConfig::exact())
            .unwrap()
            .all_pass());

        let t = table(&[(1, 3), (2, 1)]);
        assert!(index_recovery_certificate(&t, &SuiteConfig::exact())
            .unwrap()
            .all_pass());
    }

    #[test]
    fn perturbed_f_fails_only_the_affected_row() {
        let t = table(&[(1, 2), (2, 5), (3, 1)]);
        let prog = build_sl2_program_with(&t, Backend::Exact, Some(1)).unwrap();
        let report = verify_sl2_program(&t, &prog, &SuiteConfig::exact());
        let rows: Vec<bool> = report.cases.iter().take(3).map(|c| c.pass).collect();
        assert_eq!(rows, vec![true, false, true], "{report:?}");
    }

    #[test]
    fn mu_is_never_zero_on_valid_tables() {
        for n in 1..40 {
            for l in 1..40 {
                assert!(!mu_value(n, l).unwrap().is_zero());
            }
        }
    }
}
