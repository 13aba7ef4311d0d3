//! Left-multiplication flows on SL2(C), shear flows, and evaluable
//! automorphism programs.
//!
//! The three one-parameter groups are left multiplication by
//! [[1,t],[0,1]] (V), [[1,0],[t,1]] (W) and diag(e^-t, e^t) (U). A shear
//! replaces the time by a function constant along the flow lines, i.e. a
//! polynomial in a kernel coordinate of the generator; its time-1 flow is
//! then still a single left multiplication per point, which is how programs
//! are evaluated here. [`kernel_certify`] proves the constancy symbolically.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::interp::{InterpTable, NewtonPoly};
use crate::mat2::{Mat2, SL2Element};
use crate::report::Certificate;
use crate::ring::RingElem;
use crate::scalar::Scalar;
use crate::vector_field::{sl2_field_u, sl2_field_v, sl2_field_w, sl2_ring};

/// The three left-multiplication generators.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Generator {
    V,
    W,
    U,
}

/// Time-t flow of a basic generator.
///
/// For U in the exact backend only t = 0 is possible (the flow needs exp).
pub fn flow_basic(gen: Generator, t: &Scalar, m: &SL2Element) -> Result<SL2Element> {
    let mm = m.matrix();
    if t.backend() != m.backend() {
        return Err(Error::BackendMismatch("flow_basic"));
    }
    let out = match gen {
        Generator::V => Mat2 {
            a: mm.a.add(&t.mul(&mm.c)),
            b: mm.b.add(&t.mul(&mm.d)),
            c: mm.c.clone(),
            d: mm.d.clone(),
        },
        Generator::W => Mat2 {
            a: mm.a.clone(),
            b: mm.b.clone(),
            c: mm.c.add(&t.mul(&mm.a)),
            d: mm.d.add(&t.mul(&mm.b)),
        },
        Generator::U => {
            if t.is_zero() {
                return Ok(m.clone());
            }
            let ep = t.exp()?;
            let em = ep.inv()?;
            Mat2 {
                a: mm.a.mul(&em),
                b: mm.b.mul(&em),
                c: mm.c.mul(&ep),
                d: mm.d.mul(&ep),
            }
        }
    };
    Ok(SL2Element::new_unchecked(out))
}

/// A shear: a univariate polynomial evaluated in a kernel coordinate of the
/// generator. The coordinate is a symbolic polynomial in a, b, c, d.
#[derive(Debug, Clone)]
pub struct ShearFunction {
    pub generator: Generator,
    pub coordinate: RingElem,
    pub poly: NewtonPoly,
    /// Original node/value data when the polynomial came from interpolation,
    /// retained for report auditing.
    pub source: Option<InterpTable>,
}

impl ShearFunction {
    pub fn new(generator: Generator, coordinate: RingElem, poly: NewtonPoly) -> ShearFunction {
        ShearFunction {
            generator,
            coordinate,
            poly,
            source: None,
        }
    }

    pub fn interpolated(
        generator: Generator,
        coordinate: RingElem,
        table: InterpTable,
    ) -> Result<ShearFunction> {
        let poly = crate::interp::newton_build(&table)?;
        Ok(ShearFunction {
            generator,
            coordinate,
            poly,
            source: Some(table),
        })
    }

    /// The shear value at a point.
    pub fn value_at(&self, m: &SL2Element) -> Result<Scalar> {
        let mm = m.matrix();
        let coord = self.coordinate.eval_scalar(&[
            mm.a.clone(),
            mm.b.clone(),
            mm.c.clone(),
            mm.d.clone(),
        ])?;
        Ok(self.poly.eval(&coord))
    }
}

/// Time-1 flow of the shear: `flow_basic(gen, f(m), m)`.
pub fn flow_shear(shear: &ShearFunction, m: &SL2Element) -> Result<SL2Element> {
    let t = shear.value_at(m)?;
    flow_basic(shear.generator, &t, m)
}

/// The diagonal scaling step diag(mu^-1, mu) of a construction.
///
/// In the float backend it is realized holomorphically as
/// diag(e^-h, e^h) with h interpolating the principal log of the mu values
/// in a U-kernel coordinate. The exact backend cannot route through exp/log,
/// so it stores the finitely many (u, mu) pairs and applies the diagonal
/// matrix exactly; off-table points are an error there.
#[derive(Debug, Clone)]
pub enum ScaleData {
    ExactValues(Vec<(Scalar, Scalar)>),
    LogInterpolant(NewtonPoly),
}

#[derive(Debug, Clone)]
pub struct ScaleFunction {
    pub coordinate: RingElem,
    pub data: ScaleData,
    pub source: Option<InterpTable>,
}

impl ScaleFunction {
    fn mu_at(&self, m: &SL2Element) -> Result<Scalar> {
        let mm = m.matrix();
        let u = self.coordinate.eval_scalar(&[
            mm.a.clone(),
            mm.b.clone(),
            mm.c.clone(),
            mm.d.clone(),
        ])?;
        match &self.data {
            ScaleData::ExactValues(pairs) => pairs
                .iter()
                .find(|(node, _)| node == &u)
                .map(|(_, mu)| mu.clone())
                .ok_or_else(|| Error::ScaleOffTable(u.to_string())),
            ScaleData::LogInterpolant(h) => h.eval(&u).exp(),
        }
    }
}

/// Applies diag(mu^-1, mu) with mu resolved from the kernel coordinate.
pub fn flow_scale_shear(scale: &ScaleFunction, m: &SL2Element) -> Result<SL2Element> {
    let mu = scale.mu_at(m)?;
    let mu_inv = mu.inv()?;
    let mm = m.matrix();
    Ok(SL2Element::new_unchecked(Mat2 {
        a: mm.a.mul(&mu_inv),
        b: mm.b.mul(&mu_inv),
        c: mm.c.mul(&mu),
        d: mm.d.mul(&mu),
    }))
}

#[derive(Debug, Clone)]
pub enum AutomorphismStep {
    Basic { gen: Generator, time: Scalar },
    Shear(ShearFunction),
    ScaleShear(ScaleFunction),
}

impl AutomorphismStep {
    pub fn apply(&self, m: &SL2Element) -> Result<SL2Element> {
        match self {
            AutomorphismStep::Basic { gen, time } => flow_basic(*gen, time, m),
            AutomorphismStep::Shear(shear) => flow_shear(shear, m),
            AutomorphismStep::ScaleShear(scale) => flow_scale_shear(scale, m),
        }
    }

    pub fn label(&self) -> String {
        match self {
            AutomorphismStep::Basic { gen, time } => format!("basic {gen:?} (t = {time})"),
            AutomorphismStep::Shear(s) => format!("{:?}-shear in {}", s.generator, s.coordinate),
            AutomorphismStep::ScaleShear(s) => format!("U-scale in {}", s.coordinate),
        }
    }
}

/// An ordered list of steps, applied left to right.
#[derive(Debug, Clone, Default)]
pub struct AutomorphismProgram {
    pub steps: Vec<AutomorphismStep>,
}

/// The endpoint together with every intermediate point (trace[0] is the
/// start, trace[k] the point after step k).
#[derive(Debug, Clone)]
pub struct ProgramRun {
    pub end: SL2Element,
    pub trace: Vec<SL2Element>,
}

impl AutomorphismProgram {
    pub fn new(steps: Vec<AutomorphismStep>) -> AutomorphismProgram {
        AutomorphismProgram { steps }
    }

    pub fn apply(&self, start: &SL2Element) -> Result<ProgramRun> {
        let mut trace = Vec::with_capacity(self.steps.len() + 1);
        trace.push(start.clone());
        let mut current = start.clone();
        for step in &self.steps {
            current = step.apply(&current)?;
            trace.push(current.clone());
        }
        Ok(ProgramRun {
            end: current,
            trace,
        })
    }

    /// Kernel certificates for every shear/scale step of the program.
    pub fn kernel_certificates(&self) -> Vec<Certificate> {
        self.steps
            .iter()
            .enumerate()
            .filter_map(|(i, step)| match step {
                AutomorphismStep::Basic { .. } => None,
                AutomorphismStep::Shear(s) => Some(certify_coordinate(
                    s.generator,
                    &s.coordinate,
                    &format!("step {i}"),
                )),
                AutomorphismStep::ScaleShear(s) => Some(certify_coordinate(
                    Generator::U,
                    &s.coordinate,
                    &format!("step {i}"),
                )),
            })
            .collect()
    }
}

fn certify_coordinate(gen: Generator, coordinate: &RingElem, ctx: &str) -> Certificate {
    let ring = sl2_ring();
    let field = match gen {
        Generator::V => sl2_field_v(&ring),
        Generator::W => sl2_field_w(&ring),
        Generator::U => sl2_field_u(&ring),
    };
    let name = format!("{ctx}: {gen:?} annihilates {coordinate}");
    match field.apply(coordinate) {
        Ok(r) if r.is_zero() => Certificate::pass(name, "in the kernel"),
        Ok(r) => Certificate::fail(
            name,
            format!(
                "{gen:?}({coordinate}) = {r} (leading monomial {})",
                r.leading_monomial().unwrap_or_default()
            ),
        ),
        Err(e) => Certificate::fail(name, e.to_string()),
    }
}

/// Symbolic proof that the generator annihilates the shear's coordinate,
/// hence the shear is constant along flow lines.
pub fn kernel_certify(shear: &ShearFunction) -> Certificate {
    certify_coordinate(shear.generator, &shear.coordinate, "shear")
}
