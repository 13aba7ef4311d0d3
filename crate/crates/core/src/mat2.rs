//! 2x2 complex matrices and the det = 1 subgroup.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::{Backend, Scalar};

/// Row-major 2x2 matrix [[a, b], [c, d]] over one scalar backend.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Mat2 {
    pub a: Scalar,
    pub b: Scalar,
    pub c: Scalar,
    pub d: Scalar,
}

impl Mat2 {
    pub fn new(a: Scalar, b: Scalar, c: Scalar, d: Scalar) -> Result<Mat2> {
        let m = Mat2 { a, b, c, d };
        m.backend()?;
        Ok(m)
    }

    pub fn from_ints(a: i64, b: i64, c: i64, d: i64, backend: Backend) -> Mat2 {
        Mat2 {
            a: Scalar::from_int(a, backend),
            b: Scalar::from_int(b, backend),
            c: Scalar::from_int(c, backend),
            d: Scalar::from_int(d, backend),
        }
    }

    pub fn identity(backend: Backend) -> Mat2 {
        Mat2::from_ints(1, 0, 0, 1, backend)
    }

    pub fn backend(&self) -> Result<Backend> {
        let b = self.a.backend();
        if self.b.backend() != b || self.c.backend() != b || self.d.backend() != b {
            return Err(Error::BackendMismatch("Mat2 entries"));
        }
        Ok(b)
    }

    pub fn entries(&self) -> [&Scalar; 4] {
        [&self.a, &self.b, &self.c, &self.d]
    }

    pub fn det(&self) -> Scalar {
        self.a.mul(&self.d).sub(&self.b.mul(&self.c))
    }

    pub fn trace(&self) -> Scalar {
        self.a.add(&self.d)
    }

    pub fn neg(&self) -> Mat2 {
        Mat2 {
            a: self.a.neg(),
            b: self.b.neg(),
            c: self.c.neg(),
            d: self.d.neg(),
        }
    }

    pub fn approx_eq(&self, rhs: &Mat2, tol: f64) -> bool {
        self.a.approx_eq(&rhs.a, tol)
            && self.b.approx_eq(&rhs.b, tol)
            && self.c.approx_eq(&rhs.c, tol)
            && self.d.approx_eq(&rhs.d, tol)
    }

    /// Largest entrywise distance, 0.0 for exact equality.
    pub fn dist_f64(&self, rhs: &Mat2) -> f64 {
        self.a
            .dist_f64(&rhs.a)
            .max(self.b.dist_f64(&rhs.b))
            .max(self.c.dist_f64(&rhs.c))
            .max(self.d.dist_f64(&rhs.d))
    }
}

/// Standard 2x2 product; both operands must share a backend.
pub fn mat_mul(lhs: &Mat2, rhs: &Mat2) -> Result<Mat2> {
    if lhs.backend()? != rhs.backend()? {
        return Err(Error::BackendMismatch("mat_mul"));
    }
    Ok(Mat2 {
        a: lhs.a.mul(&rhs.a).add(&lhs.b.mul(&rhs.c)),
        b: lhs.a.mul(&rhs.b).add(&lhs.b.mul(&rhs.d)),
        c: lhs.c.mul(&rhs.a).add(&lhs.d.mul(&rhs.c)),
        d: lhs.c.mul(&rhs.b).add(&lhs.d.mul(&rhs.d)),
    })
}

pub fn mat_det(m: &Mat2) -> Scalar {
    m.det()
}

impl fmt::Display for Mat2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{}, {}], [{}, {}]]", self.a, self.b, self.c, self.d)
    }
}

/// A matrix carrying the det = 1 invariant.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SL2Element {
    m: Mat2,
}

impl SL2Element {
    /// Checks det = 1 (exactly in the exact backend, within `tol` in float).
    pub fn new(m: Mat2, tol: f64) -> Result<SL2Element> {
        let backend = m.backend()?;
        let det = m.det();
        let ok = match backend {
            Backend::Exact => det == Scalar::exact_int(1),
            Backend::Float => det.approx_eq(&Scalar::float(1.0, 0.0), tol),
        };
        if !ok {
            return Err(Error::InvalidInput(format!(
                "determinant {det} is not 1"
            )));
        }
        Ok(SL2Element { m })
    }

    /// For matrices that are det-1 by construction (e.g. flow outputs).
    pub fn new_unchecked(m: Mat2) -> SL2Element {
        SL2Element { m }
    }

    pub fn matrix(&self) -> &Mat2 {
        &self.m
    }

    pub fn backend(&self) -> Backend {
        self.m.backend().expect("uniform backend by construction")
    }

    /// [[1, n], [0, 1]], the n-th point of the standard tame set.
    pub fn upper_unipotent(n: i64, backend: Backend) -> SL2Element {
        SL2Element::new_unchecked(Mat2::from_ints(1, n, 0, 1, backend))
    }

    pub fn identity(backend: Backend) -> SL2Element {
        SL2Element::new_unchecked(Mat2::identity(backend))
    }

    pub fn inverse(&self) -> SL2Element {
        SL2Element::new_unchecked(Mat2 {
            a: self.m.d.clone(),
            b: self.m.b.neg(),
            c: self.m.c.neg(),
            d: self.m.a.clone(),
        })
    }

    pub fn neg(&self) -> SL2Element {
        SL2Element::new_unchecked(self.m.neg())
    }

    pub fn mul(&self, rhs: &SL2Element) -> Result<SL2Element> {
        Ok(SL2Element::new_unchecked(mat_mul(&self.m, &rhs.m)?))
    }
}

impl fmt::Display for SL2Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_absorbs() {
        let m = Mat2::from_ints(3, 1, 2, 1, Backend::Exact);
        let i = Mat2::identity(Backend::Exact);
        assert_eq!(mat_mul(&i, &m).unwrap(), m);
        assert_eq!(mat_mul(&m, &i).unwrap(), m);
    }

    #[test]
    fn unipotent_product() {
        let a = Mat2::from_ints(1, 1, 0, 1, Backend::Exact);
        let b = Mat2::from_ints(1, 0, 1, 1, Backend::Exact);
        assert_eq!(
            mat_mul(&a, &b).unwrap(),
            Mat2::from_ints(2, 1, 1, 1, Backend::Exact)
        );
    }

    #[test]
    fn last_step_of_the_n1_walkthrough() {
        // [[1,0],[2,1]] * [[1,2],[-2,-3]] = [[1,2],[0,1]]
        let a = Mat2::from_ints(1, 0, 2, 1, Backend::Exact);
        let b = Mat2::from_ints(1, 2, -2, -3, Backend::Exact);
        assert_eq!(
            mat_mul(&a, &b).unwrap(),
            Mat2::from_ints(1, 2, 0, 1, Backend::Exact)
        );
    }

    #[test]
    fn determinants() {
        assert_eq!(
            Mat2::identity(Backend::Exact).det(),
            Scalar::exact_int(1)
        );
        for n in [-7i64, 0, 3, 1_000_000] {
            let m = Mat2::from_ints(1, n, 0, 1, Backend::Exact);
            assert_eq!(m.det(), Scalar::exact_int(1));
        }
        assert_eq!(
            Mat2::from_ints(2, 1, 1, 1, Backend::Exact).det(),
            Scalar::exact_int(1)
        );
    }

    #[test]
    fn det_is_multiplicative() {
        let a = Mat2::from_ints(2, 3, -1, 4, Backend::Exact);
        let b = Mat2::from_ints(0, 5, 7, -2, Backend::Exact);
        let ab = mat_mul(&a, &b).unwrap();
        assert_eq!(ab.det(), a.det().mul(&b.det()));
    }

    #[test]
    fn backend_mismatch_is_an_error() {
        let a = Mat2::from_ints(1, 0, 0, 1, Backend::Exact);
        let b = Mat2::from_ints(1, 0, 0, 1, Backend::Float);
        assert!(matches!(mat_mul(&a, &b), Err(Error::BackendMismatch(_))));
    }

    #[test]
    fn sl2_invariant_enforced() {
        let bad = Mat2::from_ints(2, 0, 0, 2, Backend::Exact);
        assert!(SL2Element::new(bad, 1e-9).is_err());
        let good = Mat2::from_ints(2, 1, 1, 1, Backend::Exact);
        let e = SL2Element::new(good, 1e-9).unwrap();
        let inv = e.inverse();
        assert_eq!(
            e.mul(&inv).unwrap().matrix(),
            &Mat2::identity(Backend::Exact)
        );
    }
}
