//! Complex scalars in two backends: exact Gaussian rationals and `f64` complex.
//!
//! The exact backend never rounds; the float backend carries an explicit
//! tolerance chosen by the caller. Mixing backends in arithmetic is a usage
//! error: the binary operators panic on a mismatch, and every public
//! operation that can receive mixed operands checks first and returns
//! [`Error::BackendMismatch`]. Conversions between backends are explicit
//! ([`Scalar::to_float`]); there is no silent promotion.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex64;

use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::ser::SerializeSeq;
use serde::{Deserialize, Serialize, Serializer};

use crate::error::{Error, Result};

/// Which arithmetic a value lives in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Backend {
    Exact,
    Float,
}

/// An element of Q(i): a complex number with rational real and imaginary part.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GaussRat {
    pub re: BigRational,
    pub im: BigRational,
}

impl GaussRat {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        GaussRat { re, im }
    }

    pub fn from_int(v: i64) -> Self {
        GaussRat {
            re: BigRational::from_integer(BigInt::from(v)),
            im: BigRational::zero(),
        }
    }

    pub fn from_ratio(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        GaussRat {
            re: BigRational::new(BigInt::from(num), BigInt::from(den)),
            im: BigRational::zero(),
        }
    }

    pub fn from_real(re: BigRational) -> Self {
        GaussRat {
            re,
            im: BigRational::zero(),
        }
    }

    pub fn zero() -> Self {
        GaussRat::from_int(0)
    }

    pub fn one() -> Self {
        GaussRat::from_int(1)
    }

    pub fn i() -> Self {
        GaussRat {
            re: BigRational::zero(),
            im: BigRational::one(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn add(&self, rhs: &GaussRat) -> GaussRat {
        GaussRat {
            re: &self.re + &rhs.re,
            im: &self.im + &rhs.im,
        }
    }

    pub fn sub(&self, rhs: &GaussRat) -> GaussRat {
        GaussRat {
            re: &self.re - &rhs.re,
            im: &self.im - &rhs.im,
        }
    }

    pub fn mul(&self, rhs: &GaussRat) -> GaussRat {
        GaussRat {
            re: &self.re * &rhs.re - &self.im * &rhs.im,
            im: &self.re * &rhs.im + &self.im * &rhs.re,
        }
    }

    pub fn neg(&self) -> GaussRat {
        GaussRat {
            re: -self.re.clone(),
            im: -self.im.clone(),
        }
    }

    pub fn conj(&self) -> GaussRat {
        GaussRat {
            re: self.re.clone(),
            im: -self.im.clone(),
        }
    }

    /// |z|^2 as an exact rational.
    pub fn modulus_sq(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn inv(&self) -> Result<GaussRat> {
        let m = self.modulus_sq();
        if m.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let c = self.conj();
        Ok(GaussRat {
            re: c.re / m.clone(),
            im: c.im / m,
        })
    }

    pub fn div(&self, rhs: &GaussRat) -> Result<GaussRat> {
        Ok(self.mul(&rhs.inv()?))
    }

    pub fn scale_rational(&self, r: &BigRational) -> GaussRat {
        GaussRat {
            re: &self.re * r,
            im: &self.im * r,
        }
    }

    pub fn to_c64(&self) -> Complex64 {
        Complex64::new(
            self.re.to_f64().unwrap_or(f64::NAN),
            self.im.to_f64().unwrap_or(f64::NAN),
        )
    }

    /// A square root in Q(i) if one exists.
    pub fn sqrt_exact(&self) -> Option<GaussRat> {
        if self.is_zero() {
            return Some(GaussRat::zero());
        }
        if self.im.is_zero() {
            if self.re.is_negative() {
                let s = rational_sqrt(&(-self.re.clone()))?;
                return Some(GaussRat {
                    re: BigRational::zero(),
                    im: s,
                });
            }
            let s = rational_sqrt(&self.re)?;
            return Some(GaussRat::from_real(s));
        }
        // re + im*i = (s + t*i)^2 needs |z| rational, then s^2 = (re + |z|)/2.
        let m = rational_sqrt(&self.modulus_sq())?;
        let s_sq = (&self.re + &m) / BigRational::from_integer(BigInt::from(2));
        let s = rational_sqrt(&s_sq)?;
        if s.is_zero() {
            return None;
        }
        let t = &self.im / (BigRational::from_integer(BigInt::from(2)) * &s);
        let cand = GaussRat { re: s, im: t };
        if cand.mul(&cand) == *self {
            Some(cand)
        } else {
            None
        }
    }
}

/// Exact square root of a non-negative rational, if it is a rational square.
pub fn rational_sqrt(q: &BigRational) -> Option<BigRational> {
    if q.is_negative() {
        return None;
    }
    if q.is_zero() {
        return Some(BigRational::zero());
    }
    let num = q.numer();
    let den = q.denom();
    let sn = num.sqrt();
    if &(&sn * &sn) != num {
        return None;
    }
    let sd = den.sqrt();
    if &(&sd * &sd) != den {
        return None;
    }
    Some(BigRational::new(sn, sd))
}

impl fmt::Display for GaussRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            write!(f, "{}", self.re)
        } else if self.re.is_zero() {
            write!(f, "{}i", self.im)
        } else if self.im.is_negative() {
            write!(f, "{}{}i", self.re, self.im)
        } else {
            write!(f, "{}+{}i", self.re, self.im)
        }
    }
}

/// A complex scalar in one of the two backends.
#[derive(Debug, Clone, PartialEq)]
pub enum Scalar {
    Exact(GaussRat),
    Float(Complex64),
}

impl Scalar {
    pub fn backend(&self) -> Backend {
        match self {
            Scalar::Exact(_) => Backend::Exact,
            Scalar::Float(_) => Backend::Float,
        }
    }

    pub fn zero(backend: Backend) -> Scalar {
        Scalar::from_int(0, backend)
    }

    pub fn one(backend: Backend) -> Scalar {
        Scalar::from_int(1, backend)
    }

    pub fn from_int(v: i64, backend: Backend) -> Scalar {
        match backend {
            Backend::Exact => Scalar::Exact(GaussRat::from_int(v)),
            Backend::Float => Scalar::Float(Complex64::new(v as f64, 0.0)),
        }
    }

    pub fn exact_int(v: i64) -> Scalar {
        Scalar::Exact(GaussRat::from_int(v))
    }

    pub fn exact_ratio(num: i64, den: i64) -> Scalar {
        Scalar::Exact(GaussRat::from_ratio(num, den))
    }

    pub fn float(re: f64, im: f64) -> Scalar {
        Scalar::Float(Complex64::new(re, im))
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Exact(g) => g.is_zero(),
            Scalar::Float(c) => c.re == 0.0 && c.im == 0.0,
        }
    }

    fn expect_same(&self, rhs: &Scalar, ctx: &'static str) {
        assert!(
            self.backend() == rhs.backend(),
            "backend mismatch in {ctx}: {:?} vs {:?}",
            self.backend(),
            rhs.backend()
        );
    }

    pub fn add(&self, rhs: &Scalar) -> Scalar {
        self.expect_same(rhs, "add");
        match (self, rhs) {
            (Scalar::Exact(a), Scalar::Exact(b)) => Scalar::Exact(a.add(b)),
            (Scalar::Float(a), Scalar::Float(b)) => Scalar::Float(a + b),
            _ => unreachable!(),
        }
    }

    pub fn sub(&self, rhs: &Scalar) -> Scalar {
        self.expect_same(rhs, "sub");
        match (self, rhs) {
            (Scalar::Exact(a), Scalar::Exact(b)) => Scalar::Exact(a.sub(b)),
            (Scalar::Float(a), Scalar::Float(b)) => Scalar::Float(a - b),
            _ => unreachable!(),
        }
    }

    pub fn mul(&self, rhs: &Scalar) -> Scalar {
        self.expect_same(rhs, "mul");
        match (self, rhs) {
            (Scalar::Exact(a), Scalar::Exact(b)) => Scalar::Exact(a.mul(b)),
            (Scalar::Float(a), Scalar::Float(b)) => Scalar::Float(a * b),
            _ => unreachable!(),
        }
    }

    pub fn neg(&self) -> Scalar {
        match self {
            Scalar::Exact(a) => Scalar::Exact(a.neg()),
            Scalar::Float(a) => Scalar::Float(-a),
        }
    }

    pub fn inv(&self) -> Result<Scalar> {
        match self {
            Scalar::Exact(a) => Ok(Scalar::Exact(a.inv()?)),
            Scalar::Float(a) => {
                if a.re == 0.0 && a.im == 0.0 {
                    Err(Error::DivisionByZero)
                } else {
                    Ok(Scalar::Float(a.inv()))
                }
            }
        }
    }

    pub fn div(&self, rhs: &Scalar) -> Result<Scalar> {
        self.expect_same(rhs, "div");
        Ok(self.mul(&rhs.inv()?))
    }

    /// |z|^2 as f64 (exact values go through rationals first).
    pub fn modulus_sq_f64(&self) -> f64 {
        match self {
            Scalar::Exact(g) => g.modulus_sq().to_f64().unwrap_or(f64::NAN),
            Scalar::Float(c) => c.norm_sqr(),
        }
    }

    /// Explicit conversion to the float backend.
    pub fn to_float(&self) -> Scalar {
        Scalar::Float(self.to_c64())
    }

    pub fn to_c64(&self) -> Complex64 {
        match self {
            Scalar::Exact(g) => g.to_c64(),
            Scalar::Float(c) => *c,
        }
    }

    pub fn as_exact(&self) -> Result<&GaussRat> {
        match self {
            Scalar::Exact(g) => Ok(g),
            Scalar::Float(_) => Err(Error::BackendMismatch("expected exact scalar")),
        }
    }

    /// exp(z); float backend only.
    pub fn exp(&self) -> Result<Scalar> {
        match self {
            Scalar::Exact(g) if g.is_zero() => Ok(Scalar::exact_int(1)),
            Scalar::Exact(_) => Err(Error::ExactUnavailable("exp")),
            Scalar::Float(c) => Ok(Scalar::Float(c.exp())),
        }
    }

    /// Principal-branch log; float backend only.
    pub fn ln(&self) -> Result<Scalar> {
        match self {
            Scalar::Exact(_) => Err(Error::ExactUnavailable("log")),
            Scalar::Float(c) => Ok(Scalar::Float(c.ln())),
        }
    }

    /// One square root. Exact backend succeeds only for squares in Q(i).
    pub fn sqrt(&self) -> Result<Scalar> {
        match self {
            Scalar::Exact(g) => g
                .sqrt_exact()
                .map(Scalar::Exact)
                .ok_or(Error::ExactUnavailable("sqrt of a non-square")),
            Scalar::Float(c) => Ok(Scalar::Float(c.sqrt())),
        }
    }

    /// Exact equality (exact backend) or agreement within `tol` entrywise.
    pub fn approx_eq(&self, rhs: &Scalar, tol: f64) -> bool {
        match (self, rhs) {
            (Scalar::Exact(a), Scalar::Exact(b)) => a == b,
            (Scalar::Float(a), Scalar::Float(b)) => (a - b).norm() <= tol,
            _ => false,
        }
    }

    /// |self - rhs| as f64, 0.0 for exactly equal exact values.
    pub fn dist_f64(&self, rhs: &Scalar) -> f64 {
        match (self, rhs) {
            (Scalar::Exact(a), Scalar::Exact(b)) => {
                if a == b {
                    0.0
                } else {
                    a.sub(b).modulus_sq().to_f64().unwrap_or(f64::NAN).sqrt()
                }
            }
            _ => (self.to_c64() - rhs.to_c64()).norm(),
        }
    }

    fn cmp_modulus(&self, rhs: &Scalar) -> Ordering {
        match (self, rhs) {
            (Scalar::Exact(a), Scalar::Exact(b)) => a.modulus_sq().cmp(&b.modulus_sq()),
            (Scalar::Float(a), Scalar::Float(b)) => a.norm_sqr().total_cmp(&b.norm_sqr()),
            _ => panic!("backend mismatch in modulus comparison"),
        }
    }

    fn cmp_re(&self, rhs: &Scalar) -> Ordering {
        match (self, rhs) {
            (Scalar::Exact(a), Scalar::Exact(b)) => a.re.cmp(&b.re),
            (Scalar::Float(a), Scalar::Float(b)) => a.re.total_cmp(&b.re),
            _ => panic!("backend mismatch in real-part comparison"),
        }
    }

    fn cmp_im(&self, rhs: &Scalar) -> Ordering {
        match (self, rhs) {
            (Scalar::Exact(a), Scalar::Exact(b)) => a.im.cmp(&b.im),
            (Scalar::Float(a), Scalar::Float(b)) => a.im.total_cmp(&b.im),
            _ => panic!("backend mismatch in imaginary-part comparison"),
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Exact(g) => write!(f, "{g}"),
            Scalar::Float(c) => write!(f, "({}+{}i)", c.re, c.im),
        }
    }
}

impl Serialize for Scalar {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Scalar::Exact(g) => {
                let mut seq = serializer.serialize_seq(Some(2))?;
                seq.serialize_element(&g.re.to_string())?;
                seq.serialize_element(&g.im.to_string())?;
                seq.end()
            }
            Scalar::Float(c) => {
                let mut seq = serializer.serialize_seq(Some(2))?;
                seq.serialize_element(&c.re)?;
                seq.serialize_element(&c.im)?;
                seq.end()
            }
        }
    }
}

/// Deterministic root choice shared by the quadratic solvers: smaller
/// modulus, then larger real part, then larger imaginary part.
pub fn prefer_root(x: Scalar, y: Scalar) -> Scalar {
    match x.cmp_modulus(&y) {
        Ordering::Less => x,
        Ordering::Greater => y,
        Ordering::Equal => match x.cmp_re(&y) {
            Ordering::Greater => x,
            Ordering::Less => y,
            Ordering::Equal => match x.cmp_im(&y) {
                Ordering::Less => y,
                _ => x,
            },
        },
    }
}

/// Solves `a2*f^2 + a1*f + a0 = 0` and picks a root by [`prefer_root`].
///
/// Degenerate `a2 = 0` falls back to the linear equation; `a2 = a1 = 0` with
/// `a0 != 0` has no solution. In the exact backend the discriminant must be
/// a square in Q(i).
pub fn solve_quadratic_min_modulus(a2: &Scalar, a1: &Scalar, a0: &Scalar) -> Result<Scalar> {
    let backend = a2.backend();
    if a1.backend() != backend || a0.backend() != backend {
        return Err(Error::BackendMismatch("quadratic solve"));
    }
    if a2.is_zero() {
        if a1.is_zero() {
            if a0.is_zero() {
                return Ok(Scalar::zero(backend));
            }
            return Err(Error::ConstructionInapplicable(
                "degenerate equation 0 = c with c != 0".into(),
            ));
        }
        return a0.neg().div(a1);
    }
    if a0.is_zero() {
        // Roots are 0 and -a1/a2; zero always wins the modulus rule.
        return Ok(Scalar::zero(backend));
    }
    let four = Scalar::from_int(4, backend);
    let two = Scalar::from_int(2, backend);
    let disc = a1.mul(a1).sub(&four.mul(a2).mul(a0));
    let r = disc.sqrt()?;
    let denom = two.mul(a2);
    let r1 = a1.neg().add(&r).div(&denom)?;
    let r2 = a1.neg().sub(&r).div(&denom)?;
    Ok(prefer_root(r1, r2))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn exact_field_ops() {
        let a = GaussRat::new(rat(1, 2), rat(-3, 4));
        let b = GaussRat::new(rat(2, 5), rat(7, 3));
        let prod = a.mul(&b);
        let back = prod.div(&b).unwrap();
        assert_eq!(back, a);
        assert_eq!(a.mul(&a.inv().unwrap()), GaussRat::one());
    }

    #[test]
    fn rational_sqrt_detects_squares() {
        assert_eq!(rational_sqrt(&rat(9, 4)), Some(rat(3, 2)));
        assert_eq!(rational_sqrt(&rat(2, 1)), None);
        assert_eq!(rational_sqrt(&rat(0, 1)), Some(rat(0, 1)));
        assert_eq!(rational_sqrt(&rat(-1, 1)), None);
    }

    #[test]
    fn gaussian_sqrt() {
        // (3 + 2i)^2 = 5 + 12i
        let w = GaussRat::new(rat(5, 1), rat(12, 1));
        let s = w.sqrt_exact().unwrap();
        assert_eq!(s.mul(&s), w);
        // -9 has root 3i
        let n = GaussRat::new(rat(-9, 1), rat(0, 1));
        let s = n.sqrt_exact().unwrap();
        assert_eq!(s.mul(&s), n);
        // 1 + i is not a square in Q(i)
        assert!(GaussRat::new(rat(1, 1), rat(1, 1)).sqrt_exact().is_none());
    }

    #[test]
    fn quadratic_branch_rule() {
        // 2f^2 + 3f - 2 = 0 has roots 1/2 and -2; rule picks 1/2.
        let f = solve_quadratic_min_modulus(
            &Scalar::exact_int(2),
            &Scalar::exact_int(3),
            &Scalar::exact_int(-2),
        )
        .unwrap();
        assert_eq!(f, Scalar::exact_ratio(1, 2));
        // f^2 - 1 = 0: tie in modulus, larger real part wins.
        let f = solve_quadratic_min_modulus(
            &Scalar::exact_int(1),
            &Scalar::exact_int(0),
            &Scalar::exact_int(-1),
        )
        .unwrap();
        assert_eq!(f, Scalar::exact_int(1));
        // zero constant term picks the zero root
        let f = solve_quadratic_min_modulus(
            &Scalar::exact_int(5),
            &Scalar::exact_int(-7),
            &Scalar::exact_int(0),
        )
        .unwrap();
        assert!(f.is_zero());
    }

    #[test]
    fn quadratic_float_and_linear() {
        // 3f^2 + 5f + 1 = 0, smaller-modulus root ~ -0.2324081...
        let f = solve_quadratic_min_modulus(
            &Scalar::float(3.0, 0.0),
            &Scalar::float(5.0, 0.0),
            &Scalar::float(1.0, 0.0),
        )
        .unwrap();
        assert!((f.to_c64().re - (-0.232_408_1)).abs() < 1e-6);
        let f = solve_quadratic_min_modulus(
            &Scalar::float(0.0, 0.0),
            &Scalar::float(2.0, 0.0),
            &Scalar::float(-4.0, 0.0),
        )
        .unwrap();
        assert!(f.approx_eq(&Scalar::float(2.0, 0.0), 1e-14));
    }

    #[test]
    fn exact_sqrt_unavailable_is_an_error() {
        let e = solve_quadratic_min_modulus(
            &Scalar::exact_int(1),
            &Scalar::exact_int(0),
            &Scalar::exact_int(-2),
        );
        assert!(matches!(e, Err(Error::ExactUnavailable(_))));
    }

    #[test]
    #[should_panic(expected = "backend mismatch")]
    fn mixed_backend_panics() {
        let _ = Scalar::exact_int(1).add(&Scalar::float(1.0, 0.0));
    }

    #[test]
    fn exp_rules() {
        assert!(Scalar::exact_int(0).exp().unwrap() == Scalar::exact_int(1));
        assert!(matches!(
            Scalar::exact_int(1).exp(),
            Err(Error::ExactUnavailable(_))
        ));
        let e = Scalar::float(0.0, std::f64::consts::PI).exp().unwrap();
        assert!(e.approx_eq(&Scalar::float(-1.0, 0.0), 1e-12));
    }
}
