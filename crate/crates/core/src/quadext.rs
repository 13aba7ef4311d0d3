//! The field Q(i)(sqrt 3, sqrt 5): exact arithmetic for the 4x4 spanning
//! system, whose matrix has entries in Z[1/sqrt 3, 1/sqrt 5].

use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::scalar::GaussRat;

/// `one + r3*sqrt(3) + r5*sqrt(5) + r15*sqrt(15)` with Gaussian-rational
/// coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadExt {
    pub one: GaussRat,
    pub r3: GaussRat,
    pub r5: GaussRat,
    pub r15: GaussRat,
}

impl QuadExt {
    pub fn new(one: GaussRat, r3: GaussRat, r5: GaussRat, r15: GaussRat) -> QuadExt {
        QuadExt { one, r3, r5, r15 }
    }

    pub fn from_gauss(g: GaussRat) -> QuadExt {
        QuadExt::new(g, GaussRat::zero(), GaussRat::zero(), GaussRat::zero())
    }

    pub fn from_int(v: i64) -> QuadExt {
        QuadExt::from_gauss(GaussRat::from_int(v))
    }

    pub fn from_ratio(n: i64, d: i64) -> QuadExt {
        QuadExt::from_gauss(GaussRat::from_ratio(n, d))
    }

    pub fn zero() -> QuadExt {
        QuadExt::from_int(0)
    }

    pub fn one() -> QuadExt {
        QuadExt::from_int(1)
    }

    /// sqrt(3)
    pub fn sqrt3() -> QuadExt {
        QuadExt::new(
            GaussRat::zero(),
            GaussRat::one(),
            GaussRat::zero(),
            GaussRat::zero(),
        )
    }

    /// sqrt(5)
    pub fn sqrt5() -> QuadExt {
        QuadExt::new(
            GaussRat::zero(),
            GaussRat::zero(),
            GaussRat::one(),
            GaussRat::zero(),
        )
    }

    /// 1/sqrt(3) = sqrt(3)/3
    pub fn inv_sqrt3() -> QuadExt {
        QuadExt::new(
            GaussRat::zero(),
            GaussRat::from_ratio(1, 3),
            GaussRat::zero(),
            GaussRat::zero(),
        )
    }

    /// 1/sqrt(5) = sqrt(5)/5
    pub fn inv_sqrt5() -> QuadExt {
        QuadExt::new(
            GaussRat::zero(),
            GaussRat::zero(),
            GaussRat::from_ratio(1, 5),
            GaussRat::zero(),
        )
    }

    pub fn is_zero(&self) -> bool {
        self.one.is_zero() && self.r3.is_zero() && self.r5.is_zero() && self.r15.is_zero()
    }

    /// True if the element lies in the base field Q(i).
    pub fn is_gauss(&self) -> bool {
        self.r3.is_zero() && self.r5.is_zero() && self.r15.is_zero()
    }

    pub fn add(&self, rhs: &QuadExt) -> QuadExt {
        QuadExt::new(
            self.one.add(&rhs.one),
            self.r3.add(&rhs.r3),
            self.r5.add(&rhs.r5),
            self.r15.add(&rhs.r15),
        )
    }

    pub fn sub(&self, rhs: &QuadExt) -> QuadExt {
        QuadExt::new(
            self.one.sub(&rhs.one),
            self.r3.sub(&rhs.r3),
            self.r5.sub(&rhs.r5),
            self.r15.sub(&rhs.r15),
        )
    }

    pub fn neg(&self) -> QuadExt {
        QuadExt::new(self.one.neg(), self.r3.neg(), self.r5.neg(), self.r15.neg())
    }

    pub fn mul(&self, rhs: &QuadExt) -> QuadExt {
        let three = GaussRat::from_int(3);
        let five = GaussRat::from_int(5);
        let fifteen = GaussRat::from_int(15);
        let one = self
            .one
            .mul(&rhs.one)
            .add(&three.mul(&self.r3.mul(&rhs.r3)))
            .add(&five.mul(&self.r5.mul(&rhs.r5)))
            .add(&fifteen.mul(&self.r15.mul(&rhs.r15)));
        let r3 = self
            .one
            .mul(&rhs.r3)
            .add(&self.r3.mul(&rhs.one))
            .add(&five.mul(&self.r5.mul(&rhs.r15).add(&self.r15.mul(&rhs.r5))));
        let r5 = self
            .one
            .mul(&rhs.r5)
            .add(&self.r5.mul(&rhs.one))
            .add(&three.mul(&self.r3.mul(&rhs.r15).add(&self.r15.mul(&rhs.r3))));
        let r15 = self
            .one
            .mul(&rhs.r15)
            .add(&self.r15.mul(&rhs.one))
            .add(&self.r3.mul(&rhs.r5))
            .add(&self.r5.mul(&rhs.r3));
        QuadExt::new(one, r3, r5, r15)
    }

    pub fn scale(&self, g: &GaussRat) -> QuadExt {
        QuadExt::new(
            self.one.mul(g),
            self.r3.mul(g),
            self.r5.mul(g),
            self.r15.mul(g),
        )
    }

    fn conj_sqrt3(&self) -> QuadExt {
        QuadExt::new(self.one.clone(), self.r3.neg(), self.r5.clone(), self.r15.neg())
    }

    fn conj_sqrt5(&self) -> QuadExt {
        QuadExt::new(self.one.clone(), self.r3.clone(), self.r5.neg(), self.r15.neg())
    }

    pub fn inv(&self) -> Result<QuadExt> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        // Multiply by the three Galois conjugates; the product of all four
        // lies in Q(i).
        let c3 = self.conj_sqrt3();
        let c5 = self.conj_sqrt5();
        let c35 = c3.conj_sqrt5();
        let adj = c3.mul(&c5).mul(&c35);
        let norm = self.mul(&adj);
        debug_assert!(norm.is_gauss(), "field norm must be Gaussian rational");
        Ok(adj.scale(&norm.one.inv()?))
    }

    pub fn div(&self, rhs: &QuadExt) -> Result<QuadExt> {
        Ok(self.mul(&rhs.inv()?))
    }

    pub fn to_c64(&self) -> Complex64 {
        self.one.to_c64()
            + self.r3.to_c64() * 3f64.sqrt()
            + self.r5.to_c64() * 5f64.sqrt()
            + self.r15.to_c64() * 15f64.sqrt()
    }
}

impl fmt::Display for QuadExt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({}) + ({})√3 + ({})√5 + ({})√15",
            self.one, self.r3, self.r5, self.r15
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn square_roots_square_back() {
        assert_eq!(QuadExt::sqrt3().mul(&QuadExt::sqrt3()), QuadExt::from_int(3));
        assert_eq!(QuadExt::sqrt5().mul(&QuadExt::sqrt5()), QuadExt::from_int(5));
        let r15 = QuadExt::sqrt3().mul(&QuadExt::sqrt5());
        assert_eq!(r15.mul(&r15), QuadExt::from_int(15));
    }

    #[test]
    fn inverse_is_exact() {
        let x = QuadExt::new(
            GaussRat::from_ratio(1, 2),
            GaussRat::from_int(-3),
            GaussRat::from_ratio(2, 7),
            GaussRat::new(
                num_rational::BigRational::new(1.into(), 3.into()),
                num_rational::BigRational::new(1.into(), 1.into()),
            ),
        );
        let inv = x.inv().unwrap();
        assert_eq!(x.mul(&inv), QuadExt::one());
        assert_eq!(
            QuadExt::inv_sqrt3(),
            QuadExt::sqrt3().inv().unwrap()
        );
    }

    #[test]
    fn numeric_embedding_matches() {
        let x = QuadExt::new(
            GaussRat::from_int(1),
            GaussRat::from_ratio(-1, 3),
            GaussRat::from_ratio(1, 5),
            GaussRat::zero(),
        );
        let y = QuadExt::new(
            GaussRat::from_int(2),
            GaussRat::zero(),
            GaussRat::from_int(1),
            GaussRat::from_ratio(1, 2),
        );
        let prod = x.mul(&y).to_c64();
        let direct = x.to_c64() * y.to_c64();
        assert!((prod - direct).norm() < 1e-12);
    }
}
