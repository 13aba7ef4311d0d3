//! Multivariate polynomial ring over Q(i) with two optional extensions:
//! a sine/cosine pair `s = sin(p*base)`, `c = cos(p*base)` for one designated
//! base variable (with `p` an opaque constant symbol), and square-root
//! constant symbols `r` with `r^2` equal to a fixed integer.
//!
//! Normal form keeps every sine exponent in {0, 1} via `s^2 -> 1 - c^2` and
//! every root-symbol exponent in {0, 1} via `r^2 -> value`. All operations
//! return normal forms; coefficients are exact Gaussian rationals.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::scalar::{Backend, GaussRat, Scalar};

/// Role of a generator in the signature.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VarKind {
    /// Ordinary polynomial indeterminate.
    Free,
    /// Opaque constant symbol (derivative zero), e.g. the frequency `p`.
    ConstSym,
    /// Symbol `r` with the reduction `r^2 -> value`.
    SqrtConst(u32),
    /// `s = sin(p * base)`, index into the trig pair table.
    TrigSin(usize),
    /// `c = cos(p * base)`.
    TrigCos(usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrigPair {
    pub base: usize,
    pub sin: usize,
    pub cos: usize,
    pub freq: usize,
}

#[derive(Debug, PartialEq, Eq)]
pub struct RingSignature {
    vars: Vec<(String, VarKind)>,
    pairs: Vec<TrigPair>,
}

/// Cheap-to-clone handle to a ring signature.
#[derive(Debug, Clone)]
pub struct Ring(Arc<RingSignature>);

impl PartialEq for Ring {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || *self.0 == *other.0
    }
}
impl Eq for Ring {}

impl Ring {
    /// Plain polynomial ring in the named variables.
    pub fn poly(names: &[&str]) -> Ring {
        Ring::build(names, None, &[])
    }

    /// Polynomial ring extended by `p, s, c` with `s = sin(p*base)`.
    pub fn poly_with_trig(names: &[&str], base: &str) -> Ring {
        Ring::build(names, Some(base), &[])
    }

    /// Polynomial ring extended by square-root constant symbols.
    pub fn poly_with_roots(names: &[&str], roots: &[(&str, u32)]) -> Ring {
        Ring::build(names, None, roots)
    }

    pub fn build(names: &[&str], trig_base: Option<&str>, roots: &[(&str, u32)]) -> Ring {
        let mut vars: Vec<(String, VarKind)> =
            names.iter().map(|n| (n.to_string(), VarKind::Free)).collect();
        let mut pairs = Vec::new();
        if let Some(base) = trig_base {
            let base_idx = names
                .iter()
                .position(|n| n == &base)
                .expect("trig base must be a declared variable");
            let freq = vars.len();
            vars.push(("p".into(), VarKind::ConstSym));
            let sin = vars.len();
            vars.push(("s".into(), VarKind::TrigSin(0)));
            let cos = vars.len();
            vars.push(("c".into(), VarKind::TrigCos(0)));
            pairs.push(TrigPair {
                base: base_idx,
                sin,
                cos,
                freq,
            });
        }
        for (name, sq) in roots {
            vars.push((name.to_string(), VarKind::SqrtConst(*sq)));
        }
        Ring(Arc::new(RingSignature { vars, pairs }))
    }

    pub fn nvars(&self) -> usize {
        self.0.vars.len()
    }

    pub fn var_name(&self, idx: usize) -> &str {
        &self.0.vars[idx].0
    }

    pub fn var_kind(&self, idx: usize) -> VarKind {
        self.0.vars[idx].1
    }

    pub fn var_index(&self, name: &str) -> Result<usize> {
        self.0
            .vars
            .iter()
            .position(|(n, _)| n == name)
            .ok_or_else(|| Error::UnknownVariable(name.to_string()))
    }

    pub fn trig_pairs(&self) -> &[TrigPair] {
        &self.0.pairs
    }

    pub fn free_vars(&self) -> Vec<usize> {
        (0..self.nvars())
            .filter(|&i| self.var_kind(i) == VarKind::Free)
            .collect()
    }

    pub fn zero(&self) -> RingElem {
        RingElem {
            ring: self.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(&self, c: GaussRat) -> RingElem {
        let mut e = self.zero();
        if !c.is_zero() {
            e.terms.insert(vec![0; self.nvars()], c);
        }
        e
    }

    pub fn int(&self, v: i64) -> RingElem {
        self.constant(GaussRat::from_int(v))
    }

    pub fn var(&self, name: &str) -> Result<RingElem> {
        let idx = self.var_index(name)?;
        Ok(self.var_by_index(idx))
    }

    pub fn var_by_index(&self, idx: usize) -> RingElem {
        let mut exps = vec![0u32; self.nvars()];
        exps[idx] = 1;
        let mut e = self.zero();
        e.terms.insert(exps, GaussRat::one());
        e
    }

    pub fn monomial(&self, coef: GaussRat, powers: &[(usize, u32)]) -> RingElem {
        let mut exps = vec![0u32; self.nvars()];
        for &(v, k) in powers {
            exps[v] += k;
        }
        let mut e = self.zero();
        if !coef.is_zero() {
            e.terms.insert(exps, coef);
        }
        e.normalize();
        e
    }
}

/// A polynomial in normal form over a [`Ring`] signature.
#[derive(Debug, Clone, PartialEq)]
pub struct RingElem {
    ring: Ring,
    terms: BTreeMap<Vec<u32>, GaussRat>,
}

impl RingElem {
    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &GaussRat)> {
        self.terms.iter()
    }

    fn expect_same(&self, rhs: &RingElem, ctx: &str) {
        assert!(self.ring == rhs.ring, "ring signature mismatch in {ctx}");
    }

    fn insert_term(terms: &mut BTreeMap<Vec<u32>, GaussRat>, exps: Vec<u32>, coef: GaussRat) {
        if coef.is_zero() {
            return;
        }
        match terms.entry(exps) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(coef);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get().add(&coef);
                if sum.is_zero() {
                    e.remove();
                } else {
                    e.insert(sum);
                }
            }
        }
    }

    /// Rewrites `s^2 -> 1 - c^2` and `r^2 -> value` until all capped
    /// exponents are in {0, 1}. Idempotent.
    pub fn normalize(&mut self) {
        loop {
            let mut offending: Option<(Vec<u32>, GaussRat, usize)> = None;
            for (exps, coef) in self.terms.iter() {
                for (idx, &e) in exps.iter().enumerate() {
                    if e >= 2 {
                        match self.ring.var_kind(idx) {
                            VarKind::TrigSin(_) | VarKind::SqrtConst(_) => {
                                offending = Some((exps.clone(), coef.clone(), idx));
                                break;
                            }
                            _ => {}
                        }
                    }
                }
                if offending.is_some() {
                    break;
                }
            }
            let Some((exps, coef, idx)) = offending else {
                return;
            };
            self.terms.remove(&exps);
            let e = exps[idx];
            let (q, r) = (e / 2, e % 2);
            let mut rest = exps.clone();
            rest[idx] = r;
            match self.ring.var_kind(idx) {
                VarKind::SqrtConst(sq) => {
                    let mut factor = GaussRat::one();
                    let sq_g = GaussRat::from_int(sq as i64);
                    for _ in 0..q {
                        factor = factor.mul(&sq_g);
                    }
                    Self::insert_term(&mut self.terms, rest, coef.mul(&factor));
                }
                VarKind::TrigSin(pair) => {
                    // s^(2q) = (1 - c^2)^q, expanded by the binomial theorem.
                    let cos = self.ring.trig_pairs()[pair].cos;
                    let mut binom = GaussRat::one();
                    for j in 0..=q {
                        // binom = (-1)^j * C(q, j)
                        if j > 0 {
                            let step = GaussRat::from_ratio(
                                -((q - j + 1) as i64),
                                j as i64,
                            );
                            binom = binom.mul(&step);
                        }
                        let mut t = rest.clone();
                        t[cos] += 2 * j;
                        Self::insert_term(&mut self.terms, t, coef.mul(&binom));
                    }
                }
                _ => unreachable!(),
            }
        }
    }

    pub fn add(&self, rhs: &RingElem) -> RingElem {
        self.expect_same(rhs, "add");
        let mut out = self.clone();
        for (exps, coef) in rhs.terms.iter() {
            Self::insert_term(&mut out.terms, exps.clone(), coef.clone());
        }
        out
    }

    pub fn sub(&self, rhs: &RingElem) -> RingElem {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> RingElem {
        let mut out = self.ring.zero();
        for (exps, coef) in self.terms.iter() {
            out.terms.insert(exps.clone(), coef.neg());
        }
        out
    }

    pub fn mul(&self, rhs: &RingElem) -> RingElem {
        self.expect_same(rhs, "mul");
        let mut out = self.ring.zero();
        for (ea, ca) in self.terms.iter() {
            for (eb, cb) in rhs.terms.iter() {
                let exps: Vec<u32> = ea.iter().zip(eb.iter()).map(|(x, y)| x + y).collect();
                Self::insert_term(&mut out.terms, exps, ca.mul(cb));
            }
        }
        out.normalize();
        out
    }

    pub fn scale(&self, c: &GaussRat) -> RingElem {
        let mut out = self.ring.zero();
        if c.is_zero() {
            return out;
        }
        for (exps, coef) in self.terms.iter() {
            out.terms.insert(exps.clone(), coef.mul(c));
        }
        out
    }

    pub fn pow(&self, n: u32) -> RingElem {
        let mut out = self.ring.int(1);
        for _ in 0..n {
            out = out.mul(self);
        }
        out
    }

    /// Formal partial derivative with the trig chain rule
    /// (`ds/dbase = p*c`, `dc/dbase = -p*s`). Only free variables can be
    /// differentiated by.
    pub fn derive(&self, var: usize) -> Result<RingElem> {
        if var >= self.ring.nvars() {
            return Err(Error::UnknownVariable(format!("#{var}")));
        }
        if self.ring.var_kind(var) != VarKind::Free {
            return Err(Error::NotDifferentiable(
                self.ring.var_name(var).to_string(),
            ));
        }
        let mut out = self.ring.zero();
        for (exps, coef) in self.terms.iter() {
            // d/dvar of the plain power of var
            if exps[var] > 0 {
                let mut e = exps.clone();
                e[var] -= 1;
                let k = GaussRat::from_int(exps[var] as i64);
                Self::insert_term(&mut out.terms, e, coef.mul(&k));
            }
            // chain rule through s and c whose base is var
            for pair in self.ring.trig_pairs() {
                if pair.base != var {
                    continue;
                }
                if exps[pair.sin] > 0 {
                    let mut e = exps.clone();
                    e[pair.sin] -= 1;
                    e[pair.cos] += 1;
                    e[pair.freq] += 1;
                    let k = GaussRat::from_int(exps[pair.sin] as i64);
                    Self::insert_term(&mut out.terms, e, coef.mul(&k));
                }
                if exps[pair.cos] > 0 {
                    let mut e = exps.clone();
                    e[pair.cos] -= 1;
                    e[pair.sin] += 1;
                    e[pair.freq] += 1;
                    let k = GaussRat::from_int(-(exps[pair.cos] as i64));
                    Self::insert_term(&mut out.terms, e, coef.mul(&k));
                }
            }
        }
        out.normalize();
        Ok(out)
    }

    pub fn derive_by_name(&self, name: &str) -> Result<RingElem> {
        self.derive(self.ring.var_index(name)?)
    }

    /// Simultaneous substitution of one variable by a polynomial of the
    /// same signature.
    pub fn substitute(&self, var: usize, rep: &RingElem) -> RingElem {
        self.expect_same(rep, "substitute");
        let mut out = self.ring.zero();
        for (exps, coef) in self.terms.iter() {
            let mut rest = exps.clone();
            let k = rest[var];
            rest[var] = 0;
            let mut base = self.ring.zero();
            base.terms.insert(rest, coef.clone());
            let piece = if k == 0 { base } else { base.mul(&rep.pow(k)) };
            out = out.add(&piece);
        }
        out.normalize();
        out
    }

    /// Exact evaluation; the caller supplies one Gaussian rational per
    /// generator (including any trig/root symbols).
    pub fn eval_gauss(&self, vals: &[GaussRat]) -> GaussRat {
        assert_eq!(vals.len(), self.ring.nvars(), "wrong assignment length");
        let mut acc = GaussRat::zero();
        for (exps, coef) in self.terms.iter() {
            let mut term = coef.clone();
            for (idx, &e) in exps.iter().enumerate() {
                for _ in 0..e {
                    term = term.mul(&vals[idx]);
                }
            }
            acc = acc.add(&term);
        }
        acc
    }

    /// Numeric evaluation with `Complex64` values per generator.
    pub fn eval_c64(&self, vals: &[Complex64]) -> Complex64 {
        assert_eq!(vals.len(), self.ring.nvars(), "wrong assignment length");
        let mut acc = Complex64::new(0.0, 0.0);
        for (exps, coef) in self.terms.iter() {
            let mut term = coef.to_c64();
            for (idx, &e) in exps.iter().enumerate() {
                term *= vals[idx].powu(e);
            }
            acc += term;
        }
        acc
    }

    /// Evaluation in a uniform scalar backend.
    pub fn eval_scalar(&self, vals: &[Scalar]) -> Result<Scalar> {
        if vals.len() != self.ring.nvars() {
            return Err(Error::InvalidInput(format!(
                "expected {} values, got {}",
                self.ring.nvars(),
                vals.len()
            )));
        }
        let backend = vals
            .first()
            .map(Scalar::backend)
            .unwrap_or(Backend::Exact);
        if vals.iter().any(|v| v.backend() != backend) {
            return Err(Error::BackendMismatch("ring evaluation"));
        }
        match backend {
            Backend::Exact => {
                let g: Vec<GaussRat> = vals
                    .iter()
                    .map(|v| v.as_exact().map(Clone::clone))
                    .collect::<Result<_>>()?;
                Ok(Scalar::Exact(self.eval_gauss(&g)))
            }
            Backend::Float => {
                let c: Vec<Complex64> = vals.iter().map(Scalar::to_c64).collect();
                Ok(Scalar::Float(self.eval_c64(&c)))
            }
        }
    }

    /// Smallest total degree over the given variables, `None` for zero.
    pub fn min_total_degree(&self, vars: &[usize]) -> Option<u32> {
        self.terms
            .keys()
            .map(|exps| vars.iter().map(|&v| exps[v]).sum())
            .min()
    }

    pub fn max_total_degree(&self, vars: &[usize]) -> Option<u32> {
        self.terms
            .keys()
            .map(|exps| vars.iter().map(|&v| exps[v]).sum())
            .max()
    }

    /// Drops every term whose total degree over `vars` exceeds `cap`.
    pub fn truncate_total_degree(&self, vars: &[usize], cap: u32) -> RingElem {
        let mut out = self.ring.zero();
        for (exps, coef) in self.terms.iter() {
            let d: u32 = vars.iter().map(|&v| exps[v]).sum();
            if d <= cap {
                out.terms.insert(exps.clone(), coef.clone());
            }
        }
        out
    }

    /// Terms whose exponents at the listed variables match exactly, with
    /// those variables struck out of the result.
    pub fn coefficient_of(&self, pattern: &[(usize, u32)]) -> RingElem {
        let mut out = self.ring.zero();
        'term: for (exps, coef) in self.terms.iter() {
            let mut rest = exps.clone();
            for &(v, k) in pattern {
                if exps[v] != k {
                    continue 'term;
                }
                rest[v] = 0;
            }
            out.terms.insert(rest, coef.clone());
        }
        out
    }

    /// True if only the listed variables appear with nonzero exponent.
    pub fn supported_on(&self, vars: &[usize]) -> bool {
        self.terms.keys().all(|exps| {
            exps.iter()
                .enumerate()
                .all(|(idx, &e)| e == 0 || vars.contains(&idx))
        })
    }

    /// Constant term
    pub fn constant_term(&self) -> GaussRat {
        self.terms
            .get(&vec![0u32; self.ring.nvars()])
            .cloned()
            .unwrap_or_else(GaussRat::zero)
    }

    /// Lexicographically largest monomial, for witnesses in diagnostics.
    pub fn leading_monomial(&self) -> Option<String> {
        self.terms.iter().next_back().map(|(exps, coef)| {
            let mut s = format!("{coef}");
            for (idx, &e) in exps.iter().enumerate() {
                if e > 0 {
                    s.push('*');
                    s.push_str(self.ring.var_name(idx));
                    if e > 1 {
                        s.push_str(&format!("^{e}"));
                    }
                }
            }
            s
        })
    }
}

impl fmt::Display for RingElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (exps, coef) in self.terms.iter().rev() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({coef})")?;
            for (idx, &e) in exps.iter().enumerate() {
                if e > 0 {
                    write!(f, "*{}", self.ring.var_name(idx))?;
                    if e > 1 {
                        write!(f, "^{e}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

/// Convenience for numeric spot checks: consistent random-looking values for
/// a trig signature, `s = sin(p*z)`, `c = cos(p*z)`.
pub fn trig_assignment(ring: &Ring, z: Complex64, w: Complex64, p: f64) -> Vec<Complex64> {
    let mut vals = vec![Complex64::new(0.0, 0.0); ring.nvars()];
    for idx in 0..ring.nvars() {
        match ring.var_kind(idx) {
            VarKind::Free => {
                vals[idx] = if ring.var_name(idx) == "w" { w } else { z };
            }
            VarKind::ConstSym => vals[idx] = Complex64::new(p, 0.0),
            VarKind::SqrtConst(sq) => vals[idx] = Complex64::new((sq as f64).sqrt(), 0.0),
            VarKind::TrigSin(pair) => {
                let base = ring.trig_pairs()[pair].base;
                let bval = if ring.var_name(base) == "w" { w } else { z };
                vals[idx] = (bval * p).sin();
            }
            VarKind::TrigCos(pair) => {
                let base = ring.trig_pairs()[pair].base;
                let bval = if ring.var_name(base) == "w" { w } else { z };
                vals[idx] = (bval * p).cos();
            }
        }
    }
    vals
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn zw_trig() -> Ring {
        Ring::poly_with_trig(&["z", "w"], "z")
    }

    #[test]
    fn derive_polynomial() {
        let r = Ring::poly(&["z", "w"]);
        let z = r.var("z").unwrap();
        let d = z.mul(&z).derive_by_name("z").unwrap();
        assert_eq!(d, z.scale(&GaussRat::from_int(2)));
    }

    #[test]
    fn derive_sin_gives_p_cos() {
        let r = zw_trig();
        let s = r.var("s").unwrap();
        let p = r.var("p").unwrap();
        let c = r.var("c").unwrap();
        assert_eq!(s.derive_by_name("z").unwrap(), p.mul(&c));
        // dc/dz = -p*s
        assert_eq!(c.derive_by_name("z").unwrap(), p.mul(&s).neg());
    }

    #[test]
    fn normal_form_rewrites_sin_squares() {
        let r = zw_trig();
        let s = r.var("s").unwrap();
        let c = r.var("c").unwrap();
        let one = r.int(1);
        // s^2 = 1 - c^2
        assert_eq!(s.mul(&s), one.sub(&c.mul(&c)));
        // s^3 = s - s*c^2
        assert_eq!(s.pow(3), s.sub(&s.mul(&c).mul(&c)));
        // already normal input is unchanged (idempotence)
        let e = s.mul(&c).add(&r.var("z").unwrap());
        let mut again = e.clone();
        again.normalize();
        assert_eq!(e, again);
    }

    #[test]
    fn derive_commutes_with_sin_square_rewrite() {
        // d/dz s^2 computed after the rewrite equals 2*p*s*c.
        let r = zw_trig();
        let s = r.var("s").unwrap();
        let p = r.var("p").unwrap();
        let c = r.var("c").unwrap();
        let lhs = s.mul(&s).derive_by_name("z").unwrap();
        let rhs = p.mul(&s).mul(&c).scale(&GaussRat::from_int(2));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn sqrt_const_reduction() {
        let r = Ring::poly_with_roots(&["z"], &[("r3", 3), ("r5", 5)]);
        let r3 = r.var("r3").unwrap();
        let r5 = r.var("r5").unwrap();
        assert_eq!(r3.mul(&r3), r.int(3));
        assert_eq!(r3.pow(3), r3.scale(&GaussRat::from_int(3)));
        assert_eq!(r3.mul(&r5).mul(&r3.mul(&r5)), r.int(15));
    }

    #[test]
    fn substitution_shift() {
        let r = Ring::poly(&["z", "w"]);
        let z = r.var("z").unwrap();
        let zi = r.var_index("z").unwrap();
        let shifted = z.mul(&z).substitute(zi, &z.add(&r.int(2)));
        // (z+2)^2 = z^2 + 4z + 4
        let expect = z
            .mul(&z)
            .add(&z.scale(&GaussRat::from_int(4)))
            .add(&r.int(4));
        assert_eq!(shifted, expect);
    }

    #[test]
    fn unknown_variable_errors() {
        let r = Ring::poly(&["z"]);
        assert!(matches!(
            r.var("nope"),
            Err(Error::UnknownVariable(_))
        ));
        let s_err = zw_trig().var("s").unwrap().derive_by_name("s");
        assert!(matches!(s_err, Err(Error::NotDifferentiable(_))));
    }

    proptest! {
        #[test]
        fn eval_agrees_before_and_after_normalization(
            se in 0u32..5, ce in 0u32..3, coef_n in -9i64..10, coef_d in 1i64..7,
            zr in -1.0f64..1.0, zi in -1.0f64..1.0,
        ) {
            // Build an unnormalized monomial coef * s^se * c^ce * z and
            // evaluate both the raw product and its normal form numerically.
            let r = zw_trig();
            let z = Complex64::new(zr, zi);
            let w = Complex64::new(0.3, -0.1);
            let p = 1.7;
            let vals = trig_assignment(&r, z, w, p);
            let coef = GaussRat::from_ratio(coef_n, coef_d);

            let si = r.var_index("s").unwrap();
            let ci = r.var_index("c").unwrap();
            let zidx = r.var_index("z").unwrap();

            // normalized via the public API
            let elem = r.monomial(coef.clone(), &[(si, se), (ci, ce), (zidx, 1)]);
            let normalized = elem.eval_c64(&vals);

            // raw product evaluated numerically without any rewriting
            let raw = coef.to_c64()
                * vals[si].powu(se)
                * vals[ci].powu(ce)
                * vals[zidx];
            prop_assert!((normalized - raw).norm() <= 1e-10 * (1.0 + raw.norm()));
        }

        #[test]
        fn derive_is_linear_and_leibniz(
            a in -5i64..6, b in -5i64..6, ea in 0u32..3, eb in 0u32..3,
        ) {
            let r = zw_trig();
            let s = r.var("s").unwrap();
            let z = r.var("z").unwrap();
            let w = r.var("w").unwrap();
            let f = z.pow(ea).mul(&s).scale(&GaussRat::from_int(a)).add(&w.pow(eb));
            let g = z.pow(eb).add(&s.scale(&GaussRat::from_int(b)));
            let zi = r.var_index("z").unwrap();

            let sum_rule = f.add(&g).derive(zi).unwrap();
            prop_assert_eq!(sum_rule, f.derive(zi).unwrap().add(&g.derive(zi).unwrap()));

            let prod_rule = f.mul(&g).derive(zi).unwrap();
            let leibniz = f.derive(zi).unwrap().mul(&g).add(&f.mul(&g.derive(zi).unwrap()));
            prop_assert_eq!(prod_rule, leibniz);
        }
    }
}
