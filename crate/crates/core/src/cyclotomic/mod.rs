//! Exact arithmetic in `Z[w_M]`, `w_M = exp(2πi/M)`, with `4 | M`.
//!
//! Elements are stored in the power basis `1, w, ..., w^{φ(M)-1}`: an
//! integer coefficient vector reduced modulo `Φ_M`. Because `Φ_M` is
//! irreducible over the rationals this representation is unique, so
//! equality is coefficient equality and an element is rational exactly when
//! only its constant coefficient is nonzero. Since `4 | M` the unit `i` is
//! `w^{M/4}` and needs no separate coordinate.

mod poly;

use std::fmt;

use num_complex::Complex;
use num_integer::Integer;
use serde::Serialize;
use thiserror::Error;

pub use poly::{cyclotomic_polynomial, phi_factors_over_gaussians, totient, GaussPoly};

use crate::group::{GroupElement, GroupSpec};
use crate::scalar::{unit_root, Coeff, CompensatedSum, Real};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CycError {
    #[error("ambient order {0} is not a positive multiple of 4")]
    OrderNotMultipleOf4(u64),
    #[error("ambient order mismatch: ring has {expected}, element has {found}")]
    OrderMismatch { expected: u64, found: u64 },
    #[error("coefficient vector has length {found}, expected {expected}")]
    BadLength { expected: usize, found: usize },
    #[error("internal error: polynomial division left a remainder")]
    InexactDivision,
    #[error("internal error: expanded coefficient is not a Gaussian integer")]
    NonGaussianCoefficient,
}

/// A cyclotomic integer in canonical power-basis form.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Cyclotomic<T> {
    order: u64,
    coeffs: Vec<T>,
}

impl<T: Coeff> Cyclotomic<T> {
    pub fn order(&self) -> u64 {
        self.order
    }

    /// Coefficients of `1, w, ..., w^{φ(M)-1}`.
    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// The integer value, if this element is rational.
    pub fn as_integer(&self) -> Option<T> {
        if self.coeffs[1..].iter().all(|c| c.is_zero()) {
            Some(self.coeffs[0].clone())
        } else {
            None
        }
    }

    /// Numeric value with compensated summation over the basis terms.
    pub fn to_complex<F: Real>(&self) -> Complex<F> {
        let mut acc = CompensatedSum::<F>::default();
        for (j, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let c = F::from(c.clone()).expect("coefficient not representable as float");
            acc.add(unit_root::<F>(self.order, j as i64) * c);
        }
        acc.value()
    }
}

impl<T: Coeff> fmt::Display for Cyclotomic<T> {
    /// Renders as a polynomial in `w` (the primitive `M`-th root).
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (j, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let negative = c.is_negative();
            let magnitude = c.abs();
            let sign = match (first, negative) {
                (true, true) => "-",
                (true, false) => "",
                (false, true) => " - ",
                (false, false) => " + ",
            };
            let body = match (j, magnitude.is_one()) {
                (0, _) => format!("{magnitude}"),
                (1, true) => "w".to_string(),
                (1, false) => format!("{magnitude}w"),
                (_, true) => format!("w^{j}"),
                (_, false) => format!("{magnitude}w^{j}"),
            };
            write!(f, "{sign}{body}")?;
            first = false;
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

/// Reduction context for one ambient order `M`. Holds `Φ_M` and is
/// immutable once built, so it can be shared freely between threads.
#[derive(Debug, Clone)]
pub struct CyclotomicRing<T> {
    order: u64,
    degree: usize,
    /// Nonzero terms of `Φ_M` below the leading one, as `(degree, coeff)`.
    phi_tail: Vec<(usize, T)>,
    phi: GaussPoly<T>,
}

impl<T: Coeff> CyclotomicRing<T> {
    pub fn new(order: u64) -> Result<Self, CycError> {
        if order == 0 || !order.is_multiple_of(4) {
            return Err(CycError::OrderNotMultipleOf4(order));
        }
        let phi = poly::cyclotomic_int::<T>(order)?;
        let degree = phi.len() - 1;
        let phi_tail = phi[..degree]
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| (k, c.clone()))
            .collect();
        Ok(Self {
            order,
            degree,
            phi_tail,
            phi: GaussPoly::from_integers(phi),
        })
    }

    /// The ambient order `lcm(exp(g), 4)` used for all characters of `g`.
    pub fn for_group(g: &GroupSpec) -> Result<Self, CycError> {
        Self::new(ambient_order(g))
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    /// `φ(M)`, the length of every coefficient vector.
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn modulus(&self) -> &GaussPoly<T> {
        &self.phi
    }

    fn check(&self, a: &Cyclotomic<T>) -> Result<(), CycError> {
        if a.order != self.order {
            return Err(CycError::OrderMismatch {
                expected: self.order,
                found: a.order,
            });
        }
        Ok(())
    }

    /// Reduces an arbitrary-length polynomial in `w` modulo `Φ_M`.
    fn reduce(&self, mut p: Vec<T>) -> Cyclotomic<T> {
        for k in (self.degree..p.len()).rev() {
            let lead = std::mem::replace(&mut p[k], T::zero());
            if lead.is_zero() {
                continue;
            }
            let shift = k - self.degree;
            for (j, c) in &self.phi_tail {
                p[shift + j] = p[shift + j].clone() - lead.clone() * c.clone();
            }
        }
        p.resize(self.degree, T::zero());
        Cyclotomic {
            order: self.order,
            coeffs: p,
        }
    }

    /// Builds `Σ_e counts[e]·w^e`; `counts` may have any length.
    pub fn from_exponent_counts(&self, counts: &[T]) -> Cyclotomic<T> {
        let m = self.order as usize;
        if counts.len() <= m {
            return self.reduce(counts.to_vec());
        }
        let mut folded = vec![T::zero(); m];
        for (e, c) in counts.iter().enumerate() {
            folded[e % m] = folded[e % m].clone() + c.clone();
        }
        self.reduce(folded)
    }

    /// Accepts a coefficient vector that is already in power-basis form.
    pub fn from_coeffs(&self, coeffs: Vec<T>) -> Result<Cyclotomic<T>, CycError> {
        if coeffs.len() != self.degree {
            return Err(CycError::BadLength {
                expected: self.degree,
                found: coeffs.len(),
            });
        }
        Ok(Cyclotomic {
            order: self.order,
            coeffs,
        })
    }

    pub fn zero(&self) -> Cyclotomic<T> {
        Cyclotomic {
            order: self.order,
            coeffs: vec![T::zero(); self.degree],
        }
    }

    pub fn from_integer(&self, v: T) -> Cyclotomic<T> {
        let mut z = self.zero();
        z.coeffs[0] = v;
        z
    }

    pub fn one(&self) -> Cyclotomic<T> {
        self.from_integer(T::one())
    }

    /// `w_M^e`; negative exponents wrap around.
    pub fn root_power(&self, e: i64) -> Cyclotomic<T> {
        let e = e.rem_euclid(self.order as i64) as usize;
        let mut p = vec![T::zero(); e + 1];
        p[e] = T::one();
        self.reduce(p)
    }

    /// The imaginary unit `w^{M/4}`.
    pub fn i(&self) -> Cyclotomic<T> {
        self.root_power((self.order / 4) as i64)
    }

    pub fn add(&self, a: &Cyclotomic<T>, b: &Cyclotomic<T>) -> Result<Cyclotomic<T>, CycError> {
        self.check(a)?;
        self.check(b)?;
        Ok(Cyclotomic {
            order: self.order,
            coeffs: a
                .coeffs
                .iter()
                .zip(&b.coeffs)
                .map(|(x, y)| x.clone() + y.clone())
                .collect(),
        })
    }

    pub fn neg(&self, a: &Cyclotomic<T>) -> Result<Cyclotomic<T>, CycError> {
        self.check(a)?;
        Ok(Cyclotomic {
            order: self.order,
            coeffs: a.coeffs.iter().map(|x| -x.clone()).collect(),
        })
    }

    pub fn sub(&self, a: &Cyclotomic<T>, b: &Cyclotomic<T>) -> Result<Cyclotomic<T>, CycError> {
        self.add(a, &self.neg(b)?)
    }

    pub fn mul(&self, a: &Cyclotomic<T>, b: &Cyclotomic<T>) -> Result<Cyclotomic<T>, CycError> {
        self.check(a)?;
        self.check(b)?;
        let mut p = vec![T::zero(); 2 * self.degree - 1];
        for (i, x) in a.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.coeffs.iter().enumerate() {
                p[i + j] = p[i + j].clone() + x.clone() * y.clone();
            }
        }
        Ok(self.reduce(p))
    }

    /// `a · w^e`, by shifting and reducing.
    pub fn mul_root(&self, a: &Cyclotomic<T>, e: i64) -> Result<Cyclotomic<T>, CycError> {
        self.check(a)?;
        let e = e.rem_euclid(self.order as i64) as usize;
        let mut p = vec![T::zero(); e];
        p.extend(a.coeffs.iter().cloned());
        Ok(self.reduce(p))
    }

    pub fn mul_i(&self, a: &Cyclotomic<T>) -> Result<Cyclotomic<T>, CycError> {
        self.mul_root(a, (self.order / 4) as i64)
    }

    /// Complex conjugation, `w^j -> w^{-j}`.
    pub fn conj(&self, a: &Cyclotomic<T>) -> Result<Cyclotomic<T>, CycError> {
        self.check(a)?;
        let m = self.order as usize;
        let mut p = vec![T::zero(); m];
        for (j, c) in a.coeffs.iter().enumerate() {
            p[(m - j) % m] = c.clone();
        }
        Ok(self.reduce(p))
    }

    /// The integer value of `a`, if `a` is rational.
    pub fn is_integer(&self, a: &Cyclotomic<T>) -> Option<T> {
        self.check(a).ok()?;
        a.as_integer()
    }

    /// Writes `a = re + im·i` with integer `re`, `im`, if possible. Uses the
    /// projections `a + ā = 2re` and `-i(a - ā) = 2im`.
    pub fn gaussian_parts(&self, a: &Cyclotomic<T>) -> Option<Complex<T>> {
        let conj = self.conj(a).ok()?;
        let two = T::one() + T::one();
        let twice_re = self.is_integer(&self.add(a, &conj).ok()?)?;
        let diff = self.sub(a, &conj).ok()?;
        let twice_im = self.is_integer(&self.neg(&self.mul_i(&diff).ok()?).ok()?)?;
        let (re, re_rem) = (twice_re.clone() / two.clone(), twice_re % two.clone());
        let (im, im_rem) = (twice_im.clone() / two.clone(), twice_im % two);
        if !re_rem.is_zero() || !im_rem.is_zero() {
            return None;
        }
        let rebuilt = self
            .add(
                &self.from_integer(re.clone()),
                &self.mul_i(&self.from_integer(im.clone())).ok()?,
            )
            .ok()?;
        (rebuilt == *a).then(|| Complex::new(re, im))
    }
}

/// `lcm(exp(g), 4)`: the single ambient order for all character values of
/// `g` together with `i`.
pub fn ambient_order(g: &GroupSpec) -> u64 {
    g.exponent().lcm(&4)
}

/// The exponent `e` with `ψ_α(x) = w_M^e`, `M = ambient_order(g)`:
/// `e = Σ_j (M/n_j)·α_j·x_j mod M`.
pub fn character_exponent(g: &GroupSpec, alpha: &GroupElement, x: &GroupElement) -> u64 {
    let m = ambient_order(g) as u128;
    alpha
        .coords()
        .iter()
        .zip(x.coords())
        .zip(g.moduli())
        .fold(0u128, |acc, ((&a, &b), &n)| {
            (acc + (m / n as u128) * ((a as u128 * b as u128) % n as u128)) % m
        }) as u64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::parse_group_spec;

    fn ring(m: u64) -> CyclotomicRing<i64> {
        CyclotomicRing::new(m).unwrap()
    }

    #[test]
    fn root_power_examples() {
        let r4 = ring(4);
        assert_eq!(r4.root_power(1).coeffs(), &[0, 1]);
        assert_eq!(r4.root_power(2).coeffs(), &[-1, 0]);
        assert_eq!(r4.root_power(1), r4.i());
        let r12 = ring(12);
        assert_eq!(r12.root_power(12), r12.one());
        assert_eq!(r12.root_power(-1), r12.root_power(11));
    }

    #[test]
    fn rejects_orders_not_divisible_by_four() {
        assert_eq!(
            CyclotomicRing::<i64>::new(6).unwrap_err(),
            CycError::OrderNotMultipleOf4(6)
        );
        assert!(CyclotomicRing::<i64>::new(0).is_err());
    }

    #[test]
    fn ring_operation_examples() {
        let r4 = ring(4);
        let sum = r4.add(&r4.root_power(1), &r4.root_power(3)).unwrap();
        assert!(sum.is_zero());
        let r12 = ring(12);
        assert_eq!(r12.mul_i(&r12.root_power(4)).unwrap(), r12.root_power(7));
        assert_eq!(r12.mul(&r12.root_power(2), &r12.root_power(10)).unwrap(), r12.one());
        assert_eq!(r12.neg(&r12.one()).unwrap(), r12.root_power(6));
    }

    #[test]
    fn mismatched_orders_are_rejected() {
        let r4 = ring(4);
        let r8 = ring(8);
        assert_eq!(
            r4.add(&r4.one(), &r8.one()),
            Err(CycError::OrderMismatch { expected: 4, found: 8 })
        );
        assert!(r8.is_integer(&r4.one()).is_none());
    }

    #[test]
    fn integer_detection() {
        let r4 = ring(4);
        let s = r4.add(&r4.root_power(1), &r4.root_power(3)).unwrap();
        assert_eq!(r4.is_integer(&s), Some(0));
        assert_eq!(r4.is_integer(&r4.root_power(1)), None);
        // w_5 + w_5^2 + w_5^3 + w_5^4 inside Z[w_20]
        let r20 = ring(20);
        let mut counts = vec![0i64; 20];
        for k in 1..5 {
            counts[4 * k] += 1;
        }
        let s = r20.from_exponent_counts(&counts);
        assert_eq!(r20.is_integer(&s), Some(-1));
        assert!((s.to_complex::<f64>() - Complex::new(-1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn gaussian_projection() {
        let r12 = ring(12);
        let z = r12
            .add(&r12.from_integer(3), &r12.mul_i(&r12.from_integer(-2)).unwrap())
            .unwrap();
        assert_eq!(r12.gaussian_parts(&z), Some(Complex::new(3, -2)));
        assert_eq!(r12.gaussian_parts(&r12.root_power(1)), None);
        // sqrt(3) = w_12 + w_12^11 is real but irrational
        let s = r12.add(&r12.root_power(1), &r12.root_power(11)).unwrap();
        assert_eq!(r12.gaussian_parts(&s), None);
    }

    #[test]
    fn character_exponent_examples() {
        let z4 = parse_group_spec("Z4").unwrap();
        let e = |g: &GroupSpec, c: &[i64]| g.element(c).unwrap();
        assert_eq!(character_exponent(&z4, &e(&z4, &[1]), &e(&z4, &[1])), 1);
        let p = parse_group_spec("Z2xZ3").unwrap();
        assert_eq!(ambient_order(&p), 12);
        let (a, x) = (e(&p, &[1, 1]), e(&p, &[1, 1]));
        assert_eq!(character_exponent(&p, &a, &x), 10);
        let z: Complex<f64> = unit_root(12, 10);
        let direct: Complex<f64> = unit_root::<f64>(2, 1) * unit_root::<f64>(3, 1);
        assert!((z - direct).norm() < 1e-12);
        for x in p.elements() {
            assert_eq!(character_exponent(&p, &p.identity(), &x), 0);
        }
    }

    #[test]
    fn display_renders_powers_of_w() {
        let r12 = ring(12);
        let z = r12.sub(&r12.root_power(1), &r12.from_integer(2)).unwrap();
        assert_eq!(z.to_string(), "-2 + w");
        assert_eq!(r12.zero().to_string(), "0");
        assert_eq!(r12.root_power(3).to_string(), "w^3");
    }

    #[test]
    fn serializes_order_and_coeffs() {
        let r4 = ring(4);
        let json = serde_json::to_string(&r4.root_power(3)).unwrap();
        assert_eq!(json, r#"{"order":4,"coeffs":[0,-1]}"#);
    }
}
