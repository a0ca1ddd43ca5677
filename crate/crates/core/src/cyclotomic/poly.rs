//! Dense polynomials over the integers and the Gaussian integers, and the
//! cyclotomic polynomials built from them.

use std::collections::BTreeMap;

use num_complex::Complex;
use num_integer::Integer;
use serde::{Serialize, Serializer};

use super::{CycError, CyclotomicRing};
use crate::classes::residue_classes;
use crate::scalar::Coeff;

/// Integer polynomial, coefficients ascending. Trailing zeros are trimmed.
pub(crate) type IntPoly<T> = Vec<T>;

pub(crate) fn trim<T: Coeff>(p: &mut IntPoly<T>) {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
}

/// Exact quotient `num / den` for a monic `den`; any remainder is an error.
pub(crate) fn int_div_exact<T: Coeff>(num: &[T], den: &[T]) -> Result<IntPoly<T>, CycError> {
    let dd = den.len() - 1;
    debug_assert!(den[dd].is_one());
    let mut rem = num.to_vec();
    trim(&mut rem);
    if rem.len() <= dd {
        return if rem.is_empty() {
            Ok(Vec::new())
        } else {
            Err(CycError::InexactDivision)
        };
    }
    let mut quot = vec![T::zero(); rem.len() - dd];
    for k in (0..quot.len()).rev() {
        let lead = rem[k + dd].clone();
        if lead.is_zero() {
            continue;
        }
        for (j, d) in den.iter().enumerate() {
            rem[k + j] = rem[k + j].clone() - lead.clone() * d.clone();
        }
        quot[k] = lead;
    }
    if rem.iter().any(|c| !c.is_zero()) {
        return Err(CycError::InexactDivision);
    }
    trim(&mut quot);
    Ok(quot)
}

fn x_pow_minus_one<T: Coeff>(n: usize) -> IntPoly<T> {
    let mut p = vec![T::zero(); n + 1];
    p[0] = -T::one();
    p[n] = T::one();
    p
}

/// `Φ_d` for every divisor `d` of `n`, obtained by dividing `x^d - 1` by
/// the product of the lower `Φ`'s.
pub(crate) fn cyclotomic_family<T: Coeff>(n: u64) -> Result<BTreeMap<u64, IntPoly<T>>, CycError> {
    assert!(n >= 1, "cyclotomic polynomials are indexed from 1");
    let divisors: Vec<u64> = (1..=n).filter(|d| n.is_multiple_of(*d)).collect();
    let mut family: BTreeMap<u64, IntPoly<T>> = BTreeMap::new();
    for &d in &divisors {
        let mut phi = x_pow_minus_one::<T>(d as usize);
        for (&e, lower) in &family {
            if d % e == 0 {
                phi = int_div_exact(&phi, lower)?;
            }
        }
        family.insert(d, phi);
    }
    Ok(family)
}

pub(crate) fn cyclotomic_int<T: Coeff>(n: u64) -> Result<IntPoly<T>, CycError> {
    Ok(cyclotomic_family::<T>(n)?.remove(&n).unwrap())
}

/// A polynomial with Gaussian-integer coefficients, constant term first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GaussPoly<T> {
    coeffs: Vec<Complex<T>>,
}

impl<T: Coeff> GaussPoly<T> {
    pub fn new(mut coeffs: Vec<Complex<T>>) -> Self {
        while coeffs.last().is_some_and(|c| c.re.is_zero() && c.im.is_zero()) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn from_integers(coeffs: Vec<T>) -> Self {
        Self::new(coeffs.into_iter().map(|c| Complex::new(c, T::zero())).collect())
    }

    pub fn coeffs(&self) -> &[Complex<T>] {
        &self.coeffs
    }

    /// Degree; the zero polynomial reports `None`.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last().is_some_and(|c| c.re.is_one() && c.im.is_zero())
    }

    /// Real coefficients, if every imaginary part vanishes.
    pub fn as_integers(&self) -> Option<Vec<T>> {
        self.coeffs
            .iter()
            .map(|c| c.im.is_zero().then(|| c.re.clone()))
            .collect()
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.coeffs.is_empty() || other.coeffs.is_empty() {
            return Self::new(Vec::new());
        }
        let zero = Complex::new(T::zero(), T::zero());
        let mut out = vec![zero; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, x) in self.coeffs.iter().enumerate() {
            for (j, y) in other.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].clone() + x.clone() * y.clone();
            }
        }
        Self::new(out)
    }
}

impl<T: Coeff + Serialize> Serialize for GaussPoly<T> {
    /// Coefficient-ascending list of `[re, im]` pairs.
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(self.coeffs.iter().map(|c| [&c.re, &c.im]))
    }
}

impl<T: Coeff> std::fmt::Display for GaussPoly<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.coeffs.is_empty() {
            return f.write_str("0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.re.is_zero() && c.im.is_zero() {
                continue;
            }
            let coeff = match (c.re.is_zero(), c.im.is_zero()) {
                (_, true) => format!("{}", c.re),
                (true, false) if c.im.is_one() => "i".to_string(),
                (true, false) if (-c.im.clone()).is_one() => "-i".to_string(),
                (true, false) => format!("{}i", c.im),
                (false, false) if c.im.is_negative() => format!("({} - {}i)", c.re, c.im.abs()),
                (false, false) => format!("({} + {}i)", c.re, c.im),
            };
            let coeff = match (k, coeff.as_str()) {
                (0, _) => coeff,
                (_, "1") => String::new(),
                (_, "-1") => "-".to_string(),
                _ => coeff,
            };
            let term = match k {
                0 => coeff,
                1 => format!("{coeff}x"),
                _ => format!("{coeff}x^{k}"),
            };
            if first {
                f.write_str(&term)?;
                first = false;
            } else if let Some(rest) = term.strip_prefix('-') {
                write!(f, " - {rest}")?;
            } else {
                write!(f, " + {term}")?;
            }
        }
        Ok(())
    }
}

/// The `n`-th cyclotomic polynomial: monic, integer coefficients, degree
/// `φ(n)`.
pub fn cyclotomic_polynomial<T: Coeff>(n: u64) -> Result<GaussPoly<T>, CycError> {
    Ok(GaussPoly::from_integers(cyclotomic_int::<T>(n)?))
}

/// Euler's totient.
pub fn totient(n: u64) -> u64 {
    (1..=n).filter(|k| k.gcd(&n) == 1).count() as u64
}

/// The factors `Φ_n = Φ_n^1 · Φ_n^3` over the Gaussian integers, where
/// `Φ_n^r` collects the roots `w_n^a` with `a ≡ r (mod 4)`.
///
/// Each factor is expanded exactly in `Z[w_n]`; every coefficient must land
/// in `Z[i]`, otherwise the arithmetic is broken and an error is returned.
pub fn phi_factors_over_gaussians<T: Coeff>(n: u64) -> Result<(GaussPoly<T>, GaussPoly<T>), CycError> {
    let classes = residue_classes(n).map_err(|_| CycError::OrderNotMultipleOf4(n))?;
    let ring = CyclotomicRing::<T>::new(n)?;
    let expand = |exponents: &[u64]| -> Result<GaussPoly<T>, CycError> {
        let mut poly = vec![ring.one()];
        for &a in exponents {
            // multiply by (x - w^a)
            let mut next = vec![ring.zero(); poly.len() + 1];
            for (k, c) in poly.iter().enumerate() {
                next[k + 1] = ring.add(&next[k + 1], c)?;
                let shifted = ring.mul_root(c, a as i64)?;
                next[k] = ring.sub(&next[k], &shifted)?;
            }
            poly = next;
        }
        let coeffs = poly
            .iter()
            .map(|c| ring.gaussian_parts(c).ok_or(CycError::NonGaussianCoefficient))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(GaussPoly::new(coeffs))
    };
    Ok((expand(&classes.one_mod_4)?, expand(&classes.three_mod_4)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> GaussPoly<i64> {
        GaussPoly::from_integers(v.to_vec())
    }

    #[test]
    fn small_cyclotomic_polynomials() {
        assert_eq!(cyclotomic_polynomial::<i64>(1).unwrap(), ints(&[-1, 1]));
        assert_eq!(cyclotomic_polynomial::<i64>(2).unwrap(), ints(&[1, 1]));
        assert_eq!(cyclotomic_polynomial::<i64>(4).unwrap(), ints(&[1, 0, 1]));
        assert_eq!(cyclotomic_polynomial::<i64>(12).unwrap(), ints(&[1, 0, -1, 0, 1]));
        assert_eq!(cyclotomic_polynomial::<i64>(8).unwrap(), ints(&[1, 0, 0, 0, 1]));
    }

    #[test]
    fn phi_105_has_a_coefficient_of_minus_two() {
        let p = cyclotomic_polynomial::<i64>(105).unwrap();
        assert_eq!(p.degree(), Some(48));
        assert_eq!(p.coeffs()[7], Complex::new(-2, 0));
    }

    #[test]
    fn inexact_division_is_reported() {
        assert_eq!(
            int_div_exact::<i64>(&[1, 0, 1], &[-1, 1]),
            Err(CycError::InexactDivision)
        );
        assert_eq!(int_div_exact::<i64>(&[-1, 0, 1], &[-1, 1]).unwrap(), vec![1, 1]);
    }

    #[test]
    fn gaussian_factors_of_phi4() {
        let (f1, f3) = phi_factors_over_gaussians::<i64>(4).unwrap();
        assert_eq!(f1.coeffs(), &[Complex::new(0, -1), Complex::new(1, 0)]);
        assert_eq!(f3.coeffs(), &[Complex::new(0, 1), Complex::new(1, 0)]);
        assert!(matches!(
            phi_factors_over_gaussians::<i64>(6),
            Err(CycError::OrderNotMultipleOf4(6))
        ));
    }

    #[test]
    fn display_is_readable() {
        assert_eq!(ints(&[1, 0, -1, 0, 1]).to_string(), "x^4 - x^2 + 1");
        let (f1, _) = phi_factors_over_gaussians::<i64>(4).unwrap();
        assert_eq!(f1.to_string(), "x - i");
        assert_eq!(totient(12), 4);
    }
}
