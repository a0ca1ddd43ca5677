//! Scalar abstractions shared by the exact and numeric engines.
//!
//! Exact arithmetic is generic over an integer-like [`Coeff`] (machine
//! integers or big integers); numeric checks are generic over a [`Real`]
//! floating type.

use std::fmt::{Debug, Display};

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, Num, Signed, ToPrimitive};

/// Integer coefficient type for exact cyclotomic arithmetic.
pub trait Coeff:
    Clone + Debug + Display + PartialEq + Num + Signed + FromPrimitive + ToPrimitive + Send + Sync + 'static
{
}

impl<T> Coeff for T where
    T: Clone + Debug + Display + PartialEq + Num + Signed + FromPrimitive + ToPrimitive + Send + Sync + 'static
{
}

/// Floating type used by the numeric oracle.
pub trait Real: Float + FloatConst + FromPrimitive + Debug + Send + Sync + 'static {}

impl<F> Real for F where F: Float + FloatConst + FromPrimitive + Debug + Send + Sync + 'static {}

pub(crate) fn coeff_from_i64<T: Coeff>(v: i64) -> T {
    T::from_i64(v).expect("coefficient type cannot represent a small integer")
}

pub(crate) fn real_from_f64<F: Real>(v: f64) -> F {
    F::from_f64(v).expect("float conversion")
}

/// `exp(2πi·e/order)` evaluated directly from the reduced angle.
pub fn unit_root<F: Real>(order: u64, e: i64) -> Complex<F> {
    let r = e.rem_euclid(order as i64) as u64;
    let theta = F::TAU() * F::from_u64(r).unwrap() / F::from_u64(order).unwrap();
    Complex::new(theta.cos(), theta.sin())
}

/// Neumaier-compensated summation of complex terms.
#[derive(Clone, Copy, Debug)]
pub struct CompensatedSum<F> {
    sum: Complex<F>,
    carry: Complex<F>,
}

impl<F: Real> Default for CompensatedSum<F> {
    fn default() -> Self {
        Self {
            sum: Complex::new(F::zero(), F::zero()),
            carry: Complex::new(F::zero(), F::zero()),
        }
    }
}

fn neumaier_step<F: Float>(sum: &mut F, carry: &mut F, x: F) {
    let t = *sum + x;
    if sum.abs() >= x.abs() {
        *carry = *carry + ((*sum - t) + x);
    } else {
        *carry = *carry + ((x - t) + *sum);
    }
    *sum = t;
}

impl<F: Real> CompensatedSum<F> {
    pub fn add(&mut self, z: Complex<F>) {
        neumaier_step(&mut self.sum.re, &mut self.carry.re, z.re);
        neumaier_step(&mut self.sum.im, &mut self.carry.im, z.im);
    }

    pub fn value(&self) -> Complex<F> {
        self.sum + self.carry
    }
}
