//! Finite abelian groups presented as direct products of cyclic groups.
//!
//! Notation is additive throughout. Elements are residue tuples and the
//! canonical element ordering is lexicographic in the coordinates (last
//! coordinate varies fastest); that ordering fixes matrix indexing.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::Limits;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("malformed group spec {0:?}: expected `Z<m>(xZ<m>)*` or `<m>(,<m>)*`")]
    Malformed(String),
    #[error("modulus {0} is below 2")]
    ModulusTooSmall(u64),
    #[error("group order overflows 64 bits")]
    OrderOverflow,
    #[error("element has {found} coordinates but the group has {expected} factors")]
    Arity { expected: usize, found: usize },
    #[error("coordinate {value} is out of range for modulus {modulus}")]
    OutOfRange { value: u64, modulus: u64 },
    #[error("malformed element {0:?}")]
    MalformedElement(String),
    #[error("group order {order} exceeds the configured limit {limit}")]
    TooLarge { order: u64, limit: u64 },
}

/// A group `Z_{n_1} x ... x Z_{n_k}` given by its ordered list of moduli.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GroupSpec {
    moduli: Vec<u64>,
    order: u64,
    exponent: u64,
}

/// A residue tuple, one reduced coordinate per cyclic factor.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GroupElement(Vec<u64>);

impl GroupElement {
    pub fn new(coords: Vec<u64>) -> Self {
        Self(coords)
    }

    pub fn coords(&self) -> &[u64] {
        &self.0
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (j, c) in self.0.iter().enumerate() {
            if j > 0 {
                f.write_str(",")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

impl Serialize for GroupElement {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Renders an element list in the external `a;b;c` form.
pub fn format_elements<'a, I>(elements: I) -> String
where
    I: IntoIterator<Item = &'a GroupElement>,
{
    elements
        .into_iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join(";")
}

impl GroupSpec {
    pub fn new(moduli: Vec<u64>) -> Result<Self, GroupError> {
        if moduli.is_empty() {
            return Err(GroupError::Malformed(String::new()));
        }
        if let Some(&m) = moduli.iter().find(|&&m| m < 2) {
            return Err(GroupError::ModulusTooSmall(m));
        }
        let order = moduli
            .iter()
            .try_fold(1u64, |acc, &m| acc.checked_mul(m))
            .ok_or(GroupError::OrderOverflow)?;
        let exponent = moduli.iter().fold(1u64, |acc, &m| acc.lcm(&m));
        Ok(Self {
            moduli,
            order,
            exponent,
        })
    }

    /// Convenience constructor for the cyclic group `Z_n`.
    pub fn cyclic(n: u64) -> Result<Self, GroupError> {
        Self::new(vec![n])
    }

    pub fn moduli(&self) -> &[u64] {
        &self.moduli
    }

    pub fn rank(&self) -> usize {
        self.moduli.len()
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    /// The lcm of the moduli, i.e. the largest element order.
    pub fn exponent(&self) -> u64 {
        self.exponent
    }

    pub fn identity(&self) -> GroupElement {
        GroupElement(vec![0; self.rank()])
    }

    /// Builds an element from arbitrary integers, reducing each coordinate.
    pub fn element(&self, coords: &[i64]) -> Result<GroupElement, GroupError> {
        self.check_arity(coords.len())?;
        Ok(GroupElement(
            coords
                .iter()
                .zip(&self.moduli)
                .map(|(&c, &m)| c.rem_euclid(m as i64) as u64)
                .collect(),
        ))
    }

    fn check_arity(&self, found: usize) -> Result<(), GroupError> {
        if found != self.rank() {
            return Err(GroupError::Arity {
                expected: self.rank(),
                found,
            });
        }
        Ok(())
    }

    /// Verifies that `x` is a reduced element of this group.
    pub fn check(&self, x: &GroupElement) -> Result<(), GroupError> {
        self.check_arity(x.0.len())?;
        for (&value, &modulus) in x.0.iter().zip(&self.moduli) {
            if value >= modulus {
                return Err(GroupError::OutOfRange { value, modulus });
            }
        }
        Ok(())
    }

    pub fn add(&self, x: &GroupElement, y: &GroupElement) -> Result<GroupElement, GroupError> {
        self.check(x)?;
        self.check(y)?;
        Ok(self.add_unchecked(x, y))
    }

    pub fn negate(&self, x: &GroupElement) -> Result<GroupElement, GroupError> {
        self.check(x)?;
        Ok(self.negate_unchecked(x))
    }

    /// The `k`-fold sum of `x`; negative `k` scales the inverse.
    pub fn scale(&self, k: i64, x: &GroupElement) -> Result<GroupElement, GroupError> {
        self.check(x)?;
        Ok(self.scale_unchecked(k, x))
    }

    pub(crate) fn add_unchecked(&self, x: &GroupElement, y: &GroupElement) -> GroupElement {
        GroupElement(
            x.0.iter()
                .zip(&y.0)
                .zip(&self.moduli)
                .map(|((&a, &b), &m)| ((a as u128 + b as u128) % m as u128) as u64)
                .collect(),
        )
    }

    pub(crate) fn negate_unchecked(&self, x: &GroupElement) -> GroupElement {
        GroupElement(x.0.iter().zip(&self.moduli).map(|(&a, &m)| (m - a) % m).collect())
    }

    pub(crate) fn scale_unchecked(&self, k: i64, x: &GroupElement) -> GroupElement {
        GroupElement(
            x.0.iter()
                .zip(&self.moduli)
                .map(|(&a, &m)| {
                    let k = (k as i128).rem_euclid(m as i128) as u128;
                    ((k * a as u128) % m as u128) as u64
                })
                .collect(),
        )
    }

    /// `lcm_j n_j / gcd(n_j, x_j)`.
    pub fn element_order(&self, x: &GroupElement) -> Result<u64, GroupError> {
        self.check(x)?;
        Ok(self.order_unchecked(x))
    }

    pub(crate) fn order_unchecked(&self, x: &GroupElement) -> u64 {
        x.0.iter()
            .zip(&self.moduli)
            .fold(1u64, |acc, (&a, &m)| acc.lcm(&(m / m.gcd(&a))))
    }

    /// Position of `x` in the lexicographic enumeration.
    pub fn index_of(&self, x: &GroupElement) -> usize {
        x.0.iter()
            .zip(&self.moduli)
            .fold(0usize, |acc, (&a, &m)| acc * m as usize + a as usize)
    }

    pub fn element_at(&self, mut index: usize) -> GroupElement {
        let mut coords = vec![0; self.rank()];
        for (slot, &m) in coords.iter_mut().zip(&self.moduli).rev() {
            *slot = (index % m as usize) as u64;
            index /= m as usize;
        }
        GroupElement(coords)
    }

    /// Lazily walks every element in lexicographic order, identity first.
    pub fn elements(&self) -> impl Iterator<Item = GroupElement> + '_ {
        (0..self.order as usize).map(move |i| self.element_at(i))
    }

    /// All elements in lexicographic order, refusing groups above the
    /// dense-size limit.
    pub fn enumerate(&self, limits: &Limits) -> Result<Vec<GroupElement>, GroupError> {
        limits.check_dense(self)?;
        Ok(self.elements().collect())
    }

    /// Elements whose order is divisible by 4.
    pub fn gamma4(&self) -> BTreeSet<GroupElement> {
        if !self.exponent.is_multiple_of(4) {
            return BTreeSet::new();
        }
        self.elements()
            .filter(|x| self.order_unchecked(x).is_multiple_of(4))
            .collect()
    }

    /// Parses one element: comma-separated integers, negatives reduced.
    pub fn parse_element(&self, text: &str) -> Result<GroupElement, GroupError> {
        let coords = text
            .split(',')
            .map(|c| c.trim().parse::<i64>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|_| GroupError::MalformedElement(text.to_string()))?;
        self.element(&coords)
    }

    /// Parses a `;`-separated element list. For cyclic groups a comma also
    /// separates elements, so `1,2` in `Z4` means two elements. The empty
    /// string is the empty list.
    pub fn parse_element_list(&self, text: &str) -> Result<Vec<GroupElement>, GroupError> {
        let text = text.trim();
        if text.is_empty() {
            return Ok(Vec::new());
        }
        let separators: &[char] = if self.rank() == 1 { &[';', ','] } else { &[';'] };
        text.split(separators).map(|item| self.parse_element(item)).collect()
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (j, m) in self.moduli.iter().enumerate() {
            if j > 0 {
                f.write_str("x")?;
            }
            write!(f, "Z{m}")?;
        }
        Ok(())
    }
}

impl FromStr for GroupSpec {
    type Err = GroupError;

    fn from_str(text: &str) -> Result<Self, Self::Err> {
        parse_group_spec(text)
    }
}

impl Serialize for GroupSpec {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Parses `Z4`, `Z2xZ4` or the bare list `2,4`. Moduli keep their written
/// order and are not normalized to prime powers.
pub fn parse_group_spec(text: &str) -> Result<GroupSpec, GroupError> {
    let malformed = || GroupError::Malformed(text.to_string());
    let trimmed = text.trim();
    if trimmed.is_empty() {
        return Err(malformed());
    }
    let moduli = if trimmed.starts_with('Z') {
        trimmed
            .split('x')
            .map(|factor| {
                factor
                    .trim()
                    .strip_prefix('Z')
                    .filter(|digits| !digits.is_empty() && digits.bytes().all(|b| b.is_ascii_digit()))
                    .and_then(|digits| digits.parse::<u64>().ok())
                    .ok_or_else(malformed)
            })
            .collect::<Result<Vec<_>, _>>()?
    } else {
        trimmed
            .split(',')
            .map(|m| {
                let m = m.trim();
                if m.is_empty() || !m.bytes().all(|b| b.is_ascii_digit()) {
                    return Err(malformed());
                }
                m.parse::<u64>().map_err(|_| malformed())
            })
            .collect::<Result<Vec<_>, _>>()?
    };
    GroupSpec::new(moduli)
}
