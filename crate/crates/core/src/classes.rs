//! Symbol sets and the set-theoretic side of the integrality criterion.
//!
//! * the atom `[x]` is the set of generators of `<x>`; unions of atoms are
//!   exactly the members of the Boolean algebra generated by subgroups;
//! * for `x` of order `m ≡ 0 (mod 4)` the class `⟦x⟧ = { kx : k ≡ 1 (mod 4),
//!   gcd(k, m) = 1 }` splits the atom as `[x] = ⟦x⟧ ⊔ ⟦-x⟧`;
//! * skew-symmetric unions of classes form the family tested by
//!   [`in_d_gamma`].

use std::collections::BTreeSet;

use num_integer::Integer;
use serde::Serialize;
use thiserror::Error;

use crate::group::{GroupElement, GroupError, GroupSpec};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClassError {
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error("the identity cannot belong to a symbol set")]
    IdentityInSet,
    #[error("element {0} does not have order divisible by 4")]
    NotInGamma4(GroupElement),
    #[error("the mod-4 split of units needs m divisible by 4, got {0}")]
    ModulusNotMultipleOf4(u64),
}

/// A set of non-identity group elements, the connection set of a mixed
/// Cayley graph.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SymbolSet {
    group: GroupSpec,
    elements: BTreeSet<GroupElement>,
}

impl SymbolSet {
    pub fn new<I>(group: &GroupSpec, elements: I) -> Result<Self, ClassError>
    where
        I: IntoIterator<Item = GroupElement>,
    {
        let mut set = BTreeSet::new();
        for x in elements {
            group.check(&x)?;
            if x.is_identity() {
                return Err(ClassError::IdentityInSet);
            }
            set.insert(x);
        }
        Ok(Self {
            group: group.clone(),
            elements: set,
        })
    }

    pub fn empty(group: &GroupSpec) -> Self {
        Self {
            group: group.clone(),
            elements: BTreeSet::new(),
        }
    }

    /// Parses the external element-list syntax (see
    /// [`GroupSpec::parse_element_list`]).
    pub fn parse(group: &GroupSpec, text: &str) -> Result<Self, ClassError> {
        Self::new(group, group.parse_element_list(text)?)
    }

    pub(crate) fn from_trusted(group: &GroupSpec, elements: BTreeSet<GroupElement>) -> Self {
        debug_assert!(elements.iter().all(|x| !x.is_identity()));
        Self {
            group: group.clone(),
            elements,
        }
    }

    pub fn group(&self) -> &GroupSpec {
        &self.group
    }

    pub fn elements(&self) -> &BTreeSet<GroupElement> {
        &self.elements
    }

    pub fn iter(&self) -> impl Iterator<Item = &GroupElement> {
        self.elements.iter()
    }

    pub fn contains(&self, x: &GroupElement) -> bool {
        self.elements.contains(x)
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    fn neg(&self, x: &GroupElement) -> GroupElement {
        self.group.negate_unchecked(x)
    }

    /// Closed under negation.
    pub fn is_symmetric(&self) -> bool {
        self.iter().all(|x| self.contains(&self.neg(x)))
    }

    /// `S ∩ -S = ∅`.
    pub fn is_skew_symmetric(&self) -> bool {
        self.iter().all(|x| !self.contains(&self.neg(x)))
    }

    /// Splits `S` into `(S \ S̄, S̄)` where `S̄ = { u ∈ S : -u ∉ S }`.
    pub fn skew_split(&self) -> (SymbolSet, SymbolSet) {
        let (skew, sym): (BTreeSet<_>, BTreeSet<_>) = self
            .elements
            .iter()
            .cloned()
            .partition(|x| !self.contains(&self.neg(x)));
        (
            Self::from_trusted(&self.group, sym),
            Self::from_trusted(&self.group, skew),
        )
    }

    /// Disjoint union; `None` when the sets overlap.
    pub fn disjoint_union(&self, other: &SymbolSet) -> Option<SymbolSet> {
        debug_assert_eq!(self.group, other.group);
        if !self.elements.is_disjoint(&other.elements) {
            return None;
        }
        let elements = self.elements.union(&other.elements).cloned().collect();
        Some(Self::from_trusted(&self.group, elements))
    }
}

impl std::fmt::Display for SymbolSet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&crate::group::format_elements(&self.elements))
    }
}

impl Serialize for SymbolSet {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(&self.elements)
    }
}

/// `{ k : 1 ≤ k ≤ m, gcd(k, m) = 1 }`; for `m = 1` this is `{1}`.
pub fn units(m: u64) -> Vec<u64> {
    (1..=m).filter(|k| k.gcd(&m) == 1).collect()
}

/// Units modulo `m` split by residue mod 4.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ResidueClasses {
    pub units: Vec<u64>,
    pub one_mod_4: Vec<u64>,
    pub three_mod_4: Vec<u64>,
}

pub fn residue_classes(m: u64) -> Result<ResidueClasses, ClassError> {
    if m == 0 || !m.is_multiple_of(4) {
        return Err(ClassError::ModulusNotMultipleOf4(m));
    }
    let units = units(m);
    let (one_mod_4, three_mod_4) = units.iter().partition(|&&k| k % 4 == 1);
    Ok(ResidueClasses {
        units,
        one_mod_4,
        three_mod_4,
    })
}

/// The set of generators of `<x>`.
pub fn atom(g: &GroupSpec, x: &GroupElement) -> Result<BTreeSet<GroupElement>, GroupError> {
    g.check(x)?;
    Ok(atom_unchecked(g, x))
}

pub(crate) fn atom_unchecked(g: &GroupSpec, x: &GroupElement) -> BTreeSet<GroupElement> {
    let m = g.order_unchecked(x);
    units(m).into_iter().map(|k| g.scale_unchecked(k as i64, x)).collect()
}

fn require_gamma4(g: &GroupSpec, x: &GroupElement) -> Result<u64, ClassError> {
    let m = g.element_order(x)?;
    if m % 4 != 0 {
        return Err(ClassError::NotInGamma4(x.clone()));
    }
    Ok(m)
}

/// `⟦x⟧ = { kx : k ≡ 1 (mod 4), gcd(k, ord x) = 1 }`.
pub fn approx_class(g: &GroupSpec, x: &GroupElement) -> Result<BTreeSet<GroupElement>, ClassError> {
    require_gamma4(g, x)?;
    Ok(approx_class_unchecked(g, x))
}

pub(crate) fn approx_class_unchecked(g: &GroupSpec, x: &GroupElement) -> BTreeSet<GroupElement> {
    let m = g.order_unchecked(x);
    units(m)
        .into_iter()
        .filter(|k| k % 4 == 1)
        .map(|k| g.scale_unchecked(k as i64, x))
        .collect()
}

/// `M_r(x) = { kx : 1 ≤ k ≤ ord x, k ≡ r (mod 4) }` for `r = 0..4`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MSets {
    pub m0: BTreeSet<GroupElement>,
    pub m1: BTreeSet<GroupElement>,
    pub m2: BTreeSet<GroupElement>,
    pub m3: BTreeSet<GroupElement>,
}

impl MSets {
    pub fn get(&self, r: usize) -> &BTreeSet<GroupElement> {
        match r % 4 {
            0 => &self.m0,
            1 => &self.m1,
            2 => &self.m2,
            _ => &self.m3,
        }
    }
}

pub fn m_sets(g: &GroupSpec, x: &GroupElement) -> Result<MSets, ClassError> {
    let m = require_gamma4(g, x)?;
    let mut sets: [BTreeSet<GroupElement>; 4] = Default::default();
    for k in 1..=m {
        sets[(k % 4) as usize].insert(g.scale_unchecked(k as i64, x));
    }
    let [m0, m1, m2, m3] = sets;
    Ok(MSets { m0, m1, m2, m3 })
}

/// Odd divisors of a positive integer, split by residue mod 4.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OddDivisors {
    pub all: Vec<u64>,
    pub one_mod_4: Vec<u64>,
    pub three_mod_4: Vec<u64>,
}

pub fn odd_divisor_split(value: u64) -> OddDivisors {
    assert!(value >= 1, "odd_divisor_split needs a positive integer");
    let all: Vec<u64> = (1..=value).step_by(2).filter(|d| value.is_multiple_of(*d)).collect();
    let (one_mod_4, three_mod_4) = all.iter().partition(|&&d| d % 4 == 1);
    OddDivisors {
        all,
        one_mod_4,
        three_mod_4,
    }
}

/// One `⟦±hx⟧` term of an M-set decomposition.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClassTerm {
    /// The odd divisor `h` of `ord(x)/4`.
    pub divisor: u64,
    /// Whether the class is `⟦-hx⟧` rather than `⟦hx⟧`.
    pub negated: bool,
    pub representative: GroupElement,
    pub members: BTreeSet<GroupElement>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MDecomposition {
    pub m1: Vec<ClassTerm>,
    pub m3: Vec<ClassTerm>,
}

impl MDecomposition {
    fn union(terms: &[ClassTerm]) -> BTreeSet<GroupElement> {
        terms.iter().flat_map(|t| t.members.iter().cloned()).collect()
    }

    pub fn m1_union(&self) -> BTreeSet<GroupElement> {
        Self::union(&self.m1)
    }

    pub fn m3_union(&self) -> BTreeSet<GroupElement> {
        Self::union(&self.m3)
    }
}

/// Writes `M_1(x)` and `M_3(x)` as unions of classes `⟦±hx⟧` over the odd
/// divisors `h` of `ord(x)/4`: divisors `≡ 1 (mod 4)` contribute `⟦hx⟧` to
/// `M_1` and `⟦-hx⟧` to `M_3`, divisors `≡ 3 (mod 4)` the other way round.
pub fn decompose_m1_m3(g: &GroupSpec, x: &GroupElement) -> Result<MDecomposition, ClassError> {
    let m = require_gamma4(g, x)?;
    let divisors = odd_divisor_split(m / 4);
    let term = |h: u64, negated: bool| {
        let hx = g.scale_unchecked(h as i64, x);
        let representative = if negated { g.negate_unchecked(&hx) } else { hx };
        ClassTerm {
            divisor: h,
            negated,
            members: approx_class_unchecked(g, &representative),
            representative,
        }
    };
    let mut m1 = Vec::new();
    let mut m3 = Vec::new();
    for &h in &divisors.all {
        let h_is_one_mod_4 = h % 4 == 1;
        m1.push(term(h, !h_is_one_mod_4));
        m3.push(term(h, h_is_one_mod_4));
    }
    Ok(MDecomposition { m1, m3 })
}

/// A block of a decomposition: an atom or a class with its smallest
/// element as representative.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Block {
    pub representative: GroupElement,
    pub members: Vec<GroupElement>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MembershipFailure {
    /// Some element's atom is not contained in the set.
    NotUnionOfAtoms,
    /// The group exponent is not divisible by 4, so only `∅` qualifies.
    #[serde(rename = "exponent_not_multiple_of_4")]
    ExponentNotMultipleOf4,
    /// The set contains both `s` and `-s`.
    NotSkewSymmetric,
    /// Some element has order not divisible by 4.
    #[serde(rename = "order_not_multiple_of_4")]
    OrderNotMultipleOf4,
    /// Some element's class is not contained in the set.
    NotUnionOfClasses,
}

/// Witness for a membership test: the blocks covering the set, plus the
/// offending elements when membership fails. On failure `residue` is
/// sorted, so its first entry is the smallest offender.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClassDecomposition {
    pub atoms: Vec<Block>,
    pub classes: Vec<Block>,
    pub residue: Vec<GroupElement>,
    pub failure: Option<MembershipFailure>,
}

impl ClassDecomposition {
    fn member_with(atoms: Vec<Block>, classes: Vec<Block>) -> Self {
        Self {
            atoms,
            classes,
            residue: Vec::new(),
            failure: None,
        }
    }

    fn failed(atoms: Vec<Block>, classes: Vec<Block>, residue: Vec<GroupElement>, failure: MembershipFailure) -> Self {
        Self {
            atoms,
            classes,
            residue,
            failure: Some(failure),
        }
    }

    pub fn is_member(&self) -> bool {
        self.failure.is_none()
    }

    /// Smallest offending element, if membership failed.
    pub fn witness(&self) -> Option<&GroupElement> {
        self.residue.first()
    }
}

/// Covers `set` greedily by `block_of(s)` for ascending `s`; elements whose
/// block leaks outside `set` go to the residue.
fn cover_by_blocks<F>(set: &BTreeSet<GroupElement>, mut block_of: F) -> (Vec<Block>, Vec<GroupElement>)
where
    F: FnMut(&GroupElement) -> BTreeSet<GroupElement>,
{
    let mut covered = BTreeSet::new();
    let mut blocks = Vec::new();
    let mut residue = Vec::new();
    for s in set {
        if covered.contains(s) {
            continue;
        }
        let block = block_of(s);
        if block.is_subset(set) {
            covered.extend(block.iter().cloned());
            blocks.push(Block {
                representative: s.clone(),
                members: block.into_iter().collect(),
            });
        } else {
            // every element of the block shares the same block, so all of
            // them fail together
            for y in block.intersection(set) {
                covered.insert(y.clone());
                residue.push(y.clone());
            }
        }
    }
    residue.sort();
    (blocks, residue)
}

/// Membership of `S` in the Boolean algebra generated by the subgroups:
/// `S` must be a union of atoms.
pub fn in_boolean_algebra(set: &SymbolSet) -> ClassDecomposition {
    let g = set.group();
    let (atoms, residue) = cover_by_blocks(set.elements(), |s| atom_unchecked(g, s));
    if residue.is_empty() {
        ClassDecomposition::member_with(atoms, Vec::new())
    } else {
        ClassDecomposition::failed(atoms, Vec::new(), residue, MembershipFailure::NotUnionOfAtoms)
    }
}

/// Membership of `S` among the skew-symmetric unions of classes `⟦x⟧`.
/// When the exponent is not divisible by 4 only the empty set qualifies.
pub fn in_d_gamma(set: &SymbolSet) -> ClassDecomposition {
    let g = set.group();
    if set.is_empty() {
        return ClassDecomposition::member_with(Vec::new(), Vec::new());
    }
    let all = || set.iter().cloned().collect::<Vec<_>>();
    if !g.exponent().is_multiple_of(4) {
        return ClassDecomposition::failed(Vec::new(), Vec::new(), all(), MembershipFailure::ExponentNotMultipleOf4);
    }
    let paired: Vec<_> = set
        .iter()
        .filter(|s| set.contains(&g.negate_unchecked(s)))
        .cloned()
        .collect();
    if !paired.is_empty() {
        return ClassDecomposition::failed(Vec::new(), Vec::new(), paired, MembershipFailure::NotSkewSymmetric);
    }
    let low_order: Vec<_> = set
        .iter()
        .filter(|s| !g.order_unchecked(s).is_multiple_of(4))
        .cloned()
        .collect();
    if !low_order.is_empty() {
        return ClassDecomposition::failed(
            Vec::new(),
            Vec::new(),
            low_order,
            MembershipFailure::OrderNotMultipleOf4,
        );
    }
    let (classes, residue) = cover_by_blocks(set.elements(), |s| approx_class_unchecked(g, s));
    if residue.is_empty() {
        ClassDecomposition::member_with(Vec::new(), classes)
    } else {
        ClassDecomposition::failed(Vec::new(), classes, residue, MembershipFailure::NotUnionOfClasses)
    }
}

/// Representatives of all atoms of `g` (including `{0}`), by smallest
/// member.
pub fn all_atoms(g: &GroupSpec) -> Vec<Block> {
    let everything: BTreeSet<_> = g.elements().collect();
    cover_by_blocks(&everything, |s| atom_unchecked(g, s)).0
}

/// All classes `⟦x⟧` for `x ∈ Γ(4)`, by smallest member.
pub fn all_classes(g: &GroupSpec) -> Vec<Block> {
    cover_by_blocks(&g.gamma4(), |s| approx_class_unchecked(g, s)).0
}
