#![allow(dead_code)]

use std::collections::BTreeSet;

use mixcay::{GroupElement, GroupSpec};

/// One representative per isomorphism type of abelian group of order `n`,
/// as invariant factors `d_1 | d_2 | ... | d_k`.
pub fn abelian_groups(n: u64) -> Vec<GroupSpec> {
    fn rec(rem: u64, prefix: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        if rem == 1 {
            if !prefix.is_empty() {
                out.push(prefix.clone());
            }
            return;
        }
        let last = prefix.last().copied().unwrap_or(1);
        for d in 2..=rem {
            if d % last == 0 && rem.is_multiple_of(d) && (rem / d == 1 || (rem / d).is_multiple_of(d)) {
                prefix.push(d);
                rec(rem / d, prefix, out);
                prefix.pop();
            }
        }
    }
    let mut out = Vec::new();
    rec(n, &mut Vec::new(), &mut out);
    out.into_iter().map(|m| GroupSpec::new(m).unwrap()).collect()
}

pub fn abelian_groups_up_to(max: u64) -> Vec<GroupSpec> {
    (2..=max).flat_map(abelian_groups).collect()
}

pub fn group(text: &str) -> GroupSpec {
    mixcay::parse_group_spec(text).unwrap()
}

/// `<x>` by repeated addition.
pub fn generated(g: &GroupSpec, x: &GroupElement) -> BTreeSet<GroupElement> {
    let mut out = BTreeSet::new();
    let mut y = g.identity();
    loop {
        out.insert(y.clone());
        y = g.add(&y, x).unwrap();
        if y.is_identity() {
            return out;
        }
    }
}

pub fn order_by_iteration(g: &GroupSpec, x: &GroupElement) -> u64 {
    generated(g, x).len() as u64
}

/// `{ y : <y> = <x> }`, straight from the definition.
pub fn atom_by_definition(g: &GroupSpec, x: &GroupElement) -> BTreeSet<GroupElement> {
    let target = generated(g, x);
    g.elements().filter(|y| generated(g, y) == target).collect()
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// `{ kx : k ≡ 1 (mod 4), gcd(k, m) = 1 }` by repeated addition.
pub fn class_by_definition(g: &GroupSpec, x: &GroupElement) -> BTreeSet<GroupElement> {
    let m = order_by_iteration(g, x);
    let mut out = BTreeSet::new();
    let mut y = g.identity();
    for k in 1..=m {
        y = g.add(&y, x).unwrap();
        if k % 4 == 1 && gcd(k, m) == 1 {
            out.insert(y.clone());
        }
    }
    out
}

pub fn negate_all(g: &GroupSpec, s: &BTreeSet<GroupElement>) -> BTreeSet<GroupElement> {
    s.iter().map(|x| g.negate(x).unwrap()).collect()
}

pub fn translate(g: &GroupSpec, a: &GroupElement, s: &BTreeSet<GroupElement>) -> BTreeSet<GroupElement> {
    s.iter().map(|x| g.add(a, x).unwrap()).collect()
}
