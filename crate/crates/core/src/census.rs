//! Exhaustive enumeration of small tanglegrams up to equality.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::layout::crossing_number;
use crate::tanglegram::{CanonicalForm, Tanglegram};
use crate::trees::{Label, RootedBinaryTree};

/// Largest size `census` accepts.
pub const MAX_CENSUS_SIZE: usize = 6;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum Shape {
    Leaf,
    Join(Box<Shape>, Box<Shape>),
}

fn shapes(n: usize, memo: &mut BTreeMap<usize, Vec<Shape>>) -> Vec<Shape> {
    if let Some(s) = memo.get(&n) {
        return s.clone();
    }
    let mut out = Vec::new();
    if n == 1 {
        out.push(Shape::Leaf);
    }
    for k in 1..=n / 2 {
        let small = shapes(k, memo);
        let large = shapes(n - k, memo);
        for (i, a) in small.iter().enumerate() {
            for (j, b) in large.iter().enumerate() {
                if k == n - k && j < i {
                    continue;
                }
                out.push(Shape::Join(Box::new(a.clone()), Box::new(b.clone())));
            }
        }
    }
    memo.insert(n, out.clone());
    out
}

fn build(shape: &Shape, next: &mut usize) -> RootedBinaryTree {
    match shape {
        Shape::Leaf => {
            *next += 1;
            RootedBinaryTree::leaf(Label::from(*next))
        }
        Shape::Join(a, b) => {
            let a = build(a, next);
            let b = build(b, next);
            RootedBinaryTree::join(&a, &b).expect("labels are distinct")
        }
    }
}

/// One tree per unlabeled rooted binary shape with `n` leaves, leaves
/// labelled `1..=n` in plane order.
pub fn tree_shapes(n: usize) -> Vec<RootedBinaryTree> {
    if n == 0 {
        return Vec::new();
    }
    let mut memo = BTreeMap::new();
    shapes(n, &mut memo)
        .iter()
        .map(|s| build(s, &mut 0))
        .collect()
}

/// All permutations of `1..=n` in lexicographic order.
fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut current: Vec<usize> = (1..=n).collect();
    let mut out = vec![current.clone()];
    loop {
        let Some(i) = (1..n).rev().find(|&i| current[i - 1] < current[i]) else {
            return out;
        };
        let j = (i..n).rev().find(|&j| current[j] > current[i - 1]).unwrap();
        current.swap(i - 1, j);
        current[i..].reverse();
        out.push(current.clone());
    }
}

/// One representative of every tanglegram of size `n`, ordered by
/// canonical form.
pub fn enumerate_tanglegrams(n: usize) -> Result<Vec<Tanglegram>> {
    if n == 0 || n > MAX_CENSUS_SIZE {
        return Err(Error::InvalidArgument(format!(
            "census size must be between 1 and {MAX_CENSUS_SIZE}, got {n}"
        )));
    }
    let trees = tree_shapes(n);
    let matchings = permutations(n);
    let mut seen = BTreeMap::new();
    for left in &trees {
        for right in &trees {
            for sigma in &matchings {
                let pairs: Vec<(Label, Label)> = sigma
                    .iter()
                    .enumerate()
                    .map(|(i, &j)| (Label::from(i + 1), Label::from(j)))
                    .collect();
                let t = Tanglegram::new(left.clone(), right.clone(), &pairs)?;
                seen.entry(t.canonical_form()).or_insert(t);
            }
        }
    }
    Ok(seen.into_values().collect())
}

/// Tanglegram counts of one size, split by crossing number.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Census {
    pub size: usize,
    pub total: usize,
    pub by_crossing_number: BTreeMap<u64, usize>,
}

impl Census {
    pub fn planar(&self) -> usize {
        self.by_crossing_number.get(&0).copied().unwrap_or(0)
    }

    pub fn text_lines(&self) -> Vec<String> {
        let mut lines = vec![format!("size={} tanglegrams={}", self.size, self.total)];
        for (cr, count) in &self.by_crossing_number {
            lines.push(format!(
                "size={} crossing_number={cr} count={count}",
                self.size
            ));
        }
        lines
    }
}

pub fn census(n: usize) -> Result<Census> {
    let all = enumerate_tanglegrams(n)?;
    let mut by_crossing_number = BTreeMap::new();
    for t in &all {
        let cr = crossing_number(t, MAX_CENSUS_SIZE)?.crossings;
        *by_crossing_number.entry(cr).or_insert(0) += 1;
    }
    Ok(Census {
        size: n,
        total: all.len(),
        by_crossing_number,
    })
}

/// Canonical forms of all size-`n` tanglegrams, for membership checks.
pub fn canonical_forms(n: usize) -> Result<BTreeSet<CanonicalForm>> {
    Ok(enumerate_tanglegrams(n)?
        .iter()
        .map(|t| t.canonical_form())
        .collect())
}
