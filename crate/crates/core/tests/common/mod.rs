#![allow(dead_code)]

use std::collections::{BTreeSet, HashMap};

use rand::seq::SliceRandom;
use rand::Rng;
use tanglegram::{Label, NodeId, Permutation, RootedBinaryTree, Tanglegram};

pub fn labels(xs: &[usize]) -> Vec<Label> {
    xs.iter().map(|&x| Label::from(x)).collect()
}

/// All permutations of `items`, lexicographic when `items` is sorted.
pub fn all_orders<T: Clone>(items: &[T]) -> Vec<Vec<T>> {
    if items.is_empty() {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for i in 0..items.len() {
        let mut rest = items.to_vec();
        let first = rest.remove(i);
        for mut tail in all_orders(&rest) {
            tail.insert(0, first.clone());
            out.push(tail);
        }
    }
    out
}

pub fn all_perms(n: usize) -> Vec<Permutation> {
    all_orders(&(1..=n).collect::<Vec<_>>())
        .into_iter()
        .map(|v| Permutation::new(v).unwrap())
        .collect()
}

pub fn random_perm(rng: &mut impl Rng, n: usize) -> Permutation {
    let mut v: Vec<usize> = (1..=n).collect();
    v.shuffle(rng);
    Permutation::new(v).unwrap()
}

/// Random tree on the given labels by repeatedly joining two random parts.
pub fn random_tree(rng: &mut impl Rng, labels: &[Label]) -> RootedBinaryTree {
    let mut parts: Vec<RootedBinaryTree> =
        labels.iter().cloned().map(RootedBinaryTree::leaf).collect();
    while parts.len() > 1 {
        let i = rng.gen_range(0..parts.len());
        let a = parts.swap_remove(i);
        let j = rng.gen_range(0..parts.len());
        let b = parts.swap_remove(j);
        parts.push(RootedBinaryTree::join(&a, &b).unwrap());
    }
    parts.pop().unwrap()
}

pub fn random_tanglegram(rng: &mut impl Rng, n: usize) -> Tanglegram {
    let left_labels: Vec<Label> = (1..=n)
        .map(|i| Label::new(format!("a{i}")).unwrap())
        .collect();
    let right_labels: Vec<Label> = (1..=n)
        .map(|i| Label::new(format!("b{i}")).unwrap())
        .collect();
    let left = random_tree(rng, &left_labels);
    let right = random_tree(rng, &right_labels);
    let mut partners = right_labels.clone();
    partners.shuffle(rng);
    let pairs: Vec<(Label, Label)> = left_labels.into_iter().zip(partners).collect();
    Tanglegram::new(left, right, &pairs).unwrap()
}

/// Unlabeled plane shape of `tree` drawn with leaves at `pos` (by node).
fn plane_shape(
    tree: &RootedBinaryTree,
    v: NodeId,
    pos: &HashMap<NodeId, usize>,
) -> (usize, String) {
    match tree.children(v) {
        None => (pos[&v], "*".into()),
        Some((a, b)) => {
            let (ma, sa) = plane_shape(tree, a, pos);
            let (mb, sb) = plane_shape(tree, b, pos);
            if ma < mb {
                (ma, format!("({sa},{sb})"))
            } else {
                (mb, format!("({sb},{sa})"))
            }
        }
    }
}

/// Every tree-consistent leaf order, by filtering all label orders.
pub fn consistent_orders(tree: &RootedBinaryTree) -> Vec<Vec<Label>> {
    all_orders(&tree.leaf_labels())
        .into_iter()
        .filter(|o| tree.order_consistent(o).unwrap())
        .collect()
}

pub type Signature = (String, String, Vec<usize>);

/// Label-free descriptions of every drawing of `t`. Two tanglegrams are equal
/// exactly when these sets coincide.
pub fn drawing_signatures(t: &Tanglegram) -> BTreeSet<Signature> {
    let (l, r) = (t.left(), t.right());
    let matching = t.matching();
    let mut out = BTreeSet::new();
    let right_orders = consistent_orders(r);
    for lo in consistent_orders(l) {
        let lpos: HashMap<NodeId, usize> = lo
            .iter()
            .enumerate()
            .map(|(i, x)| (l.leaf_by_label(x).unwrap(), i))
            .collect();
        let ls = plane_shape(l, l.root(), &lpos).1;
        for ro in &right_orders {
            let rpos: HashMap<NodeId, usize> = ro
                .iter()
                .enumerate()
                .map(|(i, x)| (r.leaf_by_label(x).unwrap(), i))
                .collect();
            let rs = plane_shape(r, r.root(), &rpos).1;
            let mut m = vec![0; lo.len()];
            for (a, b) in &matching {
                m[lpos[&l.leaf_by_label(a).unwrap()]] = rpos[&r.leaf_by_label(b).unwrap()];
            }
            out.insert((ls.clone(), rs, m));
        }
    }
    out
}

pub fn oracle_equal(a: &Tanglegram, b: &Tanglegram) -> bool {
    a.size() == b.size() && drawing_signatures(a) == drawing_signatures(b)
}

/// k-subsets of `0..n` in lexicographic order.
pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Pattern containment by trying every position subset.
pub fn brute_contains(pi: &Permutation, sigma: &Permutation) -> bool {
    let k = sigma.len();
    subsets(pi.len(), k).into_iter().any(|s| {
        let vals: Vec<usize> = s.iter().map(|&i| pi.entries()[i]).collect();
        (0..k).all(|a| {
            (0..k).all(|b| (vals[a] < vals[b]) == (sigma.entries()[a] < sigma.entries()[b]))
        })
    })
}
