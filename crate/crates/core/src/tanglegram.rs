//! Tanglegrams, catergrams and the induced subtanglegram order.
//!
//! Two tanglegrams are equal when a graph isomorphism maps left tree to left
//! tree and right tree to right tree, fixing both roots and preserving the
//! matching. Equality is decided through [`CanonicalForm`].
//!
//! # Canonical form
//!
//! Pick an anchor side (the side with fewer *symmetric* internal vertices,
//! i.e. vertices whose two child subtrees have the same unlabeled shape; ties
//! go to the left). Every plane embedding of the anchor tree that orders
//! non-symmetric children by shape key draws the same plane shape, and the
//! embeddings only differ at symmetric vertices. For each such embedding the
//! anchor leaves get positions `0..n`, every leaf of the other tree inherits
//! the position of its partner, and the other tree is written out with
//! children sorted by their smallest code. Distinct codes make that encoding
//! unique, and it reconstructs the matching, so the least encoding over all
//! symmetric-vertex choices is a complete isomorphism invariant. The cost is
//! `2^s` encodings for `s` symmetric vertices on the anchor side; caterpillars
//! have `s = 1`.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::perm::Permutation;
use crate::trees::{Label, Node, NodeId, RootedBinaryTree};

/// Ordered triple of left tree, right tree and a perfect matching between
/// their leaves.
#[derive(Clone, Debug)]
pub struct Tanglegram {
    left: RootedBinaryTree,
    right: RootedBinaryTree,
    /// (left leaf, right leaf) node pairs.
    pairs: Vec<(NodeId, NodeId)>,
}

/// Multiset of (left depth, right depth) over the matching edges, kept sorted.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct DistancePairMultiset(Vec<(usize, usize)>);

impl DistancePairMultiset {
    pub fn from_pairs(mut pairs: Vec<(usize, usize)>) -> Self {
        pairs.sort_unstable();
        DistancePairMultiset(pairs)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn multiplicity(&self, pair: (usize, usize)) -> usize {
        self.0.iter().filter(|&&p| p == pair).count()
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.0
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
enum Side {
    Left,
    Right,
}

/// Complete invariant of a tanglegram up to root-fixing isomorphism.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalForm {
    anchor: Side,
    shape: String,
    other: Vec<u32>,
}

const OPEN: u32 = u32::MAX;

/// A tanglegram whose trees are both caterpillars, read back as the
/// permutation of its distance labeling.
#[derive(Clone, Debug)]
pub struct CatergramView {
    pub permutation: Permutation,
    /// `left_leaves[i - 1]` is the left leaf carrying distance label `i`.
    pub left_leaves: Vec<NodeId>,
    pub right_leaves: Vec<NodeId>,
}

impl Tanglegram {
    pub fn new(
        left: RootedBinaryTree,
        right: RootedBinaryTree,
        matching: &[(Label, Label)],
    ) -> Result<Self> {
        let n = left.leaf_count();
        if right.leaf_count() != n {
            return Err(Error::invalid(format!(
                "left tree has {n} leaves but right tree has {}",
                right.leaf_count()
            )));
        }
        if matching.len() != n {
            return Err(Error::invalid(format!(
                "matching has {} edges but the trees have {n} leaves",
                matching.len()
            )));
        }
        let mut used_left = vec![false; left.node_count()];
        let mut used_right = vec![false; right.node_count()];
        let mut pairs = Vec::with_capacity(n);
        for (a, b) in matching {
            let x = left
                .leaf_by_label(a)
                .ok_or_else(|| Error::invalid(format!("`{a}` is not a left leaf")))?;
            let y = right
                .leaf_by_label(b)
                .ok_or_else(|| Error::invalid(format!("`{b}` is not a right leaf")))?;
            if std::mem::replace(&mut used_left[x], true) {
                return Err(Error::invalid(format!("left leaf `{a}` matched twice")));
            }
            if std::mem::replace(&mut used_right[y], true) {
                return Err(Error::invalid(format!("right leaf `{b}` matched twice")));
            }
            pairs.push((x, y));
        }
        Ok(Tanglegram { left, right, pairs })
    }

    /// The catergram of `perm`: two distance-labeled caterpillars with left
    /// leaf `i` matched to right leaf `perm(i)`.
    pub fn catergram(perm: &Permutation) -> Result<Self> {
        let n = perm.len();
        if n < 2 {
            return Err(Error::InvalidSize {
                what: "catergram",
                size: n,
                min: 2,
            });
        }
        let tree = RootedBinaryTree::caterpillar(n)?;
        let matching: Vec<(Label, Label)> = (1..=n)
            .map(|i| (Label::from(i), Label::from(perm.image(i))))
            .collect();
        Tanglegram::new(tree.clone(), tree, &matching)
    }

    pub fn size(&self) -> usize {
        self.pairs.len()
    }

    pub fn left(&self) -> &RootedBinaryTree {
        &self.left
    }

    pub fn right(&self) -> &RootedBinaryTree {
        &self.right
    }

    /// Matching edges as node pairs, in edge-index order.
    pub fn edge_nodes(&self) -> &[(NodeId, NodeId)] {
        &self.pairs
    }

    /// Matching edges as label pairs, in edge-index order.
    pub fn matching(&self) -> Vec<(Label, Label)> {
        self.pairs
            .iter()
            .map(|&(x, y)| {
                (
                    self.left.label(x).unwrap().clone(),
                    self.right.label(y).unwrap().clone(),
                )
            })
            .collect()
    }

    /// Right partner of every left leaf node (`usize::MAX` for internal nodes).
    pub fn right_partner(&self) -> Vec<NodeId> {
        let mut m = vec![usize::MAX; self.left.node_count()];
        for &(x, y) in &self.pairs {
            m[x] = y;
        }
        m
    }

    pub fn left_partner(&self) -> Vec<NodeId> {
        let mut m = vec![usize::MAX; self.right.node_count()];
        for &(x, y) in &self.pairs {
            m[y] = x;
        }
        m
    }

    pub fn distance_pairs(&self) -> DistancePairMultiset {
        let dl = self.left.depths();
        let dr = self.right.depths();
        DistancePairMultiset::from_pairs(self.pairs.iter().map(|&(x, y)| (dl[x], dr[y])).collect())
    }

    pub fn canonical_form(&self) -> CanonicalForm {
        let sl = symmetric_count(&self.left);
        let sr = symmetric_count(&self.right);
        if sl <= sr {
            let partner = self.right_partner();
            canonical_from(Side::Left, &self.left, &self.right, &partner)
        } else {
            let partner = self.left_partner();
            canonical_from(Side::Right, &self.right, &self.left, &partner)
        }
    }

    /// Equality up to isomorphism fixing both roots and respecting the matching.
    pub fn is_equal(&self, other: &Tanglegram) -> bool {
        self.size() == other.size()
            && self.distance_pairs() == other.distance_pairs()
            && self.canonical_form() == other.canonical_form()
    }

    /// `𝒯[M′]` for the matching edges with the given indices.
    pub fn induced(&self, edges: &[usize]) -> Result<Tanglegram> {
        if edges.is_empty() {
            return Err(Error::invalid(
                "induced subtanglegram needs at least one edge",
            ));
        }
        let mut seen = vec![false; self.pairs.len()];
        let mut kept = Vec::with_capacity(edges.len());
        for &e in edges {
            if e >= self.pairs.len() {
                return Err(Error::invalid(format!("edge {e} is not in the matching")));
            }
            if !std::mem::replace(&mut seen[e], true) {
                kept.push(self.pairs[e]);
            }
        }
        let left_labels: Vec<Label> = kept
            .iter()
            .map(|&(x, _)| self.left.label(x).unwrap().clone())
            .collect();
        let right_labels: Vec<Label> = kept
            .iter()
            .map(|&(_, y)| self.right.label(y).unwrap().clone())
            .collect();
        let left = self.left.induced_subtree(&left_labels)?;
        let right = self.right.induced_subtree(&right_labels)?;
        let matching: Vec<(Label, Label)> = left_labels.into_iter().zip(right_labels).collect();
        Tanglegram::new(left, right, &matching)
    }

    /// `𝒯[M′]` for a set of matching edges given as label pairs.
    pub fn induced_by_edges(&self, edges: &[(Label, Label)]) -> Result<Tanglegram> {
        let index: HashMap<(NodeId, NodeId), usize> = self
            .pairs
            .iter()
            .enumerate()
            .map(|(i, &p)| (p, i))
            .collect();
        let idx = edges
            .iter()
            .map(|(a, b)| {
                let x = self.left.leaf_by_label(a);
                let y = self.right.leaf_by_label(b);
                x.zip(y)
                    .and_then(|p| index.get(&p).copied())
                    .ok_or_else(|| Error::invalid(format!("`{a}:{b}` is not a matching edge")))
            })
            .collect::<Result<Vec<_>>>()?;
        self.induced(&idx)
    }

    /// The subtanglegram on the matching edges at the given left leaves.
    pub fn induced_by_left_labels(&self, labels: &[Label]) -> Result<Tanglegram> {
        let partner = self.right_partner();
        let edges = labels
            .iter()
            .map(|l| {
                let x = self
                    .left
                    .leaf_by_label(l)
                    .ok_or_else(|| Error::invalid(format!("`{l}` is not a left leaf")))?;
                Ok((l.clone(), self.right.label(partner[x]).unwrap().clone()))
            })
            .collect::<Result<Vec<_>>>()?;
        self.induced_by_edges(&edges)
    }

    /// Reads the tanglegram as a catergram when both trees are caterpillars.
    /// The two deepest leaves on each side are labeled in plane order.
    pub fn as_catergram(&self) -> Option<CatergramView> {
        if !self.left.is_caterpillar() || !self.right.is_caterpillar() {
            return None;
        }
        let left_leaves = distance_order(&self.left);
        let right_leaves = distance_order(&self.right);
        let mut right_label = vec![0; self.right.node_count()];
        for (i, &v) in right_leaves.iter().enumerate() {
            right_label[v] = i + 1;
        }
        let partner = self.right_partner();
        let entries = left_leaves
            .iter()
            .map(|&x| right_label[partner[x]])
            .collect();
        Some(CatergramView {
            permutation: Permutation::new(entries).expect("matching is a bijection"),
            left_leaves,
            right_leaves,
        })
    }
}

impl PartialEq for Tanglegram {
    fn eq(&self, other: &Self) -> bool {
        self.is_equal(other)
    }
}

impl Eq for Tanglegram {}

/// Leaves of a caterpillar sorted by depth, ties by plane order.
fn distance_order(tree: &RootedBinaryTree) -> Vec<NodeId> {
    let depth = tree.depths();
    let mut leaves = tree.leaves();
    leaves.sort_by_key(|&v| depth[v]);
    leaves
}

/// Unlabeled shape key of every node: children written in sorted order.
fn shape_keys(tree: &RootedBinaryTree) -> Vec<String> {
    let mut keys: Vec<String> = Vec::with_capacity(tree.node_count());
    for v in 0..tree.node_count() {
        let key = match tree.node(v) {
            Node::Leaf(_) => "x".to_string(),
            Node::Internal(a, b) => {
                let (x, y) = if keys[*a] <= keys[*b] {
                    (*a, *b)
                } else {
                    (*b, *a)
                };
                format!("({},{})", keys[x], keys[y])
            }
        };
        keys.push(key);
    }
    keys
}

fn symmetric_count(tree: &RootedBinaryTree) -> usize {
    let keys = shape_keys(tree);
    (0..tree.node_count())
        .filter(|&v| matches!(tree.node(v), Node::Internal(a, b) if keys[*a] == keys[*b]))
        .count()
}

fn canonical_from(
    anchor: Side,
    tree: &RootedBinaryTree,
    other: &RootedBinaryTree,
    partner: &[NodeId],
) -> CanonicalForm {
    let keys = shape_keys(tree);
    let mut ordered = Vec::with_capacity(tree.node_count());
    let mut sym_ordinal = vec![usize::MAX; tree.node_count()];
    let mut s = 0;
    for (v, ordinal) in sym_ordinal.iter_mut().enumerate() {
        if let Node::Internal(a, b) = *tree.node(v) {
            if keys[a] == keys[b] {
                *ordinal = s;
                s += 1;
            }
            ordered.push(if keys[a] <= keys[b] { (a, b) } else { (b, a) });
        } else {
            ordered.push((usize::MAX, usize::MAX));
        }
    }
    assert!(
        s < 64,
        "canonical form needs 2^{s} encodings; tree is too symmetric"
    );

    let mut best: Option<Vec<u32>> = None;
    let mut code = vec![0u32; other.node_count()];
    let mut stack = Vec::with_capacity(tree.node_count());
    for mask in 0u64..(1u64 << s) {
        // Plane order of the anchor tree for this choice of swaps.
        let mut next = 0u32;
        stack.clear();
        stack.push(tree.root());
        while let Some(v) = stack.pop() {
            if tree.is_leaf(v) {
                code[partner[v]] = next;
                next += 1;
                continue;
            }
            let (mut x, mut y) = ordered[v];
            if sym_ordinal[v] != usize::MAX && mask >> sym_ordinal[v] & 1 == 1 {
                std::mem::swap(&mut x, &mut y);
            }
            stack.push(y);
            stack.push(x);
        }
        let enc = encode_by_codes(other, &code);
        if best.as_ref().is_none_or(|b| enc < *b) {
            best = Some(enc);
        }
    }
    CanonicalForm {
        anchor,
        shape: keys[tree.root()].clone(),
        other: best.expect("at least one embedding"),
    }
}

/// Prefix encoding of `tree` where leaves carry distinct `code`s and the
/// children of every vertex are ordered by their smallest code.
fn encode_by_codes(tree: &RootedBinaryTree, code: &[u32]) -> Vec<u32> {
    let mut min_code = vec![0u32; tree.node_count()];
    for v in 0..tree.node_count() {
        min_code[v] = match tree.node(v) {
            Node::Leaf(_) => code[v],
            Node::Internal(a, b) => min_code[*a].min(min_code[*b]),
        };
    }
    let mut out = Vec::with_capacity(tree.node_count());
    let mut stack = vec![tree.root()];
    while let Some(v) = stack.pop() {
        match tree.node(v) {
            Node::Leaf(_) => out.push(code[v]),
            Node::Internal(a, b) => {
                out.push(OPEN);
                let (x, y) = if min_code[*a] < min_code[*b] {
                    (*a, *b)
                } else {
                    (*b, *a)
                };
                stack.push(y);
                stack.push(x);
            }
        }
    }
    out
}

/// `sub ⪯ sup`: some set of matching edges of `sup` induces a tanglegram
/// equal to `sub`. Pairs of catergrams are decided by pattern containment of
/// the bar-set; everything else falls back to [`find_induced_subset`].
pub fn is_induced_sub(sub: &Tanglegram, sup: &Tanglegram) -> bool {
    if sub.size() > sup.size() {
        return false;
    }
    if sub.size() == 1 {
        return true;
    }
    if let (Some(a), Some(b)) = (sub.as_catergram(), sup.as_catergram()) {
        return catergram_contains(&b.permutation, &a.permutation);
    }
    find_induced_subset(sub, sup).is_some()
}

/// `𝒯_ρ ⪯ 𝒯_π` iff some member of the bar-set of `rho` is a pattern of `pi`.
pub fn catergram_contains(pi: &Permutation, rho: &Permutation) -> bool {
    match rho.bar_set() {
        Ok(bar) => bar.iter().any(|sigma| pi.contains_pattern(sigma).is_some()),
        // a single matching edge is contained in everything
        Err(_) => true,
    }
}

/// Lexicographically least set of edge indices of `sup` inducing `sub`, by
/// scanning subsets of size `|sub|`. Distance-pair multisets are compared
/// before canonical forms.
pub fn find_induced_subset(sub: &Tanglegram, sup: &Tanglegram) -> Option<Vec<usize>> {
    let (k, n) = (sub.size(), sup.size());
    if k > n || k == 0 {
        return None;
    }
    let target_pairs = sub.distance_pairs();
    let target = sub.canonical_form();
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        let candidate = sup.induced(&idx).expect("indices are valid");
        if candidate.distance_pairs() == target_pairs && candidate.canonical_form() == target {
            return Some(idx);
        }
        // next k-combination in lexicographic order
        let mut i = k;
        loop {
            if i == 0 {
                return None;
            }
            i -= 1;
            if idx[i] < n - k + i {
                break;
            }
        }
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

impl fmt::Display for Tanglegram {
    /// `<left> ; <right> ; a:b,c:d` with edges listed in left leaf order.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ; {} ; ", self.left, self.right)?;
        let partner = self.right_partner();
        for (i, x) in self.left.leaves().into_iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(
                f,
                "{}:{}",
                self.left.label(x).unwrap(),
                self.right.label(partner[x]).unwrap()
            )?;
        }
        Ok(())
    }
}

impl FromStr for Tanglegram {
    type Err = Error;

    /// Accepts `<left Newick> ; <right Newick> ; a:b,...` or the shorthand
    /// `catergram (a1,...,an)`.
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        if let Some(rest) = t.strip_prefix("catergram") {
            let perm = Permutation::parse_sequence(rest)?;
            return Tanglegram::catergram(&perm);
        }
        let parts: Vec<&str> = t.split(';').collect();
        if parts.len() != 3 {
            return Err(Error::parse(
                0,
                "expected `<left> ; <right> ; <matching>` or `catergram (...)`",
            ));
        }
        let left: RootedBinaryTree = parts[0].parse()?;
        let right: RootedBinaryTree = parts[1].parse()?;
        let matching = parts[2]
            .split(',')
            .map(|edge| {
                let (a, b) = edge.split_once(':').ok_or_else(|| {
                    Error::parse(0, format!("`{}` is not a `left:right` pair", edge.trim()))
                })?;
                Ok((Label::new(a.trim())?, Label::new(b.trim())?))
            })
            .collect::<Result<Vec<_>>>()?;
        Tanglegram::new(left, right, &matching)
    }
}

/// Parses one tanglegram per non-empty line; `#` starts a comment line.
pub fn parse_tanglegrams(text: &str) -> Result<Vec<Tanglegram>> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty() && !l.trim_start().starts_with('#'))
        .map(|(i, l)| {
            l.parse().map_err(|e| match e {
                Error::Parse { message, .. } => {
                    Error::parse(0, format!("line {}: {message}", i + 1))
                }
                other => other,
            })
        })
        .collect()
}
