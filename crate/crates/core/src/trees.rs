//! Rooted binary trees with uniquely labeled leaves.
//!
//! Vertices are array indices. Nodes are stored in post-order (every child
//! precedes its parent, the root is the last node), so bottom-up passes are
//! plain forward loops and top-down passes are reverse loops.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type NodeId = usize;

/// Opaque leaf label.
///
/// Labels are compared numerically when both parse as unsigned integers so
/// that `2 < 10`; otherwise (and as a tie-break) they compare as strings.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Label(String);

impl Label {
    pub fn new(token: impl Into<String>) -> Result<Self> {
        let token = token.into();
        if token.is_empty() || token.chars().any(|c| !is_label_char(c)) {
            return Err(Error::invalid(format!(
                "`{token}` is not a valid leaf label"
            )));
        }
        Ok(Label(token))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn as_number(&self) -> Option<u64> {
        self.0.parse().ok()
    }
}

impl From<usize> for Label {
    fn from(value: usize) -> Self {
        Label(value.to_string())
    }
}

impl Ord for Label {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self.as_number(), other.as_number()) {
            (Some(a), Some(b)) => a.cmp(&b).then_with(|| self.0.cmp(&other.0)),
            _ => self.0.cmp(&other.0),
        }
    }
}

impl PartialOrd for Label {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

fn is_label_char(c: char) -> bool {
    !c.is_whitespace() && !matches!(c, '(' | ')' | ',' | ';' | ':')
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Node {
    Leaf(Label),
    Internal(NodeId, NodeId),
}

/// A rooted tree in which every vertex has zero or two children.
#[derive(Clone, Debug)]
pub struct RootedBinaryTree {
    nodes: Vec<Node>,
    parent: Vec<Option<NodeId>>,
    by_label: HashMap<Label, NodeId>,
}

impl RootedBinaryTree {
    /// Builds a tree from an arbitrary node arena and a root, checking that
    /// every node is reachable exactly once and that labels are distinct.
    pub fn from_nodes(nodes: Vec<Node>, root: NodeId) -> Result<Self> {
        if root >= nodes.len() {
            return Err(Error::invalid(format!("root {root} is not a node")));
        }
        let mut seen = vec![false; nodes.len()];
        let mut order = Vec::with_capacity(nodes.len());
        // Iterative post-order: (node, children_done)
        let mut stack = vec![(root, false)];
        while let Some((v, done)) = stack.pop() {
            if done {
                order.push(v);
                continue;
            }
            if std::mem::replace(&mut seen[v], true) {
                return Err(Error::invalid(format!("node {v} is reachable twice")));
            }
            stack.push((v, true));
            if let Node::Internal(a, b) = nodes[v] {
                for c in [b, a] {
                    if c >= nodes.len() {
                        return Err(Error::invalid(format!("child {c} is not a node")));
                    }
                    stack.push((c, false));
                }
            }
        }
        if order.len() != nodes.len() {
            return Err(Error::invalid("tree has unreachable nodes"));
        }
        let mut new_id = vec![0; nodes.len()];
        for (i, &v) in order.iter().enumerate() {
            new_id[v] = i;
        }
        let relabeled = order
            .iter()
            .map(|&v| match &nodes[v] {
                Node::Leaf(l) => Node::Leaf(l.clone()),
                Node::Internal(a, b) => Node::Internal(new_id[*a], new_id[*b]),
            })
            .collect();
        Self::from_postorder(relabeled)
    }

    /// `nodes` must already be in post-order with the root last.
    fn from_postorder(nodes: Vec<Node>) -> Result<Self> {
        let mut parent = vec![None; nodes.len()];
        let mut by_label = HashMap::new();
        for (v, node) in nodes.iter().enumerate() {
            match node {
                Node::Leaf(label) => {
                    if by_label.insert(label.clone(), v).is_some() {
                        return Err(Error::invalid(format!("duplicate leaf label `{label}`")));
                    }
                }
                Node::Internal(a, b) => {
                    debug_assert!(*a < v && *b < v);
                    parent[*a] = Some(v);
                    parent[*b] = Some(v);
                }
            }
        }
        Ok(RootedBinaryTree {
            nodes,
            parent,
            by_label,
        })
    }

    pub fn leaf(label: Label) -> Self {
        Self::from_postorder(vec![Node::Leaf(label)]).expect("single leaf is a tree")
    }

    /// The tree whose root has `left` and `right` as its two subtrees.
    pub fn join(left: &Self, right: &Self) -> Result<Self> {
        let offset = left.nodes.len();
        let mut nodes = left.nodes.clone();
        nodes.extend(right.nodes.iter().map(|n| match n {
            Node::Leaf(l) => Node::Leaf(l.clone()),
            Node::Internal(a, b) => Node::Internal(a + offset, b + offset),
        }));
        nodes.push(Node::Internal(left.root(), right.root() + offset));
        Self::from_postorder(nodes)
    }

    /// The rooted caterpillar on `n` leaves with the distance labeling: leaf
    /// `i` sits at depth `i` for `i <= n - 2`, leaves `n - 1` and `n` form the
    /// deepest cherry.
    pub fn caterpillar(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidSize {
                what: "caterpillar",
                size: n,
                min: 2,
            });
        }
        let mut nodes = vec![Node::Leaf(Label::from(n - 1)), Node::Leaf(Label::from(n))];
        nodes.push(Node::Internal(0, 1));
        for i in (1..=n - 2).rev() {
            let below = nodes.len() - 1;
            nodes.push(Node::Leaf(Label::from(i)));
            nodes.push(Node::Internal(nodes.len() - 1, below));
        }
        Self::from_postorder(nodes)
    }

    pub fn root(&self) -> NodeId {
        self.nodes.len() - 1
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn node(&self, v: NodeId) -> &Node {
        &self.nodes[v]
    }

    pub fn parent(&self, v: NodeId) -> Option<NodeId> {
        self.parent[v]
    }

    pub fn children(&self, v: NodeId) -> Option<(NodeId, NodeId)> {
        match self.nodes[v] {
            Node::Internal(a, b) => Some((a, b)),
            Node::Leaf(_) => None,
        }
    }

    pub fn is_leaf(&self, v: NodeId) -> bool {
        matches!(self.nodes[v], Node::Leaf(_))
    }

    pub fn label(&self, v: NodeId) -> Option<&Label> {
        match &self.nodes[v] {
            Node::Leaf(l) => Some(l),
            Node::Internal(..) => None,
        }
    }

    pub fn leaf_by_label(&self, label: &Label) -> Option<NodeId> {
        self.by_label.get(label).copied()
    }

    pub fn leaf_count(&self) -> usize {
        self.by_label.len()
    }

    /// Leaves in the order a left-to-right traversal meets them.
    pub fn leaves(&self) -> Vec<NodeId> {
        self.plane_leaf_order(|_| false)
    }

    pub fn leaf_labels(&self) -> Vec<Label> {
        self.leaves()
            .into_iter()
            .map(|v| self.label(v).unwrap().clone())
            .collect()
    }

    /// Internal vertices in storage order. Position in this list is the
    /// vertex's ordinal for [`plane_leaf_order`](Self::plane_leaf_order).
    pub fn internal_nodes(&self) -> Vec<NodeId> {
        (0..self.nodes.len())
            .filter(|&v| !self.is_leaf(v))
            .collect()
    }

    /// Leaf order of the plane embedding that swaps the children of the
    /// `k`-th internal vertex exactly when `swap(k)` is true.
    pub fn plane_leaf_order(&self, swap: impl Fn(usize) -> bool) -> Vec<NodeId> {
        let mut ordinal = vec![0; self.nodes.len()];
        let mut k = 0;
        for (v, node) in self.nodes.iter().enumerate() {
            if let Node::Internal(..) = node {
                ordinal[v] = k;
                k += 1;
            }
        }
        let mut out = Vec::with_capacity(self.leaf_count());
        let mut stack = vec![self.root()];
        while let Some(v) = stack.pop() {
            match self.nodes[v] {
                Node::Leaf(_) => out.push(v),
                Node::Internal(a, b) => {
                    let (first, second) = if swap(ordinal[v]) { (b, a) } else { (a, b) };
                    stack.push(second);
                    stack.push(first);
                }
            }
        }
        out
    }

    /// Edge count from the root, per node.
    pub fn depths(&self) -> Vec<usize> {
        let mut depth = vec![0; self.nodes.len()];
        for v in (0..self.nodes.len()).rev() {
            if let Node::Internal(a, b) = self.nodes[v] {
                depth[a] = depth[v] + 1;
                depth[b] = depth[v] + 1;
            }
        }
        depth
    }

    pub fn leaf_depths(&self) -> BTreeMap<Label, usize> {
        let depth = self.depths();
        self.by_label
            .iter()
            .map(|(l, &v)| (l.clone(), depth[v]))
            .collect()
    }

    /// Number of leaves below each node.
    pub fn leaf_counts(&self) -> Vec<usize> {
        let mut count = vec![0; self.nodes.len()];
        for (v, node) in self.nodes.iter().enumerate() {
            count[v] = match node {
                Node::Leaf(_) => 1,
                Node::Internal(a, b) => count[*a] + count[*b],
            };
        }
        count
    }

    /// Height above the deepest leaf below each node (leaves have height 0).
    pub fn heights(&self) -> Vec<usize> {
        let mut height = vec![0; self.nodes.len()];
        for (v, node) in self.nodes.iter().enumerate() {
            if let Node::Internal(a, b) = node {
                height[v] = 1 + height[*a].max(height[*b]);
            }
        }
        height
    }

    /// The subtree induced by `labels`: the smallest subtree spanning them,
    /// with every vertex left with a single child suppressed. A unary root is
    /// contracted down to its first branching descendant.
    pub fn induced_subtree<'a>(&self, labels: impl IntoIterator<Item = &'a Label>) -> Result<Self> {
        let mut keep = vec![false; self.nodes.len()];
        let mut any = false;
        for label in labels {
            let v = self
                .leaf_by_label(label)
                .ok_or_else(|| Error::invalid(format!("unknown leaf label `{label}`")))?;
            keep[v] = true;
            any = true;
        }
        if !any {
            return Err(Error::invalid("induced subtree needs a non-empty leaf set"));
        }
        let mut image: Vec<Option<NodeId>> = vec![None; self.nodes.len()];
        let mut nodes = Vec::new();
        for (v, node) in self.nodes.iter().enumerate() {
            image[v] = match node {
                Node::Leaf(l) if keep[v] => {
                    nodes.push(Node::Leaf(l.clone()));
                    Some(nodes.len() - 1)
                }
                Node::Leaf(_) => None,
                Node::Internal(a, b) => match (image[*a], image[*b]) {
                    (Some(x), Some(y)) => {
                        nodes.push(Node::Internal(x, y));
                        Some(nodes.len() - 1)
                    }
                    (one @ Some(_), None) | (None, one @ Some(_)) => one,
                    (None, None) => None,
                },
            };
        }
        // The last surviving image is the new root, and since pruning keeps
        // post-order, it is the last pushed node.
        Self::from_postorder(nodes)
    }

    /// True iff the tree has exactly one leaf at each depth `1..=n-2` and two
    /// leaves at depth `n-1`.
    pub fn is_caterpillar(&self) -> bool {
        let n = self.leaf_count();
        if n < 2 {
            return false;
        }
        let mut per_depth = vec![0usize; n];
        let depth = self.depths();
        for &v in self.by_label.values() {
            let d = depth[v];
            if d == 0 || d > n - 1 {
                return false;
            }
            per_depth[d] += 1;
        }
        (1..n - 1).all(|d| per_depth[d] == 1) && per_depth[n - 1] == 2
    }

    /// True iff the descendant leaves of every internal vertex occupy a
    /// contiguous block of `order`.
    pub fn order_consistent(&self, order: &[Label]) -> Result<bool> {
        let pos = self.positions_of(order)?;
        Ok(self.is_contiguous(&pos))
    }

    /// Maps every leaf node to its index in `order`, checking that `order` is
    /// a permutation of the leaf labels.
    pub(crate) fn positions_of(&self, order: &[Label]) -> Result<Vec<usize>> {
        if order.len() != self.leaf_count() {
            return Err(Error::invalid(format!(
                "order has {} labels but the tree has {} leaves",
                order.len(),
                self.leaf_count()
            )));
        }
        let mut pos = vec![usize::MAX; self.nodes.len()];
        for (i, label) in order.iter().enumerate() {
            let v = self
                .leaf_by_label(label)
                .ok_or_else(|| Error::invalid(format!("unknown leaf label `{label}`")))?;
            if pos[v] != usize::MAX {
                return Err(Error::invalid(format!("label `{label}` repeated in order")));
            }
            pos[v] = i;
        }
        Ok(pos)
    }

    /// `pos` holds the position of each leaf node.
    pub(crate) fn is_contiguous(&self, pos: &[usize]) -> bool {
        let mut lo = vec![0; self.nodes.len()];
        let mut hi = vec![0; self.nodes.len()];
        let mut count = vec![0; self.nodes.len()];
        for (v, node) in self.nodes.iter().enumerate() {
            match node {
                Node::Leaf(_) => {
                    lo[v] = pos[v];
                    hi[v] = pos[v];
                    count[v] = 1;
                }
                Node::Internal(a, b) => {
                    lo[v] = lo[*a].min(lo[*b]);
                    hi[v] = hi[*a].max(hi[*b]);
                    count[v] = count[*a] + count[*b];
                    if hi[v] - lo[v] + 1 != count[v] {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Newick text with the children of every vertex sorted, so two trees
    /// print the same exactly when they are equal as labeled rooted trees.
    pub fn canonical_newick(&self) -> String {
        let mut text: Vec<String> = Vec::with_capacity(self.nodes.len());
        let mut min_label: Vec<Option<Label>> = Vec::with_capacity(self.nodes.len());
        for node in &self.nodes {
            match node {
                Node::Leaf(l) => {
                    text.push(l.to_string());
                    min_label.push(Some(l.clone()));
                }
                Node::Internal(a, b) => {
                    let (x, y) = if min_label[*a] <= min_label[*b] {
                        (*a, *b)
                    } else {
                        (*b, *a)
                    };
                    text.push(format!("({},{})", text[x], text[y]));
                    min_label.push(min_label[x].clone());
                }
            }
        }
        text.pop().unwrap()
    }

    /// Equality as labeled rooted trees, ignoring child order.
    pub fn same_labeled_tree(&self, other: &Self) -> bool {
        self.canonical_newick() == other.canonical_newick()
    }

    fn write_newick(&self, out: &mut String) {
        enum Step {
            Visit(NodeId),
            Text(char),
        }
        let mut stack = vec![Step::Visit(self.root())];
        while let Some(step) = stack.pop() {
            match step {
                Step::Text(c) => out.push(c),
                Step::Visit(v) => match &self.nodes[v] {
                    Node::Leaf(l) => out.push_str(l.as_str()),
                    Node::Internal(a, b) => {
                        out.push('(');
                        stack.push(Step::Text(')'));
                        stack.push(Step::Visit(*b));
                        stack.push(Step::Text(','));
                        stack.push(Step::Visit(*a));
                    }
                },
            }
        }
    }
}

impl fmt::Display for RootedBinaryTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::new();
        self.write_newick(&mut s);
        f.write_str(&s)
    }
}

impl FromStr for RootedBinaryTree {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut parser = NewickParser {
            src: s,
            pos: 0,
            nodes: Vec::new(),
        };
        parser.tree()?;
        parser.skip_ws();
        if parser.pos != s.len() {
            return Err(Error::parse(parser.pos, "trailing characters after tree"));
        }
        let mut seen = HashSet::new();
        for node in &parser.nodes {
            if let Node::Leaf(l) = node {
                if !seen.insert(l) {
                    return Err(Error::invalid(format!("duplicate leaf label `{l}`")));
                }
            }
        }
        Self::from_postorder(parser.nodes)
    }
}

struct NewickParser<'a> {
    src: &'a str,
    pos: usize,
    nodes: Vec<Node>,
}

impl NewickParser<'_> {
    fn skip_ws(&mut self) {
        while let Some(c) = self.src[self.pos..].chars().next() {
            if !c.is_whitespace() {
                break;
            }
            self.pos += c.len_utf8();
        }
    }

    fn expect(&mut self, want: char) -> Result<()> {
        self.skip_ws();
        match self.src[self.pos..].chars().next() {
            Some(c) if c == want => {
                self.pos += 1;
                Ok(())
            }
            Some(c) => Err(Error::parse(
                self.pos,
                format!("expected `{want}`, found `{c}`"),
            )),
            None => Err(Error::parse(
                self.pos,
                format!("expected `{want}`, found end of input"),
            )),
        }
    }

    /// Parses one subtree, pushing its nodes in post-order.
    fn tree(&mut self) -> Result<NodeId> {
        self.skip_ws();
        let rest = &self.src[self.pos..];
        if rest.starts_with('(') {
            self.pos += 1;
            let a = self.tree()?;
            self.expect(',')?;
            let b = self.tree()?;
            self.expect(')')?;
            self.nodes.push(Node::Internal(a, b));
        } else {
            let len: usize = rest
                .chars()
                .take_while(|&c| is_label_char(c))
                .map(char::len_utf8)
                .sum();
            if len == 0 {
                return Err(Error::parse(self.pos, "expected a leaf label or `(`"));
            }
            self.nodes.push(Node::Leaf(Label(rest[..len].to_string())));
            self.pos += len;
        }
        Ok(self.nodes.len() - 1)
    }
}
