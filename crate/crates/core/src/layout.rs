//! Layouts, crossing counts, tangle crossing number and planarity.

use std::sync::OnceLock;

use rayon::prelude::*;

use crate::antichain::{rho, FamilyIndex};
use crate::error::{Error, Result};
use crate::perm::{count_inversions, Permutation};
use crate::registry::Registry;
use crate::tanglegram::{CanonicalForm, Tanglegram};
use crate::trees::{Label, NodeId, RootedBinaryTree};

/// Default size cap for exhaustive layout sweeps.
pub const DEFAULT_CAP: usize = 12;

/// A tanglegram together with a tree-consistent leaf order on each side.
/// Orders run along the leaf lines starting from the first position.
#[derive(Clone, Debug)]
pub struct Layout {
    tanglegram: Tanglegram,
    left_order: Vec<Label>,
    right_order: Vec<Label>,
}

impl Layout {
    pub fn new(
        tanglegram: Tanglegram,
        left_order: Vec<Label>,
        right_order: Vec<Label>,
    ) -> Result<Self> {
        let check = |tree: &RootedBinaryTree, order: &[Label], side: &str| -> Result<()> {
            let consistent = tree
                .order_consistent(order)
                .map_err(|e| Error::InvalidLayout(format!("{side} order: {e}")))?;
            if !consistent {
                return Err(Error::InvalidLayout(format!(
                    "{side} order is not consistent with the {side} tree"
                )));
            }
            Ok(())
        };
        check(tanglegram.left(), &left_order, "left")?;
        check(tanglegram.right(), &right_order, "right")?;
        Ok(Layout {
            tanglegram,
            left_order,
            right_order,
        })
    }

    /// The layout whose plane trees swap the children of the `k`-th internal
    /// vertex when bit `k` of the mask is set.
    pub fn from_masks(tanglegram: &Tanglegram, left_mask: u64, right_mask: u64) -> Layout {
        let order = |tree: &RootedBinaryTree, mask: u64| -> Vec<Label> {
            tree.plane_leaf_order(|k| k < 64 && mask >> k & 1 == 1)
                .into_iter()
                .map(|v| tree.label(v).unwrap().clone())
                .collect()
        };
        Layout {
            left_order: order(tanglegram.left(), left_mask),
            right_order: order(tanglegram.right(), right_mask),
            tanglegram: tanglegram.clone(),
        }
    }

    pub fn tanglegram(&self) -> &Tanglegram {
        &self.tanglegram
    }

    pub fn left_order(&self) -> &[Label] {
        &self.left_order
    }

    pub fn right_order(&self) -> &[Label] {
        &self.right_order
    }

    /// (left position, right position) of every matching edge, in edge order.
    pub fn edge_positions(&self) -> Vec<(usize, usize)> {
        let lp = self
            .tanglegram
            .left()
            .positions_of(&self.left_order)
            .expect("validated");
        let rp = self
            .tanglegram
            .right()
            .positions_of(&self.right_order)
            .expect("validated");
        self.tanglegram
            .edge_nodes()
            .iter()
            .map(|&(x, y)| (lp[x], rp[y]))
            .collect()
    }

    /// Number of unordered matching-edge pairs whose endpoints interleave:
    /// the inversion count of right positions read in left order.
    pub fn crossings(&self) -> u64 {
        let mut edges = self.edge_positions();
        edges.sort_unstable();
        let seq: Vec<usize> = edges.into_iter().map(|(_, q)| q).collect();
        count_inversions(&seq)
    }

    /// Same count by direct pair scan.
    pub fn crossings_by_pairs(&self) -> u64 {
        let e = self.edge_positions();
        let mut count = 0;
        for i in 0..e.len() {
            for j in i + 1..e.len() {
                let dp = e[i].0 as i64 - e[j].0 as i64;
                let dq = e[i].1 as i64 - e[j].1 as i64;
                if dp * dq < 0 {
                    count += 1;
                }
            }
        }
        count
    }
}

pub fn count_crossings(layout: &Layout) -> u64 {
    layout.crossings()
}

/// A crossing-minimal choice of plane embeddings.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CrossingOptimum {
    pub crossings: u64,
    pub left_mask: u64,
    pub right_mask: u64,
}

fn check_cap(t: &Tanglegram, cap: usize) -> Result<()> {
    let n = t.size();
    if n > cap || n > 64 {
        return Err(Error::BudgetExceeded {
            size: n,
            cap: cap.min(64),
        });
    }
    Ok(())
}

/// Tangle crossing number by sweeping all `2^(n-1)` left embeddings.
///
/// For a fixed left order, the relative right order of two matching edges
/// depends only on the orientation of their lowest common ancestor in the
/// right tree, so each right vertex is oriented independently. Ties keep
/// the unswapped orientation, and among optimal left masks the smallest wins,
/// so the result is the lexicographically least optimal `(left, right)` mask
/// pair.
pub fn crossing_number(t: &Tanglegram, cap: usize) -> Result<CrossingOptimum> {
    check_cap(t, cap)?;
    let left = t.left();
    let right = t.right();
    let partner = t.left_partner();
    let internals = right.internal_nodes();
    let mut below: Vec<Vec<NodeId>> = vec![Vec::new(); right.node_count()];
    for v in 0..right.node_count() {
        below[v] = match right.children(v) {
            None => vec![v],
            Some((a, b)) => below[a].iter().chain(&below[b]).copied().collect(),
        };
    }
    let left_bits = left.internal_nodes().len();
    let best = (0u64..1u64 << left_bits)
        .into_par_iter()
        .map(|lmask| {
            let mut pos = vec![0usize; left.node_count()];
            for (i, v) in left
                .plane_leaf_order(|k| lmask >> k & 1 == 1)
                .into_iter()
                .enumerate()
            {
                pos[v] = i;
            }
            let mut total = 0u64;
            let mut rmask = 0u64;
            for (k, &v) in internals.iter().enumerate() {
                let (a, b) = right.children(v).unwrap();
                let mut straight = 0u64;
                for &x in &below[a] {
                    let px = pos[partner[x]];
                    straight += below[b].iter().filter(|&&y| pos[partner[y]] < px).count() as u64;
                }
                let swapped = (below[a].len() * below[b].len()) as u64 - straight;
                if swapped < straight {
                    total += swapped;
                    rmask |= 1 << k;
                } else {
                    total += straight;
                }
            }
            CrossingOptimum {
                crossings: total,
                left_mask: lmask,
                right_mask: rmask,
            }
        })
        .min_by_key(|o| (o.crossings, o.left_mask))
        .expect("at least one embedding");
    Ok(best)
}

/// A layout achieving the crossing number.
pub fn optimal_layout(t: &Tanglegram, cap: usize) -> Result<Layout> {
    let best = crossing_number(t, cap)?;
    Ok(Layout::from_masks(t, best.left_mask, best.right_mask))
}

/// The two excluded tanglegrams: the catergram of `(3,2,1,4)`, and two
/// balanced 4-leaf trees whose middle matching edges cross.
pub fn excluded_tanglegrams() -> (Tanglegram, Tanglegram) {
    let e1 = Tanglegram::catergram(&Permutation::new(vec![3, 2, 1, 4]).unwrap()).unwrap();
    let e2 = "((1,2),(3,4)) ; ((1,2),(3,4)) ; 1:1,2:3,3:2,4:4"
        .parse()
        .unwrap();
    (e1, e2)
}

fn excluded_forms() -> &'static [CanonicalForm; 2] {
    static FORMS: OnceLock<[CanonicalForm; 2]> = OnceLock::new();
    FORMS.get_or_init(|| {
        let (e1, e2) = excluded_tanglegrams();
        for e in [&e1, &e2] {
            let best = crossing_number(e, 4).expect("size 4 is under any cap");
            assert_eq!(best.crossings, 1, "excluded tanglegram {e} must be non-planar");
        }
        [e1.canonical_form(), e2.canonical_form()]
    })
}

/// A way of deciding whether a tanglegram is planar.
pub trait PlanarityTest: Send + Sync {
    fn is_planar(&self, t: &Tanglegram) -> Result<bool>;
}

/// No four matching edges induce one of the excluded tanglegrams.
pub struct Kuratowski;

impl PlanarityTest for Kuratowski {
    fn is_planar(&self, t: &Tanglegram) -> Result<bool> {
        Ok(excluded_witness(t).is_none())
    }
}

/// Crossing number zero, by exhaustive sweep under a size cap.
pub struct CrossingOracle {
    pub cap: usize,
}

impl PlanarityTest for CrossingOracle {
    fn is_planar(&self, t: &Tanglegram) -> Result<bool> {
        Ok(crossing_number(t, self.cap)?.crossings == 0)
    }
}

/// Pattern test on the bar-set of `(3,2,1,4)`; catergrams only.
pub struct CatergramPatterns;

impl PlanarityTest for CatergramPatterns {
    fn is_planar(&self, t: &Tanglegram) -> Result<bool> {
        let view = t
            .as_catergram()
            .ok_or_else(|| Error::invalid("the catergram planarity test needs two caterpillars"))?;
        Ok(is_planar_catergram(&view.permutation))
    }
}

/// Planarity tests by name: `kuratowski`, `oracle` (capped at `cap`) and
/// `catergram`.
pub fn planarity_tests(cap: usize) -> Registry<dyn PlanarityTest> {
    let mut reg: Registry<dyn PlanarityTest> = Registry::new("planarity method");
    reg.register("kuratowski", Box::new(Kuratowski));
    reg.register("oracle", Box::new(CrossingOracle { cap }));
    reg.register("catergram", Box::new(CatergramPatterns));
    reg
}

/// Least 4-set of edge indices inducing an excluded tanglegram, if any.
pub fn excluded_witness(t: &Tanglegram) -> Option<[usize; 4]> {
    let n = t.size();
    let forms = excluded_forms();
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                for d in c + 1..n {
                    let sub = t.induced(&[a, b, c, d]).expect("valid edges");
                    if forms.contains(&sub.canonical_form()) {
                        return Some([a, b, c, d]);
                    }
                }
            }
        }
    }
    None
}

/// True iff none of `(3,2,1,4)`, `(4,2,1,3)`, `(3,2,4,1)`, `(4,2,3,1)` is a
/// pattern of `perm`.
pub fn is_planar_catergram(perm: &Permutation) -> bool {
    excluded_patterns()
        .iter()
        .all(|sigma| perm.contains_pattern(sigma).is_none())
}

/// The bar-set of `(3,2,1,4)`.
pub fn excluded_patterns() -> Vec<Permutation> {
    Permutation::new(vec![3, 2, 1, 4])
        .unwrap()
        .bar_set()
        .unwrap()
        .into_iter()
        .collect()
}

/// A zero-crossing layout if one exists. Catergrams use the cater-good
/// search (no cap); other tanglegrams use the capped sweep.
pub fn planar_layout(t: &Tanglegram, cap: usize) -> Result<Option<Layout>> {
    if t.as_catergram().is_some() {
        return Ok(catergram_planar_layout(t));
    }
    sweep_planar_layout(t, cap)
}

pub fn sweep_planar_layout(t: &Tanglegram, cap: usize) -> Result<Option<Layout>> {
    let best = crossing_number(t, cap)?;
    Ok((best.crossings == 0).then(|| Layout::from_masks(t, best.left_mask, best.right_mask)))
}

/// Searches cater-good left orders whose image is also cater-good.
///
/// Cater-good orders of `[n]` are built from the cherry `{n-1, n}` by adding
/// `n-2, ..., 1` at either end. Adding at an end never repairs a violated
/// image, so the search prunes as soon as the partial image stops being
/// cater-good. Returns `None` for tanglegrams that are not catergrams.
pub fn catergram_planar_layout(t: &Tanglegram) -> Option<Layout> {
    let view = t.as_catergram()?;
    let values = cater_good_pair(&view.permutation)?;
    let left_order = values
        .iter()
        .map(|&a| t.left().label(view.left_leaves[a - 1]).unwrap().clone())
        .collect();
    let right_order = values
        .iter()
        .map(|&a| {
            let b = view.permutation.image(a);
            t.right().label(view.right_leaves[b - 1]).unwrap().clone()
        })
        .collect();
    Some(Layout::new(t.clone(), left_order, right_order).expect("cater-good orders are consistent"))
}

/// A cater-good sequence `a` with `perm(a)` cater-good, first in search order.
pub fn cater_good_pair(perm: &Permutation) -> Option<Vec<usize>> {
    let n = perm.len();
    if n < 2 {
        return None;
    }
    for start in [[n - 1, n], [n, n - 1]] {
        let mut block: std::collections::VecDeque<usize> = start.into_iter().collect();
        if extend_cater_good(perm, &mut block, n - 2) {
            return Some(block.into_iter().collect());
        }
    }
    None
}

fn extend_cater_good(
    perm: &Permutation,
    block: &mut std::collections::VecDeque<usize>,
    next: usize,
) -> bool {
    if next == 0 {
        return true;
    }
    let y = perm.image(next);
    let image: Vec<usize> = block.iter().map(|&a| perm.image(a)).collect();
    // Entries with a larger entry after them / before them.
    let mut min_with_larger_after = usize::MAX;
    let mut running = 0;
    for &v in image.iter().rev() {
        if running > v {
            min_with_larger_after = min_with_larger_after.min(v);
        }
        running = running.max(v);
    }
    let mut min_with_larger_before = usize::MAX;
    running = 0;
    for &v in &image {
        if running > v {
            min_with_larger_before = min_with_larger_before.min(v);
        }
        running = running.max(v);
    }
    if y < min_with_larger_after || min_with_larger_after == usize::MAX {
        block.push_front(next);
        if extend_cater_good(perm, block, next - 1) {
            return true;
        }
        block.pop_front();
    }
    if y < min_with_larger_before || min_with_larger_before == usize::MAX {
        block.push_back(next);
        if extend_cater_good(perm, block, next - 1) {
            return true;
        }
        block.pop_back();
    }
    false
}

/// Left order of the closed-form planar drawing of `rho_i`:
/// `1, 2, 3`, the odd numbers `5..=9+2i`, then `10+2i, 11+2i, 12+2i`, then the
/// even numbers from `8+2i` down to `4`.
pub fn rho_layout_order(i: FamilyIndex) -> Vec<usize> {
    let k = i.get();
    let mut order = vec![1, 2, 3];
    order.extend((5..=9 + 2 * k).step_by(2));
    order.extend([10 + 2 * k, 11 + 2 * k, 12 + 2 * k]);
    order.extend((4..=8 + 2 * k).rev().step_by(2));
    order
}

/// The closed-form crossing-free layout of the catergram of `rho_i`.
pub fn rho_layout(i: FamilyIndex) -> Layout {
    let perm = rho(i);
    let t = Tanglegram::catergram(&perm).expect("rho has size at least 14");
    let order = rho_layout_order(i);
    let left = order.iter().map(|&a| Label::from(a)).collect();
    let right = order.iter().map(|&a| Label::from(perm.image(a))).collect();
    Layout::new(t, left, right).expect("closed-form rho layout is consistent")
}
