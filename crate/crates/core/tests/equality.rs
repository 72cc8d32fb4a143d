mod common;

use common::{oracle_equal, random_tanglegram};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use tanglegram::{enumerate_tanglegrams, Label, NodeId, RootedBinaryTree, Tanglegram};

/// Copy of `tree` with random child swaps and labels passed through `rename`.
fn scrambled(
    rng: &mut impl Rng,
    tree: &RootedBinaryTree,
    v: NodeId,
    rename: &dyn Fn(&Label) -> Label,
) -> RootedBinaryTree {
    match tree.children(v) {
        None => RootedBinaryTree::leaf(rename(tree.label(v).unwrap())),
        Some((a, b)) => {
            let a = scrambled(rng, tree, a, rename);
            let b = scrambled(rng, tree, b, rename);
            if rng.gen_bool(0.5) {
                RootedBinaryTree::join(&b, &a).unwrap()
            } else {
                RootedBinaryTree::join(&a, &b).unwrap()
            }
        }
    }
}

fn isomorphic_copy(rng: &mut impl Rng, t: &Tanglegram) -> Tanglegram {
    let l = |x: &Label| Label::new(format!("x{x}")).unwrap();
    let r = |x: &Label| Label::new(format!("y{x}")).unwrap();
    let left = scrambled(rng, t.left(), t.left().root(), &l);
    let right = scrambled(rng, t.right(), t.right().root(), &r);
    let pairs: Vec<(Label, Label)> = t.matching().iter().map(|(a, b)| (l(a), r(b))).collect();
    Tanglegram::new(left, right, &pairs).unwrap()
}

#[test]
fn census_representatives_are_distinct_under_the_oracle() {
    for n in 1..=4 {
        let reps = enumerate_tanglegrams(n).unwrap();
        for i in 0..reps.len() {
            for j in i + 1..reps.len() {
                assert!(
                    !oracle_equal(&reps[i], &reps[j]),
                    "n={n}: {} vs {}",
                    reps[i],
                    reps[j]
                );
            }
        }
    }
}

#[test]
fn scrambled_copies_are_equal() {
    let mut rng = StdRng::seed_from_u64(11);
    for _ in 0..200 {
        let n = rng.gen_range(1..=9);
        let t = random_tanglegram(&mut rng, n);
        let copy = isomorphic_copy(&mut rng, &t);
        assert_eq!(t, copy, "{t}");
        assert_eq!(t.canonical_form(), copy.canonical_form());
        assert_eq!(t.distance_pairs(), copy.distance_pairs());
    }
}

#[test]
fn canonical_equality_matches_the_drawing_oracle() {
    let mut rng = StdRng::seed_from_u64(12);
    let mut equal_seen = 0;
    for _ in 0..400 {
        let n = rng.gen_range(2..=5);
        let a = random_tanglegram(&mut rng, n);
        let b = random_tanglegram(&mut rng, n);
        let oracle = oracle_equal(&a, &b);
        equal_seen += oracle as usize;
        assert_eq!(a == b, oracle, "{a} vs {b}");
    }
    assert!(equal_seen > 20, "too few equal pairs sampled: {equal_seen}");
}

#[test]
fn size_six_count() {
    assert_eq!(enumerate_tanglegrams(6).unwrap().len(), 1509);
}

#[test]
fn equality_needs_the_matching_not_just_the_trees() {
    let a: Tanglegram = "((1,2),(3,4)) ; ((1,2),(3,4)) ; 1:1,2:2,3:3,4:4"
        .parse()
        .unwrap();
    let b: Tanglegram = "((1,2),(3,4)) ; ((1,2),(3,4)) ; 1:1,2:3,3:2,4:4"
        .parse()
        .unwrap();
    let c: Tanglegram = "((1,2),(3,4)) ; ((1,2),(3,4)) ; 1:4,2:3,3:2,4:1"
        .parse()
        .unwrap();
    assert_ne!(a, b);
    assert_eq!(a, c);
    assert!(!oracle_equal(&a, &b));
    assert!(oracle_equal(&a, &c));
}
