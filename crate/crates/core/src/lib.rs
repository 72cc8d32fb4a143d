//! Tanglegrams, catergrams and the induced subtanglegram order.
//!
//! The crate covers rooted binary trees, permutation patterns, tanglegram
//! equality and containment, the `rho`/`pi` permutation families, layouts with
//! crossing counts and planarity tests, and SVG/TikZ rendering.

pub mod antichain;
pub mod census;
pub mod error;
pub mod layout;
pub mod perm;
pub mod registry;
pub mod render;
pub mod tanglegram;
pub mod trees;

pub use antichain::{
    families, pi_seq, rho, verify_antichain, verify_chain, FamilyIndex, PairFilter, SequenceFamily,
};
pub use census::{census, enumerate_tanglegrams, tree_shapes, Census};
pub use error::{Error, Result};
pub use layout::{
    count_crossings, crossing_number, excluded_tanglegrams, is_planar_catergram, planar_layout,
    planarity_tests, rho_layout, Layout, PlanarityTest, DEFAULT_CAP,
};
pub use perm::{BarTag, Permutation, SearchOutcome};
pub use registry::Registry;
pub use render::{emitters, geometry, to_svg, to_tikz, DrawingSpec, Emitter};
pub use tanglegram::{
    catergram_contains, find_induced_subset, is_induced_sub, parse_tanglegrams, CanonicalForm,
    CatergramView, DistancePairMultiset, Tanglegram,
};
pub use trees::{Label, Node, NodeId, RootedBinaryTree};
