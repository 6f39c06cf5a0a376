//! Un-folding phylogenetic networks into MUL-trees and folding MUL-trees back
//! up into networks.
//!
//! The un-fold `U(N)` of a network `N` has one vertex per root path of `N`
//! that ends at a tree vertex. The fold-up `F(M)` of a MUL-tree merges
//! isomorphic subtrees. A network is *stable* when `F(U(N))` is isomorphic to
//! `N`. For stable networks, displayed trees, base trees, tree-child and
//! reticulation-visibility can all be decided by looking at `U(N)` through
//! its X-sets; [`properties`] has the deciders and [`oracles`] the brute-force
//! references they are tested against.
//!
//! ```
//! use stablenet::{fold_up, is_stable, parse_enewick, print_mulnewick, unfold};
//!
//! let n = parse_enewick("((((1)#H1,(2)#H2),3),(#H1,#H2));").unwrap();
//! let u = unfold(&n).unwrap();
//! assert_eq!(print_mulnewick(&u.multree), "(((1,2),3),(1,2));");
//! assert!(!is_stable(&n).unwrap());
//!
//! let (folded, _) = fold_up(&u.multree).unwrap();
//! assert!(is_stable(&folded).unwrap());
//! ```

pub mod canonical;
pub mod foldup;
pub mod io;
pub mod model;
pub mod oracles;
pub mod properties;
pub mod subnetworks;
pub mod unfold;
pub mod validate;
pub mod xsets;

pub use canonical::{canon_code, equiv_partition, multree_isomorphic, xnetwork_isomorphic, CanonCode, ClassId, EquivPartition};
pub use foldup::{fold_up, is_sound, is_stable, kappa, stabilize, FoldError, Kappa};
pub use io::{parse_enewick, parse_mulnewick, print_enewick, print_mulnewick, ParseError};
pub use model::{Arc, Label, MulTree, PhyloNetwork, PhyloTree, PseudoDag, VertexId, XNetwork};
pub use properties::{DeciderOptions, PropertyError, PropertyVerdict, StableNetwork};
pub use unfold::{unfold, unfold_with_cap, Unfolding, DEFAULT_PATH_CAP};
pub use xsets::{XSet, XSetMaps};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/formats.md")]
    mod formats {}
    #[doc = include_str!("../../../book/src/unfold-foldup.md")]
    mod unfold_foldup {}
    #[doc = include_str!("../../../book/src/xsets.md")]
    mod xsets {}
    #[doc = include_str!("../../../book/src/deciders.md")]
    mod deciders {}
    #[doc = include_str!("../../../book/src/tree-child.md")]
    mod tree_child {}
    #[doc = include_str!("../../../book/src/subnetworks.md")]
    mod subnetworks {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
