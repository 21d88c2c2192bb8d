pub mod atoms;
pub mod error;
pub mod ih;
pub mod linalg;
pub mod oracle;
pub mod orientation;
pub mod poset;
pub mod resolution;
pub mod simplicial;
pub mod space_desc;
pub mod ssd;
pub mod witt;

pub use error::{Error, Result};
pub use poset::{Poset, UpwardSet};
pub use space_desc::{Atom, SpaceDesc};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../README.md")]
    mod readme {}
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/descriptions.md")]
    mod descriptions {}
    #[doc = include_str!("../../../book/src/triangulation.md")]
    mod triangulation {}
    #[doc = include_str!("../../../book/src/intersection-homology.md")]
    mod intersection_homology {}
    #[doc = include_str!("../../../book/src/witt.md")]
    mod witt {}
    #[doc = include_str!("../../../book/src/resolution.md")]
    mod resolution {}
    #[doc = include_str!("../../../book/src/orientation.md")]
    mod orientation {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
