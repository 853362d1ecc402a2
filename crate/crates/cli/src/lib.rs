//! IO companion for the height-bounded Brauer category computations: file
//! formats, the disk-backed height table store, and the batch CLI surface.

pub mod formats;
pub mod store;
