pub mod catalog;
pub mod field;
pub mod iso;
pub mod mmp;
pub mod pipeline;
pub mod states;
pub mod subsets;
pub mod vectors;
