//! Workbench for ordered transexponential fields.

pub mod contraction;
pub mod dlo;
pub mod hahn;
pub mod levelindex;
pub mod ordertype;
pub mod rational;
pub mod transexp;
