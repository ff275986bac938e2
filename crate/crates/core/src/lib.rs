pub mod calculus;
pub mod cli;
pub mod crossprod;
pub mod hopf;
pub mod plane;
pub mod quad;
pub mod report;
pub mod rewrite;
pub mod scalar;
pub mod series;
pub mod special;
pub mod spectral;
pub mod state;
pub mod text;
