pub mod bag;
pub mod calculus;
pub mod engine;
pub mod export;
pub mod frontend;
pub mod gts;
pub mod model;
pub mod symbolic;
