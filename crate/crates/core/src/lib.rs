pub mod bench;
pub mod certify;
pub mod cone;
pub mod linalg;
pub mod poly;
pub mod rational;
pub mod rigorous;
