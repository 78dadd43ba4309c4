pub mod activ;
pub mod conv;
pub mod linear;
pub mod norm;
pub mod pool;
pub mod shape;
