pub mod classifier;
pub mod field;
pub mod heat;
pub mod hyperbolic;
pub mod jet;
pub mod parabolic;
pub mod regularizer;
pub mod schur;
pub mod tol;
pub mod verify;
