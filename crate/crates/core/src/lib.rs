pub mod machine;
pub mod sexpr;
pub mod loop_guard;
pub mod recfun;
pub mod arith;
pub mod dovetail;
pub mod harness;
