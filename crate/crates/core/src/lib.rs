pub mod abelian;
pub mod arith;
pub mod cli;
pub mod limits;
pub mod manifolds;
pub mod endomorphisms;
pub mod invariants;
pub mod oracle;
pub mod files;
pub mod report;
pub mod verify;
