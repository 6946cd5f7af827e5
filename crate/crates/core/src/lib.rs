//! Parking spaces for irreducible real reflection groups.
//!
//! This crate models the reflection groups of types A, B/C, D and I2(m) at
//! desk scale, together with the combinatorial and numerical objects built on
//! top of them:
//!
//! * noncrossing partitions `NC(W)`, Fuss multichains `NC^k(W)` and
//!   length-additive factorizations of a Coxeter element, with the
//!   generalized rotation action of `Z_kh`;
//! * the noncrossing parking space `Park(W, k)` with its `W x Z_kh` action,
//!   the type A labeled-partition model and classical Fuss parking functions;
//! * permutation characters, Fuss-Catalan and q-Fuss-Catalan numbers, cyclic
//!   sieving checks and the noncrossing/nonnesting orbit coincidence;
//! * the space of equivariant homogeneous polynomial maps `V -> V` of degree
//!   `kh+1`, with exact dimension formulas and brute-force bases;
//! * numerically certified parking loci (fixed points of such maps), solved
//!   by total-degree homotopy continuation, with reconstructed group actions
//!   and path transport between two maps;
//! * a stabilizer-indexed sieve that builds explicit equivariant bijections
//!   between any two of these `W x Z_kh`-sets.
//!
//! All group data is immutable after construction and all operations are
//! pure, so everything here is safe to share across threads.

pub mod characters;
pub mod error;
pub mod group;
pub mod hsop;
pub mod locus;
pub mod noncrossing;
pub mod num;
pub mod parkfn;
pub mod poly;
pub mod report;
pub mod rng;
pub mod roots;
pub mod sieve;

pub use error::Error;
pub use group::{Family, GroupSpec, ReflectionGroup};

/// Result alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;

/// Configure the global worker pool. Results are deterministic regardless of
/// the thread count; this only bounds parallelism. A second call is a no-op.
pub fn init_thread_pool(threads: Option<usize>) {
    if let Some(n) = threads {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
}
