//! Numerical laboratory for quadratic twist families of modular L-functions.
//!
//! The crate evaluates, at desk scale, the objects that drive the statistics of
//! central derivatives L'(½, f⊗χ_d) and Tate–Shafarevich-order proxies over
//! root-number-restricted families of fundamental discriminants:
//!
//! * exact arithmetic kernels (primes, Kronecker symbols, Hecke eigenvalues
//!   from point counts or coefficient files, root numbers, family sieves),
//! * quadratic Gauss sums in closed form with a brute-force oracle,
//! * smoothed character sums over twist families and their main terms,
//! * the Dirichlet-polynomial proxy P_f(d;x), the Tamagawa proxy C(d;x),
//!   and the Galois data (μ(E), σ(E)²) of the underlying cubic,
//! * explicit-formula zero sums (archimedean term minus prime sum) under a
//!   compactly supported Fourier pair, and their family aggregates,
//! * numerical Λ(s, f⊗χ_d) via a smoothed approximate functional equation,
//!   central derivatives, and normalized statistics,
//! * weighted moments, Gaussian/bivariate rectangle probabilities, and
//!   empirical joint-distribution reports,
//! * BSD invariant ingestion (fixtures, remote database, computed proxies).
//!
//! Everything is deterministic: family scans are chunked over absolute
//! d-windows and reduced in order with compensated summation, so results are
//! identical across worker counts.


pub mod charsum;
pub mod cubic;
pub mod curve;
pub mod discriminant;
pub mod error;
pub mod explicit;
pub mod extprec;
pub mod family;
pub mod gauss;
pub mod kernel;
pub mod kronecker;
pub mod lvalue;
pub mod newform;
pub mod primes;
pub mod proxy;
pub mod quad;
pub mod reduce;
pub mod smooth;
pub mod special;

pub mod family;
pub mod gauss;
pub mod kernel;
pub mod kronecker;


pub mod newform;
pub mod primes;
pub mod proxy;
pub mod quad;
pub mod reduce;
pub mod smooth;
pub mod special;

pub use error::Error;
pub use kronecker::kronecker;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
