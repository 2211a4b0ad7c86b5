//! Exact-arithmetic engine for homotopy coalgebra structures on simplicial chains.
//!
//! The crate builds oriented simplicial chain complexes over the rationals,
//! completes a local coproduct to a square-zero coderivation on the free
//! coalgebra of the suspended chains, constructs symmetric co-inner products
//! from a fundamental cycle, decomposes cobimodules into minimal plus
//! contractible summands, inverts quasi-isomorphisms, and verifies the induced
//! algebraic identities (square-zero, chain-map, symmetry, duality, BV) with
//! exact rational residuals.
//!
//! All arithmetic is exact ([`num_rational::BigRational`]); every construction
//! is deterministic given the input, so serialized outputs are byte-stable.

pub mod coinner;
pub mod completion;
pub mod error;
pub mod fixtures;
pub mod hochschild;
pub mod lie;
pub mod linalg;
pub mod minimal;
pub mod simplicial;
pub mod tensor;

pub use error::Error;

/// Exact rational scalar used throughout the crate.
pub type Rat = num_rational::BigRational;

/// Convenience constructor for small rationals.
pub fn rat(p: i64, q: i64) -> Rat {
    use num_bigint::BigInt;
    Rat::new(BigInt::from(p), BigInt::from(q))
}

/// Parse a rational from `"p/q"` or `"p"` text.
pub fn parse_rat(s: &str) -> Result<Rat, Error> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((p, q)) => (p.trim(), q.trim()),
        None => (s, "1"),
    };
    let p: num_bigint::BigInt = num
        .parse()
        .map_err(|_| Error::Parse(format!("bad rational `{s}`")))?;
    let q: num_bigint::BigInt = den
        .parse()
        .map_err(|_| Error::Parse(format!("bad rational `{s}`")))?;
    if q == num_bigint::BigInt::from(0) {
        return Err(Error::Parse(format!("zero denominator in `{s}`")));
    }
    Ok(Rat::new(p, q))
}

/// Render a rational as `"p"` or `"p/q"`.
pub fn rat_str(r: &Rat) -> String {
    use num_traits::One;
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}
pub mod dbg;
