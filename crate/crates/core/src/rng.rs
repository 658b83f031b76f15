//! Seeded PCG streams.
//!
//! Every random consumer draws from a 64-bit-output PCG generator
//! (`Lcg128Xsl64`, a.k.a. PCG64 XSL-RR) built with `Pcg64::new(state, stream)`.
//! Both 128-bit arguments come from a SplitMix64 sequence started at
//! `seed ^ (domain << 56)` and advanced once more per `index`-mixing step:
//!
//! ```text
//! z = splitmix(seed ^ (domain << 56)) ^ index
//! state  = (splitmix(z) << 64) | splitmix(z)   (two successive outputs)
//! stream = (splitmix(z) << 64) | splitmix(z)   (the next two)
//! ```
//!
//! Deriving the state as well as the increment keeps the streams of
//! neighbouring indices uncorrelated; PCG streams sharing a state and
//! differing only in the increment are not. Uniform `f64` draws take the
//! top 53 bits of a `next_u64` scaled by 2^-53.

use rand_pcg::Pcg64;

/// Domain tags keep the streams of different consumers disjoint.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(u64)]
pub enum Domain {
    Portfolio = 1,
    Paths = 2,
    Shocks = 3,
    StateSpace = 4,
}

/// One SplitMix64 step: advances `x` and returns the mixed output.
fn splitmix(x: &mut u64) -> u64 {
    *x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    let mut z = *x;
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

pub fn stream(seed: u64, domain: Domain, index: u64) -> Pcg64 {
    let mut x = seed ^ ((domain as u64) << 56);
    let mut z = splitmix(&mut x) ^ index;
    let mut wide = || ((splitmix(&mut z) as u128) << 64) | splitmix(&mut z) as u128;
    let state = wide();
    let increment = wide();
    Pcg64::new(state, increment)
}
