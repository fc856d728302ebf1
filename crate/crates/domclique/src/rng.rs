//! Counter-style deterministic randomness.
//!
//! All randomness in this crate comes from SplitMix64: the i-th output of a
//! stream with seed s is `mix64(s + (i+1)·GAMMA)`, where `mix64` is the
//! Stafford variant-13 finalizer. Because the state for index i is computed
//! directly (no sequential stepping), any draw can be produced in isolation:
//! workers can consume disjoint index ranges of the same stream and still
//! produce exactly the bits a single-threaded run would.
//!
//! Seed derivation for nested streams (one stream per Monte Carlo trial)
//! reuses the same construction: the trial-t seed is output t of the stream
//! seeded by the master seed.

/// Weyl-sequence increment (2^64 / φ, forced odd).
pub const GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

/// 64-bit finalizer (Stafford variant 13, the SplitMix64 output function).
#[inline]
pub fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Output `i` of the SplitMix64 stream seeded with `seed`.
#[inline]
pub fn stream(seed: u64, i: u64) -> u64 {
    mix64(seed.wrapping_add(GAMMA.wrapping_mul(i.wrapping_add(1))))
}

/// Map 64 random bits to the unit interval [0,1) with 53-bit resolution.
#[inline]
pub fn unit(bits: u64) -> f64 {
    (bits >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Seed of the per-trial stream for trial `t` under `master`.
#[inline]
pub fn trial_seed(master: u64, t: u64) -> u64 {
    stream(master, t)
}
