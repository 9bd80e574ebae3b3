//! Deterministic seed derivation for nested randomized work.
//!
//! Every randomized routine takes an explicit u64 seed. Nested work (one
//! Monte Carlo replication, one recursion node) derives its own seed with
//! [`derive_seed`], a fixed splitmix64 chain over (master, stream,
//! substream). The mapping is part of the output contract: a recorded seed
//! reproduces its run exactly, independent of evaluation order.

fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed for child (stream, substream) of `master`.
pub fn derive_seed(master: u64, stream: u64, substream: u64) -> u64 {
    let mut s = master;
    let mut t = splitmix64(&mut s) ^ stream;
    let mut u = splitmix64(&mut t) ^ substream;
    splitmix64(&mut u)
}
