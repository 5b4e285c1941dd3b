//! Deterministic seed derivation for parallel work.
//!
//! Every unit of work (table row, test case, SMC candidate) gets its own
//! 64-bit seed derived from a base seed and an index, so batches can run on
//! any number of workers and still produce identical bytes. Within one unit,
//! ChaCha8 *streams* separate roles (0 = simulation dynamics, 1 = parameter
//! draws, 2 = null-estimator draws, 3 = SMC proposal machinery).

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

/// SplitMix64 finalizer; bijective on u64.
fn mix(mut z: u64) -> u64 {
    z ^= z >> 30;
    z = z.wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z ^= z >> 27;
    z = z.wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^= z >> 31;
    z
}

/// Child seed for `index` under `base`. Injective in `index` for a fixed
/// base: distinct indices always yield distinct seeds.
pub fn derive_seed(base: u64, index: u64) -> u64 {
    mix(base.wrapping_add(index.wrapping_add(1).wrapping_mul(GOLDEN)))
}

/// Seed-family tags, one level above per-unit indices.
pub mod role {
    /// Reference-table rows.
    pub const ROWS: u64 = 0;
    /// Recovery-study test cases.
    pub const CASES: u64 = 1;
    /// ABC-SMC candidate proposals.
    pub const SMC: u64 = 2;
    /// Beacon placement.
    pub const BEACONS: u64 = 3;
}

/// Root of a seed family: `derive_seed(family_seed(base, role), index)`.
pub fn family_seed(base: u64, role: u64) -> u64 {
    derive_seed(base, role)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    #[test]
    fn derived_seeds_are_distinct() {
        let mut seen = HashSet::new();
        for i in 0..100_000u64 {
            assert!(seen.insert(derive_seed(42, i)));
        }
    }

    #[test]
    fn derivation_is_stable() {
        // Frozen values: changing the derivation would silently break
        // reproducibility of existing runs.
        assert_eq!(derive_seed(0, 0), mix(GOLDEN));
        assert_eq!(derive_seed(7, 3), derive_seed(7, 3));
        assert_ne!(derive_seed(7, 3), derive_seed(8, 3));
        assert_ne!(family_seed(7, role::ROWS), family_seed(7, role::CASES));
    }
}
