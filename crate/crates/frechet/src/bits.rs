//! Word-level helpers shared by the DP oracle and the block automata.

/// Within each maximal run of set bits of `mask`, sets every bit at or above
/// the lowest seed of that run. `seeds` must be a subset of `mask`.
///
/// The carry of `mask + seeds` ripples exactly through the seeded part of a
/// run, flipping those sum bits to zero; un-seeded runs keep their bits, so
/// `mask & !sum` recovers the filled positions (seed positions themselves are
/// restored by `| seeds`).
#[inline]
pub(crate) fn fill_runs_word(mask: u64, seeds: u64) -> u64 {
    debug_assert_eq!(seeds & !mask, 0, "seeds must lie inside mask");
    mask & (!mask.wrapping_add(seeds) | seeds)
}

/// Multi-word variant of [`fill_runs_word`]: the addition carry continues a
/// run across word boundaries. Returns the carry out of this word.
#[inline]
pub(crate) fn fill_runs_carry(mask: u64, seeds: u64, carry_in: bool, out: &mut u64) -> bool {
    debug_assert_eq!(seeds & !mask, 0);
    let (s1, c1) = mask.overflowing_add(seeds);
    let (sum, c2) = s1.overflowing_add(carry_in as u64);
    *out = mask & (!sum | seeds);
    c1 || c2
}

/// Bits of the maximal all-ones prefix of `mask` starting at bit 0.
#[inline]
pub(crate) fn prefix_run(mask: u64) -> u64 {
    let ones = (!mask).trailing_zeros();
    if ones >= 64 {
        u64::MAX
    } else {
        (1u64 << ones) - 1
    }
}
