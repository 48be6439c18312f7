//! Subset counting and the combinatorial guard shared by the enumerators.

use crate::error::{Error, Result};

/// Upper limit on the number of subsets any exhaustive routine will visit.
pub const COMBINATION_LIMIT: u128 = 10_000_000;

/// `n choose k`, saturating at `u128::MAX`.
pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = match acc.checked_mul((n - i) as u128) {
            Some(v) => v / (i as u128 + 1),
            None => return u128::MAX,
        };
    }
    acc
}

pub fn guard(count: u128) -> Result<()> {
    if count > COMBINATION_LIMIT {
        Err(Error::GuardExceeded { count, limit: COMBINATION_LIMIT })
    } else {
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_binomials() {
        assert_eq!(binomial(5, 2), 10);
        assert_eq!(binomial(30, 15), 155_117_520);
        assert_eq!(binomial(3, 4), 0);
        assert_eq!(binomial(7, 0), 1);
    }

    #[test]
    fn guard_trips_above_limit() {
        assert!(guard(binomial(40, 10)).is_err());
        assert!(guard(binomial(20, 5)).is_ok());
    }
}
