//! Exact binomial coefficients and the two double-counting identities used
//! throughout the constructions. No floating point anywhere.

/// Binomial coefficient `C(n, k)` computed by the multiplicative formula.
/// Every intermediate division is exact. Returns 0 when `k > n`.
pub fn binom(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    u64::try_from(acc).expect("binomial overflows u64")
}

/// Evaluates both counting identities exactly:
///
/// * `C(n,h) = sum_{i=0}^{h} C(m,i) C(n-m,h-i)` (Vandermonde), and
/// * `m [C(n-1,h-1) - C(m-1,h-1)] = sum_{i=1}^{h-1} i C(m,i) C(n-m,h-i)`,
///
/// returning whether each holds.
pub fn identity_checks(n: u64, m: u64, h: u64) -> (bool, bool) {
    let lhs1 = binom(n, h) as u128;
    let rhs1: u128 = (0..=h)
        .map(|i| binom(m, i) as u128 * binom(n - m, h - i) as u128)
        .sum();

    let lhs2 = m as u128 * (binom(n - 1, h - 1) - binom(m - 1, h - 1)) as u128;
    let rhs2: u128 = (1..h)
        .map(|i| i as u128 * binom(m, i) as u128 * binom(n - m, h - i) as u128)
        .sum();

    (lhs1 == rhs1, lhs2 == rhs2)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_values() {
        assert_eq!(binom(6, 3), 20);
        assert_eq!(binom(5, 2), 10);
        assert_eq!(binom(9, 3), 84);
        assert_eq!(binom(8, 2), 28);
        assert_eq!(binom(27, 3), 2925);
        assert_eq!(binom(39, 4), 82251);
        assert_eq!(binom(0, 0), 1);
        assert_eq!(binom(2, 3), 0);
    }

    #[test]
    fn identities_hold_on_named_instances() {
        assert_eq!(identity_checks(9, 6, 3), (true, true));
        assert_eq!(identity_checks(6, 6, 3), (true, true));
        assert_eq!(identity_checks(28, 5, 4), (true, true));
    }
}
