//! Exact integer sequences used by the moment method.

pub fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    // each partial product is itself a binomial coefficient, so division is exact
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

/// `N(l, v) = C(l, v-1) C(l-1, v-1) / v`, the number of double-tree paths of
/// length `l` with `v` vertices. Zero outside `1 <= v <= l`.
pub fn narayana(l: u64, v: u64) -> u128 {
    if v == 0 || v > l {
        return 0;
    }
    binomial(l, v - 1) * binomial(l - 1, v - 1) / v as u128
}

pub fn catalan(l: u64) -> u128 {
    binomial(2 * l, l) / (l as u128 + 1)
}

/// `p! / (p - v)!`, the number of injective labelings of `v` vertices by `p` labels.
pub fn falling_factorial(p: u64, v: u64) -> u128 {
    if v > p {
        return 0;
    }
    (0..v).map(|i| (p - i) as u128).product()
}
