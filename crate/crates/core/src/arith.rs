//! Small integer helpers.

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Smallest prime dividing `n`, by trial division. `None` for `n < 2`.
pub fn least_prime_factor(n: u64) -> Option<u64> {
    if n < 2 {
        return None;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return Some(d);
        }
        d += 1;
    }
    Some(n)
}

pub fn is_prime(n: u64) -> bool {
    least_prime_factor(n) == Some(n)
}

/// `(p, k)` with `n = p^k`, if `n` is a prime power greater than one.
pub fn prime_power(n: u64) -> Option<(u64, u32)> {
    let p = least_prime_factor(n)?;
    let mut m = n;
    let mut k = 0;
    while m.is_multiple_of(p) {
        m /= p;
        k += 1;
    }
    (m == 1).then_some((p, k))
}

pub fn pow_mod(base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut b = base % m;
    let mut acc = 1 % m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        exp >>= 1;
    }
    acc
}

pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lpf_small() {
        assert_eq!(least_prime_factor(1), None);
        assert_eq!(least_prime_factor(2), Some(2));
        assert_eq!(least_prime_factor(9), Some(3));
        assert_eq!(least_prime_factor(21), Some(3));
        assert_eq!(least_prime_factor(125), Some(5));
        assert_eq!(least_prime_factor(121), Some(11));
    }

    #[test]
    fn prime_powers() {
        assert_eq!(prime_power(27), Some((3, 3)));
        assert_eq!(prime_power(12), None);
        assert_eq!(prime_power(1), None);
    }
}
