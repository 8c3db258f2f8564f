//! Small integer helpers. Group orders are at most a few thousand, so trial
//! division is plenty.

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

pub fn lcm(a: u64, b: u64) -> u64 {
    if a == 0 || b == 0 {
        0
    } else {
        a / gcd(a, b) * b
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Prime factorization as `(p, k)` pairs in increasing order of `p`.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            let mut k = 0;
            while n.is_multiple_of(d) {
                n /= d;
                k += 1;
            }
            out.push((d, k));
        }
        d += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// `Some((p, k))` when `n = p^k` with `k >= 1`.
pub fn prime_power(n: u64) -> Option<(u64, u32)> {
    match factorize(n).as_slice() {
        [(p, k)] => Some((*p, *k)),
        _ => None,
    }
}

/// Exponent of `p` in `n`.
pub fn valuation(mut n: u64, p: u64) -> u32 {
    let mut k = 0;
    while n > 0 && n.is_multiple_of(p) {
        n /= p;
        k += 1;
    }
    k
}

/// All integer partitions of `n` in non-increasing part order, generated in
/// reverse lexicographic order.
pub fn partitions(n: u32) -> Vec<Vec<u32>> {
    fn go(rest: u32, max: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if rest == 0 {
            out.push(cur.clone());
            return;
        }
        for part in (1..=max.min(rest)).rev() {
            cur.push(part);
            go(rest - part, part, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(n, n, &mut Vec::new(), &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basics() {
        assert_eq!(gcd(12, 18), 6);
        assert_eq!(lcm(4, 6), 12);
        assert!(is_prime(5) && !is_prime(9) && !is_prime(1));
        assert_eq!(factorize(72), vec![(2, 3), (3, 2)]);
        assert_eq!(prime_power(128), Some((2, 7)));
        assert_eq!(prime_power(12), None);
        assert_eq!(valuation(96, 2), 5);
    }

    #[test]
    fn partition_counts() {
        let counts: Vec<usize> = (1..=6).map(|n| partitions(n).len()).collect();
        assert_eq!(counts, vec![1, 2, 3, 5, 7, 11]);
        assert_eq!(partitions(3), vec![vec![3], vec![2, 1], vec![1, 1, 1]]);
    }
}
