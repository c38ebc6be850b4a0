//! Ramanujan's τ(n) from `Δ = q ∏ (1 - q^n)^24`, in exact integer arithmetic.

/// Largest `n` for which τ is generated.
pub const TAU_MAX: usize = 100_000;

/// `τ(1), ..., τ(n_max)`.
///
/// Uses Jacobi's identity `∏(1 - q^n)^3 = ∑ (-1)^k (2k+1) q^{k(k+1)/2}` and
/// raises the sparse series to the eighth power by repeated sparse × dense
/// products, so every step is exact.
pub fn ramanujan_tau(n_max: usize) -> Vec<i128> {
    assert!(n_max <= TAU_MAX, "tau limited to n <= {TAU_MAX}");
    if n_max == 0 {
        return Vec::new();
    }
    let len = n_max; // coefficients of q^0 .. q^{n_max-1}
    let mut sparse = Vec::new();
    let mut k = 0usize;
    loop {
        let e = k * (k + 1) / 2;
        if e >= len {
            break;
        }
        let c = (2 * k + 1) as i128;
        sparse.push((e, if k % 2 == 0 { c } else { -c }));
        k += 1;
    }
    let mut dense = vec![0i128; len];
    for &(e, c) in &sparse {
        dense[e] = c;
    }
    for _ in 0..7 {
        let mut next = vec![0i128; len];
        for &(e, c) in &sparse {
            for (i, &d) in dense[..len - e].iter().enumerate() {
                if d != 0 {
                    next[i + e] += c * d;
                }
            }
        }
        dense = next;
    }
    dense
}

#[cfg(test)]
mod tests {
    use super::*;

    // Brute-force expansion of q ∏_{n<N} (1 - q^n)^24, independent of the
    // Jacobi-identity route.
    fn brute_tau(n_max: usize) -> Vec<i128> {
        let mut poly = vec![0i128; n_max];
        poly[0] = 1;
        for n in 1..n_max {
            for _ in 0..24 {
                for i in (n..n_max).rev() {
                    poly[i] -= poly[i - n];
                }
            }
        }
        poly
    }

    #[test]
    fn small_values() {
        let tau = ramanujan_tau(12);
        assert_eq!(
            tau,
            vec![1, -24, 252, -1472, 4830, -6048, -16744, 84480, -113643, -115920, 534612, -370944]
        );
    }

    #[test]
    fn matches_brute_force_expansion() {
        assert_eq!(ramanujan_tau(200), brute_tau(200));
    }

    #[test]
    fn multiplicative_and_hecke() {
        let tau = ramanujan_tau(1000);
        let t = |n: usize| tau[n - 1];
        assert_eq!(t(6), t(2) * t(3));
        assert_eq!(t(35), t(5) * t(7));
        // τ(p²) = τ(p)² - p^11
        assert_eq!(t(4), t(2) * t(2) - 2i128.pow(11));
        assert_eq!(t(961), t(31) * t(31) - 31i128.pow(11));
    }
}
