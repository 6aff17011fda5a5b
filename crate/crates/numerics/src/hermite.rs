/// Probabilists' Hermite polynomial He_n(x).
pub fn hermite_poly(n: usize, x: f64) -> f64 {
    let mut h0 = 1.0;
    if n == 0 {
        return h0;
    }
    let mut h1 = x;
    for k in 1..n {
        let h2 = x * h1 - k as f64 * h0;
        h0 = h1;
        h1 = h2;
    }
    h1
}

/// Integer coefficients of He_n in the monomial basis, lowest degree first.
/// `None` on overflow.
pub fn hermite_coeffs(n: usize) -> Option<Vec<i128>> {
    let mut prev: Vec<i128> = vec![1];
    if n == 0 {
        return Some(prev);
    }
    let mut cur: Vec<i128> = vec![0, 1];
    for k in 1..n {
        let mut next = vec![0i128; k + 2];
        for (i, &c) in cur.iter().enumerate() {
            next[i + 1] = next[i + 1].checked_add(c)?;
        }
        for (i, &c) in prev.iter().enumerate() {
            next[i] = next[i].checked_sub(c.checked_mul(k as i128)?)?;
        }
        prev = cur;
        cur = next;
    }
    Some(cur)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn low_orders() {
        for &x in &[-2.5, -1.0, 0.0, 0.3, 4.0] {
            assert_eq!(hermite_poly(0, x), 1.0);
            assert!((hermite_poly(2, x) - (x * x - 1.0)).abs() < 1e-12);
            let x2 = x * x;
            assert!((hermite_poly(4, x) - (x2 * x2 - 6.0 * x2 + 3.0)).abs() < 1e-10);
        }
    }

    #[test]
    fn coefficients() {
        assert_eq!(hermite_coeffs(4).unwrap(), vec![3, 0, -6, 0, 1]);
        assert_eq!(hermite_coeffs(3).unwrap(), vec![0, -3, 0, 1]);
        // constant term of He_{2k} is (-1)^k (2k-1)!!
        assert_eq!(hermite_coeffs(12).unwrap()[0], 10395);
    }

    #[test]
    fn generating_function() {
        // exp(zx - z^2/2) = sum z^n/n! He_n(x)
        let (x, z) = (0.7f64, 0.4f64);
        let mut s = 0.0;
        let mut fact = 1.0;
        for n in 0..30 {
            if n > 0 {
                fact *= n as f64;
            }
            s += z.powi(n as i32) / fact * hermite_poly(n, x);
        }
        assert!((s - (z * x - 0.5 * z * z).exp()).abs() < 1e-14);
    }

    proptest! {
        #[test]
        fn derivative_matches_lower_order(n in 1usize..=10, x in -5.0f64..5.0) {
            let h = 1e-5;
            let fd = (hermite_poly(n, x + h) - hermite_poly(n, x - h)) / (2.0 * h);
            let exact = n as f64 * hermite_poly(n - 1, x);
            prop_assert!((fd - exact).abs() <= 1e-6 * (1.0 + exact.abs()));
        }
    }
}
