use mertens_core::numkernel::DoubleDouble;
use mertens_core::polylog::{eulerian_row, li_neg};
use mertens_core::primes::{iroot, isqrt, omega_sieve, primes_in_range, simple_primes};
use mertens_core::{HPReal, PowerSeries};
use proptest::prelude::*;

const PREC: u32 = 192;

fn series(cs: &[f64]) -> PowerSeries {
    PowerSeries::from_fn(cs.len() - 1, |i| HPReal::from_f64(cs[i], PREC))
}

fn close(a: &PowerSeries, b: &PowerSeries, tol: f64) -> bool {
    a.coeffs().iter().zip(b.coeffs()).all(|(x, y)| {
        let scale = x.abs().to_f64().max(y.abs().to_f64()).max(1.0);
        (x - y).abs().to_f64() <= tol * scale
    })
}

fn coeffs(order: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-4.0f64..4.0, order + 1)
}

fn trial_omega(mut n: u64) -> u8 {
    let mut count = 0;
    let mut p = 2;
    while p * p <= n {
        while n.is_multiple_of(p) {
            n /= p;
            count += 1;
        }
        p += 1;
    }
    count + u8::from(n > 1)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn series_product_is_commutative_and_associative(a in coeffs(8), b in coeffs(8), c in coeffs(8)) {
        let (a, b, c) = (series(&a), series(&b), series(&c));
        prop_assert!(close(&a.mul(&b).unwrap(), &b.mul(&a).unwrap(), 1e-50));
        let left = a.mul(&b).unwrap().mul(&c).unwrap();
        let right = a.mul(&b.mul(&c).unwrap()).unwrap();
        prop_assert!(close(&left, &right, 1e-48));
    }

    #[test]
    fn series_product_distributes(a in coeffs(6), b in coeffs(6), c in coeffs(6)) {
        let (a, b, c) = (series(&a), series(&b), series(&c));
        let left = a.mul(&b.add(&c).unwrap()).unwrap();
        let right = a.mul(&b).unwrap().add(&a.mul(&c).unwrap()).unwrap();
        prop_assert!(close(&left, &right, 1e-50));
    }

    #[test]
    fn division_undoes_multiplication(a in coeffs(10), mut b in coeffs(10)) {
        b[0] = if b[0] >= 0.0 { b[0] + 0.5 } else { b[0] - 0.5 };
        let (a, b) = (series(&a), series(&b));
        // quotient coefficients grow like (1/b0)^n, so compare relatively
        let back = a.mul(&b).unwrap().div(&b).unwrap();
        prop_assert!(close(&back, &a, 1e-35));
    }

    #[test]
    fn exp_inverts_log(mut a in coeffs(10)) {
        a[0] = 1.0;
        let a = series(&a);
        let back = a.log().unwrap().exp().unwrap();
        prop_assert!(close(&back, &a, 1e-35));
    }

    #[test]
    fn truncation_commutes_with_product(a in coeffs(12), b in coeffs(12), m in 0usize..12) {
        let (a, b) = (series(&a), series(&b));
        let full = a.mul(&b).unwrap().truncate(m);
        let cut = a.truncate(m).mul(&b.truncate(m)).unwrap();
        prop_assert!(close(&full, &cut, 0.0));
    }

    #[test]
    fn derivative_inverts_integral(a in coeffs(9), c in -3.0f64..3.0) {
        let a = series(&a);
        let i = a.integrate(HPReal::from_f64(c, PREC));
        prop_assert_eq!(i.coeff(0).to_f64(), c);
        prop_assert!(close(&i.deriv(), &a.truncate(a.order() - 1), 1e-55));
    }

    #[test]
    fn hpreal_bytes_round_trip(v in any::<f64>().prop_filter("finite", |v| v.is_finite()), e in -200i32..200) {
        let x = HPReal::from_f64(v.abs(), PREC).mul_pow2(e).sqrt();
        let x = if v < 0.0 { -x } else { x };
        let bytes = x.to_bytes();
        let (back, used) = HPReal::from_bytes(&bytes).unwrap();
        prop_assert_eq!(used, bytes.len());
        prop_assert_eq!(back.prec(), x.prec());
        prop_assert!(back == x);
    }

    #[test]
    fn double_double_reciprocal_is_accurate(n in 1u64..u64::MAX) {
        let dd = DoubleDouble::recip_u64(n).to_hpreal(PREC);
        let exact = HPReal::from_u64(n, PREC).recip();
        let rel = ((&dd - &exact).abs() * HPReal::from_u64(n, PREC)).to_f64();
        prop_assert!(rel <= 2f64.powi(-100), "n={n} rel={rel:e}");
    }

    #[test]
    fn segmented_sieve_matches_simple_sieve(lo in 0u64..200_000, len in 1u64..50_000) {
        let hi = lo + len;
        let want: Vec<u64> = simple_primes(hi - 1).into_iter().filter(|&p| p >= lo).collect();
        prop_assert_eq!(primes_in_range(lo, hi), want);
    }

    #[test]
    fn omega_matches_trial_division(lo in 2u64..10_000_000, len in 1u64..400) {
        let block = omega_sieve(lo, lo + len);
        for (n, w) in block.iter() {
            prop_assert_eq!(w, trial_omega(n), "n={}", n);
        }
    }

    #[test]
    fn integer_roots_bracket(n in any::<u64>(), k in 2u32..6) {
        let r = isqrt(n);
        prop_assert!(r * r <= n && (r + 1).checked_mul(r + 1).is_none_or(|s| s > n));
        let r = iroot(n, k);
        prop_assert!(r.pow(k) <= n && (r + 1).checked_pow(k).is_none_or(|s| s > n));
    }

    #[test]
    fn negative_index_polylog_increases_in_z(k in 0u32..30, a in 0.01f64..0.98, b in 0.01f64..0.98) {
        prop_assume!((a - b).abs() > 1e-6);
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        let f_lo = li_neg(k, &HPReal::from_f64(lo, PREC)).unwrap();
        let f_hi = li_neg(k, &HPReal::from_f64(hi, PREC)).unwrap();
        prop_assert!(f_lo.is_positive());
        prop_assert!(f_hi > f_lo);
    }

    #[test]
    fn eulerian_row_sums_to_factorial(k in 0u32..60) {
        let row = eulerian_row(k);
        let sum = row.iter().fold(rug::Integer::new(), |acc, c| acc + c);
        prop_assert_eq!(sum, rug::Integer::from(rug::Integer::factorial(k)));
        let n = row.len();
        for i in 0..n {
            prop_assert_eq!(&row[i], &row[n - 1 - i]);
        }
    }
}
