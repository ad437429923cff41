use proptest::prelude::*;
use rug::Integer;
use slopes_core::qseries::*;
use slopes_core::Error;

/// Direct expansion of q * prod (1 - q^n)^24 by multiplying one factor at a time.
fn delta_by_factors(n: usize) -> Vec<Integer> {
    let mut p = vec![Integer::new(); n];
    p[0] = Integer::from(1);
    for m in 1..n {
        for _ in 0..24 {
            for e in (m..n).rev() {
                let t = p[e - m].clone();
                p[e] -= t;
            }
        }
    }
    // coefficient of q^(e+1)
    p
}

/// Euler's pentagonal series sum (-1)^n q^(n(3n-1)/2) raised to the 24th power.
fn delta_by_pentagonal(n: usize) -> Vec<Integer> {
    let mut eta = vec![Integer::new(); n];
    for k in -(n as i64)..=(n as i64) {
        let e = k * (3 * k - 1) / 2;
        if e >= 0 && (e as usize) < n {
            eta[e as usize] += if k % 2 == 0 { 1 } else { -1 };
        }
    }
    let s = QSeries::new(0, eta, n as i64);
    s.pow(24).coeff_range(0, n as i64)
}

#[test]
fn delta_first_coefficients() {
    let oracle = delta_by_factors(6);
    let d = series_delta(6).unwrap();
    let got = d.coeff_range(1, 7);
    assert_eq!(got, oracle);
    let expected: Vec<Integer> = [1, -24, 252, -1472, 4830, -6048].iter().map(|&x| Integer::from(x)).collect();
    assert_eq!(got, expected);
}

#[test]
fn delta_two_expansion_routes_agree() {
    let n = 60;
    let d = series_delta(n as i64).unwrap();
    assert_eq!(d.coeff_range(1, n as i64 + 1), delta_by_pentagonal(n));
}

#[test]
fn delta_content_is_one() {
    for n in [1, 5, 20, 50] {
        assert_eq!(content(&series_delta(n).unwrap()).unwrap(), 1);
    }
}

#[test]
fn j_coefficients() {
    let j = series_j(4).unwrap();
    assert_eq!(j.coeff(-1), 1);
    assert_eq!(j.coeff(0), 744);
    assert_eq!(j.coeff(1), 196884);
}

#[test]
fn j_times_delta_is_e4_cubed() {
    let n = 12;
    let j = series_j(n).unwrap();
    let d = series_delta(n + 2).unwrap();
    let prod = j.mul(&d);
    // Independent route: cube E4 = 1 + 240 sum sigma_3(m) q^m coefficient by coefficient.
    let mut e4 = vec![Integer::from(1)];
    for m in 1..=n as u64 {
        let mut s = Integer::new();
        for dd in 1..=m {
            if m % dd == 0 {
                s += Integer::from(dd * dd * dd);
            }
        }
        e4.push(s * 240);
    }
    let len = e4.len();
    let mut cube = vec![Integer::new(); len];
    for a in 0..len {
        for b in 0..len - a {
            for c in 0..len - a - b {
                cube[a + b + c] += Integer::from(&e4[a] * &e4[b]) * &e4[c];
            }
        }
    }
    assert_eq!(cube[1], 720);
    let upto = prod.precision().min(len as i64);
    for e in 0..upto {
        assert_eq!(prod.coeff(e), cube[e as usize], "coefficient q^{e}");
    }
}

#[test]
fn series_mul_j_delta_leading_terms() {
    let p = series_mul(&series_j(4).unwrap(), &series_delta(5).unwrap());
    assert_eq!(p.coeff(0), 1);
    assert_eq!(p.coeff(1), 720);
}

#[test]
fn basis_form_k1_is_delta() {
    let b = basis_form(1, 1, 10).unwrap();
    assert_eq!(b.coeff_range(0, 11), series_delta(10).unwrap().coeff_range(0, 11));
}

#[test]
fn basis_form_k2_l1() {
    // Oracle: Delta^2 * j from the series definitions.
    let d = series_delta(12).unwrap();
    let j = series_j(12).unwrap();
    let oracle = d.pow(2).mul(&j);
    let b = basis_form(2, 1, 8).unwrap();
    assert_eq!(b.coeff(1), 1);
    assert_eq!(b.coeff(2), 696);
    for e in 1..=8 {
        assert_eq!(b.coeff(e), oracle.coeff(e));
    }
}

#[test]
fn basis_form_orders() {
    for k in 1..=6 {
        for l in 1..=k {
            let b = basis_form(k, l, k + 4).unwrap();
            assert_eq!(ord_infinity(&b).unwrap(), l);
            assert_eq!(b.coeff(l), 1);
        }
    }
}

#[test]
fn basis_is_unit_triangular() {
    for k in 1..=8 {
        for l in 1..=k {
            let b = basis_form(k, l, k).unwrap();
            for m in 1..=k {
                let c = b.coeff(m);
                if m < l {
                    assert_eq!(c, 0);
                } else if m == l {
                    assert_eq!(c, 1);
                }
            }
        }
    }
}

#[test]
fn basis_form_domain_errors() {
    assert!(matches!(basis_form(2, 3, 10), Err(Error::Domain(_))));
    assert!(matches!(basis_form(2, 0, 10), Err(Error::Domain(_))));
}

#[test]
fn pow_of_delta_leading_term() {
    let p = series_pow(&series_delta(8).unwrap(), 2);
    assert_eq!(ord_infinity(&p).unwrap(), 2);
    assert_eq!(p.coeff(2), 1);
}

#[test]
fn order_and_content() {
    let d = series_delta(10).unwrap();
    assert_eq!(ord_infinity(&d).unwrap(), 1);
    assert_eq!(content(&d).unwrap(), 1);
    assert_eq!(content(&d.scale(&Integer::from(6))).unwrap(), 6);
    let z = d.mul(&d).sub(&d.mul(&d));
    assert_eq!(ord_infinity(&z), Err(Error::ZeroSeries));
    assert_eq!(content(&z), Err(Error::ZeroSeries));
}

#[test]
fn multiplicative_identity() {
    let d = series_delta(10).unwrap();
    let one = QSeries::one(20);
    assert_eq!(d.mul(&one), d);
}

fn arb_series() -> impl Strategy<Value = QSeries> {
    (0i64..3, prop::collection::vec(-50i64..50, 1..12), 6i64..14).prop_map(|(lead, cs, p)| {
        QSeries::new(lead, cs.into_iter().map(Integer::from).collect(), p)
    })
}

proptest! {
    #[test]
    fn distributive_law(a in arb_series(), b in arb_series(), c in arb_series()) {
        let lhs = a.add(&b).mul(&c);
        let rhs = a.mul(&c).add(&b.mul(&c));
        let p = lhs.precision().min(rhs.precision());
        for e in 0..p {
            prop_assert_eq!(lhs.coeff(e), rhs.coeff(e));
        }
    }

    #[test]
    fn commutative_and_associative(a in arb_series(), b in arb_series(), c in arb_series()) {
        let ab = a.mul(&b);
        let ba = b.mul(&a);
        prop_assert_eq!(&ab, &ba);
        let l = ab.mul(&c);
        let r = a.mul(&b.mul(&c));
        let p = l.precision().min(r.precision());
        for e in 0..p {
            prop_assert_eq!(l.coeff(e), r.coeff(e));
        }
    }

    #[test]
    fn pow_matches_repeated_mul(a in arb_series(), e in 0u32..5) {
        let mut r = QSeries::one(a.precision() - a.lead_exponent());
        for _ in 0..e {
            r = r.mul(&a);
        }
        let p = a.pow(e);
        let prec = p.precision().min(r.precision());
        for x in 0..prec {
            prop_assert_eq!(p.coeff(x), r.coeff(x));
        }
    }

    #[test]
    fn division_inverts_multiplication(a in arb_series(), k in 1i64..6) {
        let d = series_delta(k + 12).unwrap();
        let prod = a.mul(&d);
        let back = prod.div_exact(&d).unwrap();
        let prec = back.precision().min(a.precision());
        for x in 0..prec {
            prop_assert_eq!(back.coeff(x), a.coeff(x));
        }
    }
}
