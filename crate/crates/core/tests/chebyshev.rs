use rug::ops::Pow;
use rug::{Integer, Rational};
use slopes_core::chebyshev::*;
use slopes_core::Error;

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * (1.0 + b.abs())
}

#[test]
fn centered_values() {
    assert_eq!(cheb_centered(0.0, 0.3).unwrap(), 0.0);
    assert_eq!(cheb_centered(0.7, 1.0).unwrap(), 0.0);
    assert!(close(cheb_centered(0.5, 0.5).unwrap(), 0.5 * 2f64.ln(), 1e-15));
    assert!(cheb_centered(1.5, 0.5).is_err());
    assert!(cheb_centered(0.5, -1.0).is_err());
}

#[test]
fn boundary_values() {
    assert_eq!(cheb_boundary(0.0, 0.25).unwrap(), 0.0);
    let a = std::f64::consts::FRAC_1_SQRT_2;
    let top = (1.0 + 2f64.sqrt()).ln();
    assert!(close(cheb_boundary(a, 0.25).unwrap(), top, 1e-14));
    for r in [0.1, 0.25, 0.7, 3.0] {
        assert!(close(cheb_boundary(1.0, r).unwrap(), -(2.0 * r).ln(), 1e-14));
    }
    // 1/sqrt(2) is the maximizer at 4r = 1.
    for i in 0..=1000 {
        assert!(cheb_boundary(i as f64 / 1000.0, 0.25).unwrap() <= top + 1e-15);
    }
}

#[test]
fn boundary_is_concave() {
    let h = 1e-3;
    for r in [0.25, 1.0] {
        let v: Vec<f64> = (0..=1000).map(|i| cheb_boundary(i as f64 * h, r).unwrap()).collect();
        for w in v.windows(3) {
            assert!(w[0] - 2.0 * w[1] + w[2] <= 1e-12);
        }
    }
}

#[test]
fn f_finite_small_cases() {
    for n in 0..30 {
        assert!(close(f_finite(n, 0, 0.37).unwrap(), (n + 1) as f64, 1e-14));
    }
    let r = 0.3;
    assert!(close(f_finite(1, 1, r).unwrap(), 3f64.sqrt() / (4.0 * r * r), 1e-14));
    assert!(matches!(f_finite(3, 4, 1.0), Err(Error::Domain(_))));
    assert_eq!(
        f_finite_sq_exact(1, 1, &Rational::from((1, 2))).unwrap(),
        Rational::from(3)
    );
}

#[test]
fn oracle_matches_binomial_sum() {
    let rs = [Rational::from((1, 4)), Rational::from(1), Rational::from((3, 2))];
    for r in &rs {
        for n in 0..=20u32 {
            for a in 0..=n {
                let exact = f_finite_sq_exact(n, a, r).unwrap();
                let oracle = f_oracle_sq_exact(n, a, r, BoundaryWeight::AbsSin).unwrap();
                assert_eq!(exact, oracle, "n={n} a={a} r={r}");
                let rf = r.to_f64();
                let x = f_finite(n, a, rf).unwrap();
                let y = f_oracle(n, a, r, BoundaryWeight::AbsSin).unwrap();
                assert!((x - y).abs() <= 1e-12 * y, "n={n} a={a}");
            }
        }
    }
}

#[test]
fn oracle_top_order_is_one_dimensional() {
    // Only (z - r)^{2n}; its squared boundary norm is r^{4n} 16^n / (2n+1).
    for n in 0..10u32 {
        let r = Rational::from((2, 3));
        let f2 = f_oracle_sq_exact(n, n, &r, BoundaryWeight::AbsSin).unwrap();
        let mut rp = Rational::from(1);
        for _ in 0..4 * n {
            rp *= &r;
        }
        let norm = rp * Rational::from((Integer::from(16).pow(n), Integer::from(2 * n + 1)));
        assert_eq!(f2, Rational::from(1) / norm);
    }
}

#[test]
fn oracle_nondecreasing_in_n() {
    let r = Rational::from((1, 4));
    for w in [BoundaryWeight::AbsSin, BoundaryWeight::Uniform] {
        for a in 0..5u32 {
            let mut prev = Rational::new();
            for n in a..16 {
                let f = f_oracle_sq_exact(n, a, &r, w).unwrap();
                assert!(f >= prev);
                prev = f;
            }
        }
    }
}

#[test]
fn uniform_weight_differs_at_finite_level_but_not_in_rate() {
    let r = Rational::from((1, 4));
    let s = f_oracle_sq_exact(6, 2, &r, BoundaryWeight::AbsSin).unwrap();
    let u = f_oracle_sq_exact(6, 2, &r, BoundaryWeight::Uniform).unwrap();
    assert_ne!(s, u);
    let n = 40u32;
    let a = 20u32;
    let ls = f_oracle(n, a, &r, BoundaryWeight::AbsSin).unwrap().ln() / (2 * n) as f64;
    let lu = f_oracle(n, a, &r, BoundaryWeight::Uniform).unwrap().ln() / (2 * n) as f64;
    assert!((ls - lu).abs() < 0.05, "{ls} {lu}");
}

#[test]
fn jacobi_order_zero_norms() {
    let fam = jacobi_basis(6, 0).unwrap();
    assert_eq!(fam.len(), 7);
    for m in &fam {
        let want = Rational::from((Integer::from(16).pow(m.j) * 4u32, Integer::from(2 * m.j + 1)));
        assert_eq!(m.weighted_norm_sq, want);
    }
    // J_1 = -4 (y/2) = -2y at order zero: value -4 at y = 2.
    assert_eq!(fam[1].coeffs, vec![Rational::new(), Rational::from(-2)]);
}

#[test]
fn jacobi_formulas_hold_exactly() {
    for r in [Rational::from((1, 4)), Rational::from((5, 3))] {
        for n in 0..=12u32 {
            for a in 0..=n {
                verify_jacobi_formulas(n, a, &r).unwrap_or_else(|e| panic!("n={n} a={a}: {e}"));
            }
        }
    }
}

#[test]
fn fubini_study_values() {
    assert!(close(cheb_fubini_study(&[0.5], &[1.0, 1.0]).unwrap(), 0.5 * 2f64.ln(), 1e-15));
    assert_eq!(cheb_fubini_study(&[1.0], &[1.0, 1.0]).unwrap(), 0.0);
    assert_eq!(cheb_fubini_study(&[0.0, 0.0], &[1.0, 1.0, 1.0]).unwrap(), 0.0);
    assert!(cheb_fubini_study(&[0.7, 0.6], &[1.0, 1.0, 1.0]).is_err());
    assert!(cheb_fubini_study(&[0.2], &[1.0, 0.0]).is_err());
    for d in 1..=3usize {
        let g = GlobalTransform::new(vec![(
            LocalTransform::FubiniStudy { gamma: vec![1.0; d + 1] },
            1.0,
        )])
        .unwrap();
        let (v, p) = g.sup().unwrap();
        assert!(close(v, 0.5 * ((d + 1) as f64).ln(), 1e-8), "d={d} {v}");
        for x in p {
            assert!((x - 1.0 / (d + 1) as f64).abs() < 1e-3);
        }
    }
}

#[test]
fn quarter_disc_height_bound() {
    let g = GlobalTransform::new(vec![
        (LocalTransform::Zero, 1.0),
        (LocalTransform::Boundary { r: 0.25 }, 1.0),
    ])
    .unwrap();
    let (v, p) = g.sup().unwrap();
    let top = (1.0 + 2f64.sqrt()).ln();
    assert!((v - top).abs() < 1e-9);
    assert!((p[0] - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-4);
    let b = g.height_bound(50).unwrap() / 50.0;
    assert!(b < 0.89 && b > 0.88);
}

#[test]
fn unit_disc_transform_vanishes() {
    let g = GlobalTransform::new(vec![
        (LocalTransform::Zero, 2.0),
        (LocalTransform::Centered { r: 1.0 }, 1.0),
    ])
    .unwrap();
    assert_eq!(g.sup().unwrap().0, 0.0);
    assert_eq!(g.height_bound(100).unwrap(), 0.0);
    assert_eq!(g.mean().unwrap(), 0.0);
}

#[test]
fn mismatched_bodies_rejected() {
    let r = GlobalTransform::new(vec![
        (LocalTransform::Boundary { r: 0.25 }, 1.0),
        (LocalTransform::FubiniStudy { gamma: vec![1.0; 3] }, 1.0),
    ]);
    assert!(matches!(r, Err(Error::Domain(_))));
    assert!(GlobalTransform::new(vec![]).is_err());
}

#[test]
fn finite_level_converges_to_boundary_transform() {
    let n = 200u32;
    for i in 0..=20 {
        let alpha = i as f64 / 20.0;
        let a = (n as f64 * alpha).round() as u32;
        let lhs = ln_f_finite(n, a, 0.25).unwrap() / (2 * n) as f64;
        let rhs = cheb_boundary(alpha, 0.25).unwrap();
        assert!((lhs - rhs).abs() <= 0.05, "alpha={alpha}: {lhs} vs {rhs}");
    }
}
