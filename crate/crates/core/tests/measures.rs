use std::sync::OnceLock;

use proptest::prelude::*;
use rug::Rational;
use slopes_core::lattice::{Convention, SearchOptions, SlopeSpectrum};
use slopes_core::measures::*;
use slopes_core::petersson::{gram_matrix, successive_maxima, support_bound, CuspLattice};
use slopes_core::poly::*;

// Fitted once over k <= 8 and frozen.
const FILTERED_SUPPORT_C: f64 = 8.02;
const STAIRCASE_C: f64 = 8.82;

fn lattices() -> &'static [CuspLattice] {
    static L: OnceLock<Vec<CuspLattice>> = OnceLock::new();
    L.get_or_init(|| (1..=8).map(|k| gram_matrix(k, 256).unwrap()).collect())
}

fn petersson_measure(k: u32) -> EmpiricalMeasure {
    let m = successive_maxima(&lattices()[k as usize - 1]).unwrap();
    empirical_measure(&m.spectrum()).unwrap()
}

fn q(a: i64, b: i64) -> Rational {
    Rational::from((a, b))
}

fn z() -> IntPoly {
    IntPoly::from_i64(&[0, 1])
}

fn factor(p: IntPoly, m: u32) -> Factor {
    Factor {
        poly: p,
        multiplicity: m,
        irreducibility: Irreducibility::Certified,
        from_pool: false,
    }
}

fn obs(degree: usize, factors: Vec<Factor>) -> DivisorObservation {
    DivisorObservation {
        degree,
        divisor: FactoredDivisor {
            sign: 1,
            content: 1.into(),
            factors,
            cofactors: Vec::new(),
        },
    }
}

fn spectrum(values: &[f64], n: i64) -> SlopeSpectrum {
    SlopeSpectrum {
        n,
        values: values.to_vec(),
        convention: Convention::Hermitian,
    }
}

#[test]
fn zero_spectrum_is_dirac_at_zero() {
    let m = empirical_measure(&spectrum(&[0.0, 0.0, 0.0], 3)).unwrap();
    assert_eq!(m.atoms.len(), 1);
    assert_eq!(m.atoms[0].location, 0.0);
    assert_eq!(m.atoms[0].mass, 1);
    assert!(empirical_measure(&spectrum(&[], 3)).is_err());
}

#[test]
fn unit_disc_measures_are_dirac_at_zero() {
    let opts = SearchOptions::default();
    for n in [1usize, 4, 9, 16] {
        let s = disc_spectrum(&DiscMetric::unit(NormKind::L2Boundary), n, &opts).unwrap();
        let m = empirical_measure(&s.spectrum).unwrap();
        assert_eq!(m.atoms.len(), 1);
        assert_eq!(m.atoms[0].location.to_bits(), 0.0f64.to_bits());
        assert_eq!(m.total_mass, 1);
    }
}

#[test]
fn petersson_measures_stay_below_the_support_bound() {
    for k in [2u32, 4, 6, 8] {
        let m = petersson_measure(k);
        assert!(m.is_probability());
        assert_eq!(m.mass_above(support_bound()), 0, "k = {k}");
    }
}

#[test]
fn ks_distance_basics() {
    let d0 = EmpiricalMeasure::uniform(&[0.0]).unwrap();
    let d1 = EmpiricalMeasure::uniform(&[1.0]).unwrap();
    assert_eq!(measure_distance(&d0, &d0).unwrap(), 0.0);
    assert_eq!(measure_distance(&d0, &d1).unwrap(), 1.0);
    let a = EmpiricalMeasure::uniform(&[0.0, 1.0, 2.0, 3.0]).unwrap();
    let b = EmpiricalMeasure::uniform(&[0.5, 1.0, 2.5, 3.0]).unwrap();
    assert_eq!(measure_distance(&a, &b).unwrap(), 0.25);
    let half = EmpiricalMeasure::new([(0.0, q(1, 2))]).unwrap();
    assert!(measure_distance(&half, &d0).is_err());
}

#[test]
fn ks_between_consecutive_even_weights() {
    let ks: Vec<f64> = [2u32, 4, 6]
        .iter()
        .map(|&k| measure_distance(&petersson_measure(k), &petersson_measure(k + 2)).unwrap())
        .collect();
    println!("KS(nu_12k, nu_12(k+2)) for k = 2, 4, 6: {ks:?}");
    assert!(ks.iter().all(|&d| d < 1.0));
}

#[test]
fn staircase_within_fitted_constant() {
    for k in 1..=8u32 {
        let m = successive_maxima(&lattices()[k as usize - 1]).unwrap();
        let kf = k as f64;
        for (j, v) in m.values.iter().enumerate() {
            let target = 6.0 * (1.0 - j as f64 / kf).ln();
            assert!((v / kf - target).abs() <= STAIRCASE_C, "k = {k}, j = {}", j + 1);
        }
    }
}

#[test]
fn filtered_measures() {
    for k in 1..=8u32 {
        let lat = &lattices()[k as usize - 1];
        for l in 1..=k {
            let m = filtered_measure(lat, l).unwrap();
            assert!(m.is_probability());
            let count: usize = m.atoms.len();
            let rank = (k + 1 - k.div_ceil(l)) as usize;
            assert!(count <= rank);
            let lo = m.support().unwrap().0;
            assert!(lo >= -FILTERED_SUPPORT_C * (3.0 * l as f64).ln(), "k = {k}, L = {l}");
        }
        let full = filtered_measure(lat, k).unwrap();
        assert_eq!(full, petersson_measure(k));
    }
}

#[test]
fn published_f1_fractions() {
    let data = [(50usize, 34u32), (100, 63), (200, 127), (300, 190)];
    let o: Vec<DivisorObservation> = data.iter().map(|&(n, m)| obs(n, vec![factor(z(), m)])).collect();
    let s = serre_decompose(&o, None).unwrap();
    assert_eq!(s.window, 2);
    let c = s.coefficient_of(&z());
    assert_eq!(c, q(127, 200) / 2 + q(190, 300) / 2);
    let cf = c.to_f64();
    assert!((0.62..=0.65).contains(&cf), "{cf}");
    assert_eq!(s.diffuse.clone() + c, 1);
    let all = serre_decompose(&o, Some(4)).unwrap();
    assert_eq!(all.atomic[0].fractions.len(), 4);
}

#[test]
fn pure_power_is_fully_atomic() {
    let o: Vec<DivisorObservation> = (1..=6).map(|n| obs(n, vec![factor(z(), n as u32)])).collect();
    let s = serre_decompose(&o, None).unwrap();
    assert_eq!(s.coefficient_of(&z()), 1);
    assert_eq!(s.diffuse, 0);
}

#[test]
fn cyclotomic_sequence_is_diffuse() {
    let o: Vec<DivisorObservation> = (1..=10u32)
        .map(|m| obs(1 << (m - 1), vec![factor(cyclotomic_2power(m), 1)]))
        .collect();
    let s = serre_decompose(&o, None).unwrap();
    assert!(s.atomic.is_empty());
    assert_eq!(s.diffuse, 1);
}

#[test]
fn serre_input_validation() {
    assert!(serre_decompose(&[], None).is_err());
    assert!(serre_decompose(&[obs(0, vec![])], None).is_err());
    assert!(serre_decompose(&[obs(3, vec![]), obs(2, vec![])], None).is_err());
    assert!(serre_decompose(&[obs(1, vec![factor(z(), 2)])], None).is_err());
    assert!(serre_decompose(&[obs(2, vec![])], Some(2)).is_err());
}

#[test]
fn self_computed_quarter_disc_atoms() {
    let metric = DiscMetric::with_radius(q(1, 4), q(1, 4), NormKind::L2Boundary).unwrap();
    let opts = SearchOptions::default();
    let o: Vec<DivisorObservation> = [30usize, 40, 50]
        .iter()
        .map(|&n| {
            let mode = if n <= 30 { SearchMode::Exact } else { SearchMode::Heuristic };
            let mp = min_poly(&metric, n, mode, &opts).unwrap();
            DivisorObservation {
                degree: n,
                divisor: factorize(&mp.poly, &[]).unwrap(),
            }
        })
        .collect();
    let s = serre_decompose(&o, Some(3)).unwrap();
    let c = s.coefficient_of(&z()).to_f64();
    assert!((0.55..=0.75).contains(&c), "{c}");
    let sum: Rational = s.atomic.iter().map(|a| a.coefficient.clone()).sum();
    assert_eq!(sum + s.diffuse, 1);
}

#[test]
fn cyclotomic_discrepancy() {
    let mut prev = f64::INFINITY;
    for m in 1..=12u32 {
        let d = equidistribution_test(&cyclotomic_angles(m).unwrap()).unwrap();
        assert!(d.arc <= 2f64.powi(2 - m as i32), "m = {m}");
        assert!(d.star <= d.arc + 1e-15);
        if m >= 3 {
            assert!(d.arc < prev);
        }
        prev = d.arc;
    }
    let one = equidistribution_test(&[0.3]).unwrap();
    assert!(one.arc > 0.99);
    assert!(equidistribution_test(&[]).is_err());
}

#[test]
fn csv_export() {
    let m = EmpiricalMeasure::uniform(&[1.5, -2.0]).unwrap();
    assert_eq!(m.to_csv(), "location,mass\n-2,1/2\n1.5,1/2\n");
}

proptest! {
    #[test]
    fn masses_sum_to_one(values in prop::collection::vec(-50i32..50, 1..40), n in 1i64..20) {
        let v: Vec<f64> = values.iter().map(|&x| x as f64 / 4.0).collect();
        let m = empirical_measure(&spectrum(&v, n)).unwrap();
        prop_assert!(m.is_probability());
        let s: Rational = m.atoms.iter().map(|a| a.mass.clone()).sum();
        prop_assert_eq!(s, Rational::from(1));
        prop_assert!(m.atoms.windows(2).all(|w| w[0].location < w[1].location));
    }

    #[test]
    fn ks_is_a_metric(a in prop::collection::vec(-10i32..10, 1..15), b in prop::collection::vec(-10i32..10, 1..15), c in prop::collection::vec(-10i32..10, 1..15)) {
        let mk = |v: &[i32]| EmpiricalMeasure::uniform(&v.iter().map(|&x| x as f64).collect::<Vec<_>>()).unwrap();
        let (ma, mb, mc) = (mk(&a), mk(&b), mk(&c));
        let ab = measure_distance(&ma, &mb).unwrap();
        prop_assert_eq!(ab, measure_distance(&mb, &ma).unwrap());
        prop_assert!((0.0..=1.0).contains(&ab));
        prop_assert!(ab <= measure_distance(&ma, &mc).unwrap() + measure_distance(&mc, &mb).unwrap() + 1e-15);
    }

    #[test]
    fn serre_coefficients_sum_to_one(mults in prop::collection::vec((0u32..5, 0u32..5), 1..8)) {
        let w = IntPoly::from_i64(&[1, 1]);
        let o: Vec<DivisorObservation> = mults
            .iter()
            .enumerate()
            .map(|(i, &(a, b))| {
                let mut f = Vec::new();
                if a > 0 { f.push(factor(z(), a)); }
                if b > 0 { f.push(factor(w.clone(), b)); }
                obs(10 * (i + 1), f)
            })
            .collect();
        let s = serre_decompose(&o, None).unwrap();
        let sum: Rational = s.atomic.iter().map(|a| a.coefficient.clone()).sum();
        prop_assert_eq!(sum + s.diffuse.clone(), Rational::from(1));
        prop_assert!(s.diffuse >= 0);
    }
}
