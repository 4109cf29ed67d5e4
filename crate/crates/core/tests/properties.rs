use std::f64::consts::PI;

use proptest::prelude::*;
use quelab::cli::{format_float, run_experiment, ExperimentConfig, RunOptions};
use quelab::eisenstein::{eis_h2_heegner, EisensteinEvaluator, EisensteinH2, EisensteinH3};
use quelab::geometry::*;
use quelab::lattice::{divisor_sigma, repr_count, AlgebraicInt, BinaryQuadraticForm, ImagQuadField, CLASS_NUMBER_ONE};
use quelab::mass::{ball_mass, Integration};
use quelab::quad::GaussLegendre;
use quelab::selberg::{h_char, h_char_real, h_closed_h3, BallKernel};
use quelab::specfun::bessel_k;
use quelab::zeta::{dedekind_zeta, riemann_zeta_em, riemann_zeta_eta, ZetaBackend};
use quelab::Complex64;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn h3_point() -> impl Strategy<Value = PointH3> {
    (-2.0..2.0f64, -2.0..2.0f64, 0.2..3.0f64).prop_map(|(x, y, r)| PointH3::new(c(x, y), r).unwrap())
}

fn sl2c() -> impl Strategy<Value = Mobius3> {
    (0.5..2.0f64, -PI..PI, -1.0..1.0f64, -1.0..1.0f64, -1.0..1.0f64, -1.0..1.0f64).prop_map(|(m, th, b0, b1, c0, c1)| {
        let a = Complex64::from_polar(m, th);
        let (b, cc) = (c(b0, b1), c(c0, c1));
        Mobius3 { a, b, c: cc, d: (1.0 + b * cc) / a }
    })
}

// z ↦ (az + b)/(cz + d) on the upper half-plane
fn sl2r(m: [f64; 4], p: &PointH2) -> PointH2 {
    let z = p.as_complex();
    let w = (z * m[0] + m[1]) / (z * m[2] + m[3]);
    PointH2::new(w.re, w.im).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(250))]

    #[test]
    fn distance_is_symmetric_and_isometry_invariant(m in sl2c(), p in h3_point(), q in h3_point()) {
        let d = distance_h3(&p, &q);
        prop_assert!((d - distance_h3(&q, &p)).abs() <= 1e-12);
        let (mp, mq) = (apply_mobius(&m, &p).unwrap(), apply_mobius(&m, &q).unwrap());
        prop_assert!((distance_h3(&mp, &mq) - d).abs() <= 1e-10 * d.max(1.0));
    }

    #[test]
    fn planar_distance_is_isometry_invariant(
        a in 0.5..2.0f64, b in -1.0..1.0f64, cc in -1.0..1.0f64,
        x1 in -2.0..2.0f64, y1 in 0.2..3.0f64, x2 in -2.0..2.0f64, y2 in 0.2..3.0f64,
    ) {
        let m = [a, b, cc, (1.0 + b * cc) / a];
        let (p, q) = (PointH2::new(x1, y1).unwrap(), PointH2::new(x2, y2).unwrap());
        let d = distance_h2(&p, &q);
        prop_assert!((distance_h2(&sl2r(m, &p), &sl2r(m, &q)) - d).abs() <= 1e-10 * d.max(1.0));
    }

    #[test]
    fn ball_volume_matches_radial_integral(r in 0.01..4.0f64) {
        let gl = GaussLegendre::new(64);
        let numeric = 4.0 * PI * gl.integrate(0.0, r, |x| x.sinh().powi(2));
        prop_assert!((ball_volume(3, r).unwrap() - numeric).abs() <= 1e-10 * numeric.max(1.0));
    }

    #[test]
    fn selberg_closed_form_agrees(t in 0.1..200.0f64, i in 0..3usize) {
        let r = [0.1, 0.5, 1.0][i];
        let a = h_char_real(&BallKernel::new(3, r).unwrap(), t).unwrap();
        prop_assert!((a - h_closed_h3(r, t).unwrap()).abs() <= 1e-8);
    }

    #[test]
    fn selberg_transform_is_even_and_real(t in 0.0..60.0f64, r in 0.05..1.5f64, n in 2..7usize) {
        let k = BallKernel::new(n, r).unwrap();
        let plus = h_char(&k, c(t, 0.0)).unwrap();
        let minus = h_char(&k, c(-t, 0.0)).unwrap();
        prop_assert!((plus - minus).norm() <= 1e-12);
        prop_assert!(plus.im.abs() <= 1e-12);
    }

    #[test]
    fn bessel_k_conjugate_symmetry(a in -3.0..3.0f64, b in -60.0..60.0f64, x in 0.05..50.0f64) {
        let nu = c(a, b);
        let k = bessel_k(nu, x).unwrap();
        let kc = bessel_k(nu.conj(), x).unwrap();
        prop_assert!((kc - k.conj()).norm() <= 1e-12 * k.norm().max(1e-300));
    }

    #[test]
    fn bessel_k_recurrence_at_real_orders(nu in 0.0..20.0f64, x in 0.1..40.0f64) {
        let f = |v: f64| bessel_k(c(v, 0.0), x).unwrap().re;
        let lhs = f(nu - 1.0) - f(nu + 1.0);
        let rhs = -2.0 * nu / x * f(nu);
        prop_assert!((lhs - rhs).abs() <= 1e-8 * f(nu + 1.0).abs());
    }

    #[test]
    fn zeta_backends_agree(sigma in -1.0..3.0f64, t in -100.0..100.0f64) {
        prop_assume!((c(sigma, t) - 1.0).norm() > 1e-3);
        let s = c(sigma, t);
        let (em, _) = riemann_zeta_em(s).unwrap();
        let eta = riemann_zeta_eta(s).unwrap();
        prop_assert!((em - eta).norm() <= 1e-9 * em.norm().max(1.0));
    }

    #[test]
    fn format_float_round_trips(x in any::<f64>().prop_filter("finite", |x| x.is_finite())) {
        prop_assert_eq!(format_float(x).parse::<f64>().unwrap(), x);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn sigma_is_multiplicative_on_coprime_pairs(
        fi in 0..9usize, u1 in -12..12i64, v1 in -12..12i64, u2 in -12..12i64, v2 in -12..12i64,
        sr in -1.5..1.5f64, si in -5.0..5.0f64,
    ) {
        let f = ImagQuadField::new(CLASS_NUMBER_ONE[fi]).unwrap();
        let (a, b) = (AlgebraicInt::new(u1, v1), AlgebraicInt::new(u2, v2));
        prop_assume!(!a.is_zero() && !b.is_zero() && f.coprime(a, b));
        let s = c(sr, si);
        let lhs = divisor_sigma(&f, s, f.mul(a, b)).unwrap();
        let rhs = divisor_sigma(&f, s, a).unwrap() * divisor_sigma(&f, s, b).unwrap();
        prop_assert!((lhs - rhs).norm() <= 1e-10 * rhs.norm().max(1.0));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn h2_eisenstein_is_modular(x in -3.0..3.0f64, y in 0.3..3.0f64, t in -25.0..25.0f64, k in 0..4usize) {
        let ev = EisensteinH2::new();
        let z = PointH2::new(x, y).unwrap();
        let m = [[1.0, 1.0, 0.0, 1.0], [0.0, -1.0, 1.0, 0.0], [2.0, 1.0, 1.0, 1.0], [1.0, 0.0, 3.0, 1.0]][k];
        let s = c(0.5, t);
        let a = ev.eval(&z, s).unwrap();
        let b = ev.eval(&sl2r(m, &z), s).unwrap();
        prop_assert!((a - b).norm() <= 1e-8 * a.norm().max(1.0));
    }

    #[test]
    fn h2_two_routes_at_heegner_points(k in 0..3usize, t in -30.0..30.0f64) {
        let (a, b, cc) = [(1, 0, 1), (1, -1, 1), (1, -1, 2)][k];
        let w = HeegnerPoint::new(a, b, cc).unwrap();
        let s = c(0.5, t);
        let f = EisensteinH2::new().eval(&w.z, s).unwrap();
        let h = eis_h2_heegner(&w, s, &ZetaBackend::default()).unwrap();
        prop_assert!((f - h).norm() <= 1e-6);
    }

    #[test]
    fn h3_eisenstein_is_invariant(fi in 0..9usize, p in h3_point(), t in -20.0..20.0f64, u in -3..3i64, v in -3..3i64) {
        let f = ImagQuadField::new(CLASS_NUMBER_ONE[fi]).unwrap();
        let ev = EisensteinH3::new(f).unwrap();
        let s = c(1.0, t);
        let a = ev.eval(&p, s).unwrap();
        let shifted = apply_mobius(&Mobius3::translation(f.to_complex(AlgebraicInt::new(u, v))), &p).unwrap();
        let one = c(1.0, 0.0);
        let zero = c(0.0, 0.0);
        let inverted = apply_mobius(&Mobius3 { a: zero, b: -one, c: one, d: zero }, &p).unwrap();
        for q in [shifted, inverted] {
            prop_assert!((ev.eval(&q, s).unwrap() - a).norm() <= 1e-8 * a.norm().max(1.0));
        }
    }

    #[test]
    fn mass_is_nonnegative_with_consistent_deviation(x in -0.5..0.5f64, y in 0.9..2.0f64, r in 0.05..0.6f64, t in 2.0..30.0f64) {
        let ev = EisensteinEvaluator::modular();
        let ball = GeodesicBall::new(Point::H2(PointH2::new(x, y).unwrap()), r).unwrap();
        let m = ball_mass(&ev, &ball, t, Integration::Quadrature(QuadratureOrder::uniform(12))).unwrap();
        prop_assert!(m.raw_mass >= 0.0);
        prop_assert_eq!(m.deviation, m.normalized_mass - m.main_term);
    }

    #[test]
    fn quadrature_and_sampling_agree(x in -1.0..1.0f64, y in 0.5..2.0f64, r in 0.1..1.0f64, seed in 0..1000u64) {
        let ball = GeodesicBall::new(Point::H3(PointH3::new(c(x, 0.3), y).unwrap()), r).unwrap();
        let f = |p: &Point| match p {
            Point::H3(q) => q.r.sqrt() * (3.0 * q.z.re).cos() + q.z.im,
            Point::H2(_) => unreachable!(),
        };
        let exact = ball_quadrature(&ball, |p| Ok(c(f(p), 0.0)), QuadratureOrder::uniform(24)).unwrap().re;
        let vals: Vec<f64> = sample_ball(&ball, seed, 20_000).iter().map(f).collect();
        let n = vals.len() as f64;
        let mean = vals.iter().sum::<f64>() / n;
        let sd = (vals.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt();
        let v = ball.volume();
        prop_assert!((v * mean - exact).abs() <= 3.0 * v * sd / n.sqrt() + 1e-12);
    }

    #[test]
    fn experiment_rows_follow_the_grid(values in prop::collection::vec(2.0..40.0f64, 0..6), threads in 1..4usize) {
        let list: Vec<String> = values.iter().map(|v| format!("{v:?}")).collect();
        let text = format!(
            "[experiment]\nkind = \"selberg_check\"\nsurface = \"h2\"\n[grid]\nvalues = [{}]\n[radius]\nrule = \"fixed\"\nvalue = 0.1\n",
            list.join(", ")
        );
        let config = ExperimentConfig::from_toml(&text).unwrap();
        let table = run_experiment(&config, &RunOptions { threads: Some(threads), timings: false }).unwrap();
        prop_assert_eq!(table.rows.len(), values.len());
        for (row, t) in table.rows.iter().zip(&values) {
            prop_assert_eq!(row.t, *t);
        }
    }
}

#[test]
fn radial_distribution_of_samples() {
    // Kolmogorov–Smirnov at the 1% level
    for center in [Point::H2(PointH2::new(0.3, 1.2).unwrap()), Point::H3(PointH3::new(c(0.1, -0.4), 0.7).unwrap())] {
        let ball = GeodesicBall::new(center, 0.8).unwrap();
        let n = 100_000;
        let mut u: Vec<f64> = sample_ball(&ball, 17, n)
            .iter()
            .map(|p| ball.radial_cdf(distance(&ball.center, p).unwrap()))
            .collect();
        u.sort_by(f64::total_cmp);
        let d = u
            .iter()
            .enumerate()
            .map(|(i, &f)| (f - i as f64 / n as f64).abs().max(((i + 1) as f64 / n as f64 - f).abs()))
            .fold(0.0, f64::max);
        assert!(d < 1.628 / (n as f64).sqrt(), "KS statistic {d}");
    }
}

#[test]
fn gaussian_enumeration_counts_sums_of_two_squares() {
    let f = ImagQuadField::gaussian();
    let q = BinaryQuadraticForm::new(1, 0, 1).unwrap();
    for cap in [1, 10, 97, 500] {
        let total: u64 = (1..=cap).map(|m| repr_count(&q, m)).sum();
        assert_eq!(f.enumerate_by_norm(cap).unwrap().len() as u64, total);
    }
}

#[test]
fn characters_are_completely_multiplicative() {
    for f in ImagQuadField::all() {
        for m in 1..=200 {
            for n in 1..=200 {
                assert_eq!(f.chi(m * n), f.chi(m) * f.chi(n), "d = {}, m = {m}, n = {n}", f.d());
            }
        }
    }
}

#[test]
fn dedekind_residue_at_one() {
    for f in ImagQuadField::all() {
        let eps = 1e-7;
        let v = dedekind_zeta(&f, c(1.0 + eps, 0.0)).unwrap() * eps;
        let expected = 2.0 * PI / (f.unit_count() as f64 * (f.discriminant().abs() as f64).sqrt());
        assert!((v.re - expected).abs() < 1e-5 * expected, "d = {}: {} vs {expected}", f.d(), v.re);
    }
}

#[test]
fn zeta_backends_agree_on_a_grid() {
    let mut worst = 0.0f64;
    for i in 0..10 {
        for j in 0..100 {
            let s = c(0.05 + 0.3 * i as f64, -100.0 + 2.0 * j as f64 + 0.5);
            let (em, _) = riemann_zeta_em(s).unwrap();
            worst = worst.max((em - riemann_zeta_eta(s).unwrap()).norm() / em.norm().max(1.0));
        }
    }
    assert!(worst <= 1e-9, "{worst}");
}

#[test]
fn selberg_envelope_stays_bounded() {
    for n in [2usize, 3] {
        let r = 0.5;
        let k = BallKernel::new(n, r).unwrap();
        let mut sups = Vec::new();
        let mut x = 10.0;
        while x <= 1e3 / r {
            let sup = (0..400)
                .map(|i| {
                    let t = x * (1.0 + i as f64 / 400.0);
                    h_char_real(&k, t).unwrap().abs() * (r * t).powf((n as f64 + 1.0) / 2.0)
                })
                .fold(0.0, f64::max);
            sups.push(sup);
            x *= 2.0;
        }
        let (lo, hi) = sups.iter().fold((f64::MAX, 0.0f64), |(a, b), &s| (a.min(s), b.max(s)));
        assert!(hi <= 2.0 * lo, "n = {n}: envelope sups {sups:?}");
    }
}
