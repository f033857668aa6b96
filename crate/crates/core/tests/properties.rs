use nalgebra::DMatrix;
use proptest::prelude::*;

use stieltjes_rk::functions::StieltjesFunction;
use stieltjes_rk::kronfun::{funm_diag, kron_fun, kron_oracle, KronStrategy, KroneckerProblem};
use stieltjes_rk::linalg::norm2;
use stieltjes_rk::operators::{HermitianOperator, IntervalMode, SpectralInterval};
use stieltjes_rk::poles::{
    as_rational, eds_poles, format_poles, parse_poles, rate_rho, zolotarev_poles, zolotarev_ratio, EdsVariant, EvalSet,
    MobiusMap, PoleSequence,
};
use stieltjes_rk::rk::exactness_check;

fn spd_tridiag() -> impl Strategy<Value = HermitianOperator> {
    (2usize..60).prop_flat_map(|n| {
        (prop::collection::vec(-1.0f64..1.0, n - 1), prop::collection::vec(0.1f64..3.0, n)).prop_map(|(e, extra)| {
            // Diagonal dominance keeps the spectrum in (0, ∞).
            let d: Vec<f64> = (0..extra.len())
                .map(|i| {
                    let left = if i > 0 { e[i - 1].abs() } else { 0.0 };
                    let right = e.get(i).map_or(0.0, |x| x.abs());
                    left + right + extra[i]
                })
                .collect();
            HermitianOperator::tridiagonal(d, e).unwrap()
        })
    })
}

fn vector(n: usize) -> impl Strategy<Value = DMatrix<f64>> {
    prop::collection::vec(-1.0f64..1.0, n)
        .prop_filter("nonzero", |v| v.iter().any(|x| x.abs() > 1e-3))
        .prop_map(move |v| DMatrix::from_vec(n, 1, v))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn shifted_solve_inverts_shifted_matvec(op in spd_tridiag(), sigma in -50.0f64..0.0, seed in 0u64..1000) {
        let n = op.order();
        let x = DMatrix::from_fn(n, 1, |i, _| ((i as u64 * 2654435761 + seed) % 1000) as f64 / 500.0 - 1.0);
        let rhs = op.matvec(&x).unwrap() - &x * sigma;
        let y = op.shifted_solve(sigma, &rhs).unwrap();
        prop_assert!(norm2(&(&y - &x)) <= 1e-10 * norm2(&x).max(1.0));
    }

    #[test]
    fn intervals_enclose_the_spectrum(op in spd_tridiag()) {
        let eig = op.dense_eig(1000).unwrap();
        let (lo, hi) = (eig.values[0], eig.values[eig.values.len() - 1]);
        let g = op.spectral_interval(IntervalMode::Gershgorin { floor: None }).unwrap();
        prop_assert!(g.a() <= lo * (1.0 + 1e-12) && g.b() >= hi * (1.0 - 1e-12));
        let e = op.spectral_interval(IntervalMode::ExactSmall { dense_limit: 1000 }).unwrap();
        prop_assert!((e.a() - lo).abs() <= 1e-12 * hi && (e.b() - hi).abs() <= 1e-12 * hi);
    }

    #[test]
    fn rational_krylov_space_is_exact(
        d in prop::collection::vec(0.5f64..20.0, 30..80),
        poles in prop::collection::vec(-30.0f64..-0.1, 1..6),
        with_inf in any::<bool>(),
    ) {
        let n = d.len();
        let op = HermitianOperator::diagonal(d).unwrap();
        let v = DMatrix::from_fn(n, 1, |i, _| 1.0 + (i % 7) as f64);
        let mut p = poles;
        if with_inf {
            p.insert(0, f64::INFINITY);
        }
        let err = exactness_check(&op, &v, &PoleSequence::custom(p), 1000).unwrap();
        prop_assert!(err <= 1e-9, "exactness defect {err}");
    }

    #[test]
    fn pole_files_round_trip_bit_for_bit(
        p in prop::collection::vec(prop_oneof![Just(f64::INFINITY), -1e12f64..1e3], 0..20),
    ) {
        prop_assert_eq!(parse_poles(&format_poles(&p)).unwrap(), p);
    }

    #[test]
    fn zolotarev_poles_respect_the_rate(a in 1e-3f64..10.0, kappa in 1.5f64..1e4, ell in 1usize..10) {
        let b = a * kappa;
        let iv = SpectralInterval::new(a, b).unwrap();
        let seq = zolotarev_poles(iv, ell).unwrap();
        prop_assert_eq!(seq.len(), ell);
        prop_assert!(seq.poles().iter().all(|&p| p <= -a * (1.0 - 1e-12) && p >= -b * (1.0 + 1e-12)));
        let r = as_rational(&seq).unwrap();
        let ratio = zolotarev_ratio(&r, EvalSet::interval(a, b).unwrap(), EvalSet::interval(-b, -a).unwrap(), 400).unwrap();
        prop_assert!(ratio <= 4.0 * rate_rho(a, b).powi(ell as i32) * (1.0 + 1e-8));
    }

    #[test]
    fn eds_sequences_stay_off_the_spectrum(a in 1e-3f64..10.0, kappa in 1.5f64..1e4, len in 1usize..25) {
        let iv = SpectralInterval::new(a, a * kappa).unwrap();
        for variant in [EdsVariant::Laplace, EdsVariant::Cauchy, EdsVariant::CauchyKron] {
            let seq = eds_poles(iv, len, variant).unwrap();
            prop_assert_eq!(seq.len(), len);
            prop_assert!(seq.poles().iter().all(|&p| p <= 0.0));
            // Nested: a longer run starts with the shorter one.
            let longer = eds_poles(iv, len + 3, variant).unwrap();
            prop_assert_eq!(&longer.poles()[..len], seq.poles());
        }
    }

    #[test]
    fn mobius_maps_invert(a in 1e-3f64..10.0, kappa in 1.5f64..1e4, t in 0.0f64..1.0) {
        let iv = SpectralInterval::new(a, a * kappa).unwrap();
        let z = a + t * (iv.b() - a);
        for m in [MobiusMap::cauchy(iv).unwrap(), MobiusMap::kron(iv).unwrap()] {
            let back = m.inverse(m.apply(z));
            prop_assert!((back - z).abs() <= 1e-9 * z.abs().max(1.0));
        }
    }

    #[test]
    fn stieltjes_functions_are_positive_and_decreasing(x in 1e-3f64..1e3, step in 1e-3f64..10.0) {
        for spec in ["power:-0.5", "inverse", "phi:1", "phi:3", "log1p", "expsqrt", "lambertw"] {
            let f = StieltjesFunction::parse(spec).unwrap();
            let (lo, hi) = (f.eval(x).unwrap(), f.eval(x + step).unwrap());
            prop_assert!(lo > 0.0 && hi > 0.0, "{spec}");
            prop_assert!(hi <= lo * (1.0 + 1e-14), "{spec}: f({}) = {hi} > f({x}) = {lo}", x + step);
        }
    }

    #[test]
    fn funm_diag_is_linear_in_the_right_hand_side(
        da in prop::collection::vec(0.5f64..5.0, 2..6),
        db in prop::collection::vec(-5.0f64..-0.5, 2..6),
        c in -3.0f64..3.0,
    ) {
        let f = StieltjesFunction::power(-0.5).unwrap();
        let a = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(da.clone()));
        let b = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(db.clone()));
        let w1 = DMatrix::from_fn(da.len(), db.len(), |i, j| (i + 2 * j) as f64 - 1.5);
        let w2 = DMatrix::from_fn(da.len(), db.len(), |i, j| ((i * j) % 3) as f64);
        let lhs = funm_diag(&f, &a, &b, &(&w1 + &w2 * c)).unwrap();
        let rhs = funm_diag(&f, &a, &b, &w1).unwrap() + funm_diag(&f, &a, &b, &w2).unwrap() * c;
        prop_assert!(norm2(&(&lhs - &rhs)) <= 1e-12 * norm2(&rhs).max(1.0));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn kron_fun_is_exact_once_the_spaces_fill(n in 4usize..10, m in 4usize..10, u in vector(9), v in vector(9)) {
        let a = HermitianOperator::laplacian_1d(n, 1.0).unwrap();
        let bneg = HermitianOperator::laplacian_1d(m, 2.0).unwrap();
        let uf = DMatrix::from_column_slice(n, 1, &u.as_slice()[..n]);
        let vf = DMatrix::from_column_slice(m, 1, &v.as_slice()[..m]);
        prop_assume!(uf.norm() > 1e-3 && vf.norm() > 1e-3);
        let f = StieltjesFunction::inverse();
        let prob = KroneckerProblem::new(a, bneg, uf, vf, f.clone()).unwrap();
        let iv = SpectralInterval::new(0.05, 8.0).unwrap();
        let (psi, xi) = KronStrategy::Extended.poles(&f, iv, 12).unwrap();
        let x = kron_fun(&prob, &psi, &xi, 12).unwrap().to_dense();
        let oracle = kron_oracle(&prob, 100).unwrap();
        prop_assert!(norm2(&(&x - &oracle)) <= 1e-9 * norm2(&oracle));
    }
}
