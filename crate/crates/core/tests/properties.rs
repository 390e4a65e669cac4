use proptest::prelude::*;

use fqdio::exponents::{constructed_candidates, mu_profile, omega_profile_matrix, MuMode};
use fqdio::inhomog::inhom_solutions;
use fqdio::laurent::random_series;
use fqdio::orbit::{
    brute_orbit, convergent_matrix, gamma_decompose, gamma_irrational, normalize_pair, slope_matrix, Strategy as Construction,
    TargetInput, DEFAULT_ORBIT_LIMIT,
};
use fqdio::search::frac_degs;
use fqdio::text::parse_poly;
use fqdio::{Error, Field, FieldSpec, Laurent, Mat2, NormDeg, Poly, Vec2Laurent};

fn field(q: u32) -> Field {
    FieldSpec::prime(q).unwrap()
}

fn start(xi: &Laurent) -> Vec2Laurent {
    Vec2Laurent::new(xi.clone(), Laurent::one(xi.field())).unwrap()
}

fn small_q() -> impl Strategy<Value = u32> {
    prop::sample::select(vec![2u32, 3, 5])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn convergent_matrices_are_unimodular(q in small_q(), seed in 0u64..10_000) {
        let f = field(q);
        let np = normalize_pair(&start(&random_series(&f, seed, 64, -1)), TargetInput::Zero).unwrap();
        for k in 1..np.cf.trusted.min(10) {
            let m = convergent_matrix(&np.cf, k).unwrap();
            prop_assert!(m.det().is_one());
            prop_assert_eq!(np.error_deg(&m).unwrap() + m.hdeg(), NormDeg::finite(0));
            prop_assert_eq!(&m * &m.inverse(), Mat2::identity(&f));
        }
    }

    #[test]
    fn inhomogeneous_solutions_meet_the_bound(seed in 0u64..10_000) {
        let f = field(2);
        let xi = random_series(&f, seed, 128, -1);
        let alpha = random_series(&f, seed + 1, 128, -2);
        for s in inhom_solutions(&xi, &alpha, 4).unwrap() {
            let err = &xi.mul_poly(&s.q) - &alpha;
            prop_assert!(err.frac_deg().unwrap() <= -2 - s.q.deg_i64());
        }
    }

    #[test]
    fn omega_profile_matches_enumeration(q in prop::sample::select(vec![2u32, 3]), seed in 0u64..10_000) {
        let f = field(q);
        let xi = random_series(&f, seed, 64, -1);
        let alpha = random_series(&f, seed + 7, 64, -1);
        let (w, _) = omega_profile_matrix(&xi, &alpha, 4).unwrap();
        prop_assert!(w.best_err.windows(2).all(|p| p[1] <= p[0]));
        for (i, &h) in w.heights.iter().enumerate() {
            let direct = frac_degs(&xi, Some(&alpha), h as usize).unwrap();
            let best = direct.iter().map(|t| t.1).min().unwrap().min(alpha.frac_deg().unwrap());
            prop_assert_eq!(w.best_err[i], best);
        }
    }

    #[test]
    fn constructions_never_beat_brute_force(seed in 0u64..10_000, slope in 0usize..4) {
        let f = field(2);
        let xi = random_series(&f, seed, 96, -1);
        let (a, b) = [("1", "T+1"), ("T", "T^2+1"), ("1", "T"), ("T+1", "T^2+T+1")][slope];
        let (a, b) = (parse_poly(&f, a).unwrap(), parse_poly(&f, b).unwrap());
        let np = normalize_pair(&start(&xi), TargetInput::RationalSlope { a, b, y2: Laurent::one(&f) }).unwrap();
        let (brute, _) = mu_profile(&np, 5, MuMode::Brute, DEFAULT_ORBIT_LIMIT).unwrap();
        let shells = brute_orbit(&np, 5, DEFAULT_ORBIT_LIMIT).unwrap();
        for c in constructed_candidates(&np, 5).unwrap() {
            prop_assert!(c.gamma.det().is_one());
            let best = shells.iter().find(|s| s.hdeg == c.hdeg).unwrap();
            prop_assert!(best.errdeg <= c.errdeg);
        }
        prop_assert!(brute.best_err.windows(2).all(|p| p[1] <= p[0]));
    }

    #[test]
    fn decomposition_recomposes(seed in 0u64..10_000, j in 1usize..4, k in 1usize..5, a in 0u64..64) {
        let f = field(2);
        let xi = random_series(&f, seed, 96, -1);
        let y = random_series(&f, seed + 3, 96, -1);
        let np = normalize_pair(&start(&xi), TargetInput::Vector(start(&y))).unwrap();
        let n = slope_matrix(&np.target, j).unwrap();
        let m = convergent_matrix(&np.cf, k).unwrap();
        let u = Mat2::unipotent(&Poly::from_code(&f, a));
        let gamma = &(&n * &u) * &m;
        let (g, _, _) = gamma_decompose(&gamma, &np, j, k).unwrap();
        prop_assert_eq!(g, u);
    }

    #[test]
    fn irrational_constructions_check_out(seed in 0u64..10_000, i in 1usize..6) {
        let f = field(2);
        let xi = random_series(&f, seed, 128, -1);
        let y = random_series(&f, seed + 11, 128, -1);
        let np = normalize_pair(&start(&xi), TargetInput::Vector(start(&y))).unwrap();
        for s in [Construction::Sw { j: i }, Construction::Sw2 { k: i }] {
            match gamma_irrational(&np, &s) {
                Ok(c) => {
                    prop_assert!(c.holds(), "{:?}", c);
                    prop_assert!(c.candidate.gamma.det().is_one());
                }
                Err(Error::StrategyInapplicable(_) | Error::InsufficientTrust { .. }) => {}
                Err(e) => prop_assert!(false, "{}", e),
            }
        }
    }
}
