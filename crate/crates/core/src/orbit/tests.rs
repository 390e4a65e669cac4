use super::*;
use crate::contfrac::cf_eval_periodic;
use crate::field::FieldSpec;
use crate::laurent::random_series;
use crate::text::parse_poly;

fn f2() -> Field {
    FieldSpec::prime(2).unwrap()
}

fn all_t(f: &Field) -> Laurent {
    cf_eval_periodic(&Poly::zero(f), &[], &[Poly::t(f)], 64).unwrap()
}

fn start(xi: &Laurent) -> Vec2Laurent {
    Vec2Laurent::new(xi.clone(), Laurent::one(xi.field())).unwrap()
}

fn poly(f: &Field, s: &str) -> Poly {
    parse_poly(f, s).unwrap()
}

fn rational_target(f: &Field, a: &str, b: &str) -> TargetInput {
    TargetInput::RationalSlope { a: poly(f, a), b: poly(f, b), y2: Laurent::one(f) }
}

#[test]
fn matrix_basics() {
    let f = FieldSpec::prime(3).unwrap();
    let j = Mat2::j(&f);
    assert!(j.det().is_one());
    assert_eq!(&j * &j.inverse(), Mat2::identity(&f));
    let u = Mat2::unipotent(&poly(&f, "T^2+2"));
    assert_eq!(u.hdeg(), 2);
    assert!(Mat2::new(Poly::t(&f), Poly::one(&f), Poly::one(&f), Poly::one(&f)).is_err());
    let g = &(&u * &j) * &Mat2::unipotent(&Poly::t(&f));
    assert_eq!((&j * &g).hdeg(), g.hdeg());
    assert_eq!((&g * &j).hdeg(), g.hdeg());
}

#[test]
fn convergent_matrices() {
    let f = f2();
    let np = normalize_pair(&start(&all_t(&f)), TargetInput::Zero).unwrap();
    let m1 = convergent_matrix(&np.cf, 1).unwrap();
    assert_eq!(m1.to_string(), "[[T, 1], [1, 0]]");
    assert_eq!(np.error_deg(&m1).unwrap(), -1);
    for seed in 0..5 {
        for q in [2, 3, 5] {
            let f = FieldSpec::prime(q).unwrap();
            let np = normalize_pair(&start(&random_series(&f, seed, 64, -1)), TargetInput::Zero).unwrap();
            for k in 1..np.cf.trusted.min(8) {
                let m = convergent_matrix(&np.cf, k).unwrap();
                assert!(m.det().is_one());
                assert_eq!(m.hdeg(), np.cf.deg_q(k as i64));
                assert_eq!(np.error_deg(&m).unwrap() + m.hdeg(), 0);
            }
        }
    }
    assert!(matches!(convergent_matrix(&np.cf, 10_000), Err(Error::InsufficientTrust { .. })));
}

#[test]
fn slope_matrices() {
    let f = f2();
    let t = |a: &str, b: &str| Target::Rational { a: poly(&f, a), b: poly(&f, b), y2: Laurent::one(&f) };
    let n = slope_matrix(&t("1", "T+1"), 0).unwrap();
    assert_eq!(n.to_string(), "[[1, 0], [T+1, 1]]");
    assert!(n.det().is_one());
    let n = slope_matrix(&t("0", "1"), 0).unwrap();
    assert!(n.det().is_one() && n.hdeg() == 0);
    let f3 = FieldSpec::prime(3).unwrap();
    let n = rational_slope_matrix(&poly(&f3, "2*T+1"), &poly(&f3, "T^3+T+2")).unwrap();
    assert!(n.det().is_one());
    assert_eq!(n.hdeg(), 3);
    let y = random_series(&f3, 9, 64, -1);
    let np = normalize_pair(&start(&all_t(&f3)), TargetInput::Vector(start(&y))).unwrap();
    for j in 0..=4 {
        let n = slope_matrix(&np.target, j).unwrap();
        assert!(n.det().is_one());
    }
}

#[test]
fn normalization_applies_j() {
    let f = FieldSpec::prime(3).unwrap();
    let xi = random_series(&f, 4, 64, -1);
    let swapped = Vec2Laurent::new(Laurent::one(&f), xi.clone()).unwrap();
    let np = normalize_pair(&swapped, TargetInput::Zero).unwrap();
    assert_eq!(np.applied, vec![Transform::JOnStart]);
    assert_eq!(np.x.norm_deg().unwrap(), swapped.norm_deg().unwrap());
    assert_eq!(np.x.norm_deg().unwrap(), np.x2_deg());
    assert!(np.xi.norm_deg().unwrap() <= 0);
    let plain = normalize_pair(&start(&xi), TargetInput::Zero).unwrap();
    assert!(plain.applied.is_empty());

    let y = Vec2Laurent::new(Laurent::monomial(&f, 1, 2), random_series(&f, 5, 64, 0)).unwrap();
    let np = normalize_pair(&swapped, TargetInput::Vector(y.clone())).unwrap();
    assert_eq!(np.applied, vec![Transform::JOnStart, Transform::JOnTarget]);
    let g = convergent_matrix(&np.cf, 3).unwrap();
    let back = np.to_original(&g);
    let gx = back.apply(&swapped);
    let orig = Vec2Laurent { c1: &gx.c1 - &y.c1, c2: &gx.c2 - &y.c2 }.norm_deg().unwrap();
    assert_eq!(orig, np.error_deg(&g).unwrap());
    assert_eq!(back.hdeg(), g.hdeg());

    let r = Laurent::from_rational(&Poly::one(&f), &Poly::t(&f), 10).unwrap();
    assert_eq!(normalize_pair(&start(&r), TargetInput::Zero).unwrap_err(), Error::RationalSlopeInput);
}

#[test]
fn rational_construction() {
    let f = f2();
    let np = normalize_pair(&start(&all_t(&f)), rational_target(&f, "1", "T+1")).unwrap();
    let c = gamma_rational(&np, 4).unwrap();
    assert!(c.holds(), "{c:?}");
    assert!(c.candidate.gamma.det().is_one());
    assert!(matches!(gamma_rational(&np, 1), Err(Error::KTooSmall(1))));
    for seed in 0..10 {
        let xi = random_series(&f, seed, 96, -1);
        for (a, b) in [("1", "T+1"), ("T", "T^2+T+1"), ("0", "1"), ("T+1", "T")] {
            let np = normalize_pair(&start(&xi), rational_target(&f, a, b)).unwrap();
            for k in 3..8 {
                match gamma_rational(&np, k) {
                    Ok(c) => {
                        assert!(c.holds(), "seed {seed} k {k}: {c:?}");
                        let Target::Rational { b, .. } = &np.target else { unreachable!() };
                        let a = c.candidate.a.as_ref().unwrap();
                        assert_eq!(a.deg_i64(), np.cf.deg_q(k as i64) - b.deg_i64());
                    }
                    Err(Error::KTooSmall(_)) => {}
                    Err(e) => panic!("{e:?}"),
                }
            }
        }
    }
}

#[test]
fn homogeneous_target_uses_convergents() {
    let f = f2();
    let np = normalize_pair(&start(&all_t(&f)), TargetInput::Zero).unwrap();
    for k in 1..6 {
        let m = convergent_matrix(&np.cf, k).unwrap();
        assert_eq!(np.error_deg(&m).unwrap(), -(k as i64));
    }
}

#[test]
fn irrational_constructions() {
    let f = f2();
    let mut ran = [0; 3];
    for seed in 0..20 {
        let xi = random_series(&f, seed, 128, -1);
        let y = random_series(&f, seed + 500, 128, -1);
        let np = normalize_pair(&start(&xi), TargetInput::Vector(start(&y))).unwrap();
        for j in 1..5 {
            match gamma_irrational(&np, &Strategy::Sw { j }) {
                Ok(c) => {
                    assert!(c.holds(), "{c:?}");
                    ran[0] += 1;
                }
                Err(Error::StrategyInapplicable(_)) => {}
                Err(e) => panic!("{e:?}"),
            }
        }
        for k in 1..10 {
            match gamma_irrational(&np, &Strategy::Sw2 { k }) {
                Ok(c) => {
                    assert!(c.holds(), "{c:?}");
                    ran[1] += 1;
                }
                Err(Error::StrategyInapplicable(_)) => {}
                Err(e) => panic!("{e:?}"),
            }
            match gamma_irrational(&np, &Strategy::JkTau { k, omega_y: Ratio::from_integer(1) }) {
                Ok(c) => {
                    assert!(c.holds(), "{c:?}");
                    ran[2] += 1;
                }
                Err(Error::InsufficientTrust { .. }) => {}
                Err(e) => panic!("{e:?}"),
            }
        }
    }
    assert!(ran.iter().all(|&n| n > 5), "{ran:?}");
}

#[test]
fn decomposition() {
    let f = f2();
    let y = random_series(&f, 77, 64, -1);
    let np = normalize_pair(&start(&all_t(&f)), TargetInput::Vector(start(&y))).unwrap();
    let (j, k) = (2, 3);
    let n = slope_matrix(&np.target, j).unwrap();
    let m = convergent_matrix(&np.cf, k).unwrap();
    let (g, c1, c2) = gamma_decompose(&(&n * &m), &np, j, k).unwrap();
    assert_eq!(g, Mat2::identity(&f));
    assert_eq!((c1, c2), (NormDeg::finite(0), NormDeg::finite(0)));
    let a = poly(&f, "T^2+1");
    let (g, _, _) = gamma_decompose(&compose(&n, &a, &m), &np, j, k).unwrap();
    assert_eq!(g, Mat2::unipotent(&a));
    let gamma = &Mat2::unipotent(&Poly::t(&f)) * &(&Mat2::j(&f) * &Mat2::unipotent(&poly(&f, "T^3")));
    let (g, _, _) = gamma_decompose(&gamma, &np, j, k).unwrap();
    assert_eq!(&(&n * &g) * &m, gamma);
}

#[test]
fn brute_force_paths_agree() {
    let f = f2();
    let xi = random_series(&f, 3, 64, -1);
    let y = random_series(&f, 4, 64, 0);
    for target in [TargetInput::Zero, rational_target(&f, "1", "T+1"), TargetInput::Vector(start(&y))] {
        let np = normalize_pair(&start(&xi), target).unwrap();
        for h in 0..=3 {
            let a = brute_orbit_tables(&np, h, DEFAULT_ORBIT_LIMIT).unwrap();
            let b = brute_orbit_naive(&np, h).unwrap();
            assert_eq!(a, b);
            assert_eq!(a.len(), h + 1);
        }
    }
    let f3 = FieldSpec::prime(3).unwrap();
    let np = normalize_pair(&start(&random_series(&f3, 1, 64, -1)), TargetInput::Vector(start(&random_series(&f3, 2, 64, 0)))).unwrap();
    assert_eq!(brute_orbit_tables(&np, 1, DEFAULT_ORBIT_LIMIT).unwrap(), brute_orbit_naive(&np, 1).unwrap());
}

#[test]
fn brute_force_homogeneous() {
    let f = f2();
    let np = normalize_pair(&start(&all_t(&f)), TargetInput::Zero).unwrap();
    let shells = brute_orbit(&np, 5, DEFAULT_ORBIT_LIMIT).unwrap();
    for (k, shell) in shells.iter().enumerate().skip(1) {
        assert_eq!(shell.errdeg, -(k as i64));
        assert_eq!(np.error_deg(&convergent_matrix(&np.cf, k).unwrap()).unwrap(), -(k as i64));
    }
    assert!(matches!(brute_orbit(&np, 20, DEFAULT_ORBIT_LIMIT), Err(Error::SearchSpaceTooLarge { .. })));
}

#[test]
fn brute_force_contains_constructions() {
    let f = f2();
    let np = normalize_pair(&start(&all_t(&f)), rational_target(&f, "1", "T+1")).unwrap();
    let c = gamma_rational(&np, 3).unwrap().candidate;
    let shells = brute_orbit(&np, c.hdeg as usize, DEFAULT_ORBIT_LIMIT).unwrap();
    assert!(shells[c.hdeg as usize].errdeg <= c.errdeg);
}

#[test]
fn lower_bound_checks() {
    let f = f2();
    let np = normalize_pair(&start(&all_t(&f)), TargetInput::Zero).unwrap();
    for k in 1..=3 {
        let r = lb_check(&np, k, DEFAULT_ORBIT_LIMIT).unwrap();
        assert!(r.passed && r.equality == Some(true), "{r:?}");
        assert_eq!(r.min_errdeg, r.bound);
    }
    let np = normalize_pair(&start(&all_t(&f)), rational_target(&f, "1", "T+1")).unwrap();
    let r = gap_check(&np, 2, DEFAULT_ORBIT_LIMIT).unwrap();
    assert!(r.passed, "{r:?}");
    let r = gap_check(&np, 3, DEFAULT_ORBIT_LIMIT).unwrap();
    assert!(r.passed, "{r:?}");
    let c = gamma_rational(&np, 3).unwrap();
    assert!(c.candidate.errdeg >= r.bound);
    assert!(matches!(gap_check(&np, 1, DEFAULT_ORBIT_LIMIT), Err(Error::HypothesisNotMet(_))));
}

#[test]
fn counting() {
    for (q, n) in [(2, 6), (3, 24)] {
        let f = FieldSpec::prime(q).unwrap();
        assert_eq!(sl2_count(&f, 0, 0, 1 << 20).unwrap().exact, n);
    }
    let f = f2();
    for b1 in 0..=1 {
        for b2 in 0..=2 {
            let polys = |d: usize| Poly::all_up_to(&f, d).collect::<Vec<_>>();
            let mut naive = 0;
            for a in polys(b1) {
                for c in polys(b1) {
                    for b in polys(b2) {
                        for d in polys(b2) {
                            naive += u64::from((&(&a * &d) - &(&b * &c)).is_one());
                        }
                    }
                }
            }
            assert_eq!(sl2_count(&f, b1, b2, 1 << 20).unwrap().exact, naive, "{b1} {b2}");
        }
    }
    for b1 in 0..=3 {
        for b2 in 0..=3 {
            assert!(sl2_count(&f, b1, b2, 1 << 20).unwrap().ratio <= Ratio::from_integer(8));
        }
    }
}

#[test]
fn unit_groups() {
    let f = f2();
    assert_eq!(phi_poly(&Poly::t(&f), 1 << 20).unwrap(), 1);
    assert_eq!(phi_poly(&poly(&f, "T^2+T+1"), 1 << 20).unwrap(), 3);
    assert_eq!(phi_degree_sum(&f, 1, true, 1 << 20).unwrap(), 2);
    for q in [2, 3] {
        let f = FieldSpec::prime(q).unwrap();
        for i in 0..=4 {
            assert_eq!(phi_degree_sum(&f, i, true, 1 << 20).unwrap(), phi_sum_monic_formula(q, i));
        }
    }
    assert_ne!(phi_sum_quoted_formula(2, 1), phi_sum_monic_formula(2, 1));
}

