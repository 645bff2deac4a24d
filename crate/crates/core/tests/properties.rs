use askey_hankel::commutation::{
    commutant_compute, default_claim_samples, descend_extend, residual, single_index_recurrence, JacobiTable,
};
use askey_hankel::families::{theorem_prediction, FamilyId, FamilySpec, Jacobi, ValidatedFamily};
use askey_hankel::numerics::{MpContext, MpFloat, Rational, Real};
use askey_hankel::obstructions::{obstruction_grid, GridSpec, Quantity};
use proptest::prelude::*;

fn lit(x: f64) -> String {
    format!("{x:.4}")
}

fn spec(id: FamilyId, lits: Vec<String>) -> FamilySpec {
    let refs: Vec<&str> = lits.iter().map(String::as_str).collect();
    FamilySpec::from_literals(id, &refs).unwrap()
}

/// Parameters drawn from the interior of each family's domain.
fn any_family() -> impl Strategy<Value = FamilySpec> {
    let pos = || 0.05f64..3.0;
    prop_oneof![
        (pos(), pos(), pos(), pos()).prop_map(|(a, b, c, d)| spec(FamilyId::W, vec![lit(a), lit(b), lit(c), lit(d)])),
        (pos(), pos(), pos()).prop_map(|(a, b, c)| spec(FamilyId::CdH, vec![lit(a), lit(b), lit(c)])),
        (pos(), -1.0f64..1.0, pos(), -1.0f64..1.0).prop_map(|(ar, ai, br, bi)| {
            spec(FamilyId::CH, vec![format!("{ar:.4}{ai:+.4}i"), format!("{br:.4}{bi:+.4}i")])
        }),
        (-0.9f64..3.0, -0.9f64..3.0).prop_map(|(a, b)| spec(FamilyId::J, vec![lit(a), lit(b)])),
        (pos(), 0.1f64..3.0).prop_map(|(l, p)| spec(FamilyId::MP, vec![lit(l), lit(p)])),
        (0.05f64..0.95, pos()).prop_map(|(c, b)| spec(FamilyId::M, vec![lit(c), lit(b)])),
        (-0.9f64..4.0).prop_map(|a| spec(FamilyId::L, vec![lit(a)])),
        (0.1f64..5.0).prop_map(|a| spec(FamilyId::C, vec![lit(a)])),
        Just(spec(FamilyId::H, vec![])),
        (0.1f64..5.0).prop_map(|t| spec(FamilyId::HilbertJt, vec![lit(t)])),
    ]
}

const N_MAX: usize = 30;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10_000))]

    #[test]
    fn residual_antisymmetry(
        fam in any_family(),
        h in prop::collection::vec(-10.0f64..10.0, 2 * N_MAX + 2),
        m in 0..=N_MAX,
        n in 0..=N_MAX,
    ) {
        let fam = fam.validate().unwrap();
        let t = JacobiTable::build(&Jacobi::<f64>::new(&fam, &()).unwrap(), N_MAX).unwrap();
        let (rmn, _) = residual(&t, &h, m, n).unwrap();
        let (rnm, _) = residual(&t, &h, n, m).unwrap();
        prop_assert_eq!(rmn, -rnm);
        prop_assert_eq!(residual(&t, &h, m, m).unwrap().0, 0.0);
    }
}

fn measured_dim(fam: &ValidatedFamily, jac: &Jacobi<MpFloat>) -> usize {
    commutant_compute(jac, fam, 32, 1e-10).unwrap().measured_dim()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(20))]

    #[test]
    fn dimension_is_affine_invariant(
        pick in 0usize..1000,
        a in 0.1f64..10.0,
        b in -5.0f64..5.0,
    ) {
        let samples = default_claim_samples();
        let s = &samples[pick % samples.len()];
        let fam = s.family.validate().unwrap();
        let ctx = MpContext::with_decimal_digits(60);
        let plain = Jacobi::<MpFloat>::new(&fam, &ctx).unwrap();
        let moved = plain.clone().with_affine(MpFloat::from_f64(&ctx, a), MpFloat::from_f64(&ctx, b));
        prop_assert_eq!(measured_dim(&fam, &plain), measured_dim(&fam, &moved), "{} a={} b={}", fam.spec(), a, b);
    }
}

fn rational_lit() -> impl Strategy<Value = String> {
    (1i64..40, 1i64..12).prop_map(|(p, q)| format!("{p}/{q}"))
}

/// `(alpha_n, beta_n)` for `n <= n_max`; alpha involves square roots, so
/// this runs in 60 digits rather than exactly.
fn coefficients(fam: &FamilySpec, n_max: i64) -> Vec<(MpFloat, MpFloat)> {
    let ctx = MpContext::with_decimal_digits(60);
    let j = Jacobi::<MpFloat>::new(&fam.validate().unwrap(), &ctx).unwrap();
    (0..=n_max).map(|n| (j.alpha(n).unwrap(), j.beta(n).unwrap())).collect()
}

fn same_coefficients(x: &[(MpFloat, MpFloat)], y: &[(MpFloat, MpFloat)]) -> bool {
    let close = |a: &MpFloat, b: &MpFloat| (a.clone() - b).abs().to_f64() <= 1e-50 * a.abs().to_f64().max(1.0);
    x.iter().zip(y).all(|(p, q)| close(&p.0, &q.0) && close(&p.1, &q.1))
}

fn permuted(lits: &[String], perm: &[usize]) -> Vec<String> {
    perm.iter().map(|&i| lits[i].clone()).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn wilson_parameter_symmetry(lits in prop::collection::vec(rational_lit(), 4)) {
        let base = coefficients(&spec(FamilyId::W, lits.clone()), 20);
        for perm in [[1, 0, 2, 3], [0, 2, 1, 3], [3, 1, 2, 0], [2, 3, 0, 1], [1, 2, 3, 0]] {
            let other = coefficients(&spec(FamilyId::W, permuted(&lits, &perm)), 20);
            prop_assert!(same_coefficients(&base, &other), "{:?} vs {:?}", lits, perm);
        }
    }

    #[test]
    fn dual_hahn_parameter_symmetry(lits in prop::collection::vec(rational_lit(), 3)) {
        let base = coefficients(&spec(FamilyId::CdH, lits.clone()), 20);
        for perm in [[1, 0, 2], [0, 2, 1], [2, 0, 1]] {
            let other = coefficients(&spec(FamilyId::CdH, permuted(&lits, &perm)), 20);
            prop_assert!(same_coefficients(&base, &other), "{:?} vs {:?}", lits, perm);
        }
    }

    #[test]
    fn extension_is_linear_in_the_seed(
        pick in 0usize..4,
        s in (-20i64..20, -20i64..20, -20i64..20, -20i64..20),
        c in (-5i64..5, -5i64..5),
    ) {
        // Families whose coefficients are rational, so the check is exact.
        let (id, lits) = [
            (FamilyId::HilbertJt, vec!["7/3".to_string()]),
            (FamilyId::L, vec!["0".to_string()]),
            (FamilyId::CdH, vec!["1/2".to_string(), "1/2".to_string(), "5/4".to_string()]),
            (FamilyId::W, vec!["3/4".to_string(), "3/4".to_string(), "1/4".to_string(), "1/4".to_string()]),
        ][pick].clone();
        let fam = spec(id, lits).validate().unwrap();
        let t = JacobiTable::build(&Jacobi::<Rational>::new(&fam, &()).unwrap(), 24).unwrap();
        let q = |v: i64| Rational::from_i64(&(), v);
        let ext = |h0: Rational, h1: Rational| descend_extend(&t, h0, h1, 24, 0.0).unwrap();
        let u = ext(q(s.0), q(s.1));
        let v = ext(q(s.2), q(s.3));
        let w = ext(q(c.0 * s.0 + c.1 * s.2), q(c.0 * s.1 + c.1 * s.3));
        for k in 0..u.len() {
            prop_assert_eq!(w[k].clone(), q(c.0) * &u[k] + &(q(c.1) * &v[k]));
        }
    }
}

/// Hermite is excluded: its listed basis is the recorded discrepancy.
fn verified_dim2_points() -> Vec<ValidatedFamily> {
    default_claim_samples()
        .into_iter()
        .filter(|s| s.on_variety && s.family.id != FamilyId::H)
        .map(|s| s.family.validate().unwrap())
        .collect()
}

#[test]
fn closed_forms_satisfy_the_reduced_recurrence() {
    let ctx = MpContext::with_decimal_digits(60);
    let mut checked = 0;
    for fam in verified_dim2_points() {
        let basis = theorem_prediction(&fam).basis.expect("dim-2 point has a basis");
        let (h1, h2) = basis.materialize::<MpFloat>(&ctx, 65).unwrap();
        let Some(rec) = single_index_recurrence::<MpFloat>(&fam, &ctx).unwrap() else { continue };
        for h in [&h1, &h2] {
            let r = rec.max_relative(h);
            assert!(r < 1e-40, "{} ({}): {r:e}", fam.spec(), rec.description);
        }
        checked += 1;
    }
    assert!(checked >= 8, "only {checked} points have a reduced recurrence");
}

#[test]
fn big_d_vanishes_on_dimension_two_points() {
    let ctx = MpContext::with_decimal_digits(60);
    let grid = GridSpec::new(Quantity::D, (0, 20), (2, 200));
    for fam in verified_dim2_points() {
        let jac = Jacobi::<MpFloat>::new(&fam, &ctx).unwrap();
        let g = obstruction_grid(&jac, &fam, &grid).unwrap();
        assert!(g.vanishes(1e-40), "{}: {:e}", fam.spec(), g.max_relative);
    }
}

#[test]
fn big_d_is_visible_off_the_variety() {
    let ctx = MpContext::with_decimal_digits(60);
    let grid = GridSpec::new(Quantity::D, (0, 20), (2, 200));
    for (id, lits) in [
        (FamilyId::C, vec!["1"]),
        (FamilyId::L, vec!["0.5"]),
        (FamilyId::M, vec!["0.5", "2"]),
        (FamilyId::MP, vec!["0.8", "1.0"]),
    ] {
        let fam = FamilySpec::from_literals(id, &lits).unwrap().validate().unwrap();
        let jac = Jacobi::<MpFloat>::new(&fam, &ctx).unwrap();
        let g = obstruction_grid(&jac, &fam, &grid).unwrap();
        assert!(g.max_relative > 1e-10, "{}: {:e}", fam.spec(), g.max_relative);
    }
}
