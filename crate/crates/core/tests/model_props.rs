use hbv_core::model::{
    closed_form_elasticity, elasticities, elasticity_fd, validate, DimensionalParams, Parameter, ValidatedParams,
};
use hbv_core::presets;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Table-1 values scaled log-uniformly by up to a decade each way, α uniform in (0, 1].
fn random_valid(rng: &mut impl Rng) -> ValidatedParams {
    let base = presets::table1();
    loop {
        let mut p = base;
        for which in Parameter::ALL {
            let f = 10f64.powf(rng.gen_range(-1.0..1.0));
            p.set(which, base.get(which) * f);
        }
        p.alpha = rng.gen_range(0.01..=1.0);
        if let Ok(v) = validate(p) {
            return v;
        }
    }
}

/// R0 written out from the dimensional model, generic over the scalar so
/// the same expression serves complex-step differentiation.
fn r0_formula(p: &DimensionalParams, which: Parameter, bump: Complex64) -> Complex64 {
    let v = |q: Parameter| {
        let x = Complex64::new(p.get(q), 0.0);
        if q == which {
            x + bump
        } else {
            x
        }
    };
    let (alpha, beta, gamma, delta) = (
        v(Parameter::Alpha),
        v(Parameter::Beta),
        v(Parameter::Gamma),
        v(Parameter::Delta),
    );
    let rs = alpha * beta - gamma * (1.0 - alpha) + delta;
    v(Parameter::A) * v(Parameter::K) * v(Parameter::Lambda) * alpha * beta
        / (rs * delta * v(Parameter::DeltaV) * v(Parameter::Mu))
}

/// Elasticity by complex-step differentiation: exact to rounding.
fn complex_step_elasticity(p: &DimensionalParams, which: Parameter) -> f64 {
    let h = 1e-30 * p.get(which);
    let r0 = r0_formula(p, which, Complex64::new(0.0, 0.0)).re;
    let d = r0_formula(p, which, Complex64::new(0.0, h)).im / h;
    p.get(which) / r0 * d
}

#[test]
fn table1_reproduction_number() {
    let vp = validate(presets::table1()).unwrap();
    let r0 = r0_formula(vp.params(), Parameter::K, Complex64::new(0.0, 0.0)).re;
    assert!((r0 - 3.6875).abs() < 1e-4, "{r0}");
    assert!((vp.scale().basic_reproduction_number() - r0).abs() < 1e-12 * r0);
}

#[test]
fn scaled_reproduction_number_round_trips() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..1000 {
        let vp = random_valid(&mut rng);
        let direct = r0_formula(vp.params(), Parameter::K, Complex64::new(0.0, 0.0)).re;
        let scaled = vp.scale().basic_reproduction_number();
        assert!((scaled - direct).abs() <= 1e-12 * direct, "{scaled} vs {direct}");
        assert!((vp.basic_reproduction_number() - direct).abs() <= 1e-12 * direct);
    }
}

#[test]
fn endemic_identities() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut endemic = 0;
    for _ in 0..1000 {
        let sp = random_valid(&mut rng).scale();
        let r0 = sp.basic_reproduction_number();
        match sp.equilibria().1 {
            Some(e) => {
                endemic += 1;
                let tol = 1e-12 * r0.max(1.0);
                assert!((e.t1 * r0 - 1.0).abs() <= tol);
                assert!((e.v1 - (r0 - 1.0)).abs() <= tol);
                assert!(e.t1 > 0.0 && e.i1 > 0.0 && e.d1 > 0.0 && e.v1 > 0.0);
                // the reaction right-hand side vanishes
                let res = [
                    1.0 - e.t1 - e.v1 * e.t1,
                    e.v1 * e.t1 - sp.rho1 * e.i1,
                    sp.rho2 * e.i1 - sp.rho3 * e.d1,
                    sp.rho4 * e.d1 - sp.rho5 * e.v1,
                ];
                let scale = [1.0, sp.rho1 * e.i1, sp.rho2 * e.i1, sp.rho4 * e.d1];
                for (r, s) in res.iter().zip(scale) {
                    assert!(r.abs() <= 1e-12 * s.max(1.0), "{res:?}");
                }
            }
            None => assert!(r0 <= 1.0),
        }
    }
    assert!(endemic > 100, "only {endemic} draws were endemic");
}

#[test]
fn closed_forms_match_complex_step() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..200 {
        let vp = random_valid(&mut rng);
        for which in Parameter::ALL {
            let exact = complex_step_elasticity(vp.params(), which);
            let closed = closed_form_elasticity(&vp, which);
            assert!(
                (exact - closed).abs() <= 1e-12 * closed.abs().max(1.0),
                "{which}: {closed} vs {exact}"
            );
        }
    }
}

#[test]
fn elasticity_signs() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for _ in 0..1000 {
        let vp = random_valid(&mut rng);
        let p = vp.params();
        let e = elasticities(&vp);
        assert!(e.e_gamma >= 0.0);
        let sign = |x: f64| {
            if x > 0.0 {
                1
            } else if x < 0.0 {
                -1
            } else {
                0
            }
        };
        assert_eq!(sign(e.e_alpha), sign(p.delta - p.gamma));
        assert_eq!(sign(e.e_beta), sign(p.delta - (1.0 - p.alpha) * p.gamma));
    }
}

#[test]
fn finite_differences_converge_quadratically() {
    // Truncation C·h² plus a rounding floor of order ε/h, with C fitted at the coarsest step.
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let steps = [1e-4, 1e-5, 1e-6];
    for _ in 0..200 {
        let vp = random_valid(&mut rng);
        for which in Parameter::ALL {
            let exact = closed_form_elasticity(&vp, which);
            let errs: Vec<f64> = match steps
                .iter()
                .map(|&h| elasticity_fd(&vp, which, h).map(|fd| (fd - exact).abs()))
                .collect::<Result<Vec<_>, _>>()
            {
                Ok(e) => e,
                // alpha near 1 can leave the valid region
                Err(_) => continue,
            };
            let c = 2.0 * errs[0] / (steps[0] * steps[0]);
            for (h, err) in steps.iter().zip(&errs) {
                let floor = 64.0 * f64::EPSILON / h * exact.abs().max(1.0);
                assert!(*err <= c * h * h + floor, "{which} h={h}: err {err:e}, C {c:e}");
            }
        }
    }
}

#[test]
fn table1_elasticities_match_quoted_values() {
    let vp = validate(presets::table1()).unwrap();
    let e = elasticities(&vp);
    for (got, want) in [(e.e_alpha, -1.05), (e.e_beta, -0.14), (e.e_gamma, 0.23)] {
        assert!((got - want).abs() <= 0.005, "{got} vs {want}");
    }
    for which in [Parameter::Alpha, Parameter::Beta, Parameter::Gamma] {
        let fd = elasticity_fd(&vp, which, 1e-6).unwrap();
        assert!((fd - closed_form_elasticity(&vp, which)).abs() <= 1e-5);
    }
}
