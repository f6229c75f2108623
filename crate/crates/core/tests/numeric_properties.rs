use ballke_core::group::{enumerate_specs, validate_spec};
use ballke_core::numeric::{
    grid_points, j_phi_complex, ke_defect, monomial_oracle_phi, phi_derivatives, phi_eval, GridCounts, C64,
};
use proptest::prelude::*;

fn point(n: usize, r: f64) -> impl Strategy<Value = Vec<C64>> {
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), n).prop_map(move |v| {
        let z: Vec<C64> = v.into_iter().map(|(a, b)| C64::new(a, b)).collect();
        let norm = z.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        let scale = if norm > 0.0 { r * 0.999 / norm.max(1.0) } else { 0.0 };
        z.into_iter().map(|c| c * scale).collect()
    })
}

fn spec_index() -> impl Strategy<Value = usize> {
    0usize..enumerate_specs(5, 3).len()
}

proptest! {
    #[test]
    fn hermitian_symmetry(i in spec_index(), z in point(3, 0.9), w in point(3, 0.9)) {
        let s = &enumerate_specs(5, 3)[i];
        let (z, w) = (&z[..s.n()], &w[..s.n()]);
        let a = phi_eval(s, z, w).unwrap();
        let b = phi_eval(s, w, z).unwrap().conj();
        prop_assert!((a - b).norm() <= 1e-12 * (1.0 + a.norm()));
    }

    #[test]
    fn diagonal_values_are_real(i in spec_index(), z in point(3, 0.85)) {
        let s = &enumerate_specs(5, 3)[i];
        let z = &z[..s.n()];
        let d = phi_derivatives(s, z).unwrap();
        prop_assert!(d.value.im.abs() <= 1e-10 * d.value.norm().max(1.0));
        let j = j_phi_complex(s, z).unwrap();
        prop_assert!(j.im.abs() <= 1e-10 * j.norm().max(1.0));
        for a in 0..s.n() {
            prop_assert!((d.grad[a].conj() - d.grad_bar[a]).norm() <= 1e-10 * d.value.norm());
            for b in 0..s.n() {
                prop_assert!((d.hess[a][b].conj() - d.hess[b][a]).norm() <= 1e-10 * d.value.norm());
            }
        }
    }

    #[test]
    fn monomial_oracle_matches(i in spec_index(), z in point(3, 0.4), w in point(3, 0.4)) {
        let s = &enumerate_specs(5, 3)[i];
        let (z, w) = (&z[..s.n()], &w[..s.n()]);
        let o = monomial_oracle_phi(s, z, w, 60).unwrap();
        prop_assert!((o.value - phi_eval(s, z, w).unwrap()).norm() <= 1e-6);
        prop_assert!(o.warning.is_none());
    }
}

#[test]
fn slice_hessian_is_diagonal() {
    for s in enumerate_specs(6, 4) {
        for x in [0.1, 0.5, 0.9] {
            let mut z = vec![C64::new(0.0, 0.0); s.n()];
            z[0] = C64::new(x, 0.0);
            let d = phi_derivatives(&s, &z).unwrap();
            for a in 0..s.n() {
                for b in 0..s.n() {
                    if a != b {
                        assert!(d.hess[a][b].norm() < 1e-12, "{s}");
                    }
                }
            }
        }
    }
}

#[test]
fn ball_is_einstein_everywhere() {
    for n in 2..=4 {
        let ball = ballke_core::group::GroupSpec::trivial(n).unwrap();
        for z in grid_points(n, 0.95, GridCounts { slice: 10, interior: 40 }, 3).unwrap() {
            assert!(ke_defect(&ball, &z).unwrap().rel_defect.abs() < 1e-9);
        }
    }
}

#[test]
fn monomial_domain_is_enforced() {
    let s = validate_spec(3, &[1, 1]).unwrap();
    let big = [C64::new(0.6, 0.0), C64::new(0.0, 0.0)];
    let ok = [C64::new(0.2, 0.0), C64::new(0.0, 0.0)];
    assert!(monomial_oracle_phi(&s, &big, &ok, 10).is_err());
    assert!(phi_eval(&s, &[C64::new(1.0, 0.0), C64::new(0.0, 0.0)], &ok).is_err());
    assert!(phi_eval(&s, &[C64::new(0.1, 0.0)], &ok).is_err());
}
