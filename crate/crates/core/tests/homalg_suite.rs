mod common;

use common::{gp_fixtures, projective_fixtures, same_algebra, test_modules};
use gpdef::exactla::Field;
use gpdef::fixtures::{self, lambda0, lambda1, lambda2};
use gpdef::homalg::{
    self, dual_module, ext, ext_via_stable, gorenstein_data, hom_basis, is_gorenstein_projective,
    is_totally_reflexive, projective_cover, projective_dimension, stable_hom, syzygy, HomDim, Verdict,
};
use gpdef::Rep;

fn gp(m: &Rep) -> Verdict {
    is_gorenstein_projective(m, homalg::default_reflexivity_bound(m.algebra()))
}

#[test]
fn ext_equals_stable_hom_of_syzygy() {
    for (label, m) in gp_fixtures() {
        let len = if m.algebra().dim() > 40 { 2 } else { 3 };
        for n in test_modules(m.algebra(), len) {
            let a = ext(&m, &n, 1).dim;
            let b = ext_via_stable(&m, &n, 1).unwrap().dim;
            assert_eq!(a, b, "{label}");
        }
    }
}

#[test]
fn syzygies_stay_gorenstein_projective() {
    for (label, m) in gp_fixtures() {
        assert_eq!(gp(&m), Verdict::True, "{label}");
        let omega = syzygy(&m, 1).unwrap();
        assert_eq!(gp(&omega), Verdict::True, "Ω {label}");
    }
}

#[test]
fn ext_into_projectives_vanishes() {
    for (label, m) in gp_fixtures() {
        for (pl, p) in projective_fixtures().iter().filter(|(_, p)| same_algebra(&m, p)) {
            for i in 1..=3 {
                assert_eq!(ext(&m, p, i).dim, 0, "Ext^{i}({label}, {pl})");
            }
        }
    }
}

#[test]
fn finite_pd_forces_projective() {
    // Non-projective GP modules have infinite projective dimension, certified by periodicity.
    assert!(matches!(projective_dimension(&fixtures::m_b(), 8), HomDim::Infinite { .. }));
    for i in 0..3 {
        assert!(matches!(projective_dimension(&fixtures::v_module(i, 2), 8), HomDim::Infinite { .. }));
    }
    assert_eq!(projective_dimension(&Rep::projective(&lambda0(), 0), 8), HomDim::Finite(0));
}

#[test]
fn lambda1_gproj_is_second_syzygies() {
    let all: Vec<(String, Rep)> =
        (0..3).flat_map(|i| (0..5).map(move |j| (fixtures::v_label(i, j), fixtures::v_module(i, j)))).collect();
    let mut hit = vec![false; all.len()];
    for (_, m) in &all {
        let omega2 = syzygy(m, 2).unwrap();
        let k = all
            .iter()
            .position(|(_, v)| v.dims() == omega2.dims() && v.is_isomorphic(&omega2, 0).is_yes())
            .expect("Ω² of a V is again a V");
        hit[k] = true;
    }
    assert!(hit.iter().all(|&h| h), "every V_(i,j) is a second syzygy of a fixture module");
}

#[test]
fn gorenstein_dimensions() {
    let d = |a| gorenstein_data(&a, 6).unwrap();
    assert_eq!((d(lambda0()).left_injdim, d(lambda0()).right_injdim), (HomDim::Finite(1), HomDim::Finite(1)));
    assert_eq!((d(lambda1()).left_injdim, d(lambda1()).right_injdim), (HomDim::Finite(2), HomDim::Finite(2)));
    assert_eq!((d(lambda2()).left_injdim, d(lambda2()).right_injdim), (HomDim::Finite(0), HomDim::Finite(0)));
}

#[test]
fn covers_are_minimal() {
    for alg in [lambda0(), lambda1(), lambda2()] {
        for m in test_modules(&alg, 3) {
            let cover = projective_cover(&m).unwrap();
            assert!(cover.pi.is_intertwiner(&cover.projective, &m));
            assert_eq!(cover.pi.rank(), m.dim(), "cover is onto");
            let rad = cover.projective.radical_spaces();
            for (k, r) in cover.pi.kernel().iter().zip(&rad) {
                assert!(k.is_subspace_of(r), "kernel inside the radical");
            }
        }
    }
}

#[test]
fn stable_hom_independent_of_summand_order() {
    let alg = lambda0();
    let mods = test_modules(&alg, 2);
    for m in &mods {
        for (x, y) in mods.iter().zip(mods.iter().skip(1)) {
            let xy = x.direct_sum(y).unwrap();
            let yx = y.direct_sum(x).unwrap();
            let a = stable_hom(m, &xy).quotient_dim;
            assert_eq!(a, stable_hom(m, &yx).quotient_dim);
            assert_eq!(a, stable_hom(m, x).quotient_dim + stable_hom(m, y).quotient_dim);
            // Maps into the cover composed with π always land in the flagged subspace.
            let s = stable_hom(m, x);
            let cover = projective_cover(x).unwrap();
            for g in &hom_basis(m, &cover.projective).basis {
                assert!(s.factors_through_projective(&cover.pi.compose(g)));
            }
        }
    }
}

#[test]
fn double_dual_on_totally_reflexive_modules() {
    for alg in [lambda0(), lambda1()] {
        for m in test_modules(&alg, 3) {
            let verdict = is_totally_reflexive(&m, 4);
            let double = dual_module(&dual_module(&m));
            let reflexive = double.dims() == m.dims() && m.is_isomorphic(&double, 5).is_yes();
            if verdict == Verdict::True {
                assert!(reflexive);
            }
            if let Verdict::False(why) = &verdict {
                if why.contains("not reflexive") {
                    assert!(!reflexive);
                }
            }
        }
    }
}

#[test]
fn ext_over_prime_field() {
    let spec = gpdef::algebra::parse_algebra_with(gpdef::fixtures::LAMBDA0_JSON, Some(Field::Fp(7))).unwrap();
    let alg = gpdef::Algebra::build(spec).unwrap();
    let mb = Rep::string_module(&alg, &["b"], None).unwrap();
    assert_eq!(ext(&mb, &mb, 1).dim, 1);
    assert_eq!(stable_hom(&mb, &mb).quotient_dim, 1);
}
