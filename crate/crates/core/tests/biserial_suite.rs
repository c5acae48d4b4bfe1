use std::collections::HashSet;

use gpdef::algebra::{parse_algebra, Algebra};
use gpdef::biserial::{
    analyze, check_gentle, check_special_biserial, classify_gproj_gentle, critical_cycles, enumerate_strings,
    Membership,
};
use gpdef::fixtures::{lambda0, lambda1, lambda2};
use gpdef::homalg::{default_reflexivity_bound, is_gorenstein_projective, Verdict};
use gpdef::{Error, Rep};
use proptest::prelude::*;

#[test]
fn lambda0_classification_cross_validates() {
    let alg = lambda0();
    let entries = classify_gproj_gentle(&alg).unwrap();
    assert_eq!(entries.len(), 5);
    let bound = default_reflexivity_bound(&alg);
    for e in &entries {
        assert_eq!(is_gorenstein_projective(&e.module, bound), Verdict::True, "{}", e.label);
    }
    for w in enumerate_strings(&alg, 4) {
        let m = Rep::from_string(&alg, &w).unwrap();
        let listed = entries.iter().any(|e| e.module.dims() == m.dims() && e.module.is_isomorphic(&m, 0).is_yes());
        if !listed {
            let v = is_gorenstein_projective(&m, bound);
            assert!(matches!(v, Verdict::False(_)), "{} should not be GP: {v:?}", w.label(alg.spec()));
        }
    }
}

#[test]
fn arrows_lie_on_at_most_one_critical_cycle() {
    let cycles = critical_cycles(&lambda0()).unwrap();
    let mut seen = HashSet::new();
    for c in &cycles {
        for a in c {
            assert!(seen.insert(*a), "arrow on two critical cycles");
        }
    }
}

#[test]
fn fixture_flags() {
    let r0 = check_gentle(&lambda0());
    assert!(r0.gentle && r0.special_biserial);
    let r1 = check_special_biserial(&lambda1());
    assert!(r1.special_biserial && !r1.gentle);
    let r2 = check_gentle(&lambda2());
    assert!(r2.special_biserial && !r2.gentle);
    assert!(r2.violations.iter().any(|v| v.condition == "iii"));
    assert!(matches!(classify_gproj_gentle(&lambda2()), Err(Error::NotGentle(_))));
}

#[test]
fn a2_without_relations_has_only_projectives() {
    let text = r#"{"field":"Q","vertices":["0","1"],"arrows":[{"name":"x","from":"0","to":"1"}],"relations":[]}"#;
    let alg = Algebra::build(parse_algebra(text).unwrap()).unwrap();
    let entries = classify_gproj_gentle(&alg).unwrap();
    assert_eq!(entries.len(), 2);
    assert!(entries.iter().all(|e| e.label.starts_with('P')));
}

/// A random quiver on up to 4 vertices with up to 6 arrows, with a random
/// subset of length-2 compositions as zero relations and every surviving path of length 4 killed.
fn random_algebra(nv: usize, arrows: &[(usize, usize)], keep: &[bool]) -> Option<std::sync::Arc<Algebra>> {
    let vertices: Vec<String> = (0..nv).map(|v| format!("\"{v}\"")).collect();
    let arrow_json: Vec<String> =
        arrows.iter().enumerate().map(|(i, (s, t))| format!(r#"{{"name":"x{i}","from":"{s}","to":"{t}"}}"#)).collect();
    let mut rels = Vec::new();
    let mut killed = HashSet::new();
    let mut k = 0;
    for (b, (bs, _)) in arrows.iter().enumerate() {
        for (a, (_, at)) in arrows.iter().enumerate() {
            if at == bs {
                if keep.get(k).copied().unwrap_or(false) {
                    killed.insert((b, a));
                    rels.push(format!(r#"[{{"coeff":"1","path":["x{b}","x{a}"]}}]"#));
                }
                k += 1;
            }
        }
    }
    // Kill long paths so the quotient is finite-dimensional.
    let mut paths: Vec<Vec<usize>> = (0..arrows.len()).map(|a| vec![a]).collect();
    for _ in 1..4 {
        let mut next = Vec::new();
        for p in &paths {
            for (a, (s, _)) in arrows.iter().enumerate() {
                if *s == arrows[p[0]].1 {
                    let mut q = vec![a];
                    q.extend(p);
                    next.push(q);
                }
            }
        }
        paths = next;
    }
    for p in paths.iter().filter(|p| !p.windows(2).any(|w| killed.contains(&(w[0], w[1])))) {
        let names: Vec<String> = p.iter().map(|a| format!("\"x{a}\"")).collect();
        rels.push(format!(r#"[{{"coeff":"1","path":[{}]}}]"#, names.join(",")));
    }
    let text = format!(
        r#"{{"field":"Q","vertices":[{}],"arrows":[{}],"relations":[{}]}}"#,
        vertices.join(","),
        arrow_json.join(","),
        rels.join(",")
    );
    Algebra::build(parse_algebra(&text).ok()?).ok()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn gentle_implies_special_biserial(
        nv in 1usize..=4,
        raw in prop::collection::vec((0usize..4, 0usize..4), 1..=6),
        keep in prop::collection::vec(any::<bool>(), 36),
    ) {
        let arrows: Vec<(usize, usize)> = raw.into_iter().map(|(s, t)| (s % nv, t % nv)).collect();
        if let Some(alg) = random_algebra(nv, &arrows, &keep) {
            for mode in [Membership::Ideal, Membership::Literal] {
                let r = analyze(&alg, mode);
                if r.gentle {
                    prop_assert!(r.special_biserial);
                }
            }
        }
    }
}

#[test]
fn random_generator_produces_gentle_examples() {
    let alg = random_algebra(2, &[(0, 1), (1, 0)], &[true, false]).expect("builds");
    let r = check_gentle(&alg);
    assert!(r.gentle, "{}", r.violation_summary());
    let loops = random_algebra(1, &[(0, 0), (0, 0), (0, 0)], &[]).expect("builds");
    assert!(!check_special_biserial(&loops).special_biserial);
}
