use gpdef::biserial::enumerate_strings;
use gpdef::fixtures::{self, lambda0, lambda1, lambda2};
use gpdef::rep::{IsoResult, ModuleSpec, Rep};
use gpdef::Error;

fn check_witness(a: &Rep, b: &Rep, r: &IsoResult) {
    match r {
        IsoResult::Yes(f) => {
            assert!(f.is_intertwiner(a, b));
            assert!(f.is_invertible());
        }
        other => panic!("expected an isomorphism, got {other:?}"),
    }
}

#[test]
fn constructors_validate() {
    for alg in [lambda0(), lambda1(), lambda2()] {
        for v in 0..alg.num_vertices() {
            assert!(Rep::simple(&alg, v).validate().is_empty());
            assert!(Rep::projective(&alg, v).validate().is_empty());
        }
        assert_eq!(Rep::regular(&alg).dim(), alg.dim());
        assert!(Rep::regular(&alg).validate().is_empty());
        for a in 0..alg.spec().num_arrows() {
            let (ideal, incl) = Rep::ideal_module_with_inclusion(&alg, a);
            assert!(ideal.validate().is_empty());
            let p = Rep::projective(&alg, alg.spec().arrows[a].source);
            assert!(incl.is_intertwiner(&ideal, &p));
            assert_eq!(incl.rank(), ideal.dim(), "ideal module embeds");
            assert_eq!(ideal, Rep::ideal_module(&alg, a));
        }
    }
}

#[test]
fn string_modules_over_lambda0() {
    let alg = lambda0();
    let words = enumerate_strings(&alg, 4);
    assert!(words.len() > 10);
    for w in &words {
        let m = Rep::from_string(&alg, w).unwrap();
        assert!(m.validate().is_empty());
        assert_eq!(m.dim(), w.len() + 1);
        let inv = Rep::from_string(&alg, &w.inverse(alg.spec())).unwrap();
        check_witness(&m, &inv, &m.is_isomorphic(&inv, 7));
        check_witness(&m, &m, &m.is_isomorphic(&m, 1));
    }
}

#[test]
fn string_modules_over_lambda1() {
    let alg = lambda1();
    for i in 0..3 {
        for j in 0..5 {
            let m = fixtures::v_module(i, j);
            assert_eq!(m.dim(), 7 - j);
            let w = gpdef::rep::StringWord::parse(alg.spec(), &fixtures::v_word(i, j), None).unwrap();
            let inv = Rep::from_string(&alg, &w.inverse(alg.spec())).unwrap();
            check_witness(&m, &inv, &m.is_isomorphic(&inv, 3));
            check_witness(&inv, &m, &inv.is_isomorphic(&m, 4));
        }
    }
}

#[test]
fn non_isomorphic_pairs_are_rejected() {
    let a = fixtures::v_module(0, 2);
    let b = fixtures::v_module(1, 2);
    assert!(!a.is_isomorphic(&b, 0).is_yes());
    let alg = lambda0();
    assert!(Rep::simple(&alg, 0).is_isomorphic(&Rep::simple(&alg, 1), 0).is_no());
}

#[test]
fn module_spec_json() {
    let alg = lambda0();
    let m = fixtures::module(&alg, r#"{"kind":"string","word":["b"]}"#).unwrap();
    assert_eq!(m, fixtures::m_b());
    let e = fixtures::module(&alg, r#"{"kind":"string","word":[],"vertex":"1"}"#).unwrap();
    assert_eq!(e, Rep::simple(&alg, 1));
    let s: ModuleSpec = serde_json::from_str(r#"{"kind":"projective","vertex":"0"}"#).unwrap();
    assert_eq!(s.build(&alg).unwrap(), Rep::projective(&alg, 0));
    let bad = fixtures::module(&alg, r#"{"kind":"string","word":["a","a"]}"#);
    assert!(matches!(bad, Err(Error::InvalidString(_))), "{bad:?}");
    let wrong = fixtures::module(&alg, r#"{"kind":"string","word":["b","b"]}"#);
    assert!(wrong.is_err());
}

#[test]
fn explicit_module_is_validated() {
    let alg = lambda0();
    // The loop a acting by 1 violates a·a = 0.
    let text = r#"{"kind":"explicit","dims":{"0":1},"matrices":{"a":[["1"]]}}"#;
    let r = fixtures::module(&alg, text);
    assert!(matches!(r, Err(Error::InvalidSpec(_))), "{r:?}");
    let ok = r#"{"kind":"explicit","dims":{"0":1,"1":1},"matrices":{"b":[["1"]]}}"#;
    assert_eq!(fixtures::module(&alg, ok).unwrap(), fixtures::m_b());
}
