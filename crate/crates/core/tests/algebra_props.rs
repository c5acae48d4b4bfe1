use std::collections::HashMap;
use std::sync::Arc;

use gpdef::algebra::{parse_algebra, Algebra, AlgebraElement};
use gpdef::exactla::{Field, Scalar, Subspace};
use gpdef::fixtures::{lambda0, lambda1, lambda2};

fn fixtures() -> Vec<(&'static str, Arc<Algebra>)> {
    vec![("lambda0", lambda0()), ("lambda1", lambda1()), ("lambda2", lambda2())]
}

fn add(a: &AlgebraElement, b: &AlgebraElement) -> AlgebraElement {
    AlgebraElement(a.0.iter().zip(&b.0).map(|(x, y)| x + y).collect())
}

#[test]
fn associativity_on_basis_triples() {
    for (name, alg) in fixtures() {
        let n = alg.dim();
        let basis: Vec<AlgebraElement> = (0..n).map(|i| alg.basis_element(i)).collect();
        for x in &basis {
            for y in &basis {
                let xy = alg.multiply(x, y);
                if xy.is_zero() {
                    // (xy)z = 0 must match x(yz).
                    for z in &basis {
                        assert!(alg.multiply(x, &alg.multiply(y, z)).is_zero(), "{name}");
                    }
                    continue;
                }
                for z in &basis {
                    assert_eq!(alg.multiply(&xy, z), alg.multiply(x, &alg.multiply(y, z)), "{name}");
                }
            }
        }
    }
}

#[test]
fn idempotent_decomposition() {
    for (name, alg) in fixtures() {
        let nv = alg.num_vertices();
        let mut sum = AlgebraElement(vec![alg.field().zero(); alg.dim()]);
        for v in 0..nv {
            let ev = alg.idempotent(v);
            sum = add(&sum, &ev);
            for w in 0..nv {
                let prod = alg.multiply(&ev, &alg.idempotent(w));
                if v == w {
                    assert_eq!(prod, ev, "{name}");
                } else {
                    assert!(prod.is_zero(), "{name}");
                }
            }
        }
        assert_eq!(sum, alg.one(), "{name}");
        let x = alg.basis_element(alg.dim() - 1);
        assert_eq!(alg.multiply(&alg.one(), &x), x);
        assert_eq!(alg.multiply(&x, &alg.one()), x);
    }
}

#[test]
fn relations_vanish() {
    for (name, alg) in fixtures() {
        for r in &alg.spec().relations {
            assert!(alg.relation_element(r).is_zero(), "{name}");
        }
    }
}

#[test]
fn radical_filtration_is_multiplicative() {
    for (name, alg) in fixtures() {
        let l = alg.nilpotency();
        for a in 1..l {
            for b in 1..l {
                let target = alg.radical_power_basis(a + b);
                let span = Subspace::span(
                    alg.field(),
                    alg.dim(),
                    &target.iter().map(|&i| alg.basis_element(i).0).collect::<Vec<_>>(),
                );
                for &i in &alg.radical_power_basis(a) {
                    for &j in &alg.radical_power_basis(b) {
                        let p = alg.multiply(&alg.basis_element(i), &alg.basis_element(j));
                        assert!(span.contains(&p.0), "{name}: J^{a} J^{b} not in J^{}", a + b);
                    }
                }
            }
        }
        assert!(alg.radical_power_basis(l).is_empty(), "{name}");
    }
}

/// Paths of length at most `max_len`, written order (leftmost applied last).
fn all_paths(alg: &Algebra, max_len: usize) -> Vec<(usize, usize, Vec<usize>)> {
    let spec = alg.spec();
    let mut out: Vec<(usize, usize, Vec<usize>)> = (0..spec.num_vertices()).map(|v| (v, v, vec![])).collect();
    let mut frontier = out.clone();
    for _ in 0..max_len {
        let mut next = Vec::new();
        for (s, t, arrows) in &frontier {
            for (a, arrow) in spec.arrows.iter().enumerate() {
                if arrow.source == *t {
                    let mut w = vec![a];
                    w.extend(arrows);
                    next.push((*s, arrow.target, w));
                }
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

/// Dimension of kQ/I computed directly from the span of `p·r·q` inside the
/// truncated path algebra, block by block.
fn oracle_dim(alg: &Algebra) -> usize {
    let spec = alg.spec();
    let t = alg.truncation();
    let f = alg.field();
    let paths = all_paths(alg, t);
    let mut blocks: HashMap<(usize, usize), Vec<Vec<usize>>> = HashMap::new();
    for (s, tg, w) in &paths {
        blocks.entry((*s, *tg)).or_default().push(w.clone());
    }
    let index: HashMap<(usize, usize, Vec<usize>), usize> = blocks
        .iter()
        .flat_map(|(&(s, tg), ws)| ws.iter().enumerate().map(move |(i, w)| ((s, tg, w.clone()), i)))
        .collect();
    let mut gens: HashMap<(usize, usize), Vec<Vec<Scalar>>> = HashMap::new();
    for r in &spec.relations {
        let (rs, rt) = (r.terms[0].1.source, r.terms[0].1.target);
        let min_len = r.terms.iter().map(|(_, p)| p.arrows.len()).min().unwrap();
        for (_, pt, pw) in paths.iter().filter(|(s, _, _)| *s == rt) {
            for (qs, _, qw) in paths.iter().filter(|(_, tg, _)| *tg == rs) {
                if pw.len() + qw.len() + min_len > t {
                    continue;
                }
                let width = blocks[&(*qs, *pt)].len();
                let mut v = vec![f.zero(); width];
                for (c, term) in &r.terms {
                    let mut w = pw.clone();
                    w.extend(&term.arrows);
                    w.extend(qw);
                    if w.len() <= t {
                        v[index[&(*qs, *pt, w)]] += c;
                    }
                }
                gens.entry((*qs, *pt)).or_default().push(v);
            }
        }
    }
    let mut dim = 0;
    for (key, ws) in &blocks {
        let span = Subspace::span(f, ws.len(), gens.get(key).map(Vec::as_slice).unwrap_or(&[]));
        // Admissibility: every path of length t lies in the ideal.
        for (i, w) in ws.iter().enumerate() {
            if w.len() == t {
                let mut e = vec![f.zero(); ws.len()];
                e[i] = f.one();
                assert!(span.contains(&e), "path of length {t} outside the ideal");
            }
        }
        dim += ws.len() - span.dim();
    }
    dim
}

#[test]
fn dimension_matches_independent_oracle() {
    for (name, alg) in fixtures() {
        assert_eq!(oracle_dim(&alg), alg.dim(), "{name}");
    }
    assert_eq!((lambda0().dim(), lambda1().dim(), lambda2().dim()), (8, 30, 54));
}

#[test]
fn oracle_on_inhomogeneous_example() {
    // Two commuting square-zero loops: k[x,y]/(x², y²).
    let text = r#"{"field":"Q","vertices":["0"],
        "arrows":[{"name":"x","from":"0","to":"0"},{"name":"y","from":"0","to":"0"}],
        "relations":[[{"coeff":"1","path":["x","y"]},{"coeff":"-1","path":["y","x"]}],
                     [{"coeff":"1","path":["x","x"]}],[{"coeff":"1","path":["y","y"]}]]}"#;
    let alg = Algebra::build(parse_algebra(text).unwrap()).unwrap();
    assert_eq!(alg.dim(), 4);
    assert_eq!(oracle_dim(&alg), 4);
}

#[test]
fn fp_field_gives_same_dimensions() {
    for json in [gpdef::fixtures::LAMBDA0_JSON, gpdef::fixtures::LAMBDA1_JSON] {
        let q = Algebra::build(parse_algebra(json).unwrap()).unwrap();
        let spec = gpdef::algebra::parse_algebra_with(json, Some(Field::Fp(101))).unwrap();
        let p = Algebra::build(spec).unwrap();
        assert_eq!(q.dim(), p.dim());
        assert_eq!(p.field(), Field::Fp(101));
    }
}
