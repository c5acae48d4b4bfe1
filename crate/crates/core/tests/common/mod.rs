#![allow(dead_code)]

use std::sync::Arc;

use gpdef::algebra::Algebra;
use gpdef::biserial::enumerate_strings;
use gpdef::fixtures::{self, lambda0, lambda1, lambda2};
use gpdef::deform::FirstOrderSpace;
use gpdef::exactla::Mat;
use gpdef::Rep;
use rand_chacha::ChaCha8Rng;

/// Non-projective Gorenstein-projective fixture modules with their labels.
pub fn gp_fixtures() -> Vec<(String, Rep)> {
    let l0 = lambda0();
    let mut out = vec![
        ("M[b]".to_string(), fixtures::m_b()),
        ("M[1_1]".to_string(), Rep::simple(&l0, 1)),
        ("M[ba]".to_string(), fixtures::m_ba()),
    ];
    for i in 0..3 {
        for j in 0..5 {
            out.push((fixtures::v_label(i, j), fixtures::v_module(i, j)));
        }
    }
    out.push(("W0".to_string(), fixtures::w0()));
    out
}

/// Projectives of every fixture algebra.
pub fn projective_fixtures() -> Vec<(String, Rep)> {
    let mut out = Vec::new();
    for (name, alg) in [("lambda0", lambda0()), ("lambda1", lambda1()), ("lambda2", lambda2())] {
        for v in 0..alg.num_vertices() {
            out.push((format!("{name} P{}", alg.spec().vertices[v]), Rep::projective(&alg, v)));
        }
    }
    out
}

/// Simples plus short string modules over `alg`.
pub fn test_modules(alg: &Arc<Algebra>, max_len: usize) -> Vec<Rep> {
    let mut out: Vec<Rep> = (0..alg.num_vertices()).map(|v| Rep::simple(alg, v)).collect();
    for w in enumerate_strings(alg, max_len) {
        if !w.is_empty() {
            out.push(Rep::from_string(alg, &w).expect("enumerated strings are valid"));
        }
    }
    out
}

pub fn same_algebra(a: &Rep, b: &Rep) -> bool {
    Arc::ptr_eq(a.algebra(), b.algebra())
}

pub fn random_combination(rng: &mut ChaCha8Rng, fo: &FirstOrderSpace, vectors: &[Vec<Mat>]) -> Vec<Mat> {
    let f = fo.module.field();
    let mut acc: Vec<Mat> = fo.module.actions().iter().map(|a| Mat::zeros(f, a.rows(), a.cols())).collect();
    for v in vectors {
        let c = f.random(rng);
        for (x, y) in acc.iter_mut().zip(v) {
            *x = x.add(&y.scale(&c));
        }
    }
    acc
}

pub fn random_gauge(rng: &mut ChaCha8Rng, m: &Rep) -> Vec<Mat> {
    let f = m.field();
    m.dims()
        .iter()
        .map(|&d| {
            let mut h = Mat::zeros(f, d, d);
            for i in 0..d {
                for j in 0..d {
                    h.set(i, j, f.random(rng));
                }
            }
            h
        })
        .collect()
}

pub fn random_arrow_matrices(rng: &mut ChaCha8Rng, m: &Rep) -> Vec<Mat> {
    let f = m.field();
    m.actions()
        .iter()
        .map(|a| {
            let mut x = Mat::zeros(f, a.rows(), a.cols());
            for i in 0..a.rows() {
                for j in 0..a.cols() {
                    x.set(i, j, f.random(rng));
                }
            }
            x
        })
        .collect()
}

pub fn add_mats(a: &[Mat], b: &[Mat]) -> Vec<Mat> {
    a.iter().zip(b).map(|(x, y)| x.add(y)).collect()
}

