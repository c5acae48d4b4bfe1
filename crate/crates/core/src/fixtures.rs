//! The three worked-example algebras and their named modules.

use std::sync::{Arc, OnceLock};

use crate::algebra::{parse_algebra, Algebra};
use crate::error::Result;
use crate::rep::{ModuleSpec, Rep};

pub const LAMBDA0_JSON: &str = include_str!("../fixtures/lambda0.json");
pub const LAMBDA1_JSON: &str = include_str!("../fixtures/lambda1.json");
pub const LAMBDA2_JSON: &str = include_str!("../fixtures/lambda2.json");
/// Identification list of the fifteen modules `V_{i,j}` over Λ₁.
pub const LAMBDA1_V_LIST_JSON: &str = include_str!("../fixtures/modules/lambda1_V_list.json");

fn cached(cell: &'static OnceLock<Arc<Algebra>>, json: &str) -> Arc<Algebra> {
    cell.get_or_init(|| {
        let spec = parse_algebra(json).expect("fixture parses");
        Algebra::build(spec).expect("fixture builds")
    })
    .clone()
}

pub fn lambda0() -> Arc<Algebra> {
    static CELL: OnceLock<Arc<Algebra>> = OnceLock::new();
    cached(&CELL, LAMBDA0_JSON)
}

pub fn lambda1() -> Arc<Algebra> {
    static CELL: OnceLock<Arc<Algebra>> = OnceLock::new();
    cached(&CELL, LAMBDA1_JSON)
}

pub fn lambda2() -> Arc<Algebra> {
    static CELL: OnceLock<Arc<Algebra>> = OnceLock::new();
    cached(&CELL, LAMBDA2_JSON)
}

/// The word of `V_{i,j}`: `α_{i+1}^{-1} γ_{i+2} γ_i γ_{i+1} γ_{i+2} γ_i` with the
/// last `j` letters removed.
pub fn v_word(i: usize, j: usize) -> Vec<String> {
    assert!(j <= 4, "j ranges over 0..=4");
    let g = |k: usize| format!("gamma{}", k % 3);
    let full = vec![format!("alpha{}^-1", (i + 1) % 3), g(i + 2), g(i), g(i + 1), g(i + 2), g(i)];
    full[..6 - j].to_vec()
}

pub fn v_label(i: usize, j: usize) -> String {
    format!("V_{{{},{}}}", i % 3, j)
}

/// `V_{i,j}` over Λ₁.
pub fn v_module(i: usize, j: usize) -> Rep {
    Rep::string_module(&lambda1(), &v_word(i, j), None).expect("V_{i,j} is a valid string")
}

/// `W₀ = M[γ₁γ₂γ₀]` over Λ₂.
pub fn w0() -> Rep {
    Rep::string_module(&lambda2(), &["gamma1", "gamma2", "gamma0"], None).expect("W0 is a valid string")
}

/// `M[b]` over Λ₀.
pub fn m_b() -> Rep {
    Rep::string_module(&lambda0(), &["b"], None).expect("M[b] is a valid string")
}

/// `M[ba]` over Λ₀.
pub fn m_ba() -> Rep {
    Rep::string_module(&lambda0(), &["b", "a"], None).expect("M[ba] is a valid string")
}

/// Parses a module spec against one of the fixture algebras.
pub fn module(alg: &Arc<Algebra>, json: &str) -> Result<Rep> {
    let spec: ModuleSpec = serde_json::from_str(json)?;
    spec.build(alg)
}
