//! Lifts over `k[t]/(t^n)`, obstruction calculus, and versal deformation reports.

use std::fmt;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::algebra::Path;
use crate::error::{Error, Result};
use crate::exactla::{solve_affine, Field, Mat, PreparedSystem, Scalar, Subspace};
use crate::homalg::{self, Verdict};
use crate::rep::{Morphism, Rep};

/// Default number of levels explored by [`versal_report`].
pub const DEFAULT_LEVEL_BOUND: usize = 8;
/// Random samples tried before certifying a weak non-isomorphism.
pub const WEAK_ISO_SAMPLES: usize = 64;
/// Largest determinant grid evaluated when certifying a weak non-isomorphism.
pub const WEAK_ISO_GRID_BUDGET: usize = 4096;

/// `k[t]/(t^order)`; order 2 is the ring of dual numbers, order 1 is `k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ArtinBase {
    pub order: usize,
}

impl ArtinBase {
    pub fn dual_numbers() -> ArtinBase {
        ArtinBase { order: 2 }
    }

    pub fn truncated(order: usize) -> ArtinBase {
        assert!(order >= 1, "k[t]/(t^n) needs n >= 1");
        ArtinBase { order }
    }

    pub fn is_dual_numbers(&self) -> bool {
        self.order == 2
    }
}

impl fmt::Display for ArtinBase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.order {
            1 => write!(f, "k"),
            2 => write!(f, "k[ε]"),
            n => write!(f, "k[t]/(t^{n})"),
        }
    }
}

/// A matrix with entries in `k[t]/(t^n)`, stored by coefficient: `coeffs[j]` multiplies `t^j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyMat {
    coeffs: Vec<Mat>,
}

impl PolyMat {
    pub fn constant(m: &Mat, order: usize) -> PolyMat {
        let mut coeffs = vec![m.clone()];
        coeffs.resize(order, Mat::zeros(m.field(), m.rows(), m.cols()));
        PolyMat { coeffs }
    }

    pub fn from_coeffs(coeffs: Vec<Mat>) -> PolyMat {
        assert!(!coeffs.is_empty(), "a truncated polynomial needs at least one coefficient");
        PolyMat { coeffs }
    }

    pub fn identity(field: Field, n: usize, order: usize) -> PolyMat {
        PolyMat::constant(&Mat::identity(field, n), order)
    }

    pub fn order(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeff(&self, j: usize) -> &Mat {
        &self.coeffs[j]
    }

    pub fn coeffs(&self) -> &[Mat] {
        &self.coeffs
    }

    pub fn shape(&self) -> (usize, usize) {
        self.coeffs[0].shape()
    }

    /// Changes the order, dropping high coefficients or padding with zeros.
    pub fn with_order(&self, order: usize) -> PolyMat {
        let mut coeffs = self.coeffs.clone();
        let (r, c) = self.shape();
        coeffs.resize(order, Mat::zeros(self.coeffs[0].field(), r, c));
        PolyMat { coeffs }
    }

    pub fn mul(&self, other: &PolyMat) -> PolyMat {
        let n = self.order().min(other.order());
        let f = self.coeffs[0].field();
        let mut coeffs = vec![Mat::zeros(f, self.shape().0, other.shape().1); n];
        for i in 0..n {
            if self.coeffs[i].is_zero() {
                continue;
            }
            for j in 0..n - i {
                if other.coeffs[j].is_zero() {
                    continue;
                }
                let prod = self.coeffs[i].mul(&other.coeffs[j]);
                coeffs[i + j] = coeffs[i + j].add(&prod);
            }
        }
        PolyMat { coeffs }
    }

    pub fn add(&self, other: &PolyMat) -> PolyMat {
        PolyMat { coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a.add(b)).collect() }
    }

    pub fn scale(&self, s: &Scalar) -> PolyMat {
        PolyMat { coeffs: self.coeffs.iter().map(|a| a.scale(s)).collect() }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Mat::is_zero)
    }

    /// Lowest `j` with a nonzero coefficient.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|m| !m.is_zero())
    }
}

/// A module over `k[t]/(t^n) ⊗ Λ`, free over the base, given by one
/// truncated-polynomial matrix per arrow, with an isomorphism from its
/// reduction mod `t` onto `target`.
#[derive(Clone, Debug)]
pub struct Lift {
    pub base: ArtinBase,
    pub target: Rep,
    pub matrices: Vec<PolyMat>,
    /// Per-vertex isomorphism from the reduction (the constant terms) onto `target`.
    pub reduction: Morphism,
}

impl Lift {
    /// Constant matrices: the trivial lift.
    pub fn trivial(m: &Rep, order: usize) -> Lift {
        Lift {
            base: ArtinBase::truncated(order),
            target: m.clone(),
            matrices: m.actions().iter().map(|a| PolyMat::constant(a, order)).collect(),
            reduction: Morphism::identity(m),
        }
    }

    /// `ρ + εδ` over the dual numbers.
    pub fn first_order(m: &Rep, delta: &[Mat]) -> Lift {
        let matrices =
            m.actions().iter().zip(delta).map(|(a, d)| PolyMat::from_coeffs(vec![a.clone(), d.clone()])).collect();
        Lift { base: ArtinBase::dual_numbers(), target: m.clone(), matrices, reduction: Morphism::identity(m) }
    }

    /// Reads a module `x` with a nilpotent endomorphism `t` as a lift over
    /// `k[t]/(t^order)` of `x / t·x`. Fails unless `x` is free over the base.
    pub fn from_parameter_action(x: &Rep, t: &Morphism, order: usize) -> Result<Lift> {
        if !t.is_intertwiner(x, x) {
            return Err(Error::HypothesisFailed("the t-action is not a module endomorphism".into()));
        }
        let f = x.field();
        let images = t.image();
        let (quotient, _) = x.quotient_rep(&images);
        let alg = x.algebra();
        let nv = alg.num_vertices();
        // Free basis per vertex: t^k applied to the complement vectors.
        let mut bases: Vec<Mat> = Vec::with_capacity(nv);
        for v in 0..nv {
            let comp = images[v].complement_indices();
            let mut cols = Vec::new();
            for k in 0..order {
                for &j in &comp {
                    let mut e = vec![f.zero(); x.dims()[v]];
                    e[j] = f.one();
                    for _ in 0..k {
                        e = t.maps[v].mul_vec(&e);
                    }
                    cols.push(e);
                }
            }
            let b = Mat::from_columns(f, x.dims()[v], &cols);
            if b.rows() != b.cols() || !b.is_invertible() {
                return Err(Error::HypothesisFailed(format!(
                    "module is not free over k[t]/(t^{order}) at vertex {}",
                    alg.spec().vertices[v]
                )));
            }
            bases.push(b);
        }
        let q = quotient.dims();
        let mut matrices = Vec::with_capacity(alg.spec().num_arrows());
        for (a, arrow) in alg.spec().arrows.iter().enumerate() {
            let (s, tv) = (arrow.source, arrow.target);
            // Coordinates of a·x_{s,j} in the basis {t^k x_{t,i}}.
            let inv = bases[tv].inverse().expect("checked invertible");
            let coords = inv.mul(&x.action(a)).mul(&bases[s]);
            let mut coeffs = vec![Mat::zeros(f, q[tv], q[s]); order];
            for (k, ck) in coeffs.iter_mut().enumerate() {
                for i in 0..q[tv] {
                    for j in 0..q[s] {
                        ck.set(i, j, coords.get(k * q[tv] + i, j).clone());
                    }
                }
            }
            matrices.push(PolyMat::from_coeffs(coeffs));
        }
        let lift = Lift {
            base: ArtinBase::truncated(order),
            target: quotient.clone(),
            matrices,
            reduction: Morphism::identity(&quotient),
        };
        Ok(lift)
    }

    pub fn order(&self) -> usize {
        self.base.order
    }

    /// Same matrices over a different base (truncated or zero-padded).
    pub fn with_order(&self, order: usize) -> Lift {
        Lift {
            base: ArtinBase::truncated(order),
            target: self.target.clone(),
            matrices: self.matrices.iter().map(|m| m.with_order(order)).collect(),
            reduction: self.reduction.clone(),
        }
    }

    /// Re-expresses the lift so that the reduction becomes the identity.
    pub fn normalized(&self) -> Result<Lift> {
        let inv = self
            .reduction
            .inverse()
            .ok_or_else(|| Error::HypothesisFailed("reduction map is not invertible".into()))?;
        let spec = self.target.algebra().spec();
        let matrices = spec
            .arrows
            .iter()
            .enumerate()
            .map(|(a, arrow)| {
                let phi_t = PolyMat::constant(&self.reduction.maps[arrow.target], self.order());
                let inv_s = PolyMat::constant(&inv.maps[arrow.source], self.order());
                phi_t.mul(&self.matrices[a]).mul(&inv_s)
            })
            .collect();
        Ok(Lift { base: self.base, target: self.target.clone(), matrices, reduction: Morphism::identity(&self.target) })
    }

    /// Moves the lift along an isomorphism `iso: target → new_target`.
    pub fn transport(&self, iso: &Morphism, new_target: &Rep) -> Result<Lift> {
        if !iso.is_intertwiner(&self.target, new_target) || !iso.is_invertible() {
            return Err(Error::HypothesisFailed("transport map is not an isomorphism".into()));
        }
        let reduction = iso.compose(&self.reduction);
        Lift { base: self.base, target: new_target.clone(), matrices: self.matrices.clone(), reduction }.normalized()
    }

    fn path_value(&self, p: &Path) -> PolyMat {
        let f = self.target.field();
        let mut acc = PolyMat::identity(f, self.matrices_dims()[p.source], self.order());
        for a in p.applied() {
            acc = self.matrices[a].mul(&acc);
        }
        acc
    }

    /// Dimension vector of the free module (ranks over the base).
    pub fn matrices_dims(&self) -> Vec<usize> {
        let spec = self.target.algebra().spec();
        let mut dims = vec![0; spec.num_vertices()];
        for (v, d) in dims.iter_mut().enumerate() {
            *d = self.reduction.maps[v].cols();
        }
        for (a, arrow) in spec.arrows.iter().enumerate() {
            let (r, c) = self.matrices[a].shape();
            dims[arrow.target] = r;
            dims[arrow.source] = c;
        }
        dims
    }

    /// Relation values over the base, one per relation.
    pub fn relation_values(&self) -> Vec<PolyMat> {
        let f = self.target.field();
        let spec = self.target.algebra().spec();
        let dims = self.matrices_dims();
        spec.relations
            .iter()
            .map(|r| {
                let first = &r.terms[0].1;
                let mut acc = PolyMat::constant(&Mat::zeros(f, dims[first.target], dims[first.source]), self.order());
                for (c, p) in &r.terms {
                    acc = acc.add(&self.path_value(p).scale(c));
                }
                acc
            })
            .collect()
    }

    /// Relation and reduction violations; shape problems are errors.
    pub fn check(&self) -> Result<Vec<String>> {
        let spec = self.target.algebra().spec();
        if self.matrices.len() != spec.num_arrows() || self.reduction.maps.len() != spec.num_vertices() {
            return Err(Error::ShapeMismatch("lift data does not match the quiver".into()));
        }
        let dims = self.target.dims();
        for (a, arrow) in spec.arrows.iter().enumerate() {
            let m = &self.matrices[a];
            if m.order() != self.order() {
                return Err(Error::BaseMismatch(format!("arrow `{}` has {} coefficients", arrow.name, m.order())));
            }
            if m.shape() != (dims[arrow.target], dims[arrow.source]) {
                return Err(Error::ShapeMismatch(format!("arrow `{}` matrix has the wrong shape", arrow.name)));
            }
        }
        let mut out = Vec::new();
        for (r, value) in spec.relations.iter().zip(self.relation_values()) {
            if let Some(j) = value.valuation() {
                let names: Vec<&str> = r.terms[0].1.arrows.iter().map(|&a| spec.arrows[a].name.as_str()).collect();
                let lead = if r.terms.len() == 1 { names.join("·") } else { format!("{} (+ more terms)", names.join("·")) };
                out.push(format!("relation {lead} is nonzero at t^{j}"));
            }
        }
        let reduced = Rep::new(
            self.target.algebra(),
            dims.to_vec(),
            self.matrices.iter().map(|m| m.coeff(0).clone()).collect(),
        )?;
        if !self.reduction.is_intertwiner(&reduced, &self.target) || !self.reduction.is_invertible() {
            out.push("reduction is not an isomorphism onto the target".into());
        }
        Ok(out)
    }

    /// The constant-term representation.
    pub fn reduction_rep(&self) -> Rep {
        Rep::new(
            self.target.algebra(),
            self.target.dims().to_vec(),
            self.matrices.iter().map(|m| m.coeff(0).clone()).collect(),
        )
        .expect("shapes match the target")
    }

    /// Coefficient of `t^j` of every arrow matrix.
    pub fn level(&self, j: usize) -> Vec<Mat> {
        self.matrices.iter().map(|m| m.coeff(j).clone()).collect()
    }
}

/// Flattens per-arrow matrices into one coordinate vector.
fn flatten_mats(ms: &[Mat]) -> Vec<Scalar> {
    ms.iter().flat_map(|m| m.entries().iter().cloned()).collect()
}

fn unflatten_mats(m: &Rep, coords: &[Scalar]) -> Vec<Mat> {
    let spec = m.algebra().spec();
    let f = m.field();
    let mut pos = 0;
    spec.arrows
        .iter()
        .map(|arrow| {
            let (r, c) = (m.dims()[arrow.target], m.dims()[arrow.source]);
            let data = coords[pos..pos + r * c].to_vec();
            pos += r * c;
            Mat::from_flat(f, r, c, data).expect("sizes agree")
        })
        .collect()
}

/// The derivative of every relation at `m`: maps arrow perturbations `δ` to
/// the `t`-linear part of the relations at `ρ + tδ`.
pub fn linearized_operator(m: &Rep) -> Mat {
    let spec = m.algebra().spec();
    let f = m.field();
    let dims = m.dims();
    let mut col_off = Vec::with_capacity(spec.num_arrows());
    let mut ncols = 0;
    for arrow in &spec.arrows {
        col_off.push(ncols);
        ncols += dims[arrow.target] * dims[arrow.source];
    }
    let mut row_blocks: Vec<Mat> = Vec::new();
    for r in &spec.relations {
        let first = &r.terms[0].1;
        let (rr, rc) = (dims[first.target], dims[first.source]);
        let mut block = Mat::zeros(f, rr * rc, ncols);
        for (coeff, p) in &r.terms {
            let arrows = &p.arrows;
            for i in 0..arrows.len() {
                // left = product of arrows[0..i], right = product of arrows[i+1..].
                let a = arrows[i];
                let left_path = Path {
                    source: spec.arrows[a].target,
                    target: p.target,
                    arrows: arrows[..i].to_vec(),
                };
                let right_path = Path {
                    source: p.source,
                    target: spec.arrows[a].source,
                    arrows: arrows[i + 1..].to_vec(),
                };
                let left = m.path_action(&left_path).scale(coeff);
                let right = m.path_action(&right_path);
                let (dr, dc) = (dims[spec.arrows[a].target], dims[spec.arrows[a].source]);
                for x in 0..dr {
                    for y in 0..dc {
                        let col = col_off[a] + x * dc + y;
                        for row_r in 0..rr {
                            let l = left.get(row_r, x);
                            if l.is_zero() {
                                continue;
                            }
                            for row_c in 0..rc {
                                let rv = right.get(y, row_c);
                                if rv.is_zero() {
                                    continue;
                                }
                                let cur = block.get(row_r * rc + row_c, col).clone();
                                block.set(row_r * rc + row_c, col, &cur + &(l * rv));
                            }
                        }
                    }
                }
            }
        }
        row_blocks.push(block);
    }
    row_blocks.into_iter().fold(Mat::zeros(f, 0, ncols), |acc, b| acc.vstack(&b))
}

/// First-order deformations: cocycles modulo coboundaries.
#[derive(Clone, Debug)]
pub struct FirstOrderSpace {
    pub module: Rep,
    /// Basis of the cocycles, one matrix per arrow.
    pub cocycles: Vec<Vec<Mat>>,
    /// Basis of the coboundaries `δ_a = h_{t(a)} ρ_a − ρ_a h_{s(a)}`.
    pub coboundaries: Vec<Vec<Mat>>,
    pub ext1_dim: usize,
    operator: Mat,
    cocycle_space: Subspace,
    coboundary_space: Subspace,
}

impl FirstOrderSpace {
    pub fn operator(&self) -> &Mat {
        &self.operator
    }

    pub fn is_cocycle(&self, delta: &[Mat]) -> bool {
        self.cocycle_space.contains(&flatten_mats(delta))
    }

    pub fn is_coboundary(&self, delta: &[Mat]) -> bool {
        self.coboundary_space.contains(&flatten_mats(delta))
    }

    /// Cocycles whose classes form a basis of `Ext¹(m, m)`.
    pub fn class_representatives(&self) -> Vec<Vec<Mat>> {
        let mut span = self.coboundary_space.clone();
        let mut out = Vec::new();
        for c in &self.cocycles {
            let v = flatten_mats(c);
            if !span.contains(&v) {
                let mut basis = span.basis().to_vec();
                basis.push(v);
                span = Subspace::span(self.module.field(), span.ambient(), &basis);
                out.push(c.clone());
            }
        }
        out
    }

    /// The coboundary of `h`.
    pub fn coboundary(&self, h: &[Mat]) -> Vec<Mat> {
        coboundary_of(&self.module, h)
    }
}

fn coboundary_of(m: &Rep, h: &[Mat]) -> Vec<Mat> {
    m.algebra()
        .spec()
        .arrows
        .iter()
        .enumerate()
        .map(|(a, arrow)| h[arrow.target].mul(m.action(a)).sub(&m.action(a).mul(&h[arrow.source])))
        .collect()
}

/// Tangent space of the deformation functor; cross-checked against `Ext¹(m, m)`.
pub fn first_order_space(m: &Rep) -> Result<FirstOrderSpace> {
    let f = m.field();
    let operator = linearized_operator(m);
    let ncols = operator.cols();
    let kernel = if operator.rows() == 0 {
        Mat::identity(f, ncols)
    } else {
        operator.kernel_basis()
    };
    let cocycle_space = Subspace::span(f, ncols, &kernel.columns());
    let mut cob = Vec::new();
    for (v, &d) in m.dims().iter().enumerate() {
        for i in 0..d {
            for j in 0..d {
                let mut h: Vec<Mat> = m.dims().iter().map(|&e| Mat::zeros(f, e, e)).collect();
                h[v].set(i, j, f.one());
                cob.push(flatten_mats(&coboundary_of(m, &h)));
            }
        }
    }
    let coboundary_space = Subspace::span(f, ncols, &cob);
    if !coboundary_space.is_subspace_of(&cocycle_space) {
        return Err(Error::Internal("a coboundary fails the linearized relations".into()));
    }
    let ext1_dim = cocycle_space.dim() - coboundary_space.dim();
    let presented = homalg::ext(m, m, 1).dim;
    if presented != ext1_dim {
        return Err(Error::Internal(format!(
            "first-order tangent dimension {ext1_dim} disagrees with Ext^1 = {presented}"
        )));
    }
    Ok(FirstOrderSpace {
        module: m.clone(),
        cocycles: cocycle_space.basis().iter().map(|v| unflatten_mats(m, v)).collect(),
        coboundaries: coboundary_space.basis().iter().map(|v| unflatten_mats(m, v)).collect(),
        ext1_dim,
        operator,
        cocycle_space,
        coboundary_space,
    })
}

/// Rank data proving that an obstruction vector is outside the image of the
/// linearized operator.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankEvidence {
    pub operator_rank: usize,
    pub augmented_rank: usize,
    pub unknowns: usize,
}

#[derive(Clone, Debug)]
pub struct ObstructionCertificate {
    /// Order of the base the lift failed to reach.
    pub level: usize,
    /// `t^{level-1}` coefficient of the relations on the zero-padded lift.
    pub obstruction: Vec<Scalar>,
    pub evidence: RankEvidence,
}

#[derive(Clone, Debug)]
pub enum Extension {
    /// Particular extension; every other differs by a cocycle at the new level.
    Extended { lift: Lift, cocycle_dim: usize, evidence: RankEvidence },
    Obstructed(ObstructionCertificate),
}

/// Obstruction vector of the zero-padded extension of `lift` to order `n+1`.
pub fn obstruction_vector(lift: &Lift) -> Vec<Scalar> {
    let padded = lift.with_order(lift.order() + 1);
    let n = lift.order();
    padded.relation_values().iter().flat_map(|v| v.coeff(n).entries().to_vec()).collect()
}

/// Extends a lift over `k[t]/(t^n)` to `k[t]/(t^{n+1})` or certifies that no
/// extension exists.
pub fn extend_lift(lift: &Lift) -> Result<Extension> {
    let lift = lift.normalized()?;
    let problems = lift.check()?;
    if !problems.is_empty() {
        return Err(Error::InvalidSpec(problems));
    }
    let m = &lift.target;
    let op = linearized_operator(m);
    extend_with_operator(&lift, &op)
}

fn extend_with_operator(lift: &Lift, op: &Mat) -> Result<Extension> {
    let m = &lift.target;
    let f = m.field();
    let n = lift.order();
    let obs = obstruction_vector(lift);
    let rhs: Vec<Scalar> = obs.iter().map(|s| -s).collect();
    let operator_rank = op.rank();
    let unknowns = op.cols();
    let solution = solve_affine(op, &Mat::column(f, rhs.clone()))?;
    match solution {
        None => Ok(Extension::Obstructed(ObstructionCertificate {
            level: n + 1,
            obstruction: obs,
            evidence: RankEvidence { operator_rank, augmented_rank: operator_rank + 1, unknowns },
        })),
        Some(sol) => {
            let delta = unflatten_mats(m, &sol.particular.col(0));
            let mut ext = lift.with_order(n + 1);
            for (pm, d) in ext.matrices.iter_mut().zip(delta) {
                let mut coeffs = pm.coeffs().to_vec();
                coeffs[n] = d;
                *pm = PolyMat::from_coeffs(coeffs);
            }
            Ok(Extension::Extended {
                lift: ext,
                cocycle_dim: sol.homogeneous.cols(),
                evidence: RankEvidence { operator_rank, augmented_rank: operator_rank, unknowns },
            })
        }
    }
}

/// Outcome of a lift comparison.
#[derive(Clone, Debug)]
pub enum LiftIso {
    /// Witness: coefficients `F_0, F_1, …` of an isomorphism over the base.
    Yes(Vec<Morphism>),
    No(String),
    Inconclusive(String),
}

impl LiftIso {
    pub fn is_yes(&self) -> bool {
        matches!(self, LiftIso::Yes(_))
    }

    pub fn is_no(&self) -> bool {
        matches!(self, LiftIso::No(_))
    }
}

/// Linear system for `F(t) A1(t) = A2(t) F(t)` with unknowns `F_0, …, F_{n-1}`.
struct IntertwinerSystem {
    matrix: Mat,
    /// Column offset of `F_k`.
    level_cols: usize,
    dims1: Vec<usize>,
    dims2: Vec<usize>,
}

fn intertwiner_system(l1: &Lift, l2: &Lift) -> IntertwinerSystem {
    let spec = l1.target.algebra().spec();
    let f = l1.target.field();
    let n = l1.order();
    let (d1, d2) = (l1.target.dims().to_vec(), l2.target.dims().to_vec());
    let mut voff = Vec::new();
    let mut per_level = 0;
    for v in 0..d1.len() {
        voff.push(per_level);
        per_level += d2[v] * d1[v];
    }
    let col = |k: usize, v: usize, i: usize, l: usize| k * per_level + voff[v] + i * d1[v] + l;
    let mut rows: Vec<Vec<Scalar>> = Vec::new();
    for j in 0..n {
        for (a, arrow) in spec.arrows.iter().enumerate() {
            let (s, t) = (arrow.source, arrow.target);
            for r in 0..d2[t] {
                for c in 0..d1[s] {
                    let mut row = vec![f.zero(); n * per_level];
                    let mut nonzero = false;
                    for k in 0..=j {
                        let a1 = l1.matrices[a].coeff(j - k);
                        let a2 = l2.matrices[a].coeff(j - k);
                        // (F_{t,k} A1)[r][c] = Σ_x F_{t,k}[r][x] A1[x][c]
                        for x in 0..d1[t] {
                            let e = a1.get(x, c);
                            if !e.is_zero() {
                                row[col(k, t, r, x)] += e;
                                nonzero = true;
                            }
                        }
                        // (A2 F_{s,k})[r][c] = Σ_x A2[r][x] F_{s,k}[x][c]
                        for x in 0..d2[s] {
                            let e = a2.get(r, x);
                            if !e.is_zero() {
                                row[col(k, s, x, c)] -= e;
                                nonzero = true;
                            }
                        }
                    }
                    if nonzero {
                        rows.push(row);
                    }
                }
            }
        }
    }
    let ncols = n * per_level;
    let matrix = if rows.is_empty() { Mat::zeros(f, 0, ncols) } else { Mat::from_rows(f, rows).expect("one field") };
    IntertwinerSystem { matrix, level_cols: per_level, dims1: d1, dims2: d2 }
}

impl IntertwinerSystem {
    fn morphisms(&self, f: Field, x: &[Scalar], levels: usize) -> Vec<Morphism> {
        (0..levels)
            .map(|k| {
                Morphism::unflatten(f, &self.dims1, &self.dims2, &x[k * self.level_cols..(k + 1) * self.level_cols])
            })
            .collect()
    }
}

fn product_of_dets(maps: &[Mat]) -> Scalar {
    let f = maps[0].field();
    maps.iter().filter(|m| m.rows() > 0).fold(f.one(), |acc, m| &acc * &m.determinant())
}

/// Decides whether two lifts over the same base are isomorphic, either as
/// deformations (`respect_reduction`) or as weak deformations.
pub fn lifts_isomorphic(l1: &Lift, l2: &Lift, respect_reduction: bool, seed: u64) -> Result<LiftIso> {
    if l1.base != l2.base {
        return Err(Error::BaseMismatch(format!("{} vs {}", l1.base, l2.base)));
    }
    if l1.target != l2.target {
        return Err(Error::HypothesisFailed("lifts of different target modules".into()));
    }
    let (l1, l2) = (l1.normalized()?, l2.normalized()?);
    let f = l1.target.field();
    let n = l1.order();
    let sys = intertwiner_system(&l1, &l2);
    if respect_reduction {
        // F_0 = identity; solve for F_1, …, F_{n-1}.
        let id: Vec<Scalar> = Morphism::identity(&l1.target).flatten();
        let lc = sys.level_cols;
        let fixed_cols: Vec<usize> = (0..lc).collect();
        let free_cols: Vec<usize> = (lc..n * lc).collect();
        let all_rows: Vec<usize> = (0..sys.matrix.rows()).collect();
        let a0 = sys.matrix.submatrix(&all_rows, &fixed_cols);
        let rest = sys.matrix.submatrix(&all_rows, &free_cols);
        let rhs: Vec<Scalar> = a0.mul_vec(&id).into_iter().map(|s| -s).collect();
        if rest.cols() == 0 {
            return Ok(if rhs.iter().all(Scalar::is_zero) {
                LiftIso::Yes(vec![Morphism::identity(&l1.target)])
            } else {
                LiftIso::No("the identity does not intertwine".into())
            });
        }
        return Ok(match solve_affine(&rest, &Mat::column(f, rhs))? {
            Some(sol) => {
                let mut x = id;
                x.extend(sol.particular.col(0));
                LiftIso::Yes(sys.morphisms(f, &x, n))
            }
            None => LiftIso::No("no isomorphism reduces to the identity (inconsistent system)".into()),
        });
    }
    let kernel = if sys.matrix.rows() == 0 { Mat::identity(f, sys.matrix.cols()) } else { sys.matrix.kernel_basis() };
    let sols = kernel.columns();
    if sols.is_empty() {
        return Ok(LiftIso::No("no homomorphisms between the lifts".into()));
    }
    let lc = sys.level_cols;
    // Keep solutions whose constant parts are independent.
    let mut chosen: Vec<Vec<Scalar>> = Vec::new();
    let mut span = Subspace::zero(f, lc);
    for s in &sols {
        let head = s[..lc].to_vec();
        if !span.contains(&head) {
            let mut b = span.basis().to_vec();
            b.push(head);
            span = Subspace::span(f, lc, &b);
            chosen.push(s.clone());
        }
    }
    if chosen.is_empty() {
        return Ok(LiftIso::No("every homomorphism vanishes modulo t".into()));
    }
    let combine = |coeffs: &[Scalar]| -> Vec<Scalar> {
        let mut acc = vec![f.zero(); sys.matrix.cols()];
        for (c, s) in coeffs.iter().zip(&chosen) {
            if c.is_zero() {
                continue;
            }
            for (a, b) in acc.iter_mut().zip(s) {
                *a += &(c * b);
            }
        }
        acc
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..WEAK_ISO_SAMPLES {
        let coeffs: Vec<Scalar> = (0..chosen.len()).map(|_| f.random(&mut rng)).collect();
        let x = combine(&coeffs);
        let fs = sys.morphisms(f, &x, n);
        if fs[0].is_invertible() {
            return Ok(LiftIso::Yes(fs));
        }
    }
    // The product of the vertex determinants of F_0 is a polynomial of degree
    // at most D in the parameters; vanishing on a grid with more than D points
    // per axis proves it is identically zero.
    let degree: usize = l1.target.dims().iter().sum();
    let r = chosen.len();
    let axis: Vec<Scalar> = match f.size() {
        Some(p) if (p as usize) <= degree => (0..p as i64).map(|i| f.from_i64(i)).collect(),
        _ => (0..=degree as i64).map(|i| f.from_i64(i)).collect(),
    };
    let total = (axis.len() as f64).powi(r as i32);
    if total > WEAK_ISO_GRID_BUDGET as f64 {
        return Ok(LiftIso::Inconclusive(format!(
            "determinant grid of {} points exceeds the budget of {WEAK_ISO_GRID_BUDGET}",
            total
        )));
    }
    let mut idx = vec![0usize; r];
    loop {
        let coeffs: Vec<Scalar> = idx.iter().map(|&i| axis[i].clone()).collect();
        let x = combine(&coeffs);
        let fs = sys.morphisms(f, &x, n);
        if !product_of_dets(&fs[0].maps).is_zero() {
            return Ok(LiftIso::Yes(fs));
        }
        let mut k = 0;
        while k < r {
            idx[k] += 1;
            if idx[k] < axis.len() {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
        if k == r {
            break;
        }
    }
    Ok(LiftIso::No("the determinant of every homomorphism vanishes modulo t".into()))
}

/// Lifts `v0: target(L_M) → target(L_Q)` to a homomorphism over the base.
/// Prepared once per pair of lifts.
pub struct HomLifter {
    lm: Lift,
    lq: Lift,
    system: PreparedSystem,
    fixed: Mat,
    level_cols: usize,
    dims_m: Vec<usize>,
    dims_q: Vec<usize>,
}

/// A homomorphism over `k[t]/(t^n)` given by coefficients `v_0, v_1, …`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LiftedHom {
    pub coeffs: Vec<Morphism>,
}

impl LiftedHom {
    pub fn reduction(&self) -> &Morphism {
        &self.coeffs[0]
    }

    /// Checks `v(t) A_M(t) = A_Q(t) v(t)` modulo `t^n`.
    pub fn is_homomorphism(&self, lm: &Lift, lq: &Lift) -> bool {
        let spec = lm.target.algebra().spec();
        let n = lm.order();
        let per_vertex = |v: usize| -> PolyMat {
            PolyMat::from_coeffs(self.coeffs.iter().map(|c| c.maps[v].clone()).collect()).with_order(n)
        };
        spec.arrows.iter().enumerate().all(|(a, arrow)| {
            per_vertex(arrow.target).mul(&lm.matrices[a]) == lq.matrices[a].mul(&per_vertex(arrow.source))
        })
    }
}

impl HomLifter {
    /// Checks the hypotheses: the reduction of `lm` is Gorenstein-projective and
    /// `lq` lifts a projective module over the same base.
    pub fn new(lm: &Lift, lq: &Lift) -> Result<HomLifter> {
        if lm.base != lq.base {
            return Err(Error::BaseMismatch(format!("{} vs {}", lm.base, lq.base)));
        }
        let (lm, lq) = (lm.normalized()?, lq.normalized()?);
        let bound = homalg::default_reflexivity_bound(lm.target.algebra());
        match homalg::is_gorenstein_projective(&lm.target, bound) {
            Verdict::True => {}
            Verdict::False(why) => {
                return Err(Error::HypothesisFailed(format!("reduction is not Gorenstein-projective: {why}")))
            }
            Verdict::Unknown(why) => {
                return Err(Error::HypothesisFailed(format!("Gorenstein-projectivity not established: {why}")))
            }
        }
        if !homalg::is_projective(&lq.target) {
            return Err(Error::HypothesisFailed("second lift does not lift a projective module".into()));
        }
        let sys = intertwiner_system(&lm, &lq);
        let n = lm.order();
        let lc = sys.level_cols;
        let all_rows: Vec<usize> = (0..sys.matrix.rows()).collect();
        let fixed = sys.matrix.submatrix(&all_rows, &(0..lc).collect::<Vec<_>>());
        let free = sys.matrix.submatrix(&all_rows, &(lc..n * lc).collect::<Vec<_>>());
        Ok(HomLifter {
            system: PreparedSystem::new(&free),
            fixed,
            level_cols: lc,
            dims_m: sys.dims1,
            dims_q: sys.dims2,
            lm,
            lq,
        })
    }

    pub fn lift(&self, v0: &Morphism) -> Result<LiftedHom> {
        if !v0.is_intertwiner(&self.lm.target, &self.lq.target) {
            return Err(Error::HypothesisFailed("v0 is not a homomorphism between the reductions".into()));
        }
        let f = self.lm.target.field();
        let x0 = v0.flatten();
        let rhs: Vec<Scalar> = self.fixed.mul_vec(&x0).into_iter().map(|s| -s).collect();
        let sol = self
            .system
            .solve(&rhs)
            .ok_or_else(|| Error::Internal("homomorphism failed to lift despite the Gorenstein-projective hypothesis".into()))?;
        let n = self.lm.order();
        let mut coeffs = vec![v0.clone()];
        for k in 1..n {
            let part = &sol[(k - 1) * self.level_cols..k * self.level_cols];
            coeffs.push(Morphism::unflatten(f, &self.dims_m, &self.dims_q, part));
        }
        Ok(LiftedHom { coeffs })
    }

    pub fn source(&self) -> &Lift {
        &self.lm
    }

    pub fn target(&self) -> &Lift {
        &self.lq
    }
}

/// One-shot version of [`HomLifter`].
pub fn lift_hom(v0: &Morphism, lm: &Lift, lq: &Lift) -> Result<LiftedHom> {
    HomLifter::new(lm, lq)?.lift(v0)
}

/// Classification of the versal deformation ring.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Ring {
    /// The residue field.
    K,
    /// `k[[t]]/(t^N)`.
    Truncated {
        #[serde(rename = "N")]
        n: usize,
    },
    /// Lifts exist over `k[t]/(t^bound)`; no obstruction found yet.
    PowerSeriesUpToBound { bound: usize },
    /// A quotient of a power series ring in `num_vars` variables, not determined.
    PowerSeriesQuotient { num_vars: usize },
}

impl fmt::Display for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ring::K => write!(f, "k"),
            Ring::Truncated { n } => write!(f, "k[[t]]/(t^{n})"),
            Ring::PowerSeriesUpToBound { bound } => write!(f, "k[[t]] up to t^{bound}"),
            Ring::PowerSeriesQuotient { num_vars } => {
                write!(f, "quotient of k[[t1..t{num_vars}]] (undetermined)")
            }
        }
    }
}

/// One level of the obstruction calculus.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelRecord {
    /// Order of the base being reached.
    pub level: usize,
    /// "extended" or "obstructed".
    pub status: String,
    pub rank_evidence: RankEvidence,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VersalReport {
    pub module: String,
    pub dims: Vec<usize>,
    pub gp: Option<bool>,
    pub projective: bool,
    pub end_dim: usize,
    pub stable_end_dim: usize,
    pub ext1_dim: usize,
    pub ring: Ring,
    pub universal: bool,
    pub justification: String,
    pub field: String,
    pub obstruction_log: Vec<LevelRecord>,
    pub seed: u64,
    pub level_bound: usize,
    pub version: String,
    pub assumptions: Vec<String>,
}

impl VersalReport {
    pub fn with_module(mut self, label: impl Into<String>) -> VersalReport {
        self.module = label.into();
        self
    }
}

fn assumptions() -> Vec<String> {
    vec![
        "lifts are matrix-form modules with a fixed dimension vector, free over the base".into(),
        "results hold over the recorded working field; algebraic closure is not used".into(),
        "at tangent dimension 1 the first-order class is scaled to 1 and free parameters at later levels are absorbed by t -> t + c t^n and gauge transformations".into(),
    ]
}

/// Tangent dimension, ring classification, and universality for `m`.
pub fn versal_report(m: &Rep, level_bound: usize, seed: u64) -> Result<VersalReport> {
    if level_bound < 2 {
        return Err(Error::HypothesisFailed("level bound must be at least 2".into()));
    }
    if m.is_zero() {
        return Ok(VersalReport {
            module: String::new(),
            dims: m.dims().to_vec(),
            gp: Some(true),
            projective: true,
            end_dim: 0,
            stable_end_dim: 0,
            ext1_dim: 0,
            ring: Ring::K,
            universal: true,
            justification: "projective".into(),
            field: m.field().to_string(),
            obstruction_log: Vec::new(),
            seed,
            level_bound,
            version: crate::VERSION.into(),
            assumptions: assumptions(),
        });
    }
    let alg = m.algebra();
    let projective = homalg::is_projective(m);
    let bound = homalg::default_reflexivity_bound(alg);
    let gp = if projective { Some(true) } else { homalg::is_gorenstein_projective(m, bound).as_bool() };
    let end_dim = homalg::hom_basis(m, m).dim();
    let stable_end_dim = homalg::stable_hom(m, m).quotient_dim;
    let first = first_order_space(m)?;
    let mut log = Vec::new();
    let ring = match first.ext1_dim {
        0 => Ring::K,
        1 => {
            let delta = first.class_representatives().remove(0);
            let mut lift = Lift::first_order(m, &delta);
            let op = first.operator().clone();
            let mut ring = Ring::PowerSeriesUpToBound { bound: level_bound };
            for n in 2..level_bound {
                match extend_with_operator(&lift, &op)? {
                    Extension::Extended { lift: next, evidence, .. } => {
                        log.push(LevelRecord { level: n + 1, status: "extended".into(), rank_evidence: evidence });
                        lift = next;
                    }
                    Extension::Obstructed(cert) => {
                        log.push(LevelRecord {
                            level: cert.level,
                            status: "obstructed".into(),
                            rank_evidence: cert.evidence,
                        });
                        ring = Ring::Truncated { n };
                        break;
                    }
                }
            }
            ring
        }
        r => Ring::PowerSeriesQuotient { num_vars: r },
    };
    let (universal, justification) = if projective {
        (true, "projective")
    } else if gp == Some(true) && stable_end_dim == 1 {
        (true, "Thm-GP-stableEnd")
    } else if end_dim == 1 {
        (true, "End=k")
    } else {
        (false, "none")
    };
    Ok(VersalReport {
        module: String::new(),
        dims: m.dims().to_vec(),
        gp,
        projective,
        end_dim,
        stable_end_dim,
        ext1_dim: first.ext1_dim,
        ring,
        universal,
        justification: justification.into(),
        field: m.field().to_string(),
        obstruction_log: log,
        seed,
        level_bound,
        version: crate::VERSION.into(),
        assumptions: assumptions(),
    })
}

/// Reports for `m` and for `Ω m` (projective summands removed) under identical settings.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SyzygyComparison {
    pub module: VersalReport,
    pub syzygy: VersalReport,
    /// Vertices of projective summands removed from `Ω m`.
    pub stripped: Vec<String>,
    pub rings_match: bool,
}

pub fn syzygy_compare(m: &Rep, level_bound: usize, seed: u64) -> Result<SyzygyComparison> {
    let module = versal_report(m, level_bound, seed)?;
    let omega = homalg::syzygy(m, 1)?;
    let (stripped, removed) = homalg::strip_projective_summands(&omega);
    let names = removed.iter().map(|&v| m.algebra().spec().vertices[v].clone()).collect();
    let syzygy = versal_report(&stripped, level_bound, seed)?;
    let rings_match = module.ring == syzygy.ring;
    Ok(SyzygyComparison { module, syzygy, stripped: names, rings_match })
}
