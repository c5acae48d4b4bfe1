//! Homological algebra over a fixed algebra.

use std::fmt;
use std::sync::Arc;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::algebra::Algebra;
use crate::error::{Error, Result};
use crate::exactla::{Mat, Scalar, Subspace};
use crate::rep::{IsoResult, Morphism, Rep};

/// Seed used by internal isomorphism tests (periodicity, reflexivity).
const INTERNAL_SEED: u64 = 0x5eed;

/// A basis of `Hom(source, target)`, canonical (RREF in flattened coordinates).
#[derive(Clone, Debug)]
pub struct HomBasis {
    pub source: Rep,
    pub target: Rep,
    pub basis: Vec<Morphism>,
    space: Subspace,
}

impl HomBasis {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// The flattened span of the basis.
    pub fn space(&self) -> &Subspace {
        &self.space
    }

    pub fn element(&self, coeffs: &[Scalar]) -> Morphism {
        let f = self.source.field();
        let mut acc = Morphism::zero(f, self.source.dims(), self.target.dims());
        for (c, b) in coeffs.iter().zip(&self.basis) {
            if !c.is_zero() {
                acc = acc.add(&b.scale(c));
            }
        }
        acc
    }

    /// Coordinates of a morphism in this basis, if it is a homomorphism.
    pub fn coordinates(&self, f: &Morphism) -> Option<Vec<Scalar>> {
        self.space.coordinates(&f.flatten())
    }

    /// A random combination: entries in [-3,3] over Q, uniform over F_p.
    pub fn random_element<R: Rng + ?Sized>(&self, rng: &mut R) -> Morphism {
        let field = self.source.field();
        let coeffs: Vec<Scalar> = (0..self.dim()).map(|_| field.random(rng)).collect();
        self.element(&coeffs)
    }
}

/// Basis of all module homomorphisms `m → n`, from the stacked intertwiner system.
pub fn hom_basis(m: &Rep, n: &Rep) -> HomBasis {
    assert!(**m.algebra() == **n.algebra(), "Hom between modules over different algebras");
    let f = m.field();
    let spec = m.algebra().spec();
    let (md, nd) = (m.dims(), n.dims());
    let mut offs = Vec::with_capacity(md.len());
    let mut unknowns = 0;
    for v in 0..md.len() {
        offs.push(unknowns);
        unknowns += md[v] * nd[v];
    }
    let idx = |v: usize, i: usize, k: usize| offs[v] + i * md[v] + k;
    let mut rows: Vec<Vec<Scalar>> = Vec::new();
    for (a, arrow) in spec.arrows.iter().enumerate() {
        let (s, t) = (arrow.source, arrow.target);
        let (ma, na) = (m.action(a), n.action(a));
        for i in 0..nd[t] {
            for j in 0..md[s] {
                let mut row = vec![f.zero(); unknowns];
                let mut nonzero = false;
                for k in 0..md[t] {
                    let c = ma.get(k, j);
                    if !c.is_zero() {
                        row[idx(t, i, k)] += c;
                        nonzero = true;
                    }
                }
                for k in 0..nd[s] {
                    let c = na.get(i, k);
                    if !c.is_zero() {
                        row[idx(s, k, j)] -= c;
                        nonzero = true;
                    }
                }
                if nonzero {
                    rows.push(row);
                }
            }
        }
    }
    let kernel_vectors: Vec<Vec<Scalar>> = if rows.is_empty() {
        (0..unknowns)
            .map(|j| {
                let mut e = vec![f.zero(); unknowns];
                e[j] = f.one();
                e
            })
            .collect()
    } else {
        Mat::from_rows(f, rows).expect("rows share the field").kernel_basis().columns()
    };
    let space = Subspace::span(f, unknowns, &kernel_vectors);
    let basis = space.basis().iter().map(|v| Morphism::unflatten(f, md, nd, v)).collect();
    HomBasis { source: m.clone(), target: n.clone(), basis, space }
}

/// A projective cover `π: P → m` with `P = ⊕_k P_{vertices[k]}`.
#[derive(Clone, Debug)]
pub struct ProjectiveCover {
    pub projective: Rep,
    pub pi: Morphism,
    /// Vertex of each indecomposable summand, in order.
    pub vertices: Vec<usize>,
    /// Top generator of `m` hit by the idempotent of each summand.
    pub generators: Vec<Vec<Scalar>>,
}

impl ProjectiveCover {
    /// Position of the `j`-th basis path at vertex `w` of summand `k` inside `P_w`.
    fn summand_offsets(&self, alg: &Algebra) -> Vec<Vec<usize>> {
        let nv = alg.num_vertices();
        let mut acc = vec![0; nv];
        let mut out = Vec::with_capacity(self.vertices.len());
        for &v in &self.vertices {
            out.push(acc.clone());
            for (w, g) in alg.paths_from(v).iter().enumerate() {
                acc[w] += g.len();
            }
        }
        out
    }

    /// Homomorphism `P → n` sending the generator of summand `k` to `images[k] ∈ n_{vertices[k]}`.
    pub fn map_from_generators(&self, n: &Rep, images: &[Vec<Scalar>]) -> Morphism {
        let alg = n.algebra();
        let f = n.field();
        let pd = self.projective.dims();
        let mut maps: Vec<Mat> = (0..pd.len()).map(|w| Mat::zeros(f, n.dims()[w], pd[w])).collect();
        let offs = self.summand_offsets(alg);
        for (k, &v) in self.vertices.iter().enumerate() {
            for (w, group) in alg.paths_from(v).iter().enumerate() {
                for (j, &p) in group.iter().enumerate() {
                    let col = n.path_action(&alg.basis()[p]).mul_vec(&images[k]);
                    for (r, c) in col.into_iter().enumerate() {
                        maps[w].set(r, offs[k][w] + j, c);
                    }
                }
            }
        }
        Morphism { maps }
    }
}

/// Direct sum of indecomposable projectives at the given vertices.
pub fn projective_sum(alg: &Arc<Algebra>, vertices: &[usize]) -> Rep {
    vertices
        .iter()
        .fold(Rep::zero(alg), |acc, &v| acc.direct_sum(&Rep::projective(alg, v)).expect("same algebra"))
}

/// Minimal projective cover, generated by a basis of a complement of the radical.
pub fn projective_cover(m: &Rep) -> Result<ProjectiveCover> {
    if m.is_zero() {
        return Err(Error::ZeroModule);
    }
    Ok(cover_unchecked(m))
}

fn cover_unchecked(m: &Rep) -> ProjectiveCover {
    let f = m.field();
    let mut vertices = Vec::new();
    let mut generators = Vec::new();
    for (v, rad) in m.radical_spaces().iter().enumerate() {
        for j in rad.complement_indices() {
            let mut e = vec![f.zero(); m.dims()[v]];
            e[j] = f.one();
            vertices.push(v);
            generators.push(e);
        }
    }
    let projective = projective_sum(m.algebra(), &vertices);
    let mut cover = ProjectiveCover { projective, pi: Morphism { maps: Vec::new() }, vertices, generators };
    cover.pi = cover.map_from_generators(m, &cover.generators);
    cover
}

pub fn is_projective(m: &Rep) -> bool {
    m.is_zero() || cover_unchecked(m).projective.dim() == m.dim()
}

/// `Ω m` with its inclusion into the cover, and the cover itself.
pub fn syzygy_step(m: &Rep) -> (Rep, Morphism, ProjectiveCover) {
    let cover = cover_unchecked(m);
    let (omega, incl) = cover.projective.sub_rep(&cover.pi.kernel());
    (omega, incl, cover)
}

/// `Ω^n m`, without removing projective summands.
pub fn syzygy(m: &Rep, n: usize) -> Result<Rep> {
    if m.is_zero() {
        return Err(Error::ZeroModule);
    }
    let mut cur = m.clone();
    for _ in 0..n {
        if cur.is_zero() {
            break;
        }
        cur = syzygy_step(&cur).0;
    }
    Ok(cur)
}

/// Removes projective direct summands; returns the remaining module and the
/// vertices of the removed summands.
pub fn strip_projective_summands(m: &Rep) -> (Rep, Vec<usize>) {
    let alg = m.algebra().clone();
    let mut cur = m.clone();
    let mut removed = Vec::new();
    'outer: loop {
        for v in 0..alg.num_vertices() {
            if cur.dims()[v] == 0 {
                continue;
            }
            let p = Rep::projective(&alg, v);
            if p.dim() > cur.dim() {
                continue;
            }
            // Hom(P_v, X) = e_v X; g∘f is invertible iff it has an e_v component.
            let homs = hom_basis(&cur, &p);
            for g in &homs.basis {
                if g.maps[v].row(0).iter().any(|s| !s.is_zero()) {
                    let (rest, _) = cur.sub_rep(&g.kernel());
                    cur = rest;
                    removed.push(v);
                    continue 'outer;
                }
            }
        }
        break;
    }
    (cur, removed)
}

/// Dimension of `Ext^i(m, n)` with the data realizing it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtResult {
    pub degree: usize,
    pub dim: usize,
    /// `dim Hom(Ω^i m, n)`.
    pub hom_dim: usize,
    /// Rank of the restriction `Hom(P_{i-1}, n) → Hom(Ω^i m, n)`.
    pub restriction_rank: usize,
}

/// `Ext^i(m, n)` as the cokernel of `Hom(P_{i-1}, n) → Hom(Ω^i m, n)`.
pub fn ext(m: &Rep, n: &Rep, i: usize) -> ExtResult {
    if i == 0 {
        let d = hom_basis(m, n).dim();
        return ExtResult { degree: 0, dim: d, hom_dim: d, restriction_rank: 0 };
    }
    let mut cur = m.clone();
    for _ in 1..i {
        if cur.is_zero() {
            return ExtResult { degree: i, dim: 0, hom_dim: 0, restriction_rank: 0 };
        }
        cur = syzygy_step(&cur).0;
    }
    if cur.is_zero() {
        return ExtResult { degree: i, dim: 0, hom_dim: 0, restriction_rank: 0 };
    }
    let (omega, incl, cover) = syzygy_step(&cur);
    let homs = hom_basis(&omega, n);
    let f = m.field();
    let mut restricted = Vec::new();
    for (k, &v) in cover.vertices.iter().enumerate() {
        for j in 0..n.dims()[v] {
            let images: Vec<Vec<Scalar>> = cover
                .vertices
                .iter()
                .enumerate()
                .map(|(kk, &vv)| {
                    let mut e = vec![f.zero(); n.dims()[vv]];
                    if kk == k {
                        e[j] = f.one();
                    }
                    e
                })
                .collect();
            let g = cover.map_from_generators(n, &images);
            restricted.push(g.compose(&incl).flatten());
        }
    }
    let rank = Subspace::span(f, homs.space().ambient(), &restricted).dim();
    ExtResult { degree: i, dim: homs.dim() - rank, hom_dim: homs.dim(), restriction_rank: rank }
}

/// `Hom(m, n)` modulo maps factoring through a projective.
#[derive(Clone, Debug)]
pub struct StableHom {
    pub ambient: HomBasis,
    /// Flattened span of the maps factoring through the cover of `n`.
    pub projective_factor: Subspace,
    pub quotient_dim: usize,
}

impl StableHom {
    /// Whether a homomorphism factors through a projective.
    pub fn factors_through_projective(&self, f: &Morphism) -> bool {
        self.projective_factor.contains(&f.flatten())
    }
}

pub fn stable_hom(m: &Rep, n: &Rep) -> StableHom {
    let ambient = hom_basis(m, n);
    let f = m.field();
    if n.is_zero() || m.is_zero() {
        let projective_factor = Subspace::zero(f, ambient.space().ambient());
        return StableHom { quotient_dim: ambient.dim(), ambient, projective_factor };
    }
    let cover = cover_unchecked(n);
    let through = hom_basis(m, &cover.projective);
    let images: Vec<Vec<Scalar>> = through.basis.iter().map(|h| cover.pi.compose(h).flatten()).collect();
    let projective_factor = Subspace::span(f, ambient.space().ambient(), &images);
    StableHom { quotient_dim: ambient.dim() - projective_factor.dim(), ambient, projective_factor }
}

/// `Ext^i(m, n)` through `Hom(Ω^i m, n)` modulo projectives; needs `Ext^i(m, Λ) = 0`.
pub fn ext_via_stable(m: &Rep, n: &Rep, i: usize) -> Result<ExtResult> {
    if i == 0 {
        return Ok(ext(m, n, 0));
    }
    let reg = Rep::regular(m.algebra());
    let e = ext(m, &reg, i);
    if e.dim != 0 {
        return Err(Error::HypothesisFailed(format!("Ext^{i}(m, Λ) has dimension {}", e.dim)));
    }
    if m.is_zero() {
        return Ok(ExtResult { degree: i, dim: 0, hom_dim: 0, restriction_rank: 0 });
    }
    let omega = syzygy(m, i)?;
    let s = stable_hom(&omega, n);
    Ok(ExtResult {
        degree: i,
        dim: s.quotient_dim,
        hom_dim: s.ambient.dim(),
        restriction_rank: s.projective_factor.dim(),
    })
}

/// Right multiplication by an arrow `a: s → t` as a map `P_t → P_s`.
fn right_multiplication(alg: &Arc<Algebra>, a: usize) -> Morphism {
    let f = alg.field();
    let arrow = &alg.spec().arrows[a];
    let (from, to) = (alg.paths_from(arrow.target), alg.paths_from(arrow.source));
    let ai = alg.arrow_basis_index(a);
    let maps = (0..alg.num_vertices())
        .map(|w| {
            let mut m = Mat::zeros(f, to[w].len(), from[w].len());
            for (col, &q) in from[w].iter().enumerate() {
                for (k, s) in alg.product_of_basis(q, ai) {
                    let row = to[w].iter().position(|x| x == k).expect("product starts at s(a)");
                    m.set(row, col, s.clone());
                }
            }
            m
        })
        .collect();
    Morphism { maps }
}

/// `Hom(m, Λ)` as a left module over the opposite algebra: the vertex `v`
/// space is `Hom(m, Λe_v)`, and `a^op` acts by postcomposition with `·a`.
pub fn dual_module(m: &Rep) -> Rep {
    let alg = m.algebra();
    let op = alg.opposite();
    let f = m.field();
    let homs: Vec<HomBasis> = (0..alg.num_vertices()).map(|v| hom_basis(m, &Rep::projective(alg, v))).collect();
    let dims: Vec<usize> = homs.iter().map(HomBasis::dim).collect();
    let action = alg
        .spec()
        .arrows
        .iter()
        .enumerate()
        .map(|(a, arrow)| {
            let rho = right_multiplication(alg, a);
            let (s, t) = (arrow.source, arrow.target);
            let mut mat = Mat::zeros(f, dims[s], dims[t]);
            for (col, g) in homs[t].basis.iter().enumerate() {
                let coords = homs[s].coordinates(&rho.compose(g)).expect("postcomposition is a homomorphism");
                for (row, c) in coords.into_iter().enumerate() {
                    mat.set(row, col, c);
                }
            }
            mat
        })
        .collect();
    Rep::new(&op, dims, action).expect("dual shapes are consistent")
}

/// The k-linear dual `Hom_k(m, k)` as a module over the opposite algebra.
pub fn k_dual(m: &Rep) -> Rep {
    let op = m.algebra().opposite();
    let action = m.actions().iter().map(Mat::transpose).collect();
    Rep::new(&op, m.dims().to_vec(), action).expect("transposes have the opposite shapes")
}

/// A dimension that may be unbounded or only bounded below.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum HomDim {
    Finite(usize),
    /// Certified by a syzygy repetition `Ω^j ≅ Ω^k`.
    Infinite { from: usize, to: usize },
    AtLeast(usize),
}

impl HomDim {
    pub fn finite(&self) -> Option<usize> {
        match self {
            HomDim::Finite(d) => Some(*d),
            _ => None,
        }
    }
}

impl fmt::Display for HomDim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HomDim::Finite(d) => write!(f, "{d}"),
            HomDim::Infinite { from, to } => write!(f, "infinite (Ω^{from} ≅ Ω^{to})"),
            HomDim::AtLeast(d) => write!(f, ">= {d}"),
        }
    }
}

/// Projective dimension by iterated syzygies, detecting periodicity.
pub fn projective_dimension(m: &Rep, bound: usize) -> HomDim {
    if is_projective(m) {
        return HomDim::Finite(0);
    }
    let mut seen: Vec<Rep> = vec![strip_projective_summands(m).0];
    let mut cur = m.clone();
    for k in 1..=bound {
        cur = syzygy_step(&cur).0;
        if is_projective(&cur) {
            return HomDim::Finite(k);
        }
        let stripped = strip_projective_summands(&cur).0;
        for (j, prev) in seen.iter().enumerate() {
            if prev.dims() == stripped.dims() && stripped.is_isomorphic(prev, INTERNAL_SEED).is_yes() {
                return HomDim::Infinite { from: j, to: k };
            }
        }
        seen.push(stripped);
    }
    HomDim::AtLeast(bound + 1)
}

/// Injective dimensions of the algebra on both sides.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GorensteinData {
    pub left_injdim: HomDim,
    pub right_injdim: HomDim,
}

impl GorensteinData {
    /// The common injective dimension when both sides are finite.
    pub fn d(&self) -> Option<usize> {
        match (self.left_injdim.finite(), self.right_injdim.finite()) {
            (Some(l), Some(r)) => Some(l.max(r)),
            _ => None,
        }
    }
}

/// `injdim _ΛΛ = pd_{Λ^op} D(Λ)` and `injdim Λ_Λ = pd_Λ D(Λ^op)`.
pub fn gorenstein_data(alg: &Arc<Algebra>, bound: usize) -> Result<GorensteinData> {
    if let Some(g) = alg.gorenstein_cache.lock().expect("cache lock").get(&bound) {
        return Ok(*g);
    }
    let op = alg.opposite();
    let left = projective_dimension(&k_dual(&Rep::regular(alg)), bound);
    let right = projective_dimension(&k_dual(&Rep::regular(&op)), bound);
    if let (Some(l), Some(r)) = (left.finite(), right.finite()) {
        if l != r {
            return Err(Error::Internal(format!("left injective dimension {l} differs from right {r}")));
        }
    }
    let g = GorensteinData { left_injdim: left, right_injdim: right };
    alg.gorenstein_cache.lock().expect("cache lock").insert(bound, g);
    Ok(g)
}

/// Default search bound for injective dimensions.
pub const DEFAULT_GORENSTEIN_BOUND: usize = 6;

/// A three-valued verdict.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    True,
    False(String),
    Unknown(String),
}

impl Verdict {
    pub fn as_bool(&self) -> Option<bool> {
        match self {
            Verdict::True => Some(true),
            Verdict::False(_) => Some(false),
            Verdict::Unknown(_) => None,
        }
    }
}

/// Total reflexivity checked up to `bound`.
pub fn is_totally_reflexive(m: &Rep, bound: usize) -> Verdict {
    let alg = m.algebra();
    let reg = Rep::regular(alg);
    for i in 1..=bound {
        let e = ext(m, &reg, i);
        if e.dim != 0 {
            return Verdict::False(format!("Ext^{i}(m, Λ) has dimension {}", e.dim));
        }
    }
    let dual = dual_module(m);
    let op_reg = Rep::regular(dual.algebra());
    for i in 1..=bound {
        let e = ext(&dual, &op_reg, i);
        if e.dim != 0 {
            return Verdict::False(format!("Ext^{i}(m*, Λ^op) has dimension {}", e.dim));
        }
    }
    let double = dual_module(&dual);
    match m.is_isomorphic(&double, INTERNAL_SEED) {
        IsoResult::Yes(_) => {}
        IsoResult::No(why) => return Verdict::False(format!("m is not reflexive: {why}")),
        IsoResult::Inconclusive => return Verdict::Unknown("reflexivity test inconclusive".into()),
    }
    match gorenstein_data(alg, bound).ok().and_then(|g| g.d()) {
        Some(d) if d <= bound => Verdict::True,
        _ => Verdict::Unknown(format!("conditions hold up to degree {bound}")),
    }
}

/// Default total-reflexivity bound: `max(4, d + 1)`.
pub fn default_reflexivity_bound(alg: &Arc<Algebra>) -> usize {
    match gorenstein_data(alg, DEFAULT_GORENSTEIN_BOUND).ok().and_then(|g| g.d()) {
        Some(d) => (d + 1).max(4),
        None => 4,
    }
}

/// Gorenstein-projectivity: exact when the algebra is Gorenstein within
/// `bound`, total reflexivity up to `bound` otherwise.
pub fn is_gorenstein_projective(m: &Rep, bound: usize) -> Verdict {
    let alg = m.algebra();
    if let Some(d) = gorenstein_data(alg, bound).ok().and_then(|g| g.d()) {
        let reg = Rep::regular(alg);
        for i in 1..=d {
            let e = ext(m, &reg, i);
            if e.dim != 0 {
                return Verdict::False(format!("Ext^{i}(m, Λ) has dimension {}", e.dim));
            }
        }
        return Verdict::True;
    }
    is_totally_reflexive(m, bound)
}
