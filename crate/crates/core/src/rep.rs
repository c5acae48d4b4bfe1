//! Finite-dimensional left modules as quiver representations.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::algebra::{join_names, Algebra, AlgebraElement, Path, QuiverSpec, Relation};
use crate::biserial;
use crate::error::{Error, Result};
use crate::exactla::{Field, Mat, Scalar, Subspace};
use crate::homalg;

/// Number of random Hom samples tried by [`Rep::is_isomorphic`].
pub const ISO_SAMPLES: usize = 64;

/// A representation: one space per vertex, one matrix per arrow.
/// `action[a]` has shape `dims[target(a)] × dims[source(a)]`.
#[derive(Clone)]
pub struct Rep {
    algebra: Arc<Algebra>,
    dims: Vec<usize>,
    action: Vec<Mat>,
}

impl PartialEq for Rep {
    fn eq(&self, other: &Rep) -> bool {
        *self.algebra == *other.algebra && self.dims == other.dims && self.action == other.action
    }
}

impl fmt::Debug for Rep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Rep").field("dims", &self.dims).field("action", &self.action).finish()
    }
}

/// A family of linear maps, one per vertex; `maps[v]` is `dims_target[v] × dims_source[v]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Morphism {
    pub maps: Vec<Mat>,
}

impl Morphism {
    pub fn zero(field: Field, source: &[usize], target: &[usize]) -> Morphism {
        Morphism { maps: source.iter().zip(target).map(|(&s, &t)| Mat::zeros(field, t, s)).collect() }
    }

    pub fn identity(m: &Rep) -> Morphism {
        Morphism { maps: m.dims.iter().map(|&d| Mat::identity(m.field(), d)).collect() }
    }

    /// `self ∘ first`.
    pub fn compose(&self, first: &Morphism) -> Morphism {
        Morphism { maps: self.maps.iter().zip(&first.maps).map(|(g, f)| g.mul(f)).collect() }
    }

    pub fn add(&self, other: &Morphism) -> Morphism {
        Morphism { maps: self.maps.iter().zip(&other.maps).map(|(a, b)| a.add(b)).collect() }
    }

    pub fn sub(&self, other: &Morphism) -> Morphism {
        Morphism { maps: self.maps.iter().zip(&other.maps).map(|(a, b)| a.sub(b)).collect() }
    }

    pub fn scale(&self, s: &Scalar) -> Morphism {
        Morphism { maps: self.maps.iter().map(|a| a.scale(s)).collect() }
    }

    pub fn is_zero(&self) -> bool {
        self.maps.iter().all(Mat::is_zero)
    }

    pub fn is_invertible(&self) -> bool {
        self.maps.iter().all(|m| m.is_square() && (m.rows() == 0 || m.is_invertible()))
    }

    pub fn inverse(&self) -> Option<Morphism> {
        let maps = self
            .maps
            .iter()
            .map(|m| if m.rows() == 0 && m.cols() == 0 { Some(m.clone()) } else { m.inverse() })
            .collect::<Option<Vec<_>>>()?;
        Some(Morphism { maps })
    }

    pub fn rank(&self) -> usize {
        self.maps.iter().map(Mat::rank).sum()
    }

    /// Checks `f_t · M_a = N_a · f_s` for every arrow, and the shapes.
    pub fn is_intertwiner(&self, source: &Rep, target: &Rep) -> bool {
        if self.maps.len() != source.dims.len() {
            return false;
        }
        for (v, m) in self.maps.iter().enumerate() {
            if m.shape() != (target.dims[v], source.dims[v]) {
                return false;
            }
        }
        source.algebra.spec().arrows.iter().enumerate().all(|(a, arrow)| {
            self.maps[arrow.target].mul(&source.action[a]) == target.action[a].mul(&self.maps[arrow.source])
        })
    }

    /// All coordinates, vertex by vertex, row-major.
    pub fn flatten(&self) -> Vec<Scalar> {
        self.maps.iter().flat_map(|m| m.entries().iter().cloned()).collect()
    }

    /// Inverse of [`Morphism::flatten`].
    pub fn unflatten(field: Field, source: &[usize], target: &[usize], coords: &[Scalar]) -> Morphism {
        let mut maps = Vec::with_capacity(source.len());
        let mut pos = 0;
        for (&s, &t) in source.iter().zip(target) {
            let data = coords[pos..pos + s * t].to_vec();
            pos += s * t;
            maps.push(Mat::from_flat(field, t, s, data).expect("sizes agree"));
        }
        Morphism { maps }
    }

    /// Kernel as subspaces of the source spaces.
    pub fn kernel(&self) -> Vec<Subspace> {
        self.maps
            .iter()
            .map(|m| {
                let k = m.kernel_basis();
                Subspace::span(m.field(), m.cols(), &k.columns())
            })
            .collect()
    }

    /// Image as subspaces of the target spaces.
    pub fn image(&self) -> Vec<Subspace> {
        self.maps.iter().map(|m| Subspace::span(m.field(), m.rows(), &m.columns())).collect()
    }
}

/// Outcome of an isomorphism test.
#[derive(Clone, Debug)]
pub enum IsoResult {
    /// Carries an invertible intertwiner `m → n`.
    Yes(Morphism),
    /// Certified non-isomorphic, with the reason.
    No(String),
    Inconclusive,
}

impl IsoResult {
    pub fn is_yes(&self) -> bool {
        matches!(self, IsoResult::Yes(_))
    }

    pub fn is_no(&self) -> bool {
        matches!(self, IsoResult::No(_))
    }
}

/// One letter of a string: an arrow, possibly formally inverted.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Letter {
    pub arrow: usize,
    pub inverse: bool,
}

impl Letter {
    pub fn source(&self, spec: &QuiverSpec) -> usize {
        let a = &spec.arrows[self.arrow];
        if self.inverse { a.target } else { a.source }
    }

    pub fn target(&self, spec: &QuiverSpec) -> usize {
        let a = &spec.arrows[self.arrow];
        if self.inverse { a.source } else { a.target }
    }

    pub fn inverted(self) -> Letter {
        Letter { arrow: self.arrow, inverse: !self.inverse }
    }

    pub fn name(&self, spec: &QuiverSpec) -> String {
        let n = &spec.arrows[self.arrow].name;
        if self.inverse { format!("{n}^-1") } else { n.clone() }
    }
}

/// A string `c_1 c_2 ⋯ c_n`, read right to left as a walk. The empty string at a
/// vertex gives the simple module there.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct StringWord {
    pub letters: Vec<Letter>,
    pub vertex: usize,
}

impl StringWord {
    /// Parses letter names such as `"b"` or `"a^-1"`. `vertex` is required for
    /// the empty word and checked otherwise.
    pub fn parse<S: AsRef<str>>(spec: &QuiverSpec, names: &[S], vertex: Option<&str>) -> Result<StringWord> {
        let mut letters = Vec::with_capacity(names.len());
        for n in names {
            let n = n.as_ref().trim();
            let (base, inverse) = match n.strip_suffix("^-1") {
                Some(b) => (b, true),
                None => (n, false),
            };
            letters.push(Letter { arrow: spec.arrow_index(base)?, inverse });
        }
        let end = letters.last().map(|l| l.source(spec));
        let vertex = match (vertex, end) {
            (Some(v), Some(e)) => {
                let v = spec.vertex_index(v)?;
                if v != e {
                    return Err(Error::InvalidString(format!(
                        "word starts at vertex {} but vertex {} was given",
                        spec.vertices[e], spec.vertices[v]
                    )));
                }
                v
            }
            (Some(v), None) => spec.vertex_index(v)?,
            (None, Some(e)) => e,
            (None, None) => return Err(Error::InvalidString("the empty word needs a vertex".into())),
        };
        Ok(StringWord { letters, vertex })
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// The reversed walk with every letter inverted.
    pub fn inverse(&self, spec: &QuiverSpec) -> StringWord {
        let vertex = self.letters.first().map_or(self.vertex, |l| l.target(spec));
        StringWord { letters: self.letters.iter().rev().map(|l| l.inverted()).collect(), vertex }
    }

    /// Vertex of each basis point `z_0, …, z_n`.
    pub fn points(&self, spec: &QuiverSpec) -> Vec<usize> {
        if self.letters.is_empty() {
            return vec![self.vertex];
        }
        let mut pts = vec![self.letters[0].target(spec)];
        pts.extend(self.letters.iter().map(|l| l.source(spec)));
        pts
    }

    /// `M[w]` style label; the trivial string at `v` is `M[1_v]`.
    pub fn label(&self, spec: &QuiverSpec) -> String {
        if self.letters.is_empty() {
            return format!("M[1_{}]", spec.vertices[self.vertex]);
        }
        let names: Vec<String> = self.letters.iter().map(|l| l.name(spec)).collect();
        let refs: Vec<&str> = names.iter().map(String::as_str).collect();
        format!("M[{}]", join_names(&refs))
    }

    /// Checks composability, backtracking, and that direct and inverse runs
    /// are nonzero paths.
    pub fn check(&self, alg: &Algebra) -> Result<()> {
        let spec = alg.spec();
        let bad = |msg: String| Err(Error::InvalidString(msg));
        for (i, w) in self.letters.windows(2).enumerate() {
            if w[0].source(spec) != w[1].target(spec) {
                return bad(format!(
                    "letters {} and {} at positions {} and {} do not compose",
                    w[0].name(spec),
                    w[1].name(spec),
                    i,
                    i + 1
                ));
            }
            if w[0].arrow == w[1].arrow && w[0].inverse != w[1].inverse {
                return bad(format!("letter {} is followed by its inverse", w[1].name(spec)));
            }
        }
        let mut i = 0;
        while i < self.letters.len() {
            let inv = self.letters[i].inverse;
            let mut j = i;
            while j < self.letters.len() && self.letters[j].inverse == inv {
                j += 1;
            }
            let run: Vec<usize> = if inv {
                self.letters[i..j].iter().rev().map(|l| l.arrow).collect()
            } else {
                self.letters[i..j].iter().map(|l| l.arrow).collect()
            };
            if run.len() >= 2 {
                let names: Vec<&str> = run.iter().map(|&a| spec.arrows[a].name.as_str()).collect();
                let path = spec.path(&names)?;
                if alg.path_is_zero(&path) {
                    return bad(format!("subword {} lies in the relation ideal", spec.path_label(&path)));
                }
            }
            i = j;
        }
        Ok(())
    }
}

fn relation_label(spec: &QuiverSpec, r: &Relation) -> String {
    let mut out = String::new();
    for (k, (c, p)) in r.terms.iter().enumerate() {
        let names: Vec<&str> = p.arrows.iter().map(|&a| spec.arrows[a].name.as_str()).collect();
        let body = names.join("·");
        let neg = c.to_string().starts_with('-');
        let mag = if neg { -c } else { c.clone() };
        let coeff = if mag.is_one() { String::new() } else { format!("{mag}·") };
        match (k, neg) {
            (0, false) => out.push_str(&format!("{coeff}{body}")),
            (0, true) => out.push_str(&format!("-{coeff}{body}")),
            (_, false) => out.push_str(&format!(" + {coeff}{body}")),
            (_, true) => out.push_str(&format!(" - {coeff}{body}")),
        }
    }
    out
}

impl Rep {
    /// Builds a representation after checking matrix shapes.
    pub fn new(algebra: &Arc<Algebra>, dims: Vec<usize>, action: Vec<Mat>) -> Result<Rep> {
        let spec = algebra.spec();
        if dims.len() != spec.num_vertices() || action.len() != spec.num_arrows() {
            return Err(Error::ShapeMismatch(format!(
                "expected {} vertices and {} arrows, got {} and {}",
                spec.num_vertices(),
                spec.num_arrows(),
                dims.len(),
                action.len()
            )));
        }
        for (a, m) in action.iter().enumerate() {
            let arrow = &spec.arrows[a];
            if m.shape() != (dims[arrow.target], dims[arrow.source]) {
                return Err(Error::ShapeMismatch(format!(
                    "arrow `{}` needs a {}x{} matrix, got {}x{}",
                    arrow.name,
                    dims[arrow.target],
                    dims[arrow.source],
                    m.rows(),
                    m.cols()
                )));
            }
            if m.field() != algebra.field() {
                return Err(Error::MixedField(algebra.field(), m.field()));
            }
        }
        Ok(Rep { algebra: algebra.clone(), dims, action })
    }

    /// Like [`Rep::new`] but also rejects relation violations.
    pub fn new_validated(algebra: &Arc<Algebra>, dims: Vec<usize>, action: Vec<Mat>) -> Result<Rep> {
        let m = Rep::new(algebra, dims, action)?;
        let v = m.validate();
        if !v.is_empty() {
            return Err(Error::InvalidSpec(v));
        }
        Ok(m)
    }

    pub fn zero(algebra: &Arc<Algebra>) -> Rep {
        let spec = algebra.spec();
        let f = algebra.field();
        Rep {
            algebra: algebra.clone(),
            dims: vec![0; spec.num_vertices()],
            action: vec![Mat::zeros(f, 0, 0); spec.num_arrows()],
        }
    }

    pub fn simple(algebra: &Arc<Algebra>, v: usize) -> Rep {
        let spec = algebra.spec();
        let mut dims = vec![0; spec.num_vertices()];
        dims[v] = 1;
        let action = spec.arrows.iter().map(|a| Mat::zeros(algebra.field(), dims[a.target], dims[a.source])).collect();
        Rep { algebra: algebra.clone(), dims, action }
    }

    /// `Λe_v`: basis paths starting at `v`, arrows acting by left composition.
    pub fn projective(algebra: &Arc<Algebra>, v: usize) -> Rep {
        let spec = algebra.spec();
        let f = algebra.field();
        let groups = algebra.paths_from(v);
        let mut pos = vec![usize::MAX; algebra.dim()];
        for g in &groups {
            for (k, &i) in g.iter().enumerate() {
                pos[i] = k;
            }
        }
        let dims: Vec<usize> = groups.iter().map(Vec::len).collect();
        let mut action = Vec::with_capacity(spec.num_arrows());
        for (a, arrow) in spec.arrows.iter().enumerate() {
            let mut m = Mat::zeros(f, dims[arrow.target], dims[arrow.source]);
            let ai = algebra.arrow_basis_index(a);
            for (col, &p) in groups[arrow.source].iter().enumerate() {
                for (k, s) in algebra.product_of_basis(ai, p) {
                    m.set(pos[*k], col, s.clone());
                }
            }
            action.push(m);
        }
        Rep { algebra: algebra.clone(), dims, action }
    }

    /// The left regular module `⊕_v Λe_v`.
    pub fn regular(algebra: &Arc<Algebra>) -> Rep {
        (0..algebra.num_vertices())
            .map(|v| Rep::projective(algebra, v))
            .fold(Rep::zero(algebra), |acc, p| acc.direct_sum(&p).expect("same algebra"))
    }

    /// The string module `M[w]`; requires a special biserial algebra.
    pub fn string_module<S: AsRef<str>>(algebra: &Arc<Algebra>, word: &[S], vertex: Option<&str>) -> Result<Rep> {
        let w = StringWord::parse(algebra.spec(), word, vertex)?;
        Rep::from_string(algebra, &w)
    }

    pub fn from_string(algebra: &Arc<Algebra>, w: &StringWord) -> Result<Rep> {
        let report = biserial::check_special_biserial(algebra);
        if !report.special_biserial {
            return Err(Error::InvalidString(format!(
                "strings need a special biserial algebra ({})",
                report.violation_summary()
            )));
        }
        w.check(algebra)?;
        let m = Rep::from_string_unchecked(algebra, w);
        let v = m.validate();
        if !v.is_empty() {
            return Err(Error::InvalidString(format!("{} violates {}", w.label(algebra.spec()), v.join(", "))));
        }
        Ok(m)
    }

    /// Builds the representation of a walk without any validity checks.
    pub(crate) fn from_string_unchecked(algebra: &Arc<Algebra>, w: &StringWord) -> Rep {
        let spec = algebra.spec();
        let f = algebra.field();
        let pts = w.points(spec);
        let mut dims = vec![0; spec.num_vertices()];
        let mut local = Vec::with_capacity(pts.len());
        for &v in &pts {
            local.push(dims[v]);
            dims[v] += 1;
        }
        let mut action: Vec<Mat> =
            spec.arrows.iter().map(|a| Mat::zeros(f, dims[a.target], dims[a.source])).collect();
        for (idx, l) in w.letters.iter().enumerate() {
            let i = idx + 1;
            // Direct: arrow maps z_i to z_{i-1}. Inverse: arrow maps z_{i-1} to z_i.
            let (from, to) = if l.inverse { (i - 1, i) } else { (i, i - 1) };
            action[l.arrow].set(local[to], local[from], f.one());
        }
        Rep { algebra: algebra.clone(), dims, action }
    }

    /// `R(α) = Λα`, the image of `Λe_{t(α)} → Λe_{s(α)}, x ↦ xα`.
    pub fn ideal_module(algebra: &Arc<Algebra>, alpha: usize) -> Rep {
        let (sub, _) = Rep::ideal_module_with_inclusion(algebra, alpha);
        sub
    }

    /// `R(α)` together with its inclusion into `P_{s(α)}`.
    pub fn ideal_module_with_inclusion(algebra: &Arc<Algebra>, alpha: usize) -> (Rep, Morphism) {
        let arrow = &algebra.spec().arrows[alpha];
        let p = Rep::projective(algebra, arrow.source);
        let groups = algebra.paths_from(arrow.source);
        let ai = algebra.arrow_basis_index(alpha);
        let mut gens = Vec::new();
        for row in algebra.paths_from(arrow.target) {
            for q in row {
                let prod = algebra.product_of_basis(q, ai);
                if prod.is_empty() {
                    continue;
                }
                let w = algebra.basis()[prod[0].0].target;
                let mut v = vec![algebra.field().zero(); p.dims[w]];
                for (k, s) in prod {
                    let at = groups[w].iter().position(|x| x == k).expect("product lands in P_s");
                    v[at] = s.clone();
                }
                gens.push((w, v));
            }
        }
        let spaces = p.generated_submodule(&gens);
        p.sub_rep(&spaces)
    }

    pub fn algebra(&self) -> &Arc<Algebra> {
        &self.algebra
    }

    pub fn field(&self) -> Field {
        self.algebra.field()
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self) -> usize {
        self.dims.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }

    pub fn action(&self, arrow: usize) -> &Mat {
        &self.action[arrow]
    }

    pub fn actions(&self) -> &[Mat] {
        &self.action
    }

    fn check_same_algebra(&self, other: &Rep) -> Result<()> {
        if *self.algebra != *other.algebra {
            return Err(Error::AlgebraMismatch);
        }
        Ok(())
    }

    /// Matrix of a path, from `dims[source]` to `dims[target]`.
    pub fn path_action(&self, p: &Path) -> Mat {
        let mut m = Mat::identity(self.field(), self.dims[p.source]);
        for a in p.applied() {
            m = self.action[a].mul(&m);
        }
        m
    }

    /// Matrix of an algebra element on the total space `⊕_v M_v`.
    pub fn element_action(&self, x: &AlgebraElement) -> Mat {
        let offs = self.offsets();
        let n = self.dim();
        let mut out = Mat::zeros(self.field(), n, n);
        for (i, c) in x.0.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let p = &self.algebra.basis()[i];
            let block = self.path_action(p).scale(c);
            let mut cur = Mat::zeros(self.field(), self.dims[p.target], self.dims[p.source]);
            let rows: Vec<usize> = (offs[p.target]..offs[p.target] + self.dims[p.target]).collect();
            let cols: Vec<usize> = (offs[p.source]..offs[p.source] + self.dims[p.source]).collect();
            cur = cur.add(&out.submatrix(&rows, &cols)).add(&block);
            out.paste(offs[p.target], offs[p.source], &cur);
        }
        out
    }

    /// Start of each vertex block inside the total space.
    pub fn offsets(&self) -> Vec<usize> {
        let mut acc = 0;
        self.dims
            .iter()
            .map(|d| {
                let o = acc;
                acc += d;
                o
            })
            .collect()
    }

    /// Every relation whose evaluation is a nonzero matrix, as readable text.
    pub fn validate(&self) -> Vec<String> {
        let spec = self.algebra.spec();
        let f = self.field();
        let mut out = Vec::new();
        for r in &spec.relations {
            let Some((_, first)) = r.terms.first() else { continue };
            let mut acc = Mat::zeros(f, self.dims[first.target], self.dims[first.source]);
            for (c, p) in &r.terms {
                acc.add_assign_scaled(&self.path_action(p), c);
            }
            if !acc.is_zero() {
                out.push(format!("{} ≠ 0", relation_label(spec, r)));
            }
        }
        out
    }

    pub fn direct_sum(&self, other: &Rep) -> Result<Rep> {
        self.check_same_algebra(other)?;
        let dims = self.dims.iter().zip(&other.dims).map(|(a, b)| a + b).collect();
        let action = self.action.iter().zip(&other.action).map(|(a, b)| a.block_diag(b)).collect();
        Ok(Rep { algebra: self.algebra.clone(), dims, action })
    }

    /// Inclusions and projections of `self ⊕ other`.
    pub fn sum_maps(&self, other: &Rep) -> (Morphism, Morphism, Morphism, Morphism) {
        let f = self.field();
        let mut i1 = Vec::new();
        let mut i2 = Vec::new();
        let mut p1 = Vec::new();
        let mut p2 = Vec::new();
        for (&a, &b) in self.dims.iter().zip(&other.dims) {
            let id = Mat::identity(f, a + b);
            let first: Vec<usize> = (0..a).collect();
            let second: Vec<usize> = (a..a + b).collect();
            let all: Vec<usize> = (0..a + b).collect();
            i1.push(id.submatrix(&all, &first));
            i2.push(id.submatrix(&all, &second));
            p1.push(id.submatrix(&first, &all));
            p2.push(id.submatrix(&second, &all));
        }
        (Morphism { maps: i1 }, Morphism { maps: i2 }, Morphism { maps: p1 }, Morphism { maps: p2 })
    }

    /// Smallest submodule containing the given vectors `(vertex, coordinates)`.
    pub fn generated_submodule(&self, gens: &[(usize, Vec<Scalar>)]) -> Vec<Subspace> {
        let f = self.field();
        let spec = self.algebra.spec();
        let mut spaces: Vec<Subspace> = self.dims.iter().map(|&d| Subspace::zero(f, d)).collect();
        let mut pending: Vec<(usize, Vec<Scalar>)> = gens.to_vec();
        while let Some((v, x)) = pending.pop() {
            let r = spaces[v].reduce(&x);
            if r.iter().all(Scalar::is_zero) {
                continue;
            }
            let mut basis = spaces[v].basis().to_vec();
            basis.push(r.clone());
            spaces[v] = Subspace::span(f, self.dims[v], &basis);
            for (a, arrow) in spec.arrows.iter().enumerate() {
                if arrow.source == v {
                    pending.push((arrow.target, self.action[a].mul_vec(&r)));
                }
            }
        }
        spaces
    }

    /// Whether the subspaces are stable under every arrow.
    pub fn is_submodule(&self, spaces: &[Subspace]) -> bool {
        self.algebra.spec().arrows.iter().enumerate().all(|(a, arrow)| {
            spaces[arrow.source].basis().iter().all(|u| spaces[arrow.target].contains(&self.action[a].mul_vec(u)))
        })
    }

    /// The submodule on the given (stable) subspaces, in their RREF bases, with its inclusion.
    pub fn sub_rep(&self, spaces: &[Subspace]) -> (Rep, Morphism) {
        let f = self.field();
        let dims: Vec<usize> = spaces.iter().map(Subspace::dim).collect();
        let spec = self.algebra.spec();
        let mut action = Vec::with_capacity(spec.num_arrows());
        for (a, arrow) in spec.arrows.iter().enumerate() {
            let mut m = Mat::zeros(f, dims[arrow.target], dims[arrow.source]);
            for (col, u) in spaces[arrow.source].basis().iter().enumerate() {
                let img = self.action[a].mul_vec(u);
                let coords = spaces[arrow.target].coordinates(&img).expect("subspaces are arrow-stable");
                for (row, c) in coords.into_iter().enumerate() {
                    m.set(row, col, c);
                }
            }
            action.push(m);
        }
        let incl = spaces
            .iter()
            .zip(&self.dims)
            .map(|(s, &d)| Mat::from_columns(f, d, s.basis()))
            .collect();
        (Rep { algebra: self.algebra.clone(), dims, action }, Morphism { maps: incl })
    }

    /// The quotient by the given (stable) subspaces, on the complementary
    /// standard basis vectors, with its projection.
    pub fn quotient_rep(&self, spaces: &[Subspace]) -> (Rep, Morphism) {
        let f = self.field();
        let comps: Vec<Vec<usize>> = spaces.iter().map(Subspace::complement_indices).collect();
        let dims: Vec<usize> = comps.iter().map(Vec::len).collect();
        let spec = self.algebra.spec();
        let project = |v: usize, x: &[Scalar]| -> Vec<Scalar> {
            let r = spaces[v].reduce(x);
            comps[v].iter().map(|&j| r[j].clone()).collect()
        };
        let mut action = Vec::with_capacity(spec.num_arrows());
        for (a, arrow) in spec.arrows.iter().enumerate() {
            let mut m = Mat::zeros(f, dims[arrow.target], dims[arrow.source]);
            for (col, &j) in comps[arrow.source].iter().enumerate() {
                let img = self.action[a].col(j);
                for (row, c) in project(arrow.target, &img).into_iter().enumerate() {
                    m.set(row, col, c);
                }
            }
            action.push(m);
        }
        let proj = (0..self.dims.len())
            .map(|v| {
                let cols: Vec<Vec<Scalar>> = (0..self.dims[v])
                    .map(|j| {
                        let mut e = vec![f.zero(); self.dims[v]];
                        e[j] = f.one();
                        project(v, &e)
                    })
                    .collect();
                Mat::from_columns(f, dims[v], &cols)
            })
            .collect();
        (Rep { algebra: self.algebra.clone(), dims, action }, Morphism { maps: proj })
    }

    /// Subspaces of `J·M`: the span of all arrow images.
    pub fn radical_spaces(&self) -> Vec<Subspace> {
        let f = self.field();
        let spec = self.algebra.spec();
        (0..self.dims.len())
            .map(|v| {
                let cols: Vec<Vec<Scalar>> = spec
                    .arrows
                    .iter()
                    .enumerate()
                    .filter(|(_, a)| a.target == v)
                    .flat_map(|(a, _)| self.action[a].columns())
                    .collect();
                Subspace::span(f, self.dims[v], &cols)
            })
            .collect()
    }

    pub fn radical_submodule(&self) -> Rep {
        self.sub_rep(&self.radical_spaces()).0
    }

    pub fn top(&self) -> Rep {
        self.quotient_rep(&self.radical_spaces()).0
    }

    /// Dimension vector of the top.
    pub fn top_dims(&self) -> Vec<usize> {
        self.radical_spaces().iter().zip(&self.dims).map(|(s, d)| d - s.dim()).collect()
    }

    /// Randomized isomorphism test; see [`IsoResult`].
    pub fn is_isomorphic(&self, other: &Rep, seed: u64) -> IsoResult {
        if *self.algebra != *other.algebra {
            return IsoResult::No("different algebras".into());
        }
        if self.dims != other.dims {
            return IsoResult::No(format!("dimension vectors {:?} and {:?} differ", self.dims, other.dims));
        }
        if self == other {
            return IsoResult::Yes(Morphism::identity(self));
        }
        let hom = homalg::hom_basis(self, other);
        let end_m = homalg::hom_basis(self, self).dim();
        if hom.dim() != end_m {
            return IsoResult::No(format!("dim Hom(m,n) = {} but dim End(m) = {end_m}", hom.dim()));
        }
        let end_n = homalg::hom_basis(other, other).dim();
        if end_m != end_n {
            return IsoResult::No(format!("dim End(m) = {end_m} but dim End(n) = {end_n}"));
        }
        if self.dim() == 0 {
            return IsoResult::Yes(Morphism::identity(self));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..ISO_SAMPLES {
            let f = hom.random_element(&mut rng);
            if f.is_invertible() {
                return IsoResult::Yes(f);
            }
        }
        IsoResult::Inconclusive
    }
}

/// JSON description of a module over a given algebra.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum ModuleSpec {
    Simple {
        vertex: String,
    },
    Projective {
        vertex: String,
    },
    String {
        word: Vec<String>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        vertex: Option<String>,
    },
    Ideal {
        arrow: String,
    },
    Sum {
        parts: Vec<ModuleSpec>,
    },
    Explicit {
        dims: BTreeMap<String, usize>,
        #[serde(default)]
        matrices: BTreeMap<String, Vec<Vec<String>>>,
    },
    Band {
        #[serde(flatten)]
        rest: BTreeMap<String, serde_json::Value>,
    },
}

impl ModuleSpec {
    pub fn build(&self, algebra: &Arc<Algebra>) -> Result<Rep> {
        let spec = algebra.spec();
        match self {
            ModuleSpec::Simple { vertex } => Ok(Rep::simple(algebra, spec.vertex_index(vertex)?)),
            ModuleSpec::Projective { vertex } => Ok(Rep::projective(algebra, spec.vertex_index(vertex)?)),
            ModuleSpec::String { word, vertex } => Rep::string_module(algebra, word, vertex.as_deref()),
            ModuleSpec::Ideal { arrow } => Ok(Rep::ideal_module(algebra, spec.arrow_index(arrow)?)),
            ModuleSpec::Sum { parts } => {
                let mut acc = Rep::zero(algebra);
                for p in parts {
                    acc = acc.direct_sum(&p.build(algebra)?)?;
                }
                Ok(acc)
            }
            ModuleSpec::Explicit { dims, matrices } => {
                let f = algebra.field();
                let mut dv = vec![0; spec.num_vertices()];
                for (name, d) in dims {
                    dv[spec.vertex_index(name)?] = *d;
                }
                let mut action: Vec<Mat> =
                    spec.arrows.iter().map(|a| Mat::zeros(f, dv[a.target], dv[a.source])).collect();
                for (name, rows) in matrices {
                    let a = spec.arrow_index(name)?;
                    let parsed = rows
                        .iter()
                        .map(|r| r.iter().map(|s| f.parse(s)).collect::<Result<Vec<_>>>())
                        .collect::<Result<Vec<_>>>()?;
                    let arrow = &spec.arrows[a];
                    let (r, c) = (dv[arrow.target], dv[arrow.source]);
                    let m = if parsed.is_empty() { Mat::zeros(f, r, c) } else { Mat::from_rows(f, parsed)? };
                    if m.shape() != (r, c) && !(r == 0 || c == 0) {
                        return Err(Error::ShapeMismatch(format!(
                            "arrow `{name}` needs a {r}x{c} matrix, got {}x{}",
                            m.rows(),
                            m.cols()
                        )));
                    }
                    if r > 0 && c > 0 {
                        action[a] = m;
                    }
                }
                Rep::new_validated(algebra, dv, action)
            }
            ModuleSpec::Band { .. } => Err(Error::BandsUnsupported),
        }
    }

    /// Short human-readable name.
    pub fn label(&self, spec: &QuiverSpec) -> String {
        match self {
            ModuleSpec::Simple { vertex } => format!("M[1_{vertex}]"),
            ModuleSpec::Projective { vertex } => format!("P{vertex}"),
            ModuleSpec::String { word, vertex } => match StringWord::parse(spec, word, vertex.as_deref()) {
                Ok(w) => w.label(spec),
                Err(_) => format!("M[{}]", word.join(" ")),
            },
            ModuleSpec::Ideal { arrow } => format!("R({arrow})"),
            ModuleSpec::Sum { parts } => parts.iter().map(|p| p.label(spec)).collect::<Vec<_>>().join(" ⊕ "),
            ModuleSpec::Explicit { .. } => "explicit".into(),
            ModuleSpec::Band { .. } => "band".into(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{self, lambda0, lambda1, lambda2};

    #[test]
    fn simple_modules() {
        let alg = lambda0();
        let s1 = Rep::simple(&alg, 1);
        assert_eq!(s1.dims(), &[0, 1]);
        assert_eq!(s1.dim(), 1);
        assert!(s1.validate().is_empty());
    }

    #[test]
    fn projectives_lambda0() {
        let alg = lambda0();
        let p0 = Rep::projective(&alg, 0);
        let p1 = Rep::projective(&alg, 1);
        assert_eq!(p0.dims(), &[2, 2]);
        assert_eq!(p1.dims(), &[2, 2]);
        assert!(p0.validate().is_empty() && p1.validate().is_empty());
        assert_eq!(p0.top_dims(), vec![1, 0]);
        assert_eq!(p1.top_dims(), vec![0, 1]);
    }

    #[test]
    fn projectives_lambda1() {
        let alg = lambda1();
        for v in 0..6 {
            let p = Rep::projective(&alg, v);
            assert!(p.validate().is_empty());
            assert_eq!(p.dim(), if v < 3 { 8 } else { 2 });
        }
    }

    #[test]
    fn string_examples() {
        assert_eq!(fixtures::m_b().dims(), &[1, 1]);
        assert_eq!(fixtures::m_ba().dims(), &[2, 1]);
        assert_eq!(fixtures::w0().dims(), &[2, 1, 1]);
        for i in 0..3 {
            for j in 0..5 {
                let v = fixtures::v_module(i, j);
                assert_eq!(v.dim(), 7 - j);
            }
        }
    }

    #[test]
    fn invalid_strings() {
        let alg = lambda0();
        assert!(matches!(Rep::string_module(&alg, &["a", "a"], None), Err(Error::InvalidString(_))));
        assert!(matches!(Rep::string_module(&alg, &["c", "b"], None), Err(Error::InvalidString(_))));
        assert!(matches!(Rep::string_module(&alg, &["a", "a^-1"], None), Err(Error::InvalidString(_))));
        assert!(matches!(Rep::string_module(&alg, &["b", "b"], None), Err(Error::InvalidString(_))));
        let empty: [&str; 0] = [];
        assert!(matches!(Rep::string_module(&alg, &empty, None), Err(Error::InvalidString(_))));
        assert_eq!(Rep::string_module(&alg, &empty, Some("1")).unwrap(), Rep::simple(&alg, 1));
        let l1 = lambda1();
        assert!(matches!(Rep::string_module(&l1, &["alpha0", "beta0"], None), Err(Error::InvalidString(_))));
    }

    #[test]
    fn ideal_modules_lambda0() {
        let alg = lambda0();
        let spec = alg.spec();
        let ra = Rep::ideal_module(&alg, spec.arrow_index("a").unwrap());
        let rb = Rep::ideal_module(&alg, spec.arrow_index("b").unwrap());
        let rc = Rep::ideal_module(&alg, spec.arrow_index("c").unwrap());
        assert!(ra.is_isomorphic(&fixtures::m_b(), 0).is_yes());
        assert!(rb.is_isomorphic(&Rep::simple(&alg, 1), 0).is_yes());
        assert!(rc.is_isomorphic(&fixtures::m_ba(), 0).is_yes());
    }

    #[test]
    fn ideal_module_inclusion_is_injective_intertwiner() {
        let alg = lambda1();
        for a in 0..alg.spec().num_arrows() {
            let (r, i) = Rep::ideal_module_with_inclusion(&alg, a);
            let p = Rep::projective(&alg, alg.spec().arrows[a].source);
            assert!(i.is_intertwiner(&r, &p));
            assert_eq!(i.rank(), r.dim());
        }
    }

    #[test]
    fn validate_reports_aa() {
        let alg = lambda0();
        let f = alg.field();
        let mut action = fixtures::m_b().actions().to_vec();
        action[1] = Mat::zeros(f, 1, 1);
        action[0] = Mat::from_i64(f, &[&[1]]);
        let m = Rep::new(&alg, vec![1, 1], action).unwrap();
        assert_eq!(m.validate(), vec!["a·a ≠ 0".to_string()]);
    }

    #[test]
    fn direct_sums() {
        let alg = lambda0();
        let s = fixtures::m_b().direct_sum(&Rep::projective(&alg, 0)).unwrap();
        assert_eq!(s.dims(), &[3, 3]);
        assert!(s.validate().is_empty());
        let z = fixtures::m_b().direct_sum(&Rep::zero(&alg)).unwrap();
        assert!(z.is_isomorphic(&fixtures::m_b(), 1).is_yes());
        assert!(matches!(fixtures::m_b().direct_sum(&fixtures::w0()), Err(Error::AlgebraMismatch)));
    }

    #[test]
    fn isomorphism_basics() {
        let alg = lambda0();
        let mb = fixtures::m_b();
        match mb.is_isomorphic(&mb, 0) {
            IsoResult::Yes(f) => assert_eq!(f, Morphism::identity(&mb)),
            other => panic!("{other:?}"),
        }
        assert!(mb.is_isomorphic(&Rep::simple(&alg, 1), 0).is_no());
    }

    #[test]
    fn string_symmetry() {
        let alg = lambda1();
        for i in 0..3 {
            for j in 0..5 {
                let w = StringWord::parse(alg.spec(), &fixtures::v_word(i, j), None).unwrap();
                let m = Rep::from_string(&alg, &w).unwrap();
                let n = Rep::from_string(&alg, &w.inverse(alg.spec())).unwrap();
                assert!(m.is_isomorphic(&n, 7).is_yes());
            }
        }
    }

    #[test]
    fn top_and_radical() {
        let alg = lambda0();
        assert_eq!(Rep::projective(&alg, 0).top(), Rep::simple(&alg, 0));
        assert_eq!(fixtures::m_b().top(), Rep::simple(&alg, 0));
        assert!(Rep::simple(&alg, 1).radical_submodule().is_zero());
    }

    #[test]
    fn module_specs() {
        let alg = lambda0();
        let m = fixtures::module(&alg, r#"{"kind":"string","word":["b"]}"#).unwrap();
        assert_eq!(m, fixtures::m_b());
        let e = fixtures::module(&alg, r#"{"kind":"explicit","dims":{"0":1,"1":1},"matrices":{"b":[["1"]]}}"#).unwrap();
        assert_eq!(e, fixtures::m_b());
        let bad = fixtures::module(&alg, r#"{"kind":"explicit","dims":{"0":1},"matrices":{"a":[["1"]]}}"#);
        assert!(matches!(bad, Err(Error::InvalidSpec(_))));
        let band = fixtures::module(&alg, r#"{"kind":"band","word":["a"],"param":"2"}"#);
        assert!(matches!(band, Err(Error::BandsUnsupported)));
        let sum = fixtures::module(&alg, r#"{"kind":"sum","parts":[{"kind":"projective","vertex":"0"},{"kind":"simple","vertex":"1"}]}"#)
            .unwrap();
        assert_eq!(sum.dims(), &[2, 3]);
        let l2 = lambda2();
        assert_eq!(fixtures::module(&l2, r#"{"kind":"ideal","arrow":"gamma0"}"#).unwrap().dim(), 17);
    }
}
