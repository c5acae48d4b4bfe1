//! Quivers with relations and their finite-dimensional quotient algebras.
//!
//! Paths are written right-to-left: the path `["b", "a"]` is `b∘a`, it starts
//! at the source of `a` and ends at the target of `b`.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap, VecDeque};
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock, Weak};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactla::{Field, Scalar};
use crate::homalg::GorensteinData;

/// Largest truncation length tried by the admissibility search.
pub const TRUNCATION_CAP: usize = 64;
/// Largest number of paths enumerated in one truncated path algebra.
pub const PATH_COUNT_CAP: usize = 200_000;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Arrow {
    pub name: String,
    pub source: usize,
    pub target: usize,
}

/// A path in the quiver. `arrows[0]` is applied last.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Path {
    pub source: usize,
    pub target: usize,
    pub arrows: Vec<usize>,
}

impl Path {
    pub fn trivial(v: usize) -> Path {
        Path { source: v, target: v, arrows: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.arrows.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.arrows.is_empty()
    }

    /// Arrow indices in the order they are applied.
    pub fn applied(&self) -> impl Iterator<Item = usize> + '_ {
        self.arrows.iter().rev().copied()
    }

    /// Orders by length, then lexicographically on arrow indices (written order).
    fn cmp_deglex(&self, other: &Path) -> Ordering {
        self.len()
            .cmp(&other.len())
            .then_with(|| self.arrows.cmp(&other.arrows))
            .then_with(|| self.source.cmp(&other.source))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Relation {
    pub terms: Vec<(Scalar, Path)>,
}

/// A validated quiver with relations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuiverSpec {
    pub field: Field,
    pub vertices: Vec<String>,
    pub arrows: Vec<Arrow>,
    pub relations: Vec<Relation>,
    pub max_len_hint: Option<usize>,
}

#[derive(Debug, Deserialize, Serialize)]
#[serde(untagged)]
enum RawField {
    Name(String),
    Prime {
        #[serde(rename = "Fp")]
        fp: u64,
    },
}

#[derive(Debug, Deserialize, Serialize)]
struct RawArrow {
    name: String,
    from: String,
    to: String,
}

#[derive(Debug, Deserialize, Serialize)]
struct RawTerm {
    coeff: String,
    path: Vec<String>,
}

#[derive(Debug, Deserialize, Serialize)]
struct RawSpec {
    #[serde(default)]
    field: Option<RawField>,
    vertices: Vec<String>,
    arrows: Vec<RawArrow>,
    #[serde(default)]
    relations: Vec<Vec<RawTerm>>,
    #[serde(default)]
    max_len_hint: Option<usize>,
}

/// Parses the JSON algebra format.
pub fn parse_algebra(text: &str) -> Result<QuiverSpec> {
    parse_algebra_with(text, None)
}

/// Parses the JSON algebra format, optionally overriding the declared field.
pub fn parse_algebra_with(text: &str, field_override: Option<Field>) -> Result<QuiverSpec> {
    let raw: RawSpec = serde_json::from_str(text)?;
    let field = match field_override {
        Some(f) => f,
        None => match raw.field {
            None => Field::Q,
            Some(RawField::Name(n)) => n.parse()?,
            Some(RawField::Prime { fp }) => Field::prime(fp)?,
        },
    };
    let mut problems = Vec::new();
    let vertex_of = |name: &str| raw.vertices.iter().position(|v| v == name);
    for (i, v) in raw.vertices.iter().enumerate() {
        if raw.vertices[..i].contains(v) {
            problems.push(format!("duplicate vertex `{v}`"));
        }
    }
    let mut arrows = Vec::new();
    for (i, a) in raw.arrows.iter().enumerate() {
        if raw.arrows[..i].iter().any(|b| b.name == a.name) {
            problems.push(format!("duplicate arrow `{}`", a.name));
        }
        if a.name.ends_with("^-1") {
            problems.push(format!("arrow name `{}` clashes with inverse-letter syntax", a.name));
        }
        let source = vertex_of(&a.from);
        let target = vertex_of(&a.to);
        if source.is_none() {
            problems.push(format!("arrow `{}` has unknown source vertex `{}`", a.name, a.from));
        }
        if target.is_none() {
            problems.push(format!("arrow `{}` has unknown target vertex `{}`", a.name, a.to));
        }
        arrows.push(Arrow {
            name: a.name.clone(),
            source: source.unwrap_or(0),
            target: target.unwrap_or(0),
        });
    }
    if !problems.is_empty() {
        return Err(Error::InvalidSpec(problems));
    }
    let mut relations = Vec::new();
    for (ri, rel) in raw.relations.iter().enumerate() {
        let mut terms = Vec::new();
        if rel.is_empty() {
            problems.push(format!("relation {ri} is empty"));
        }
        for term in rel {
            let coeff = match field.parse(&term.coeff) {
                Ok(c) => c,
                Err(e) => {
                    problems.push(format!("relation {ri}: {e}"));
                    continue;
                }
            };
            let mut idx = Vec::new();
            for name in &term.path {
                match arrows.iter().position(|a| &a.name == name) {
                    Some(i) => idx.push(i),
                    None => problems.push(format!("relation {ri}: unknown arrow `{name}`")),
                }
            }
            if idx.len() != term.path.len() {
                continue;
            }
            if idx.len() < 2 {
                problems.push(format!(
                    "relation {ri}: term [{}] has length {} < 2",
                    term.path.join(","),
                    idx.len()
                ));
                continue;
            }
            match path_from_indices(&arrows, &idx) {
                Ok(p) => terms.push((coeff, p)),
                Err(e) => problems.push(format!("relation {ri}: {e}")),
            }
        }
        if let Some((_, first)) = terms.first() {
            if terms.iter().any(|(_, p)| p.source != first.source || p.target != first.target) {
                problems.push(format!("relation {ri}: terms do not share source and target"));
            }
        }
        relations.push(Relation { terms });
    }
    if !problems.is_empty() {
        return Err(Error::InvalidSpec(problems));
    }
    Ok(QuiverSpec { field, vertices: raw.vertices, arrows, relations, max_len_hint: raw.max_len_hint })
}

fn path_from_indices(arrows: &[Arrow], idx: &[usize]) -> Result<Path> {
    let Some(&last) = idx.last() else {
        return Err(Error::Parse("empty path".into()));
    };
    for w in idx.windows(2) {
        let (outer, inner) = (&arrows[w[0]], &arrows[w[1]]);
        if inner.target != outer.source {
            return Err(Error::EndpointMismatch(format!(
                "`{}` cannot follow `{}`",
                outer.name, inner.name
            )));
        }
    }
    Ok(Path { source: arrows[last].source, target: arrows[idx[0]].target, arrows: idx.to_vec() })
}

impl QuiverSpec {
    pub fn vertex_index(&self, name: &str) -> Result<usize> {
        self.vertices
            .iter()
            .position(|v| v == name)
            .ok_or_else(|| Error::UnknownVertex(name.to_string()))
    }

    pub fn arrow_index(&self, name: &str) -> Result<usize> {
        self.arrows
            .iter()
            .position(|a| a.name == name)
            .ok_or_else(|| Error::UnknownArrow(name.to_string()))
    }

    /// Path from arrow names in written order (leftmost applied last).
    pub fn path<S: AsRef<str>>(&self, names: &[S]) -> Result<Path> {
        let idx = names.iter().map(|n| self.arrow_index(n.as_ref())).collect::<Result<Vec<_>>>()?;
        path_from_indices(&self.arrows, &idx)
    }

    pub fn arrow_path(&self, a: usize) -> Path {
        let arrow = &self.arrows[a];
        Path { source: arrow.source, target: arrow.target, arrows: vec![a] }
    }

    /// `beta ∘ alpha`: first `alpha`, then `beta`.
    pub fn compose(&self, beta: &Path, alpha: &Path) -> Result<Path> {
        if alpha.target != beta.source {
            return Err(Error::EndpointMismatch(format!(
                "{} ends at {} but {} starts at {}",
                self.path_label(alpha),
                self.vertices[alpha.target],
                self.path_label(beta),
                self.vertices[beta.source]
            )));
        }
        let mut arrows = beta.arrows.clone();
        arrows.extend_from_slice(&alpha.arrows);
        Ok(Path { source: alpha.source, target: beta.target, arrows })
    }

    /// Human-readable path; single-letter arrow names are concatenated.
    pub fn path_label(&self, p: &Path) -> String {
        if p.is_trivial() {
            return format!("e{}", self.vertices[p.source]);
        }
        let names: Vec<&str> = p.arrows.iter().map(|&a| self.arrows[a].name.as_str()).collect();
        join_names(&names)
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn num_arrows(&self) -> usize {
        self.arrows.len()
    }

    pub fn longest_relation_term(&self) -> usize {
        self.relations
            .iter()
            .flat_map(|r| r.terms.iter().map(|(_, p)| p.len()))
            .max()
            .unwrap_or(0)
    }

    /// The spec of the opposite quiver: arrows reversed, relation paths reversed.
    pub fn opposite(&self) -> QuiverSpec {
        let arrows = self
            .arrows
            .iter()
            .map(|a| Arrow { name: a.name.clone(), source: a.target, target: a.source })
            .collect();
        let relations = self
            .relations
            .iter()
            .map(|r| Relation {
                terms: r.terms.iter().map(|(c, p)| (c.clone(), reverse_path(p))).collect(),
            })
            .collect();
        QuiverSpec {
            field: self.field,
            vertices: self.vertices.clone(),
            arrows,
            relations,
            max_len_hint: self.max_len_hint,
        }
    }

    /// Serializes back into the JSON algebra format.
    pub fn to_json(&self) -> String {
        let raw = RawSpec {
            field: Some(match self.field {
                Field::Q => RawField::Name("Q".into()),
                Field::Fp(p) => RawField::Prime { fp: p as u64 },
            }),
            vertices: self.vertices.clone(),
            arrows: self
                .arrows
                .iter()
                .map(|a| RawArrow {
                    name: a.name.clone(),
                    from: self.vertices[a.source].clone(),
                    to: self.vertices[a.target].clone(),
                })
                .collect(),
            relations: self
                .relations
                .iter()
                .map(|r| {
                    r.terms
                        .iter()
                        .map(|(c, p)| RawTerm {
                            coeff: c.to_string(),
                            path: p.arrows.iter().map(|&a| self.arrows[a].name.clone()).collect(),
                        })
                        .collect()
                })
                .collect(),
            max_len_hint: self.max_len_hint,
        };
        serde_json::to_string_pretty(&raw).expect("spec serializes")
    }
}

pub(crate) fn join_names(names: &[&str]) -> String {
    if names.iter().all(|n| n.chars().count() == 1) {
        names.concat()
    } else {
        names.join(" ")
    }
}

fn reverse_path(p: &Path) -> Path {
    Path { source: p.target, target: p.source, arrows: p.arrows.iter().rev().copied().collect() }
}

/// Coordinates of an algebra element in the path basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlgebraElement(pub Vec<Scalar>);

impl AlgebraElement {
    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Scalar::is_zero)
    }
}

type Sparse = Vec<(usize, Scalar)>;

/// A finite-dimensional quotient `kQ/<ρ>` with a basis of path representatives.
pub struct Algebra {
    spec: QuiverSpec,
    basis: Vec<Path>,
    mult: Vec<Vec<Sparse>>,
    arrow_basis: Vec<usize>,
    vertex_basis: Vec<usize>,
    nilpotency: usize,
    truncation: usize,
    opposite: OnceLock<Arc<Algebra>>,
    opposite_of: OnceLock<Weak<Algebra>>,
    pub(crate) gorenstein_cache: Mutex<HashMap<usize, GorensteinData>>,
}

impl fmt::Debug for Algebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Algebra")
            .field("vertices", &self.spec.vertices)
            .field("dim", &self.dim())
            .field("nilpotency", &self.nilpotency)
            .finish()
    }
}

impl PartialEq for Algebra {
    fn eq(&self, other: &Algebra) -> bool {
        std::ptr::eq(self, other) || self.spec == other.spec
    }
}

/// Per (source, target) block of the truncated path algebra: columns ordered by
/// length ascending and, within a length, lexicographically descending. Echelon
/// rows are kept with the smallest column leading.
struct Block {
    columns: Vec<usize>,
    echelon: BTreeMap<usize, Sparse>,
}

impl Block {
    fn reduce(&self, v: Sparse) -> Sparse {
        let mut acc: BTreeMap<usize, Scalar> = v.into_iter().filter(|(_, s)| !s.is_zero()).collect();
        let mut cursor = 0;
        loop {
            let next = acc.range(cursor..).map(|(c, _)| *c).find(|c| self.echelon.contains_key(c));
            let Some(c) = next else { break };
            let f = acc.remove(&c).expect("present");
            for (j, r) in &self.echelon[&c] {
                if *j == c {
                    continue;
                }
                let e = acc.entry(*j).or_insert_with(|| f.field().zero());
                *e -= &(&f * r);
                if e.is_zero() {
                    acc.remove(j);
                }
            }
            cursor = c + 1;
        }
        acc.into_iter().collect()
    }

    fn insert(&mut self, v: Sparse) {
        let (lead, lv) = v[0].clone();
        let inv = lv.inv();
        let row = v.into_iter().map(|(j, s)| (j, &s * &inv)).collect();
        self.echelon.insert(lead, row);
    }
}

struct PathTable {
    paths: Vec<Path>,
    lookup: HashMap<(usize, Vec<usize>), usize>,
    /// (block, column) of each path.
    place: Vec<(usize, usize)>,
}

impl PathTable {
    fn enumerate(spec: &QuiverSpec, max_len: usize) -> Result<PathTable> {
        let nv = spec.num_vertices();
        let mut paths: Vec<Path> = (0..nv).map(Path::trivial).collect();
        let mut frontier: Vec<usize> = (0..nv).collect();
        for _ in 0..max_len {
            let mut next = Vec::new();
            for &pi in &frontier {
                for (ai, a) in spec.arrows.iter().enumerate() {
                    if a.source != paths[pi].target {
                        continue;
                    }
                    let mut arrows = vec![ai];
                    arrows.extend_from_slice(&paths[pi].arrows);
                    next.push(paths.len());
                    paths.push(Path { source: paths[pi].source, target: a.target, arrows });
                    if paths.len() > PATH_COUNT_CAP {
                        return Err(Error::CapExceeded(format!(
                            "more than {PATH_COUNT_CAP} paths of length <= {max_len}"
                        )));
                    }
                }
            }
            frontier = next;
        }
        let lookup = paths.iter().enumerate().map(|(i, p)| ((p.source, p.arrows.clone()), i)).collect();
        Ok(PathTable { paths, lookup, place: Vec::new() })
    }

    fn find(&self, source: usize, arrows: &[usize]) -> Option<usize> {
        self.lookup.get(&(source, arrows.to_vec())).copied()
    }
}

impl Algebra {
    /// Builds the quotient algebra. The relation ideal is closed under left and
    /// right multiplication by arrows inside a truncated path algebra whose
    /// truncation length doubles until every path of that length lies in the ideal.
    pub fn build(spec: QuiverSpec) -> Result<Arc<Algebra>> {
        let start = spec.max_len_hint.unwrap_or(2 * spec.longest_relation_term()).max(2);
        let mut n = start;
        loop {
            if let Some(alg) = Self::try_build(&spec, n)? {
                return Ok(Arc::new(alg));
            }
            if n >= TRUNCATION_CAP {
                return Err(Error::NotAdmissible(format!(
                    "some path of length {TRUNCATION_CAP} survives the relations"
                )));
            }
            n = (2 * n).min(TRUNCATION_CAP);
        }
    }

    fn try_build(spec: &QuiverSpec, n: usize) -> Result<Option<Algebra>> {
        let nv = spec.num_vertices();
        let mut table = PathTable::enumerate(spec, n)?;
        let mut members: Vec<Vec<usize>> = vec![Vec::new(); nv * nv];
        for (i, p) in table.paths.iter().enumerate() {
            members[p.source * nv + p.target].push(i);
        }
        let mut blocks = Vec::with_capacity(nv * nv);
        table.place = vec![(0, 0); table.paths.len()];
        for (b, mem) in members.into_iter().enumerate() {
            let mut cols = mem;
            cols.sort_by(|&x, &y| {
                let (px, py) = (&table.paths[x], &table.paths[y]);
                px.len().cmp(&py.len()).then_with(|| py.arrows.cmp(&px.arrows))
            });
            for (c, &pi) in cols.iter().enumerate() {
                table.place[pi] = (b, c);
            }
            blocks.push(Block { columns: cols, echelon: BTreeMap::new() });
        }

        let mut queue: VecDeque<(usize, Sparse)> = VecDeque::new();
        for rel in &spec.relations {
            let mut v = Vec::new();
            let mut block = 0;
            for (c, p) in &rel.terms {
                let pi = table.find(p.source, &p.arrows).expect("relation path enumerated");
                let (b, col) = table.place[pi];
                block = b;
                v.push((col, c.clone()));
            }
            v.sort_by_key(|(c, _)| *c);
            queue.push_back((block, merge_sorted(v)));
        }
        while let Some((b, v)) = queue.pop_front() {
            let rem = blocks[b].reduce(v);
            if rem.is_empty() {
                continue;
            }
            blocks[b].insert(rem.clone());
            let (s, t) = (b / nv, b % nv);
            for (ai, a) in spec.arrows.iter().enumerate() {
                if a.source == t {
                    let mut out = Vec::new();
                    for (col, c) in &rem {
                        let p = &table.paths[blocks[b].columns[*col]];
                        let mut arrows = vec![ai];
                        arrows.extend_from_slice(&p.arrows);
                        if let Some(q) = table.find(s, &arrows) {
                            out.push((table.place[q].1, c.clone()));
                        }
                    }
                    if !out.is_empty() {
                        out.sort_by_key(|(c, _)| *c);
                        queue.push_back((s * nv + a.target, out));
                    }
                }
                if a.target == s {
                    let mut out = Vec::new();
                    for (col, c) in &rem {
                        let p = &table.paths[blocks[b].columns[*col]];
                        let mut arrows = p.arrows.clone();
                        arrows.push(ai);
                        if let Some(q) = table.find(a.source, &arrows) {
                            out.push((table.place[q].1, c.clone()));
                        }
                    }
                    if !out.is_empty() {
                        out.sort_by_key(|(c, _)| *c);
                        queue.push_back((a.source * nv + t, out));
                    }
                }
            }
        }

        // Admissibility: every path of length n lies in the ideal.
        for (i, p) in table.paths.iter().enumerate() {
            if p.len() == n {
                let (b, c) = table.place[i];
                if !blocks[b].reduce(vec![(c, spec.field.one())]).is_empty() {
                    return Ok(None);
                }
            }
        }

        // Basis: non-pivot columns.
        let mut basis: Vec<Path> = Vec::new();
        for blk in &blocks {
            for (c, &pi) in blk.columns.iter().enumerate() {
                if !blk.echelon.contains_key(&c) {
                    basis.push(table.paths[pi].clone());
                }
            }
        }
        basis.sort_by(|a, b| a.cmp_deglex(b));
        let basis_index: HashMap<(usize, Vec<usize>), usize> =
            basis.iter().enumerate().map(|(i, p)| ((p.source, p.arrows.clone()), i)).collect();
        let to_basis = |b: usize, c: usize| -> usize {
            let p = &table.paths[blocks[b].columns[c]];
            basis_index[&(p.source, p.arrows.clone())]
        };

        let dim = basis.len();
        let mut mult = vec![vec![Vec::new(); dim]; dim];
        for (i, p) in basis.iter().enumerate() {
            for (j, q) in basis.iter().enumerate() {
                if q.target != p.source {
                    continue;
                }
                let mut arrows = p.arrows.clone();
                arrows.extend_from_slice(&q.arrows);
                if arrows.len() > n {
                    continue;
                }
                let pi = table.find(q.source, &arrows).expect("product path enumerated");
                let (b, c) = table.place[pi];
                let mut coords: Sparse =
                    blocks[b].reduce(vec![(c, spec.field.one())]).into_iter().map(|(c, s)| (to_basis(b, c), s)).collect();
                coords.sort_by_key(|(k, _)| *k);
                mult[i][j] = coords;
            }
        }

        let arrow_basis = (0..spec.num_arrows())
            .map(|a| {
                let arrow = &spec.arrows[a];
                basis_index.get(&(arrow.source, vec![a])).copied().ok_or_else(|| {
                    Error::Internal(format!("arrow `{}` fell into the relation ideal", arrow.name))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let vertex_basis = (0..nv).map(|v| basis_index[&(v, Vec::new())]).collect();
        let nilpotency = basis.iter().map(|p| p.len() + 1).max().unwrap_or(0);
        Ok(Some(Algebra {
            spec: spec.clone(),
            basis,
            mult,
            arrow_basis,
            vertex_basis,
            nilpotency,
            truncation: n,
            opposite: OnceLock::new(),
            opposite_of: OnceLock::new(),
            gorenstein_cache: Mutex::new(HashMap::new()),
        }))
    }

    pub fn spec(&self) -> &QuiverSpec {
        &self.spec
    }

    pub fn field(&self) -> Field {
        self.spec.field
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Path] {
        &self.basis
    }

    pub fn num_vertices(&self) -> usize {
        self.spec.num_vertices()
    }

    /// Least `N` with `J^N = 0`.
    pub fn nilpotency(&self) -> usize {
        self.nilpotency
    }

    /// Truncation length at which the relation ideal was certified.
    pub fn truncation(&self) -> usize {
        self.truncation
    }

    pub fn arrow_basis_index(&self, a: usize) -> usize {
        self.arrow_basis[a]
    }

    pub fn vertex_basis_index(&self, v: usize) -> usize {
        self.vertex_basis[v]
    }

    /// Coordinates of `basis[i] * basis[j]`.
    pub fn product_of_basis(&self, i: usize, j: usize) -> &[(usize, Scalar)] {
        &self.mult[i][j]
    }

    pub fn basis_element(&self, i: usize) -> AlgebraElement {
        let mut v = vec![self.field().zero(); self.dim()];
        v[i] = self.field().one();
        AlgebraElement(v)
    }

    pub fn one(&self) -> AlgebraElement {
        let mut v = vec![self.field().zero(); self.dim()];
        for &i in &self.vertex_basis {
            v[i] = self.field().one();
        }
        AlgebraElement(v)
    }

    pub fn idempotent(&self, v: usize) -> AlgebraElement {
        self.basis_element(self.vertex_basis[v])
    }

    pub fn multiply(&self, x: &AlgebraElement, y: &AlgebraElement) -> AlgebraElement {
        let mut out = vec![self.field().zero(); self.dim()];
        for (i, xi) in x.0.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, yj) in y.0.iter().enumerate() {
                if yj.is_zero() {
                    continue;
                }
                let c = xi * yj;
                for (k, s) in &self.mult[i][j] {
                    out[*k] += &(&c * s);
                }
            }
        }
        AlgebraElement(out)
    }

    /// Image of an arbitrary path of the quiver in the quotient.
    pub fn path_element(&self, p: &Path) -> AlgebraElement {
        let mut acc = self.idempotent(p.source);
        for a in p.applied() {
            acc = self.multiply(&self.basis_element(self.arrow_basis[a]), &acc);
        }
        acc
    }

    /// Whether the path lies in the relation ideal.
    pub fn path_is_zero(&self, p: &Path) -> bool {
        self.path_element(p).is_zero()
    }

    /// Image of a linear combination of paths.
    pub fn relation_element(&self, r: &Relation) -> AlgebraElement {
        let mut out = vec![self.field().zero(); self.dim()];
        for (c, p) in &r.terms {
            for (o, s) in out.iter_mut().zip(self.path_element(p).0) {
                *o += &(c * &s);
            }
        }
        AlgebraElement(out)
    }

    /// Indices of basis paths of length at least `n`; a basis of `J^n`.
    pub fn radical_power_basis(&self, n: usize) -> Vec<usize> {
        (0..self.dim()).filter(|&i| self.basis[i].len() >= n).collect()
    }

    /// Basis indices of paths starting at `v`, grouped by target vertex.
    pub fn paths_from(&self, v: usize) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.num_vertices()];
        for (i, p) in self.basis.iter().enumerate() {
            if p.source == v {
                out[p.target].push(i);
            }
        }
        out
    }

    /// The opposite algebra. `A.opposite().opposite()` is `A` itself.
    pub fn opposite(self: &Arc<Self>) -> Arc<Algebra> {
        if let Some(parent) = self.opposite_of.get().and_then(Weak::upgrade) {
            return parent;
        }
        self.opposite
            .get_or_init(|| {
                let dim = self.dim();
                let mut mult = vec![vec![Vec::new(); dim]; dim];
                for (i, row) in mult.iter_mut().enumerate() {
                    for (j, cell) in row.iter_mut().enumerate() {
                        *cell = self.mult[j][i].clone();
                    }
                }
                let op = Algebra {
                    spec: self.spec.opposite(),
                    basis: self.basis.iter().map(reverse_path).collect(),
                    mult,
                    arrow_basis: self.arrow_basis.clone(),
                    vertex_basis: self.vertex_basis.clone(),
                    nilpotency: self.nilpotency,
                    truncation: self.truncation,
                    opposite: OnceLock::new(),
                    opposite_of: OnceLock::new(),
                    gorenstein_cache: Mutex::new(HashMap::new()),
                };
                let _ = op.opposite_of.set(Arc::downgrade(self));
                Arc::new(op)
            })
            .clone()
    }
}

fn merge_sorted(v: Sparse) -> Sparse {
    let mut out: Sparse = Vec::with_capacity(v.len());
    for (c, s) in v {
        match out.last_mut() {
            Some((lc, ls)) if *lc == c => *ls += &s,
            _ => out.push((c, s)),
        }
    }
    out.retain(|(_, s)| !s.is_zero());
    out
}

/// Parses and builds in one step.
pub fn build_algebra(spec: QuiverSpec) -> Result<Arc<Algebra>> {
    Algebra::build(spec)
}
