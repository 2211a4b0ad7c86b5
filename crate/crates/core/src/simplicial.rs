//! Oriented simplicial complexes over the rationals: loading, boundary,
//! closures, and the Alexander-Whitney coproduct with its symmetrization.
//!
//! Orientation of a listed simplex is its input vertex order; generated faces
//! are stored with sorted vertex order and incidence signs follow the
//! alternating-face rule. Two listed simplices may share the same vertex set
//! (the two-edge circle model needs this); their proper faces are unified.

use crate::linalg::{ChainComplexData, RationalMatrix};
use crate::{Error, Rat};
use num_traits::Zero;
use serde::Deserialize;
use std::collections::{BTreeMap, BTreeSet};

/// Index of a cell in its complex, stable under the deterministic global
/// order (dimension, then sorted vertex labels, then listing occurrence).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CellId(pub u32);

impl CellId {
    pub fn idx(self) -> usize {
        self.0 as usize
    }
}

/// Formal rational chain, indexed by cells.
pub type Chain = BTreeMap<CellId, Rat>;

pub fn chain_insert(chain: &mut Chain, cell: CellId, coeff: Rat) {
    if coeff.is_zero() {
        return;
    }
    let slot = chain.entry(cell).or_insert_with(Rat::zero);
    *slot += coeff;
    if slot.is_zero() {
        chain.remove(&cell);
    }
}

#[derive(Clone, Debug)]
pub struct Simplex {
    /// Vertex indices in orientation order.
    pub vertices: Vec<u32>,
    /// Distinguishes listed simplices sharing a vertex set.
    pub occurrence: u32,
    /// Boundary faces with incidence signs.
    pub boundary: Vec<(CellId, i64)>,
}

impl Simplex {
    pub fn dim(&self) -> usize {
        self.vertices.len() - 1
    }
}

#[derive(Clone, Debug)]
pub struct SimplicialComplex {
    pub name: String,
    vertex_labels: Vec<String>,
    cells: Vec<Simplex>,
    by_dim: Vec<Vec<CellId>>,
    /// Requested fundamental class, if the input document carried one.
    mu_spec: Option<Vec<(Vec<String>, Rat)>>,
}

#[derive(Deserialize)]
struct InputDoc {
    #[serde(default)]
    name: String,
    simplices: Vec<Vec<String>>,
    #[serde(default)]
    fundamental_class: Option<Vec<InputMuTerm>>,
}

#[derive(Deserialize)]
struct InputMuTerm {
    simplex: Vec<String>,
    coeff: String,
}

fn sort_perm_sign(tuple: &[u32]) -> (Vec<u32>, i64) {
    let mut idx: Vec<usize> = (0..tuple.len()).collect();
    idx.sort_by_key(|&i| tuple[i]);
    // count inversions of the sorting permutation
    let mut sign = 1i64;
    for i in 0..idx.len() {
        for j in i + 1..idx.len() {
            if idx[i] > idx[j] {
                sign = -sign;
            }
        }
    }
    (idx.iter().map(|&i| tuple[i]).collect(), sign)
}

impl SimplicialComplex {
    pub fn load_json(text: &str) -> Result<Self, Error> {
        let doc: InputDoc = serde_json::from_str(text)?;
        let simplices: Vec<Vec<&str>> = doc
            .simplices
            .iter()
            .map(|s| s.iter().map(|v| v.as_str()).collect())
            .collect();
        let mut complex = Self::from_simplices(&doc.name, &simplices)?;
        if let Some(terms) = doc.fundamental_class {
            let mut mu = Vec::new();
            for t in terms {
                mu.push((t.simplex, crate::parse_rat(&t.coeff)?));
            }
            complex.mu_spec = Some(mu);
        }
        Ok(complex)
    }

    pub fn from_simplices(name: &str, listed: &[Vec<&str>]) -> Result<Self, Error> {
        if listed.is_empty() {
            return Err(Error::InvalidComplex("empty document".into()));
        }
        // vertex ids by sorted label order
        let mut label_set: BTreeSet<&str> = BTreeSet::new();
        for s in listed {
            if s.is_empty() {
                return Err(Error::InvalidComplex("empty simplex".into()));
            }
            let mut seen = BTreeSet::new();
            for v in s {
                if !seen.insert(v) {
                    return Err(Error::InvalidComplex(format!(
                        "duplicate vertex `{v}` in simplex {s:?}"
                    )));
                }
                label_set.insert(v);
            }
        }
        let vertex_labels: Vec<String> = label_set.iter().map(|s| s.to_string()).collect();
        let vid = |label: &str| -> u32 {
            vertex_labels.binary_search_by(|l| l.as_str().cmp(label)).unwrap() as u32
        };

        // listed simplices, as (oriented tuple, sorted set)
        let listed_tuples: Vec<Vec<u32>> = listed
            .iter()
            .map(|s| s.iter().map(|v| vid(v)).collect())
            .collect();

        // proper faces of listed simplices, keyed by (dim, sorted vertex set)
        let mut face_keys: BTreeSet<(usize, Vec<u32>)> = BTreeSet::new();
        for tuple in &listed_tuples {
            let sorted: Vec<u32> = {
                let mut t = tuple.clone();
                t.sort_unstable();
                t
            };
            let n = sorted.len();
            // all proper nonempty subsets
            for mask in 1..(1u32 << n) - 1 {
                let sub: Vec<u32> = (0..n)
                    .filter(|i| mask & (1 << i) != 0)
                    .map(|i| sorted[i])
                    .collect();
                face_keys.insert((sub.len() - 1, sub));
            }
        }

        // resolve listed simplices against face keys
        struct Pending {
            tuple: Vec<u32>,   // orientation order
            sorted: Vec<u32>,  // canonical set
            occurrence: u32,
        }
        let mut pending: Vec<Pending> = Vec::new();
        let mut listed_by_key: BTreeMap<(usize, Vec<u32>), u32> = BTreeMap::new();
        for tuple in &listed_tuples {
            let (sorted, sign) = sort_perm_sign(tuple);
            let key = (sorted.len() - 1, sorted.clone());
            if face_keys.contains(&key) {
                // coincides with a face of another listed simplex: unify, but the
                // listed orientation must agree with the canonical face orientation
                if listed_by_key.contains_key(&key) {
                    return Err(Error::InvalidComplex(format!(
                        "simplex {tuple:?} repeats a face of another simplex"
                    )));
                }
                if sign < 0 {
                    return Err(Error::InvalidComplex(format!(
                        "repeated simplex {tuple:?} with conflicting orientation"
                    )));
                }
                continue; // the face generation below will create it
            }
            let occurrence = *listed_by_key
                .entry(key)
                .and_modify(|o| *o += 1)
                .or_insert(0);
            pending.push(Pending {
                tuple: tuple.clone(),
                sorted,
                occurrence,
            });
        }

        // global deterministic order: (dim, sorted labels, occurrence);
        // face cells first carry occurrence 0 and sorted orientation.
        #[derive(Clone)]
        struct Proto {
            key: (usize, Vec<u32>, u32),
            tuple: Vec<u32>,
        }
        let mut protos: Vec<Proto> = Vec::new();
        for (dim, sorted) in &face_keys {
            protos.push(Proto {
                key: (*dim, sorted.clone(), 0),
                tuple: sorted.clone(),
            });
        }
        for p in &pending {
            protos.push(Proto {
                key: (p.sorted.len() - 1, p.sorted.clone(), p.occurrence),
                tuple: p.tuple.clone(),
            });
        }
        protos.sort_by(|a, b| a.key.cmp(&b.key));

        let lookup: BTreeMap<(usize, Vec<u32>, u32), CellId> = protos
            .iter()
            .enumerate()
            .map(|(i, p)| (p.key.clone(), CellId(i as u32)))
            .collect();
        let face_id = |sorted: &[u32]| -> CellId {
            lookup[&(sorted.len() - 1, sorted.to_vec(), 0)]
        };

        let mut cells: Vec<Simplex> = Vec::with_capacity(protos.len());
        for p in &protos {
            let mut boundary = Vec::new();
            if p.tuple.len() > 1 {
                for i in 0..p.tuple.len() {
                    let mut face: Vec<u32> = p.tuple.clone();
                    face.remove(i);
                    let (sorted, perm_sign) = sort_perm_sign(&face);
                    let sign = if i % 2 == 0 { 1 } else { -1 } * perm_sign;
                    boundary.push((face_id(&sorted), sign));
                }
            }
            cells.push(Simplex {
                vertices: p.tuple.clone(),
                occurrence: p.key.2,
                boundary,
            });
        }

        let max_dim = cells.iter().map(|c| c.dim()).max().unwrap_or(0);
        let mut by_dim = vec![Vec::new(); max_dim + 1];
        for (i, c) in cells.iter().enumerate() {
            by_dim[c.dim()].push(CellId(i as u32));
        }

        let complex = Self {
            name: name.to_string(),
            vertex_labels,
            cells,
            by_dim,
            mu_spec: None,
        };
        complex.validate()?;
        Ok(complex)
    }

    fn validate(&self) -> Result<(), Error> {
        self.chain_complex_data().validate().map_err(|_| {
            Error::InvalidComplex("boundary does not square to zero".into())
        })
    }

    pub fn dim(&self) -> usize {
        self.by_dim.len() - 1
    }

    pub fn cell_count(&self) -> usize {
        self.cells.len()
    }

    pub fn cells(&self) -> impl Iterator<Item = CellId> + '_ {
        (0..self.cells.len()).map(|i| CellId(i as u32))
    }

    pub fn cells_of_dim(&self, k: usize) -> &[CellId] {
        self.by_dim.get(k).map(|v| v.as_slice()).unwrap_or(&[])
    }

    pub fn cell(&self, c: CellId) -> &Simplex {
        &self.cells[c.idx()]
    }

    pub fn dim_of(&self, c: CellId) -> usize {
        self.cell(c).dim()
    }

    pub fn vertex_label(&self, v: u32) -> &str {
        &self.vertex_labels[v as usize]
    }

    /// Display name: vertex label, or the oriented tuple `(a,b,...)`, with a
    /// `#n` suffix when several listed cells share a vertex set.
    pub fn display_name(&self, c: CellId) -> String {
        let cell = self.cell(c);
        let base = if cell.dim() == 0 {
            self.vertex_label(cell.vertices[0]).to_string()
        } else {
            let labels: Vec<&str> = cell
                .vertices
                .iter()
                .map(|&v| self.vertex_label(v))
                .collect();
            format!("({})", labels.join(","))
        };
        if cell.occurrence > 0 {
            format!("{base}#{}", cell.occurrence + 1)
        } else {
            base
        }
    }

    /// Position of a cell inside its dimension stratum.
    pub fn index_in_dim(&self, c: CellId) -> usize {
        self.by_dim[self.dim_of(c)]
            .iter()
            .position(|&x| x == c)
            .expect("cell in stratum")
    }

    /// Geometric boundary of a cell as a chain.
    pub fn boundary_chain(&self, c: CellId) -> Chain {
        let mut out = Chain::new();
        for &(f, s) in &self.cell(c).boundary {
            chain_insert(&mut out, f, crate::rat(s, 1));
        }
        out
    }

    /// Boundary matrix from degree `k` to degree `k-1`.
    pub fn boundary_matrix(&self, k: usize) -> RationalMatrix {
        let rows = if k >= 1 { self.cells_of_dim(k - 1).len() } else { 0 };
        let cols = self.cells_of_dim(k).len();
        let mut m = RationalMatrix::zero(rows, cols);
        if k == 0 {
            return m;
        }
        for (j, &c) in self.cells_of_dim(k).iter().enumerate() {
            for &(f, s) in &self.cell(c).boundary {
                m.add_to(self.index_in_dim(f), j, crate::rat(s, 1));
            }
        }
        m
    }

    pub fn chain_complex_data(&self) -> ChainComplexData {
        let dims: Vec<usize> = self.by_dim.iter().map(|v| v.len()).collect();
        let d: Vec<RationalMatrix> = (0..dims.len()).map(|k| self.boundary_matrix(k)).collect();
        ChainComplexData { dims, d }
    }

    /// Cells of the closure of `c`: the cell together with its iterated faces.
    pub fn closure(&self, c: CellId) -> Result<Vec<CellId>, Error> {
        if c.idx() >= self.cells.len() {
            return Err(Error::UnknownSimplex(format!("{c:?}")));
        }
        let mut seen: BTreeSet<CellId> = BTreeSet::new();
        let mut stack = vec![c];
        while let Some(x) = stack.pop() {
            if seen.insert(x) {
                for &(f, _) in &self.cell(x).boundary {
                    stack.push(f);
                }
            }
        }
        Ok(seen.into_iter().collect())
    }

    /// Chain complex of the closure subcomplex, with the cell index map.
    pub fn closure_complex(&self, c: CellId) -> Result<(ChainComplexData, Vec<Vec<CellId>>), Error> {
        let cls = self.closure(c)?;
        let top = cls.iter().map(|&x| self.dim_of(x)).max().unwrap();
        let mut strata: Vec<Vec<CellId>> = vec![Vec::new(); top + 1];
        for &x in &cls {
            strata[self.dim_of(x)].push(x);
        }
        let pos: BTreeMap<CellId, usize> = strata
            .iter()
            .flat_map(|s| s.iter().enumerate().map(|(i, &x)| (x, i)))
            .collect();
        let dims: Vec<usize> = strata.iter().map(|s| s.len()).collect();
        let mut d: Vec<RationalMatrix> = Vec::new();
        for k in 0..dims.len() {
            let rows = if k >= 1 { dims[k - 1] } else { 0 };
            let mut m = RationalMatrix::zero(rows, dims[k]);
            if k >= 1 {
                for (j, &x) in strata[k].iter().enumerate() {
                    for &(f, s) in &self.cell(x).boundary {
                        m.add_to(pos[&f], j, crate::rat(s, 1));
                    }
                }
            }
            d.push(m);
        }
        Ok((ChainComplexData { dims, d }, strata))
    }

    /// H₀ ≅ ℚ and Hₖ = 0 for k > 0 on the closure of `c`.
    pub fn closure_is_contractible(&self, c: CellId) -> Result<bool, Error> {
        let (cpx, _) = self.closure_complex(c)?;
        let h = crate::linalg::homology_of_complex(&cpx)?;
        Ok(h.betti[0] == 1 && h.betti[1..].iter().all(|&b| b == 0))
    }

    /// Look up the face cell carrying the given sorted vertex tuple.
    fn face_by_sorted(&self, sorted: &[u32]) -> Option<CellId> {
        // occurrence-0 cells are sorted-oriented; binary search over the stratum
        let dim = sorted.len() - 1;
        self.cells_of_dim(dim)
            .iter()
            .copied()
            .find(|&c| self.cell(c).occurrence == 0 && {
                let mut v = self.cell(c).vertices.clone();
                v.sort_unstable();
                v == sorted
            })
    }

    /// Alexander-Whitney coproduct on every cell: for a simplex with ordered
    /// vertices `(v₀,…,vₙ)` the sum over `i = 0..n` of front face ⊗ back face.
    pub fn aw_coproduct(&self) -> Coproduct {
        let mut terms = Vec::with_capacity(self.cells.len());
        for c in self.cells() {
            let tuple = &self.cell(c).vertices;
            let n = tuple.len() - 1;
            let mut out: Vec<(CellId, CellId, Rat)> = Vec::new();
            for i in 0..=n {
                let front = &tuple[..=i];
                let back = &tuple[i..];
                let (front_cell, fs) = self.subtuple_cell(c, front);
                let (back_cell, bs) = self.subtuple_cell(c, back);
                out.push((front_cell, back_cell, crate::rat(fs * bs, 1)));
            }
            terms.push(out);
        }
        Coproduct { terms }
    }

    /// Cell carrying a contiguous sub-tuple of `c`'s vertex order, with the
    /// orientation sign relating the sub-tuple to the stored cell orientation.
    fn subtuple_cell(&self, c: CellId, tuple: &[u32]) -> (CellId, i64) {
        if tuple.len() == self.cell(c).vertices.len() {
            return (c, 1); // the full tuple is the cell itself
        }
        let (sorted, sign) = sort_perm_sign(tuple);
        let face = self
            .face_by_sorted(&sorted)
            .expect("face of a cell is present");
        (face, sign)
    }
}

/// Table of a binary coproduct: per cell, a list of `(left, right, coeff)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Coproduct {
    pub terms: Vec<Vec<(CellId, CellId, Rat)>>,
}

impl Coproduct {
    pub fn of(&self, c: CellId) -> &[(CellId, CellId, Rat)] {
        &self.terms[c.idx()]
    }

    /// `½(Δ + tw∘Δ)` where `tw` swaps the factors with the Koszul sign on
    /// geometric degrees.
    pub fn symmetrize(&self, complex: &SimplicialComplex) -> Coproduct {
        let half = crate::rat(1, 2);
        let mut terms = Vec::with_capacity(self.terms.len());
        for list in &self.terms {
            let mut acc: BTreeMap<(CellId, CellId), Rat> = BTreeMap::new();
            for (x, y, k) in list {
                *acc.entry((*x, *y)).or_insert_with(Rat::zero) += k * &half;
                let sign = if (complex.dim_of(*x) * complex.dim_of(*y)) % 2 == 1 {
                    -crate::rat(1, 1)
                } else {
                    crate::rat(1, 1)
                };
                *acc.entry((*y, *x)).or_insert_with(Rat::zero) += k * &half * sign;
            }
            terms.push(
                acc.into_iter()
                    .filter(|(_, k)| !k.is_zero())
                    .map(|((x, y), k)| (x, y, k))
                    .collect(),
            );
        }
        Coproduct { terms }
    }

    pub fn is_cocommutative(&self, complex: &SimplicialComplex) -> bool {
        self == &self.symmetrize(complex)
    }

    /// `(Δ⊗id)∘Δ = (id⊗Δ)∘Δ` on every cell.
    pub fn is_coassociative(&self, complex: &SimplicialComplex) -> bool {
        for c in complex.cells() {
            let mut lhs: BTreeMap<(CellId, CellId, CellId), Rat> = BTreeMap::new();
            let mut rhs: BTreeMap<(CellId, CellId, CellId), Rat> = BTreeMap::new();
            for (x, y, k) in self.of(c) {
                for (u, v, k2) in self.of(*x) {
                    let e = lhs.entry((*u, *v, *y)).or_insert_with(Rat::zero);
                    *e += k * k2;
                    if e.is_zero() {
                        lhs.remove(&(*u, *v, *y));
                    }
                }
                for (u, v, k2) in self.of(*y) {
                    let e = rhs.entry((*x, *u, *v)).or_insert_with(Rat::zero);
                    *e += k * k2;
                    if e.is_zero() {
                        rhs.remove(&(*x, *u, *v));
                    }
                }
            }
            if lhs != rhs {
                return false;
            }
        }
        true
    }

    /// `Δ∘∂ = (∂⊗id + Koszul·id⊗∂)∘Δ` on every cell (geometric degrees).
    pub fn is_chain_map(&self, complex: &SimplicialComplex) -> bool {
        for c in complex.cells() {
            let mut lhs: BTreeMap<(CellId, CellId), Rat> = BTreeMap::new();
            for (f, s) in complex.boundary_chain(c) {
                for (x, y, k) in self.of(f) {
                    let e = lhs.entry((*x, *y)).or_insert_with(Rat::zero);
                    *e += k * &s;
                    if e.is_zero() {
                        lhs.remove(&(*x, *y));
                    }
                }
            }
            let mut rhs: BTreeMap<(CellId, CellId), Rat> = BTreeMap::new();
            for (x, y, k) in self.of(c) {
                for (f, s) in complex.boundary_chain(*x) {
                    let e = rhs.entry((f, *y)).or_insert_with(Rat::zero);
                    *e += k * &s;
                    if e.is_zero() {
                        rhs.remove(&(f, *y));
                    }
                }
                let sign = if complex.dim_of(*x) % 2 == 1 { -1 } else { 1 };
                for (f, s) in complex.boundary_chain(*y) {
                    let e = rhs.entry((*x, f)).or_insert_with(Rat::zero);
                    *e += k * &s * crate::rat(sign, 1);
                    if e.is_zero() {
                        rhs.remove(&(*x, f));
                    }
                }
            }
            if lhs != rhs {
                return false;
            }
        }
        true
    }

    /// Every output of `Δσ` uses only cells of the closure of `σ`.
    pub fn is_local(&self, complex: &SimplicialComplex) -> bool {
        for c in complex.cells() {
            let cls: BTreeSet<CellId> = complex.closure(c).unwrap().into_iter().collect();
            for (x, y, _) in self.of(c) {
                if !cls.contains(x) || !cls.contains(y) {
                    return false;
                }
            }
        }
        true
    }
}

/// Resolve a fundamental-class request, or compute the primitive top-degree
/// cycle when the input carries none.
pub fn fundamental_class(
    complex: &SimplicialComplex,
    explicit: Option<&[(Vec<String>, Rat)]>,
) -> Result<Chain, Error> {
    let spec = explicit.or(complex.mu_spec.as_deref());
    if let Some(terms) = spec {
        let mut mu = Chain::new();
        for (labels, coeff) in terms {
            let tuple: Vec<u32> = labels
                .iter()
                .map(|l| {
                    complex
                        .vertex_labels
                        .binary_search_by(|x| x.as_str().cmp(l))
                        .map(|i| i as u32)
                        .map_err(|_| Error::UnknownSimplex(format!("vertex `{l}`")))
                })
                .collect::<Result<_, _>>()?;
            // exact match on orientation order first, then sorted match
            let cell = complex
                .cells()
                .find(|&c| complex.cell(c).vertices == tuple)
                .or_else(|| {
                    let (sorted, _) = sort_perm_sign(&tuple);
                    complex.face_by_sorted(&sorted)
                })
                .ok_or_else(|| Error::UnknownSimplex(format!("{labels:?}")))?;
            chain_insert(&mut mu, cell, coeff.clone());
        }
        return Ok(mu);
    }
    // auto mode: primitive generator of the top-degree cycles
    let top = complex.dim();
    let d_top = complex.boundary_matrix(top);
    let kernel = crate::linalg::kernel_basis(&d_top);
    if kernel.len() != 1 {
        return Err(Error::NotACycle(format!(
            "top-degree cycle space has dimension {}, specify fundamental_class explicitly",
            kernel.len()
        )));
    }
    let v = &kernel[0];
    // scale to primitive integer vector with positive leading entry
    let mut lcm = num_bigint::BigInt::from(1);
    for x in v {
        lcm = num_integer::Integer::lcm(&lcm, x.denom());
    }
    let mut mu = Chain::new();
    for (i, x) in v.iter().enumerate() {
        let c = complex.cells_of_dim(top)[i];
        chain_insert(&mut mu, c, x * Rat::from(lcm.clone()));
    }
    Ok(mu)
}

/// Is the chain a cycle for the geometric boundary?
pub fn is_cycle(complex: &SimplicialComplex, chain: &Chain) -> bool {
    let mut total = Chain::new();
    for (&c, k) in chain {
        for (f, s) in complex.boundary_chain(c) {
            chain_insert(&mut total, f, s * k);
        }
    }
    total.is_empty()
}
