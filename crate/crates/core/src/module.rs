//! Pointwise realization of `FI^m`-modules on a grid.
//!
//! A module stores a vector space per grid object together with the actions
//! of the generating morphisms only: adjacent transpositions in each
//! coordinate and the degree-one standard inclusions. Every other morphism
//! acts through its canonical factorization.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::category::{factor, Atom, CategoryError, GeneratorWord, Grid, Morphism, Obj};
use crate::category::enumerate_hom;
use crate::linalg::{LinalgError, Matrix, PrimeField, QuotientData, SparseMatrix, Subspace};

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum ModuleError {
    #[error(transparent)]
    Category(#[from] CategoryError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error("modules live on different grids (bounds {0} vs {1})")]
    GridMismatch(Obj, Obj),
    #[error("modules live over different fields ({0} vs {1})")]
    FieldMismatch(PrimeField, PrimeField),
    #[error("matrix at {object} has shape {found:?}, expected {expected:?}")]
    Shape {
        object: Obj,
        expected: (usize, usize),
        found: (usize, usize),
    },
    #[error("map is not natural: {0}")]
    NotNatural(Violation),
    #[error("generator {0} is out of range")]
    BadGenerator(usize),
    #[error("relation {index}: {reason}")]
    BadRelation { index: usize, reason: String },
    #[error("coordinate {0} is a regular index; it has no child")]
    RegularIndex(usize),
}

/// A generating morphism, as seen from its source object.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Gen {
    Trans { coord: usize, index: usize },
    Incl { coord: usize },
}

/// A failed identity between action matrices, located at a grid object.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub object: Obj,
    pub relation: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "at {}: {}", self.object, self.relation)
    }
}

/// A module realized on a grid by its fibers and generator actions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointwiseModule {
    field: PrimeField,
    grid: Grid,
    dims: Vec<usize>,
    /// `trans[k][i][j - 1]`: action of `s_j` in coordinate `i` at object `k`.
    trans: Vec<Vec<Vec<SparseMatrix>>>,
    /// `incl[k][i]`: action of the standard inclusion `n -> n + o_i`.
    incl: Vec<Vec<Option<SparseMatrix>>>,
}

impl PointwiseModule {
    /// Assembles a module from raw action matrices, checking only shapes.
    pub fn from_parts(
        field: PrimeField,
        grid: Grid,
        dims: Vec<usize>,
        trans: Vec<Vec<Vec<SparseMatrix>>>,
        incl: Vec<Vec<Option<SparseMatrix>>>,
    ) -> Result<Self, ModuleError> {
        let shape_err = |object: &Obj, expected, found| ModuleError::Shape {
            object: object.clone(),
            expected,
            found,
        };
        if dims.len() != grid.len() || trans.len() != grid.len() || incl.len() != grid.len() {
            return Err(shape_err(grid.bounds(), (grid.len(), 0), (dims.len(), 0)));
        }
        for (k, n) in grid.objects().iter().enumerate() {
            let d = dims[k];
            if trans[k].len() != grid.m() || incl[k].len() != grid.m() {
                return Err(shape_err(n, (grid.m(), 0), (trans[k].len(), incl[k].len())));
            }
            for i in 0..grid.m() {
                if trans[k][i].len() != n.coords()[i].saturating_sub(1) {
                    return Err(shape_err(n, (n.coords()[i].saturating_sub(1), 0), (trans[k][i].len(), 0)));
                }
                for a in &trans[k][i] {
                    if (a.rows(), a.cols()) != (d, d) {
                        return Err(shape_err(n, (d, d), (a.rows(), a.cols())));
                    }
                }
                let up = grid.index_of(&n.plus(i));
                match (&incl[k][i], up) {
                    (Some(e), Some(u)) => {
                        if (e.rows(), e.cols()) != (dims[u], d) {
                            return Err(shape_err(n, (dims[u], d), (e.rows(), e.cols())));
                        }
                    }
                    (None, None) => {}
                    (Some(e), None) => return Err(shape_err(n, (0, 0), (e.rows(), e.cols()))),
                    (None, Some(u)) => return Err(shape_err(n, (dims[u], d), (0, 0))),
                }
            }
        }
        Ok(PointwiseModule {
            field,
            grid,
            dims,
            trans,
            incl,
        })
    }

    /// Builds a module by asking `action` for the matrix of every generator.
    pub(crate) fn build<F>(field: PrimeField, grid: Grid, dims: Vec<usize>, mut action: F) -> Self
    where
        F: FnMut(usize, Gen) -> SparseMatrix,
    {
        let mut trans = Vec::with_capacity(grid.len());
        let mut incl = Vec::with_capacity(grid.len());
        for (k, n) in grid.objects().iter().enumerate() {
            let mut tk = Vec::with_capacity(grid.m());
            let mut ik = Vec::with_capacity(grid.m());
            for i in 0..grid.m() {
                tk.push(
                    (1..n.coords()[i])
                        .map(|j| action(k, Gen::Trans { coord: i, index: j }))
                        .collect(),
                );
                ik.push(grid.contains(&n.plus(i)).then(|| action(k, Gen::Incl { coord: i })));
            }
            trans.push(tk);
            incl.push(ik);
        }
        PointwiseModule {
            field,
            grid,
            dims,
            trans,
            incl,
        }
    }

    pub fn zero(field: PrimeField, grid: Grid) -> Self {
        let dims = vec![0; grid.len()];
        PointwiseModule::build(field, grid, dims, |_, _| SparseMatrix::zeros(field, 0, 0))
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn m(&self) -> usize {
        self.grid.m()
    }

    /// Fiber dimensions in canonical object order.
    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self, n: &Obj) -> usize {
        self.grid.index_of(n).map_or(0, |k| self.dims[k])
    }

    pub fn dim_at(&self, k: usize) -> usize {
        self.dims[k]
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.dims.iter().all(|&d| d == 0)
    }

    pub fn trans_at(&self, k: usize, coord: usize, index: usize) -> &SparseMatrix {
        &self.trans[k][coord][index - 1]
    }

    pub fn incl_at(&self, k: usize, coord: usize) -> Option<&SparseMatrix> {
        self.incl[k][coord].as_ref()
    }

    /// Action of `s_index` in `coord` at `n`. Panics outside the grid.
    pub fn trans_action(&self, n: &Obj, coord: usize, index: usize) -> &SparseMatrix {
        self.trans_at(self.grid.index_of(n).expect("object outside grid"), coord, index)
    }

    pub fn incl_action(&self, n: &Obj, coord: usize) -> Option<&SparseMatrix> {
        self.incl_at(self.grid.index_of(n)?, coord)
    }

    pub fn action_at(&self, k: usize, g: Gen) -> Option<&SparseMatrix> {
        match g {
            Gen::Trans { coord, index } => Some(self.trans_at(k, coord, index)),
            Gen::Incl { coord } => self.incl_at(k, coord),
        }
    }

    /// All transposition actions at object `k`, coordinate by coordinate.
    pub fn group_generators_at(&self, k: usize) -> Vec<&SparseMatrix> {
        self.trans[k].iter().flatten().collect()
    }

    /// Index of the target object of `g` applied at object `k`.
    pub fn gen_target(&self, k: usize, g: Gen) -> Option<usize> {
        match g {
            Gen::Trans { .. } => Some(k),
            Gen::Incl { coord } => self.grid.index_of(&self.grid.objects()[k].plus(coord)),
        }
    }

    /// Applies a generator word to a vector in the fiber at the word's
    /// source.
    pub fn apply_word(&self, word: &GeneratorWord, x: &[u32]) -> Result<Vec<u32>, ModuleError> {
        let mut n = word.source.clone();
        let mut k = self.grid.check(&n)?;
        let mut v = x.to_vec();
        for atom in &word.atoms {
            match *atom {
                Atom::Transposition { coord, index } => {
                    v = crate::linalg::LinearMap::apply(self.trans_at(k, coord, index), &v);
                }
                Atom::Inclusion { coord } => {
                    let e = self
                        .incl_at(k, coord)
                        .ok_or_else(|| CategoryError::OutsideGrid(n.plus(coord), self.grid.bounds().clone()))?;
                    v = crate::linalg::LinearMap::apply(e, &v);
                    n = n.plus(coord);
                    k = self.grid.check(&n)?;
                }
            }
        }
        Ok(v)
    }

    /// Restriction to a smaller downward closed grid.
    pub fn restrict(&self, grid: &Grid) -> Result<PointwiseModule, ModuleError> {
        if grid.m() != self.m() || !grid.bounds().leq(self.grid.bounds()) {
            return Err(ModuleError::GridMismatch(self.grid.bounds().clone(), grid.bounds().clone()));
        }
        let src: Vec<usize> = grid
            .objects()
            .iter()
            .map(|n| self.grid.index_of(n).unwrap())
            .collect();
        let dims = src.iter().map(|&k| self.dims[k]).collect();
        Ok(PointwiseModule::build(self.field, grid.clone(), dims, |k, g| {
            self.action_at(src[k], g).unwrap().clone()
        }))
    }
}

/// Pushes vectors from `n - o_i` into `n` (object index `k`) along one
/// representative of every coset of `C(n - o_i, n)` modulo the automorphisms
/// of `n - o_i`, handing each image to `sink`. Spans of the images are the
/// spans of the pushforward along all of `C(n - o_i, n)` whenever the input
/// span is invariant.
pub(crate) fn push_up_cosets<'a, I, F>(v: &PointwiseModule, k: usize, i: usize, vecs: I, mut sink: F)
where
    I: IntoIterator<Item = &'a [u32]>,
    F: FnMut(Vec<u32>),
{
    let n = &v.grid.objects()[k];
    let Some(lower) = n.minus(i) else { return };
    let lk = v.grid.index_of(&lower).unwrap();
    let e = v.incl_at(lk, i).unwrap();
    let c = n.coords()[i];
    for x in vecs {
        let mut y = crate::linalg::LinearMap::apply(e, x);
        for t in (1..c).rev() {
            let next = crate::linalg::LinearMap::apply(v.trans_at(k, i, t), &y);
            sink(std::mem::replace(&mut y, next));
        }
        sink(y);
    }
}

/// Matrix of `V(f)`, the product of generator actions along the canonical
/// factorization of `f`.
pub fn action_of(f: &Morphism, v: &PointwiseModule) -> Result<Matrix, ModuleError> {
    let src = v.grid.check(&f.source())?;
    v.grid.check(&f.target())?;
    let word = factor(f);
    let mut acc = SparseMatrix::identity(v.field, v.dims[src]);
    let mut k = src;
    for atom in &word.atoms {
        let g = match *atom {
            Atom::Transposition { coord, index } => Gen::Trans { coord, index },
            Atom::Inclusion { coord } => Gen::Incl { coord },
        };
        acc = v.action_at(k, g).unwrap().compose(&acc);
        k = v.gen_target(k, g).unwrap();
    }
    Ok(acc.to_dense())
}

fn check_compatible(a: &PointwiseModule, b: &PointwiseModule) -> Result<(), ModuleError> {
    if a.field != b.field {
        return Err(ModuleError::FieldMismatch(a.field, b.field));
    }
    if a.grid != b.grid {
        return Err(ModuleError::GridMismatch(a.grid.bounds().clone(), b.grid.bounds().clone()));
    }
    Ok(())
}

/// Block-diagonal direct sum; the empty sum is the zero module on `grid`.
pub fn direct_sum(field: PrimeField, grid: &Grid, parts: &[&PointwiseModule]) -> Result<PointwiseModule, ModuleError> {
    let zero = PointwiseModule::zero(field, grid.clone());
    for p in parts {
        check_compatible(&zero, p)?;
    }
    let dims = (0..grid.len())
        .map(|k| parts.iter().map(|p| p.dims[k]).sum())
        .collect();
    Ok(PointwiseModule::build(field, grid.clone(), dims, |k, g| {
        let blocks: Vec<&SparseMatrix> = parts.iter().map(|p| p.action_at(k, g).unwrap()).collect();
        SparseMatrix::block_diag(field, &blocks)
    }))
}

/// Submodule spanned fiberwise by invariant subspaces, with the induced
/// actions in RREF-basis coordinates.
pub fn induced_submodule(v: &PointwiseModule, spaces: &[Subspace]) -> PointwiseModule {
    assert_eq!(spaces.len(), v.grid.len());
    let dims = spaces.iter().map(Subspace::dim).collect();
    PointwiseModule::build(v.field, v.grid.clone(), dims, |k, g| {
        let a = v.action_at(k, g).unwrap();
        let t = v.gen_target(k, g).unwrap();
        let cols = (0..spaces[k].dim())
            .map(|c| {
                let img = crate::linalg::LinearMap::apply(a, spaces[k].basis_vector(c));
                debug_assert!(spaces[t].contains(&img), "subspace family is not invariant");
                spaces[t].coordinates_unchecked(&img)
            })
            .collect();
        SparseMatrix::from_dense_columns(v.field, spaces[t].dim(), cols)
    })
}

/// Quotient by invariant subspaces, realized on RREF complement coordinates.
pub fn induced_quotient(v: &PointwiseModule, spaces: &[Subspace]) -> (PointwiseModule, Vec<QuotientData>) {
    assert_eq!(spaces.len(), v.grid.len());
    let qd: Vec<QuotientData> = spaces.iter().map(Subspace::quotient_data).collect();
    let dims = qd.iter().map(|q| q.complement.len()).collect();
    let m = PointwiseModule::build(v.field, v.grid.clone(), dims, |k, g| {
        let a = v.action_at(k, g).unwrap();
        let t = v.gen_target(k, g).unwrap();
        let mut buf = vec![0u32; v.dims[t]];
        let cols = qd[k]
            .complement
            .iter()
            .map(|&c| {
                buf.iter_mut().for_each(|x| *x = 0);
                for &(r, x) in a.column(c) {
                    buf[r] = x;
                }
                spaces[t].reduce(&mut buf);
                qd[t].complement.iter().map(|&cc| buf[cc]).collect()
            })
            .collect();
        SparseMatrix::from_dense_columns(v.field, qd[t].complement.len(), cols)
    });
    (m, qd)
}

/// Checks every defining relation of an `FI^m`-module among the stored
/// generator actions: Coxeter relations per coordinate, commuting
/// coordinates, equivariance of inclusions, commuting squares of inclusions,
/// and invariance of a double inclusion under swapping the two new letters.
pub fn validate(v: &PointwiseModule) -> Vec<Violation> {
    let mut out = Vec::new();
    let grid = &v.grid;
    let m = grid.m();
    for (k, n) in grid.objects().iter().enumerate() {
        let mut bad = |rel: String| {
            out.push(Violation {
                object: n.clone(),
                relation: rel,
            })
        };
        for i in 0..m {
            let c = n.coords()[i];
            for j in 1..c {
                let s = v.trans_at(k, i, j);
                if !s.compose(s).is_identity() {
                    bad(format!("s_{j}^2 != 1 in coordinate {}", i + 1));
                }
                if j + 1 < c {
                    let t = v.trans_at(k, i, j + 1);
                    if s.compose(t).compose(s) != t.compose(s).compose(t) {
                        bad(format!("braid relation fails for s_{j}, s_{} in coordinate {}", j + 1, i + 1));
                    }
                }
                for l in j + 2..c {
                    let t = v.trans_at(k, i, l);
                    if s.compose(t) != t.compose(s) {
                        bad(format!("s_{j} and s_{l} do not commute in coordinate {}", i + 1));
                    }
                }
                for i2 in i + 1..m {
                    for l in 1..n.coords()[i2] {
                        let t = v.trans_at(k, i2, l);
                        if s.compose(t) != t.compose(s) {
                            bad(format!(
                                "s_{j} (coordinate {}) and s_{l} (coordinate {}) do not commute",
                                i + 1,
                                i2 + 1
                            ));
                        }
                    }
                }
            }
            let Some(e) = v.incl_at(k, i) else { continue };
            let up = grid.index_of(&n.plus(i)).unwrap();
            for i2 in 0..m {
                for j in 1..n.coords()[i2] {
                    if e.compose(v.trans_at(k, i2, j)) != v.trans_at(up, i2, j).compose(e) {
                        bad(format!(
                            "inclusion in coordinate {} is not equivariant for s_{j} in coordinate {}",
                            i + 1,
                            i2 + 1
                        ));
                    }
                }
            }
            for i2 in i + 1..m {
                let Some(e2) = v.incl_at(k, i2) else { continue };
                let up2 = grid.index_of(&n.plus(i2)).unwrap();
                if let (Some(a), Some(b)) = (v.incl_at(up, i2), v.incl_at(up2, i)) {
                    if a.compose(e) != b.compose(e2) {
                        bad(format!("inclusions in coordinates {} and {} do not commute", i + 1, i2 + 1));
                    }
                }
            }
            if let Some(e_up) = v.incl_at(up, i) {
                let top = grid.index_of(&n.plus(i).plus(i)).unwrap();
                let twice = e_up.compose(e);
                let swap = v.trans_at(top, i, c + 1);
                if swap.compose(&twice) != twice {
                    bad(format!("double inclusion in coordinate {} is not fixed by s_{}", i + 1, c + 1));
                }
            }
        }
    }
    out
}

/// Bases of a free module `⊕_j M(d_j)`: at each object the pairs
/// `(generator, morphism d_j -> n)`, generator-major, each block in the
/// lexicographic order of [`enumerate_hom`].
#[derive(Clone, Debug)]
pub struct FreeModule {
    pub module: PointwiseModule,
    degrees: Vec<Obj>,
    fibers: Vec<FreeFiber>,
}

#[derive(Clone, Debug, Default)]
struct FreeFiber {
    elems: Vec<(usize, Morphism)>,
    index: HashMap<(usize, Vec<usize>), usize>,
}

impl FreeModule {
    pub fn new(field: PrimeField, degrees: Vec<Obj>, grid: &Grid) -> Result<FreeModule, ModuleError> {
        for d in &degrees {
            grid.check(d)?;
        }
        let fibers: Vec<FreeFiber> = grid
            .objects()
            .iter()
            .map(|n| {
                let mut fib = FreeFiber::default();
                for (j, d) in degrees.iter().enumerate() {
                    for g in enumerate_hom(d, n) {
                        fib.index.insert((j, g.image_key()), fib.elems.len());
                        fib.elems.push((j, g));
                    }
                }
                fib
            })
            .collect();
        let dims = fibers.iter().map(|f| f.elems.len()).collect();
        let module = PointwiseModule::build(field, grid.clone(), dims, |k, g| {
            let src = &fibers[k];
            match g {
                Gen::Trans { coord, index } => {
                    let targets: Vec<usize> = src
                        .elems
                        .iter()
                        .map(|(j, f)| src.index[&(*j, f.after_transposition(coord, index).image_key())])
                        .collect();
                    SparseMatrix::selection(field, src.elems.len(), &targets)
                }
                Gen::Incl { coord } => {
                    let up = &fibers[grid.index_of(&grid.objects()[k].plus(coord)).unwrap()];
                    let targets: Vec<usize> = src
                        .elems
                        .iter()
                        .map(|(j, f)| up.index[&(*j, f.image_key())])
                        .collect();
                    SparseMatrix::selection(field, up.elems.len(), &targets)
                }
            }
        });
        Ok(FreeModule {
            module,
            degrees,
            fibers,
        })
    }

    pub fn degrees(&self) -> &[Obj] {
        &self.degrees
    }

    /// Basis elements of the fiber at object index `k`.
    pub fn basis_at(&self, k: usize) -> &[(usize, Morphism)] {
        &self.fibers[k].elems
    }

    /// Position of `(generator, f)` in the fiber at `f`'s target.
    pub fn position(&self, gen: usize, f: &Morphism) -> Option<usize> {
        let k = self.module.grid.index_of(&f.target())?;
        self.fibers[k].index.get(&(gen, f.image_key())).copied()
    }
}

/// The free module `M(d) = k C(d, -)` on `grid`.
pub fn free_module(field: PrimeField, d: &Obj, grid: &Grid) -> Result<PointwiseModule, ModuleError> {
    Ok(FreeModule::new(field, vec![d.clone()], grid)?.module)
}

/// A degree-zero natural transformation, one matrix per grid object.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModuleMap {
    source: Arc<PointwiseModule>,
    target: Arc<PointwiseModule>,
    mats: Vec<Matrix>,
}

impl ModuleMap {
    pub fn new(source: Arc<PointwiseModule>, target: Arc<PointwiseModule>, mats: Vec<Matrix>) -> Result<Self, ModuleError> {
        check_compatible(&source, &target)?;
        if mats.len() != source.grid.len() {
            return Err(ModuleError::Shape {
                object: source.grid.bounds().clone(),
                expected: (source.grid.len(), 0),
                found: (mats.len(), 0),
            });
        }
        for (k, a) in mats.iter().enumerate() {
            let expected = (target.dims[k], source.dims[k]);
            if (a.rows(), a.cols()) != expected {
                return Err(ModuleError::Shape {
                    object: source.grid.objects()[k].clone(),
                    expected,
                    found: (a.rows(), a.cols()),
                });
            }
        }
        Ok(ModuleMap { source, target, mats })
    }

    pub fn identity(v: Arc<PointwiseModule>) -> Self {
        let mats = v.dims.iter().map(|&d| Matrix::identity(v.field, d)).collect();
        ModuleMap {
            source: v.clone(),
            target: v,
            mats,
        }
    }

    pub fn zero(source: Arc<PointwiseModule>, target: Arc<PointwiseModule>) -> Result<Self, ModuleError> {
        let mats = (0..source.grid.len())
            .map(|k| Matrix::zeros(source.field, target.dims[k], source.dims[k]))
            .collect();
        ModuleMap::new(source, target, mats)
    }

    pub fn source(&self) -> &Arc<PointwiseModule> {
        &self.source
    }

    pub fn target(&self) -> &Arc<PointwiseModule> {
        &self.target
    }

    pub fn mats(&self) -> &[Matrix] {
        &self.mats
    }

    pub fn mat(&self, n: &Obj) -> Option<&Matrix> {
        self.source.grid.index_of(n).map(|k| &self.mats[k])
    }

    /// `self ∘ rhs`.
    pub fn compose(&self, rhs: &ModuleMap) -> Result<ModuleMap, ModuleError> {
        check_compatible(&rhs.target, &self.source)?;
        let mats = self.mats.iter().zip(&rhs.mats).map(|(a, b)| a.mul(b)).collect();
        ModuleMap::new(rhs.source.clone(), self.target.clone(), mats)
    }

    /// Squares `f_{n'} A_src = A_tgt f_n` that fail, for every generator.
    pub fn naturality_violations(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        let src = &self.source;
        let tgt = &self.target;
        for (k, n) in src.grid.objects().iter().enumerate() {
            let gens = (0..src.m()).flat_map(|i| {
                (1..n.coords()[i])
                    .map(move |j| Gen::Trans { coord: i, index: j })
                    .chain(std::iter::once(Gen::Incl { coord: i }))
            });
            for g in gens {
                let (Some(a), Some(b)) = (src.action_at(k, g), tgt.action_at(k, g)) else {
                    continue;
                };
                let t = src.gen_target(k, g).unwrap();
                let lhs = self.mats[t].mul(&a.to_dense());
                let rhs = b.to_dense().mul(&self.mats[k]);
                if lhs != rhs {
                    out.push(Violation {
                        object: n.clone(),
                        relation: format!("map does not commute with {g:?}"),
                    });
                }
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.mats.iter().all(Matrix::is_zero)
    }

    /// Whether every component is injective.
    pub fn is_injective(&self) -> bool {
        self.mats.iter().all(|a| a.rank() == a.cols())
    }

    /// Whether every component is surjective.
    pub fn is_surjective(&self) -> bool {
        self.mats.iter().all(|a| a.rank() == a.rows())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::category::hom_count;

    fn o(v: &[usize]) -> Obj {
        Obj::new(v.to_vec())
    }

    fn f(p: u64) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    #[test]
    fn free_module_dims() {
        let g = Grid::new(o(&[3]));
        let m = free_module(f(2), &o(&[1]), &g).unwrap();
        assert_eq!(m.dims(), &[0, 1, 2, 3]);
        let m0 = free_module(f(3), &o(&[0]), &g).unwrap();
        assert_eq!(m0.dims(), &[1, 1, 1, 1]);
        for k in 0..g.len() {
            for a in m0.group_generators_at(k) {
                assert!(a.is_identity());
            }
            if let Some(e) = m0.incl_at(k, 0) {
                assert!(e.is_identity());
            }
        }
        let g2 = Grid::new(o(&[2, 2]));
        let m11 = free_module(f(2), &o(&[1, 1]), &g2).unwrap();
        assert_eq!(m11.dim(&o(&[2, 2])), 4);
        assert!(matches!(free_module(f(2), &o(&[3, 0]), &g2), Err(ModuleError::Category(_))));
    }

    #[test]
    fn free_modules_validate() {
        for (b, ds) in [(o(&[4]), vec![o(&[0]), o(&[1]), o(&[2])]), (o(&[2, 2]), vec![o(&[1, 0]), o(&[1, 1])])] {
            let g = Grid::new(b);
            for d in ds {
                let m = free_module(f(3), &d, &g).unwrap();
                assert_eq!(validate(&m), vec![]);
            }
        }
    }

    #[test]
    fn broken_transposition_is_reported() {
        let g = Grid::new(o(&[2]));
        let m = free_module(f(2), &o(&[1]), &g).unwrap();
        let mut trans = m.trans.clone();
        trans[2][0][0] = SparseMatrix::zeros(f(2), 2, 2);
        let broken = PointwiseModule::from_parts(m.field, g, m.dims.clone(), trans, m.incl.clone()).unwrap();
        let v = validate(&broken);
        assert!(v.iter().any(|x| x.relation.contains("s_1^2")), "{v:?}");
    }

    #[test]
    fn action_of_matches_post_composition() {
        let g = Grid::new(o(&[3]));
        let fm = FreeModule::new(f(5), vec![o(&[1])], &g).unwrap();
        let v = &fm.module;
        for r in g.objects() {
            for n in g.objects().iter().filter(|n| r.leq(n)) {
                for h in enumerate_hom(r, n) {
                    let a = action_of(&h, v).unwrap();
                    let kr = g.index_of(r).unwrap();
                    let mut expected = Matrix::zeros(f(5), v.dim(n), v.dim(r));
                    for (c, (gen, b)) in fm.basis_at(kr).iter().enumerate() {
                        let hb = Morphism::compose(&h, b).unwrap();
                        expected.set(fm.position(*gen, &hb).unwrap(), c, 1);
                    }
                    assert_eq!(a, expected, "action of {h}");
                }
            }
        }
        let id = Morphism::identity(&o(&[2]));
        assert_eq!(action_of(&id, v).unwrap(), Matrix::identity(f(5), 2));
    }

    #[test]
    fn direct_sum_examples() {
        let g = Grid::new(o(&[1, 1]));
        let z = direct_sum(f(2), &g, &[]).unwrap();
        assert!(z.is_zero());
        let a = free_module(f(2), &o(&[0, 1]), &g).unwrap();
        assert_eq!(direct_sum(f(2), &g, &[&a, &z]).unwrap(), a);
        let b = free_module(f(2), &o(&[0, 0]), &g).unwrap();
        let s = direct_sum(f(2), &g, &[&a, &b]).unwrap();
        for n in g.objects() {
            assert_eq!(s.dim(n), a.dim(n) + b.dim(n));
            assert_eq!(s.dim(n) as u64, hom_count(&o(&[0, 1]), n) + 1);
        }
        let other = Grid::new(o(&[2, 1]));
        let c = free_module(f(2), &o(&[0, 0]), &other).unwrap();
        assert!(matches!(direct_sum(f(2), &g, &[&c]), Err(ModuleError::GridMismatch(..))));
    }

    #[test]
    fn restriction_keeps_fibers() {
        let g = Grid::new(o(&[3, 2]));
        let m = free_module(f(3), &o(&[1, 1]), &g).unwrap();
        let small = Grid::new(o(&[2, 2]));
        let r = m.restrict(&small).unwrap();
        assert_eq!(validate(&r), vec![]);
        for n in small.objects() {
            assert_eq!(r.dim(n), m.dim(n));
        }
        assert!(r.restrict(&g).is_err());
    }

    #[test]
    fn map_shape_is_checked() {
        let g = Grid::new(o(&[1]));
        let a = Arc::new(free_module(f(2), &o(&[0]), &g).unwrap());
        let bad = vec![Matrix::zeros(f(2), 2, 1), Matrix::zeros(f(2), 1, 1)];
        assert!(matches!(ModuleMap::new(a.clone(), a.clone(), bad), Err(ModuleError::Shape { .. })));
        let id = ModuleMap::identity(a);
        assert!(id.naturality_violations().is_empty());
        assert!(id.is_injective() && id.is_surjective());
    }
}
