//! Shift, kernel and derivative functors, H_0, minimal covers, and
//! kernels/cokernels of module maps.

use std::collections::VecDeque;
use std::sync::Arc;

use crate::category::{Grid, Obj};
use crate::linalg::{LinearMap, Matrix, SpanBuilder, SparseMatrix, Subspace};
use crate::module::{
    direct_sum, induced_quotient, induced_submodule, push_up_cosets, FreeModule, Gen, ModuleError, ModuleMap,
    PointwiseModule,
};

/// `Σ_i V`, on the grid with bound `b_i` lowered by one.
pub fn sigma(i: usize, v: &PointwiseModule) -> Result<PointwiseModule, ModuleError> {
    let grid = v.grid().shrink(i)?;
    let src: Vec<usize> = grid
        .objects()
        .iter()
        .map(|n| v.grid().index_of(&n.plus(i)).unwrap())
        .collect();
    let dims = src.iter().map(|&k| v.dim_at(k)).collect();
    let vg = v.grid();
    Ok(PointwiseModule::build(v.field(), grid.clone(), dims, |k, g| match g {
        Gen::Trans { coord, index } => v.trans_at(src[k], coord, index).clone(),
        Gen::Incl { coord } if coord != i => v.incl_at(src[k], coord).unwrap().clone(),
        Gen::Incl { coord } => {
            let n = &grid.objects()[k];
            let top = vg.index_of(&n.plus(i).plus(i)).unwrap();
            v.trans_at(top, i, n.coords()[i] + 1)
                .compose(v.incl_at(src[k], coord).unwrap())
        }
    }))
}

/// `V -> Σ_i V`, with `V` restricted to the shrunk grid.
pub fn natural_map(i: usize, v: &PointwiseModule) -> Result<ModuleMap, ModuleError> {
    let s = Arc::new(sigma(i, v)?);
    let r = Arc::new(v.restrict(s.grid())?);
    let mats = s
        .grid()
        .objects()
        .iter()
        .map(|n| v.incl_action(n, i).unwrap().to_dense())
        .collect();
    ModuleMap::new(r, s, mats)
}

/// `0 -> K_i V -> V -> Σ_i V -> D_i V -> 0` on the shrunk grid.
#[derive(Clone, Debug)]
pub struct FourTermSequence {
    pub k: Arc<PointwiseModule>,
    pub v: Arc<PointwiseModule>,
    pub sigma: Arc<PointwiseModule>,
    pub d: Arc<PointwiseModule>,
    pub incl: ModuleMap,
    pub nat: ModuleMap,
    pub proj: ModuleMap,
}

impl FourTermSequence {
    /// Objects where the sequence fails to be exact.
    pub fn exactness_failures(&self) -> Vec<Obj> {
        let mut out = Vec::new();
        for (k, n) in self.v.grid().objects().iter().enumerate() {
            let a = &self.incl.mats()[k];
            let b = &self.nat.mats()[k];
            let c = &self.proj.mats()[k];
            let ra = a.rank();
            let rb = b.rank();
            let rc = c.rank();
            let ok = ra == self.k.dim_at(k)
                && b.mul(a).is_zero()
                && ra + rb == self.v.dim_at(k)
                && c.mul(b).is_zero()
                && rb + rc == self.sigma.dim_at(k)
                && rc == self.d.dim_at(k);
            if !ok {
                out.push(n.clone());
            }
        }
        out
    }
}

pub fn four_term(i: usize, v: &PointwiseModule) -> Result<FourTermSequence, ModuleError> {
    let nat = natural_map(i, v)?;
    let (k, incl) = kernel_of(&nat);
    let (d, proj) = cokernel_of(&nat);
    Ok(FourTermSequence {
        k,
        v: nat.source().clone(),
        sigma: nat.target().clone(),
        d,
        incl,
        nat,
        proj,
    })
}

/// Kernels of `E^{(i)}` at the objects of the shrunk grid.
fn torsion_spaces(i: usize, v: &PointwiseModule) -> Result<(Grid, Vec<Subspace>), ModuleError> {
    let grid = v.grid().shrink(i)?;
    let spaces = grid
        .objects()
        .iter()
        .map(|n| v.incl_action(n, i).unwrap().to_dense().kernel_basis())
        .collect();
    Ok((grid, spaces))
}

/// `K_i V = ker(V -> Σ_i V)`.
pub fn torsion_kernel(i: usize, v: &PointwiseModule) -> Result<PointwiseModule, ModuleError> {
    let (grid, spaces) = torsion_spaces(i, v)?;
    Ok(induced_submodule(&v.restrict(&grid)?, &spaces))
}

/// `D_i V = coker(V -> Σ_i V)`.
pub fn derivative(i: usize, v: &PointwiseModule) -> Result<PointwiseModule, ModuleError> {
    let s = sigma(i, v)?;
    let spaces: Vec<Subspace> = s
        .grid()
        .objects()
        .iter()
        .map(|n| v.incl_action(n, i).unwrap().to_dense().image())
        .collect();
    Ok(induced_quotient(&s, &spaces).0)
}

/// Grid `b - Σ_{i in S} o_i`, where every summand indexed by `S` lives.
pub fn set_grid(s: &[usize], grid: &Grid) -> Result<Grid, ModuleError> {
    let mut g = grid.clone();
    for &i in s {
        g = g.shrink(i)?;
    }
    Ok(g)
}

fn sum_over<F>(s: &[usize], v: &PointwiseModule, op: F) -> Result<PointwiseModule, ModuleError>
where
    F: Fn(usize, &PointwiseModule) -> Result<PointwiseModule, ModuleError>,
{
    let grid = set_grid(s, v.grid())?;
    let parts = s
        .iter()
        .map(|&i| op(i, v)?.restrict(&grid))
        .collect::<Result<Vec<_>, _>>()?;
    let refs: Vec<&PointwiseModule> = parts.iter().collect();
    direct_sum(v.field(), &grid, &refs)
}

/// `D_S V = ⊕_{i in S} D_i V` for 0-based coordinates; zero for empty `S`.
pub fn derivative_set(s: &[usize], v: &PointwiseModule) -> Result<PointwiseModule, ModuleError> {
    sum_over(s, v, derivative)
}

/// `Σ_S V = ⊕_{i in S} Σ_i V`; zero for empty `S`.
pub fn sigma_set(s: &[usize], v: &PointwiseModule) -> Result<PointwiseModule, ModuleError> {
    sum_over(s, v, sigma)
}

/// `K_S V = ⊕_{i in S} K_i V`; zero for empty `S`.
pub fn torsion_kernel_set(s: &[usize], v: &PointwiseModule) -> Result<PointwiseModule, ModuleError> {
    sum_over(s, v, torsion_kernel)
}

/// `F_S V = (⊕_{i in S} D_i V) ⊕ (⊕_{i not in S} Σ_i V)` on `b - (1,...,1)`.
pub fn f_s(s: &[usize], v: &PointwiseModule) -> Result<PointwiseModule, ModuleError> {
    let grid = v.grid().shrink_all()?;
    let mut parts = Vec::with_capacity(v.m());
    for i in 0..v.m() {
        let part = if s.contains(&i) { derivative(i, v)? } else { sigma(i, v)? };
        parts.push(part.restrict(&grid)?);
    }
    let refs: Vec<&PointwiseModule> = parts.iter().collect();
    direct_sum(v.field(), &grid, &refs)
}

/// A submodule `W` of `ambient`, given by invariant subspaces of each fiber.
/// Vectors of `W_n` are handled in ambient coordinates; "W coordinates" are
/// coefficients against the RREF basis of `spaces[k]`.
#[derive(Clone, Debug)]
pub(crate) struct Embedded {
    pub ambient: Arc<PointwiseModule>,
    pub spaces: Vec<Subspace>,
}

/// Chosen cover of an embedded module: generator degrees, the generator
/// vectors (ambient coordinates) and, per object, the image of every free
/// basis element.
#[derive(Clone, Debug)]
pub(crate) struct CoverData {
    pub free: FreeModule,
    pub columns: Vec<Vec<Vec<u32>>>,
}

impl Embedded {
    pub fn whole(v: Arc<PointwiseModule>) -> Self {
        let spaces = v.dims().iter().map(|&d| Subspace::full(v.field(), d)).collect();
        Embedded { ambient: v, spaces }
    }

    pub fn dims(&self) -> Vec<usize> {
        self.spaces.iter().map(Subspace::dim).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.spaces.iter().all(Subspace::is_zero)
    }

    /// Span of everything coming from lower objects, at object `k`, in W
    /// coordinates.
    fn images_at(&self, k: usize) -> SpanBuilder {
        let a = &self.ambient;
        let grid = a.grid();
        let n = &grid.objects()[k];
        let mut span = SpanBuilder::new(a.field(), self.spaces[k].dim());
        for i in 0..grid.m() {
            if span.is_full() {
                break;
            }
            let Some(lower) = n.minus(i) else { continue };
            let w = &self.spaces[grid.index_of(&lower).unwrap()];
            let vecs = (0..w.dim()).map(|c| w.basis_vector(c));
            push_up_cosets(a, k, i, vecs, |x| {
                if !span.is_full() {
                    span.insert(self.spaces[k].coordinates_unchecked(&x));
                }
            });
        }
        span
    }

    pub fn h0(&self) -> H0 {
        let images: Vec<Subspace> = (0..self.spaces.len()).map(|k| self.images_at(k).finish()).collect();
        let dims = images.iter().map(|s| s.ambient_dim() - s.dim()).collect();
        H0 { dims, images }
    }

    /// Greedy cover: walking the RREF complement of the lower images, a lift
    /// becomes a generator unless it already lies in the span of the
    /// automorphism orbits of the generators chosen so far.
    pub fn cover(&self) -> Result<CoverData, ModuleError> {
        let a = &self.ambient;
        let grid = a.grid();
        let field = a.field();
        let mut degrees = Vec::new();
        let mut gen_vectors = Vec::new();
        for (k, n) in grid.objects().iter().enumerate() {
            let w = &self.spaces[k];
            let mut span = self.images_at(k);
            if span.is_full() {
                continue;
            }
            let lifts = span.clone().finish().complement();
            let group = a.group_generators_at(k);
            for c in lifts {
                let mut e = vec![0u32; w.dim()];
                e[c] = 1;
                if !span.insert(e) {
                    continue;
                }
                let x = w.basis_vector(c).to_vec();
                degrees.push(n.clone());
                gen_vectors.push(x.clone());
                let mut queue = VecDeque::from([x]);
                while let Some(y) = queue.pop_front() {
                    if span.is_full() {
                        break;
                    }
                    for s in &group {
                        let z = s.apply(&y);
                        if span.insert(w.coordinates_unchecked(&z)) {
                            queue.push_back(z);
                        }
                    }
                }
                if span.is_full() {
                    break;
                }
            }
        }
        let free = FreeModule::new(field, degrees, grid)?;
        let columns = self.cover_columns(&free, &gen_vectors);
        Ok(CoverData { free, columns })
    }

    /// Image of every free basis element, in ambient coordinates. Each
    /// column is reached either by one inclusion from a lower object or by
    /// one transposition from a column already known at the same object.
    fn cover_columns(&self, free: &FreeModule, gen_vectors: &[Vec<u32>]) -> Vec<Vec<Vec<u32>>> {
        let a = &self.ambient;
        let grid = a.grid();
        let fm = &free.module;
        let mut columns: Vec<Vec<Vec<u32>>> = Vec::with_capacity(grid.len());
        for (k, n) in grid.objects().iter().enumerate() {
            let mut known: Vec<Option<Vec<u32>>> = vec![None; fm.dim_at(k)];
            let mut queue = VecDeque::new();
            for (j, d) in free.degrees().iter().enumerate() {
                if d == n {
                    let pos = free.position(j, &crate::category::Morphism::identity(d)).unwrap();
                    known[pos] = Some(gen_vectors[j].clone());
                    queue.push_back(pos);
                }
            }
            for i in 0..grid.m() {
                let Some(lower) = n.minus(i) else { continue };
                let lk = grid.index_of(&lower).unwrap();
                let e_free = fm.incl_at(lk, i).unwrap();
                let e_amb = a.incl_at(lk, i).unwrap();
                for (pos, (j, _)) in free.basis_at(lk).iter().enumerate() {
                    // Seed each generator's block from its first coordinate
                    // with room to spare.
                    let d = &free.degrees()[*j];
                    let first = (0..grid.m()).find(|&t| n.coords()[t] > d.coords()[t]);
                    if first != Some(i) {
                        continue;
                    }
                    let up = e_free.column(pos)[0].0;
                    if known[up].is_none() {
                        known[up] = Some(e_amb.apply(&columns[lk][pos]));
                        queue.push_back(up);
                    }
                }
            }
            let group: Vec<(&SparseMatrix, &SparseMatrix)> = fm
                .group_generators_at(k)
                .into_iter()
                .zip(a.group_generators_at(k))
                .collect();
            while let Some(pos) = queue.pop_front() {
                for (sf, sa) in &group {
                    let nb = sf.column(pos)[0].0;
                    if known[nb].is_none() {
                        known[nb] = Some(sa.apply(known[pos].as_ref().unwrap()));
                        queue.push_back(nb);
                    }
                }
            }
            columns.push(known.into_iter().map(|c| c.expect("free basis element not reached")).collect());
        }
        columns
    }

    /// Cover map components in W coordinates.
    pub fn cover_matrices(&self, cover: &CoverData) -> Vec<Matrix> {
        cover
            .columns
            .iter()
            .enumerate()
            .map(|(k, cols)| {
                let w = &self.spaces[k];
                let wc: Vec<Vec<u32>> = cols.iter().map(|c| w.coordinates_unchecked(c)).collect();
                Matrix::from_columns(self.ambient.field(), w.dim(), &wc)
            })
            .collect()
    }

    /// The kernel of the cover, embedded in the cover's free module.
    pub fn syzygy(&self, cover: &CoverData) -> Embedded {
        let spaces = self.cover_matrices(cover).iter().map(Matrix::kernel_basis).collect();
        Embedded {
            ambient: Arc::new(cover.free.module.clone()),
            spaces,
        }
    }
}

/// Zeroth homology: per object, the span `I_n` of all images from strictly
/// lower objects, and `dim V_n - dim I_n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct H0 {
    pub dims: Vec<usize>,
    pub images: Vec<Subspace>,
}

impl H0 {
    /// RREF complement coordinates of `I_n`, used as H_0 representatives.
    pub fn lifts(&self, k: usize) -> Vec<usize> {
        self.images[k].complement()
    }
}

pub fn h0(v: &PointwiseModule) -> H0 {
    Embedded::whole(Arc::new(v.clone())).h0()
}

/// A surjection from a free module onto `V`.
#[derive(Clone, Debug)]
pub struct Cover {
    pub free: FreeModule,
    pub map: ModuleMap,
}

impl Cover {
    pub fn degrees(&self) -> &[Obj] {
        self.free.degrees()
    }
}

pub fn minimal_cover(v: &PointwiseModule) -> Result<Cover, ModuleError> {
    let target = Arc::new(v.clone());
    let emb = Embedded::whole(target.clone());
    let data = emb.cover()?;
    let mats = emb.cover_matrices(&data);
    let map = ModuleMap::new(Arc::new(data.free.module.clone()), target, mats)?;
    Ok(Cover { free: data.free, map })
}

/// The map from a free module sending generator `j` to `images[j]`, a
/// vector in the fiber of `target` at the generator's degree.
pub fn map_from_free(free: &FreeModule, target: Arc<PointwiseModule>, images: &[Vec<u32>]) -> Result<ModuleMap, ModuleError> {
    if free.module.grid() != target.grid() {
        return Err(ModuleError::GridMismatch(free.module.grid().bounds().clone(), target.grid().bounds().clone()));
    }
    if images.len() != free.degrees().len() {
        return Err(ModuleError::BadGenerator(images.len()));
    }
    for (d, x) in free.degrees().iter().zip(images) {
        if x.len() != target.dim(d) {
            return Err(ModuleError::Shape {
                object: d.clone(),
                expected: (target.dim(d), 1),
                found: (x.len(), 1),
            });
        }
    }
    let emb = Embedded::whole(target.clone());
    let data = CoverData {
        free: free.clone(),
        columns: emb.cover_columns(free, images),
    };
    let mats = emb.cover_matrices(&data);
    ModuleMap::new(Arc::new(free.module.clone()), target, mats)
}

fn basis_columns(s: &Subspace) -> Matrix {
    s.basis().transpose()
}

fn kernel_of(f: &ModuleMap) -> (Arc<PointwiseModule>, ModuleMap) {
    let spaces: Vec<Subspace> = f.mats().iter().map(Matrix::kernel_basis).collect();
    let k = Arc::new(induced_submodule(f.source(), &spaces));
    let mats = spaces.iter().map(basis_columns).collect();
    let incl = ModuleMap::new(k.clone(), f.source().clone(), mats).expect("kernel inclusion shape");
    (k, incl)
}

fn cokernel_of(f: &ModuleMap) -> (Arc<PointwiseModule>, ModuleMap) {
    let spaces: Vec<Subspace> = f.mats().iter().map(Matrix::image).collect();
    let (q, qd) = induced_quotient(f.target(), &spaces);
    let q = Arc::new(q);
    let mats = qd.into_iter().map(|d| d.proj).collect();
    let proj = ModuleMap::new(f.target().clone(), q.clone(), mats).expect("cokernel projection shape");
    (q, proj)
}

fn check_natural(f: &ModuleMap) -> Result<(), ModuleError> {
    match f.naturality_violations().into_iter().next() {
        Some(v) => Err(ModuleError::NotNatural(v)),
        None => Ok(()),
    }
}

pub fn map_kernel(f: &ModuleMap) -> Result<(Arc<PointwiseModule>, ModuleMap), ModuleError> {
    check_natural(f)?;
    Ok(kernel_of(f))
}

pub fn map_cokernel(f: &ModuleMap) -> Result<(Arc<PointwiseModule>, ModuleMap), ModuleError> {
    check_natural(f)?;
    Ok(cokernel_of(f))
}

pub fn map_image(f: &ModuleMap) -> Result<(Arc<PointwiseModule>, ModuleMap), ModuleError> {
    check_natural(f)?;
    let spaces: Vec<Subspace> = f.mats().iter().map(Matrix::image).collect();
    let im = Arc::new(induced_submodule(f.target(), &spaces));
    let mats = spaces.iter().map(basis_columns).collect();
    let incl = ModuleMap::new(im.clone(), f.target().clone(), mats)?;
    Ok((im, incl))
}
