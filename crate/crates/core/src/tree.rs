//! The tree of quotients `V/K_iV` over singular indices, and the checks
//! that go with it.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::category::{Grid, Obj};
use crate::functors::{f_s, sigma};
use crate::homology::{degree_report, is_torsion_free, torsion_vector, DegreeReport, Reg, TorsionVector};
use crate::linalg::{Matrix, Subspace};
use crate::module::{induced_quotient, ModuleError, PointwiseModule};

fn kernel_of_incl(v: &PointwiseModule, k: usize, i: usize) -> Option<Subspace> {
    v.incl_at(k, i).map(|e| e.to_dense().kernel_basis())
}

/// Coordinates (0-based) whose torsion kernel is nonzero somewhere.
pub fn singular_indices(v: &PointwiseModule) -> Vec<usize> {
    (0..v.m())
        .filter(|&i| (0..v.grid().len()).any(|k| kernel_of_incl(v, k, i).is_some_and(|s| !s.is_zero())))
        .collect()
}

/// `V/K_iV` on the grid of `V`. At objects with `n + o_i` outside the grid
/// the kernel cannot be observed and is taken to be zero.
pub fn child(v: &PointwiseModule, i: usize) -> Result<PointwiseModule, ModuleError> {
    Ok(child_with_data(v, i)?.0)
}

fn child_with_data(
    v: &PointwiseModule,
    i: usize,
) -> Result<(PointwiseModule, Vec<crate::linalg::QuotientData>), ModuleError> {
    if !singular_indices(v).contains(&i) {
        return Err(ModuleError::RegularIndex(i + 1));
    }
    let spaces: Vec<Subspace> = (0..v.grid().len())
        .map(|k| kernel_of_incl(v, k, i).unwrap_or_else(|| Subspace::zero(v.field(), v.dim_at(k))))
        .collect();
    Ok(induced_quotient(v, &spaces))
}

#[derive(Clone, Debug)]
pub struct TreeNode {
    pub module: Arc<PointwiseModule>,
    pub level: i64,
    /// Coordinates (0-based) chosen on the way down from the root.
    pub path: Vec<usize>,
    pub report: DegreeReport,
    pub torsion: TorsionVector,
    pub singular: Vec<usize>,
    pub children: Vec<TreeNode>,
}

impl TreeNode {
    pub fn is_leaf(&self) -> bool {
        self.children.is_empty()
    }

    /// Pre-order traversal in coordinate order.
    pub fn walk<'a>(&'a self, out: &mut Vec<&'a TreeNode>) {
        out.push(self);
        for c in &self.children {
            c.walk(out);
        }
    }
}

#[derive(Clone, Debug)]
pub struct TorsionTree {
    pub root: TreeNode,
    pub node_count: usize,
    pub depth: usize,
    /// False if some node at the level cap still had singular indices.
    pub terminated: bool,
}

impl TorsionTree {
    pub fn nodes(&self) -> Vec<&TreeNode> {
        let mut out = Vec::new();
        self.root.walk(&mut out);
        out
    }
}

fn expand(
    module: PointwiseModule,
    level: i64,
    path: Vec<usize>,
    level_cap: usize,
    s_max: usize,
    terminated: &mut bool,
) -> Result<TreeNode, ModuleError> {
    let report = degree_report(&module, s_max)?;
    let torsion = torsion_vector(&module)?;
    let singular = singular_indices(&module);
    let mut children = Vec::new();
    if !singular.is_empty() {
        if path.len() >= level_cap {
            *terminated = false;
        } else {
            for &i in &singular {
                let c = child(&module, i)?;
                let mut p = path.clone();
                p.push(i);
                children.push(expand(c, level - 1, p, level_cap, s_max, terminated)?);
            }
        }
    }
    Ok(TreeNode {
        module: Arc::new(module),
        level,
        path,
        report,
        torsion,
        singular,
        children,
    })
}

/// Expands the tree depth-first, children in coordinate order, stopping at
/// nodes without singular indices or at depth `level_cap`.
pub fn build_tree(v: &PointwiseModule, level_cap: usize, s_max: usize) -> Result<TorsionTree, ModuleError> {
    let mut terminated = true;
    let root = expand(v.clone(), 0, Vec::new(), level_cap, s_max, &mut terminated)?;
    let mut nodes = Vec::new();
    root.walk(&mut nodes);
    let node_count = nodes.len();
    let depth = nodes.iter().map(|n| n.path.len()).max().unwrap_or(0);
    Ok(TorsionTree {
        root,
        node_count,
        depth,
        terminated,
    })
}

/// Default level cap: `tsum + m + 2`, floored at zero.
pub fn default_level_cap(v: &PointwiseModule) -> Result<usize, ModuleError> {
    let t = torsion_vector(v)?;
    Ok((t.tsum + v.m() as i64 + 2).max(0) as usize)
}

/// Problems found along the tree: edges without descent, bad leaves, and
/// excess depth.
pub fn tree_violations(tree: &TorsionTree, m: usize) -> Vec<String> {
    let mut out = Vec::new();
    if !tree.terminated {
        out.push("level cap reached before all leaves were torsion-free".to_string());
    }
    let bound = tree.root.torsion.tsum + m as i64 + 1;
    if tree.depth as i64 > bound {
        out.push(format!("depth {} exceeds tsum + m + 1 = {bound}", tree.depth));
    }
    for node in tree.nodes() {
        for c in &node.children {
            if c.torsion.tsum > node.torsion.tsum - 1 {
                out.push(format!(
                    "edge {:?} -> {:?}: tsum {} -> {}",
                    node.path, c.path, node.torsion.tsum, c.torsion.tsum
                ));
            }
        }
        if node.is_leaf() && tree.terminated && !node.module.is_zero() && !is_torsion_free(&node.module) {
            out.push(format!("leaf {:?} is neither zero nor torsion-free", node.path));
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiltrationReport {
    pub regular: Vec<usize>,
    pub singular: Vec<usize>,
    pub failures: Vec<String>,
}

impl FiltrationReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Checks `0 -> ⊕_{i in S(V)} V/K_iV -> F_{R(V)}V -> D_{[m]}V -> 0` on the
/// grid `b - (1,...,1)`, building the maps explicitly.
pub fn filtration_check(v: &PointwiseModule) -> Result<FiltrationReport, ModuleError> {
    let m = v.m();
    let grid: Grid = v.grid().shrink_all()?;
    let singular = singular_indices(v);
    let regular: Vec<usize> = (0..m).filter(|i| !singular.contains(i)).collect();
    let field = v.field();
    let fr = f_s(&regular, v)?;
    let dm = f_s(&(0..m).collect::<Vec<_>>(), v)?;
    let mut failures = Vec::new();

    // Per coordinate: Σ_iV, D_iV and the projection between them, on the
    // common grid.
    let mut sig = Vec::with_capacity(m);
    let mut proj = Vec::with_capacity(m);
    for i in 0..m {
        let s = sigma(i, v)?;
        let images: Vec<Subspace> = s
            .grid()
            .objects()
            .iter()
            .map(|n| v.incl_action(n, i).unwrap().to_dense().image())
            .collect();
        let qd = induced_quotient(&s, &images).1;
        let si: Vec<usize> = grid.objects().iter().map(|n| s.grid().index_of(n).unwrap()).collect();
        sig.push(si.iter().map(|&k| s.dim_at(k)).collect::<Vec<_>>());
        proj.push(si.iter().map(|&k| qd[k].proj.clone()).collect::<Vec<Matrix>>());
    }
    let children: Vec<(usize, PointwiseModule, Vec<crate::linalg::QuotientData>)> = singular
        .iter()
        .map(|&i| child_with_data(v, i).map(|(c, q)| (i, c, q)))
        .collect::<Result<_, _>>()?;

    for (k, n) in grid.objects().iter().enumerate() {
        let vk = v.grid().index_of(n).unwrap();
        // F_R -> D_[m]: block diagonal, identity on regular summands.
        let rows: usize = (0..m).map(|i| proj[i][k].rows()).sum();
        let cols: usize = (0..m)
            .map(|i| if regular.contains(&i) { proj[i][k].rows() } else { sig[i][k] })
            .sum();
        if rows != dm.dim_at(k) || cols != fr.dim_at(k) {
            failures.push(format!("at {n}: summand dimensions do not match F_R and D_[m]"));
            continue;
        }
        let mut map = Matrix::zeros(field, rows, cols);
        let (mut r0, mut c0) = (0, 0);
        // Column offsets of each summand inside F_R, needed for the children.
        let mut offsets = vec![0; m];
        for i in 0..m {
            offsets[i] = c0;
            let p = &proj[i][k];
            if regular.contains(&i) {
                for t in 0..p.rows() {
                    map.set(r0 + t, c0 + t, 1);
                }
                c0 += p.rows();
            } else {
                for r in 0..p.rows() {
                    for c in 0..p.cols() {
                        map.set(r0 + r, c0 + c, p.get(r, c));
                    }
                }
                c0 += p.cols();
            }
            r0 += p.rows();
        }
        let rank = map.rank();
        if rank != rows {
            failures.push(format!("at {n}: F_R -> D_[m] is not surjective (rank {rank} < {rows})"));
        }
        // ⊕ children -> F_R: each child maps into its Σ_i summand by E^{(i)}.
        let child_dim: usize = children.iter().map(|(_, c, _)| c.dim_at(vk)).sum();
        let mut cols_out: Vec<Vec<u32>> = Vec::with_capacity(child_dim);
        let e_all: Vec<Matrix> = (0..m).map(|i| v.incl_at(vk, i).unwrap().to_dense()).collect();
        for (i, _, qd) in &children {
            let q = &qd[vk];
            for t in 0..q.complement.len() {
                let mut unit = vec![0u32; q.complement.len()];
                unit[t] = 1;
                let lifted = q.lift(&unit);
                let img = crate::linalg::LinearMap::apply(&e_all[*i], &lifted);
                let mut col = vec![0u32; cols];
                col[offsets[*i]..offsets[*i] + img.len()].copy_from_slice(&img);
                cols_out.push(col);
            }
        }
        let inj = Matrix::from_columns(field, cols, &cols_out);
        if inj.rank() != child_dim {
            failures.push(format!("at {n}: children do not embed into F_R"));
        }
        if !map.mul(&inj).is_zero() {
            failures.push(format!("at {n}: children do not map into the kernel"));
        }
        if child_dim + rank != cols {
            failures.push(format!(
                "at {n}: kernel has dimension {} but children sum to {child_dim}",
                cols - rank
            ));
        }
    }
    Ok(FiltrationReport {
        regular,
        singular,
        failures,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Outcome {
    Pass,
    Fail,
    Skipped,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RecursiveCase {
    pub subset: Vec<usize>,
    pub reg_v: Reg,
    pub reg_fs: Reg,
    pub outcome: Outcome,
}

/// `reg(V) <= reg(F_S V) + 1` for every `S ⊆ R(V)`. A zero module on either
/// side passes vacuously. Cases where either side has homology on the grid
/// shell in rows up to `s_max` are skipped.
pub fn recursive_inequality_check(v: &PointwiseModule, s_max: usize) -> Result<Vec<RecursiveCase>, ModuleError> {
    let rv = degree_report(v, s_max)?;
    let singular = singular_indices(v);
    let regular: Vec<usize> = (0..v.m()).filter(|i| !singular.contains(i)).collect();
    let mut out = Vec::new();
    for mask in 0u32..(1 << regular.len()) {
        let subset: Vec<usize> = regular
            .iter()
            .enumerate()
            .filter(|(b, _)| mask >> b & 1 == 1)
            .map(|(_, &i)| i)
            .collect();
        let fs = f_s(&subset, v)?;
        let rf = degree_report(&fs, s_max)?;
        let outcome = if v.is_zero() || fs.is_zero() {
            Outcome::Pass
        } else if rv.boundary_flag || rf.boundary_flag {
            Outcome::Skipped
        } else if rv.reg.at_most_succ(rf.reg) {
            Outcome::Pass
        } else {
            Outcome::Fail
        };
        out.push(RecursiveCase {
            subset,
            reg_v: rv.reg,
            reg_fs: rf.reg,
            outcome,
        });
    }
    Ok(out)
}

/// Checks `0 -> K_iV -> V -> V/K_iV -> 0` ranks for a singular `i`, at
/// every object with `n + o_i` in the grid.
pub fn child_exactness_failures(v: &PointwiseModule, i: usize) -> Result<Vec<Obj>, ModuleError> {
    let (c, qd) = child_with_data(v, i)?;
    let mut out = Vec::new();
    for (k, n) in v.grid().objects().iter().enumerate() {
        let Some(ker) = kernel_of_incl(v, k, i) else { continue };
        if ker.dim() + c.dim_at(k) != v.dim_at(k) || qd[k].proj.rank() != c.dim_at(k) {
            out.push(n.clone());
        }
    }
    Ok(out)
}
