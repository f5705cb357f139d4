//! Resolutions, homology tables, homological degrees and torsion.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::category::{Grid, Obj};
use crate::functors::Embedded;
use crate::module::{ModuleError, PointwiseModule};

/// Dimensions of the pieces of a truncated free resolution
/// `... -> P_1 -> P_0 -> V`, with syzygies `W_0 = V`, `W_{s+1} = ker(P_s -> W_s)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Resolution {
    pub grid: Grid,
    pub s_max: usize,
    /// `dim W_s` for `s = 0..=s_max`.
    pub syzygy_dims: Vec<Vec<usize>>,
    /// `dim H_0(W_s)` for `s = 0..=s_max`.
    pub syzygy_h0: Vec<Vec<usize>>,
    /// Generator degrees of `P_s` for `s = 0..s_max`.
    pub cover_degrees: Vec<Vec<Obj>>,
    /// `dim P_s` for `s = 0..s_max`.
    pub free_dims: Vec<Vec<usize>>,
}

pub fn resolve(v: &PointwiseModule, s_max: usize) -> Result<Resolution, ModuleError> {
    let grid = v.grid().clone();
    let mut w = Embedded::whole(Arc::new(v.clone()));
    let mut res = Resolution {
        grid: grid.clone(),
        s_max,
        syzygy_dims: Vec::new(),
        syzygy_h0: Vec::new(),
        cover_degrees: Vec::new(),
        free_dims: Vec::new(),
    };
    for s in 0..=s_max {
        res.syzygy_dims.push(w.dims());
        if w.is_zero() {
            let zeros = vec![0; grid.len()];
            res.syzygy_h0.push(zeros.clone());
            if s < s_max {
                res.cover_degrees.push(Vec::new());
                res.free_dims.push(zeros);
            }
            continue;
        }
        res.syzygy_h0.push(w.h0().dims);
        if s == s_max {
            break;
        }
        let cover = w.cover()?;
        res.cover_degrees.push(cover.free.degrees().to_vec());
        res.free_dims.push(cover.free.module.dims().to_vec());
        w = w.syzygy(&cover);
    }
    Ok(res)
}

/// `dim H_s(V)_n` for `s = 0..=s_max` at every grid object.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomologyTable {
    pub grid: Grid,
    pub s_max: usize,
    pub entries: Vec<Vec<usize>>,
}

impl HomologyTable {
    pub fn get(&self, s: usize, n: &Obj) -> usize {
        self.grid.index_of(n).map_or(0, |k| self.entries[s][k])
    }

    /// Top rank of a nonzero entry in row `s`, or -1.
    pub fn hd(&self, s: usize) -> i64 {
        self.grid
            .objects()
            .iter()
            .zip(&self.entries[s])
            .filter(|(_, &d)| d > 0)
            .map(|(n, _)| n.rank() as i64)
            .max()
            .unwrap_or(-1)
    }

    /// Whether row `s` has a nonzero entry on the outer shell of the grid.
    pub fn touches_shell(&self, s: usize) -> bool {
        self.grid
            .objects()
            .iter()
            .zip(&self.entries[s])
            .any(|(n, &d)| d > 0 && self.grid.on_shell(n))
    }
}

/// Free-module generators counted with their automorphism orbits:
/// `dim H_0(⊕ M(d))_n` is `|Aut(n)|` times the number of generators at `n`.
fn free_h0(grid: &Grid, degrees: &[Obj]) -> Vec<usize> {
    grid.objects()
        .iter()
        .map(|n| degrees.iter().filter(|d| *d == n).count() * n.automorphism_count() as usize)
        .collect()
}

impl Resolution {
    /// Homology from the long exact sequences of `0 -> W_s -> P_{s-1} -> W_{s-1} -> 0`:
    /// `dim H_s(V)_n = h0(W_s)_n - h0(P_{s-1})_n + h0(W_{s-1})_n` for `s >= 1`.
    pub fn homology(&self) -> HomologyTable {
        let mut entries = vec![self.syzygy_h0[0].clone()];
        for s in 1..=self.s_max {
            let p = free_h0(&self.grid, &self.cover_degrees[s - 1]);
            let row = (0..self.grid.len())
                .map(|k| {
                    let d = self.syzygy_h0[s][k] + self.syzygy_h0[s - 1][k];
                    assert!(d >= p[k], "negative homology dimension");
                    d - p[k]
                })
                .collect();
            entries.push(row);
        }
        HomologyTable {
            grid: self.grid.clone(),
            s_max: self.s_max,
            entries,
        }
    }

    /// Objects where `dim V_n` differs from the alternating sum of free
    /// fiber dimensions corrected by the last syzygy.
    pub fn euler_failures(&self, v: &PointwiseModule) -> Vec<Obj> {
        let last = self.s_max;
        self.grid
            .objects()
            .iter()
            .enumerate()
            .filter(|&(k, _)| {
                let mut sum: i64 = 0;
                for s in 0..last {
                    let sign = if s % 2 == 0 { 1 } else { -1 };
                    sum += sign * self.free_dims[s][k] as i64;
                }
                let sign = if last.is_multiple_of(2) { 1 } else { -1 };
                sum += sign * self.syzygy_dims[last][k] as i64;
                sum != v.dim_at(k) as i64
            })
            .map(|(_, n)| n.clone())
            .collect()
    }
}

pub fn homology_table(v: &PointwiseModule, s_max: usize) -> Result<HomologyTable, ModuleError> {
    Ok(resolve(v, s_max)?.homology())
}

/// An integer that may be `-∞`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Reg {
    NegInf,
    Finite(i64),
}

impl fmt::Display for Reg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Reg::NegInf => f.write_str("-inf"),
            Reg::Finite(x) => write!(f, "{x}"),
        }
    }
}

impl Serialize for Reg {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Reg::NegInf => s.serialize_str("-inf"),
            Reg::Finite(x) => s.serialize_i64(*x),
        }
    }
}

impl<'de> Deserialize<'de> for Reg {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Int(i64),
            Str(String),
        }
        match Raw::deserialize(d)? {
            Raw::Int(x) => Ok(Reg::Finite(x)),
            Raw::Str(s) if s == "-inf" => Ok(Reg::NegInf),
            Raw::Str(s) => Err(serde::de::Error::custom(format!("bad regularity {s:?}"))),
        }
    }
}

impl Reg {
    /// `self <= other + 1`, with `-∞` below everything.
    pub fn at_most_succ(self, other: Reg) -> bool {
        match (self, other) {
            (Reg::NegInf, _) => true,
            (Reg::Finite(_), Reg::NegInf) => false,
            (Reg::Finite(a), Reg::Finite(b)) => a <= b + 1,
        }
    }
}

/// Observed homological degrees, with flags for rows touching the shell.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeReport {
    pub hd: Vec<i64>,
    pub gd: i64,
    pub prd: i64,
    pub reg: Reg,
    pub shell: Vec<bool>,
    pub boundary_flag: bool,
}

impl DegreeReport {
    pub fn from_table(t: &HomologyTable) -> Self {
        let hd: Vec<i64> = (0..=t.s_max).map(|s| t.hd(s)).collect();
        let shell: Vec<bool> = (0..=t.s_max).map(|s| t.touches_shell(s)).collect();
        let prd = hd.iter().take(2).copied().max().unwrap();
        let reg = hd
            .iter()
            .enumerate()
            .filter(|(_, &h)| h >= 0)
            .map(|(s, &h)| h - s as i64)
            .max()
            .map_or(Reg::NegInf, Reg::Finite);
        DegreeReport {
            gd: hd[0],
            prd,
            reg,
            boundary_flag: shell.iter().any(|&b| b),
            hd,
            shell,
        }
    }

    /// Whether any of rows `0..=s` touches the shell.
    pub fn shell_upto(&self, s: usize) -> bool {
        self.shell.iter().take(s + 1).any(|&b| b)
    }
}

pub fn degree_report(v: &PointwiseModule, s_max: usize) -> Result<DegreeReport, ModuleError> {
    Ok(DegreeReport::from_table(&homology_table(v, s_max)?))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TorsionVector {
    pub t: Vec<i64>,
    pub tsum: i64,
}

/// Observed torsion vector: `t_i` is the largest `n_i` at which some nonzero
/// vector is killed by `E^{(i)}`, or -1.
pub fn torsion_vector(v: &PointwiseModule) -> Result<TorsionVector, ModuleError> {
    let grid = v.grid();
    let mut t = Vec::with_capacity(grid.m());
    for i in 0..grid.m() {
        grid.shrink(i)?;
        let ti = grid
            .objects()
            .iter()
            .enumerate()
            .filter_map(|(k, n)| {
                let e = v.incl_at(k, i)?;
                (e.to_dense().rank() < v.dim_at(k)).then_some(n.coords()[i] as i64)
            })
            .max()
            .unwrap_or(-1);
        t.push(ti);
    }
    let tsum = t.iter().sum();
    Ok(TorsionVector { t, tsum })
}

pub fn is_torsion_free(v: &PointwiseModule) -> bool {
    (0..v.grid().len()).all(|k| {
        (0..v.m()).all(|i| v.incl_at(k, i).is_none_or(|e| e.to_dense().rank() == v.dim_at(k)))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::category::Morphism;
    use crate::linalg::PrimeField;
    use crate::module::{direct_sum, free_module};
    use crate::presentation::{evaluate_presentation, FreeElement, Presentation, Term};

    fn o(v: &[usize]) -> Obj {
        Obj::new(v.to_vec())
    }

    fn f(p: u64) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    fn torsion_at_origin(p: u64, bounds: &[usize]) -> PointwiseModule {
        let m = bounds.len();
        let one = Obj::new((0..m).map(|i| usize::from(i == 0)).collect());
        let rel = FreeElement {
            object: one.clone(),
            terms: vec![Term {
                gen: 0,
                map: Morphism::from_images(&one, &vec![vec![]; m]).unwrap(),
                coeff: 1,
            }],
        };
        let mut relations = vec![rel];
        for i in 1..m {
            let e = Obj::new((0..m).map(|j| usize::from(j == i)).collect());
            relations.push(FreeElement {
                object: e.clone(),
                terms: vec![Term {
                    gen: 0,
                    map: Morphism::from_images(&e, &vec![vec![]; m]).unwrap(),
                    coeff: 1,
                }],
            });
        }
        evaluate_presentation(&Presentation {
            field: f(p),
            m,
            bounds: o(bounds),
            generators: vec![Obj::origin(m)],
            relations,
        })
        .unwrap()
    }

    #[test]
    fn free_modules_are_projective() {
        let g = Grid::new(o(&[4]));
        for d in 0..=3 {
            let m = free_module(f(2), &o(&[d]), &g).unwrap();
            let t = homology_table(&m, 3).unwrap();
            for s in 1..=3 {
                assert!(t.entries[s].iter().all(|&x| x == 0), "M({d}) row {s}");
            }
            let factorial: usize = (1..=d).product();
            assert_eq!(t.get(0, &o(&[d])), factorial);
            let r = DegreeReport::from_table(&t);
            assert_eq!((r.gd, r.prd, r.reg), (d as i64, d as i64, Reg::Finite(d as i64)));
        }
    }

    #[test]
    fn torsion_at_origin_resolution() {
        for p in [2, 3, 5] {
            let v = torsion_at_origin(p, &[6]);
            let res = resolve(&v, 3).unwrap();
            assert!(res.euler_failures(&v).is_empty());
            let t = res.homology();
            for s in 0..=3 {
                for n in 0..=6 {
                    assert_eq!(t.get(s, &o(&[n])), usize::from(n == s), "p={p} s={s} n={n}");
                }
            }
            let r = DegreeReport::from_table(&t);
            assert_eq!(r.hd, vec![0, 1, 2, 3]);
            assert_eq!((r.gd, r.prd, r.reg), (0, 1, Reg::Finite(0)));
            assert!(!r.boundary_flag);
        }
    }

    #[test]
    fn zero_module_report() {
        let z = PointwiseModule::zero(f(3), Grid::new(o(&[2, 2])));
        let r = degree_report(&z, 2).unwrap();
        assert_eq!(r.hd, vec![-1, -1, -1]);
        assert_eq!(r.reg, Reg::NegInf);
        assert_eq!(r.reg.to_string(), "-inf");
        assert!(is_torsion_free(&z));
        assert_eq!(torsion_vector(&z).unwrap().t, vec![-1, -1]);
    }

    #[test]
    fn torsion_examples() {
        let g = Grid::new(o(&[3, 3]));
        let m = free_module(f(2), &o(&[1, 1]), &g).unwrap();
        let t = torsion_vector(&m).unwrap();
        assert_eq!((t.t.clone(), t.tsum), (vec![-1, -1], -2));
        assert!(is_torsion_free(&m));

        let k = torsion_at_origin(2, &[3, 3]);
        assert_eq!(k.dims().iter().sum::<usize>(), 1);
        let t = torsion_vector(&k).unwrap();
        assert_eq!((t.t, t.tsum), (vec![0, 0], 0));
        assert!(!is_torsion_free(&k));

        let k1 = torsion_at_origin(3, &[4]);
        let m0 = free_module(f(3), &o(&[0]), k1.grid()).unwrap();
        let sum = direct_sum(f(3), k1.grid(), &[&m0, &k1]).unwrap();
        assert_eq!(torsion_vector(&sum).unwrap().t, vec![0]);
    }

    #[test]
    fn reg_serde_round_trip() {
        for r in [Reg::NegInf, Reg::Finite(-1), Reg::Finite(4)] {
            let s = serde_json::to_string(&r).unwrap();
            assert_eq!(serde_json::from_str::<Reg>(&s).unwrap(), r);
        }
        assert!(Reg::NegInf.at_most_succ(Reg::NegInf));
        assert!(!Reg::Finite(0).at_most_succ(Reg::NegInf));
        assert!(Reg::Finite(3).at_most_succ(Reg::Finite(2)));
        assert!(!Reg::Finite(4).at_most_succ(Reg::Finite(2)));
    }
}
