//! Report types and their text rendering.

use std::fmt::Write as _;

use fimhom_core::category::{Grid, Obj};
use fimhom_core::homology::{DegreeReport, HomologyTable, Resolution, TorsionVector};
use fimhom_core::tree::TorsionTree;
use fimhom_core::verify::{show_set, Check, Verdict};
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Entry {
    pub object: Obj,
    pub value: usize,
}

fn entries(grid: &Grid, values: &[usize], keep_zero: bool) -> Vec<Entry> {
    grid.objects()
        .iter()
        .zip(values)
        .filter(|(_, &v)| keep_zero || v > 0)
        .map(|(n, &v)| Entry {
            object: n.clone(),
            value: v,
        })
        .collect()
}

fn show_entries(e: &[Entry]) -> String {
    if e.is_empty() {
        return "0".to_string();
    }
    e.iter().map(|x| format!("{}={}", x.object, x.value)).collect::<Vec<_>>().join(" ")
}

fn show_list<T: ToString>(xs: &[T]) -> String {
    xs.iter().map(T::to_string).collect::<Vec<_>>().join(", ")
}

fn one_based(s: &[usize]) -> Vec<usize> {
    s.iter().map(|i| i + 1).collect()
}

fn show_one_based(s: &[usize]) -> String {
    show_set(&s.iter().map(|i| i - 1).collect::<Vec<_>>())
}

/// Output of `analyze`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnalyzeReport {
    pub field: u32,
    pub m: usize,
    pub bounds: Obj,
    pub smax: usize,
    pub dims: Vec<Entry>,
    /// Nonzero entries of `H_s` for `s = 0..=smax`.
    pub homology: Vec<Vec<Entry>>,
    pub degrees: DegreeReport,
    pub torsion: TorsionVector,
    /// 1-based.
    pub singular: Vec<usize>,
    /// Rows with a nonzero entry on the outer shell.
    pub boundary_rows: Vec<usize>,
}

impl AnalyzeReport {
    pub fn new(
        field: u32,
        dims: &[usize],
        table: &HomologyTable,
        torsion: TorsionVector,
        singular: &[usize],
    ) -> Self {
        let degrees = DegreeReport::from_table(table);
        let boundary_rows = (0..=table.s_max).filter(|&s| degrees.shell[s]).collect();
        AnalyzeReport {
            field,
            m: table.grid.m(),
            bounds: table.grid.bounds().clone(),
            smax: table.s_max,
            dims: entries(&table.grid, dims, true),
            homology: table.entries.iter().map(|row| entries(&table.grid, row, false)).collect(),
            degrees,
            torsion,
            singular: one_based(singular),
            boundary_rows,
        }
    }

    pub fn text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "field F_{}, m = {}, bounds {}", self.field, self.m, self.bounds);
        let _ = writeln!(s, "dims: {}", show_entries(&self.dims));
        for (k, row) in self.homology.iter().enumerate() {
            let _ = writeln!(s, "H_{k}: {}", show_entries(row));
        }
        let d = &self.degrees;
        let _ = writeln!(s, "hd: [{}]", show_list(&d.hd));
        let _ = writeln!(s, "gd = {}, prd = {}, reg = {}", d.gd, d.prd, d.reg);
        let _ = writeln!(s, "torsion: t = ({}), tsum = {}", show_list(&self.torsion.t), self.torsion.tsum);
        let _ = writeln!(s, "singular: {}", show_one_based(&self.singular));
        let rows = if self.boundary_rows.is_empty() {
            "none".to_string()
        } else {
            show_list(&self.boundary_rows)
        };
        let _ = writeln!(s, "boundary rows: {rows}");
        s
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Stage {
    pub s: usize,
    /// Generator degrees of `P_s` with multiplicities.
    pub generators: Vec<Entry>,
    pub free_dim: usize,
    pub syzygy_dim: usize,
}

/// Output of `resolve`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResolveReport {
    pub smax: usize,
    pub stages: Vec<Stage>,
    pub homology: Vec<Vec<Entry>>,
    pub euler_failures: Vec<Obj>,
}

impl ResolveReport {
    pub fn new(res: &Resolution, euler_failures: Vec<Obj>) -> Self {
        let stages = (0..res.cover_degrees.len())
            .map(|s| {
                let counts: Vec<usize> = res
                    .grid
                    .objects()
                    .iter()
                    .map(|n| res.cover_degrees[s].iter().filter(|d| *d == n).count())
                    .collect();
                Stage {
                    s,
                    generators: entries(&res.grid, &counts, false),
                    free_dim: res.free_dims[s].iter().sum(),
                    syzygy_dim: res.syzygy_dims[s + 1].iter().sum(),
                }
            })
            .collect();
        let table = res.homology();
        ResolveReport {
            smax: res.s_max,
            stages,
            homology: table.entries.iter().map(|row| entries(&res.grid, row, false)).collect(),
            euler_failures,
        }
    }

    pub fn text(&self) -> String {
        let mut s = String::new();
        for st in &self.stages {
            let _ = writeln!(
                s,
                "P_{}: generators {} | total dim {} | kernel dim {}",
                st.s,
                show_entries(&st.generators),
                st.free_dim,
                st.syzygy_dim
            );
        }
        for (k, row) in self.homology.iter().enumerate() {
            let _ = writeln!(s, "H_{k}: {}", show_entries(row));
        }
        if self.euler_failures.is_empty() {
            let _ = writeln!(s, "euler: PASS");
        } else {
            let _ = writeln!(s, "euler: FAIL at {}", show_list(&self.euler_failures));
        }
        s
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NodeSummary {
    /// Singular indices taken from the root, 1-based.
    pub path: Vec<usize>,
    pub level: i64,
    pub tsum: i64,
    pub singular: Vec<usize>,
    pub dims_total: usize,
    /// `tsum(parent) - tsum(node)`; absent at the root.
    pub margin: Option<i64>,
}

/// Output of `tree`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeReport {
    pub level_cap: usize,
    pub node_count: usize,
    pub depth: usize,
    pub terminated: bool,
    pub nodes: Vec<NodeSummary>,
    pub violations: Vec<String>,
}

impl TreeReport {
    pub fn new(tree: &TorsionTree, level_cap: usize, violations: Vec<String>) -> Self {
        let mut nodes = Vec::new();
        let mut stack = vec![(&tree.root, None::<i64>)];
        while let Some((node, parent)) = stack.pop() {
            nodes.push(NodeSummary {
                path: one_based(&node.path),
                level: node.level,
                tsum: node.torsion.tsum,
                singular: one_based(&node.singular),
                dims_total: node.module.total_dim(),
                margin: parent.map(|p| p - node.torsion.tsum),
            });
            for c in node.children.iter().rev() {
                stack.push((c, Some(node.torsion.tsum)));
            }
        }
        TreeReport {
            level_cap,
            node_count: tree.node_count,
            depth: tree.depth,
            terminated: tree.terminated,
            nodes,
            violations,
        }
    }

    pub fn text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(
            s,
            "nodes {} | depth {} | level cap {} | terminated {}",
            self.node_count, self.depth, self.level_cap, self.terminated
        );
        for n in &self.nodes {
            let margin = n.margin.map_or("-".to_string(), |x| x.to_string());
            let _ = writeln!(
                s,
                "{}path [{}] level {} tsum {} singular {} dims {} margin {}",
                "  ".repeat(n.path.len()),
                show_list(&n.path),
                n.level,
                n.tsum,
                show_one_based(&n.singular),
                n.dims_total,
                margin
            );
        }
        for v in &self.violations {
            let _ = writeln!(s, "FAIL {v}");
        }
        s
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CaseReport {
    pub case: usize,
    pub seed: Option<u64>,
    pub checks: Vec<Check>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Tally {
    pub pass: usize,
    pub fail: usize,
    pub skipped: usize,
}

/// Output of `verify`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub cases: Vec<CaseReport>,
    pub summary: Tally,
}

impl VerifyReport {
    pub fn new(cases: Vec<CaseReport>) -> Self {
        let mut summary = Tally::default();
        for c in cases.iter().flat_map(|c| &c.checks) {
            match c.verdict {
                Verdict::Pass => summary.pass += 1,
                Verdict::Fail(_) => summary.fail += 1,
                Verdict::Skipped(_) => summary.skipped += 1,
            }
        }
        VerifyReport { cases, summary }
    }

    pub fn text(&self) -> String {
        let mut s = String::new();
        for c in &self.cases {
            let label = match c.seed {
                Some(seed) => format!("case {} seed {}", c.case, seed),
                None => format!("case {}", c.case),
            };
            for check in &c.checks {
                let _ = writeln!(s, "[{label}] {}: {}", check.property, check.verdict);
            }
        }
        let t = &self.summary;
        let _ = writeln!(
            s,
            "summary: {} cases, {} PASS, {} FAIL, {} SKIPPED",
            self.cases.len(),
            t.pass,
            t.fail,
            t.skipped
        );
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use fimhom_core::homology::{homology_table, resolve, torsion_vector};
    use fimhom_core::presentation::{evaluate_presentation, random_presentation};
    use fimhom_core::tree::{build_tree, default_level_cap, singular_indices, tree_violations};
    use fimhom_core::verify::{check_module, corpus_params, CheckOptions};
    use fimhom_core::linalg::PrimeField;
    use serde::de::DeserializeOwned;

    fn round_trip<T: Serialize + DeserializeOwned + PartialEq + std::fmt::Debug>(r: &T) {
        let json = serde_json::to_string_pretty(r).unwrap();
        let back: T = serde_json::from_str(&json).unwrap();
        assert_eq!(&back, r);
        assert_eq!(serde_json::to_string_pretty(&back).unwrap(), json);
    }

    #[test]
    fn reports_round_trip() {
        for seed in 0..12 {
            let params = corpus_params(2, Obj::new(vec![3, 3]), PrimeField::new(2 + seed % 2).unwrap());
            let v = evaluate_presentation(&random_presentation(seed, &params)).unwrap();
            let table = homology_table(&v, 2).unwrap();
            round_trip(&AnalyzeReport::new(
                2,
                v.dims(),
                &table,
                torsion_vector(&v).unwrap(),
                &singular_indices(&v),
            ));
            let res = resolve(&v, 2).unwrap();
            round_trip(&ResolveReport::new(&res, res.euler_failures(&v)));
            let cap = default_level_cap(&v).unwrap();
            let tree = build_tree(&v, cap, 1).unwrap();
            round_trip(&TreeReport::new(&tree, cap, tree_violations(&tree, 2)));
            let opts = CheckOptions {
                s_max: 2,
                map_seed: seed,
                free_degrees: None,
            };
            round_trip(&VerifyReport::new(vec![CaseReport {
                case: 0,
                seed: Some(seed),
                checks: check_module(&v, &opts).unwrap(),
            }]));
        }
    }
}
