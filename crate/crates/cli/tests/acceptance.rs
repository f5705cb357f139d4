//! Acceptance criteria 1-10. Prints one PASS/FAIL line per criterion and
//! exits nonzero if any criterion fails.

use std::process::Command;
use std::time::{Duration, Instant};

use fimhom_core::category::{Grid, Morphism, Obj};
use fimhom_core::functors::{derivative, derivative_set, natural_map, sigma, sigma_set};
use fimhom_core::homology::{degree_report, homology_table, is_torsion_free, resolve, Reg};
use fimhom_core::linalg::PrimeField;
use fimhom_core::module::{free_module, PointwiseModule};
use fimhom_core::presentation::{evaluate_presentation, FreeElement, Presentation, Term};
use fimhom_core::tree::{build_tree, default_level_cap, filtration_check, recursive_inequality_check, Outcome, TreeNode};
use fimhom_core::verify::{check_module, corpus_module, corpus_params, CheckOptions, Verdict};

const CORPUS: u64 = 400;

struct Outcomes {
    failed: usize,
}

impl Outcomes {
    fn report(&mut self, id: usize, name: &str, ok: bool, detail: String, took: Duration) {
        let tag = if ok { "PASS" } else { "FAIL" };
        println!("{tag} {id:>2} {name}: {detail} [{:.2}s]", took.as_secs_f64());
        if !ok {
            self.failed += 1;
        }
    }
}

fn field(p: u64) -> PrimeField {
    PrimeField::new(p).unwrap()
}

fn factorial(n: usize) -> usize {
    (1..=n).product()
}

fn corpus() -> Vec<PointwiseModule> {
    (0..CORPUS)
        .map(|seed| {
            let p = if seed % 2 == 0 { 2 } else { 3 };
            let params = corpus_params(2, Obj::new(vec![3, 3]), field(p));
            corpus_module(seed, &params).unwrap()
        })
        .collect()
}

fn degrees_up_to(m: usize, total: usize) -> Vec<Obj> {
    let mut out = vec![Obj::origin(m)];
    let mut frontier = out.clone();
    for _ in 0..total {
        let mut next = Vec::new();
        for d in &frontier {
            for i in 0..m {
                let e = d.plus(i);
                if !out.contains(&e) && !next.contains(&e) {
                    next.push(e);
                }
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

fn criterion_1(o: &mut Outcomes) {
    let start = Instant::now();
    let mut problems = Vec::new();
    let mut count = 0;
    for (m, bounds) in [(1, vec![4]), (2, vec![3, 3])] {
        let grid = Grid::new(Obj::new(bounds));
        for p in [2, 3] {
            for d in degrees_up_to(m, 3) {
                count += 1;
                let v = free_module(field(p), &d, &grid).unwrap();
                let t = homology_table(&v, 3).unwrap();
                for (k, n) in grid.objects().iter().enumerate() {
                    let h0 = if *n == d { d.coords().iter().map(|&c| factorial(c)).product() } else { 0 };
                    if t.entries[0][k] != h0 {
                        problems.push(format!("M{d} p={p}: H_0 at {n} is {}", t.entries[0][k]));
                    }
                    for s in 1..=3 {
                        if t.entries[s][k] != 0 {
                            problems.push(format!("M{d} p={p}: H_{s} at {n} nonzero"));
                        }
                    }
                }
                for i in 0..m {
                    if !natural_map(i, &v).unwrap().is_injective() {
                        problems.push(format!("M{d} p={p}: natural map {} not injective", i + 1));
                    }
                    let hs = homology_table(&sigma(i, &v).unwrap(), 1).unwrap();
                    if hs.entries[1].iter().any(|&x| x > 0) {
                        problems.push(format!("M{d} p={p}: H_1(Sigma_{}) nonzero", i + 1));
                    }
                    let gd = degree_report(&derivative(i, &v).unwrap(), 0).unwrap().gd;
                    if gd > d.rank() as i64 - 1 {
                        problems.push(format!("M{d} p={p}: gd(D_{}) = {gd}", i + 1));
                    }
                }
            }
        }
    }
    let took = start.elapsed();
    let ok = problems.is_empty() && took < Duration::from_secs(10);
    let detail = match problems.first() {
        Some(p) => format!("{} problems, first: {p}", problems.len()),
        None => format!("{count} free modules, H_1..H_3 vanish"),
    };
    o.report(1, "free-module projectivity", ok, detail, took);
}

fn criterion_2(o: &mut Outcomes, corpus: &[PointwiseModule]) {
    let start = Instant::now();
    let (mut clean, mut bad) = (0, Vec::new());
    for (seed, v) in corpus.iter().enumerate() {
        if v.is_zero() {
            continue;
        }
        let rv = degree_report(v, 0).unwrap();
        let rd = degree_report(&derivative_set(&[0, 1], v).unwrap(), 0).unwrap();
        if rv.boundary_flag || rd.boundary_flag {
            continue;
        }
        clean += 1;
        if rv.gd != rd.gd + 1 {
            bad.push(format!("seed {seed}: gd(V)={} gd(D)={}", rv.gd, rd.gd));
        }
    }
    let took = start.elapsed();
    let ok = clean >= 100 && bad.is_empty() && took < Duration::from_secs(60);
    let mut detail = format!("{clean} boundary-clean modules, {} exceptions", bad.len());
    if let Some(b) = bad.first() {
        detail += &format!(", first: {b}");
    }
    o.report(2, "gd(V) = gd(D_[2]V) + 1", ok, detail, took);
}

fn criterion_3(o: &mut Outcomes, corpus: &[PointwiseModule]) {
    let start = Instant::now();
    let (mut checked, mut skipped, mut bad) = (0, 0, Vec::new());
    for (seed, v) in corpus.iter().enumerate() {
        if v.is_zero() {
            continue;
        }
        let rv = degree_report(v, 1).unwrap();
        for s in [vec![0], vec![1], vec![0, 1]] {
            let rs = degree_report(&sigma_set(&s, v).unwrap(), 1).unwrap();
            let rd = degree_report(&derivative_set(&s, v).unwrap(), 1).unwrap();
            for (w, bound, name) in [(&rs, rv.prd, "Sigma"), (&rd, rv.prd - 1, "D")] {
                if rv.boundary_flag || w.boundary_flag {
                    skipped += 1;
                    continue;
                }
                checked += 1;
                if w.prd > bound {
                    bad.push(format!("seed {seed} {name}_{s:?}: prd {} > {bound}", w.prd));
                }
            }
        }
    }
    let mut detail = format!("{checked} checked, {skipped} skipped, {} exceptions", bad.len());
    if let Some(b) = bad.first() {
        detail += &format!(", first: {b}");
    }
    o.report(3, "presentation-degree inequalities", checked > 0 && bad.is_empty(), detail, start.elapsed());
}

/// Reads the harness verdicts for the torsion properties.
fn criterion_4(o: &mut Outcomes, corpus: &[PointwiseModule]) {
    let start = Instant::now();
    let prefixes = ["torsion-gd", "torsion-shift", "child-descent", "kernel-bound"];
    let (mut checked, mut skipped, mut bad) = (0, 0, Vec::new());
    for (seed, v) in corpus.iter().enumerate() {
        let opts = CheckOptions {
            s_max: 3,
            map_seed: seed as u64,
            free_degrees: None,
        };
        for c in check_module(v, &opts).unwrap() {
            if !prefixes.iter().any(|p| c.property.starts_with(p)) {
                continue;
            }
            match c.verdict {
                Verdict::Pass => checked += 1,
                Verdict::Skipped(_) => skipped += 1,
                Verdict::Fail(d) => {
                    checked += 1;
                    bad.push(format!("seed {seed} {}: {d}", c.property));
                }
            }
        }
    }
    let mut detail = format!("{checked} checked, {skipped} skipped, {} exceptions", bad.len());
    if let Some(b) = bad.first() {
        detail += &format!(", first: {b}");
    }
    o.report(4, "torsion-vector laws", checked > 0 && bad.is_empty(), detail, start.elapsed());
}

fn criterion_9(o: &mut Outcomes, corpus: &[PointwiseModule]) {
    let start = Instant::now();
    let s_max = 3;
    let mut bad = Vec::new();
    let mut objects = 0;
    for (seed, v) in corpus.iter().enumerate() {
        let res = resolve(v, s_max).unwrap();
        for (k, n) in v.grid().objects().iter().enumerate() {
            objects += 1;
            let mut sum: i64 = 0;
            for s in 0..s_max {
                let sign = if s % 2 == 0 { 1 } else { -1 };
                sum += sign * res.free_dims[s][k] as i64;
            }
            let sign = if s_max % 2 == 0 { 1 } else { -1 };
            sum += sign * res.syzygy_dims[s_max][k] as i64;
            if sum != v.dims()[k] as i64 {
                bad.push(format!("seed {seed} at {n}: {sum} vs {}", v.dims()[k]));
            }
        }
    }
    let mut detail = format!("{objects} (module, object) pairs, {} mismatches", bad.len());
    if let Some(b) = bad.first() {
        detail += &format!(", first: {b}");
    }
    o.report(9, "Euler characteristic", bad.is_empty(), detail, start.elapsed());
}

fn criterion_5(o: &mut Outcomes, corpus: &[PointwiseModule]) {
    let start = Instant::now();
    let mut bad = Vec::new();
    for (seed, v) in corpus.iter().enumerate() {
        let f = filtration_check(v).unwrap();
        if let Some(e) = f.failures.first() {
            bad.push(format!("seed {seed}: {e}"));
        }
    }
    let mut detail = format!("{} modules, {} failures", corpus.len(), bad.len());
    if let Some(b) = bad.first() {
        detail += &format!(", first: {b}");
    }
    o.report(5, "filtration", bad.is_empty(), detail, start.elapsed());
}

fn criterion_6(o: &mut Outcomes, corpus: &[PointwiseModule]) {
    let start = Instant::now();
    let (mut clean, mut bad) = (0, Vec::new());
    for (seed, v) in corpus.iter().enumerate() {
        if v.is_zero() || degree_report(v, 3).unwrap().boundary_flag {
            continue;
        }
        let cases = recursive_inequality_check(v, 3).unwrap();
        if cases.iter().any(|c| c.outcome == Outcome::Skipped) {
            continue;
        }
        clean += 1;
        for c in &cases {
            // A zero module on either side holds vacuously.
            let holds = match (c.reg_v, c.reg_fs) {
                (Reg::Finite(a), Reg::Finite(b)) => a <= b + 1,
                _ => true,
            };
            if !holds || c.outcome != Outcome::Pass {
                bad.push(format!("seed {seed} S={:?}: reg(V)={} reg(F_S V)={}", c.subset, c.reg_v, c.reg_fs));
            }
        }
    }
    let mut detail = format!("{clean} fully clean modules, {} exceptions", bad.len());
    if let Some(b) = bad.first() {
        detail += &format!(", first: {b}");
    }
    o.report(6, "reg(V) <= reg(F_S V) + 1", clean >= 50 && bad.is_empty(), detail, start.elapsed());
}

fn tree_problems(node: &TreeNode, out: &mut Vec<String>) {
    if node.children.is_empty() && !node.module.is_zero() && !is_torsion_free(&node.module) {
        out.push(format!("leaf {:?} has torsion", node.path));
    }
    for c in &node.children {
        if c.torsion.tsum > node.torsion.tsum - 1 {
            out.push(format!("edge to {:?}: {} -> {}", c.path, node.torsion.tsum, c.torsion.tsum));
        }
        tree_problems(c, out);
    }
}

fn criterion_7(o: &mut Outcomes, corpus: &[PointwiseModule]) {
    let start = Instant::now();
    let (mut bad, mut deepest, mut nodes) = (Vec::new(), 0, 0);
    for (seed, v) in corpus.iter().enumerate() {
        let tree = build_tree(v, default_level_cap(v).unwrap(), 0).unwrap();
        nodes += tree.node_count;
        deepest = deepest.max(tree.depth);
        let mut problems = Vec::new();
        if !tree.terminated {
            problems.push("did not terminate".to_string());
        }
        let bound = tree.root.torsion.tsum + v.m() as i64 + 1;
        if tree.depth as i64 > bound {
            problems.push(format!("depth {} > {bound}", tree.depth));
        }
        tree_problems(&tree.root, &mut problems);
        bad.extend(problems.into_iter().map(|p| format!("seed {seed}: {p}")));
    }
    let mut detail = format!("{nodes} nodes, max depth {deepest}, {} problems", bad.len());
    if let Some(b) = bad.first() {
        detail += &format!(", first: {b}");
    }
    o.report(7, "tree termination and descent", bad.is_empty(), detail, start.elapsed());
}

fn k_at_origin(p: u64) -> PointwiseModule {
    let origin = Obj::new(vec![0]);
    let one = Obj::new(vec![1]);
    let pres = Presentation {
        field: field(p),
        m: 1,
        bounds: Obj::new(vec![6]),
        generators: vec![origin.clone()],
        relations: vec![FreeElement {
            object: one.clone(),
            terms: vec![Term {
                gen: 0,
                map: Morphism::from_images(&one, &[vec![]]).unwrap(),
                coeff: 1,
            }],
        }],
    };
    evaluate_presentation(&pres).unwrap()
}

fn criterion_8(o: &mut Outcomes) {
    let start = Instant::now();
    let mut bad = Vec::new();
    for p in [2, 3, 5] {
        let v = k_at_origin(p);
        let t = homology_table(&v, 3).unwrap();
        for s in 0..=3 {
            for (k, n) in t.grid.objects().iter().enumerate() {
                let want = usize::from(n.coords()[0] == s);
                if t.entries[s][k] != want {
                    bad.push(format!("p={p}: H_{s} at {n} is {}", t.entries[s][k]));
                }
            }
        }
        let r = degree_report(&v, 3).unwrap();
        if r.hd != vec![0, 1, 2, 3] || r.reg != Reg::Finite(0) {
            bad.push(format!("p={p}: hd {:?} reg {}", r.hd, r.reg));
        }
    }
    for (m, bounds) in [(1, vec![4]), (2, vec![3, 3])] {
        let grid = Grid::new(Obj::new(bounds));
        for d in degrees_up_to(m, 3) {
            let v = free_module(field(3), &d, &grid).unwrap();
            let r = degree_report(&v, 3).unwrap();
            if r.reg != Reg::Finite(d.rank() as i64) {
                bad.push(format!("reg(M{d}) = {}", r.reg));
            }
        }
    }
    let detail = match bad.first() {
        Some(b) => format!("{} mismatches, first: {b}", bad.len()),
        None => "k at 0 has hd = (0,1,2,3), reg 0; reg(M(d)) = |d|".to_string(),
    };
    o.report(8, "closed-form spot checks", bad.is_empty(), detail, start.elapsed());
}

fn criterion_10(o: &mut Outcomes) {
    let start = Instant::now();
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_fimhom"))
            .args(["verify", "--random", "--seed", "42", "--count", "25", "--m", "1", "--bounds", "5", "--field", "3"])
            .output()
            .expect("run fimhom")
    };
    let (a, b) = (run(), run());
    let ok = a.status.code() == Some(0) && b.status.code() == Some(0) && a.stdout == b.stdout && !a.stdout.is_empty();
    let detail = format!(
        "exit {:?}/{:?}, {} bytes, identical: {}",
        a.status.code(),
        b.status.code(),
        a.stdout.len(),
        a.stdout == b.stdout
    );
    o.report(10, "deterministic verify run", ok, detail, start.elapsed());
}

fn main() {
    let mut o = Outcomes { failed: 0 };
    criterion_1(&mut o);
    let corpus = corpus();
    criterion_2(&mut o, &corpus);
    criterion_3(&mut o, &corpus);
    criterion_4(&mut o, &corpus);
    criterion_5(&mut o, &corpus);
    criterion_6(&mut o, &corpus);
    criterion_7(&mut o, &corpus);
    criterion_8(&mut o);
    criterion_9(&mut o, &corpus);
    criterion_10(&mut o);
    if o.failed > 0 {
        println!("{} criteria failed", o.failed);
        std::process::exit(1);
    }
}
