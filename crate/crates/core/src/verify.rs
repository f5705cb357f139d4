//! Property checks run against a single module, and the seeded random
//! corpus that drives them.

use std::fmt;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::category::Obj;
use crate::functors::{
    derivative, derivative_set, four_term, map_cokernel, map_from_free, map_image, map_kernel, minimal_cover,
    natural_map, sigma, sigma_set, torsion_kernel,
};
use crate::homology::{degree_report, resolve, torsion_vector, DegreeReport};
use crate::linalg::PrimeField;
use crate::module::{validate, FreeModule, ModuleError, PointwiseModule};
use crate::presentation::{random_presentation, RandomParams};
use crate::tree::{
    build_tree, child, child_exactness_failures, default_level_cap, filtration_check, recursive_inequality_check,
    singular_indices, tree_violations, Outcome,
};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", content = "detail", rename_all = "UPPERCASE")]
pub enum Verdict {
    Pass,
    Fail(String),
    Skipped(String),
}

impl Verdict {
    fn check(ok: bool, detail: impl FnOnce() -> String) -> Verdict {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail(detail())
        }
    }

    fn boundary() -> Verdict {
        Verdict::Skipped("boundary".to_string())
    }

    pub fn is_fail(&self) -> bool {
        matches!(self, Verdict::Fail(_))
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Pass => f.write_str("PASS"),
            Verdict::Fail(d) => write!(f, "FAIL {d}"),
            Verdict::Skipped(r) => write!(f, "SKIPPED({r})"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub property: String,
    #[serde(flatten)]
    pub verdict: Verdict,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckOptions {
    /// Rows used for regularity and the Euler oracle.
    pub s_max: usize,
    /// Seed for the random maps of the abelian spot check.
    pub map_seed: u64,
    /// Degrees of the generators when the module is known to be free.
    pub free_degrees: Option<Vec<Obj>>,
}

/// `{1,2}`-style rendering of 0-based coordinates.
pub fn show_set(s: &[usize]) -> String {
    let parts: Vec<String> = s.iter().map(|i| (i + 1).to_string()).collect();
    format!("{{{}}}", parts.join(","))
}

fn subsets(m: usize) -> impl Iterator<Item = Vec<usize>> {
    (1u32..(1 << m)).map(move |mask| (0..m).filter(|&i| mask >> i & 1 == 1).collect())
}

struct Runner {
    checks: Vec<Check>,
}

impl Runner {
    fn push(&mut self, property: impl Into<String>, verdict: Verdict) {
        self.checks.push(Check {
            property: property.into(),
            verdict,
        });
    }
}

/// Runs every property on `v`.
pub fn check_module(v: &PointwiseModule, opts: &CheckOptions) -> Result<Vec<Check>, ModuleError> {
    let m = v.m();
    let all: Vec<usize> = (0..m).collect();
    let deep = opts.s_max.max(2);
    let mut r = Runner { checks: Vec::new() };

    let violations = validate(v);
    r.push(
        "valid",
        Verdict::check(violations.is_empty(), || violations[0].to_string()),
    );

    let res = resolve(v, opts.s_max)?;
    let bad = res.euler_failures(v);
    r.push(
        "euler",
        Verdict::check(bad.is_empty(), || format!("at {}", bad[0])),
    );
    let rv = DegreeReport::from_table(&res.homology());
    let rv_deep = if deep == opts.s_max { rv.clone() } else { degree_report(v, deep)? };
    let tv = torsion_vector(v)?;

    if let Some(degrees) = &opts.free_degrees {
        check_free(&mut r, v, degrees, &rv)?;
    }

    for i in 0..m {
        let seq = four_term(i, v)?;
        let bad = seq.exactness_failures();
        r.push(
            format!("four-term i={}", i + 1),
            Verdict::check(bad.is_empty(), || format!("at {}", bad[0])),
        );
        let kv = validate(&seq.k);
        r.push(
            format!("kernel-submodule i={}", i + 1),
            Verdict::check(kv.is_empty(), || kv[0].to_string()),
        );
    }

    // gd(D_[m]V) <= gd(Σ_[m]V) <= gd(V) = gd(D_[m]V) + 1
    if v.is_zero() {
        r.push("gd-derivative", Verdict::Skipped("zero".to_string()));
    } else {
        let rd = degree_report(&derivative_set(&all, v)?, 0)?;
        let rs = degree_report(&sigma_set(&all, v)?, 0)?;
        let verdict = if rv.shell_upto(0) || rd.shell_upto(0) {
            Verdict::boundary()
        } else {
            let chain = rs.shell_upto(0) || (rd.gd <= rs.gd && rs.gd <= rv.gd);
            Verdict::check(rv.gd == rd.gd + 1 && chain, || {
                format!("gd(V)={} gd(D)={} gd(Sigma)={}", rv.gd, rd.gd, rs.gd)
            })
        };
        r.push("gd-derivative", verdict);
    }

    for s in subsets(m) {
        if v.is_zero() {
            continue;
        }
        let rs = degree_report(&sigma_set(&s, v)?, 1)?;
        let verdict = if rv.shell_upto(1) || rs.shell_upto(1) {
            Verdict::boundary()
        } else {
            Verdict::check(rs.prd <= rv.prd, || format!("prd(Sigma_S V)={} prd(V)={}", rs.prd, rv.prd))
        };
        r.push(format!("prd-sigma S={}", show_set(&s)), verdict);
        let rd = degree_report(&derivative_set(&s, v)?, 1)?;
        let verdict = if rv.shell_upto(1) || rd.shell_upto(1) {
            Verdict::boundary()
        } else {
            Verdict::check(rd.prd < rv.prd, || format!("prd(D_S V)={} prd(V)={}", rd.prd, rv.prd))
        };
        r.push(format!("prd-derivative S={}", show_set(&s)), verdict);
    }

    let singular = singular_indices(v);
    for i in 0..m {
        let k = torsion_kernel(i, v)?;
        let rk = degree_report(&k, 0)?;
        let verdict = if rk.shell_upto(0) {
            Verdict::boundary()
        } else {
            Verdict::check(tv.t[i] <= rk.gd, || format!("t_{}={} gd(K)={}", i + 1, tv.t[i], rk.gd))
        };
        r.push(format!("torsion-gd i={}", i + 1), verdict);

        for j in 0..m {
            let ts = torsion_vector(&sigma(j, v)?)?;
            let ok = ts.t[i] <= tv.t[i] && (i != j || tv.t[i] < 0 || ts.t[i] < tv.t[i]);
            r.push(
                format!("torsion-shift i={} j={}", i + 1, j + 1),
                Verdict::check(ok, || format!("t_i(Sigma_j V)={} t_i(V)={}", ts.t[i], tv.t[i])),
            );
        }

        if singular.contains(&i) {
            let c = child(v, i)?;
            let tc = torsion_vector(&c)?;
            r.push(
                format!("child-descent i={}", i + 1),
                Verdict::check(tc.tsum < tv.tsum, || format!("t(child)={} t(V)={}", tc.tsum, tv.tsum)),
            );
            let bad = child_exactness_failures(v, i)?;
            r.push(
                format!("child-exact i={}", i + 1),
                Verdict::check(bad.is_empty(), || format!("at {}", bad[0])),
            );
            let rd = degree_report(&derivative(i, v)?, 2)?;
            let rc = degree_report(&c, 1)?;
            let verdict = if rv_deep.shell_upto(1) || rd.shell_upto(2) || rk.shell_upto(0) || rc.shell_upto(1) {
                Verdict::boundary()
            } else {
                let bound = rv_deep.prd.max(rd.hd[2]);
                Verdict::check(rk.gd <= bound && rc.prd <= bound && tv.t[i] <= bound, || {
                    format!(
                        "gd(K)={} prd(V/K)={} t_i={} bound={bound}",
                        rk.gd, rc.prd, tv.t[i]
                    )
                })
            };
            r.push(format!("kernel-bound i={}", i + 1), verdict);
        }
    }

    let fr = filtration_check(v)?;
    r.push(
        "filtration",
        Verdict::check(fr.passed(), || fr.failures[0].clone()),
    );

    for case in recursive_inequality_check(v, opts.s_max)? {
        let verdict = match case.outcome {
            Outcome::Pass => Verdict::Pass,
            Outcome::Skipped => Verdict::boundary(),
            Outcome::Fail => Verdict::Fail(format!("reg(V)={} reg(F_S V)={}", case.reg_v, case.reg_fs)),
        };
        r.push(format!("recursive-reg S={}", show_set(&case.subset)), verdict);
    }

    let tree = build_tree(v, default_level_cap(v)?, 0)?;
    let bad = tree_violations(&tree, m);
    r.push(
        "tree",
        Verdict::check(bad.is_empty(), || bad[0].clone()),
    );

    r.push("abelian", abelian_spot_check(v, opts.map_seed)?);
    Ok(r.checks)
}

fn check_free(r: &mut Runner, v: &PointwiseModule, degrees: &[Obj], rv: &DegreeReport) -> Result<(), ModuleError> {
    let top = degrees.iter().map(|d| d.rank() as i64).max().unwrap_or(-1);
    let nonzero_rows: Vec<usize> = (1..rv.hd.len()).filter(|&s| rv.hd[s] >= 0).collect();
    r.push(
        "projective",
        Verdict::check(nonzero_rows.is_empty(), || format!("H_{} != 0", nonzero_rows[0])),
    );
    for i in 0..v.m() {
        let nat = natural_map(i, v)?;
        r.push(
            format!("free-injective i={}", i + 1),
            Verdict::check(nat.is_injective(), || "natural map has a kernel".to_string()),
        );
        let rs = degree_report(&sigma(i, v)?, 1)?;
        r.push(
            format!("free-shift i={}", i + 1),
            Verdict::check(rs.hd[1] < 0, || format!("H_1(Sigma_i V) nonzero in rank {}", rs.hd[1])),
        );
        let rd = degree_report(&derivative(i, v)?, 0)?;
        r.push(
            format!("free-derivative i={}", i + 1),
            Verdict::check(rd.gd < top, || format!("gd(D_i V)={} top degree {top}", rd.gd)),
        );
    }
    Ok(())
}

/// Kernels, cokernels and images of a few natural maps into `v` are valid
/// modules with the expected ranks.
fn abelian_spot_check(v: &PointwiseModule, seed: u64) -> Result<Verdict, ModuleError> {
    let target = Arc::new(v.clone());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut maps = vec![minimal_cover(v)?.map];
    let supported: Vec<Obj> = v
        .grid()
        .objects()
        .iter()
        .filter(|n| v.dim(n) > 0)
        .cloned()
        .collect();
    if !supported.is_empty() {
        let p = v.field().modulus();
        let degrees: Vec<Obj> = (0..2)
            .map(|_| supported[rng.gen_range(0..supported.len())].clone())
            .collect();
        let images: Vec<Vec<u32>> = degrees
            .iter()
            .map(|d| (0..v.dim(d)).map(|_| rng.gen_range(0..p)).collect())
            .collect();
        let free = FreeModule::new(v.field(), degrees, v.grid())?;
        maps.push(map_from_free(&free, target.clone(), &images)?);
    }
    for f in &maps {
        let (k, incl) = map_kernel(f)?;
        let (q, proj) = map_cokernel(f)?;
        let (im, _) = map_image(f)?;
        for (name, w) in [("kernel", &k), ("cokernel", &q), ("image", &im)] {
            if let Some(bad) = validate(w).into_iter().next() {
                return Ok(Verdict::Fail(format!("{name} is not a module: {bad}")));
            }
        }
        if !f.compose(&incl)?.is_zero() || !proj.compose(f)?.is_zero() {
            return Ok(Verdict::Fail("kernel or cokernel does not compose to zero".to_string()));
        }
        for (idx, n) in v.grid().objects().iter().enumerate() {
            let src = f.source().dim_at(idx);
            if k.dim_at(idx) + im.dim_at(idx) != src || q.dim_at(idx) + im.dim_at(idx) != v.dim_at(idx) {
                return Ok(Verdict::Fail(format!("rank mismatch at {n}")));
            }
        }
    }
    Ok(Verdict::Pass)
}

/// Generator counts and sizes used for seeded random modules.
pub fn corpus_params(m: usize, bounds: Obj, field: PrimeField) -> RandomParams {
    RandomParams {
        m,
        bounds,
        field,
        max_gens: 2,
        max_rels: 3,
        max_terms: 3,
    }
}

/// Seed of the `index`-th case of a run started from `seed`.
pub fn case_seed(seed: u64, index: usize) -> u64 {
    seed.wrapping_add(index as u64)
}

/// One random module of the corpus, evaluated.
pub fn corpus_module(seed: u64, params: &RandomParams) -> Result<PointwiseModule, ModuleError> {
    crate::presentation::evaluate_presentation(&random_presentation(seed, params))
}
