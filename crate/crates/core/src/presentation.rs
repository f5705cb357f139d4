//! Finite presentations and their evaluation on a grid.

use std::collections::VecDeque;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::category::{enumerate_hom, hom_count, Grid, Morphism, Obj};
use crate::linalg::{close_queue, PrimeField, QuotientData, SpanBuilder, Subspace};
use crate::module::{induced_quotient, push_up_cosets, FreeModule, ModuleError, PointwiseModule};

/// One summand `coeff * (generator gen, morphism map)` of a free element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Term {
    pub gen: usize,
    pub map: Morphism,
    pub coeff: u32,
}

/// An element of the free module on the generators, living at `object`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FreeElement {
    pub object: Obj,
    pub terms: Vec<Term>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Presentation {
    pub field: PrimeField,
    pub m: usize,
    pub bounds: Obj,
    pub generators: Vec<Obj>,
    pub relations: Vec<FreeElement>,
}

impl Presentation {
    pub fn grid(&self) -> Grid {
        Grid::new(self.bounds.clone())
    }

    pub fn validate(&self) -> Result<(), ModuleError> {
        let grid = self.grid();
        if self.bounds.m() != self.m {
            return Err(crate::category::CategoryError::ArityMismatch(self.bounds.m(), self.m).into());
        }
        for d in &self.generators {
            if d.m() != self.m {
                return Err(crate::category::CategoryError::ArityMismatch(d.m(), self.m).into());
            }
            grid.check(d)?;
        }
        for (index, rel) in self.relations.iter().enumerate() {
            let bad = |reason: String| ModuleError::BadRelation { index, reason };
            if rel.object.m() != self.m || !grid.contains(&rel.object) {
                return Err(bad(format!("object {} is outside the grid", rel.object)));
            }
            for t in &rel.terms {
                let Some(d) = self.generators.get(t.gen) else {
                    return Err(ModuleError::BadGenerator(t.gen));
                };
                if t.map.source() != *d || t.map.target() != rel.object {
                    return Err(bad(format!("term map {} is not a morphism {} -> {}", t.map, d, rel.object)));
                }
                if t.coeff == 0 || t.coeff >= self.field.modulus() {
                    return Err(bad(format!("coefficient {} is not a nonzero residue", t.coeff)));
                }
            }
        }
        Ok(())
    }

    /// Coordinates of a relation in the free cover fiber at its object.
    pub fn relation_vector(&self, free: &FreeModule, rel: &FreeElement) -> Vec<u32> {
        let f = self.field;
        let mut v = vec![0u32; free.module.dim(&rel.object)];
        for t in &rel.terms {
            let pos = free.position(t.gen, &t.map).expect("validated term");
            v[pos] = f.add(v[pos], t.coeff);
        }
        v
    }
}

/// The quotient of the free cover by the relation submodule, with the data
/// linking the two.
#[derive(Clone, Debug)]
pub struct Evaluated {
    pub module: PointwiseModule,
    pub free: FreeModule,
    pub relations: Vec<Subspace>,
    pub quotient: Vec<QuotientData>,
}

/// Evaluates a presentation on its grid.
pub fn evaluate_presentation(p: &Presentation) -> Result<PointwiseModule, ModuleError> {
    Ok(evaluate_detailed(p)?.module)
}

/// Like [`evaluate_presentation`], but keeps the free cover and the relation
/// subspaces.
pub fn evaluate_detailed(p: &Presentation) -> Result<Evaluated, ModuleError> {
    p.validate()?;
    let grid = p.grid();
    let free = FreeModule::new(p.field, p.generators.clone(), &grid)?;
    let fm = &free.module;
    let mut relations: Vec<Subspace> = Vec::with_capacity(grid.len());
    // Objects are stored by rank, so every n - o_i is finished before n.
    for (k, n) in grid.objects().iter().enumerate() {
        let mut span = SpanBuilder::new(p.field, fm.dim_at(k));
        for i in 0..p.m {
            if let Some(lower) = n.minus(i) {
                let r = &relations[grid.index_of(&lower).unwrap()];
                let vecs = (0..r.dim()).map(|c| r.basis_vector(c));
                push_up_cosets(fm, k, i, vecs, |x| {
                    span.insert(x);
                });
            }
        }
        let mut queue = VecDeque::new();
        for rel in p.relations.iter().filter(|r| &r.object == n) {
            let v = p.relation_vector(&free, rel);
            if span.insert(v.clone()) {
                queue.push_back(v);
            }
        }
        close_queue(&mut span, &mut queue, &fm.group_generators_at(k));
        relations.push(span.finish());
    }
    let (module, quotient) = induced_quotient(fm, &relations);
    Ok(Evaluated {
        module,
        free,
        relations,
        quotient,
    })
}

/// Knobs for [`random_presentation`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RandomParams {
    pub m: usize,
    pub bounds: Obj,
    pub field: PrimeField,
    pub max_gens: usize,
    pub max_rels: usize,
    pub max_terms: usize,
}

/// A seeded random presentation. Generator degrees and relation objects are
/// drawn from the grid interior so that shifted and derived modules still
/// have room on the shrunk grid. At least one generator is always drawn
/// when `max_gens > 0`.
pub fn random_presentation(seed: u64, params: &RandomParams) -> Presentation {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let grid = Grid::new(params.bounds.clone());
    let interior = grid.interior();
    let p = params.field.modulus();
    let mut generators = Vec::new();
    let mut relations = Vec::new();
    if !interior.is_empty() && params.max_gens > 0 {
        let ngens = rng.gen_range(1..=params.max_gens);
        for _ in 0..ngens {
            generators.push(interior[rng.gen_range(0..interior.len())].clone());
        }
        let nrels = rng.gen_range(0..=params.max_rels);
        for _ in 0..nrels {
            let object = interior[rng.gen_range(0..interior.len())].clone();
            let usable: Vec<usize> = (0..generators.len())
                .filter(|&j| generators[j].leq(&object))
                .collect();
            if usable.is_empty() || params.max_terms == 0 {
                continue;
            }
            let nterms = rng.gen_range(1..=params.max_terms);
            let terms = (0..nterms)
                .map(|_| {
                    let gen = usable[rng.gen_range(0..usable.len())];
                    let homs = enumerate_hom(&generators[gen], &object);
                    debug_assert_eq!(homs.len() as u64, hom_count(&generators[gen], &object));
                    let map = homs[rng.gen_range(0..homs.len())].clone();
                    Term {
                        gen,
                        map,
                        coeff: rng.gen_range(1..p),
                    }
                })
                .collect();
            relations.push(FreeElement { object, terms });
        }
    }
    Presentation {
        field: params.field,
        m: params.m,
        bounds: params.bounds.clone(),
        generators,
        relations,
    }
}
