//! The truncated category `FI^m`: objects are m-tuples of naturals, arrows
//! are m-tuples of injections `[r_i] -> [n_i]`.
//!
//! Images are 1-based throughout, matching `[n] = {1, ..., n}`. Coordinates
//! are 0-based in the API and printed 1-based in reports.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum CategoryError {
    #[error("injection image {image} is outside [1, {target}]")]
    ImageOutOfRange { image: usize, target: usize },
    #[error("duplicate image {0} in injection")]
    DuplicateImage(usize),
    #[error("objects have different numbers of coordinates ({0} vs {1})")]
    ArityMismatch(usize, usize),
    #[error("cannot compose: target {0} of the first map is not the source {1} of the second")]
    NotComposable(Obj, Obj),
    #[error("object {0} is not below {1}")]
    NotBelow(Obj, Obj),
    #[error("object {0} lies outside the grid with bounds {1}")]
    OutsideGrid(Obj, Obj),
    #[error("coordinate {0} out of range for m = {1}")]
    BadCoordinate(usize, usize),
    #[error("grid bound in coordinate {} is already 0", .0 + 1)]
    CannotShrink(usize),
}

/// An object `(n_1, ..., n_m)` of `FI^m`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Obj(Vec<usize>);

impl fmt::Debug for Obj {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Obj {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, c) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

impl From<Vec<usize>> for Obj {
    fn from(v: Vec<usize>) -> Self {
        Obj(v)
    }
}

impl Obj {
    pub fn new(coords: Vec<usize>) -> Self {
        Obj(coords)
    }

    pub fn origin(m: usize) -> Self {
        Obj(vec![0; m])
    }

    pub fn constant(m: usize, c: usize) -> Self {
        Obj(vec![c; m])
    }

    pub fn m(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[usize] {
        &self.0
    }

    /// `|n| = n_1 + ... + n_m`.
    pub fn rank(&self) -> usize {
        self.0.iter().sum()
    }

    /// Componentwise order.
    pub fn leq(&self, other: &Obj) -> bool {
        self.m() == other.m() && self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// `n + o_i`.
    pub fn plus(&self, i: usize) -> Obj {
        let mut c = self.0.clone();
        c[i] += 1;
        Obj(c)
    }

    /// `n - o_i`, if it exists.
    pub fn minus(&self, i: usize) -> Option<Obj> {
        let mut c = self.0.clone();
        c[i] = c[i].checked_sub(1)?;
        Some(Obj(c))
    }

    pub fn add(&self, other: &Obj) -> Obj {
        Obj(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// Componentwise difference; `None` unless `other <= self`.
    pub fn checked_sub(&self, other: &Obj) -> Option<Obj> {
        if self.m() != other.m() {
            return None;
        }
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.checked_sub(*b))
            .collect::<Option<Vec<_>>>()
            .map(Obj)
    }

    /// Canonical order: by rank, then lexicographically.
    pub fn canonical_cmp(&self, other: &Obj) -> Ordering {
        self.rank()
            .cmp(&other.rank())
            .then_with(|| self.0.cmp(&other.0))
    }

    /// Order of the automorphism group `S_{n_1} x ... x S_{n_m}`.
    pub fn automorphism_count(&self) -> u64 {
        self.0.iter().map(|&c| factorial(c)).product()
    }
}

fn factorial(n: usize) -> u64 {
    (1..=n as u64).product()
}

/// The downward closed window `{n : n <= bounds}` with its canonical
/// iteration order.
#[derive(Clone)]
pub struct Grid {
    bounds: Obj,
    objects: Vec<Obj>,
    index: HashMap<Obj, usize>,
}

impl PartialEq for Grid {
    fn eq(&self, other: &Self) -> bool {
        self.bounds == other.bounds
    }
}

impl Eq for Grid {}

impl fmt::Debug for Grid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Grid{}", self.bounds)
    }
}

impl Grid {
    pub fn new(bounds: Obj) -> Self {
        let mut objects = vec![Vec::new()];
        for &b in bounds.coords() {
            objects = objects
                .into_iter()
                .flat_map(|prefix: Vec<usize>| {
                    (0..=b).map(move |c| {
                        let mut v = prefix.clone();
                        v.push(c);
                        v
                    })
                })
                .collect();
        }
        let mut objects: Vec<Obj> = objects.into_iter().map(Obj).collect();
        objects.sort_by(Obj::canonical_cmp);
        let index = objects
            .iter()
            .enumerate()
            .map(|(k, o)| (o.clone(), k))
            .collect();
        Grid {
            bounds,
            objects,
            index,
        }
    }

    pub fn m(&self) -> usize {
        self.bounds.m()
    }

    pub fn bounds(&self) -> &Obj {
        &self.bounds
    }

    pub fn contains(&self, n: &Obj) -> bool {
        n.leq(&self.bounds)
    }

    /// Grid objects in canonical (rank, lex) order.
    pub fn objects(&self) -> &[Obj] {
        &self.objects
    }

    pub fn len(&self) -> usize {
        self.objects.len()
    }

    pub fn is_empty(&self) -> bool {
        self.objects.is_empty()
    }

    pub fn index_of(&self, n: &Obj) -> Option<usize> {
        self.index.get(n).copied()
    }

    pub fn check(&self, n: &Obj) -> Result<usize, CategoryError> {
        if n.m() != self.m() {
            return Err(CategoryError::ArityMismatch(n.m(), self.m()));
        }
        self.index_of(n)
            .ok_or_else(|| CategoryError::OutsideGrid(n.clone(), self.bounds.clone()))
    }

    /// Bounds lowered by one in coordinate `i`.
    pub fn shrink(&self, i: usize) -> Result<Grid, CategoryError> {
        if i >= self.m() {
            return Err(CategoryError::BadCoordinate(i, self.m()));
        }
        let b = self.bounds.minus(i).ok_or(CategoryError::CannotShrink(i))?;
        Ok(Grid::new(b))
    }

    /// Bounds lowered by one in every coordinate.
    pub fn shrink_all(&self) -> Result<Grid, CategoryError> {
        let mut b = self.bounds.clone();
        for i in 0..self.m() {
            b = b.minus(i).ok_or(CategoryError::CannotShrink(i))?;
        }
        Ok(Grid::new(b))
    }

    /// Objects `n` with `n + (1, ..., 1)` still in the grid.
    pub fn interior(&self) -> Vec<Obj> {
        let one = Obj::constant(self.m(), 1);
        self.objects
            .iter()
            .filter(|n| self.contains(&n.add(&one)))
            .cloned()
            .collect()
    }

    /// Whether `n` touches the outer shell (`n_i = b_i` for some `i`).
    pub fn on_shell(&self, n: &Obj) -> bool {
        n.coords()
            .iter()
            .zip(self.bounds.coords())
            .any(|(a, b)| a == b)
    }
}

/// All grid objects sorted by rank, then lexicographically.
pub fn objects_by_rank(grid: &Grid) -> Vec<Obj> {
    grid.objects().to_vec()
}

/// An injection `[r] -> [n]`, recorded by its 1-based images.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Injection {
    target: usize,
    images: Vec<usize>,
}

impl Injection {
    pub fn new(target: usize, images: Vec<usize>) -> Result<Self, CategoryError> {
        let mut seen = vec![false; target + 1];
        for &x in &images {
            if x == 0 || x > target {
                return Err(CategoryError::ImageOutOfRange { image: x, target });
            }
            if seen[x] {
                return Err(CategoryError::DuplicateImage(x));
            }
            seen[x] = true;
        }
        Ok(Injection { target, images })
    }

    pub fn identity(n: usize) -> Self {
        Injection {
            target: n,
            images: (1..=n).collect(),
        }
    }

    /// The standard inclusion `[r] -> [n]`, `x |-> x`.
    pub fn standard(r: usize, n: usize) -> Self {
        assert!(r <= n);
        Injection {
            target: n,
            images: (1..=r).collect(),
        }
    }

    pub fn source(&self) -> usize {
        self.images.len()
    }

    pub fn target(&self) -> usize {
        self.target
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    /// `self ∘ f`.
    pub fn after(&self, f: &Injection) -> Injection {
        assert_eq!(f.target, self.source());
        Injection {
            target: self.target,
            images: f.images.iter().map(|&x| self.images[x - 1]).collect(),
        }
    }
}

/// All injections `[r] -> [n]` in lexicographic order of image lists.
pub fn enumerate_injections(r: usize, n: usize) -> Vec<Injection> {
    fn go(r: usize, n: usize, used: &mut Vec<bool>, cur: &mut Vec<usize>, out: &mut Vec<Injection>) {
        if cur.len() == r {
            out.push(Injection {
                target: n,
                images: cur.clone(),
            });
            return;
        }
        for x in 1..=n {
            if !used[x] {
                used[x] = true;
                cur.push(x);
                go(r, n, used, cur, out);
                cur.pop();
                used[x] = false;
            }
        }
    }
    let mut out = Vec::new();
    if r <= n {
        go(r, n, &mut vec![false; n + 1], &mut Vec::with_capacity(r), &mut out);
    }
    out
}

/// A morphism `r -> n` of `FI^m`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Morphism {
    parts: Vec<Injection>,
}

impl fmt::Display for Morphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}->{}[", self.source(), self.target())?;
        for (k, p) in self.parts.iter().enumerate() {
            if k > 0 {
                write!(f, ";")?;
            }
            let imgs: Vec<String> = p.images.iter().map(ToString::to_string).collect();
            write!(f, "{}", imgs.join(","))?;
        }
        write!(f, "]")
    }
}

impl Morphism {
    pub fn new(parts: Vec<Injection>) -> Self {
        Morphism { parts }
    }

    /// Builds a morphism into `target` from per-coordinate image lists.
    pub fn from_images(target: &Obj, maps: &[Vec<usize>]) -> Result<Self, CategoryError> {
        if maps.len() != target.m() {
            return Err(CategoryError::ArityMismatch(maps.len(), target.m()));
        }
        let parts = maps
            .iter()
            .zip(target.coords())
            .map(|(imgs, &n)| Injection::new(n, imgs.clone()))
            .collect::<Result<_, _>>()?;
        Ok(Morphism { parts })
    }

    pub fn identity(n: &Obj) -> Self {
        Morphism {
            parts: n.coords().iter().map(|&c| Injection::identity(c)).collect(),
        }
    }

    /// The degree-one standard morphism `n -> n + o_i`.
    pub fn standard_inclusion(n: &Obj, i: usize) -> Self {
        let mut parts: Vec<Injection> = n.coords().iter().map(|&c| Injection::identity(c)).collect();
        parts[i] = Injection::standard(n.coords()[i], n.coords()[i] + 1);
        Morphism { parts }
    }

    /// The automorphism of `n` swapping letters `j` and `j+1` in coordinate
    /// `i` (1 <= j < n_i).
    pub fn transposition(n: &Obj, i: usize, j: usize) -> Self {
        let mut m = Morphism::identity(n);
        assert!(j >= 1 && j < n.coords()[i], "transposition s_{j} out of range");
        m.parts[i].images.swap(j - 1, j);
        m
    }

    pub fn parts(&self) -> &[Injection] {
        &self.parts
    }

    pub fn m(&self) -> usize {
        self.parts.len()
    }

    pub fn source(&self) -> Obj {
        Obj(self.parts.iter().map(Injection::source).collect())
    }

    pub fn target(&self) -> Obj {
        Obj(self.parts.iter().map(Injection::target).collect())
    }

    /// `|f| = |target| - |source|`.
    pub fn degree(&self) -> usize {
        self.target().rank() - self.source().rank()
    }

    /// Concatenated image lists; the key for lexicographic ordering.
    pub fn image_key(&self) -> Vec<usize> {
        self.parts.iter().flat_map(|p| p.images.iter().copied()).collect()
    }

    /// `g ∘ f` (apply `f` first).
    pub fn compose(g: &Morphism, f: &Morphism) -> Result<Morphism, CategoryError> {
        if g.m() != f.m() {
            return Err(CategoryError::ArityMismatch(g.m(), f.m()));
        }
        if f.target() != g.source() {
            return Err(CategoryError::NotComposable(f.target(), g.source()));
        }
        Ok(Morphism {
            parts: g.parts.iter().zip(&f.parts).map(|(a, b)| a.after(b)).collect(),
        })
    }

    /// Post-composition with `s_j` in coordinate `i`, without materializing
    /// the transposition.
    pub fn after_transposition(&self, i: usize, j: usize) -> Morphism {
        let mut out = self.clone();
        for x in &mut out.parts[i].images {
            if *x == j {
                *x = j + 1;
            } else if *x == j + 1 {
                *x = j;
            }
        }
        out
    }

    /// Post-composition with the standard inclusion in coordinate `i`.
    pub fn after_inclusion(&self, i: usize) -> Morphism {
        let mut out = self.clone();
        out.parts[i].target += 1;
        out
    }
}

/// `|C(r, n)|`.
pub fn hom_count(r: &Obj, n: &Obj) -> u64 {
    if !r.leq(n) {
        return 0;
    }
    r.coords()
        .iter()
        .zip(n.coords())
        .map(|(&a, &b)| ((b - a + 1) as u64..=b as u64).product::<u64>())
        .product()
}

/// `C(r, n)` in lexicographic order of concatenated images; empty unless
/// `r <= n`.
pub fn enumerate_hom(r: &Obj, n: &Obj) -> Vec<Morphism> {
    if !r.leq(n) {
        return Vec::new();
    }
    let mut out = vec![Vec::new()];
    for (&a, &b) in r.coords().iter().zip(n.coords()) {
        let injs = enumerate_injections(a, b);
        out = out
            .into_iter()
            .flat_map(|prefix: Vec<Injection>| {
                injs.iter().map(move |inj| {
                    let mut v = prefix.clone();
                    v.push(inj.clone());
                    v
                })
            })
            .collect();
    }
    out.into_iter().map(Morphism::new).collect()
}

/// A generator of the truncated category: an adjacent transposition
/// `s_index` (swapping `index` and `index + 1`) or the standard inclusion,
/// both in coordinate `coord`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Atom {
    Transposition { coord: usize, index: usize },
    Inclusion { coord: usize },
}

/// A word of generators applied left to right starting at `source`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorWord {
    pub source: Obj,
    pub atoms: Vec<Atom>,
}

impl GeneratorWord {
    pub fn target(&self) -> Obj {
        let mut n = self.source.clone();
        for a in &self.atoms {
            if let Atom::Inclusion { coord } = a {
                n = n.plus(*coord);
            }
        }
        n
    }

    /// Re-composes the word into a morphism.
    pub fn to_morphism(&self) -> Morphism {
        let mut f = Morphism::identity(&self.source);
        for a in &self.atoms {
            f = match *a {
                Atom::Transposition { coord, index } => f.after_transposition(coord, index),
                Atom::Inclusion { coord } => f.after_inclusion(coord),
            };
        }
        f
    }
}

/// Canonical factorization of `f` into generators.
///
/// Per coordinate (ascending), `f_i = σ_i ∘ ι^{n_i - r_i}` where `σ_i`
/// agrees with `f_i` on `[r_i]` and sends `r_i + 1, ..., n_i` to the unused
/// targets in increasing order; `σ_i` is written as adjacent transpositions
/// by insertion sort, so its length is the inversion count of `σ_i`.
pub fn factor(f: &Morphism) -> GeneratorWord {
    let mut atoms = Vec::new();
    for (i, part) in f.parts.iter().enumerate() {
        let n = part.target;
        for _ in part.source()..n {
            atoms.push(Atom::Inclusion { coord: i });
        }
        let mut used = vec![false; n + 1];
        for &x in &part.images {
            used[x] = true;
        }
        let mut perm: Vec<usize> = part.images.clone();
        perm.extend((1..=n).filter(|&x| !used[x]));
        // Sorting perm by swaps at positions (j, j+1) right-multiplies it by
        // s_j; the recorded swaps, applied in order, rebuild perm.
        for k in 1..n {
            let mut j = k;
            while j > 0 && perm[j - 1] > perm[j] {
                perm.swap(j - 1, j);
                atoms.push(Atom::Transposition { coord: i, index: j });
                j -= 1;
            }
        }
    }
    GeneratorWord {
        source: f.source(),
        atoms,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn o(v: &[usize]) -> Obj {
        Obj::new(v.to_vec())
    }

    #[test]
    fn hom_count_examples() {
        assert_eq!(hom_count(&o(&[1]), &o(&[3])), 3);
        assert_eq!(hom_count(&o(&[2, 2]), &o(&[2, 2])), 4);
        assert_eq!(hom_count(&o(&[1, 0]), &o(&[2, 1])), 2);
        assert_eq!(hom_count(&o(&[2]), &o(&[1])), 0);
    }

    #[test]
    fn enumerate_examples() {
        let h = enumerate_hom(&o(&[1]), &o(&[2]));
        assert_eq!(h.iter().map(Morphism::image_key).collect::<Vec<_>>(), vec![vec![1], vec![2]]);
        let h = enumerate_hom(&o(&[0, 0]), &o(&[1, 1]));
        assert_eq!(h.len(), 1);
        assert_eq!(h[0].target(), o(&[1, 1]));
        let h = enumerate_hom(&o(&[2]), &o(&[2]));
        assert_eq!(h.iter().map(Morphism::image_key).collect::<Vec<_>>(), vec![vec![1, 2], vec![2, 1]]);
        assert!(enumerate_hom(&o(&[2, 0]), &o(&[1, 3])).is_empty());
    }

    #[test]
    fn compose_examples() {
        let f = Morphism::from_images(&o(&[2]), &[vec![2]]).unwrap();
        let g = Morphism::from_images(&o(&[3]), &[vec![3, 1]]).unwrap();
        let gf = Morphism::compose(&g, &f).unwrap();
        assert_eq!(gf.image_key(), vec![1]);
        assert_eq!(gf.degree(), 2);
        assert_eq!(Morphism::compose(&Morphism::identity(&o(&[2])), &f).unwrap(), f);
        let i0 = Morphism::standard_inclusion(&o(&[0]), 0);
        let i1 = Morphism::standard_inclusion(&o(&[1]), 0);
        let both = Morphism::compose(&i1, &i0).unwrap();
        assert_eq!(both.image_key(), Vec::<usize>::new());
        assert_eq!(both.target(), o(&[2]));
        assert!(matches!(Morphism::compose(&f, &f), Err(CategoryError::NotComposable(..))));
    }

    #[test]
    fn factor_examples() {
        let f = Morphism::from_images(&o(&[2]), &[vec![2]]).unwrap();
        assert_eq!(
            factor(&f).atoms,
            vec![Atom::Inclusion { coord: 0 }, Atom::Transposition { coord: 0, index: 1 }]
        );
        assert!(factor(&Morphism::identity(&o(&[3, 2]))).atoms.is_empty());
        let f = Morphism::from_images(&o(&[1]), &[vec![]]).unwrap();
        assert_eq!(factor(&f).atoms, vec![Atom::Inclusion { coord: 0 }]);
    }

    #[test]
    fn injection_validation() {
        assert_eq!(Injection::new(3, vec![1, 1]), Err(CategoryError::DuplicateImage(1)));
        assert!(matches!(Injection::new(2, vec![3]), Err(CategoryError::ImageOutOfRange { .. })));
        assert!(matches!(Injection::new(2, vec![0]), Err(CategoryError::ImageOutOfRange { .. })));
    }

    #[test]
    fn objects_by_rank_examples() {
        let g = Grid::new(o(&[2]));
        assert_eq!(objects_by_rank(&g), vec![o(&[0]), o(&[1]), o(&[2])]);
        let g = Grid::new(o(&[1, 1]));
        assert_eq!(objects_by_rank(&g), vec![o(&[0, 0]), o(&[0, 1]), o(&[1, 0]), o(&[1, 1])]);
        let g = Grid::new(o(&[0, 0]));
        assert_eq!(objects_by_rank(&g), vec![o(&[0, 0])]);
    }

    #[test]
    fn grid_shrink_and_interior() {
        let g = Grid::new(o(&[2, 1]));
        assert_eq!(g.shrink(1).unwrap().bounds(), &o(&[2, 0]));
        assert_eq!(g.shrink(1).unwrap().shrink(1), Err(CategoryError::CannotShrink(1)));
        assert_eq!(g.interior(), vec![o(&[0, 0]), o(&[1, 0])]);
        assert!(g.on_shell(&o(&[0, 1])));
        assert!(!g.on_shell(&o(&[1, 0])));
    }

    fn small_morphisms(m: usize, max_target_rank: usize) -> Vec<Morphism> {
        let g = Grid::new(Obj::constant(m, max_target_rank));
        let mut out = Vec::new();
        for n in g.objects().iter().filter(|n| n.rank() <= max_target_rank) {
            for r in g.objects().iter().filter(|r| r.leq(n)) {
                out.extend(enumerate_hom(r, n));
            }
        }
        out
    }

    #[test]
    fn factor_recomposes_exhaustively() {
        for m in 1..=2 {
            for f in small_morphisms(m, 5) {
                let w = factor(&f);
                assert_eq!(w.to_morphism(), f, "factor of {f}");
                assert_eq!(w.target(), f.target());
                let inversions = w.atoms.iter().filter(|a| matches!(a, Atom::Transposition { .. })).count();
                assert!(inversions <= f.target().coords().iter().map(|c| c * c.saturating_sub(1) / 2).sum());
            }
        }
    }

    #[test]
    fn degree_one_morphisms_are_group_element_after_inclusion() {
        for f in small_morphisms(2, 4).into_iter().filter(|f| f.degree() == 1) {
            let w = factor(&f);
            let (incl, trans): (Vec<Atom>, Vec<Atom>) =
                w.atoms.iter().partition(|a| matches!(a, Atom::Inclusion { .. }));
            assert_eq!(incl.len(), 1, "{f}");
            let reordered = GeneratorWord {
                source: w.source.clone(),
                atoms: incl.into_iter().chain(trans).collect(),
            };
            assert_eq!(reordered.to_morphism(), f);
        }
    }

    #[test]
    fn enumerate_hom_counts_match() {
        for (m, b) in [(1usize, 4usize), (2, 3)] {
            let g = Grid::new(Obj::constant(m, b));
            for r in g.objects() {
                for n in g.objects() {
                    let h = enumerate_hom(r, n);
                    assert_eq!(h.len() as u64, hom_count(r, n));
                    let keys: Vec<_> = h.iter().map(Morphism::image_key).collect();
                    assert!(keys.windows(2).all(|w| w[0] < w[1]));
                }
            }
        }
    }

    #[test]
    fn composition_is_associative() {
        let g = Grid::new(o(&[3]));
        let objs = g.objects();
        for a in objs {
            for b in objs.iter().filter(|b| a.leq(b)) {
                for c in objs.iter().filter(|c| b.leq(c)) {
                    for d in objs.iter().filter(|d| c.leq(d)) {
                        for f in enumerate_hom(a, b) {
                            for gg in enumerate_hom(b, c) {
                                for h in enumerate_hom(c, d) {
                                    let l = Morphism::compose(&h, &Morphism::compose(&gg, &f).unwrap()).unwrap();
                                    let r = Morphism::compose(&Morphism::compose(&h, &gg).unwrap(), &f).unwrap();
                                    assert_eq!(l, r);
                                }
                            }
                        }
                    }
                }
            }
        }
    }
}
