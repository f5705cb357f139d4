//! Presentation files.

use std::fmt;

use fimhom_core::category::{Morphism, Obj};
use fimhom_core::linalg::PrimeField;
use fimhom_core::presentation::{FreeElement, Presentation, Term};
use serde::Deserialize;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawPresentation {
    field: u64,
    m: usize,
    bounds: Vec<usize>,
    generators: Vec<Vec<usize>>,
    #[serde(default)]
    relations: Vec<RawRelation>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawRelation {
    object: Vec<usize>,
    terms: Vec<RawTerm>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTerm {
    gen: usize,
    maps: Vec<Vec<usize>>,
    coeff: i64,
}

/// A diagnostic naming the offending key.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub path: String,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.path.is_empty() {
            f.write_str(&self.message)
        } else {
            write!(f, "{}: {}", self.path, self.message)
        }
    }
}

impl std::error::Error for ParseError {}

fn err(path: impl Into<String>, message: impl Into<String>) -> ParseError {
    ParseError {
        path: path.into(),
        message: message.into(),
    }
}

fn object(path: &str, coords: &[usize], m: usize, bounds: &Obj) -> Result<Obj, ParseError> {
    if coords.len() != m {
        return Err(err(path, format!("expected {m} coordinates, got {}", coords.len())));
    }
    let n = Obj::new(coords.to_vec());
    if !n.leq(bounds) {
        return Err(err(path, format!("object {n} is out of bounds {bounds}")));
    }
    Ok(n)
}

pub fn parse(text: &str) -> Result<Presentation, ParseError> {
    let raw: RawPresentation = serde_json::from_str(text).map_err(|e| err("", format!("malformed presentation: {e}")))?;
    let field = PrimeField::new(raw.field).map_err(|_| err("field", format!("field must be prime (got {})", raw.field)))?;
    let m = raw.m;
    if m == 0 {
        return Err(err("m", "must be at least 1"));
    }
    if raw.bounds.len() != m {
        return Err(err("bounds", format!("expected {m} entries, got {}", raw.bounds.len())));
    }
    let bounds = Obj::new(raw.bounds);
    let generators = raw
        .generators
        .iter()
        .enumerate()
        .map(|(j, g)| object(&format!("generators[{j}]"), g, m, &bounds))
        .collect::<Result<Vec<_>, _>>()?;
    let mut relations = Vec::with_capacity(raw.relations.len());
    for (r, rel) in raw.relations.iter().enumerate() {
        let at = object(&format!("relations[{r}].object"), &rel.object, m, &bounds)?;
        let mut terms = Vec::with_capacity(rel.terms.len());
        for (t, term) in rel.terms.iter().enumerate() {
            let path = format!("relations[{r}].terms[{t}]");
            let d = generators
                .get(term.gen)
                .ok_or_else(|| err(format!("{path}.gen"), format!("no generator {}", term.gen)))?;
            if term.maps.len() != m {
                return Err(err(
                    format!("{path}.maps"),
                    format!("expected {m} image lists, got {}", term.maps.len()),
                ));
            }
            for (i, images) in term.maps.iter().enumerate() {
                let p = format!("{path}.maps[{i}]");
                if images.len() != d.coords()[i] {
                    return Err(err(
                        p,
                        format!("wrong image-list length (expected {}, got {})", d.coords()[i], images.len()),
                    ));
                }
                let top = at.coords()[i];
                for (k, &x) in images.iter().enumerate() {
                    if x == 0 || x > top {
                        return Err(err(&p, format!("image {x} out of range 1..={top}")));
                    }
                    if images[..k].contains(&x) {
                        return Err(err(&p, format!("duplicate image {x}")));
                    }
                }
            }
            let map = Morphism::from_images(&at, &term.maps).map_err(|e| err(&path, e.to_string()))?;
            let coeff = field.reduce(term.coeff);
            if coeff != 0 {
                terms.push(Term {
                    gen: term.gen,
                    map,
                    coeff,
                });
            }
        }
        relations.push(FreeElement { object: at, terms });
    }
    let p = Presentation {
        field,
        m,
        bounds,
        generators,
        relations,
    };
    p.validate().map_err(|e| err("", e.to_string()))?;
    Ok(p)
}
