//! JSON interchange format for 3-structures.
//!
//! Rationals are strings `"p/q"` (or `"p"` for integers); a polynomial is a
//! list of `{c, e}` terms in increasing exponent order.

use std::str::FromStr;

use cosym3_core::exterior::{EndField, KForm, Metric, VectorField};
use cosym3_core::linalg::QMatrix;
use cosym3_core::model::{ModelSpace, Monodromy, Topology};
use cosym3_core::poly::qi;
use cosym3_core::{Poly, Rational, ThreeStructure};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Term {
    pub c: String,
    pub e: Vec<u32>,
}

pub type PolyJson = Vec<Term>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StructureRecord {
    pub xi: Vec<PolyJson>,
    pub eta: Vec<PolyJson>,
    pub phi: Vec<Vec<PolyJson>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum TopologyJson {
    Euclidean,
    Torus,
    MappingTorus {
        fiber_dim: usize,
        monodromy: Vec<Vec<i64>>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StructureFile {
    pub dim: usize,
    pub coordinates: Vec<String>,
    pub structures: Vec<StructureRecord>,
    pub metric: Vec<Vec<PolyJson>>,
    pub topology: TopologyJson,
}

pub fn parse_rational(s: &str) -> Result<Rational, CliError> {
    let s = s.trim();
    if let Some((_, d)) = s.split_once('/') {
        if d.trim_start_matches(['+', '-']).chars().all(|c| c == '0') {
            return Err(CliError::Parse(format!("zero denominator in {s:?}")));
        }
    }
    Rational::from_str(s).map_err(|_| CliError::Parse(format!("not a rational: {s:?}")))
}

fn poly_to_json(p: &Poly) -> PolyJson {
    p.terms()
        .map(|(e, c)| Term {
            c: c.to_string(),
            e: e.clone(),
        })
        .collect()
}

fn poly_from_json(dim: usize, p: &PolyJson, at: &str) -> Result<Poly, CliError> {
    let terms = p
        .iter()
        .map(|t| {
            if t.e.len() != dim {
                return Err(CliError::Parse(format!(
                    "{at}: exponent vector has length {}, expected {dim}",
                    t.e.len()
                )));
            }
            Ok((t.e.clone(), parse_rational(&t.c)?))
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Poly::from_terms(dim, terms))
}

fn vector_json(v: &[Poly]) -> Vec<PolyJson> {
    v.iter().map(poly_to_json).collect()
}

fn matrix_json(rows: &[Vec<Poly>]) -> Vec<Vec<PolyJson>> {
    rows.iter().map(|r| vector_json(r)).collect()
}

fn vector_from_json(dim: usize, v: &[PolyJson], at: &str) -> Result<Vec<Poly>, CliError> {
    if v.len() != dim {
        return Err(CliError::Parse(format!("{at}: {} entries, expected {dim}", v.len())));
    }
    v.iter()
        .enumerate()
        .map(|(i, p)| poly_from_json(dim, p, &format!("{at}[{i}]")))
        .collect()
}

fn matrix_from_json(dim: usize, m: &[Vec<PolyJson>], at: &str) -> Result<Vec<Vec<Poly>>, CliError> {
    if m.len() != dim {
        return Err(CliError::Parse(format!("{at}: {} rows, expected {dim}", m.len())));
    }
    m.iter()
        .enumerate()
        .map(|(i, r)| vector_from_json(dim, r, &format!("{at}[{i}]")))
        .collect()
}

/// `x1..x{4n}, t1, t2, t3`, or plain `x1..x{m}` for other dimensions.
pub fn default_coordinates(dim: usize) -> Vec<String> {
    if dim >= 3 && (dim - 3) % 4 == 0 {
        let fiber = dim - 3;
        (1..=fiber)
            .map(|i| format!("x{i}"))
            .chain((1..=3).map(|a| format!("t{a}")))
            .collect()
    } else {
        (1..=dim).map(|i| format!("x{i}")).collect()
    }
}

impl StructureFile {
    pub fn from_model(space: &ModelSpace, t: &ThreeStructure) -> Self {
        let dim = t.dim();
        let structures = t
            .members()
            .iter()
            .map(|s| StructureRecord {
                xi: vector_json(s.xi.components()),
                eta: vector_json(&s.eta.components()),
                phi: matrix_json(s.phi.entries()),
            })
            .collect();
        let topology = match space.topology() {
            Topology::Euclidean => TopologyJson::Euclidean,
            Topology::Torus => TopologyJson::Torus,
            Topology::MappingTorus(m) => {
                let f = m.matrix();
                TopologyJson::MappingTorus {
                    fiber_dim: m.fiber_dim(),
                    monodromy: (0..f.rows())
                        .map(|i| {
                            f.row(i)
                                .iter()
                                .map(|v| {
                                    num_traits::ToPrimitive::to_i64(&v.to_integer())
                                        .expect("small integer monodromy")
                                })
                                .collect()
                        })
                        .collect(),
                }
            }
        };
        StructureFile {
            dim,
            coordinates: default_coordinates(dim),
            structures,
            metric: matrix_json(t.metric().entries()),
            topology,
        }
    }

    pub fn to_model(&self, order_bound: usize) -> Result<(ModelSpace, ThreeStructure), CliError> {
        let dim = self.dim;
        if self.coordinates.len() != dim {
            return Err(CliError::Parse(format!(
                "{} coordinate names for dimension {dim}",
                self.coordinates.len()
            )));
        }
        if self.structures.len() != 3 {
            return Err(CliError::Parse(format!(
                "expected 3 structures, found {}",
                self.structures.len()
            )));
        }
        let g = Metric::new(matrix_from_json(dim, &self.metric, "metric")?);
        let mut phi = Vec::with_capacity(3);
        let mut xi = Vec::with_capacity(3);
        let mut eta = Vec::with_capacity(3);
        for (a, rec) in self.structures.iter().enumerate() {
            let at = format!("structures[{a}]");
            phi.push(EndField::new(matrix_from_json(dim, &rec.phi, &format!("{at}.phi"))?));
            xi.push(VectorField::new(vector_from_json(dim, &rec.xi, &format!("{at}.xi"))?));
            eta.push(KForm::one_form(vector_from_json(dim, &rec.eta, &format!("{at}.eta"))?));
        }
        let t = ThreeStructure::from_parts(three(phi), three(xi), three(eta), g)?;
        let topology = match &self.topology {
            TopologyJson::Euclidean => Topology::Euclidean,
            TopologyJson::Torus => Topology::Torus,
            TopologyJson::MappingTorus {
                fiber_dim,
                monodromy,
            } => {
                if monodromy.len() != *fiber_dim || monodromy.iter().any(|r| r.len() != *fiber_dim) {
                    return Err(CliError::Parse(format!(
                        "monodromy must be {fiber_dim}×{fiber_dim}"
                    )));
                }
                let m = QMatrix::from_rows(
                    monodromy
                        .iter()
                        .map(|r| r.iter().map(|&v| qi(v)).collect())
                        .collect(),
                );
                Topology::MappingTorus(Monodromy::new(m, order_bound)?)
            }
        };
        if !matches!(topology, Topology::Euclidean) && !t.is_constant() {
            return Err(CliError::Parse(
                "torus and mapping_torus inputs must have constant coefficients".into(),
            ));
        }
        let space = ModelSpace::new(dim, topology)?;
        Ok((space, t))
    }

    pub fn from_json(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Parse(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("serializable");
        s.push('\n');
        s
    }
}

fn three<T>(v: Vec<T>) -> [T; 3] {
    v.try_into().unwrap_or_else(|_| unreachable!("exactly three structures"))
}
