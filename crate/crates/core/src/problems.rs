//! Builders for the named problem classes and for seeded random instances.

use std::collections::{BTreeMap, BTreeSet};

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::model::perm::GroupElements;
use crate::model::{
    CellDomains, ConstraintSet, ConstraintTerm, Domain, MatrixModel, SymmetrySpec, Value,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProblemError {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
}

/// Balanced incomplete block design parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BibdParams {
    pub v: usize,
    pub b: usize,
    pub r: usize,
    pub k: usize,
    pub lambda: usize,
}

impl BibdParams {
    /// Necessary conditions: v*r = b*k and lambda*(v-1) = r*(k-1).
    pub fn validate(&self) -> Result<(), ProblemError> {
        if self.v == 0 || self.b == 0 || self.r == 0 || self.k == 0 || self.lambda == 0 {
            return Err(ProblemError::InvalidParams(
                "all parameters must be positive".into(),
            ));
        }
        if self.v * self.r != self.b * self.k {
            return Err(ProblemError::InvalidParams(format!(
                "v*r = {} but b*k = {}",
                self.v * self.r,
                self.b * self.k
            )));
        }
        if self.lambda * (self.v - 1) != self.r * (self.k - 1) {
            return Err(ProblemError::InvalidParams(format!(
                "lambda*(v-1) = {} but r*(k-1) = {}",
                self.lambda * (self.v - 1),
                self.r * (self.k - 1)
            )));
        }
        Ok(())
    }
}

/// A v x b 0/1 matrix with row sums r, column sums k, and scalar product
/// lambda between every pair of distinct rows; fully interchangeable rows
/// and columns.
pub fn build_bibd(params: BibdParams) -> Result<MatrixModel, ProblemError> {
    params.validate()?;
    let BibdParams { v, b, r, k, lambda } = params;
    let mut cs = ConstraintSet::new();
    let row_cells = |row: usize| (0..b).map(|c| row * b + c).collect::<Vec<_>>();
    for row in 0..v {
        cs.push(ConstraintTerm::LinearEq {
            coeffs: vec![1; b],
            vars: row_cells(row),
            bound: r as Value,
        });
    }
    for col in 0..b {
        cs.push(ConstraintTerm::LinearEq {
            coeffs: vec![1; v],
            vars: (0..v).map(|row| row * b + col).collect(),
            bound: k as Value,
        });
    }
    for r1 in 0..v {
        for r2 in r1 + 1..v {
            cs.push(ConstraintTerm::ScalarProductEq {
                left: row_cells(r1),
                right: row_cells(r2),
                target: lambda as Value,
            });
        }
    }
    MatrixModel::with_uniform_domain(
        format!("bibd-v{v}-b{b}-r{r}-k{k}-l{lambda}"),
        vec![v, b],
        Domain::binary(),
        cs,
        SymmetrySpec::full(&[v, b]),
    )
    .map_err(|e| ProblemError::InvalidParams(e.to_string()))
}

/// One rack model: how many card slots it offers, how much power it
/// supplies, and how many racks of this model are available.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RackModelSpec {
    pub capacity: usize,
    pub power: u64,
    pub count: usize,
}

/// One card type: its power demand and how many cards must be placed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CardTypeSpec {
    pub power: u64,
    pub quantity: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RackParams {
    pub rack_models: Vec<RackModelSpec>,
    pub card_types: Vec<CardTypeSpec>,
}

/// The counting formulation of rack configuration: one row per rack (racks
/// grouped by model), one column per card type, each cell the number of
/// cards of that type placed in that rack.
///
/// Slot-capacity and power-budget constraints per rack, demand constraints
/// per card type. Racks of one model are interchangeable (a row block per
/// model); card types with identical power and quantity are likewise
/// interchangeable.
pub fn build_rack(params: &RackParams) -> Result<MatrixModel, ProblemError> {
    if params.rack_models.is_empty() {
        return Err(ProblemError::InvalidParams(
            "at least one rack model required".into(),
        ));
    }
    if params.card_types.is_empty() {
        return Err(ProblemError::InvalidParams(
            "at least one card type required".into(),
        ));
    }
    let racks: usize = params.rack_models.iter().map(|m| m.count).sum();
    if racks == 0 {
        return Err(ProblemError::InvalidParams(
            "no racks available (all counts zero)".into(),
        ));
    }
    let types = params.card_types.len();

    // rows 0..count_0 are model 0, the next count_1 rows model 1, ...
    let mut row_model = Vec::with_capacity(racks);
    let mut row_blocks: Vec<Vec<usize>> = Vec::new();
    for (m, spec) in params.rack_models.iter().enumerate() {
        let start = row_model.len();
        row_model.extend(std::iter::repeat_n(m, spec.count));
        if spec.count > 0 {
            row_blocks.push((start..start + spec.count).collect());
        }
    }
    // card types interchangeable when power and quantity agree
    let mut type_groups: BTreeMap<(u64, usize), Vec<usize>> = BTreeMap::new();
    for (t, spec) in params.card_types.iter().enumerate() {
        type_groups
            .entry((spec.power, spec.quantity))
            .or_default()
            .push(t);
    }
    let mut col_blocks: Vec<Vec<usize>> = type_groups.into_values().collect();
    col_blocks.sort_by_key(|b| b[0]);

    let cell = |rack: usize, t: usize| rack * types + t;
    let mut overrides = BTreeMap::new();
    for (rack, &m) in row_model.iter().enumerate() {
        let model = &params.rack_models[m];
        for (t, card) in params.card_types.iter().enumerate() {
            let hi = model.capacity.min(card.quantity);
            overrides.insert(
                cell(rack, t),
                Domain::range(0, hi as Value).expect("0..=hi is non-empty"),
            );
        }
    }

    let mut cs = ConstraintSet::new();
    for (rack, &m) in row_model.iter().enumerate() {
        let model = &params.rack_models[m];
        let vars: Vec<usize> = (0..types).map(|t| cell(rack, t)).collect();
        cs.push(ConstraintTerm::LinearLe {
            coeffs: vec![1; types],
            vars: vars.clone(),
            bound: model.capacity as Value,
        });
        cs.push(ConstraintTerm::LinearLe {
            coeffs: params.card_types.iter().map(|c| c.power as Value).collect(),
            vars,
            bound: model.power as Value,
        });
    }
    for (t, card) in params.card_types.iter().enumerate() {
        cs.push(ConstraintTerm::LinearEq {
            coeffs: vec![1; racks],
            vars: (0..racks).map(|rack| cell(rack, t)).collect(),
            bound: card.quantity as Value,
        });
    }

    let symmetry = SymmetrySpec::new(vec![row_blocks, col_blocks], &[racks, types])
        .expect("constructed partitions are well-formed");
    MatrixModel::new(
        format!("rack-m{}-t{}", params.rack_models.len(), types),
        vec![racks, types],
        CellDomains::PerCell {
            default: Domain::range(0, 0).unwrap(),
            overrides,
        },
        cs,
        symmetry,
    )
    .map_err(|e| ProblemError::InvalidParams(e.to_string()))
}

/// A reproducible random model: a fully symmetric matrix over the domain
/// `0..domain_size` with `round(density * cells)` random linear constraints,
/// each closed under the symmetry group so the declared symmetry really maps
/// solutions to solutions.
///
/// Identical arguments produce identical models. Intended for small shapes
/// within the oracle budgets (the closure enumerates the group).
pub fn random_model(
    dims: &[usize],
    domain_size: usize,
    constraint_density: f64,
    seed: u64,
) -> MatrixModel {
    assert!(domain_size >= 1, "domain must be non-empty");
    let cells: usize = dims.iter().product();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let domain = Domain::range(0, domain_size as Value - 1).unwrap();
    let symmetry = SymmetrySpec::full(dims);

    let target = (constraint_density * cells as f64).round() as usize;
    // (is_eq, sorted (var, coeff) pairs, bound) identifies a closed term
    type TermKey = (bool, Vec<(usize, Value)>, Value);
    let mut seen: BTreeSet<TermKey> = BTreeSet::new();
    let mut cs = ConstraintSet::new();
    for _ in 0..target {
        let scope = rng.gen_range(1..=3.min(cells));
        let mut vars: Vec<usize> = (0..cells).collect();
        vars.shuffle(&mut rng);
        vars.truncate(scope);
        vars.sort_unstable();
        let coeffs: Vec<Value> = (0..scope)
            .map(|_| *[-2, -1, 1, 2].choose(&mut rng).unwrap())
            .collect();
        // anchor the bound at an achievable sum so the seed constraint is
        // satisfiable on its own; the group closure may still clash
        let anchor: Value = coeffs
            .iter()
            .map(|&c| c * *domain.values().choose(&mut rng).unwrap())
            .sum();
        let is_eq = rng.gen_bool(0.2);
        let hi: Value = coeffs
            .iter()
            .map(|&c| {
                if c >= 0 {
                    c * domain.max()
                } else {
                    c * domain.min()
                }
            })
            .sum();
        let bound = if is_eq {
            anchor
        } else {
            rng.gen_range(anchor..=hi.max(anchor))
        };

        // close the seed constraint under the group
        for (_, table) in GroupElements::new(dims, &symmetry) {
            let mut mapped: Vec<(usize, Value)> = vars
                .iter()
                .zip(&coeffs)
                .map(|(&v, &c)| (table[v], c))
                .collect();
            mapped.sort_unstable();
            if seen.insert((is_eq, mapped.clone(), bound)) {
                let (vars, coeffs): (Vec<usize>, Vec<Value>) = mapped.into_iter().unzip();
                cs.push(if is_eq {
                    ConstraintTerm::LinearEq {
                        coeffs,
                        vars,
                        bound,
                    }
                } else {
                    ConstraintTerm::LinearLe {
                        coeffs,
                        vars,
                        bound,
                    }
                });
            }
        }
    }

    MatrixModel::with_uniform_domain(
        format!("random-{}-d{domain_size}-s{seed}", dims_label(dims)),
        dims.to_vec(),
        domain,
        cs,
        symmetry,
    )
    .expect("random model construction is internally consistent")
}

fn dims_label(dims: &[usize]) -> String {
    dims.iter()
        .map(|d| d.to_string())
        .collect::<Vec<_>>()
        .join("x")
}
