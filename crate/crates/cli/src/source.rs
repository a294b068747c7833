//! Model acquisition: a JSON file or a built-in problem builder.

use std::path::PathBuf;

use clap::Args;

use matsym::model::json::model_from_json;
use matsym::problems::{
    build_bibd, build_rack, random_model, BibdParams, CardTypeSpec, RackModelSpec, RackParams,
};
use matsym::MatrixModel;

use crate::CliError;

#[derive(Args)]
pub struct ModelSource {
    /// Model JSON file.
    #[arg(long, conflicts_with = "problem")]
    pub model: Option<PathBuf>,

    /// Built-in problem: bibd | rack | random.
    #[arg(long)]
    pub problem: Option<String>,

    /// BIBD: number of rows (points).
    #[arg(long)]
    pub v: Option<usize>,
    /// BIBD: number of columns (blocks).
    #[arg(long)]
    pub b: Option<usize>,
    /// BIBD: row sum.
    #[arg(long)]
    pub r: Option<usize>,
    /// BIBD: column sum.
    #[arg(long)]
    pub k: Option<usize>,
    /// BIBD: pairwise row scalar product.
    #[arg(long)]
    pub lambda: Option<usize>,

    /// Rack model as capacity:power:count (repeatable).
    #[arg(long = "rack")]
    pub racks: Vec<String>,
    /// Card type as power:quantity (repeatable).
    #[arg(long = "card")]
    pub cards: Vec<String>,

    /// Random model dims, e.g. 3x3 or 2x2x2.
    #[arg(long)]
    pub dims: Option<String>,
    /// Random model domain is 0..domain-size.
    #[arg(long)]
    pub domain_size: Option<usize>,
    /// Random model constraint density.
    #[arg(long, default_value_t = 0.3)]
    pub density: f64,
    /// Random model seed.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

impl ModelSource {
    pub fn build(&self) -> Result<MatrixModel, CliError> {
        if let Some(path) = &self.model {
            let text = std::fs::read_to_string(path).map_err(|e| {
                CliError::usage(format!("cannot read model file {}: {e}", path.display()))
            })?;
            return model_from_json(&text).map_err(|e| CliError::usage(e.to_string()));
        }
        match self.problem.as_deref() {
            Some("bibd") => self.build_bibd(),
            Some("rack") => self.build_rack(),
            Some("random") => self.build_random(),
            Some(other) => Err(CliError::usage(format!("unknown problem {other:?}"))),
            None => Err(CliError::usage("give --model FILE or --problem NAME")),
        }
    }

    fn build_bibd(&self) -> Result<MatrixModel, CliError> {
        let (Some(v), Some(b), Some(r), Some(k), Some(lambda)) =
            (self.v, self.b, self.r, self.k, self.lambda)
        else {
            return Err(CliError::usage("bibd needs --v --b --r --k --lambda"));
        };
        build_bibd(BibdParams { v, b, r, k, lambda }).map_err(|e| CliError::usage(e.to_string()))
    }

    fn build_rack(&self) -> Result<MatrixModel, CliError> {
        if self.racks.is_empty() || self.cards.is_empty() {
            return Err(CliError::usage(
                "rack needs at least one --rack capacity:power:count and one --card power:quantity",
            ));
        }
        let rack_models = self
            .racks
            .iter()
            .map(|s| {
                let parts = parse_ints(s, 3)?;
                Ok(RackModelSpec {
                    capacity: parts[0] as usize,
                    power: parts[1],
                    count: parts[2] as usize,
                })
            })
            .collect::<Result<Vec<_>, CliError>>()?;
        let card_types = self
            .cards
            .iter()
            .map(|s| {
                let parts = parse_ints(s, 2)?;
                Ok(CardTypeSpec {
                    power: parts[0],
                    quantity: parts[1] as usize,
                })
            })
            .collect::<Result<Vec<_>, CliError>>()?;
        build_rack(&RackParams {
            rack_models,
            card_types,
        })
        .map_err(|e| CliError::usage(e.to_string()))
    }

    fn build_random(&self) -> Result<MatrixModel, CliError> {
        let dims_text = self
            .dims
            .as_deref()
            .ok_or_else(|| CliError::usage("random needs --dims, e.g. 3x3"))?;
        let dims = dims_text
            .split('x')
            .map(|p| p.parse::<usize>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|_| CliError::usage(format!("bad dims {dims_text:?}")))?;
        if dims.contains(&0) || dims.is_empty() {
            return Err(CliError::usage(format!("bad dims {dims_text:?}")));
        }
        let domain_size = self
            .domain_size
            .ok_or_else(|| CliError::usage("random needs --domain-size"))?;
        if domain_size == 0 {
            return Err(CliError::usage("domain size must be positive"));
        }
        if !(0.0..=10.0).contains(&self.density) {
            return Err(CliError::usage("density must be in 0..=10"));
        }
        Ok(random_model(&dims, domain_size, self.density, self.seed))
    }
}

fn parse_ints(text: &str, want: usize) -> Result<Vec<u64>, CliError> {
    let parts = text
        .split(':')
        .map(|p| p.parse::<u64>())
        .collect::<Result<Vec<_>, _>>()
        .map_err(|_| CliError::usage(format!("bad value {text:?}")))?;
    if parts.len() != want {
        return Err(CliError::usage(format!(
            "bad value {text:?}: want {want} colon-separated integers"
        )));
    }
    Ok(parts)
}
