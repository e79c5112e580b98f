//! Scenario files: a surface jet plus optional reparameterization, group
//! element and representation choices, written in TOML.
//!
//! ```toml
//! m = 2
//! n = 3
//! order = 3
//!
//! # one entry per nonzero coefficient; components are numbered from 1
//! surface = [
//!     { component = 1, exponent = [0, 0], value = "1" },
//!     { component = 1, exponent = [1, 0], value = "1" },
//! ]
//! reparam = [
//!     { component = 1, exponent = [1, 0], value = "1" },
//!     { component = 2, exponent = [0, 1], value = "1" },
//! ]
//! group_element = [["1", "0", "0"], ["0", "1", "0"], ["0", "0", "2"]]
//!
//! [choice]
//! k = 1
//! js = [1]
//! zero_row = true
//! ```
//!
//! Rationals are strings `"p/q"`; integers may also be written bare.
//! Decimal and scientific notation are rejected.

use std::collections::BTreeSet;
use std::path::Path;

use jetinv::rational::{format_rational, parse_rational, zero};
use jetinv::{Matrix, MultiIndex, Rational, RepresentationChoice, ReparamJet, ScalarJet, SurfaceJet};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

/// A rational written either as a string or as a bare integer.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RawRational {
    Integer(i64),
    Text(String),
}

impl RawRational {
    fn parse(&self, field: &str) -> Result<Rational, CliError> {
        match self {
            RawRational::Integer(v) => Ok(Rational::from_integer((*v).into())),
            RawRational::Text(text) => {
                parse_rational(text).map_err(|_| CliError::field(field, format!("{text:?} is not an exact rational (use p/q)")))
            }
        }
    }

    fn canonical(value: &Rational) -> Self {
        RawRational::Text(format_rational(value))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawCoefficient {
    pub component: usize,
    pub exponent: Vec<u32>,
    pub value: RawRational,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawChoice {
    pub k: usize,
    pub js: Vec<usize>,
    #[serde(default = "default_zero_row")]
    pub zero_row: bool,
}

fn default_zero_row() -> bool {
    true
}

/// The file as written, before validation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawScenario {
    pub m: usize,
    pub n: usize,
    pub order: usize,
    pub surface: Vec<RawCoefficient>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reparam: Option<Vec<RawCoefficient>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub group_element: Option<Vec<Vec<RawRational>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub choice: Option<RawChoice>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub frame_choices: Option<Vec<RawChoice>>,
}

/// A validated scenario.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Scenario {
    pub m: usize,
    pub n: usize,
    pub order: usize,
    pub surface: SurfaceJet,
    pub reparam: Option<ReparamJet>,
    pub group_element: Option<Matrix>,
    pub choice: Option<RepresentationChoice>,
    pub frame_choices: Option<Vec<RepresentationChoice>>,
}

impl Scenario {
    pub fn from_path(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        let raw: RawScenario = toml::from_str(text).map_err(|e| CliError::Input(e.to_string()))?;
        Self::from_raw(&raw)
    }

    pub fn from_raw(raw: &RawScenario) -> Result<Self, CliError> {
        if raw.m == 0 {
            return Err(CliError::field("m", "must be positive"));
        }
        if raw.n == 0 {
            return Err(CliError::field("n", "must be positive"));
        }
        let surface = SurfaceJet::new(jets(&raw.surface, "surface", raw.m, raw.n, raw.order)?)
            .map_err(|e| CliError::field("surface", e))?;

        let reparam = match &raw.reparam {
            None => None,
            Some(coeffs) => {
                for (i, c) in coeffs.iter().enumerate() {
                    if c.exponent.iter().all(|&e| e == 0) && c.value.parse(&format!("reparam[{i}].value"))? != zero() {
                        return Err(CliError::field(
                            &format!("reparam[{i}]"),
                            "reparameterization must fix the origin (nonzero constant term)",
                        ));
                    }
                }
                let map = SurfaceJet::new(jets(coeffs, "reparam", raw.m, raw.m, raw.order)?)
                    .map_err(|e| CliError::field("reparam", e))?;
                let s = ReparamJet::new(map).map_err(|e| CliError::field("reparam", e))?;
                if s.jacobian_at_origin().det().map_err(|e| CliError::field("reparam", e))? == zero() {
                    return Err(CliError::field("reparam", "Jacobian at the origin is singular"));
                }
                Some(s)
            }
        };

        let group_element = match &raw.group_element {
            None => None,
            Some(rows) => {
                if rows.len() != raw.n {
                    return Err(CliError::field("group_element", format!("expected {} rows, found {}", raw.n, rows.len())));
                }
                let mut parsed = Vec::with_capacity(rows.len());
                for (i, row) in rows.iter().enumerate() {
                    if row.len() != raw.n {
                        return Err(CliError::field(
                            &format!("group_element[{i}]"),
                            format!("expected {} entries, found {}", raw.n, row.len()),
                        ));
                    }
                    let values = row
                        .iter()
                        .enumerate()
                        .map(|(j, v)| v.parse(&format!("group_element[{i}][{j}]")))
                        .collect::<Result<Vec<_>, _>>()?;
                    parsed.push(values);
                }
                let h = Matrix::from_rows(parsed).map_err(|e| CliError::field("group_element", e))?;
                if h.det().map_err(|e| CliError::field("group_element", e))? == zero() {
                    return Err(CliError::field("group_element", "matrix is singular"));
                }
                Some(h)
            }
        };

        let choice = raw.choice.as_ref().map(|c| representation_choice(c, "choice")).transpose()?;
        let frame_choices = raw
            .frame_choices
            .as_ref()
            .map(|cs| {
                cs.iter()
                    .enumerate()
                    .map(|(i, c)| representation_choice(c, &format!("frame_choices[{i}]")))
                    .collect::<Result<Vec<_>, _>>()
            })
            .transpose()?;

        Ok(Scenario {
            m: raw.m,
            n: raw.n,
            order: raw.order,
            surface,
            reparam,
            group_element,
            choice,
            frame_choices,
        })
    }

    /// The canonical written form: one entry per nonzero coefficient,
    /// rationals in lowest terms.
    pub fn to_raw(&self) -> RawScenario {
        let coeffs = |components: &[ScalarJet]| -> Vec<RawCoefficient> {
            components
                .iter()
                .enumerate()
                .flat_map(|(c, jet)| {
                    jet.terms().into_iter().map(move |(alpha, value)| RawCoefficient {
                        component: c + 1,
                        exponent: alpha.parts().to_vec(),
                        value: RawRational::canonical(&value),
                    })
                })
                .collect()
        };
        let raw_choice = |c: &RepresentationChoice| RawChoice {
            k: c.k,
            js: c.js.clone(),
            zero_row: c.include_zero_row,
        };
        RawScenario {
            m: self.m,
            n: self.n,
            order: self.order,
            surface: coeffs(self.surface.components()),
            reparam: self.reparam.as_ref().map(|s| coeffs(s.components())),
            group_element: self.group_element.as_ref().map(|h| {
                h.to_rows()
                    .iter()
                    .map(|row| row.iter().map(RawRational::canonical).collect())
                    .collect()
            }),
            choice: self.choice.as_ref().map(raw_choice),
            frame_choices: self.frame_choices.as_ref().map(|cs| cs.iter().map(raw_choice).collect()),
        }
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(&self.to_raw()).expect("scenario serializes")
    }
}

fn representation_choice(raw: &RawChoice, field: &str) -> Result<RepresentationChoice, CliError> {
    RepresentationChoice::new(raw.k, &raw.js, raw.zero_row).map_err(|e| CliError::field(field, e))
}

/// Builds `components` jets in `vars` variables from a 1-based coefficient list.
fn jets(
    coeffs: &[RawCoefficient],
    field: &str,
    vars: usize,
    components: usize,
    order: usize,
) -> Result<Vec<ScalarJet>, CliError> {
    let mut terms: Vec<Vec<(MultiIndex, Rational)>> = vec![Vec::new(); components];
    let mut seen = BTreeSet::new();
    for (i, c) in coeffs.iter().enumerate() {
        let path = format!("{field}[{i}]");
        if c.component == 0 || c.component > components {
            return Err(CliError::field(
                &format!("{path}.component"),
                format!("{} is outside 1..={components}", c.component),
            ));
        }
        if c.exponent.len() != vars {
            return Err(CliError::field(
                &format!("{path}.exponent"),
                format!("expected {vars} exponents, found {}", c.exponent.len()),
            ));
        }
        let degree: u32 = c.exponent.iter().sum();
        if degree as usize > order {
            return Err(CliError::field(
                &format!("{path}.exponent"),
                format!("degree {degree} exceeds order {order}"),
            ));
        }
        if !seen.insert((c.component, c.exponent.clone())) {
            return Err(CliError::field(&path, "duplicate coefficient"));
        }
        let value = c.value.parse(&format!("{path}.value"))?;
        terms[c.component - 1].push((MultiIndex::new(&c.exponent), value));
    }
    terms
        .iter()
        .enumerate()
        .map(|(c, t)| ScalarJet::from_terms(vars, order, t).map_err(|e| CliError::field(&format!("{field} component {}", c + 1), e)))
        .collect()
}
