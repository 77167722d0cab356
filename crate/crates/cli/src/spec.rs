//! The `CodeSpec` JSON document and construction of the code it describes.

use std::path::Path;

use locregen::gf::smallest_field_for;
use locregen::mbr_locality::{MbrLocalityCode, MbrLocalityParams};
use locregen::pct_msr::{MsrLocalityCode, MsrLocalityParams};
use locregen::pm_mbr::PmMbrParams;
use locregen::tamo_barg::TbParams;
use locregen::{Family, GfContext, VectorCode};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};
use crate::format::{parse_hex, read_json};

/// Field selection: an explicit order or `"auto"`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum FieldChoice {
    Order(u64),
    Keyword(String),
}

impl Default for FieldChoice {
    fn default() -> Self {
        FieldChoice::Keyword("auto".into())
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CodeSpec {
    pub family: String,
    pub n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_l: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d: Option<usize>,
    /// Message dimension: `k` for scalar-indexed families, `K` for MBR locality.
    #[serde(default, alias = "K", skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta: Option<usize>,
    #[serde(default)]
    pub q: FieldChoice,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub modulus: Option<u64>,
    /// Coupling coefficient override, as hex.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theta: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

impl CodeSpec {
    pub fn load(path: &Path) -> Result<Self> {
        read_json(path)
    }

    pub fn family(&self) -> Result<Family> {
        Ok(self.family.parse::<Family>()?)
    }

    pub fn field(&self) -> Result<GfContext> {
        match (&self.q, self.modulus) {
            (FieldChoice::Order(q), None) => Ok(GfContext::new(*q)?),
            (FieldChoice::Order(q), Some(m)) => Ok(GfContext::with_modulus(*q, m)?),
            (FieldChoice::Keyword(k), None) if k == "auto" => Ok(smallest_field_for(self.n as u64)),
            (FieldChoice::Keyword(k), Some(_)) if k == "auto" => {
                Err(CliError::Invalid("modulus needs an explicit q".into()))
            }
            (FieldChoice::Keyword(k), _) => {
                Err(CliError::Invalid(format!("q must be an integer or \"auto\", got {k:?}")))
            }
        }
    }

    pub fn build(&self) -> Result<AnyCode> {
        let family = self.family()?;
        let field = self.field()?;
        let p = Params { spec: self, family };
        match family {
            Family::PmMbr => {
                p.unused(&[("n_l", self.n_l), ("r", self.r), ("delta", self.delta)])?;
                p.no_theta()?;
                Ok(AnyCode::PmMbr(PmMbrParams::new(field, self.n, p.need("k", self.k)?, p.need("d", self.d)?)?))
            }
            Family::TamoBarg => {
                p.unused(&[("d", self.d)])?;
                p.no_theta()?;
                let (r, delta) = (p.need("r", self.r)?, p.need("delta", self.delta)?);
                if let Some(n_l) = self.n_l {
                    if n_l != r + delta - 1 {
                        return Err(CliError::Invalid(format!("n_l must equal r + delta - 1 = {}", r + delta - 1)));
                    }
                }
                Ok(AnyCode::TamoBarg(TbParams::new(field, self.n, p.need("k", self.k)?, r, delta)?))
            }
            Family::MbrLocality => {
                p.unused(&[("delta", self.delta)])?;
                p.no_theta()?;
                let params = MbrLocalityParams::new(
                    field,
                    self.n,
                    p.need("n_l", self.n_l)?,
                    p.need("r", self.r)?,
                    p.need("d", self.d)?,
                    p.need("K", self.k)?,
                )?;
                Ok(AnyCode::MbrLocality(MbrLocalityCode::new(params)?))
            }
            Family::MsrLocality => {
                p.unused(&[("d", self.d)])?;
                let theta = self.theta.as_deref().map(|t| parse_hex(&field, t)).transpose()?;
                let params = MsrLocalityParams::new(
                    field,
                    self.n,
                    p.need("n_l", self.n_l)?,
                    p.need("r", self.r)?,
                    p.need("delta", self.delta)?,
                    p.need("k", self.k)?,
                    theta,
                )?;
                Ok(AnyCode::MsrLocality(MsrLocalityCode::new(params)?))
            }
        }
    }
}

struct Params<'a> {
    spec: &'a CodeSpec,
    family: Family,
}

impl Params<'_> {
    fn need(&self, name: &str, v: Option<usize>) -> Result<usize> {
        v.ok_or_else(|| CliError::Invalid(format!("{} needs parameter {name}", self.family)))
    }

    fn unused(&self, fields: &[(&str, Option<usize>)]) -> Result<()> {
        match fields.iter().find(|(_, v)| v.is_some()) {
            Some((name, _)) => Err(CliError::Invalid(format!("parameter {name} is not used by {}", self.family))),
            None => Ok(()),
        }
    }

    fn no_theta(&self) -> Result<()> {
        match self.spec.theta {
            Some(_) => Err(CliError::Invalid(format!("parameter theta is not used by {}", self.family))),
            None => Ok(()),
        }
    }
}

/// A constructed code of any family.
pub enum AnyCode {
    PmMbr(PmMbrParams),
    TamoBarg(TbParams),
    MbrLocality(MbrLocalityCode),
    MsrLocality(MsrLocalityCode),
}

impl AnyCode {
    pub fn code(&self) -> &dyn VectorCode {
        match self {
            AnyCode::PmMbr(c) => c,
            AnyCode::TamoBarg(c) => c,
            AnyCode::MbrLocality(c) => c,
            AnyCode::MsrLocality(c) => c,
        }
    }
}
