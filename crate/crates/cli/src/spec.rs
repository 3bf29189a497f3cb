//! State specification files.
//!
//! A state file is TOML holding exactly one of:
//!
//! ```toml
//! [standard]
//! a = 10.0
//! b = 10.0
//! c = 5.0
//! d = -5.0
//! ```
//!
//! ```toml
//! cov = [[4.0, 0.0, 1.0, 0.0],
//!        [0.0, 4.0, 0.0, -1.0],
//!        [1.0, 0.0, 2.0, 0.0],
//!        [0.0, -1.0, 0.0, 2.0]]
//! ```
//!
//! ```toml
//! [family]
//! kind = "cc_ca"
//! c = 9.0
//! q = -1.0
//! ```

use std::path::Path;

use ogd_core::symplectic::require_physical;
use ogd_core::{FamilyParams, Mat4, TwoModeCov};
use serde::Deserialize;

use crate::error::{CliError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Standard {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum FamilySpec {
    SymmetricT { a: f64, t: f64 },
    CcCa { c: f64, q: f64 },
    Asymmetric { b: f64, v: f64, s: f64 },
}

impl From<FamilySpec> for FamilyParams {
    fn from(f: FamilySpec) -> Self {
        match f {
            FamilySpec::SymmetricT { a, t } => FamilyParams::SymmetricT { a, t },
            FamilySpec::CcCa { c, q } => FamilyParams::CcCa { c, q },
            FamilySpec::Asymmetric { b, v, s } => FamilyParams::Asymmetric { b, v, s },
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSpec {
    standard: Option<Standard>,
    cov: Option<Vec<Vec<f64>>>,
    family: Option<FamilySpec>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum StateSpec {
    Standard(Standard),
    Cov([[f64; 4]; 4]),
    Family(FamilyParams),
}

impl StateSpec {
    pub fn parse(text: &str) -> Result<Self> {
        let raw: RawSpec = toml::from_str(text)
            .map_err(|e| CliError::input(format!("state file: {}", e.message())))?;
        let present = [
            raw.standard.is_some(),
            raw.cov.is_some(),
            raw.family.is_some(),
        ]
        .iter()
        .filter(|&&p| p)
        .count();
        if present != 1 {
            return Err(CliError::input(format!(
                "state file must hold exactly one of `standard`, `cov`, `family` (found {present})"
            )));
        }
        if let Some(s) = raw.standard {
            return Ok(StateSpec::Standard(s));
        }
        if let Some(f) = raw.family {
            return Ok(StateSpec::Family(f.into()));
        }
        let rows = raw.cov.expect("one field present");
        if rows.len() != 4 || rows.iter().any(|r| r.len() != 4) {
            return Err(CliError::input("`cov` must be a 4x4 array of rows"));
        }
        let mut m = [[0.0; 4]; 4];
        for (dst, src) in m.iter_mut().zip(&rows) {
            dst.copy_from_slice(src);
        }
        Ok(StateSpec::Cov(m))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::parse(&text)
    }

    pub fn family(&self) -> Option<FamilyParams> {
        match self {
            StateSpec::Family(f) => Some(*f),
            _ => None,
        }
    }

    /// The covariance, rejected unless symmetric and physical.
    pub fn state(&self) -> Result<TwoModeCov> {
        if let StateSpec::Cov(m) = self {
            if m.iter().flatten().any(|v| !v.is_finite()) {
                return Err(CliError::input("`cov` has non-finite entries"));
            }
        }
        let state = match self {
            StateSpec::Standard(s) => TwoModeCov::standard(s.a, s.b, s.c, s.d)?,
            StateSpec::Cov(m) => TwoModeCov::from_matrix(&Mat4(*m))?,
            StateSpec::Family(f) => f.state()?,
        };
        require_physical(&state)?;
        Ok(state)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_each_variant() {
        let s = StateSpec::parse("[standard]\na = 4\nb = 2\nc = 0\nd = 0\n").unwrap();
        assert!(matches!(s, StateSpec::Standard(Standard { a, .. }) if a == 4.0));
        let f =
            StateSpec::parse("[family]\nkind = \"asymmetric\"\nb = 3\nv = 1\ns = -1\n").unwrap();
        assert_eq!(
            f.family(),
            Some(FamilyParams::Asymmetric {
                b: 3.0,
                v: 1.0,
                s: -1.0
            })
        );
        let c = StateSpec::parse("cov = [[1,0,0,0],[0,1,0,0],[0,0,1,0],[0,0,0,1]]\n").unwrap();
        assert!(c.state().is_ok());
    }

    #[test]
    fn rejects_ambiguous_or_malformed() {
        assert!(StateSpec::parse("").is_err());
        let both =
            "cov = [[1,0,0,0],[0,1,0,0],[0,0,1,0],[0,0,0,1]]\n[standard]\na=1\nb=1\nc=0\nd=0\n";
        assert!(StateSpec::parse(both).is_err());
        assert!(StateSpec::parse("cov = [[1,0],[0,1]]\n").is_err());
        assert!(StateSpec::parse("[family]\nkind = \"other\"\nx = 1\n").is_err());
        assert!(StateSpec::parse("[standard]\na=1\nb=1\nc=0\n").is_err());
    }

    #[test]
    fn symmetry_and_physicality_diagnostics() {
        let asym = StateSpec::parse("cov = [[2,0.5,0,0],[0,2,0,0],[0,0,2,0],[0,0,0,2]]\n").unwrap();
        let err = asym.state().unwrap_err();
        assert!(err.to_string().contains("symmetry violation"), "{err}");
        assert_eq!(err.exit_code(), 2);

        let unphysical = StateSpec::parse("[standard]\na = 2\nb = 2\nc = 1.9\nd = -1.9\n").unwrap();
        let err = unphysical.state().unwrap_err();
        assert!(err.to_string().contains("symplectic eigenvalue"), "{err}");
        assert_eq!(err.exit_code(), 2);
    }
}
