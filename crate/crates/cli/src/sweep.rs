use std::collections::BTreeMap;
use std::io::Write;
use std::str::FromStr;

use ogd_core::discord::ogd_value;
use ogd_core::{closed_form_ogd, gqd, renyi2_discord, FamilyParams};
use rayon::prelude::*;

use crate::error::{CliError, Result};
use crate::format::num;

pub const SWEEP_HEADER: [&str; 8] = [
    "sweep_value",
    "ogd_numeric",
    "ogd_closed_form",
    "gqd",
    "renyi2",
    "det_local",
    "det_joint",
    "branch",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FamilyKind {
    SymmetricT,
    CcCa,
    Asymmetric,
}

impl FamilyKind {
    pub fn param_names(self) -> &'static [&'static str] {
        match self {
            FamilyKind::SymmetricT => &["a", "t"],
            FamilyKind::CcCa => &["c", "q"],
            FamilyKind::Asymmetric => &["b", "v", "s"],
        }
    }

    pub fn build(self, values: &BTreeMap<String, f64>) -> Result<FamilyParams> {
        let get = |n: &str| {
            values
                .get(n)
                .copied()
                .ok_or_else(|| CliError::input(format!("missing family parameter `{n}`")))
        };
        Ok(match self {
            FamilyKind::SymmetricT => FamilyParams::SymmetricT {
                a: get("a")?,
                t: get("t")?,
            },
            FamilyKind::CcCa => FamilyParams::CcCa {
                c: get("c")?,
                q: get("q")?,
            },
            FamilyKind::Asymmetric => FamilyParams::Asymmetric {
                b: get("b")?,
                v: get("v")?,
                s: get("s")?,
            },
        })
    }
}

impl FromStr for FamilyKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "symmetric_t" => Ok(FamilyKind::SymmetricT),
            "cc_ca" => Ok(FamilyKind::CcCa),
            "asymmetric" => Ok(FamilyKind::Asymmetric),
            _ => Err(format!(
                "unknown family `{s}` (expected symmetric_t, cc_ca or asymmetric)"
            )),
        }
    }
}

/// `start:stop:step` with `step > 0` and `stop >= start`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Range {
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl FromStr for Range {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let parts: Vec<&str> = s.split(':').collect();
        let [start, stop, step] = parts.as_slice() else {
            return Err(format!("range `{s}` is not start:stop:step"));
        };
        let parse = |p: &str| {
            p.trim()
                .parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| format!("bad number `{p}` in range"))
        };
        let r = Range {
            start: parse(start)?,
            stop: parse(stop)?,
            step: parse(step)?,
        };
        if r.step <= 0.0 {
            return Err("range step must be positive".into());
        }
        if r.stop < r.start {
            return Err("range stop is below start".into());
        }
        Ok(r)
    }
}

impl Range {
    /// Grid `start + i·step` up to `stop`, rounded to 1e-12 so that decimal
    /// steps land on their decimal values.
    pub fn points(&self) -> Vec<f64> {
        let n = ((self.stop - self.start) / self.step + 1e-9).floor() as usize + 1;
        (0..n)
            .map(|i| {
                let v = ((self.start + i as f64 * self.step) * 1e12).round() / 1e12;
                if v == 0.0 {
                    0.0
                } else {
                    v
                }
            })
            .collect()
    }
}

/// `name=value`.
pub fn parse_param(s: &str) -> std::result::Result<(String, f64), String> {
    let (name, value) = s
        .split_once('=')
        .ok_or_else(|| format!("parameter `{s}` is not name=value"))?;
    let v: f64 = value
        .trim()
        .parse()
        .map_err(|_| format!("bad value in parameter `{s}`"))?;
    Ok((name.trim().to_string(), v))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Measures {
    pub ogd: bool,
    pub gqd: bool,
    pub renyi2: bool,
    pub closed_form: bool,
}

impl FromStr for Measures {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let mut m = Measures::default();
        for item in s.split(',').map(str::trim).filter(|x| !x.is_empty()) {
            match item {
                "ogd" => m.ogd = true,
                "gqd" => m.gqd = true,
                "renyi2" => m.renyi2 = true,
                "closed_form" => m.closed_form = true,
                _ => return Err(format!("unknown measure `{item}`")),
            }
        }
        if m == Measures::default() {
            return Err("no measures selected".into());
        }
        Ok(m)
    }
}

pub const DEFAULT_MEASURES: &str = "ogd,gqd,renyi2,closed_form";

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub kind: FamilyKind,
    pub fixed: BTreeMap<String, f64>,
    pub sweep_param: String,
    pub range: Range,
    pub measures: Measures,
    pub seed: u64,
}

impl SweepSpec {
    /// The swept parameter is the one family parameter not fixed by `params`.
    pub fn new(
        kind: FamilyKind,
        params: &[(String, f64)],
        range: Range,
        measures: Measures,
        seed: u64,
    ) -> Result<Self> {
        let names = kind.param_names();
        let mut fixed = BTreeMap::new();
        for (n, v) in params {
            if !names.contains(&n.as_str()) {
                return Err(CliError::input(format!(
                    "family has no parameter `{n}` (expected one of {})",
                    names.join(", ")
                )));
            }
            if fixed.insert(n.clone(), *v).is_some() {
                return Err(CliError::input(format!("parameter `{n}` given twice")));
            }
        }
        let free: Vec<&str> = names
            .iter()
            .copied()
            .filter(|n| !fixed.contains_key(*n))
            .collect();
        let [sweep_param] = free.as_slice() else {
            return Err(CliError::input(format!(
                "fix all family parameters but one with --param (free: {})",
                if free.is_empty() {
                    "none".to_string()
                } else {
                    free.join(", ")
                }
            )));
        };
        let spec = SweepSpec {
            kind,
            sweep_param: sweep_param.to_string(),
            fixed,
            range,
            measures,
            seed,
        };
        for v in spec.range.points() {
            spec.family_at(v)?
                .validate()
                .map_err(|e| CliError::input(format!("range outside family validity: {e}")))?;
        }
        Ok(spec)
    }

    pub fn family_at(&self, v: f64) -> Result<FamilyParams> {
        let mut values = self.fixed.clone();
        values.insert(self.sweep_param.clone(), v);
        self.kind.build(&values)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub value: f64,
    pub ogd: Option<f64>,
    pub closed_form: Option<f64>,
    pub gqd: Option<f64>,
    pub renyi2: Option<f64>,
    pub det_local: Option<f64>,
    pub det_joint: Option<f64>,
    pub branch: Option<&'static str>,
}

impl SweepRow {
    fn fields(&self) -> Vec<String> {
        let opt = |x: Option<f64>| x.map(num).unwrap_or_default();
        vec![
            num(self.value),
            opt(self.ogd),
            opt(self.closed_form),
            opt(self.gqd),
            opt(self.renyi2),
            opt(self.det_local),
            opt(self.det_joint),
            self.branch.unwrap_or_default().to_string(),
        ]
    }
}

fn row(spec: &SweepSpec, value: f64) -> Result<SweepRow> {
    let family = spec.family_at(value)?;
    let state = family.state()?;
    ogd_core::symplectic::require_physical(&state)?;
    let m = spec.measures;
    let mut r = SweepRow {
        value,
        ogd: None,
        closed_form: None,
        gqd: None,
        renyi2: None,
        det_local: None,
        det_joint: None,
        branch: None,
    };
    if m.ogd {
        let (ogd, local, joint) = ogd_value(&state, spec.seed)?;
        r.ogd = Some(ogd);
        r.det_local = Some(local.ln_det.exp());
        r.det_joint = Some(joint.ln_det.exp());
    }
    if m.closed_form {
        let cf = closed_form_ogd(&family)?;
        r.closed_form = Some(cf.ogd);
        r.branch = Some(cf.branch.label());
    }
    if m.gqd {
        r.gqd = Some(gqd(&state, spec.seed)?);
    }
    if m.renyi2 {
        r.renyi2 = Some(renyi2_discord(&state, spec.seed)?);
    }
    Ok(r)
}

/// Rows in sweep order, computed in parallel.
pub fn run(spec: &SweepSpec) -> Result<Vec<SweepRow>> {
    spec.range
        .points()
        .into_par_iter()
        .map(|v| row(spec, v))
        .collect()
}

pub fn write_csv<W: Write>(rows: &[SweepRow], out: W) -> Result<()> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out);
    w.write_record(SWEEP_HEADER)?;
    for r in rows {
        w.write_record(r.fields())?;
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}
