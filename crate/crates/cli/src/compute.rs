use std::fmt::Write as _;
use std::path::Path;

use ogd_core::{
    closed_form_ogd, ogd, DiscordReport, FamilyParams, JointMeasurement, LocalMeasurement,
    TwoModeCov,
};
use serde::Serialize;

use crate::error::{CliError, Result};
use crate::format::num;

#[derive(Debug, Clone, Serialize)]
pub struct LocalRecord {
    pub theta: f64,
    pub l: f64,
}

impl From<&LocalMeasurement> for LocalRecord {
    fn from(m: &LocalMeasurement) -> Self {
        LocalRecord {
            theta: m.theta(),
            l: m.l(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct JointRecord {
    pub phi_a: f64,
    pub phi_b: f64,
    pub eta: f64,
    pub a: LocalRecord,
    pub b: LocalRecord,
}

impl From<&JointMeasurement> for JointRecord {
    fn from(m: &JointMeasurement) -> Self {
        JointRecord {
            phi_a: m.phi_a,
            phi_b: m.phi_b,
            eta: m.eta,
            a: (&m.ma).into(),
            b: (&m.mb).into(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct FamilyRecord {
    pub kind: &'static str,
    pub params: Vec<(String, f64)>,
    pub ogd_closed_form: f64,
    pub det_local_closed_form: f64,
    pub det_joint_closed_form: f64,
    pub branch: &'static str,
}

/// Machine-readable result of `compute`.
#[derive(Debug, Clone, Serialize)]
pub struct ComputeRecord {
    pub seed: u64,
    pub covariance: [[f64; 4]; 4],
    pub symplectic_eigenvalues: [f64; 2],
    pub ogd: f64,
    pub ogd_clamped: bool,
    pub gqd: f64,
    pub renyi2: f64,
    pub hmin_local: f64,
    pub hmin_joint: f64,
    pub det_local: f64,
    pub det_joint: f64,
    pub local_a: LocalRecord,
    pub local_b: LocalRecord,
    pub joint: JointRecord,
    pub family: Option<FamilyRecord>,
}

pub fn compute(
    state: &TwoModeCov,
    family: Option<&FamilyParams>,
    seed: u64,
) -> Result<ComputeRecord> {
    let r: DiscordReport = ogd(state, seed)?;
    let family = family
        .map(|f| -> Result<FamilyRecord> {
            let cf = closed_form_ogd(f)?;
            Ok(FamilyRecord {
                kind: f.name(),
                params: f
                    .param_names()
                    .iter()
                    .map(|n| n.to_string())
                    .zip(f.params())
                    .collect(),
                ogd_closed_form: cf.ogd,
                det_local_closed_form: cf.det_local,
                det_joint_closed_form: cf.det_joint,
                branch: cf.branch.label(),
            })
        })
        .transpose()?;
    let (nu1, nu2) = state.symplectic_eigenvalues();
    Ok(ComputeRecord {
        seed,
        covariance: state.matrix().0,
        symplectic_eigenvalues: [nu1, nu2],
        ogd: r.ogd,
        ogd_clamped: r.ogd_clamped,
        gqd: r.gqd,
        renyi2: r.renyi2,
        hmin_local: r.hmin_local,
        hmin_joint: r.hmin_joint,
        det_local: r.det_local,
        det_joint: r.det_joint,
        local_a: (&r.opt_local.0).into(),
        local_b: (&r.opt_local.1).into(),
        joint: (&r.opt_joint).into(),
        family,
    })
}

/// Human-readable report, one `key: value` per line.
pub fn render_text(rec: &ComputeRecord) -> String {
    let mut s = String::new();
    let mut line = |k: &str, v: String| {
        let _ = writeln!(s, "{k:<24}{v}");
    };
    line("seed:", rec.seed.to_string());
    line(
        "symplectic_eigenvalues:",
        format!(
            "{} {}",
            num(rec.symplectic_eigenvalues[0]),
            num(rec.symplectic_eigenvalues[1])
        ),
    );
    let clamp = if rec.ogd_clamped { " (clamped)" } else { "" };
    line("ogd:", format!("{}{clamp}", num(rec.ogd)));
    line("gqd:", num(rec.gqd));
    line("renyi2:", num(rec.renyi2));
    line("hmin_local:", num(rec.hmin_local));
    line("hmin_joint:", num(rec.hmin_joint));
    line("det_local:", num(rec.det_local));
    line("det_joint:", num(rec.det_joint));
    line(
        "local_measurement:",
        format!(
            "theta_a={} l_a={} theta_b={} l_b={}",
            num(rec.local_a.theta),
            num(rec.local_a.l),
            num(rec.local_b.theta),
            num(rec.local_b.l)
        ),
    );
    let j = &rec.joint;
    line(
        "joint_measurement:",
        format!(
            "phi_a={} phi_b={} eta={} theta_a={} l_a={} theta_b={} l_b={}",
            num(j.phi_a),
            num(j.phi_b),
            num(j.eta),
            num(j.a.theta),
            num(j.a.l),
            num(j.b.theta),
            num(j.b.l)
        ),
    );
    if let Some(f) = &rec.family {
        let params: Vec<String> = f
            .params
            .iter()
            .map(|(n, v)| format!("{n}={}", num(*v)))
            .collect();
        line("family:", format!("{} {}", f.kind, params.join(" ")));
        line("ogd_closed_form:", num(f.ogd_closed_form));
        line("branch:", f.branch.to_string());
    }
    s
}

pub fn write_json(rec: &ComputeRecord, path: &Path) -> Result<()> {
    let mut text = serde_json::to_string_pretty(rec).map_err(|e| CliError::input(e.to_string()))?;
    text.push('\n');
    std::fs::write(path, text).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}
