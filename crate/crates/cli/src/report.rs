//! The `report` command: every check on a batch of scenarios.

use std::fmt::Write;

use rayon::prelude::*;
use serde_json::{json, Value};
use tdual_core::cohomology::{cohomology_dims, compare_duals};
use tdual_core::scenario::{render_element, ScenarioFile};
use tdual_core::{DualityScenario, Error, Result};

/// Even/odd twisted dims of E and Ehat, and whether they agree.
pub type TwistedDims = ((usize, usize), (usize, usize), bool);

pub struct Summary {
    pub gerbe: bool,
    pub residual: String,
    pub nondegeneracy: (usize, usize, bool),
    pub quadratic: Option<bool>,
    pub chain_map: bool,
    pub tau_invertible: bool,
    pub untwisted: (Vec<usize>, Vec<usize>),
    /// Even/odd twisted dims of both sides, when the pair is T-dual.
    pub twisted: Option<TwistedDims>,
}

pub struct ScenarioReport {
    pub name: String,
    pub outcome: std::result::Result<Summary, String>,
}

fn summarize(s: &DualityScenario) -> Result<Summary> {
    let v = s.check()?;
    let quadratic = match s.quadratic_shortcut() {
        Ok(b) => Some(b),
        Err(Error::NotApplicable(_)) => None,
        Err(e) => return Err(e),
    };
    let dual = v.is_t_dual();
    let twisted = if dual {
        let c = compare_duals(s)?;
        Some((c.e.dims(), c.ehat.dims(), c.holds()))
    } else {
        None
    };
    let m = &v.nondegeneracy.matrix;
    Ok(Summary {
        gerbe: v.gerbe.holds,
        residual: render_element(s.correspondence().model(), &v.gerbe.residual),
        nondegeneracy: (m.rows(), m.cols(), v.nondegeneracy.invertible),
        quadratic,
        chain_map: dual && s.verify_chain_map().holds,
        tau_invertible: dual && s.tau_is_invertible(),
        untwisted: (cohomology_dims(s.e()).dims(), cohomology_dims(s.ehat()).dims()),
        twisted,
    })
}

pub fn run_one(name: &str, text: &str) -> ScenarioReport {
    let outcome = ScenarioFile::parse(text)
        .and_then(|f| f.build())
        .map_err(|e| e.to_string())
        .and_then(|l| summarize(&l.scenario).map_err(|e| e.to_string()));
    ScenarioReport { name: name.to_string(), outcome }
}

/// Reports in input order; scenarios are checked concurrently.
pub fn run_all(sources: &[(String, String)]) -> Vec<ScenarioReport> {
    sources.par_iter().map(|(n, t)| run_one(n, t)).collect()
}

fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

impl Summary {
    pub fn is_t_dual(&self) -> bool {
        self.gerbe && self.nondegeneracy.2
    }
}

impl ScenarioReport {
    pub fn exit_code(&self) -> u8 {
        match &self.outcome {
            Err(_) => 2,
            Ok(s) if s.is_t_dual() => 0,
            Ok(_) => 1,
        }
    }

    pub fn text(&self) -> String {
        let mut out = format!("== {}\n", self.name);
        let s = match &self.outcome {
            Err(e) => {
                let _ = writeln!(out, "  invalid: {e}");
                return out;
            }
            Ok(s) => s,
        };
        let _ = writeln!(out, "  gerbe trivialization: {}", yes(s.gerbe));
        if !s.gerbe {
            let _ = writeln!(out, "    residual: {}", s.residual);
        }
        let (r, c, inv) = s.nondegeneracy;
        let _ = writeln!(out, "  nondegeneracy: {r}x{c}, invertible: {}", yes(inv));
        let quad = s.quadratic.map_or("not applicable", yes);
        let _ = writeln!(out, "  quadratic shortcut: {quad}");
        let _ = writeln!(out, "  T-dual: {}", yes(s.is_t_dual()));
        if s.is_t_dual() {
            let _ = writeln!(out, "  chain map: {}", yes(s.chain_map));
            let _ = writeln!(out, "  tau invertible: {}", yes(s.tau_invertible));
        }
        let _ = writeln!(out, "  cohomology E: {:?}", s.untwisted.0);
        let _ = writeln!(out, "  cohomology Ehat: {:?}", s.untwisted.1);
        if let Some((e, eh, ok)) = s.twisted {
            let _ = writeln!(out, "  twisted cohomology (even, odd): E {e:?}, Ehat {eh:?}, isomorphic: {}", yes(ok));
        }
        out
    }

    pub fn to_json(&self) -> Value {
        match &self.outcome {
            Err(e) => json!({ "name": self.name, "valid": false, "error": e }),
            Ok(s) => json!({
                "name": self.name,
                "valid": true,
                "t_dual": s.is_t_dual(),
                "gerbe": { "holds": s.gerbe, "residual": s.residual },
                "nondegeneracy": { "rows": s.nondegeneracy.0, "cols": s.nondegeneracy.1, "invertible": s.nondegeneracy.2 },
                "quadratic_shortcut": s.quadratic,
                "chain_map": s.chain_map,
                "tau_invertible": s.tau_invertible,
                "cohomology": { "E": s.untwisted.0, "Ehat": s.untwisted.1 },
                "twisted_cohomology": s.twisted.map(|(e, eh, ok)| json!({
                    "E": [e.0, e.1], "Ehat": [eh.0, eh.1], "isomorphic": ok
                })),
            }),
        }
    }
}

pub fn to_json(reports: &[ScenarioReport]) -> Value {
    Value::Array(reports.iter().map(ScenarioReport::to_json).collect())
}
