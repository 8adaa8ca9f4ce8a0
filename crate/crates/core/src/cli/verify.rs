//! Analytic identity battery behind `nonlocal-koch verify`.

use serde::{Deserialize, Serialize};

use crate::nonlocal_ops::sonine_pair;
use crate::subordinate::{density_h, density_l};
use crate::symbols::{BernsteinSymbol, JumpLaw};
use crate::Result;

/// Names of the check groups, in run order.
pub const GROUPS: [&str; 6] = ["tail", "sonine", "l_at_zero", "stable_ratio", "cf_compound_poisson", "shape"];

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerifyConfig {
    /// Groups to run; `None` runs all of them, an empty list runs none.
    #[serde(default)]
    pub groups: Option<Vec<String>>,
    /// Replaces every pinned tolerance.
    #[serde(default)]
    pub tolerance: Option<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Check {
    pub group: String,
    pub name: String,
    pub value: f64,
    pub reference: f64,
    pub error: f64,
    pub tolerance: f64,
    pub pass: bool,
}

fn check(group: &str, name: String, value: f64, reference: f64, tol: f64) -> Check {
    let error = (value - reference).abs();
    Check { group: group.into(), name, value, reference, error, tolerance: tol, pass: error <= tol }
}

fn battery_symbols() -> Result<Vec<BernsteinSymbol>> {
    Ok(vec![BernsteinSymbol::stable(0.5)?, BernsteinSymbol::gamma(1.0, 2.0)?, BernsteinSymbol::caputo_fabrizio(0.5)?])
}

fn group(name: &str, tol: Option<f64>) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    match name {
        "tail" => {
            let t = tol.unwrap_or(1e-6);
            for s in battery_symbols()? {
                for lam in [0.5, 1.0, 2.0] {
                    let v = s.phi_by_quadrature(lam)?;
                    out.push(check(name, format!("{} lambda={lam}", s.label()), v, s.phi(lam)?, t));
                }
            }
        }
        "sonine" => {
            let t = tol.unwrap_or(1e-6);
            for a in [0.25, 0.5, 0.75] {
                let p = sonine_pair(&BernsteinSymbol::stable(a)?)?;
                out.push(check(name, format!("stable({a}) t=1"), p.convolution(1.0)?, 1.0, t));
            }
        }
        "l_at_zero" => {
            let t = tol.unwrap_or(1e-4);
            for s in [BernsteinSymbol::stable(0.5)?, BernsteinSymbol::caputo_fabrizio(0.5)?] {
                for z in [0.5, 1.0] {
                    out.push(check(name, format!("{} z={z}", s.label()), density_l(&s, z, 0.0)?, s.levy_tail(z)?, t));
                }
            }
        }
        "stable_ratio" => {
            let t = tol.unwrap_or(1e-4);
            let s = BernsteinSymbol::stable(0.5)?;
            for (v, z) in [(1.0, 2.0), (0.5, 1.5)] {
                let r = density_h(&s, v, z)? / density_l(&s, z, v)?;
                out.push(check(name, format!("v={v} z={z}"), r, 0.5 * v / z, t));
            }
        }
        "cf_compound_poisson" => {
            let t = tol.unwrap_or(1e-12);
            let alpha = 0.5;
            let theta = alpha / (1.0 - alpha);
            let cf = BernsteinSymbol::caputo_fabrizio(alpha)?;
            let cp = BernsteinSymbol::compound_poisson(theta + 1.0, JumpLaw::Exponential { rate: theta })?;
            for lam in [0.5, 1.0, 2.0] {
                out.push(check(name, format!("lambda={lam}"), cf.phi(lam)?, cp.phi(lam)?, t));
            }
            out.push(check(name, "phi'(0)".into(), cf.phi_prime_at_zero().to_f64(), 1.0 / alpha, t));
        }
        "shape" => {
            let t = tol.unwrap_or(0.0);
            let syms = [
                BernsteinSymbol::stable(0.5)?,
                BernsteinSymbol::gamma(1.0, 2.0)?,
                BernsteinSymbol::caputo_fabrizio(0.5)?,
                BernsteinSymbol::tempered(1.0)?,
                BernsteinSymbol::telegraph_sum(0.25)?,
            ];
            for s in syms {
                let bad = if s.check_shape().is_ok() { 0.0 } else { 1.0 };
                out.push(check(name, s.label(), bad, 0.0, t));
            }
        }
        other => return Err(crate::Error::Config(format!("unknown verify group {other:?}"))),
    }
    Ok(out)
}

/// Run the selected groups.
pub fn run_battery(cfg: &VerifyConfig) -> Result<Vec<Check>> {
    let names: Vec<String> = match &cfg.groups {
        Some(g) => g.clone(),
        None => GROUPS.iter().map(|s| s.to_string()).collect(),
    };
    let mut out = Vec::new();
    for g in &names {
        out.extend(group(g, cfg.tolerance)?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_battery_passes() {
        let r = run_battery(&VerifyConfig::default()).unwrap();
        let bad: Vec<_> = r.iter().filter(|c| !c.pass).collect();
        assert!(bad.is_empty(), "{bad:?}");
        assert!(r.len() >= 20);
    }

    #[test]
    fn tiny_tolerance_fails() {
        let cfg = VerifyConfig { groups: None, tolerance: Some(1e-15) };
        assert!(run_battery(&cfg).unwrap().iter().any(|c| !c.pass));
    }

    #[test]
    fn unknown_group_is_an_error() {
        let cfg = VerifyConfig { groups: Some(vec!["nope".into()]), tolerance: None };
        assert!(run_battery(&cfg).is_err());
    }
}
