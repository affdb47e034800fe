//! INI-style run configuration: `[section]` headers with `key = value`
//! pairs, `#`/`;` comments, dotted keys accepted anywhere. Unknown keys are
//! rejected and every constraint violation names the offending key.

use std::collections::BTreeMap;
use std::path::PathBuf;

use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::initial_data::IcSpec;
use crate::model::ModelKind;

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub model: ModelKind,
    pub grid_n: usize,
    pub grid_l: f64,
    pub dt: f64,
    pub t_end: f64,
    pub stride: usize,
    pub gamma: f64,
    pub b: f64,
    pub eta: f64,
    pub c2: f64,
    pub hall: bool,
    pub ic: IcSpec,
    pub output_dir: PathBuf,
    pub nonlinear: bool,
    pub fit_windows: Vec<(f64, f64)>,
}

impl RunConfig {
    pub fn grid(&self) -> Result<Grid> {
        Grid::new(self.grid_n, self.grid_l)
    }

    pub fn n_steps(&self) -> usize {
        (self.t_end / self.dt).round() as usize
    }

    /// Non-fatal configuration diagnostics: fit windows that reach into the
    /// saturation regime of the torus, where algebraic decay flattens.
    pub fn warnings(&self) -> Vec<String> {
        let mut out = Vec::new();
        if let Ok(grid) = self.grid() {
            let t_star = grid.saturation_time();
            let cap = (0.3 * t_star).min(self.t_end);
            for (t0, t1) in &self.fit_windows {
                if *t1 > cap {
                    out.push(format!(
                        "fit window {t0}:{t1} ends beyond {cap:.1} (0.3*t_star = {:.1}, t_end = {}); \
                         decay fits flatten near the saturation time t_star = {t_star:.1}",
                        0.3 * t_star,
                        self.t_end
                    ));
                }
            }
        }
        out
    }
}

fn parse_key<T: std::str::FromStr>(key: &str, raw: &str) -> Result<T> {
    raw.parse::<T>().map_err(|_| {
        Error::Config(format!(
            "{key}: cannot parse {raw:?} as {}",
            std::any::type_name::<T>()
        ))
    })
}

fn parse_switch(key: &str, raw: &str) -> Result<bool> {
    match raw {
        "on" => Ok(true),
        "off" => Ok(false),
        _ => Err(Error::Config(format!(
            "{key}: expected \"on\" or \"off\", got {raw:?}"
        ))),
    }
}

fn parse_windows(key: &str, raw: &str) -> Result<Vec<(f64, f64)>> {
    let mut out = Vec::new();
    for part in raw.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let (a, b) = part.split_once(':').ok_or_else(|| {
            Error::Config(format!("{key}: window {part:?} must look like t0:t1"))
        })?;
        let t0: f64 = parse_key(key, a.trim())?;
        let t1: f64 = parse_key(key, b.trim())?;
        if !(t1 > t0) || t0 < 0.0 {
            return Err(Error::Config(format!(
                "{key}: window {part:?} needs 0 <= t0 < t1"
            )));
        }
        out.push((t0, t1));
    }
    Ok(out)
}

/// Parse and fully validate a configuration text.
pub fn parse_config(text: &str) -> Result<RunConfig> {
    let mut map: BTreeMap<String, String> = BTreeMap::new();
    let mut section = String::new();
    for (lineno, raw_line) in text.lines().enumerate() {
        let line = raw_line.trim();
        if line.is_empty() || line.starts_with('#') || line.starts_with(';') {
            continue;
        }
        if let Some(rest) = line.strip_prefix('[') {
            let name = rest.strip_suffix(']').ok_or_else(|| {
                Error::Config(format!("line {}: malformed section header {line:?}", lineno + 1))
            })?;
            section = name.trim().to_string();
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            Error::Config(format!("line {}: expected key = value, got {line:?}", lineno + 1))
        })?;
        let mut key = key.trim().to_string();
        let value = value.trim().to_string();
        if !key.contains('.') && !section.is_empty() {
            key = format!("{section}.{key}");
        }
        if map.insert(key.clone(), value).is_some() {
            return Err(Error::Config(format!("{key}: specified twice")));
        }
    }

    let mut take = |k: &str| map.remove(k);

    let model = match take("model").as_deref() {
        Some("oldroyd") => ModelKind::Oldroyd,
        Some("hallmhd") => ModelKind::HallMhd,
        Some(other) => {
            return Err(Error::Config(format!(
                "model: expected \"oldroyd\" or \"hallmhd\", got {other:?}"
            )))
        }
        None => return Err(Error::Config("model: missing required key".into())),
    };

    let grid_n: usize = match take("grid.n") {
        Some(v) => parse_key("grid.n", &v)?,
        None => return Err(Error::Config("grid.n: missing required key".into())),
    };
    if grid_n == 0 || grid_n % 2 != 0 {
        return Err(Error::Config(format!(
            "grid.n: must be a positive even integer, got {grid_n}"
        )));
    }
    let grid_l: f64 = match take("grid.L") {
        Some(v) => parse_key("grid.L", &v)?,
        None => return Err(Error::Config("grid.L: missing required key".into())),
    };
    if !(grid_l > 0.0) {
        return Err(Error::Config(format!("grid.L: must be positive, got {grid_l}")));
    }

    let dt: f64 = match take("time.dt") {
        Some(v) => parse_key("time.dt", &v)?,
        None => return Err(Error::Config("time.dt: missing required key".into())),
    };
    if !(dt > 0.0) {
        return Err(Error::Config(format!("time.dt: must be positive, got {dt}")));
    }
    let t_end: f64 = match take("time.t_end") {
        Some(v) => parse_key("time.t_end", &v)?,
        None => return Err(Error::Config("time.t_end: missing required key".into())),
    };
    if t_end < 0.0 {
        return Err(Error::Config(format!(
            "time.t_end: must be nonnegative, got {t_end}"
        )));
    }
    let stride: usize = match take("time.stride") {
        Some(v) => parse_key("time.stride", &v)?,
        None => 1,
    };
    if stride == 0 {
        return Err(Error::Config("time.stride: must be at least 1".into()));
    }

    let gamma: f64 = match take("params.gamma") {
        Some(v) => parse_key("params.gamma", &v)?,
        None => 1.5,
    };
    if !(gamma >= 1.0) {
        return Err(Error::Config(format!(
            "params.gamma: pressure exponent must be >= 1, got {gamma}"
        )));
    }
    let b: f64 = match take("params.b") {
        Some(v) => parse_key("params.b", &v)?,
        None => 0.0,
    };
    if !(-1.0..=1.0).contains(&b) {
        return Err(Error::Config(format!(
            "params.b: must lie in [-1, 1], got {b}"
        )));
    }
    let eta: f64 = match take("params.eta") {
        Some(v) => parse_key("params.eta", &v)?,
        None => 0.01,
    };
    if !(eta >= 0.0) {
        return Err(Error::Config(format!(
            "params.eta: must be nonnegative, got {eta}"
        )));
    }
    let c2: f64 = match take("params.c2") {
        Some(v) => parse_key("params.c2", &v)?,
        None => 1.0,
    };
    if !(c2 > 0.0) {
        return Err(Error::Config(format!("params.c2: must be positive, got {c2}")));
    }
    let hall = match take("params.hall") {
        Some(v) => parse_switch("params.hall", &v)?,
        None => true,
    };

    let ic = IcSpec {
        seed: match take("ic.seed") {
            Some(v) => parse_key("ic.seed", &v)?,
            None => 1,
        },
        amplitude: match take("ic.amplitude") {
            Some(v) => parse_key("ic.amplitude", &v)?,
            None => 1e-2,
        },
        cutoff: match take("ic.cutoff") {
            Some(v) => parse_key("ic.cutoff", &v)?,
            None => 1.0,
        },
        tail_exponent: match take("ic.tail_exponent") {
            Some(v) => parse_key("ic.tail_exponent", &v)?,
            None => 4.0,
        },
        ..IcSpec::default()
    };
    if ic.amplitude < 0.0 {
        return Err(Error::Config(format!(
            "ic.amplitude: must be nonnegative, got {}",
            ic.amplitude
        )));
    }
    if !(ic.cutoff > 0.0) {
        return Err(Error::Config(format!(
            "ic.cutoff: must be positive, got {}",
            ic.cutoff
        )));
    }

    let output_dir = PathBuf::from(take("output.dir").unwrap_or_else(|| "out".into()));
    let nonlinear = match take("run.nonlinear") {
        Some(v) => parse_switch("run.nonlinear", &v)?,
        None => true,
    };
    let fit_windows = match take("fit.windows") {
        Some(v) => parse_windows("fit.windows", &v)?,
        None => Vec::new(),
    };

    if let Some((key, _)) = map.into_iter().next() {
        return Err(Error::Config(format!("{key}: unknown key")));
    }

    Ok(RunConfig {
        model,
        grid_n,
        grid_l,
        dt,
        t_end,
        stride,
        gamma,
        b,
        eta,
        c2,
        hall,
        ic,
        output_dir,
        nonlinear,
        fit_windows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = "model = oldroyd\n[grid]\nn = 64\nL = 50\n[time]\ndt = 0.05\nt_end = 10\n";

    #[test]
    fn minimal_config_fills_defaults() {
        let cfg = parse_config(MINIMAL).unwrap();
        assert_eq!(cfg.model, ModelKind::Oldroyd);
        assert_eq!(cfg.grid_n, 64);
        assert_eq!(cfg.stride, 1);
        assert_eq!(cfg.gamma, 1.5);
        assert_eq!(cfg.eta, 0.01);
        assert_eq!(cfg.c2, 1.0);
        assert!(cfg.hall);
        assert!(cfg.nonlinear);
        assert_eq!(cfg.ic.seed, 1);
        assert_eq!(cfg.ic.amplitude, 1e-2);
        assert_eq!(cfg.output_dir, PathBuf::from("out"));
        assert!(cfg.fit_windows.is_empty());
    }

    #[test]
    fn dotted_keys_anywhere() {
        let cfg = parse_config(
            "model = hallmhd\ngrid.n = 32\ngrid.L = 25\ntime.dt = 0.1\ntime.t_end = 1\nparams.hall = off\n",
        )
        .unwrap();
        assert_eq!(cfg.model, ModelKind::HallMhd);
        assert!(!cfg.hall);
    }

    #[test]
    fn odd_n_is_named_range_error() {
        let text = MINIMAL.replace("n = 64", "n = 63");
        match parse_config(&text) {
            Err(Error::Config(msg)) => assert!(msg.contains("grid.n"), "{msg}"),
            other => panic!("expected config error, got {other:?}"),
        }
    }

    #[test]
    fn unknown_key_rejected() {
        let text = format!("{MINIMAL}[grid]\nspacing = 3\n");
        match parse_config(&text) {
            Err(Error::Config(msg)) => assert!(msg.contains("grid.spacing"), "{msg}"),
            other => panic!("expected config error, got {other:?}"),
        }
    }

    #[test]
    fn duplicate_key_rejected() {
        let text = format!("{MINIMAL}model = oldroyd\n");
        assert!(matches!(parse_config(&text), Err(Error::Config(_))));
    }

    #[test]
    fn windows_parse_and_warn() {
        let text = format!("{MINIMAL}[fit]\nwindows = 1:5, 2:8\n");
        let cfg = parse_config(&text).unwrap();
        assert_eq!(cfg.fit_windows, vec![(1.0, 5.0), (2.0, 8.0)]);
        // L = 50: t_star = (50/2pi)^2 ~ 63, 0.3 t* ~ 19; capped further by t_end = 10.
        let warnings = cfg.warnings();
        assert!(!warnings.is_empty() || cfg.t_end >= 8.0);

        let bad = format!("{MINIMAL}[fit]\nwindows = 5:1\n");
        assert!(matches!(parse_config(&bad), Err(Error::Config(_))));
    }

    #[test]
    fn bad_switch_named() {
        let text = format!("{MINIMAL}[run]\nnonlinear = yes\n");
        match parse_config(&text) {
            Err(Error::Config(msg)) => assert!(msg.contains("run.nonlinear"), "{msg}"),
            other => panic!("expected config error, got {other:?}"),
        }
    }
}
