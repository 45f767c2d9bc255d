//! TOML run and sweep configurations.
//!
//! A document is parsed into span-carrying raw values first so that every
//! invariant violation can point at the offending line.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};
use std::fmt;
use std::path::PathBuf;

use collsync::collision::{InitialStateSpec, ModelParams, Strategy};
use collsync::observables::Axis;
use collsync::sweep::{SweepAxis, SweepParam, SweepSpec};
use collsync::sync::WindowSpec;
use log::info;
use serde::{Deserialize, Serialize};
use toml::Spanned;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ConfigError {
    #[error("{0}")]
    Syntax(String),
    #[error("config key `{key}`{}: {message}", line.map(|l| format!(" (line {l})")).unwrap_or_default())]
    Invalid { key: String, line: Option<usize>, message: String },
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub params: ModelParams,
    pub init: InitialStateSpec,
    pub n_collisions: usize,
    pub window: WindowSpec,
    pub observable: Axis,
    pub output: PathBuf,
    /// `(T₁, T₂)` pairs for the thermal scan.
    pub temperatures: Option<Vec<(f64, f64)>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub run: RunConfig,
    pub axis1: SweepAxis,
    pub axis2: SweepAxis,
    pub check_seed: u64,
}

impl SweepConfig {
    pub fn spec(&self) -> SweepSpec {
        SweepSpec {
            axis1: self.axis1,
            axis2: self.axis2,
            base: self.run.params,
            init: self.run.init,
            n_max: self.run.n_collisions,
            window: self.run.window,
            observable: self.run.observable,
            check_seed: self.check_seed,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Config {
    Run(RunConfig),
    Sweep(SweepConfig),
}

impl Config {
    pub fn run(&self) -> &RunConfig {
        match self {
            Config::Run(r) => r,
            Config::Sweep(s) => &s.run,
        }
    }

    /// Canonical document: every key explicit, `gamma` in radians.
    pub fn to_toml(&self) -> String {
        let run = self.run();
        let p = &run.params;
        let axis = |a: &SweepAxis| DocAxis { name: a.param.as_str().into(), min: a.min, max: a.max, count: a.count };
        let (axis1, axis2, check_seed) = match self {
            Config::Run(_) => (None, None, None),
            Config::Sweep(s) => (Some(axis(&s.axis1)), Some(axis(&s.axis2)), Some(s.check_seed)),
        };
        let doc = Doc {
            g_se: p.g_se,
            g_ss: p.g_ss,
            omega1: p.omega1,
            omega2: p.omega2,
            dt_s: p.dt_s,
            gamma: p.gamma,
            temp1: p.temp1,
            temp2: p.temp2,
            strategy: p.strategy.as_str().into(),
            theta1: run.init.theta1,
            phi1: run.init.phi1,
            theta2: run.init.theta2,
            phi2: run.init.phi2,
            n_collisions: run.n_collisions,
            window_width: run.window.width(),
            window_overlap: run.window.overlap(),
            observable: run.observable.as_str().into(),
            output: run.output.to_string_lossy().into_owned(),
            temperatures: run.temperatures.as_ref().map(|t| t.iter().map(|&(a, b)| [a, b]).collect()),
            check_seed,
            axis1,
            axis2,
        };
        toml::to_string(&doc).expect("config document serializes")
    }
}

#[derive(Serialize)]
struct Doc {
    g_se: f64,
    g_ss: f64,
    omega1: f64,
    omega2: f64,
    dt_s: f64,
    gamma: f64,
    temp1: f64,
    temp2: f64,
    strategy: String,
    theta1: f64,
    phi1: f64,
    theta2: f64,
    phi2: f64,
    n_collisions: usize,
    window_width: usize,
    window_overlap: usize,
    observable: String,
    output: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    temperatures: Option<Vec<[f64; 2]>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    check_seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    axis1: Option<DocAxis>,
    #[serde(skip_serializing_if = "Option::is_none")]
    axis2: Option<DocAxis>,
}

#[derive(Serialize)]
struct DocAxis {
    name: String,
    min: f64,
    max: f64,
    count: usize,
}

type Field<T> = Option<Spanned<T>>;

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct Raw {
    g_se: Field<f64>,
    g_ss: Field<f64>,
    omega1: Field<f64>,
    omega2: Field<f64>,
    dt_s: Field<f64>,
    gamma: Field<f64>,
    gamma_frac: Field<f64>,
    temp1: Field<f64>,
    temp2: Field<f64>,
    strategy: Field<String>,
    theta1: Field<f64>,
    phi1: Field<f64>,
    theta2: Field<f64>,
    phi2: Field<f64>,
    n_collisions: Field<usize>,
    window_width: Field<usize>,
    window_overlap: Field<usize>,
    observable: Field<String>,
    output: Field<String>,
    temperatures: Field<Vec<[f64; 2]>>,
    check_seed: Field<u64>,
    axis1: Field<RawAxis>,
    axis2: Field<RawAxis>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawAxis {
    name: Spanned<String>,
    min: Spanned<f64>,
    max: Spanned<f64>,
    count: Spanned<usize>,
}

struct Ctx<'a> {
    text: &'a str,
}

impl Ctx<'_> {
    fn line<T>(&self, s: &Spanned<T>) -> usize {
        let start = s.span().start.min(self.text.len());
        self.text[..start].matches('\n').count() + 1
    }

    fn err<T>(&self, key: &str, at: Option<&Spanned<T>>, message: impl fmt::Display) -> ConfigError {
        ConfigError::Invalid { key: key.into(), line: at.map(|s| self.line(s)), message: message.to_string() }
    }

    fn required<T: Clone>(&self, key: &str, f: &Field<T>) -> Result<T, ConfigError> {
        f.as_ref().map(|s| s.get_ref().clone()).ok_or_else(|| self.err::<T>(key, None, "required key is missing"))
    }

    fn defaulted<T: Clone + fmt::Debug>(&self, key: &str, f: &Field<T>, default: T) -> T {
        match f {
            Some(s) => s.get_ref().clone(),
            None => {
                info!("config: `{key}` not set, using default {default:?}");
                default
            }
        }
    }

    fn finite(&self, key: &str, f: &Field<f64>, v: f64) -> Result<f64, ConfigError> {
        if v.is_finite() {
            Ok(v)
        } else {
            Err(self.err(key, f.as_ref(), "value must be finite"))
        }
    }
}

pub fn parse_config(text: &str) -> Result<Config, ConfigError> {
    let raw: Raw = toml::from_str(text).map_err(|e| ConfigError::Syntax(e.to_string()))?;
    let cx = Ctx { text };

    let real = |key: &str, f: &Field<f64>| -> Result<f64, ConfigError> {
        let v = cx.required(key, f)?;
        cx.finite(key, f, v)
    };
    let g_se = real("g_se", &raw.g_se)?;
    let g_ss = real("g_ss", &raw.g_ss)?;
    let omega1 = real("omega1", &raw.omega1)?;
    let omega2 = real("omega2", &raw.omega2)?;
    let dt_s = real("dt_s", &raw.dt_s)?;
    if dt_s <= 0.0 {
        return Err(cx.err("dt_s", raw.dt_s.as_ref(), format!("{dt_s} must be positive")));
    }

    let (gamma, gamma_key, gamma_field) = match (&raw.gamma, &raw.gamma_frac) {
        (Some(_), Some(frac)) => {
            return Err(cx.err("gamma_frac", Some(frac), "give either `gamma` or `gamma_frac`, not both"));
        }
        (Some(g), None) => (*g.get_ref(), "gamma", &raw.gamma),
        (None, Some(f)) => (*f.get_ref() * FRAC_PI_2, "gamma_frac", &raw.gamma_frac),
        (None, None) => return Err(cx.err::<f64>("gamma", None, "required key is missing (or give `gamma_frac`)")),
    };
    cx.finite(gamma_key, gamma_field, gamma)?;
    if !(0.0..=FRAC_PI_2).contains(&gamma) {
        return Err(cx.err(gamma_key, gamma_field.as_ref(), format!("gamma = {gamma} outside [0, pi/2]")));
    }

    let temperature = |key: &str, f: &Field<f64>| -> Result<f64, ConfigError> {
        let t = cx.finite(key, f, cx.defaulted(key, f, 0.0))?;
        if t < 0.0 {
            return Err(cx.err(key, f.as_ref(), format!("temperature {t} must be non-negative")));
        }
        Ok(t)
    };
    let temp1 = temperature("temp1", &raw.temp1)?;
    let temp2 = temperature("temp2", &raw.temp2)?;

    let strategy = match cx.defaulted("strategy", &raw.strategy, "keep".to_string()).as_str() {
        "keep" => Strategy::KeepCorrelations,
        "erase" => Strategy::EraseCorrelations,
        other => {
            return Err(cx.err("strategy", raw.strategy.as_ref(), format!("'{other}' is not one of \"keep\", \"erase\"")));
        }
    };
    let params = ModelParams { g_se, g_ss, omega1, omega2, dt_s, gamma, temp1, temp2, strategy };

    let d = InitialStateSpec::default();
    let angle = |key: &str, f: &Field<f64>, default: f64| cx.finite(key, f, cx.defaulted(key, f, default));
    let init = InitialStateSpec {
        theta1: angle("theta1", &raw.theta1, FRAC_PI_4)?,
        phi1: angle("phi1", &raw.phi1, d.phi1)?,
        theta2: angle("theta2", &raw.theta2, FRAC_PI_4)?,
        phi2: angle("phi2", &raw.phi2, d.phi2)?,
    };

    let n_collisions = cx.required("n_collisions", &raw.n_collisions)?;
    let width = cx.required("window_width", &raw.window_width)?;
    let overlap = cx.required("window_overlap", &raw.window_overlap)?;
    if width < 2 {
        return Err(cx.err("window_width", raw.window_width.as_ref(), format!("{width} must be at least 2")));
    }
    if overlap >= width {
        return Err(cx.err(
            "window_overlap",
            raw.window_overlap.as_ref(),
            format!("{overlap} must be smaller than window_width = {width}"),
        ));
    }
    let window = WindowSpec::new(width, overlap).map_err(|e| cx.err("window_width", raw.window_width.as_ref(), e))?;
    if n_collisions < width {
        return Err(cx.err(
            "n_collisions",
            raw.n_collisions.as_ref(),
            format!("{n_collisions} is shorter than one window of {width}"),
        ));
    }

    let observable = match cx.defaulted("observable", &raw.observable, "x".to_string()).as_str() {
        "x" => Axis::X,
        "y" => Axis::Y,
        "z" => Axis::Z,
        other => {
            return Err(cx.err("observable", raw.observable.as_ref(), format!("'{other}' is not one of \"x\", \"y\", \"z\"")));
        }
    };
    let output = PathBuf::from(cx.defaulted("output", &raw.output, ".".to_string()));

    let temperatures = match &raw.temperatures {
        None => None,
        Some(s) => {
            let pairs: Vec<(f64, f64)> = s.get_ref().iter().map(|&[a, b]| (a, b)).collect();
            if pairs.is_empty() {
                return Err(cx.err("temperatures", Some(s), "list is empty"));
            }
            if pairs.iter().any(|&(a, b)| !(a.is_finite() && b.is_finite() && a >= 0.0 && b >= 0.0)) {
                return Err(cx.err("temperatures", Some(s), "temperatures must be finite and non-negative"));
            }
            Some(pairs)
        }
    };

    let run = RunConfig { params, init, n_collisions, window, observable, output, temperatures };

    match (&raw.axis1, &raw.axis2) {
        (None, None) => {
            if let Some(s) = &raw.check_seed {
                return Err(cx.err("check_seed", Some(s), "only meaningful for sweep configurations"));
            }
            Ok(Config::Run(run))
        }
        (Some(a1), Some(a2)) => {
            let axis1 = parse_axis(&cx, "axis1", a1.get_ref(), &run.params)?;
            let axis2 = parse_axis(&cx, "axis2", a2.get_ref(), &run.params)?;
            if axis1.param == axis2.param {
                return Err(cx.err("axis2.name", Some(&a2.get_ref().name), "both axes vary the same parameter"));
            }
            let check_seed = cx.defaulted("check_seed", &raw.check_seed, 0);
            let sweep = SweepConfig { run, axis1, axis2, check_seed };
            sweep.spec().validate().map_err(|e| cx.err("axis1", Some(a1), e))?;
            Ok(Config::Sweep(sweep))
        }
        (Some(_), None) => Err(cx.err::<f64>("axis2", None, "a sweep needs both [axis1] and [axis2]")),
        (None, Some(_)) => Err(cx.err::<f64>("axis1", None, "a sweep needs both [axis1] and [axis2]")),
    }
}

fn parse_axis(cx: &Ctx, table: &str, raw: &RawAxis, base: &ModelParams) -> Result<SweepAxis, ConfigError> {
    let key = |k: &str| format!("{table}.{k}");
    let param = SweepParam::parse(raw.name.get_ref()).map_err(|e| cx.err(&key("name"), Some(&raw.name), e))?;
    let (min, max, count) = (*raw.min.get_ref(), *raw.max.get_ref(), *raw.count.get_ref());
    for (k, s) in [("min", &raw.min), ("max", &raw.max)] {
        if !s.get_ref().is_finite() {
            return Err(cx.err(&key(k), Some(s), "value must be finite"));
        }
    }
    if count < 2 {
        return Err(cx.err(&key("count"), Some(&raw.count), format!("{count} must be at least 2")));
    }
    if min > max {
        return Err(cx.err(&key("max"), Some(&raw.max), format!("max {max} is below min {min}")));
    }
    for (k, s) in [("min", &raw.min), ("max", &raw.max)] {
        let v = *s.get_ref();
        let bad = match param {
            SweepParam::Gamma => !(0.0..=FRAC_PI_2).contains(&v),
            SweepParam::OmegaRatio => base.omega1 * v < 0.0,
            SweepParam::GSs => false,
        };
        if bad {
            return Err(cx.err(&key(k), Some(s), format!("{v} is outside the range allowed for {param}")));
        }
    }
    SweepAxis::new(param, min, max, count).map_err(|e| cx.err(table, Some(&raw.name), e))
}
