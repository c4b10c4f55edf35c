use crate::error::{Error, Result};
use clap::parser::ValueSource;
use clap::{Arg, ArgMatches, Command};
use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

/// One accepted option: `--name <value>` on the command line or
/// `name = value` in a config file.
#[derive(Debug, Clone, Copy)]
pub struct KeySpec {
    pub name: &'static str,
    pub default: &'static str,
    pub help: &'static str,
}

const fn key(name: &'static str, default: &'static str, help: &'static str) -> KeySpec {
    KeySpec {
        name,
        default,
        help,
    }
}

pub const COMMANDS: [&str; 6] = [
    "evolve",
    "scan-ratio",
    "kernel-decay",
    "a2-scan",
    "lp-check",
    "report",
];

const COMMON: &[KeySpec] = &[
    key("output", "morawetz-out", "output directory"),
    key("seed", "0", "seed for any randomized input"),
];

const GRID: &[KeySpec] = &[
    key("n", "2", "spatial dimension"),
    key("points", "64", "grid points per axis (power of two)"),
    key(
        "half-width",
        "16",
        "half-width L of the periodic box [-L, L)^n",
    ),
    key("time-samples", "33", "number of time samples in [-T, T]"),
    key("horizon", "2", "time horizon T"),
];

const MATERIAL: &[KeySpec] = &[
    key("lame-lambda", "1", "Lamé parameter lambda"),
    key("mu", "1", "Lamé parameter mu (shear modulus)"),
];

const DATA: &[KeySpec] = &[
    key("family", "gaussian", "gaussian | modulated | dipole"),
    key("width", "1", "Gaussian width"),
    key("level", "0", "carrier level k of the modulated family"),
    key("shape", "x", "x | y | z | scalar | solenoidal | potential"),
    key("velocity", "zero", "initial velocity: zero | matched"),
];

const QUADRATURE: &[KeySpec] = &[
    key("refinement", "4", "singular-cell refinement"),
    key("tolerance", "1e-10", "singular-cell quadrature tolerance"),
];

const REGION: &[KeySpec] = &[
    key("weight", "spatial", "spatial | spacetime"),
    key("alpha", "1", "weight exponent"),
    key("s", "0", "Sobolev index"),
];

/// Options accepted by `command`, in help order.
pub fn keys(command: &str) -> Vec<KeySpec> {
    let mut out: Vec<KeySpec> = COMMON.to_vec();
    match command {
        "evolve" => {
            out.extend_from_slice(GRID);
            out.extend_from_slice(MATERIAL);
            out.extend_from_slice(DATA);
        }
        "scan-ratio" => {
            out.extend_from_slice(GRID);
            out.extend_from_slice(MATERIAL);
            out.extend_from_slice(DATA);
            out.extend_from_slice(QUADRATURE);
            out.extend_from_slice(REGION);
            out.push(key("lambdas", "1", "comma-separated dilations"));
            out.push(key("mode", "elastic", "elastic | scalar"));
            out.push(key("speed", "1", "wave speed in scalar mode"));
        }
        "kernel-decay" => {
            out.push(key("n", "2", "spatial dimension (2 or 3)"));
            out.push(key("k", "0", "frequency level"));
            out.push(key("regime", "oncone", "oncone | offcone"));
            out.push(key("tau", "0", "time offset for the off-cone regime"));
            out.push(key("dmin", "10", "smallest distance"));
            out.push(key("dmax", "1000", "largest distance"));
            out.push(key("count", "13", "number of log-spaced distances"));
        }
        "a2-scan" => {
            out.push(key(
                "n-total",
                "3",
                "dimension of the space the weight lives on",
            ));
            out.push(key("alphas", "0,0.9,1.8,2.7", "comma-separated exponents"));
            out.push(key("sides", "0.5,1,2,4", "comma-separated cube sides"));
            out.push(key(
                "offsets",
                "0.5,1,2,4",
                "comma-separated center offsets, in sides",
            ));
        }
        "lp-check" => {
            out.push(key("lo", "-10", "log2 of the smallest radius checked"));
            out.push(key("hi", "10", "log2 of the largest radius checked"));
            out.push(key("samples", "2001", "radii checked in [2^lo, 2^hi]"));
            out.push(key("n", "2", "dimension of the random test field"));
            out.push(key(
                "points",
                "32",
                "grid points per axis for the random test field",
            ));
        }
        "report" => {
            out.extend_from_slice(GRID);
            out.extend_from_slice(MATERIAL);
            out.extend_from_slice(QUADRATURE);
            out.extend_from_slice(&REGION[1..]);
            out.push(key("levels", "0,1,2", "comma-separated frequency levels"));
            out.push(key("probes", "4", "probes per level"));
            out.push(key("probe-width", "2", "width of the level-0 probe"));
            out.push(key("scaling", "rescaled", "rescaled | fixed"));
        }
        _ => {}
    }
    out
}

fn about(command: &str) -> &'static str {
    match command {
        "evolve" => "evolve Cauchy data and tabulate energy and norms over time",
        "scan-ratio" => "weighted ratio and scale-covariance fit over a data family",
        "kernel-decay" => "oscillatory kernel decay fit on or off the light cone",
        "a2-scan" => "cube integrals of |z|^-alpha against their side-length bound",
        "lp-check" => "Littlewood-Paley partition of unity and projector checks",
        "report" => "region classification, frequency scan and decomposition summary",
        _ => "",
    }
}

pub fn command_line() -> Command {
    let mut app = Command::new("morawetz-lab")
        .version(env!("CARGO_PKG_VERSION"))
        .about("Elastic wave solver and weighted space-time estimate experiments")
        .subcommand_required(true);
    for name in COMMANDS {
        let mut sub = Command::new(name).about(about(name)).arg(
            Arg::new("config")
                .long("config")
                .value_name("FILE")
                .help("read `key = value` lines from FILE; flags override it"),
        );
        for k in keys(name) {
            sub = sub.arg(
                Arg::new(k.name)
                    .long(k.name)
                    .value_name("VALUE")
                    .allow_negative_numbers(true)
                    .help(format!("{} [default: {}]", k.help, k.default)),
            );
        }
        app = app.subcommand(sub);
    }
    app
}

/// A fully resolved invocation: every accepted key has a value.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: String,
    pub options: BTreeMap<String, String>,
    pub output: PathBuf,
    pub seed: u64,
}

/// Parses `key = value` lines; `#` starts a comment.
pub fn parse_config_text(text: &str) -> Result<BTreeMap<String, String>> {
    let mut out = BTreeMap::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line.split_once('=').ok_or_else(|| {
            Error::Config(format!(
                "config line {}: expected `key = value`, got `{line}`",
                lineno + 1
            ))
        })?;
        let (k, v) = (k.trim(), v.trim());
        if k.is_empty() {
            return Err(Error::Config(format!(
                "config line {}: empty key",
                lineno + 1
            )));
        }
        if out.insert(k.to_string(), v.to_string()).is_some() {
            return Err(Error::Config(format!("config key `{k}` given twice")));
        }
    }
    Ok(out)
}

impl RunConfig {
    /// Merges defaults, the optional config file and command-line flags, in
    /// increasing precedence. Keys the command does not accept are rejected.
    pub fn from_matches(command: &str, m: &ArgMatches) -> Result<Self> {
        let specs = keys(command);
        let mut file = match m.get_one::<String>("config") {
            Some(path) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| Error::Config(format!("cannot read config file `{path}`: {e}")))?;
                parse_config_text(&text)?
            }
            None => BTreeMap::new(),
        };
        for k in file.keys() {
            if !specs.iter().any(|s| s.name == k) {
                return Err(Error::Config(format!(
                    "unknown key `{k}` for command {command}"
                )));
            }
        }
        let mut options = BTreeMap::new();
        for s in &specs {
            let flag = (m.value_source(s.name) == Some(ValueSource::CommandLine))
                .then(|| m.get_one::<String>(s.name).cloned())
                .flatten();
            let value = flag
                .or_else(|| file.remove(s.name))
                .unwrap_or_else(|| s.default.to_string());
            options.insert(s.name.to_string(), value);
        }
        let seed = options["seed"].parse().map_err(|_| {
            Error::Config(format!(
                "key `seed`: expected a nonnegative integer, got `{}`",
                options["seed"]
            ))
        })?;
        Ok(RunConfig {
            command: command.to_string(),
            output: PathBuf::from(&options["output"]),
            options,
            seed,
        })
    }

    pub fn output_dir(&self) -> &Path {
        &self.output
    }

    fn raw(&self, key: &str) -> Result<&str> {
        self.options.get(key).map(String::as_str).ok_or_else(|| {
            Error::Config(format!("key `{key}` is not accepted by {}", self.command))
        })
    }

    fn parse<T: std::str::FromStr>(&self, key: &str, what: &str) -> Result<T> {
        let v = self.raw(key)?;
        v.parse()
            .map_err(|_| Error::Config(format!("key `{key}`: expected {what}, got `{v}`")))
    }

    pub fn f64(&self, key: &str) -> Result<f64> {
        let v: f64 = self.parse(key, "a number")?;
        if !v.is_finite() {
            return Err(Error::Config(format!("key `{key}`: value must be finite")));
        }
        Ok(v)
    }

    pub fn usize(&self, key: &str) -> Result<usize> {
        self.parse(key, "a nonnegative integer")
    }

    pub fn i32(&self, key: &str) -> Result<i32> {
        self.parse(key, "an integer")
    }

    pub fn f64_list(&self, key: &str) -> Result<Vec<f64>> {
        let v = self.raw(key)?;
        v.split(',')
            .map(|p| {
                p.trim()
                    .parse::<f64>()
                    .ok()
                    .filter(|x| x.is_finite())
                    .ok_or_else(|| {
                        Error::Config(format!("key `{key}`: `{}` is not a number", p.trim()))
                    })
            })
            .collect()
    }

    pub fn i32_list(&self, key: &str) -> Result<Vec<i32>> {
        let v = self.raw(key)?;
        v.split(',')
            .map(|p| {
                p.trim().parse::<i32>().map_err(|_| {
                    Error::Config(format!("key `{key}`: `{}` is not an integer", p.trim()))
                })
            })
            .collect()
    }

    /// The value of `key`, which must be one of `allowed`.
    pub fn choice(&self, key: &str, allowed: &[&str]) -> Result<String> {
        let v = self.raw(key)?;
        if allowed.contains(&v) {
            Ok(v.to_string())
        } else {
            Err(Error::Config(format!(
                "key `{key}`: `{v}` is not one of {}",
                allowed.join(", ")
            )))
        }
    }
}
