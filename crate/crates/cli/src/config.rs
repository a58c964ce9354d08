//! Run configuration: an INI-style text file with `[section]` headers named
//! after the engine area they feed and flat `key = value` lines. Unknown
//! sections or keys are rejected so a typo cannot silently fall back to a
//! default; command-line flags override file values where both exist.

use num_complex::Complex64;
use telsim::protocol::BellIndex;

/// Which family of conditional-evolution models a run draws from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ModelKind {
    /// Unstructured seeded couplings.
    Random,
    /// Seeded couplings sharing one eigenbasis.
    Commuting,
    /// Truncated bosonic register with a thermal environment.
    Boson,
}

/// `[scenario]`: a free-form label echoed as a footer comment in CSV
/// outputs, to tag golden files.
#[derive(Clone, Debug, Default)]
pub struct ScenarioSection {
    pub name: Option<String>,
}

/// `[model]`: the dephasing model and its seeded ingredients.
#[derive(Clone, Debug, Default)]
pub struct ModelSection {
    pub kind: Option<ModelKind>,
    pub d: Option<usize>,
    pub env_dim: Option<usize>,
    pub seed: Option<u64>,
    pub omega: Option<f64>,
    pub coupling: Option<f64>,
    pub t_bar: Option<f64>,
    pub n_max: Option<usize>,
    pub beta: Option<f64>,
}

/// `[protocol]`: the teleported state and the two measurement steps.
#[derive(Clone, Debug, Default)]
pub struct ProtocolSection {
    pub psi: Option<Vec<Complex64>>,
    /// Qubit shorthand for `psi`: amplitudes `(alpha, sqrt(1 - alpha^2))`.
    pub alpha: Option<f64>,
    pub tau1: Option<f64>,
    pub tau2: Option<f64>,
    pub resource: Option<BellIndex>,
    pub samples: Option<u64>,
}

/// `[spinboson]`: the continuum bath behind the benchmark curves.
#[derive(Clone, Debug, Default)]
pub struct SpinBosonSection {
    pub s: Option<f64>,
    pub lambda: Option<f64>,
    pub temperature: Option<f64>,
    pub t_bar: Option<f64>,
    pub omega_max_factor: Option<f64>,
    pub quad_points: Option<usize>,
    pub amp_sq: Option<f64>,
}

/// `[grid]`: evaluation grids for the scanning commands.
#[derive(Clone, Debug, Default)]
pub struct GridSection {
    pub tau_min: Option<f64>,
    pub tau_max: Option<f64>,
    pub tau_count: Option<usize>,
    pub delta_min: Option<f64>,
    pub delta_max: Option<f64>,
    pub delta_count: Option<usize>,
    pub dims: Option<Vec<usize>>,
}

/// `[output]`: where results go and how chatty the run is.
#[derive(Clone, Debug, Default)]
pub struct OutputSection {
    pub out: Option<String>,
    pub quiet: Option<bool>,
}

#[derive(Clone, Debug, Default)]
pub struct ScenarioConfig {
    pub scenario: ScenarioSection,
    pub model: ModelSection,
    pub protocol: ProtocolSection,
    pub spinboson: SpinBosonSection,
    pub grid: GridSection,
    pub output: OutputSection,
}

impl ScenarioConfig {
    /// Parse a configuration file, rejecting anything outside the schema.
    pub fn parse(text: &str) -> Result<Self, String> {
        let mut config = ScenarioConfig::default();
        let mut section = String::new();
        for (lineno, raw_line) in text.lines().enumerate() {
            let line = strip_comment(raw_line).trim();
            if line.is_empty() {
                continue;
            }
            let describe = |msg: String| format!("config line {}: {msg}", lineno + 1);
            if let Some(name) = line.strip_prefix('[') {
                let name = name
                    .strip_suffix(']')
                    .ok_or_else(|| describe("unterminated section header".into()))?
                    .trim();
                if !KNOWN_SECTIONS.contains(&name) {
                    return Err(describe(format!(
                        "unknown section `{name}` (expected one of {})",
                        KNOWN_SECTIONS.join(", ")
                    )));
                }
                section = name.to_string();
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| describe("expected `key = value`".into()))?;
            let key = key.trim();
            let value = value.trim();
            if section.is_empty() {
                return Err(describe(format!(
                    "key `{key}` appears before any [section] header"
                )));
            }
            config
                .assign(&section, key, value)
                .map_err(|msg| describe(format!("[{section}] {key}: {msg}")))?;
        }
        Ok(config)
    }

    fn assign(&mut self, section: &str, key: &str, value: &str) -> Result<(), String> {
        match section {
            "scenario" => match key {
                "name" => self.scenario.name = Some(value.to_string()),
                _ => return Err(unknown_key(key)),
            },
            "model" => match key {
                "kind" => self.model.kind = Some(parse_kind(value)?),
                "d" => self.model.d = Some(parse_number(value)?),
                "env_dim" => self.model.env_dim = Some(parse_number(value)?),
                "seed" => self.model.seed = Some(parse_number(value)?),
                "omega" => self.model.omega = Some(parse_number(value)?),
                "coupling" => self.model.coupling = Some(parse_number(value)?),
                "t_bar" => self.model.t_bar = Some(parse_number(value)?),
                "n_max" => self.model.n_max = Some(parse_number(value)?),
                "beta" => self.model.beta = Some(parse_number(value)?),
                _ => return Err(unknown_key(key)),
            },
            "protocol" => match key {
                "psi" => self.protocol.psi = Some(parse_amplitudes(value)?),
                "alpha" => self.protocol.alpha = Some(parse_number(value)?),
                "tau1" => self.protocol.tau1 = Some(parse_number(value)?),
                "tau2" => self.protocol.tau2 = Some(parse_number(value)?),
                "resource" => self.protocol.resource = Some(parse_resource(value)?),
                "samples" => self.protocol.samples = Some(parse_number(value)?),
                _ => return Err(unknown_key(key)),
            },
            "spinboson" => match key {
                "s" => self.spinboson.s = Some(parse_number(value)?),
                "lambda" => self.spinboson.lambda = Some(parse_number(value)?),
                "temperature" => self.spinboson.temperature = Some(parse_number(value)?),
                "t_bar" => self.spinboson.t_bar = Some(parse_number(value)?),
                "omega_max_factor" => {
                    self.spinboson.omega_max_factor = Some(parse_number(value)?)
                }
                "quad_points" => self.spinboson.quad_points = Some(parse_number(value)?),
                "amp_sq" => self.spinboson.amp_sq = Some(parse_number(value)?),
                _ => return Err(unknown_key(key)),
            },
            "grid" => match key {
                "tau_min" => self.grid.tau_min = Some(parse_number(value)?),
                "tau_max" => self.grid.tau_max = Some(parse_number(value)?),
                "tau_count" => self.grid.tau_count = Some(parse_number(value)?),
                "delta_min" => self.grid.delta_min = Some(parse_number(value)?),
                "delta_max" => self.grid.delta_max = Some(parse_number(value)?),
                "delta_count" => self.grid.delta_count = Some(parse_number(value)?),
                "dims" => self.grid.dims = Some(parse_dims(value)?),
                _ => return Err(unknown_key(key)),
            },
            "output" => match key {
                "out" => self.output.out = Some(value.to_string()),
                "quiet" => self.output.quiet = Some(parse_bool(value)?),
                _ => return Err(unknown_key(key)),
            },
            _ => unreachable!("section names are validated at the header"),
        }
        Ok(())
    }
}

const KNOWN_SECTIONS: [&str; 6] = [
    "scenario",
    "model",
    "protocol",
    "spinboson",
    "grid",
    "output",
];

fn unknown_key(key: &str) -> String {
    format!("unknown key `{key}`")
}

fn strip_comment(line: &str) -> &str {
    match line.find(['#', ';']) {
        Some(pos) => &line[..pos],
        None => line,
    }
}

fn parse_number<T: std::str::FromStr>(value: &str) -> Result<T, String>
where
    T::Err: std::fmt::Display,
{
    value
        .parse::<T>()
        .map_err(|e| format!("cannot parse `{value}`: {e}"))
}

fn parse_bool(value: &str) -> Result<bool, String> {
    match value {
        "true" | "1" | "yes" => Ok(true),
        "false" | "0" | "no" => Ok(false),
        _ => Err(format!("cannot parse `{value}` as a boolean")),
    }
}

fn parse_kind(value: &str) -> Result<ModelKind, String> {
    match value {
        "random" => Ok(ModelKind::Random),
        "commuting" => Ok(ModelKind::Commuting),
        "boson" => Ok(ModelKind::Boson),
        _ => Err(format!(
            "unknown model kind `{value}` (expected random, commuting, or boson)"
        )),
    }
}

fn parse_resource(value: &str) -> Result<BellIndex, String> {
    match value {
        "phi_plus" => Ok(BellIndex { n: 0, m: 0 }),
        "phi_minus" => Ok(BellIndex { n: 1, m: 0 }),
        "psi_plus" => Ok(BellIndex { n: 0, m: 1 }),
        "psi_minus" => Ok(BellIndex { n: 1, m: 1 }),
        _ => Err(format!(
            "unknown resource `{value}` (expected phi_plus, phi_minus, psi_plus, or psi_minus)"
        )),
    }
}

/// Comma-separated `re:im` amplitude pairs, e.g. `0.6:0,0.48:0.64`.
fn parse_amplitudes(value: &str) -> Result<Vec<Complex64>, String> {
    let mut amps = Vec::new();
    for part in value.split(',') {
        let (re, im) = part
            .trim()
            .split_once(':')
            .ok_or_else(|| format!("amplitude `{part}` is not of the form re:im"))?;
        amps.push(Complex64::new(
            parse_number(re.trim())?,
            parse_number(im.trim())?,
        ));
    }
    Ok(amps)
}

fn parse_dims(value: &str) -> Result<Vec<usize>, String> {
    let mut dims = Vec::new();
    for part in value.split(',') {
        let d: usize = parse_number(part.trim())?;
        if !(2..=8).contains(&d) {
            return Err(format!("carrier dimension {d} outside 2..=8"));
        }
        dims.push(d);
    }
    Ok(dims)
}
