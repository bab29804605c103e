//! Run configuration: a small sectioned key-value format. Unknown keys are
//! rejected with their full path; every constraint violation names the
//! offending key.

use std::collections::BTreeMap;

use snls_core::evolve::Integrator;

use crate::error::{CliError, Result};

#[derive(Debug, Clone, PartialEq)]
pub enum InitKind {
    Gaussian,
    Ring,
    Moser,
    File,
}

#[derive(Debug, Clone)]
pub struct InitConfig {
    pub kind: InitKind,
    pub amplitude: f64,
    pub center: (f64, f64),
    pub moser_param: u32,
    pub path: Option<String>,
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub grid_n: usize,
    pub half_width: f64,
    pub b: f64,
    pub init: InitConfig,
    pub dt: f64,
    pub t_final: f64,
    pub snapshot_stride: usize,
    pub integrator: Integrator,
    pub picard_iters: usize,
    /// localized-mass monitor radii (S, S')
    pub localized_mass: (f64, f64),
}

fn parse_sections(text: &str) -> Result<BTreeMap<String, BTreeMap<String, String>>> {
    let mut sections: BTreeMap<String, BTreeMap<String, String>> = BTreeMap::new();
    let mut current: Option<String> = None;
    for (lineno, raw) in text.lines().enumerate() {
        let line = match raw.find('#') {
            Some(pos) => &raw[..pos],
            None => raw,
        }
        .trim();
        if line.is_empty() {
            continue;
        }
        if line.starts_with('[') {
            let name = line
                .strip_prefix('[')
                .and_then(|s| s.strip_suffix(']'))
                .ok_or_else(|| {
                    CliError::Config(format!("line {}: malformed section header", lineno + 1))
                })?;
            sections.entry(name.to_string()).or_default();
            current = Some(name.to_string());
        } else if let Some((key, value)) = line.split_once('=') {
            let section = current.as_ref().ok_or_else(|| {
                CliError::Config(format!("line {}: key outside any section", lineno + 1))
            })?;
            sections
                .get_mut(section)
                .unwrap()
                .insert(key.trim().to_string(), value.trim().to_string());
        } else {
            return Err(CliError::Config(format!(
                "line {}: expected 'key = value', got '{line}'",
                lineno + 1
            )));
        }
    }
    Ok(sections)
}

struct Section<'a> {
    name: &'a str,
    entries: BTreeMap<String, String>,
}

impl<'a> Section<'a> {
    fn take(&mut self, key: &str) -> Option<String> {
        self.entries.remove(key)
    }

    fn required(&mut self, key: &str) -> Result<String> {
        self.take(key)
            .ok_or_else(|| CliError::Config(format!("[{}] missing key {key}", self.name)))
    }

    fn parse<T: std::str::FromStr>(&self, key: &str, raw: &str) -> Result<T> {
        raw.parse().map_err(|_| {
            CliError::Config(format!("invalid value for {}.{key}: '{raw}'", self.name))
        })
    }

    fn required_parsed<T: std::str::FromStr>(&mut self, key: &str) -> Result<T> {
        let raw = self.required(key)?;
        self.parse(key, &raw)
    }

    fn optional_parsed<T: std::str::FromStr>(&mut self, key: &str) -> Result<Option<T>> {
        match self.take(key) {
            Some(raw) => Ok(Some(self.parse(key, &raw)?)),
            None => Ok(None),
        }
    }

    fn finish(self) -> Result<()> {
        if let Some(key) = self.entries.keys().next() {
            return Err(CliError::Config(format!("unknown key {}.{key}", self.name)));
        }
        Ok(())
    }
}

/// Parse and validate a run configuration.
pub fn parse_config(text: &str) -> Result<RunConfig> {
    let mut sections = parse_sections(text)?;
    let known = ["grid", "phys", "init", "time", "integrator", "diagnostics"];
    if let Some(name) = sections.keys().find(|k| !known.contains(&k.as_str())) {
        return Err(CliError::Config(format!("unknown section [{name}]")));
    }

    let mut grid = Section {
        name: "grid",
        entries: sections.remove("grid").unwrap_or_default(),
    };
    let grid_n: usize = grid.required_parsed("n")?;
    let half_width: f64 = grid.required_parsed("half_width")?;
    grid.finish()?;
    if grid_n < 8 || !grid_n.is_power_of_two() {
        return Err(CliError::Config(format!(
            "grid.n must be a power of two >= 8, got {grid_n}"
        )));
    }
    if !(half_width > 0.0) {
        return Err(CliError::Config(format!(
            "grid.half_width must be positive, got {half_width}"
        )));
    }

    let mut phys = Section {
        name: "phys",
        entries: sections.remove("phys").unwrap_or_default(),
    };
    let b: f64 = phys.required_parsed("b")?;
    phys.finish()?;

    let mut init = Section {
        name: "init",
        entries: sections.remove("init").unwrap_or_default(),
    };
    let kind_raw = init.required("kind")?;
    let kind = match kind_raw.as_str() {
        "gaussian" => InitKind::Gaussian,
        "ring" => InitKind::Ring,
        "moser" => InitKind::Moser,
        "file" => InitKind::File,
        other => {
            return Err(CliError::Config(format!(
                "invalid value for init.kind: '{other}' (gaussian|ring|moser|file)"
            )))
        }
    };
    let amplitude: f64 = init.optional_parsed("amplitude")?.unwrap_or(1.0);
    let center = match init.take("center") {
        Some(raw) => {
            let parts: Vec<&str> = raw.split_whitespace().collect();
            if parts.len() != 2 {
                return Err(CliError::Config(format!(
                    "invalid value for init.center: '{raw}' (expected two floats)"
                )));
            }
            let x: f64 = init.parse("center", parts[0])?;
            let y: f64 = init.parse("center", parts[1])?;
            (x, y)
        }
        None => (0.0, 0.0),
    };
    let moser_param: u32 = init.optional_parsed("moser_param")?.unwrap_or(8);
    let path = init.take("path");
    init.finish()?;
    if kind == InitKind::File && path.is_none() {
        return Err(CliError::Config("[init] missing key path".into()));
    }
    if kind == InitKind::Moser && moser_param < 2 {
        return Err(CliError::Config(format!(
            "init.moser_param must be >= 2, got {moser_param}"
        )));
    }

    let mut time = Section {
        name: "time",
        entries: sections.remove("time").unwrap_or_default(),
    };
    let dt: f64 = time.required_parsed("dt")?;
    let t_final: f64 = time.required_parsed("t_final")?;
    let snapshot_stride: Option<usize> = time.optional_parsed("snapshot_stride")?;
    time.finish()?;
    if !(dt > 0.0) {
        return Err(CliError::Config(format!(
            "time.dt must be positive, got {dt}"
        )));
    }
    if !(t_final >= dt) {
        return Err(CliError::Config(format!(
            "time.t_final must be at least dt, got {t_final}"
        )));
    }
    let steps = (t_final / dt).round().max(1.0) as usize;
    let snapshot_stride = snapshot_stride.unwrap_or_else(|| (steps / 10).max(1));
    if snapshot_stride == 0 {
        return Err(CliError::Config(
            "time.snapshot_stride must be positive".into(),
        ));
    }

    let mut integ = Section {
        name: "integrator",
        entries: sections.remove("integrator").unwrap_or_default(),
    };
    let integrator = match integ.take("kind").as_deref() {
        None | Some("strang") => Integrator::Strang,
        Some("picard") => Integrator::Picard,
        Some(other) => {
            return Err(CliError::Config(format!(
                "invalid value for integrator.kind: '{other}' (strang|picard)"
            )))
        }
    };
    let picard_iters: usize = integ.optional_parsed("picard_iters")?.unwrap_or(6);
    integ.finish()?;
    if picard_iters < 2 {
        return Err(CliError::Config(format!(
            "integrator.picard_iters must be >= 2, got {picard_iters}"
        )));
    }

    let mut diag = Section {
        name: "diagnostics",
        entries: sections.remove("diagnostics").unwrap_or_default(),
    };
    let localized_mass = match diag.take("localized_mass") {
        Some(raw) => {
            let parts: Vec<&str> = raw.split_whitespace().collect();
            if parts.len() != 2 {
                return Err(CliError::Config(format!(
                    "invalid value for diagnostics.localized_mass: '{raw}' (expected S and S')"
                )));
            }
            let s: f64 = diag.parse("localized_mass", parts[0])?;
            let sp: f64 = diag.parse("localized_mass", parts[1])?;
            if !(s > 0.0 && sp > 0.0) {
                return Err(CliError::Config(
                    "diagnostics.localized_mass radii must be positive".into(),
                ));
            }
            (s, sp)
        }
        None => (2.0, 4.0),
    };
    diag.finish()?;

    // the evolution path demands the PDE exponent range
    if !(b > 0.0 && b < 1.0) {
        return Err(CliError::Config(format!(
            "phys.b out of PDE range (0,1): got {b}"
        )));
    }

    Ok(RunConfig {
        grid_n,
        half_width,
        b,
        init: InitConfig {
            kind,
            amplitude,
            center,
            moser_param,
            path,
        },
        dt,
        t_final,
        snapshot_stride,
        integrator,
        picard_iters,
        localized_mass,
    })
}
