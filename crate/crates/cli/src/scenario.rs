//! Scenario files: parsing, unit handling and validation.
//!
//! Scenarios are TOML. Every dimensional key carries its unit in the name
//! (`_m`, `_db`, `_w`); a quantity given in two units at once is rejected.
//! Powers and noise variances in dB are dBW. All values are converted to
//! linear units here and nowhere else.

use std::fmt;

use jamsec_core::montecarlo::{FadingSpec, LinkFading};
use jamsec_core::secrecy::{db_to_linear, Method, Metric, NetworkGeometry};
use serde::Serialize;
use toml::{Table, Value};

/// One violated constraint, located by a dotted field path.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Diagnostic {
    pub field: String,
    pub message: String,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.field, self.message)
    }
}

/// Parameter that a sweep axis or a curve family can vary.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Param {
    /// Per-antenna mean receiver SNR in dB; fixes the receiver noise level.
    SnrDb,
    RJeM,
    RSeM,
    RSrM,
    PSDb,
    PJDb,
    K,
    N,
}

impl Param {
    const ALL: [Param; 8] = [
        Param::SnrDb,
        Param::RJeM,
        Param::RSeM,
        Param::RSrM,
        Param::PSDb,
        Param::PJDb,
        Param::K,
        Param::N,
    ];
    /// Parameters allowed as the sweep axis.
    pub const AXES: [Param; 5] = [Param::SnrDb, Param::RJeM, Param::PSDb, Param::PJDb, Param::K];

    pub fn name(&self) -> &'static str {
        match self {
            Param::SnrDb => "snr_db",
            Param::RJeM => "r_je_m",
            Param::RSeM => "r_se_m",
            Param::RSrM => "r_sr_m",
            Param::PSDb => "p_s_db",
            Param::PJDb => "p_j_db",
            Param::K => "k",
            Param::N => "n",
        }
    }

    pub fn parse(s: &str) -> Option<Param> {
        Self::ALL.into_iter().find(|p| p.name() == s)
    }

    /// Describes why `v` is not a valid value of this parameter.
    pub fn check_value(&self, v: f64) -> Option<String> {
        match self {
            Param::K if !(v >= 0.0 && v.fract() == 0.0) => Some(format!("k must be a non-negative integer, got {v}")),
            Param::N if !(v >= 1.0 && v.fract() == 0.0) => Some(format!("n must be an integer >= 1, got {v}")),
            Param::RJeM | Param::RSeM | Param::RSrM if !(v > 0.0) => Some(format!("distance must be > 0, got {v}")),
            _ if !v.is_finite() => Some(format!("value must be finite, got {v}")),
            _ => None,
        }
    }
}

/// Link state at one evaluation point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointState {
    pub geometry: NetworkGeometry,
}

impl PointState {
    /// Applies `param = value`. A receiver SNR is realised by rescaling the
    /// receiver noise variance, so it must be applied after powers and distances.
    pub fn apply(&mut self, param: Param, value: f64) {
        let g = &mut self.geometry;
        match param {
            Param::SnrDb => {
                let signal = g.p_s * g.r_sr.powf(-g.delta);
                g.noise_var_r = signal / db_to_linear(value);
            }
            Param::RJeM => g.r_je = value,
            Param::RSeM => g.r_se = value,
            Param::RSrM => g.r_sr = value,
            Param::PSDb => g.p_s = db_to_linear(value),
            Param::PJDb => g.p_j = db_to_linear(value),
            Param::K => g.k = value as u32,
            Param::N => g.n = value as u32,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReceiverCase {
    pub label: String,
    pub link: LinkFading,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Sweep {
    pub axis: Param,
    pub grid: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Series {
    pub param: Param,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Scenario {
    pub name: String,
    pub description: String,
    pub seed: u64,
    pub trials: u64,
    pub methods: Vec<Method>,
    pub metrics: Vec<Metric>,
    pub thresholds_db: Vec<f64>,
    pub geometry: NetworkGeometry,
    pub receivers: Vec<ReceiverCase>,
    /// Per-antenna Gamma shape of the source-eavesdropper links.
    pub eve_m: u32,
    /// Per-antenna Gamma shape of the jammer-eavesdropper links.
    pub jammer_m: u32,
    pub sweep: Sweep,
    pub series: Option<Series>,
}

impl Scenario {
    /// Parses and validates scenario text, reporting every violation found.
    pub fn parse(text: &str) -> Result<Scenario, Vec<Diagnostic>> {
        let table: Table = match text.parse() {
            Ok(t) => t,
            Err(e) => {
                return Err(vec![Diagnostic {
                    field: "<syntax>".into(),
                    message: e.to_string().trim().replace('\n', " "),
                }])
            }
        };
        let mut r = Reader::default();
        let scenario = r.scenario(&table);
        match scenario {
            Some(s) if r.diags.is_empty() => Ok(s),
            _ => Err(r.diags),
        }
    }

    /// Points of the sweep, as link states, for one curve of the family.
    pub fn point(&self, series_value: Option<f64>, axis_value: f64) -> PointState {
        let mut st = PointState { geometry: self.geometry };
        let mut pending_snr = None;
        let mut set = |st: &mut PointState, p: Param, v: f64| {
            if p == Param::SnrDb {
                pending_snr = Some(v);
            } else {
                st.apply(p, v);
            }
        };
        if let (Some(series), Some(v)) = (&self.series, series_value) {
            set(&mut st, series.param, v);
        }
        set(&mut st, self.sweep.axis, axis_value);
        if let Some(v) = pending_snr {
            st.apply(Param::SnrDb, v);
        }
        st
    }

    pub fn eve_source(&self) -> LinkFading {
        LinkFading::single(FadingSpec::Gamma { m: self.eve_m as f64 })
    }

    pub fn jammer(&self) -> LinkFading {
        LinkFading::single(FadingSpec::Gamma { m: self.jammer_m as f64 })
    }
}

#[derive(Default)]
struct Reader {
    diags: Vec<Diagnostic>,
}

fn join(path: &str, key: &str) -> String {
    if path.is_empty() {
        key.to_string()
    } else {
        format!("{path}.{key}")
    }
}

impl Reader {
    fn err(&mut self, field: impl Into<String>, message: impl Into<String>) {
        self.diags.push(Diagnostic { field: field.into(), message: message.into() });
    }

    fn check_keys(&mut self, t: &Table, path: &str, allowed: &[&str]) {
        for key in t.keys() {
            if !allowed.contains(&key.as_str()) {
                self.err(join(path, key), format!("unknown key (expected one of: {})", allowed.join(", ")));
            }
        }
    }

    fn number(&mut self, v: &Value, field: &str) -> Option<f64> {
        match v {
            Value::Float(x) => Some(*x),
            Value::Integer(i) => Some(*i as f64),
            _ => {
                self.err(field, format!("expected a number, got {}", v.type_str()));
                None
            }
        }
    }

    fn opt_f64(&mut self, t: &Table, path: &str, key: &str) -> Option<f64> {
        let field = join(path, key);
        t.get(key).and_then(|v| self.number(v, &field))
    }

    fn req_f64(&mut self, t: &Table, path: &str, key: &str) -> Option<f64> {
        if !t.contains_key(key) {
            self.err(join(path, key), "missing required key");
            return None;
        }
        self.opt_f64(t, path, key)
    }

    fn positive(&mut self, t: &Table, path: &str, key: &str) -> Option<f64> {
        let v = self.req_f64(t, path, key)?;
        if v > 0.0 && v.is_finite() {
            Some(v)
        } else {
            self.err(join(path, key), format!("must be > 0, got {v}"));
            None
        }
    }

    fn count(&mut self, t: &Table, path: &str, key: &str, min: u32) -> Option<u32> {
        let field = join(path, key);
        match t.get(key) {
            None => {
                self.err(field, "missing required key");
                None
            }
            Some(Value::Integer(i)) if *i >= min as i64 && *i <= u32::MAX as i64 => Some(*i as u32),
            Some(v) => {
                self.err(field, format!("must be an integer >= {min}, got {v}"));
                None
            }
        }
    }

    fn string(&mut self, t: &Table, path: &str, key: &str) -> Option<String> {
        match t.get(key) {
            Some(Value::String(s)) => Some(s.clone()),
            Some(v) => {
                self.err(join(path, key), format!("expected a string, got {}", v.type_str()));
                None
            }
            None => {
                self.err(join(path, key), "missing required key");
                None
            }
        }
    }

    fn table<'a>(&mut self, t: &'a Table, path: &str, key: &str) -> Option<&'a Table> {
        match t.get(key) {
            Some(Value::Table(inner)) => Some(inner),
            Some(v) => {
                self.err(join(path, key), format!("expected a table, got {}", v.type_str()));
                None
            }
            None => {
                self.err(join(path, key), "missing required table");
                None
            }
        }
    }

    fn numbers(&mut self, v: &Value, field: &str) -> Option<Vec<f64>> {
        match v {
            Value::Array(items) => {
                let out: Vec<Option<f64>> =
                    items.iter().enumerate().map(|(i, x)| self.number(x, &format!("{field}[{i}]"))).collect();
                out.into_iter().collect()
            }
            _ => {
                self.err(field, format!("expected an array of numbers, got {}", v.type_str()));
                None
            }
        }
    }

    /// A quantity given either in dB (`<stem>_db`) or linearly (`<stem>_w`).
    fn power(&mut self, t: &Table, path: &str, stem: &str, allow_zero: bool) -> Option<f64> {
        let (db_key, w_key) = (format!("{stem}_db"), format!("{stem}_w"));
        let db = self.opt_f64(t, path, &db_key);
        let w = self.opt_f64(t, path, &w_key);
        match (t.contains_key(&db_key), t.contains_key(&w_key)) {
            (true, true) => {
                self.err(join(path, stem), format!("give either {db_key} or {w_key}, not both"));
                None
            }
            (false, false) => {
                self.err(join(path, stem), format!("missing {db_key} or {w_key}"));
                None
            }
            (true, false) => db.map(db_to_linear),
            (false, true) => {
                let w = w?;
                let ok = if allow_zero { w >= 0.0 } else { w > 0.0 };
                if ok && w.is_finite() {
                    Some(w)
                } else {
                    let bound = if allow_zero { ">= 0" } else { "> 0" };
                    self.err(join(path, &w_key), format!("must be {bound}, got {w}"));
                    None
                }
            }
        }
    }

    fn geometry(&mut self, t: &Table) -> Option<NetworkGeometry> {
        let path = "geometry";
        self.check_keys(
            t,
            path,
            &[
                "n_bs_antennas",
                "n_jammer_antennas",
                "r_sr_m",
                "r_se_m",
                "r_je_m",
                "delta",
                "p_s_db",
                "p_s_w",
                "p_j_db",
                "p_j_w",
                "noise_var_r_db",
                "noise_var_r_w",
                "noise_var_e_db",
                "noise_var_e_w",
            ],
        );
        let n = self.count(t, path, "n_bs_antennas", 1);
        let k = self.count(t, path, "n_jammer_antennas", 0);
        let r_sr = self.positive(t, path, "r_sr_m");
        let r_se = self.positive(t, path, "r_se_m");
        let r_je = self.positive(t, path, "r_je_m");
        let delta = self.req_f64(t, path, "delta");
        if let Some(d) = delta {
            if !(d >= 0.0 && d.is_finite()) {
                self.err("geometry.delta", format!("path-loss exponent must be >= 0, got {d}"));
            }
        }
        let p_s = self.power(t, path, "p_s", true);
        let p_j = self.power(t, path, "p_j", true);
        let noise_var_r = self.power(t, path, "noise_var_r", false);
        let noise_var_e = self.power(t, path, "noise_var_e", false);
        Some(NetworkGeometry {
            n: n?,
            k: k?,
            r_sr: r_sr?,
            r_se: r_se?,
            r_je: r_je?,
            delta: delta.filter(|d| *d >= 0.0)?,
            p_s: p_s?,
            p_j: p_j?,
            noise_var_r: noise_var_r?,
            noise_var_e: noise_var_e?,
        })
    }

    fn fading(&mut self, t: &Table, path: &str) -> Option<FadingSpec> {
        let model = self.string(t, path, "model")?;
        match model.as_str() {
            "dksm" => {
                self.check_keys(t, path, &["model", "c", "s", "mu", "kappa"]);
                let c = self.positive(t, path, "c");
                let mu = self.positive(t, path, "mu");
                let s = self.req_f64(t, path, "s");
                if let Some(s) = s {
                    if !(s > 1.0 && s.is_finite()) {
                        self.err(join(path, "s"), format!("s must be > 1 (the mean SNR is finite only for s > 1), got {s}"));
                    }
                }
                let kappa = self.req_f64(t, path, "kappa");
                if let Some(k) = kappa {
                    if !(k >= 0.0 && k.is_finite()) {
                        self.err(join(path, "kappa"), format!("must be >= 0, got {k}"));
                    }
                }
                Some(FadingSpec::Dksm { c: c?, s: s.filter(|s| *s > 1.0)?, mu: mu?, kappa: kappa.filter(|k| *k >= 0.0)? })
            }
            "gamma" => {
                self.check_keys(t, path, &["model", "m"]);
                Some(FadingSpec::Gamma { m: self.positive(t, path, "m")? })
            }
            "rician_shadowed" => {
                self.check_keys(t, path, &["model", "m", "xi", "sigma2"]);
                let m = self.positive(t, path, "m");
                let xi = self.positive(t, path, "xi");
                let sigma2 = self.positive(t, path, "sigma2");
                Some(FadingSpec::RicianShadowed { m: m?, xi: xi?, sigma2: sigma2? })
            }
            other => {
                self.err(
                    join(path, "model"),
                    format!("unknown fading model {other:?} (expected dksm, gamma or rician_shadowed)"),
                );
                None
            }
        }
    }

    fn receiver(&mut self, t: &Table, path: &str) -> Option<ReceiverCase> {
        self.check_keys(t, path, &["label", "p_los", "los", "nlos"]);
        let label = self.string(t, path, "label");
        let p_los = match t.get("p_los") {
            None => Some(1.0),
            Some(v) => self.number(v, &join(path, "p_los")),
        };
        if let Some(p) = p_los {
            if !(0.0..=1.0).contains(&p) {
                self.err(join(path, "p_los"), format!("must lie in [0, 1], got {p}"));
            }
        }
        let los_path = join(path, "los");
        let los = self.table(t, path, "los").and_then(|lt| self.fading(lt, &los_path));
        let nlos = match t.get("nlos") {
            None => {
                if p_los.is_some_and(|p| p < 1.0) {
                    self.err(join(path, "nlos"), "required when p_los < 1");
                }
                los
            }
            Some(_) => {
                let nlos_path = join(path, "nlos");
                self.table(t, path, "nlos").and_then(|nt| self.fading(nt, &nlos_path))
            }
        };
        Some(ReceiverCase {
            label: label?,
            link: LinkFading { p_los: p_los.filter(|p| (0.0..=1.0).contains(p))?, los: los?, nlos: nlos? },
        })
    }

    fn eve_shape(&mut self, t: &Table, path: &str) -> Option<u32> {
        let spec = self.fading(t, path)?;
        match spec {
            FadingSpec::Gamma { m } if m.fract() == 0.0 && m >= 1.0 => Some(m as u32),
            FadingSpec::Gamma { m } => {
                self.err(join(path, "m"), format!("eavesdropper-side Gamma shapes must be integers >= 1, got {m}"));
                None
            }
            _ => {
                self.err(join(path, "model"), "eavesdropper-side links must use the gamma model");
                None
            }
        }
    }

    fn grid(&mut self, v: &Value, field: &str) -> Option<Vec<f64>> {
        let grid = match v {
            Value::Table(t) => {
                self.check_keys(t, field, &["start", "stop", "count", "scale"]);
                let start = self.req_f64(t, field, "start");
                let stop = self.req_f64(t, field, "stop");
                let count = self.count(t, field, "count", 1);
                let scale = match t.get("scale") {
                    None => "linear".to_string(),
                    Some(_) => self.string(t, field, "scale")?,
                };
                let (start, stop, count) = (start?, stop?, count? as usize);
                match scale.as_str() {
                    "linear" => Some(linspace(start, stop, count)),
                    "log" if start > 0.0 && stop > 0.0 => {
                        Some(linspace(start.ln(), stop.ln(), count).into_iter().map(f64::exp).collect())
                    }
                    "log" => {
                        self.err(field, "log grids need start > 0 and stop > 0");
                        None
                    }
                    other => {
                        self.err(join(field, "scale"), format!("expected linear or log, got {other:?}"));
                        None
                    }
                }
            }
            _ => self.numbers(v, field),
        }?;
        if grid.is_empty() {
            self.err(field, "grid is empty");
            return None;
        }
        if let Some(i) = grid.windows(2).position(|w| !(w[1] > w[0])) {
            self.err(field, format!("grid must be strictly increasing ({} then {})", grid[i], grid[i + 1]));
            return None;
        }
        Some(grid)
    }

    fn param(&mut self, t: &Table, path: &str, key: &str, allowed: &[Param]) -> Option<Param> {
        let name = self.string(t, path, key)?;
        match Param::parse(&name).filter(|p| allowed.contains(p)) {
            Some(p) => Some(p),
            None => {
                let names: Vec<_> = allowed.iter().map(Param::name).collect();
                self.err(join(path, key), format!("{name:?} is not one of: {}", names.join(", ")));
                None
            }
        }
    }

    fn check_values(&mut self, param: Param, values: &[f64], field: &str) {
        for (i, &v) in values.iter().enumerate() {
            if let Some(msg) = param.check_value(v) {
                self.err(format!("{field}[{i}]"), msg);
            }
        }
    }

    fn scenario(&mut self, t: &Table) -> Option<Scenario> {
        self.check_keys(
            t,
            "",
            &[
                "name",
                "description",
                "seed",
                "trials",
                "methods",
                "metrics",
                "thresholds_db",
                "geometry",
                "receiver",
                "eve",
                "sweep",
                "series",
            ],
        );
        let name = self.string(t, "", "name");
        let description = match t.get("description") {
            None => Some(String::new()),
            Some(_) => self.string(t, "", "description"),
        };
        let seed = match t.get("seed") {
            Some(Value::Integer(i)) if *i >= 0 => Some(*i as u64),
            Some(v) => {
                self.err("seed", format!("must be a non-negative integer, got {v}"));
                None
            }
            None => {
                self.err("seed", "missing required key");
                None
            }
        };
        let trials = match t.get("trials") {
            Some(Value::Integer(i)) if *i >= 1 => Some(*i as u64),
            Some(v) => {
                self.err("trials", format!("must be an integer >= 1, got {v}"));
                None
            }
            None => {
                self.err("trials", "missing required key");
                None
            }
        };
        let methods = self.names(t, "methods", Method::parse, &Method::ALL.map(|m| m.tag()));
        let metrics = self.names(t, "metrics", Metric::parse, &Metric::ALL.map(|m| m.name()));
        let thresholds_db = match t.get("thresholds_db") {
            None => Some(Vec::new()),
            Some(v) => self.numbers(v, "thresholds_db"),
        };
        if let Some(th) = &thresholds_db {
            if th.iter().any(|x| !x.is_finite()) {
                self.err("thresholds_db", "thresholds must be finite");
            }
        }
        let geometry = self.table(t, "", "geometry").and_then(|g| self.geometry(g));

        let receivers = match t.get("receiver") {
            None => Some(Vec::new()),
            Some(Value::Array(items)) => {
                let mut out = Vec::new();
                for (i, item) in items.iter().enumerate() {
                    let path = format!("receiver[{i}]");
                    match item {
                        Value::Table(rt) => out.push(self.receiver(rt, &path)),
                        _ => {
                            self.err(path, "expected a table");
                            out.push(None);
                        }
                    }
                }
                out.into_iter().collect::<Option<Vec<_>>>()
            }
            Some(v) => {
                self.err("receiver", format!("expected an array of tables ([[receiver]]), got {}", v.type_str()));
                None
            }
        };
        if let Some(rs) = &receivers {
            for (i, r) in rs.iter().enumerate() {
                if rs[..i].iter().any(|o| o.label == r.label) {
                    self.err(format!("receiver[{i}].label"), format!("duplicate label {:?}", r.label));
                }
            }
        }

        let (eve_m, jammer_m) = match self.table(t, "", "eve") {
            Some(et) => {
                self.check_keys(et, "eve", &["source", "jammer"]);
                let s = self.table(et, "eve", "source").and_then(|st| self.eve_shape(st, "eve.source"));
                let j = self.table(et, "eve", "jammer").and_then(|jt| self.eve_shape(jt, "eve.jammer"));
                (s, j)
            }
            None => (None, None),
        };

        let sweep = self.table(t, "", "sweep").and_then(|st| {
            self.check_keys(st, "sweep", &["axis", "grid"]);
            let axis = self.param(st, "sweep", "axis", &Param::AXES);
            let grid = match st.get("grid") {
                Some(v) => self.grid(v, "sweep.grid"),
                None => {
                    self.err("sweep.grid", "missing required key");
                    None
                }
            };
            if let (Some(a), Some(g)) = (axis, &grid) {
                self.check_values(a, g, "sweep.grid");
            }
            Some(Sweep { axis: axis?, grid: grid? })
        });

        let series = match t.get("series") {
            None => Some(None),
            Some(_) => self.table(t, "", "series").and_then(|st| {
                self.check_keys(st, "series", &["param", "values"]);
                let param = self.param(st, "series", "param", &Param::ALL);
                let values = match st.get("values") {
                    Some(v) => self.numbers(v, "series.values"),
                    None => {
                        self.err("series.values", "missing required key");
                        None
                    }
                };
                if let Some(vals) = &values {
                    if vals.is_empty() {
                        self.err("series.values", "must not be empty");
                    }
                    for (i, v) in vals.iter().enumerate() {
                        if vals[..i].contains(v) {
                            self.err(format!("series.values[{i}]"), format!("duplicate value {v}"));
                        }
                    }
                }
                if let (Some(p), Some(v)) = (param, &values) {
                    self.check_values(p, v, "series.values");
                }
                Some(Some(Series { param: param?, values: values? }))
            }),
        };

        if let (Some(sw), Some(Some(se))) = (&sweep, &series) {
            if sw.axis == se.param {
                self.err("series.param", format!("{} is already the sweep axis", se.param.name()));
            }
        }
        if let Some(ms) = &methods {
            if ms.is_empty() {
                self.err("methods", "at least one method is required");
            }
        }
        if let Some(ms) = &metrics {
            if ms.is_empty() {
                self.err("metrics", "at least one metric is required");
            }
            let needs_receiver = ms.iter().any(|m| matches!(m, Metric::OutageR | Metric::CapacityR | Metric::Secrecy));
            if needs_receiver && receivers.as_ref().is_some_and(|r| r.is_empty()) {
                self.err("receiver", "receiver metrics requested but no [[receiver]] case is defined");
            }
            let needs_threshold = ms.iter().any(|m| m.is_probability());
            if needs_threshold && thresholds_db.as_ref().is_some_and(|t| t.is_empty()) {
                self.err("thresholds_db", "outage metrics need at least one threshold");
            }
        }
        if let (Some(g), Some(sw)) = (&geometry, &sweep) {
            let snr_used = sw.axis == Param::SnrDb
                || series.as_ref().and_then(|s| s.as_ref()).is_some_and(|s| s.param == Param::SnrDb);
            if snr_used && !(g.p_s > 0.0) {
                self.err("geometry.p_s", "an snr_db sweep needs a positive source power");
            }
        }

        Some(Scenario {
            name: name?,
            description: description?,
            seed: seed?,
            trials: trials?,
            methods: methods?,
            metrics: metrics?,
            thresholds_db: thresholds_db?,
            geometry: geometry?,
            receivers: receivers?,
            eve_m: eve_m?,
            jammer_m: jammer_m?,
            sweep: sweep?,
            series: series?,
        })
    }

    fn names<T: PartialEq>(&mut self, t: &Table, key: &str, parse: fn(&str) -> Option<T>, valid: &[&str]) -> Option<Vec<T>> {
        let Some(v) = t.get(key) else {
            self.err(key, "missing required key");
            return None;
        };
        let Value::Array(items) = v else {
            self.err(key, format!("expected an array of strings, got {}", v.type_str()));
            return None;
        };
        let mut out = Vec::new();
        let mut ok = true;
        for (i, item) in items.iter().enumerate() {
            match item.as_str().and_then(parse) {
                Some(x) if !out.contains(&x) => out.push(x),
                Some(_) => {}
                None => {
                    ok = false;
                    self.err(format!("{key}[{i}]"), format!("{item} is not one of: {}", valid.join(", ")));
                }
            }
        }
        ok.then_some(out)
    }
}

fn linspace(start: f64, stop: f64, count: usize) -> Vec<f64> {
    if count == 1 {
        return vec![start];
    }
    let step = (stop - start) / (count - 1) as f64;
    (0..count).map(|i| if i + 1 == count { stop } else { start + step * i as f64 }).collect()
}

/// Parses a comma-separated method list such as `closed-form,monte-carlo`.
pub fn parse_methods(list: &str) -> Result<Vec<Method>, Diagnostic> {
    let mut out = Vec::new();
    for item in list.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        match Method::parse(item) {
            Some(m) if !out.contains(&m) => out.push(m),
            Some(_) => {}
            None => {
                return Err(Diagnostic {
                    field: "--methods".into(),
                    message: format!("{item:?} is not one of: closed-form, quadrature, monte-carlo"),
                })
            }
        }
    }
    if out.is_empty() {
        return Err(Diagnostic { field: "--methods".into(), message: "at least one method is required".into() });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    const BASE: &str = r#"
name = "t"
seed = 3
trials = 1000
methods = ["closed-form"]
metrics = ["outage_e"]
thresholds_db = [-2.0]

[geometry]
n_bs_antennas = 1
n_jammer_antennas = 1
r_sr_m = 1.0
r_se_m = 1.0
r_je_m = 1.0
delta = 2.0
p_s_db = 10.0
p_j_db = 5.0
noise_var_r_w = 1.0
noise_var_e_w = 1.0

[eve]
source = { model = "gamma", m = 1 }
jammer = { model = "gamma", m = 1 }

[sweep]
axis = "r_je_m"
grid = [1.0, 2.0, 4.0]
"#;

    fn fields(text: &str) -> Vec<String> {
        Scenario::parse(text).unwrap_err().into_iter().map(|d| d.field).collect()
    }

    #[test]
    fn base_parses() {
        let s = Scenario::parse(BASE).unwrap();
        assert_eq!(s.sweep.grid, vec![1.0, 2.0, 4.0]);
        assert!((s.geometry.p_s - 10.0).abs() < 1e-12);
        assert_eq!(s.eve_m, 1);
    }

    #[test]
    fn conflicting_units() {
        let text = BASE.replace("p_s_db = 10.0", "p_s_db = 10.0\np_s_w = 10.0");
        assert_eq!(fields(&text), vec!["geometry.p_s"]);
    }

    #[test]
    fn grid_checks() {
        assert_eq!(fields(&BASE.replace("grid = [1.0, 2.0, 4.0]", "grid = []")), vec!["sweep.grid"]);
        assert_eq!(fields(&BASE.replace("grid = [1.0, 2.0, 4.0]", "grid = [1.0, 1.0]")), vec!["sweep.grid"]);
        let s = Scenario::parse(&BASE.replace("grid = [1.0, 2.0, 4.0]", "grid = { start = 0.5, stop = 30, count = 4 }"))
            .unwrap();
        assert_eq!(s.sweep.grid.len(), 4);
        assert_eq!(*s.sweep.grid.last().unwrap(), 30.0);
    }

    #[test]
    fn reports_every_violation() {
        let text = BASE
            .replace("trials = 1000", "trials = 0")
            .replace("r_se_m = 1.0", "r_se_m = -1.0")
            .replace("methods = [\"closed-form\"]", "methods = [\"guess\"]");
        let f = fields(&text);
        assert!(f.contains(&"trials".to_string()));
        assert!(f.contains(&"geometry.r_se_m".to_string()));
        assert!(f.contains(&"methods[0]".to_string()));
    }

    #[test]
    fn receiver_bounds() {
        let text = format!(
            "{BASE}\n[[receiver]]\nlabel = \"a\"\np_los = 1.3\nlos = {{ model = \"dksm\", c = 1, s = 0.9, mu = 1, kappa = 1 }}\nnlos = {{ model = \"gamma\", m = 1 }}\n"
        );
        let diags = Scenario::parse(&text).unwrap_err();
        assert!(diags.iter().any(|d| d.field == "receiver[0].p_los" && d.message.contains("[0, 1]")));
        assert!(diags.iter().any(|d| d.field == "receiver[0].los.s" && d.message.contains("s must be > 1")));
    }

    #[test]
    fn snr_axis_sets_receiver_noise() {
        let text = BASE.replace("axis = \"r_je_m\"", "axis = \"snr_db\"");
        let s = Scenario::parse(&text).unwrap();
        let st = s.point(None, 20.0);
        assert!((st.geometry.receiver_mean_snr().unwrap() - 100.0).abs() < 1e-9);
    }

    #[test]
    fn syntax_errors_are_located() {
        let d = Scenario::parse("name = ").unwrap_err();
        assert_eq!(d[0].field, "<syntax>");
        assert!(d[0].message.contains("line"));
    }

    #[test]
    fn method_lists() {
        assert_eq!(parse_methods("closed-form, monte-carlo").unwrap(), vec![Method::ClosedForm, Method::MonteCarlo]);
        assert!(parse_methods("fast").is_err());
        assert!(parse_methods("").is_err());
    }
}
