//! Flat `key = value` config files.
//!
//! The format is deliberately small: one assignment per line, `#` starts a
//! comment, blank lines are ignored, keys may be dotted for grouping
//! (`sw_power.watts`). Lists are comma-separated. Unknown keys are errors —
//! silently ignoring a typo in `repetitions` would change what an
//! experiment measures.

use std::collections::BTreeMap;
use std::error::Error;
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use super::ExperimentSpec;
use crate::energy::PowerModel;
use crate::hwsim::CycleCostModel;
use crate::workload::OrderingKind;

#[derive(Debug)]
pub enum ConfigError {
    Io(std::io::Error),
    Syntax { line: usize, message: String },
    DuplicateKey(String),
    MissingKey(String),
    UnknownKey(String),
    BadValue { key: String, message: String },
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConfigError::Io(e) => write!(f, "io error: {e}"),
            ConfigError::Syntax { line, message } => {
                write!(f, "config syntax error on line {line}: {message}")
            }
            ConfigError::DuplicateKey(key) => write!(f, "duplicate config key {key:?}"),
            ConfigError::MissingKey(key) => write!(f, "missing config key {key:?}"),
            ConfigError::UnknownKey(key) => write!(f, "unknown config key {key:?}"),
            ConfigError::BadValue { key, message } => {
                write!(f, "bad value for {key:?}: {message}")
            }
        }
    }
}

impl Error for ConfigError {
    fn source(&self) -> Option<&(dyn Error + 'static)> {
        match self {
            ConfigError::Io(e) => Some(e),
            _ => None,
        }
    }
}

impl From<std::io::Error> for ConfigError {
    fn from(e: std::io::Error) -> Self {
        ConfigError::Io(e)
    }
}

/// Parsed assignments with taken/leftover tracking, so schema readers can
/// reject keys they did not consume.
#[derive(Debug, Default)]
pub struct KvMap {
    entries: BTreeMap<String, String>,
}

impl KvMap {
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let mut entries = BTreeMap::new();
        for (index, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or(ConfigError::Syntax {
                line: index + 1,
                message: format!("expected `key = value`, got {raw:?}"),
            })?;
            let key = key.trim();
            let value = value.trim();
            if key.is_empty() {
                return Err(ConfigError::Syntax {
                    line: index + 1,
                    message: "empty key".into(),
                });
            }
            if entries.insert(key.to_string(), value.to_string()).is_some() {
                return Err(ConfigError::DuplicateKey(key.to_string()));
            }
        }
        Ok(KvMap { entries })
    }

    /// Remove and return a key's raw value.
    pub fn take(&mut self, key: &str) -> Option<String> {
        self.entries.remove(key)
    }

    pub fn contains(&self, key: &str) -> bool {
        self.entries.contains_key(key)
    }

    fn take_parsed<T: FromStr>(&mut self, key: &str) -> Result<Option<T>, ConfigError>
    where
        T::Err: fmt::Display,
    {
        match self.take(key) {
            None => Ok(None),
            Some(raw) => raw.parse().map(Some).map_err(|e| ConfigError::BadValue {
                key: key.to_string(),
                message: format!("{e}"),
            }),
        }
    }

    fn take_list<T: FromStr>(&mut self, key: &str) -> Result<Option<Vec<T>>, ConfigError>
    where
        T::Err: fmt::Display,
    {
        match self.take(key) {
            None => Ok(None),
            Some(raw) => raw
                .split(',')
                .map(|item| {
                    item.trim().parse().map_err(|e| ConfigError::BadValue {
                        key: key.to_string(),
                        message: format!("list item {item:?}: {e}"),
                    })
                })
                .collect::<Result<Vec<T>, _>>()
                .map(Some),
        }
    }

    /// Error out if any keys were never consumed.
    pub fn finish(self) -> Result<(), ConfigError> {
        match self.entries.into_keys().next() {
            Some(key) => Err(ConfigError::UnknownKey(key)),
            None => Ok(()),
        }
    }
}

fn dotted(prefix: &str, key: &str) -> String {
    if prefix.is_empty() {
        key.to_string()
    } else {
        format!("{prefix}.{key}")
    }
}

/// Read a power model from keys under `prefix` (empty prefix for a
/// standalone file):
///
/// ```text
/// model = constant | per_size_table | affine_in_arity
/// watts = 3.4                      # constant
/// entries = 4096:2.2, 8192:2.5     # per_size_table
/// base_watts = 1.0                 # affine_in_arity
/// watts_per_k = 0.01               # affine_in_arity
/// ```
pub fn power_model_from_kv(kv: &mut KvMap, prefix: &str) -> Result<PowerModel, ConfigError> {
    let model_key = dotted(prefix, "model");
    let kind = kv.take(&model_key).ok_or(ConfigError::MissingKey(model_key.clone()))?;
    let bad = |key: String, message: String| ConfigError::BadValue { key, message };
    match kind.as_str() {
        "constant" => {
            let key = dotted(prefix, "watts");
            let watts: f64 = kv
                .take_parsed(&key)?
                .ok_or(ConfigError::MissingKey(key.clone()))?;
            PowerModel::constant(watts).map_err(|e| bad(key, e.to_string()))
        }
        "per_size_table" => {
            let key = dotted(prefix, "entries");
            let raw = kv.take(&key).ok_or(ConfigError::MissingKey(key.clone()))?;
            let mut entries = Vec::new();
            for item in raw.split(',') {
                let item = item.trim();
                let (size, watts) = item.split_once(':').ok_or_else(|| {
                    bad(key.clone(), format!("expected `size:watts`, got {item:?}"))
                })?;
                let size = size.trim().parse().map_err(|e| {
                    bad(key.clone(), format!("size in {item:?}: {e}"))
                })?;
                let watts = watts.trim().parse().map_err(|e| {
                    bad(key.clone(), format!("watts in {item:?}: {e}"))
                })?;
                entries.push((size, watts));
            }
            PowerModel::per_size_table(entries).map_err(|e| bad(key, e.to_string()))
        }
        "affine_in_arity" => {
            let base_key = dotted(prefix, "base_watts");
            let slope_key = dotted(prefix, "watts_per_k");
            let base: f64 = kv
                .take_parsed(&base_key)?
                .ok_or(ConfigError::MissingKey(base_key.clone()))?;
            let slope: f64 = kv
                .take_parsed(&slope_key)?
                .ok_or(ConfigError::MissingKey(slope_key.clone()))?;
            PowerModel::affine_in_arity(base, slope).map_err(|e| bad(base_key, e.to_string()))
        }
        other => Err(bad(
            model_key,
            format!("unknown power model {other:?} (expected constant, per_size_table or affine_in_arity)"),
        )),
    }
}

/// Read cost-model keys under `prefix`; absent keys keep their defaults.
pub fn cost_model_from_kv(kv: &mut KvMap, prefix: &str) -> Result<CycleCostModel, ConfigError> {
    let mut model = CycleCostModel::default();
    let fields: [(&str, &mut u64); 6] = [
        ("child_read_cycles", &mut model.child_read_cycles),
        ("parent_compare_cycles", &mut model.parent_compare_cycles),
        ("swap_cycles", &mut model.swap_cycles),
        ("sift_up_level_cycles", &mut model.sift_up_level_cycles),
        (
            "fsm_overhead_cycles_per_op",
            &mut model.fsm_overhead_cycles_per_op,
        ),
        ("io_cycles_per_element", &mut model.io_cycles_per_element),
    ];
    for (name, slot) in fields {
        if let Some(value) = kv.take_parsed(&dotted(prefix, name))? {
            *slot = value;
        }
    }
    model.validate().map_err(|e| ConfigError::BadValue {
        key: dotted(prefix, "*"),
        message: e.to_string(),
    })?;
    Ok(model)
}

/// Serialize a cost model in the same key layout `cost_model_from_kv`
/// reads — what `calibrate` writes out.
pub fn cost_model_to_kv(model: &CycleCostModel) -> String {
    format!(
        "child_read_cycles = {}\n\
         parent_compare_cycles = {}\n\
         swap_cycles = {}\n\
         sift_up_level_cycles = {}\n\
         fsm_overhead_cycles_per_op = {}\n\
         io_cycles_per_element = {}\n",
        model.child_read_cycles,
        model.parent_compare_cycles,
        model.swap_cycles,
        model.sift_up_level_cycles,
        model.fsm_overhead_cycles_per_op,
        model.io_cycles_per_element,
    )
}

pub fn load_power_model(path: &Path) -> Result<PowerModel, ConfigError> {
    let mut kv = KvMap::parse(&fs::read_to_string(path)?)?;
    let model = power_model_from_kv(&mut kv, "")?;
    kv.finish()?;
    Ok(model)
}

pub fn load_cost_model(path: &Path) -> Result<CycleCostModel, ConfigError> {
    let mut kv = KvMap::parse(&fs::read_to_string(path)?)?;
    let model = cost_model_from_kv(&mut kv, "")?;
    kv.finish()?;
    Ok(model)
}

/// Read a full experiment spec. Every key is optional; omitted keys keep
/// the defaults from [`ExperimentSpec::default`].Atomic keys:
///
/// ```text
/// sizes = 4096, 8192
/// orderings = random, sorted, reversed
/// arities = 2, 16, 128
/// repetitions = 100
/// cooldown_ms = 100
/// seed = 42
/// clock_mhz = 100
/// output_dir = results
/// ```
///
/// plus power models under `sw_power.` / `hw_power.` and cost-model fields
/// under `cost.`.
pub fn experiment_from_str(text: &str) -> Result<ExperimentSpec, ConfigError> {
    let mut kv = KvMap::parse(text)?;
    let mut spec = ExperimentSpec::default();

    if let Some(sizes) = kv.take_list("sizes")? {
        spec.sizes = sizes;
    }
    if let Some(orderings) = kv.take_list::<OrderingKind>("orderings")? {
        spec.orderings = orderings;
    }
    if let Some(arities) = kv.take_list("arities")? {
        spec.arities = arities;
    }
    if let Some(repetitions) = kv.take_parsed("repetitions")? {
        spec.repetitions = repetitions;
    }
    if let Some(cooldown_ms) = kv.take_parsed("cooldown_ms")? {
        spec.cooldown_ms = cooldown_ms;
    }
    if let Some(seed) = kv.take_parsed("seed")? {
        spec.seed = seed;
    }
    if let Some(clock_mhz) = kv.take_parsed::<f64>("clock_mhz")? {
        spec.clock_hz = clock_mhz * 1e6;
    }
    if let Some(dir) = kv.take("output_dir") {
        spec.output_dir = PathBuf::from(dir);
    }
    if kv.contains("sw_power.model") {
        spec.sw_power = power_model_from_kv(&mut kv, "sw_power")?;
    }
    if kv.contains("hw_power.model") {
        spec.hw_power = power_model_from_kv(&mut kv, "hw_power")?;
    }
    // absent cost.* keys fall back to the all-ones default model
    spec.cost_model = cost_model_from_kv(&mut kv, "cost")?;
    kv.finish()?;
    Ok(spec)
}

pub fn load_experiment(path: &Path) -> Result<ExperimentSpec, ConfigError> {
    experiment_from_str(&fs::read_to_string(path)?)
}

/// Header of a reference-timings CSV, as fed to calibration.
pub const REFERENCE_TIMES_HEADER: &str = "size,time_s";

/// Read `(size, seconds)` pairs from a two-column CSV with the pinned
/// header `size,time_s`.
pub fn parse_reference_times(text: &str) -> Result<Vec<(usize, f64)>, ConfigError> {
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, header)) if header == REFERENCE_TIMES_HEADER => {}
        other => {
            return Err(ConfigError::Syntax {
                line: 1,
                message: format!(
                    "expected header {REFERENCE_TIMES_HEADER:?}, got {:?}",
                    other.map(|(_, h)| h).unwrap_or_default()
                ),
            })
        }
    }
    let mut pairs = Vec::new();
    for (index, line) in lines {
        if line.is_empty() {
            continue;
        }
        let syntax = |message: String| ConfigError::Syntax {
            line: index + 1,
            message,
        };
        let (size, time) = line
            .split_once(',')
            .ok_or_else(|| syntax(format!("expected `size,time_s`, got {line:?}")))?;
        let size = size
            .trim()
            .parse()
            .map_err(|e| syntax(format!("size {size:?}: {e}")))?;
        let time_s = time
            .trim()
            .parse()
            .map_err(|e| syntax(format!("time {time:?}: {e}")))?;
        pairs.push((size, time_s));
    }
    Ok(pairs)
}

pub fn load_reference_times(path: &Path) -> Result<Vec<(usize, f64)>, ConfigError> {
    parse_reference_times(&fs::read_to_string(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kv_parsing_handles_comments_blanks_and_spacing() {
        let mut kv = KvMap::parse(
            "# a comment\n\
             \n\
             key = value\n\
             spaced   =   with spaces   \n",
        )
        .unwrap();
        assert_eq!(kv.take("key").as_deref(), Some("value"));
        assert_eq!(kv.take("spaced").as_deref(), Some("with spaces"));
        kv.finish().unwrap();
    }

    #[test]
    fn kv_rejects_malformed_lines_and_duplicates() {
        match KvMap::parse("just words\n") {
            Err(ConfigError::Syntax { line, .. }) => assert_eq!(line, 1),
            other => panic!("expected syntax error, got {other:?}"),
        }
        assert!(matches!(
            KvMap::parse("a = 1\na = 2\n"),
            Err(ConfigError::DuplicateKey(_))
        ));
        assert!(matches!(
            KvMap::parse(" = 3\n"),
            Err(ConfigError::Syntax { .. })
        ));
    }

    #[test]
    fn leftover_keys_are_flagged() {
        let kv = KvMap::parse("tyop = 1\n").unwrap();
        assert!(matches!(kv.finish(), Err(ConfigError::UnknownKey(k)) if k == "tyop"));
    }

    #[test]
    fn power_model_schemas_round_trip() {
        let mut kv = KvMap::parse("model = constant\nwatts = 3.4\n").unwrap();
        let model = power_model_from_kv(&mut kv, "").unwrap();
        assert_eq!(model, PowerModel::Constant { watts: 3.4 });

        let mut kv =
            KvMap::parse("p.model = per_size_table\np.entries = 100:1.0, 200:2.0\n").unwrap();
        let model = power_model_from_kv(&mut kv, "p").unwrap();
        assert_eq!(
            model,
            PowerModel::PerSizeTable {
                entries: vec![(100, 1.0), (200, 2.0)]
            }
        );

        let mut kv = KvMap::parse(
            "hw.model = affine_in_arity\nhw.base_watts = 1.0\nhw.watts_per_k = 0.01\n",
        )
        .unwrap();
        let model = power_model_from_kv(&mut kv, "hw").unwrap();
        assert_eq!(
            model,
            PowerModel::AffineInArity {
                base_watts: 1.0,
                watts_per_k: 0.01
            }
        );
    }

    #[test]
    fn power_model_schema_failures_are_specific() {
        let mut kv = KvMap::parse("watts = 3.4\n").unwrap();
        assert!(matches!(
            power_model_from_kv(&mut kv, ""),
            Err(ConfigError::MissingKey(k)) if k == "model"
        ));
        let mut kv = KvMap::parse("model = solar\n").unwrap();
        assert!(matches!(
            power_model_from_kv(&mut kv, ""),
            Err(ConfigError::BadValue { .. })
        ));
        let mut kv = KvMap::parse("model = constant\nwatts = -1\n").unwrap();
        assert!(matches!(
            power_model_from_kv(&mut kv, ""),
            Err(ConfigError::BadValue { .. })
        ));
        let mut kv = KvMap::parse("model = per_size_table\nentries = 100-1.0\n").unwrap();
        assert!(matches!(
            power_model_from_kv(&mut kv, ""),
            Err(ConfigError::BadValue { .. })
        ));
    }

    #[test]
    fn cost_model_kv_round_trips() {
        let model = CycleCostModel {
            child_read_cycles: 2,
            parent_compare_cycles: 0,
            swap_cycles: 3,
            sift_up_level_cycles: 1,
            fsm_overhead_cycles_per_op: 4,
            io_cycles_per_element: 5,
        };
        let text = cost_model_to_kv(&model);
        let mut kv = KvMap::parse(&text).unwrap();
        let parsed = cost_model_from_kv(&mut kv, "").unwrap();
        kv.finish().unwrap();
        assert_eq!(parsed, model);
    }

    #[test]
    fn cost_model_defaults_fill_absent_keys() {
        let mut kv = KvMap::parse("swap_cycles = 4\n").unwrap();
        let model = cost_model_from_kv(&mut kv, "").unwrap();
        assert_eq!(model.swap_cycles, 4);
        assert_eq!(model.child_read_cycles, 1);
        // invalid combinations still get caught
        let mut kv = KvMap::parse("swap_cycles = 0\n").unwrap();
        assert!(cost_model_from_kv(&mut kv, "").is_err());
    }

    #[test]
    fn experiment_file_overrides_defaults_piecewise() {
        let spec = experiment_from_str(
            "sizes = 128, 64\n\
             orderings = sorted, random\n\
             arities = 2, 16\n\
             repetitions = 5\n\
             cooldown_ms = 0\n\
             seed = 7\n\
             clock_mhz = 50\n\
             output_dir = /tmp/out\n\
             sw_power.model = constant\n\
             sw_power.watts = 2.0\n\
             cost.swap_cycles = 2\n",
        )
        .unwrap();
        assert_eq!(spec.sizes, vec![128, 64]);
        assert_eq!(
            spec.orderings,
            vec![OrderingKind::Sorted, OrderingKind::Random]
        );
        assert_eq!(spec.arities, vec![2, 16]);
        assert_eq!(spec.repetitions, 5);
        assert_eq!(spec.cooldown_ms, 0);
        assert_eq!(spec.seed, 7);
        assert_eq!(spec.clock_hz, 50e6);
        assert_eq!(spec.output_dir, PathBuf::from("/tmp/out"));
        assert_eq!(spec.sw_power, PowerModel::Constant { watts: 2.0 });
        // untouched pieces keep their defaults
        assert_eq!(spec.hw_power, ExperimentSpec::default().hw_power);
        assert_eq!(spec.cost_model.swap_cycles, 2);
        assert_eq!(spec.cost_model.child_read_cycles, 1);
    }

    #[test]
    fn empty_experiment_file_is_the_default_spec() {
        let spec = experiment_from_str("").unwrap();
        assert_eq!(spec, ExperimentSpec::default());
    }

    #[test]
    fn reference_times_parse_and_reject_noise() {
        let pairs =
            parse_reference_times("size,time_s\n4096,0.005386\n16384,0.025138\n").unwrap();
        assert_eq!(pairs, vec![(4096, 0.005386), (16384, 0.025138)]);
        assert!(matches!(
            parse_reference_times("size,ms\n1,2\n"),
            Err(ConfigError::Syntax { line: 1, .. })
        ));
        assert!(matches!(
            parse_reference_times("size,time_s\nfour,1.0\n"),
            Err(ConfigError::Syntax { line: 2, .. })
        ));
    }

    #[test]
    fn unknown_experiment_keys_are_rejected() {
        assert!(matches!(
            experiment_from_str("sizzes = 1\n"),
            Err(ConfigError::UnknownKey(k)) if k == "sizzes"
        ));
        assert!(matches!(
            experiment_from_str("orderings = backwards\n"),
            Err(ConfigError::BadValue { .. })
        ));
    }
}
