//! Run configuration: a small `key = value` document plus defaults.

use std::fmt;

use ecoepi_hpm::{validate, InitialState, ModelParams};

pub const DEFAULT_ORDER: usize = 2;
pub const DEFAULT_T_END: f64 = 10.0;
pub const DEFAULT_STEP: f64 = 1e-3;
pub const DEFAULT_GRID: usize = 201;

/// Everything one run needs: model setup plus numeric knobs.
#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub params: ModelParams<f64>,
    pub ics: InitialState<f64>,
    /// Truncation order of the series engine.
    pub order: usize,
    pub t_end: f64,
    pub step: f64,
    /// Number of output rows over [0, t_end].
    pub grid: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub enum ConfigError {
    Syntax { line: usize, message: String },
    MissingKeys(Vec<&'static str>),
    Validation(Vec<String>),
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConfigError::Syntax { line, message } => write!(f, "line {line}: {message}"),
            ConfigError::MissingKeys(keys) => {
                write!(f, "missing required keys: {}", keys.join(", "))
            }
            ConfigError::Validation(errors) => {
                write!(f, "invalid configuration: {}", errors.join("; "))
            }
        }
    }
}

impl std::error::Error for ConfigError {}

const MODEL_KEYS: [&str; 11] = [
    "r", "K", "c1", "c2", "delta", "e", "d1", "d2", "S0", "I0", "P0",
];

/// Parse a `key = value` document with `#` comments.
///
/// The eleven model keys (r, K, c1, c2, delta, e, d1, d2, S0, I0, P0) are
/// required; order, t_end, step and grid default when absent. Unknown and
/// duplicate keys are rejected with their line number, and the parsed
/// parameters must pass model validation.
pub fn parse_config(text: &str) -> Result<RunConfig, ConfigError> {
    let mut model: Vec<(&'static str, f64)> = Vec::new();
    let mut order: Option<usize> = None;
    let mut grid: Option<usize> = None;
    let mut t_end: Option<f64> = None;
    let mut step: Option<f64> = None;
    let mut seen: Vec<String> = Vec::new();

    for (idx, raw_line) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw_line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(ConfigError::Syntax {
                line: line_no,
                message: format!("expected 'key = value', found '{line}'"),
            });
        };
        let key = key.trim();
        let value = value.trim();
        if seen.iter().any(|k| k == key) {
            return Err(ConfigError::Syntax {
                line: line_no,
                message: format!("duplicate key '{key}'"),
            });
        }
        seen.push(key.to_string());

        let number = |what: &str| -> Result<f64, ConfigError> {
            value.parse().map_err(|_| ConfigError::Syntax {
                line: line_no,
                message: format!("invalid number for '{what}': '{value}'"),
            })
        };
        let integer = |what: &str| -> Result<usize, ConfigError> {
            value.parse().map_err(|_| ConfigError::Syntax {
                line: line_no,
                message: format!("invalid integer for '{what}': '{value}'"),
            })
        };

        match key {
            "order" => order = Some(integer("order")?),
            "grid" => grid = Some(integer("grid")?),
            "t_end" => t_end = Some(number("t_end")?),
            "step" => step = Some(number("step")?),
            _ => match MODEL_KEYS.iter().find(|k| **k == key) {
                Some(static_key) => model.push((static_key, number(key)?)),
                None => {
                    return Err(ConfigError::Syntax {
                        line: line_no,
                        message: format!("unknown key '{key}'"),
                    });
                }
            },
        }
    }

    let lookup = |key: &str| model.iter().find(|(k, _)| *k == key).map(|(_, v)| *v);
    let missing: Vec<&'static str> = MODEL_KEYS
        .iter()
        .copied()
        .filter(|key| lookup(key).is_none())
        .collect();
    if !missing.is_empty() {
        return Err(ConfigError::MissingKeys(missing));
    }

    let params = ModelParams {
        r: lookup("r").unwrap(),
        k: lookup("K").unwrap(),
        c1: lookup("c1").unwrap(),
        c2: lookup("c2").unwrap(),
        delta: lookup("delta").unwrap(),
        e: lookup("e").unwrap(),
        d1: lookup("d1").unwrap(),
        d2: lookup("d2").unwrap(),
    };
    let ics = InitialState {
        s0: lookup("S0").unwrap(),
        i0: lookup("I0").unwrap(),
        p0: lookup("P0").unwrap(),
    };

    let report = validate(&params, &ics);
    if !report.is_valid() {
        return Err(ConfigError::Validation(report.errors));
    }

    Ok(RunConfig {
        params,
        ics,
        order: order.unwrap_or(DEFAULT_ORDER),
        t_end: t_end.unwrap_or(DEFAULT_T_END),
        step: step.unwrap_or(DEFAULT_STEP),
        grid: grid.unwrap_or(DEFAULT_GRID).max(2),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const BASELINE: &str = "\
# reference setup
r = 0.1
K = 0.3
c1 = 0.1
c2 = 0.2
delta = 0.1
e = 0.1
d1 = 0.2
d2 = 0.2
S0 = 0.01
I0 = 0.01
P0 = 0.01
";

    #[test]
    fn baseline_parses_with_defaults() {
        let config = parse_config(BASELINE).unwrap();
        assert_eq!(config.order, 2);
        assert_eq!(config.t_end, 10.0);
        assert_eq!(config.step, 1e-3);
        assert_eq!(config.grid, 201);
        assert_eq!(config.params.r, 0.1);
        assert_eq!(config.ics.p0, 0.01);
    }

    #[test]
    fn empty_document_lists_every_missing_key() {
        match parse_config("") {
            Err(ConfigError::MissingKeys(keys)) => assert_eq!(keys.len(), 11),
            other => panic!("expected MissingKeys, got {other:?}"),
        }
    }

    #[test]
    fn negative_growth_rate_is_a_validation_error() {
        let text = BASELINE.replace("r = 0.1", "r = -0.1");
        match parse_config(&text) {
            Err(ConfigError::Validation(errors)) => {
                assert!(errors.iter().any(|e| e == "r must be positive"));
            }
            other => panic!("expected Validation, got {other:?}"),
        }
    }

    #[test]
    fn unknown_keys_are_rejected_with_line_numbers() {
        let text = format!("{BASELINE}mystery = 1\n");
        match parse_config(&text) {
            Err(ConfigError::Syntax { line, message }) => {
                assert_eq!(line, 13);
                assert!(message.contains("unknown key 'mystery'"));
            }
            other => panic!("expected Syntax, got {other:?}"),
        }
    }

    #[test]
    fn duplicate_keys_are_rejected() {
        let text = format!("{BASELINE}r = 0.2\n");
        assert!(matches!(
            parse_config(&text),
            Err(ConfigError::Syntax { line: 13, .. })
        ));
    }

    #[test]
    fn run_keys_override_defaults() {
        let text = format!("{BASELINE}order = 3\nt_end = 5\nstep = 0.01\ngrid = 11\n");
        let config = parse_config(&text).unwrap();
        assert_eq!(config.order, 3);
        assert_eq!(config.t_end, 5.0);
        assert_eq!(config.step, 0.01);
        assert_eq!(config.grid, 11);
    }

    #[test]
    fn infinite_carrying_capacity_is_accepted() {
        let text = BASELINE.replace("K = 0.3", "K = inf");
        let config = parse_config(&text).unwrap();
        assert!(config.params.k.is_infinite());
    }
}
