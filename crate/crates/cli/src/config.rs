use std::path::Path;

use primset::slow_vary::LTable;
use primset::LSpec;
use serde::{Deserialize, Serialize};

/// How `L` was requested on the command line.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LSpecConfig {
    pub kind: String,
    pub ell: Option<u32>,
    pub epsilon: Option<f64>,
    pub table_path: Option<String>,
}

impl LSpecConfig {
    pub fn resolve(&self) -> Result<LSpec, String> {
        let eps = self.epsilon.unwrap_or(1.0);
        let spec = match self.kind.as_str() {
            "power-of-log" => LSpec::power_of_log(eps),
            "iterated-log-product" => {
                let ell = self
                    .ell
                    .ok_or("--ell is required for iterated-log-product")?;
                LSpec::iterated_log_product(ell, eps)
            }
            "custom-table" => {
                let path = self
                    .table_path
                    .as_deref()
                    .ok_or("--table is required for custom-table")?;
                LTable::load(Path::new(path)).map(LSpec::custom)
            }
            other => return Err(format!("unknown L kind '{other}'")),
        };
        spec.map_err(|e| e.to_string())
    }
}

/// Every parameter that can change an output file.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub command: String,
    pub x: Option<u64>,
    pub jmax: Option<u32>,
    #[serde(rename = "K")]
    pub k: Option<usize>,
    #[serde(rename = "L")]
    pub lspec: Option<LSpecConfig>,
    pub blocks: Option<u32>,
    pub strategy: Option<String>,
    pub random_subsets: Option<usize>,
    pub file: Option<String>,
    pub out: Option<String>,
    pub format: String,
    pub segment_size: usize,
    pub threads: Option<usize>,
    pub seed: u64,
    pub inject_violation: bool,
    pub test_sequence: Option<Vec<u64>>,
}

impl ExperimentConfig {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("config serializes")
    }
}

/// Positive integer, optionally in scientific notation (`1e6`, `2.5e3`).
pub fn parse_count(s: &str) -> Result<u64, String> {
    let s = s.trim();
    if let Ok(v) = s.parse::<u64>() {
        return if v == 0 {
            Err("must be positive".into())
        } else {
            Ok(v)
        };
    }
    let v: f64 = s.parse().map_err(|_| format!("'{s}' is not a number"))?;
    if v.is_nan() || v < 1.0 || v.fract() != 0.0 {
        return Err(format!("'{s}' is not a positive integer"));
    }
    if v > i64::MAX as f64 {
        return Err(format!("'{s}' exceeds 2^63 - 1"));
    }
    Ok(v as u64)
}

#[derive(Debug, Clone, PartialEq)]
pub struct PrimeList(pub Vec<u64>);

/// Comma-separated primes for the hidden test-sequence flag.
pub fn parse_prime_list(s: &str) -> Result<PrimeList, String> {
    s.split(',')
        .map(parse_count)
        .collect::<Result<Vec<_>, _>>()
        .map(PrimeList)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts_accept_scientific_notation() {
        assert_eq!(parse_count("1e6"), Ok(1_000_000));
        assert_eq!(parse_count("2.5e3"), Ok(2500));
        assert_eq!(parse_count("65536"), Ok(65536));
        assert!(parse_count("-5").is_err());
        assert!(parse_count("0").is_err());
        assert!(parse_count("1.5").is_err());
        assert!(parse_count("1e30").is_err());
        assert!(parse_count("abc").is_err());
    }

    #[test]
    fn config_round_trips() {
        let cfg = ExperimentConfig {
            command: "construct".into(),
            x: Some(1_000_000),
            k: Some(10_000),
            lspec: Some(LSpecConfig {
                kind: "iterated-log-product".into(),
                ell: Some(4),
                epsilon: Some(0.1 + 0.2),
                table_path: None,
            }),
            format: "csv".into(),
            segment_size: 1 << 22,
            seed: 17,
            test_sequence: Some(vec![2, 3, 5]),
            ..Default::default()
        };
        let back: ExperimentConfig = serde_json::from_str(&cfg.to_json()).unwrap();
        assert_eq!(back, cfg);
        assert!(cfg
            .to_json()
            .contains("\"L\":{\"kind\":\"iterated-log-product\""));
    }

    #[test]
    fn lspec_resolution() {
        let mut c = LSpecConfig {
            kind: "power-of-log".into(),
            ell: None,
            epsilon: None,
            table_path: None,
        };
        assert_eq!(c.resolve().unwrap(), LSpec::power_of_log(1.0).unwrap());
        c.kind = "iterated-log-product".into();
        assert!(c.resolve().is_err());
        c.ell = Some(5);
        assert!(c.resolve().is_ok());
        c.kind = "custom-table".into();
        assert!(c.resolve().is_err());
    }
}
