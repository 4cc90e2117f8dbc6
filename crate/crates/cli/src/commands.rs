use std::collections::BTreeSet;

use primset::ablocks::{
    block_reciprocal_sum, extract_primitive_subset, random_dyadic_subset, random_repaired_subset,
    verify_lemma41, ExtractionStrategy,
};
use primset::construct::{certify_primitive, count_report_with, SEnumerator};
use primset::numfmt::fmt_sig;
use primset::prime_seq::build_sequence;
use primset::primitive::{erdos_sum, is_primitive, parse_set};
use primset::sathe_selberg::{max_j, sigma_table_with};
use primset::sieve::SieveConfig;
use primset::{Error, LSpec};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::config::ExperimentConfig;
use crate::output::Output;

/// Above this the construct command reports counts but skips materializing
/// the set for the primitivity check.
const CERTIFY_LIMIT: u64 = 100_000_000;

pub enum CliError {
    Invalid(String),
    Failed(String),
}

impl CliError {
    pub fn code(&self) -> u8 {
        match self {
            CliError::Failed(_) => 1,
            CliError::Invalid(_) => 2,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            CliError::Failed(m) | CliError::Invalid(m) => m,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::FatalInvariant(_)
            | Error::CertificateFailure(_)
            | Error::QuadratureFailure { .. }
            | Error::ToleranceUnachievable { .. } => CliError::Failed(e.to_string()),
            _ => CliError::Invalid(e.to_string()),
        }
    }
}

type CmdResult = Result<Output, CliError>;

pub fn run(cfg: &ExperimentConfig) -> CmdResult {
    let sieve = SieveConfig::with_segment_size(cfg.segment_size);
    match cfg.command.as_str() {
        "sigma" => sigma(cfg, sieve),
        "construct" => construct(cfg, sieve),
        "theorem2" => theorem2(cfg),
        "verify" => verify(cfg),
        "primeseq" => primeseq(cfg),
        other => Err(CliError::Invalid(format!("unknown command {other}"))),
    }
}

fn lspec(cfg: &ExperimentConfig) -> Result<LSpec, CliError> {
    cfg.lspec
        .as_ref()
        .ok_or_else(|| CliError::Invalid("missing L specification".into()))?
        .resolve()
        .map_err(CliError::Invalid)
}

fn opt(v: Option<f64>) -> String {
    v.map(fmt_sig).unwrap_or_default()
}

fn sigma(cfg: &ExperimentConfig, sieve: SieveConfig) -> CmdResult {
    let x = cfg.x.unwrap_or_default();
    let jmax = cfg.jmax.unwrap_or_else(|| max_j(x as f64).max(1));
    let rows = sigma_table_with(x, jmax, sieve)?;
    let mut out = Output::default();
    out.table(
        "sigma",
        "j,x,sigma_exact,h_main_term,ratio",
        rows.iter()
            .map(|r| {
                vec![
                    r.j.to_string(),
                    r.x.to_string(),
                    r.sigma_exact.to_string(),
                    fmt_sig(r.h_main_term),
                    fmt_sig(r.ratio),
                ]
            })
            .collect(),
    );
    out.set(
        "rows",
        rows.iter()
            .map(|r| {
                json!({"j": r.j, "x": r.x, "sigma_exact": r.sigma_exact,
                       "h_main_term": r.h_main_term, "ratio": r.ratio})
            })
            .collect::<Vec<_>>(),
    );
    Ok(out)
}

fn construct(cfg: &ExperimentConfig, sieve: SieveConfig) -> CmdResult {
    let x = cfg.x.unwrap_or_default();
    let spec = lspec(cfg)?;
    let mut out = Output::default();
    let primes = match &cfg.test_sequence {
        Some(p) => {
            out.note("test sequence supplied; prime-sequence certificate skipped");
            p.clone()
        }
        None => {
            let seq = build_sequence(&spec, cfg.k.unwrap_or(primset::prime_seq::DEFAULT_TERMS))?;
            out.note(seq.csv_comment().trim_start_matches("# ").to_string());
            out.set(
                "sequence",
                json!({"y0": seq.y0(), "k0": seq.k0(),
                       "prefix_sum": seq.prefix_reciprocal_sum(),
                       "tail_bound": seq.tail_bound()}),
            );
            seq.primes().to_vec()
        }
    };
    let report = count_report_with(x, &primes, &spec, sieve)?;
    let ks: BTreeSet<usize> = report
        .per_k
        .keys()
        .chain(report.lemma23_ratios.keys())
        .copied()
        .collect();
    let per_k: Vec<(usize, u64, Option<f64>)> = ks
        .iter()
        .map(|&k| {
            (
                k,
                report.per_k.get(&k).copied().unwrap_or(0),
                report.lemma23_ratios.get(&k).copied(),
            )
        })
        .collect();
    out.table(
        "per-k",
        "x,k,S_k,lemma23_ratio",
        per_k
            .iter()
            .map(|&(k, s, r)| vec![x.to_string(), k.to_string(), s.to_string(), opt(r)])
            .collect(),
    );
    out.table(
        "summary",
        "x,S,predicted,window_low,window_high,B,Bprime",
        vec![vec![
            x.to_string(),
            report.total.to_string(),
            fmt_sig(report.predicted),
            opt(report.window_low),
            opt(report.window_high),
            report.b.to_string(),
            report.b_prime.to_string(),
        ]],
    );
    out.set(
        "per_k",
        per_k
            .iter()
            .map(|&(k, s, r)| json!({"k": k, "S_k": s, "lemma23_ratio": r}))
            .collect::<Vec<_>>(),
    );
    out.set(
        "summary",
        json!({"x": x, "S": report.total, "predicted": report.predicted,
               "window_low": report.window_low, "window_high": report.window_high,
               "B": report.b, "Bprime": report.b_prime}),
    );

    if x > CERTIFY_LIMIT {
        out.note(format!(
            "primitivity: not checked above x = {CERTIFY_LIMIT}"
        ));
        out.set("primitive", Value::Null);
        return Ok(out);
    }
    let mut members = SEnumerator::with_config(x, &primes, sieve)?.members()?;
    let mut bound = x;
    if cfg.inject_violation {
        let sq = primes[0] * primes[0];
        members.push(sq);
        bound = bound.max(sq);
    }
    match certify_primitive(&members, bound) {
        Ok(_) => {
            out.note(format!("primitivity: verified, {} members", members.len()));
            out.set("primitive", true);
        }
        Err(Error::FatalInvariant(msg)) => {
            out.note(format!("primitivity: FAILED, {msg}"));
            out.set("primitive", false);
            out.failure = Some(msg);
        }
        Err(e) => return Err(e.into()),
    }
    Ok(out)
}

fn theorem2(cfg: &ExperimentConfig) -> CmdResult {
    let blocks = cfg.blocks.unwrap_or(4);
    if blocks == 0 {
        return Err(CliError::Invalid("--blocks must be positive".into()));
    }
    let rows = (1..=blocks)
        .map(block_reciprocal_sum)
        .collect::<Result<Vec<_>, _>>()?;
    let mut out = Output::default();
    out.table(
        "blocks",
        "j,lo,hi,count,reciprocal_sum,method",
        rows.iter()
            .map(|b| {
                vec![
                    b.j.to_string(),
                    b.lo.to_string(),
                    b.hi.to_string(),
                    b.count.map(|c| c.to_string()).unwrap_or_default(),
                    fmt_sig(b.reciprocal_sum),
                    b.method.to_string(),
                ]
            })
            .collect(),
    );
    out.set(
        "blocks",
        rows.iter()
            .map(|b| {
                json!({"j": b.j, "lo": b.lo.to_string(), "hi": b.hi.to_string(),
                       "count": b.count.map(|c| c.to_string()),
                       "reciprocal_sum": b.reciprocal_sum, "error_bound": b.error_bound,
                       "method": b.method.to_string()})
            })
            .collect::<Vec<_>>(),
    );

    if let Some(name) = &cfg.strategy {
        let strategy = match name.as_str() {
            "greedy-ascending" => ExtractionStrategy::GreedyAscending,
            "dyadic-block" => ExtractionStrategy::DyadicBlock,
            other => return Err(CliError::Invalid(format!("unknown strategy {other}"))),
        };
        let x = cfg.x.unwrap_or(1 << 16);
        let e = extract_primitive_subset(x, strategy)?;
        out.table(
            "extraction",
            "x,strategy,subset_size,reciprocal_sum",
            vec![vec![
                x.to_string(),
                strategy.to_string(),
                e.size.to_string(),
                fmt_sig(e.reciprocal_sum),
            ]],
        );
        let verified = e.verification.map(|v| v.primitive);
        match e.verification {
            Some(v) if !v.primitive => {
                let (m, n) = v.witness.expect("non-primitive result has a witness");
                let msg = format!("extracted subset is not primitive: {m} divides {n}");
                out.note(format!("extraction: FAILED, {msg}"));
                out.failure = Some(msg);
            }
            Some(_) => out.note(format!(
                "extraction: verified primitive, {} members",
                e.size
            )),
            None => {
                out.note("extraction: members not retained at this x, primitivity by construction")
            }
        }
        out.set(
            "extraction",
            json!({"x": x, "strategy": strategy.to_string(), "subset_size": e.size,
                   "reciprocal_sum": e.reciprocal_sum, "verified_primitive": verified}),
        );
    }

    if let Some(trials) = cfg.random_subsets {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        let mut failure = None;
        for i in 0..trials {
            let set = if i % 2 == 0 {
                random_dyadic_subset(&mut rng, 64)
            } else {
                random_repaired_subset(&mut rng, 64)
            };
            if let Err(e) = verify_lemma41(&set) {
                failure = Some(format!("trial {i}: {e}"));
                break;
            }
        }
        match &failure {
            None => out.note(format!(
                "odd parts: {trials} random primitive subsets passed"
            )),
            Some(msg) => out.note(format!("odd parts: FAILED, {msg}")),
        }
        out.set(
            "odd_parts",
            json!({"trials": trials, "passed": failure.is_none()}),
        );
        if failure.is_some() {
            out.failure = failure;
        }
    }
    Ok(out)
}

fn verify(cfg: &ExperimentConfig) -> CmdResult {
    let path = cfg.file.as_deref().unwrap_or_default();
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Invalid(format!("cannot read {path}: {e}")))?;
    let set = parse_set(&text)?;
    let result = is_primitive(&set)?;
    let sum = erdos_sum(&set);
    let (wm, wn) = match result.witness {
        Some((m, n)) => (m.to_string(), n.to_string()),
        None => (String::new(), String::new()),
    };
    let mut out = Output::default();
    out.table(
        "verify",
        "size,primitive,witness_divisor,witness_multiple,erdos_sum",
        vec![vec![
            set.len().to_string(),
            result.primitive.to_string(),
            wm,
            wn,
            fmt_sig(sum),
        ]],
    );
    out.set(
        "result",
        json!({"size": set.len(), "primitive": result.primitive,
               "witness": result.witness.map(|(m, n)| vec![m, n]), "erdos_sum": sum}),
    );
    if let Some((m, n)) = result.witness {
        out.failure = Some(format!("{m} divides {n}"));
    }
    Ok(out)
}

fn primeseq(cfg: &ExperimentConfig) -> CmdResult {
    let spec = lspec(cfg)?;
    let seq = build_sequence(&spec, cfg.k.unwrap_or(primset::prime_seq::DEFAULT_TERMS))?;
    let mut out = Output::default();
    out.note(seq.csv_comment().trim_start_matches("# ").to_string());
    out.table(
        "sequence",
        "k,p_k",
        seq.primes()
            .iter()
            .enumerate()
            .map(|(i, p)| vec![(i + 1).to_string(), p.to_string()])
            .collect(),
    );
    out.set(
        "sequence",
        json!({"lspec": spec.to_string(), "y0": seq.y0(), "k0": seq.k0(),
               "prefix_sum": seq.prefix_reciprocal_sum(), "tail_bound": seq.tail_bound(),
               "primes": seq.primes()}),
    );
    Ok(out)
}
