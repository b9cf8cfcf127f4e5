//! File formats: sequences (JSON or CSV), weight rules, space configs and
//! report output.

use std::fs;
use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gamma::GammaSpaceConfig;
use crate::inequality::InequalityReport;
use crate::seq::{FiniteSequence, WeightSeq};

fn parse_err(path: &Path, msg: impl std::fmt::Display) -> Error {
    Error::Parse(format!("{}: {msg}", path.display()))
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| parse_err(path, e))
}

fn is_json(path: &Path, text: &str) -> bool {
    match path.extension().and_then(|e| e.to_str()) {
        Some("json") => true,
        Some("csv") => false,
        _ => text.trim_start().starts_with(['{', '[']),
    }
}

/// An entry is either a real number or a `[re, im]` pair.
#[derive(Deserialize)]
#[serde(untagged)]
enum Entry {
    Real(f64),
    Complex([f64; 2]),
}

impl From<Entry> for Complex64 {
    fn from(e: Entry) -> Self {
        match e {
            Entry::Real(r) => Complex64::new(r, 0.0),
            Entry::Complex([re, im]) => Complex64::new(re, im),
        }
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SequenceFile {
    #[serde(default = "one")]
    offset: usize,
    values: Vec<Entry>,
}

fn one() -> usize {
    1
}

#[derive(Deserialize)]
struct SequenceRow {
    index: usize,
    re: f64,
    #[serde(default)]
    im: f64,
}

/// `{"offset": 1, "values": [[re, im], ...]}`; plain numbers are accepted
/// as real entries.
pub fn parse_sequence_json(text: &str) -> Result<FiniteSequence> {
    let file: SequenceFile = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    FiniteSequence::new(file.offset, file.values.into_iter().map(Complex64::from).collect())
}

/// CSV with header `index,re,im`; indices start at 1 and may be sparse.
pub fn parse_sequence_csv(text: &str) -> Result<FiniteSequence> {
    let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(text.as_bytes());
    let mut rows: Vec<SequenceRow> = Vec::new();
    for row in reader.deserialize() {
        rows.push(row.map_err(|e| Error::Parse(e.to_string()))?);
    }
    if rows.is_empty() {
        return Ok(FiniteSequence::zero());
    }
    rows.sort_by_key(|r| r.index);
    if rows.windows(2).any(|w| w[0].index == w[1].index) {
        return Err(Error::Parse("duplicate index".into()));
    }
    let first = rows[0].index;
    if first == 0 {
        return Err(Error::InvalidOffset(0));
    }
    let last = rows[rows.len() - 1].index;
    let mut values = vec![Complex64::new(0.0, 0.0); last - first + 1];
    for r in rows {
        values[r.index - first] = Complex64::new(r.re, r.im);
    }
    FiniteSequence::new(first, values)
}

/// Loads a sequence, choosing the format from the extension (or the first
/// character when there is none).
pub fn load_sequence(path: &Path) -> Result<FiniteSequence> {
    let text = read(path)?;
    let parsed = if is_json(path, &text) {
        parse_sequence_json(&text)
    } else {
        parse_sequence_csv(&text)
    };
    parsed.map_err(|e| match e {
        Error::Parse(msg) => parse_err(path, msg),
        other => other,
    })
}

pub fn save_sequence_json(path: &Path, seq: &FiniteSequence) -> Result<()> {
    #[derive(Serialize)]
    struct Out {
        offset: usize,
        values: Vec<[f64; 2]>,
    }
    let out = Out {
        offset: seq.offset(),
        values: seq.values().iter().map(|v| [v.re, v.im]).collect(),
    };
    let text = serde_json::to_string_pretty(&out).map_err(|e| parse_err(path, e))?;
    fs::write(path, text).map_err(|e| parse_err(path, e))
}

/// A weight rule as it appears in config files.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "lowercase", deny_unknown_fields)]
pub enum RuleSpec {
    Const {
        #[serde(default = "unit")]
        value: f64,
    },
    Power {
        #[serde(alias = "s", alias = "beta")]
        exponent: f64,
    },
    Sqrt,
    Linear,
    Triangular,
    Geometric {
        ratio: f64,
    },
    Keller,
    Table {
        values: Vec<f64>,
        #[serde(default)]
        tail: Option<Box<RuleSpec>>,
    },
}

fn unit() -> f64 {
    1.0
}

impl RuleSpec {
    pub fn build(&self) -> Result<WeightSeq> {
        match self {
            RuleSpec::Const { value } => WeightSeq::constant(*value),
            RuleSpec::Power { exponent } => WeightSeq::power(*exponent),
            RuleSpec::Sqrt => Ok(WeightSeq::sqrt()),
            RuleSpec::Linear => Ok(WeightSeq::linear()),
            RuleSpec::Triangular => Ok(WeightSeq::triangular()),
            RuleSpec::Geometric { ratio } => WeightSeq::geometric(*ratio),
            RuleSpec::Keller => Ok(WeightSeq::keller()),
            RuleSpec::Table { values, tail } => {
                let tail = tail.as_ref().map(|t| t.build()).transpose()?;
                WeightSeq::table(values.clone(), tail)
            }
        }
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum TableFile {
    Values(Vec<f64>),
    WithTail {
        values: Vec<f64>,
        #[serde(default)]
        tail: Option<RuleSpec>,
    },
}

#[derive(Deserialize)]
struct TableRow {
    #[allow(dead_code)]
    n: usize,
    value: f64,
}

/// A weight table file: a JSON array, a JSON object
/// `{"values": [...], "tail": rule-spec}`, or CSV with header `n,value`.
pub fn load_table(path: &Path) -> Result<WeightSeq> {
    let text = read(path)?;
    if is_json(path, &text) {
        let file: TableFile = serde_json::from_str(&text).map_err(|e| parse_err(path, e))?;
        match file {
            TableFile::Values(values) => WeightSeq::table(values, None),
            TableFile::WithTail { values, tail } => {
                WeightSeq::table(values, tail.map(|t| t.build()).transpose()?)
            }
        }
    } else {
        let values = load_value_column(path, &text)?;
        WeightSeq::table(values.into_iter().map(|(_, v)| v).collect(), None)
    }
}

fn load_value_column(path: &Path, text: &str) -> Result<Vec<(usize, f64)>> {
    let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(text.as_bytes());
    let mut out = Vec::new();
    for row in reader.deserialize::<TableRow>() {
        let row = row.map_err(|e| parse_err(path, e))?;
        out.push((row.n, row.value));
    }
    for (i, (n, _)) in out.iter().enumerate() {
        if *n != i + 1 {
            return Err(parse_err(path, format!("expected n = {} on row {}, found {n}", i + 1, i + 1)));
        }
    }
    Ok(out)
}

/// `(n, value)` pairs from a CSV with columns `n,value` (other columns are
/// ignored); rows must run `1, 2, 3, ...`.
pub fn load_value_table(path: &Path) -> Result<Vec<(usize, f64)>> {
    let text = read(path)?;
    load_value_column(path, &text)
}

/// Parses the weight-rule flag grammar: `const[:c]`, `power:s`, `sqrt`,
/// `linear`, `triangular`, `geometric:r`, `keller`, `table:path`.
pub fn parse_rule(spec: &str) -> Result<WeightSeq> {
    let (name, param) = match spec.split_once(':') {
        Some((n, p)) => (n.trim(), Some(p.trim())),
        None => (spec.trim(), None),
    };
    let number = |p: Option<&str>| -> Result<f64> {
        let p = p.ok_or_else(|| Error::Parse(format!("rule `{spec}` needs a parameter")))?;
        p.parse::<f64>().map_err(|_| Error::Parse(format!("bad number `{p}` in rule `{spec}`")))
    };
    let no_param = |seq: WeightSeq| -> Result<WeightSeq> {
        match param {
            None => Ok(seq),
            Some(_) => Err(Error::Parse(format!("rule `{name}` takes no parameter"))),
        }
    };
    match name {
        "const" => match param {
            None => Ok(WeightSeq::one()),
            Some(_) => WeightSeq::constant(number(param)?),
        },
        "power" => WeightSeq::power(number(param)?),
        "geometric" => WeightSeq::geometric(number(param)?),
        "sqrt" => no_param(WeightSeq::sqrt()),
        "linear" => no_param(WeightSeq::linear()),
        "triangular" => no_param(WeightSeq::triangular()),
        "keller" => no_param(WeightSeq::keller()),
        "table" => {
            let p = param.ok_or_else(|| Error::Parse("rule `table` needs a file path".into()))?;
            load_table(Path::new(p))
        }
        _ => Err(Error::Parse(format!("unknown weight rule `{name}`"))),
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigFile {
    p: f64,
    gamma: RuleSpec,
    #[serde(default = "unit_rule")]
    q: RuleSpec,
}

fn unit_rule() -> RuleSpec {
    RuleSpec::Const { value: 1.0 }
}

/// `{"p": 2, "gamma": rule-spec, "q": rule-spec}`; `q` defaults to 1.
pub fn parse_space_config(text: &str) -> Result<GammaSpaceConfig> {
    let file: ConfigFile = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    GammaSpaceConfig::new(file.p, file.gamma.build()?, file.q.build()?)
}

pub fn load_space_config(path: &Path) -> Result<GammaSpaceConfig> {
    parse_space_config(&read(path)?).map_err(|e| match e {
        Error::Parse(msg) => parse_err(path, msg),
        other => other,
    })
}

/// Flat form of an [`InequalityReport`] for CSV and JSON output.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportRow {
    pub lhs: f64,
    pub weighted_sum: f64,
    pub remainder: f64,
    pub classical_sum: f64,
    pub margin: f64,
    pub tail_lo: Option<f64>,
    pub tail_hi: Option<f64>,
    pub flags: String,
    pub reference: String,
}

impl From<&InequalityReport> for ReportRow {
    fn from(r: &InequalityReport) -> Self {
        Self {
            lhs: r.lhs,
            weighted_sum: r.weighted_sum,
            remainder: r.remainder,
            classical_sum: r.classical_sum,
            margin: r.margin,
            tail_lo: r.tail.map(|t| t.lo),
            tail_hi: r.tail.map(|t| t.hi),
            flags: r.flags.labels(),
            reference: r.reference.clone(),
        }
    }
}

/// Writes rows as CSV, or as a JSON array when the path ends in `.json`.
pub fn write_rows<T: Serialize>(path: &Path, rows: &[T]) -> Result<()> {
    let io_err = |e: &dyn std::fmt::Display| parse_err(path, e);
    if path.extension().and_then(|e| e.to_str()) == Some("json") {
        let text = serde_json::to_string_pretty(rows).map_err(|e| io_err(&e))?;
        return fs::write(path, text + "\n").map_err(|e| io_err(&e));
    }
    let mut w = csv::Writer::from_path(path).map_err(|e| io_err(&e))?;
    for row in rows {
        w.serialize(row).map_err(|e| io_err(&e))?;
    }
    w.flush().map_err(|e| io_err(&e))
}
