//! Problem specifications: JSON schema, validation, and conversion to the
//! engine types.

use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;
use zetareduce::exact::{rat_from_str, rat_i, Rat};
use zetareduce::{
    BigZetaTerm, BrownIntegrand, DiffOperator, DifferentialForm, QuasiBasicMatrix, SelbergMonomial,
    SelbergSpec, ShiftedSeries, WordIntegral,
};

/// Parse failure with a JSON-pointer-style location.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SpecError {
    Schema { pointer: String, message: String },
    UnknownKind(String),
}

impl fmt::Display for SpecError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpecError::Schema { pointer, message } => {
                write!(f, "schema error at {}: {}", pointer, message)
            }
            SpecError::UnknownKind(k) => write!(f, "unknown kind {:?}", k),
        }
    }
}

impl std::error::Error for SpecError {}

fn schema_err(pointer: &str, message: impl Into<String>) -> SpecError {
    SpecError::Schema {
        pointer: pointer.to_string(),
        message: message.into(),
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ProblemSpec {
    #[serde(rename = "schemaVersion", default = "default_version")]
    pub schema_version: u32,
    pub kind: String,
    pub payload: serde_json::Value,
    #[serde(default)]
    pub verify: bool,
    #[serde(default = "default_digits")]
    pub digits: u32,
    /// Verification tolerance; defaults per oracle when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
}

fn default_version() -> u32 {
    1
}

fn default_digits() -> u32 {
    10
}

/// A validated problem ready to run.
#[derive(Clone, Debug)]
pub enum Problem {
    Word(WordIntegral),
    Brown(BrownIntegrand),
    Selberg(SelbergSpec),
    Shifted(ShiftedSeries),
    BigZeta(BigZetaTerm),
}

/// Parse and validate a UTF-8 JSON problem specification.
pub fn parse_spec(text: &str) -> Result<ProblemSpec, SpecError> {
    let spec: ProblemSpec =
        serde_json::from_str(text).map_err(|e| schema_err("", e.to_string()))?;
    validate_spec(&spec)?;
    Ok(spec)
}

/// Validate the payload and convert to engine types.
pub fn validate_spec(spec: &ProblemSpec) -> Result<Problem, SpecError> {
    if spec.schema_version != 1 {
        return Err(schema_err("/schemaVersion", "unsupported schema version"));
    }
    if spec.digits == 0 || spec.digits > 30 {
        return Err(schema_err("/digits", "digits must be in 1..=30"));
    }
    match spec.kind.as_str() {
        "word" => parse_word(&spec.payload).map(Problem::Word),
        "brown" => parse_brown(&spec.payload).map(Problem::Brown),
        "selberg" => parse_selberg(&spec.payload).map(Problem::Selberg),
        "shifted-series" => parse_shifted(&spec.payload).map(Problem::Shifted),
        "bigzeta" => parse_bigzeta(&spec.payload).map(Problem::BigZeta),
        other => Err(SpecError::UnknownKind(other.to_string())),
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct WordPayload {
    letters: Vec<LetterRepr>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct LetterRepr {
    #[serde(default)]
    power: Option<PowerRepr>,
    #[serde(default)]
    pole: Option<PoleRepr>,
}

#[derive(Deserialize)]
struct PowerRepr {
    m: i64,
}

#[derive(Deserialize)]
struct PoleRepr {
    n: i64,
    l: u32,
}

fn parse_word(payload: &serde_json::Value) -> Result<WordIntegral, SpecError> {
    let p: WordPayload = serde_json::from_value(payload.clone())
        .map_err(|e| schema_err("/payload", e.to_string()))?;
    let mut letters = Vec::with_capacity(p.letters.len());
    for (i, l) in p.letters.iter().enumerate() {
        let ptr = format!("/payload/letters/{}", i);
        match (&l.power, &l.pole) {
            (Some(pw), None) => letters.push(DifferentialForm::Power { m: pw.m }),
            (None, Some(pl)) => {
                if pl.l == 0 {
                    return Err(schema_err(&ptr, "pole order must be >= 1"));
                }
                letters.push(DifferentialForm::Pole { n: pl.n, l: pl.l });
            }
            _ => return Err(schema_err(&ptr, "letter must be exactly one of power/pole")),
        }
    }
    WordIntegral::new(letters).ok_or_else(|| schema_err("/payload/letters", "word must be nonempty"))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct BrownPayload {
    n: usize,
    a: Vec<i64>,
    b: Vec<i64>,
    #[serde(default)]
    c: BTreeMap<String, i64>,
}

fn parse_pair(key: &str, n: usize, ptr: &str) -> Result<(usize, usize), SpecError> {
    let parts: Vec<&str> = key.split(',').collect();
    if parts.len() != 2 {
        return Err(schema_err(ptr, "pair key must be \"i,j\""));
    }
    let i: usize = parts[0]
        .trim()
        .parse()
        .map_err(|_| schema_err(ptr, "bad pair index"))?;
    let j: usize = parts[1]
        .trim()
        .parse()
        .map_err(|_| schema_err(ptr, "bad pair index"))?;
    if i < 1 || j < 1 || i >= j || j > n {
        return Err(schema_err(ptr, "pair must satisfy 1 <= i < j <= n"));
    }
    Ok((i - 1, j - 1))
}

fn parse_brown(payload: &serde_json::Value) -> Result<BrownIntegrand, SpecError> {
    let p: BrownPayload = serde_json::from_value(payload.clone())
        .map_err(|e| schema_err("/payload", e.to_string()))?;
    if p.a.len() != p.n || p.b.len() != p.n {
        return Err(schema_err("/payload/a", "a and b must have length n"));
    }
    let mut c = BTreeMap::new();
    for (k, v) in &p.c {
        let ptr = format!("/payload/c/{}", k);
        let pair = parse_pair(k, p.n, &ptr)?;
        c.insert(pair, *v);
    }
    BrownIntegrand::new(p.a, p.b, c).ok_or_else(|| schema_err("/payload", "invalid integrand"))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ShiftedPayload {
    shifts: Vec<i64>,
    exponents: Vec<u32>,
}

fn parse_shifted(payload: &serde_json::Value) -> Result<ShiftedSeries, SpecError> {
    let p: ShiftedPayload = serde_json::from_value(payload.clone())
        .map_err(|e| schema_err("/payload", e.to_string()))?;
    ShiftedSeries::new(p.shifts, p.exponents)
        .ok_or_else(|| schema_err("/payload", "need equal-length shifts/exponents, exponents >= 1"))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct BigZetaPayload {
    rows: Vec<Vec<u8>>,
    width: usize,
    shifts: Vec<i64>,
    #[serde(default)]
    operator: Vec<OperatorTermRepr>,
    #[serde(default)]
    coefficient: Option<String>,
}

#[derive(Deserialize)]
struct OperatorTermRepr {
    exps: Vec<u32>,
    coeff: String,
}

fn parse_bigzeta(payload: &serde_json::Value) -> Result<BigZetaTerm, SpecError> {
    let p: BigZetaPayload = serde_json::from_value(payload.clone())
        .map_err(|e| schema_err("/payload", e.to_string()))?;
    let d = p.rows.len();
    let matrix = QuasiBasicMatrix::new(p.rows, p.width)
        .ok_or_else(|| schema_err("/payload/rows", "rows must be 0/1 of the given width"))?;
    if d > 0 && !zetareduce::validate_quasi_basic(&matrix) {
        return Err(schema_err(
            "/payload/rows",
            "rows must be interval indicators with no zero column",
        ));
    }
    let operator = if p.operator.is_empty() {
        DiffOperator::identity(d)
    } else {
        let mut op = DiffOperator::new(d);
        for (i, t) in p.operator.iter().enumerate() {
            let ptr = format!("/payload/operator/{}", i);
            if t.exps.len() != d {
                return Err(schema_err(&ptr, "operator exponents must have length d"));
            }
            let c = rat_from_str(&t.coeff)
                .ok_or_else(|| schema_err(&ptr, "bad rational coefficient"))?;
            op.add_term(t.exps.clone(), c);
        }
        op
    };
    let coefficient = match &p.coefficient {
        Some(s) => rat_from_str(s)
            .ok_or_else(|| schema_err("/payload/coefficient", "bad rational"))?,
        None => rat_i(1),
    };
    BigZetaTerm::new(matrix, operator, p.shifts, coefficient)
        .ok_or_else(|| schema_err("/payload/shifts", "shifts must have length width"))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SelbergPayload {
    n: usize,
    #[serde(default)]
    f: Vec<SelbergMonomialRepr>,
    base_a: Vec<i64>,
    base_b: Vec<i64>,
    #[serde(default)]
    base_c: BTreeMap<String, i64>,
    log_a: Vec<u32>,
    log_b: Vec<u32>,
    #[serde(default)]
    log_c: BTreeMap<String, u32>,
}

#[derive(Deserialize)]
struct SelbergMonomialRepr {
    coeff: String,
    t_pow: Vec<i64>,
    #[serde(default)]
    diff_pow: BTreeMap<String, i64>,
}

fn parse_selberg(payload: &serde_json::Value) -> Result<SelbergSpec, SpecError> {
    let p: SelbergPayload = serde_json::from_value(payload.clone())
        .map_err(|e| schema_err("/payload", e.to_string()))?;
    let n = p.n;
    if p.base_a.len() != n || p.base_b.len() != n || p.log_a.len() != n || p.log_b.len() != n {
        return Err(schema_err("/payload", "per-variable arrays must have length n"));
    }
    let mut base_c = BTreeMap::new();
    for (k, v) in &p.base_c {
        let ptr = format!("/payload/base_c/{}", k);
        base_c.insert(parse_pair(k, n, &ptr)?, *v);
    }
    let mut log_c = BTreeMap::new();
    for (k, v) in &p.log_c {
        let ptr = format!("/payload/log_c/{}", k);
        log_c.insert(parse_pair(k, n, &ptr)?, *v);
    }
    let f: Vec<(Rat, SelbergMonomial)> = if p.f.is_empty() {
        vec![(
            rat_i(1),
            SelbergMonomial {
                t_pow: vec![0; n],
                diff_pow: BTreeMap::new(),
            },
        )]
    } else {
        let mut out = Vec::new();
        for (i, m) in p.f.iter().enumerate() {
            let ptr = format!("/payload/f/{}", i);
            let coeff =
                rat_from_str(&m.coeff).ok_or_else(|| schema_err(&ptr, "bad rational"))?;
            if m.t_pow.len() != n {
                return Err(schema_err(&ptr, "t_pow must have length n"));
            }
            let mut diff_pow = BTreeMap::new();
            for (k, v) in &m.diff_pow {
                let p2 = parse_pair(k, n, &ptr)?;
                if *v > 0 {
                    return Err(schema_err(&ptr, "difference powers must be <= 0"));
                }
                diff_pow.insert(p2, *v);
            }
            out.push((
                coeff,
                SelbergMonomial {
                    t_pow: m.t_pow.clone(),
                    diff_pow,
                },
            ));
        }
        out
    };
    Ok(SelbergSpec {
        n,
        f,
        base_a: p.base_a,
        base_b: p.base_b,
        base_c,
        log_a: p.log_a,
        log_b: p.log_b,
        log_c,
    })
}
