//! Reduction runs and verification reports.

use crate::spec::{validate_spec, Problem, ProblemSpec, SpecError};
use serde::Serialize;
use serde_json::json;
use std::time::Instant;
use zetareduce::numeric::quad::LogPowers;
use zetareduce::{
    bigzeta_convergent, brown_convergent, brute_force_bigzeta, brute_force_shifted,
    eval_combination, quadrature_brown, quadrature_log_brown, reduce_bigzeta, reduce_brown,
    reduce_shifted, reduce_word_integral, reduce_word_series, selberg_taylor_coefficient,
    shifted_series_convergent, word_convergent, BrownIntegrand, MzvCombination, SelbergSpec,
};

#[derive(Serialize)]
pub struct Report {
    #[serde(rename = "schemaVersion")]
    pub schema_version: u32,
    pub kind: String,
    pub convergent: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub result: Option<MzvCombination>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verify: Option<VerifyBlock>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    #[serde(rename = "timeMs")]
    pub time_ms: u128,
}

#[derive(Serialize)]
pub struct VerifyBlock {
    /// Numeric value of the exact combination (decimal string).
    pub value: String,
    /// Independent oracle value (decimal string).
    pub oracle: String,
    #[serde(rename = "oracleKind")]
    pub oracle_kind: String,
    pub discrepancy: String,
    pub tolerance: f64,
    pub pass: bool,
}

impl Report {
    fn error(kind: &str, message: String, start: Instant) -> Report {
        Report {
            schema_version: 1,
            kind: kind.to_string(),
            convergent: None,
            result: None,
            verify: None,
            error: Some(message),
            time_ms: start.elapsed().as_millis(),
        }
    }

    fn divergent(kind: &str, start: Instant) -> Report {
        Report {
            schema_version: 1,
            kind: kind.to_string(),
            convergent: Some(false),
            result: None,
            verify: None,
            error: None,
            time_ms: start.elapsed().as_millis(),
        }
    }

    /// True when the run neither failed nor failed verification.
    pub fn passed(&self) -> bool {
        self.error.is_none() && self.verify.as_ref().map_or(true, |v| v.pass)
    }
}

/// Run one spec: reduce, optionally verify, report.
pub fn run(spec: &ProblemSpec) -> Report {
    let start = Instant::now();
    let problem = match validate_spec(spec) {
        Ok(p) => p,
        Err(e) => return Report::error(&spec.kind, e.to_string(), start),
    };
    let digits = spec.digits;
    match problem {
        Problem::Word(w) => {
            if !word_convergent(&w) {
                return Report::divergent(&spec.kind, start);
            }
            let combo = match reduce_word_series(&w) {
                Ok(c) => c,
                Err(e) => return Report::error(&spec.kind, e.to_string(), start),
            };
            let verify = if spec.verify {
                let n = w.len();
                let tol = spec.tol.unwrap_or(1e-8);
                if n <= 3 {
                    // quadrature of the word integrand (letters are per-variable
                    // monomial factors, so this is a difference-free integrand)
                    let a: Vec<i64> = w
                        .letters()
                        .iter()
                        .map(|l| match l {
                            zetareduce::DifferentialForm::Power { m } => m - 1,
                            zetareduce::DifferentialForm::Pole { n, .. } => *n,
                        })
                        .collect();
                    let b: Vec<i64> = w
                        .letters()
                        .iter()
                        .map(|l| match l {
                            zetareduce::DifferentialForm::Power { .. } => 0,
                            zetareduce::DifferentialForm::Pole { l, .. } => -(*l as i64),
                        })
                        .collect();
                    let integrand = BrownIntegrand::beta(n, a, b).expect("letter exponents");
                    match quadrature_brown(&integrand, tol * 0.1) {
                        Ok(oracle) => Some(make_verify(&combo, digits, oracle, "quadrature", tol)),
                        Err(e) => return Report::error(&spec.kind, e.to_string(), start),
                    }
                } else {
                    // independent algorithm as the oracle
                    match reduce_word_integral(&w) {
                        Ok(other) => match eval_combination(&other, digits) {
                            Ok(oracle) => Some(make_verify(
                                &combo,
                                digits,
                                zetareduce::NumericValue {
                                    error: oracle.error,
                                    value: oracle.value,
                                },
                                "dual-algorithm",
                                tol,
                            )),
                            Err(e) => return Report::error(&spec.kind, e.to_string(), start),
                        },
                        Err(e) => return Report::error(&spec.kind, e.to_string(), start),
                    }
                }
            } else {
                None
            };
            finish(&spec.kind, combo, verify, start)
        }
        Problem::Brown(b) => {
            if !brown_convergent(&b) {
                return Report::divergent(&spec.kind, start);
            }
            let combo = match reduce_brown(&b) {
                Ok(c) => c,
                Err(e) => return Report::error(&spec.kind, e.to_string(), start),
            };
            let verify = if spec.verify {
                let tol = spec.tol.unwrap_or(1e-4);
                if b.size() <= 3 {
                    match quadrature_brown(&b, tol * 0.1) {
                        Ok(oracle) => Some(make_verify(&combo, digits, oracle, "quadrature", tol)),
                        Err(e) => return Report::error(&spec.kind, e.to_string(), start),
                    }
                } else {
                    return Report::error(
                        &spec.kind,
                        "verification supports N <= 3 only".into(),
                        start,
                    );
                }
            } else {
                None
            };
            finish(&spec.kind, combo, verify, start)
        }
        Problem::Selberg(s) => {
            let combo = match selberg_taylor_coefficient(&s) {
                Ok(c) => c,
                Err(zetareduce::error::BrownError::Divergent) => {
                    return Report::divergent(&spec.kind, start)
                }
                Err(e) => return Report::error(&spec.kind, e.to_string(), start),
            };
            let verify = if spec.verify {
                let tol = spec.tol.unwrap_or(1e-6);
                match selberg_quadrature(&s, tol * 0.1) {
                    Ok(oracle) => Some(make_verify(&combo, digits, oracle, "quadrature", tol)),
                    Err(e) => return Report::error(&spec.kind, e.to_string(), start),
                }
            } else {
                None
            };
            finish(&spec.kind, combo, verify, start)
        }
        Problem::Shifted(s) => {
            if !shifted_series_convergent(&s) {
                return Report::divergent(&spec.kind, start);
            }
            let combo = match reduce_shifted(&s) {
                Ok(c) => c,
                Err(e) => return Report::error(&spec.kind, e.to_string(), start),
            };
            let verify = if spec.verify {
                match brute_force_shifted(&s, 100_000) {
                    Ok(oracle) => {
                        let tol = spec.tol.unwrap_or(oracle.error * 1.5);
                        Some(make_verify(&combo, digits, oracle, "brute-force", tol))
                    }
                    Err(e) => return Report::error(&spec.kind, e.to_string(), start),
                }
            } else {
                None
            };
            finish(&spec.kind, combo, verify, start)
        }
        Problem::BigZeta(t) => {
            if t.depth() > 0 && !bigzeta_convergent(&t) {
                return Report::divergent(&spec.kind, start);
            }
            let combo = match reduce_bigzeta(&t) {
                Ok(c) => c,
                Err(e) => return Report::error(&spec.kind, e.to_string(), start),
            };
            let verify = if spec.verify && t.depth() > 0 {
                match brute_force_bigzeta(&t, 4000) {
                    Ok(oracle) => {
                        let tol = spec.tol.unwrap_or(oracle.error * 1.5);
                        Some(make_verify(&combo, digits, oracle, "brute-force", tol))
                    }
                    Err(e) => return Report::error(&spec.kind, e.to_string(), start),
                }
            } else {
                None
            };
            finish(&spec.kind, combo, verify, start)
        }
    }
}

fn finish(kind: &str, combo: MzvCombination, verify: Option<VerifyBlock>, start: Instant) -> Report {
    Report {
        schema_version: 1,
        kind: kind.to_string(),
        convergent: Some(true),
        result: Some(combo),
        verify,
        error: None,
        time_ms: start.elapsed().as_millis(),
    }
}

fn make_verify(
    combo: &MzvCombination,
    digits: u32,
    oracle: zetareduce::NumericValue,
    oracle_kind: &str,
    tol: f64,
) -> VerifyBlock {
    match eval_combination(combo, digits) {
        Ok(value) => {
            let diff = (value.to_f64() - oracle.to_f64()).abs();
            let pass = diff <= tol + value.error + oracle.error;
            VerifyBlock {
                value: value.value.to_decimal_string(digits),
                oracle: oracle.value.to_decimal_string(digits),
                oracle_kind: oracle_kind.to_string(),
                discrepancy: format!("{:.3e}", diff),
                tolerance: tol,
                pass,
            }
        }
        Err(e) => VerifyBlock {
            value: format!("evaluation failed: {}", e),
            oracle: oracle.value.to_decimal_string(digits),
            oracle_kind: oracle_kind.to_string(),
            discrepancy: "n/a".into(),
            tolerance: tol,
            pass: false,
        },
    }
}

/// Quadrature oracle for a Selberg log-moment spec (N <= 3).
fn selberg_quadrature(
    s: &SelbergSpec,
    tol: f64,
) -> Result<zetareduce::NumericValue, zetareduce::error::NumericError> {
    use zetareduce::error::NumericError;
    if s.n > 3 {
        return Err(NumericError::OutOfRange("selberg quadrature needs N <= 3".into()));
    }
    let mut total = 0.0f64;
    let mut err = 0.0f64;
    for (coeff, mono) in &s.f {
        let mut a = s.base_a.clone();
        for i in 0..s.n {
            a[i] += mono.t_pow[i];
        }
        let mut c = s.base_c.clone();
        for (&p, &e) in &mono.diff_pow {
            *c.entry(p).or_insert(0) += e;
        }
        let integrand = BrownIntegrand::new(a, s.base_b.clone(), c)
            .ok_or_else(|| NumericError::OutOfRange("bad integrand".into()))?;
        let logs = LogPowers {
            a: s.log_a.clone(),
            b: s.log_b.clone(),
            c: s.log_c.clone(),
        };
        let v = quadrature_log_brown(&integrand, &logs, tol)?;
        let cf = zetareduce::exact::rat_to_f64(coeff);
        total += cf * v.to_f64();
        err += cf.abs() * v.error;
    }
    Ok(zetareduce::NumericValue {
        value: zetareduce::numeric::Certified::from_f64(total, 96, err),
        error: err,
    })
}

/// Run a batch of specs concurrently, preserving input order.
pub fn run_all(specs: &[ProblemSpec]) -> Vec<Report> {
    if specs.len() <= 1 {
        return specs.iter().map(run).collect();
    }
    std::thread::scope(|scope| {
        let handles: Vec<_> = specs.iter().map(|s| scope.spawn(move || run(s))).collect();
        handles.into_iter().map(|h| h.join().expect("no panic")).collect()
    })
}

/// Parse either a single spec object or an array of specs.
pub fn parse_batch(text: &str) -> Result<Vec<ProblemSpec>, SpecError> {
    let value: serde_json::Value = serde_json::from_str(text).map_err(|e| SpecError::Schema {
        pointer: "".into(),
        message: e.to_string(),
    })?;
    match value {
        serde_json::Value::Array(items) => {
            let mut out = Vec::with_capacity(items.len());
            for (i, item) in items.into_iter().enumerate() {
                let spec: ProblemSpec =
                    serde_json::from_value(item).map_err(|e| SpecError::Schema {
                        pointer: format!("/{}", i),
                        message: e.to_string(),
                    })?;
                validate_spec(&spec)?;
                out.push(spec);
            }
            Ok(out)
        }
        _ => Ok(vec![crate::spec::parse_spec(text)?]),
    }
}

/// Reports as a JSON value (array iff the input was an array).
pub fn reports_to_json(reports: &[Report], was_array: bool) -> serde_json::Value {
    if reports.len() == 1 && !was_array {
        serde_json::to_value(&reports[0]).expect("serializable")
    } else {
        json!(reports
            .iter()
            .map(|r| serde_json::to_value(r).expect("serializable"))
            .collect::<Vec<_>>())
    }
}
