//! Shipped demo presets.

use crate::run;
use crate::spec::ProblemSpec;
use serde_json::json;
use std::process::ExitCode;

fn preset(name: &str) -> Option<ProblemSpec> {
    let value = match name {
        // classical words from the iterated-integral representation
        "zeta2" => json!({
            "kind": "word",
            "payload": {"letters": [{"pole": {"n": 0, "l": 1}}, {"power": {"m": 0}}]},
            "verify": true,
            "digits": 12
        }),
        "zeta3" => json!({
            "kind": "word",
            "payload": {"letters": [
                {"pole": {"n": 0, "l": 1}}, {"power": {"m": 0}}, {"power": {"m": 0}}
            ]},
            "verify": true,
            "digits": 12
        }),
        "zeta22" => json!({
            "kind": "word",
            "payload": {"letters": [
                {"pole": {"n": 0, "l": 1}}, {"power": {"m": 0}},
                {"pole": {"n": 0, "l": 1}}, {"power": {"m": 0}}
            ]},
            "verify": true,
            "digits": 12
        }),
        // int_0^1 log t log(1-t) dt = 2 - zeta(2)
        "selberg-log" => json!({
            "kind": "selberg",
            "payload": {
                "n": 1,
                "base_a": [0], "base_b": [0],
                "log_a": [1], "log_b": [1]
            },
            "verify": true,
            "digits": 12,
            "tol": 1e-6
        }),
        // The small Ball-Rivoal instance (a = 2, r = 0, n = 1):
        // int_{[0,1]^3} prod (1 - x_l) / (1 - x_1 x_2 x_3)^3 dx, transported
        // to the simplex by t_i = x_i ... x_3:
        // integrand (t2-t1)(t3-t2)(1-t3) / ((1-t1)^3 t2^2 t3^2).
        "ball-rivoal" => json!({
            "kind": "brown",
            "payload": {
                "n": 3,
                "a": [0, -2, -2],
                "b": [-3, 0, 1],
                "c": {"1,2": 1, "2,3": 1}
            },
            "verify": true,
            "digits": 12,
            "tol": 1e-4
        }),
        _ => return None,
    };
    serde_json::from_value(value).ok()
}

pub fn run_demo(name: &str) -> ExitCode {
    let spec = match preset(name) {
        Some(s) => s,
        None => {
            eprintln!(
                "unknown demo {:?}; available: zeta2, zeta3, zeta22, selberg-log, ball-rivoal",
                name
            );
            return ExitCode::from(2);
        }
    };
    let report = run::run(&spec);
    let rendered =
        serde_json::to_string_pretty(&serde_json::to_value(&report).expect("serializable"))
            .expect("serializable");
    println!("{}", rendered);
    if report.passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
