//! Command-line front end: parse circuit files, evolve descriptors, run the
//! analyses, print tables, emit JSON reports.
//!
//! Exit codes: 0 success, 2 input error (arguments, circuit files), 3
//! analysis precondition error. `DESCRYPTOR_DENSE_CAP` overrides the cap on
//! dense reconstruction size.

mod report;

use std::path::Path;
use std::process::ExitCode;

use serde_json::{json, Value};

use descryptor_core::analysis::{
    correlation_attribution, correlation_test, density_from_table,
    descriptor_separability_search, joint_table, ppt_separability, pure_separability_test,
    SearchBudget, Separability,
};
use descryptor_core::circuit::Circuit;
use descryptor_core::descriptor::Register;
use descryptor_core::error::Error;
use descryptor_core::protocols;

const USAGE: &str = "\
descryptor: Heisenberg-picture descriptor simulator and entanglement analyzer

USAGE:
    descryptor evolve <circuit-file> [--json]
    descryptor analyze <circuit-file> --pair A B [--purifier C] [--json]
                       [--max-terms K] [--sweeps N] [--restarts R]
                       [--seed S] [--tolerance T]
    descryptor protocol <bell|ghz|w|bell-measurement> [--json]

Circuit files hold one directive per line: `qubits N`, `gate KIND t1 [t2]`,
`# comment`. Dense gates: `gate U<k> t1 .. tk @matrix-file`.
Environment: DESCRYPTOR_DENSE_CAP overrides the dense-size cap (default 10).
";

const EXIT_INPUT: u8 = 2;
const EXIT_PRECONDITION: u8 = 3;

struct RunConfig {
    json: bool,
    pair: Option<(usize, usize)>,
    purifier: Option<usize>,
    budget: SearchBudget,
}

fn main() -> ExitCode {
    let args: Vec<String> = std::env::args().skip(1).collect();
    match run(&args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError { code, message }) => {
            eprintln!("error: {message}");
            ExitCode::from(code)
        }
    }
}

struct CliError {
    code: u8,
    message: String,
}

fn input_err(message: impl Into<String>) -> CliError {
    CliError { code: EXIT_INPUT, message: message.into() }
}

fn precondition_err(message: impl Into<String>) -> CliError {
    CliError { code: EXIT_PRECONDITION, message: message.into() }
}

fn run(args: &[String]) -> Result<(), CliError> {
    let Some(command) = args.first() else {
        return Err(input_err(USAGE));
    };
    match command.as_str() {
        "evolve" => cmd_evolve(&args[1..]),
        "analyze" => cmd_analyze(&args[1..]),
        "protocol" => cmd_protocol(&args[1..]),
        "--help" | "-h" | "help" => {
            println!("{USAGE}");
            Ok(())
        }
        other => Err(input_err(format!("unknown subcommand `{other}`\n\n{USAGE}"))),
    }
}

fn parse_flags(args: &[String], allow_analysis: bool) -> Result<(Vec<String>, RunConfig), CliError> {
    let mut positional = Vec::new();
    let mut config = RunConfig {
        json: false,
        pair: None,
        purifier: None,
        budget: SearchBudget::default(),
    };
    let mut it = args.iter();
    let parse_usize = |value: Option<&String>, flag: &str| -> Result<usize, CliError> {
        value
            .and_then(|v| v.parse::<usize>().ok())
            .ok_or_else(|| input_err(format!("flag {flag} needs a positive integer")))
    };
    while let Some(arg) = it.next() {
        match arg.as_str() {
            "--json" => config.json = true,
            "--pair" if allow_analysis => {
                let a = parse_usize(it.next(), "--pair")?;
                let b = parse_usize(it.next(), "--pair")?;
                config.pair = Some((a, b));
            }
            "--purifier" if allow_analysis => {
                config.purifier = Some(parse_usize(it.next(), "--purifier")?);
            }
            "--max-terms" if allow_analysis => {
                config.budget.max_terms = parse_usize(it.next(), "--max-terms")?;
            }
            "--sweeps" if allow_analysis => {
                config.budget.max_sweeps = parse_usize(it.next(), "--sweeps")?;
            }
            "--restarts" if allow_analysis => {
                config.budget.restarts = parse_usize(it.next(), "--restarts")?;
            }
            "--seed" if allow_analysis => {
                config.budget.seed = parse_usize(it.next(), "--seed")? as u64;
            }
            "--tolerance" if allow_analysis => {
                let t = it
                    .next()
                    .and_then(|v| v.parse::<f64>().ok())
                    .filter(|t| *t > 0.0)
                    .ok_or_else(|| input_err("flag --tolerance needs a positive number"))?;
                config.budget.tolerance = t;
            }
            other if other.starts_with("--") => {
                return Err(input_err(format!("unknown flag `{other}`")));
            }
            other => positional.push(other.to_string()),
        }
    }
    if config.budget.max_terms == 0 || config.budget.restarts == 0 {
        return Err(input_err("budgets must be positive"));
    }
    Ok((positional, config))
}

fn dense_cap_from_env() -> Result<Option<usize>, CliError> {
    match std::env::var("DESCRYPTOR_DENSE_CAP") {
        Ok(v) => v
            .parse::<usize>()
            .map(Some)
            .map_err(|_| input_err(format!("DESCRYPTOR_DENSE_CAP=`{v}` is not a qubit count"))),
        Err(_) => Ok(None),
    }
}

fn load_register(path: &str) -> Result<(Circuit, Register), CliError> {
    let circuit = Circuit::parse_file(Path::new(path))
        .map_err(|e| input_err(format!("{path}: {e}")))?;
    let mut register = Register::from_circuit(&circuit)
        .map_err(|e| input_err(format!("{path}: {e}")))?;
    if let Some(cap) = dense_cap_from_env()? {
        register = register.with_dense_cap(cap);
    }
    Ok((circuit, register))
}

fn cmd_evolve(args: &[String]) -> Result<(), CliError> {
    let (positional, config) = parse_flags(args, false)?;
    let [path] = positional.as_slice() else {
        return Err(input_err("evolve expects exactly one circuit file"));
    };
    let (_, register) = load_register(path)?;
    if config.json {
        let mut map = report::schema_object();
        map.insert("command".to_string(), json!("evolve"));
        for (k, v) in report::register_to_json(&register)
            .as_object()
            .expect("register json is an object")
        {
            map.insert(k.clone(), v.clone());
        }
        println!("{}", Value::Object(map));
    } else {
        print!("{}", report::render_register_text(&register));
    }
    Ok(())
}

fn cmd_analyze(args: &[String]) -> Result<(), CliError> {
    let (positional, config) = parse_flags(args, true)?;
    let [path] = positional.as_slice() else {
        return Err(input_err("analyze expects exactly one circuit file"));
    };
    let (a, b) = config.pair.ok_or_else(|| input_err("analyze requires --pair A B"))?;
    let (_, register) = load_register(path)?;
    let n = register.n();
    for (label, idx) in [("pair", Some(a)), ("pair", Some(b)), ("purifier", config.purifier)] {
        if let Some(q) = idx {
            if q < 1 || q > n {
                return Err(input_err(format!("{label} qubit {q} outside 1..={n}")));
            }
        }
    }
    if a == b || config.purifier == Some(a) || config.purifier == Some(b) {
        return Err(input_err("pair and purifier qubits must be distinct"));
    }

    let correlation =
        correlation_test(&register, a, b).map_err(|e| precondition_err(e.to_string()))?;

    let pair_purity = register.purity(&[a, b]).map_err(|e| precondition_err(e.to_string()))?;
    let pure_sep = if (pair_purity - 1.0).abs() <= 1e-10 {
        Some(pure_separability_test(&register, a, b).map_err(|e| precondition_err(e.to_string()))?)
    } else {
        None
    };

    let table = joint_table(&register, a, b).map_err(|e| precondition_err(e.to_string()))?;
    let rho = density_from_table(&table);
    let ppt = ppt_separability(&rho).map_err(|e| precondition_err(e.to_string()))?;

    let search = descriptor_separability_search(&register, a, b, config.purifier, &config.budget)
        .map_err(|e| match e {
            Error::NoPurification { .. } | Error::SubsystemNotPure { .. } => {
                precondition_err(e.to_string())
            }
            other => precondition_err(other.to_string()),
        })?;

    let attribution = config
        .purifier
        .map(|c| correlation_attribution(&register, a, b, c))
        .transpose()
        .map_err(|e| precondition_err(e.to_string()))?;

    if config.json {
        let mut map = report::schema_object();
        map.insert("command".to_string(), json!("analyze"));
        map.insert("pair".to_string(), json!([a, b]));
        map.insert("purifier".to_string(), config.purifier.map_or(Value::Null, |c| json!(c)));
        map.insert("correlation".to_string(), report::correlation_to_json(&correlation));
        map.insert(
            "pure_separability".to_string(),
            json!({
                "applicable": pure_sep.is_some(),
                "purity": pair_purity,
                "separable": pure_sep,
            }),
        );
        map.insert(
            "ppt".to_string(),
            json!({
                "separable": ppt.separable == Separability::Separable,
                "min_eigenvalue": ppt.residual,
            }),
        );
        map.insert("descriptor_search".to_string(), report::verdict_to_json(&search));
        map.insert(
            "attribution".to_string(),
            attribution.as_ref().map_or(Value::Null, report::attribution_to_json),
        );
        println!("{}", Value::Object(map));
    } else {
        print!("pair: {a} {b}");
        match config.purifier {
            Some(c) => println!(" (purifier {c})"),
            None => println!(),
        }
        print!("{}", report::render_correlation_text(&correlation));
        match pure_sep {
            Some(sep) => {
                println!("pure-separability: {}", if sep { "separable" } else { "not separable" })
            }
            None => println!("pure-separability: not applicable (pair purity {pair_purity:.6})"),
        }
        println!(
            "ppt: {} (min partial-transpose eigenvalue {:+.6e})",
            match ppt.separable {
                Separability::Separable => "separable",
                _ => "entangled",
            },
            ppt.residual
        );
        match search.separable {
            Separability::Separable => {
                let cert = search.certificate.as_ref().expect("certificate");
                println!(
                    "descriptor-search: separable (residual {:.3e}, {} terms, {} form)",
                    search.residual,
                    cert.weights.len(),
                    if cert.is_product_form(1e-9) { "product" } else { "diagonal" }
                );
            }
            _ => println!(
                "descriptor-search: inconclusive (best residual {:.3e}, ppt says {})",
                search.residual,
                match search.ppt_cross_check {
                    Some(Separability::Separable) => "separable",
                    Some(Separability::Entangled) => "entangled",
                    _ => "unknown",
                }
            ),
        }
        match &attribution {
            Some(rep) => print!("{}", report::render_attribution_text(rep)),
            None => println!("attribution: not computed (no purifier given)"),
        }
    }
    Ok(())
}

fn cmd_protocol(args: &[String]) -> Result<(), CliError> {
    let (positional, config) = parse_flags(args, false)?;
    let [name] = positional.as_slice() else {
        return Err(input_err("protocol expects exactly one name"));
    };
    match name.as_str() {
        "bell" => emit_register_protocol(&config, "bell", &protocols::build_bell()),
        "ghz" => emit_register_protocol(&config, "ghz", &protocols::build_ghz()),
        "w" => {
            let table = protocols::w_fixture();
            let w_report =
                protocols::w_reconstruction_report().map_err(|e| precondition_err(e.to_string()))?;
            if config.json {
                let mut map = report::schema_object();
                map.insert("command".to_string(), json!("protocol"));
                map.insert("name".to_string(), json!("w"));
                map.insert(
                    "table".to_string(),
                    Value::Array(table.iter().map(report::descriptor_to_json).collect()),
                );
                map.insert("reconstruction".to_string(), report::w_report_to_json(&w_report));
                println!("{}", Value::Object(map));
            } else {
                print!("{}", report::render_fixture_descriptors_text(&table));
                print!("{}", report::render_w_report_text(&w_report));
            }
            Ok(())
        }
        "bell-measurement" => {
            let trace = protocols::bell_measurement_protocol();
            if config.json {
                let mut map = report::schema_object();
                map.insert("command".to_string(), json!("protocol"));
                map.insert("name".to_string(), json!("bell-measurement"));
                for (k, v) in
                    report::trace_to_json(&trace).as_object().expect("trace json is an object")
                {
                    map.insert(k.clone(), v.clone());
                }
                println!("{}", Value::Object(map));
            } else {
                print!("{}", report::render_trace_text(&trace));
            }
            Ok(())
        }
        other => Err(input_err(format!(
            "unknown protocol `{other}` (expected bell, ghz, w, bell-measurement)"
        ))),
    }
}

fn emit_register_protocol(config: &RunConfig, name: &str, reg: &Register) -> Result<(), CliError> {
    if config.json {
        let mut map = report::schema_object();
        map.insert("command".to_string(), json!("protocol"));
        map.insert("name".to_string(), json!(name));
        for (k, v) in report::register_to_json(reg).as_object().expect("register json") {
            map.insert(k.clone(), v.clone());
        }
        println!("{}", Value::Object(map));
    } else {
        print!("{}", report::render_register_text(reg));
    }
    Ok(())
}
