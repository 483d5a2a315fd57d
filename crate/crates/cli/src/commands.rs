use std::path::Path;

use qlimits_core::bht::{
    bht_closed_form_log2_samples, bht_closed_form_log2_work, bht_image_report, bht_min_image_bits, bht_optimal,
    bht_split_time, bht_work, BhtWorkModel, REPORTED_IMAGE_BITS,
};
use qlimits_core::bounds::{solve_bound, BoundKind, BoundQuery, Unknown};
use qlimits_core::constants::{CONSTANTS_VERSION, HBAR};
use qlimits_core::dynamics::{
    adiabatic_schedule, ballistic_schedule, ballistic_schedule_for, evolve, grover_iterations, grover_pulsed_schedule,
    AdiabaticKind, ControlSchedule, EffectiveState, SearchSpace,
};
use qlimits_core::keylength::{
    build_report, classical_keylength, cosmic_energy, equivalent_quantum_keylength, max_deterministic_keylength,
    max_recoverable_keylength, report_to_csv, report_to_json, solar_budget, CosmicForm, CosmologyParams,
};
use qlimits_core::scenario::{scenario, scenarios, Scenario};
use serde_json::{json, Value};

use crate::args::{
    AdiabaticKindArg, BhtArgs, BoundArgs, BoundKindArg, Cli, Command, CosmicArgs, CosmicFormArg, Format, KeylengthArgs,
    KeylengthMode, Protocol, ScenarioCommand, SimulateArgs, SolveFor,
};
use crate::{CliError, Output};

type CmdResult = Result<Output, CliError>;

pub fn dispatch(cli: Cli) -> CmdResult {
    let format = cli.format;
    match cli.command {
        Command::Simulate(a) => simulate(a, format.unwrap_or(Format::Csv)),
        Command::Bound(a) => json_only(format).and_then(|_| bound(a)),
        Command::Keylength(a) => keylength(a, format.unwrap_or(Format::Json)),
        Command::Bht(a) => json_only(format).and_then(|_| bht(a)),
        Command::Cosmic(a) => json_only(format).and_then(|_| cosmic(a)),
        Command::Scenario(c) => json_only(format).and_then(|_| scenario_cmd(c)),
    }
}

fn json_only(format: Option<Format>) -> Result<(), CliError> {
    match format {
        Some(Format::Csv) => Err(CliError::usage(
            "CSV output is available for simulate and keylength --mode table only",
            "csv".to_string(),
        )),
        _ => Ok(()),
    }
}

fn read_file(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}

fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|e| CliError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}

fn missing(flag: &str, context: &str) -> CliError {
    CliError::usage(format!("--{flag} is required {context}"), format!("--{flag}"))
}

fn with_version(mut value: Value) -> Value {
    value["constants_version"] = json!(CONSTANTS_VERSION);
    value
}

fn simulate(a: SimulateArgs, format: Format) -> CmdResult {
    let space = SearchSpace::new(a.n)?;
    let energy = a.work.or(a.work_radps.map(|w| HBAR * w));
    let need_energy = || energy.ok_or_else(|| missing("work", "(or --work-radps) for this protocol"));
    if a.schedule_file.is_some() && a.protocol != Protocol::Custom {
        return Err(CliError::usage(
            "--schedule-file applies to --protocol custom only",
            "--schedule-file".to_string(),
        ));
    }
    let schedule = match a.protocol {
        Protocol::Ballistic => match a.time {
            Some(t) => ballistic_schedule_for(space, need_energy()?, t.seconds())?,
            None => ballistic_schedule(space, need_energy()?)?,
        },
        Protocol::Grover => {
            let iterations = a.iterations.unwrap_or_else(|| grover_iterations(space));
            grover_pulsed_schedule(space, need_energy()?, a.pulse_phase, iterations)?
        }
        Protocol::Adiabatic => {
            let kind = match a.adiabatic_kind {
                AdiabaticKindArg::Linear => AdiabaticKind::Linear,
                AdiabaticKindArg::Local => AdiabaticKind::Local,
            };
            adiabatic_schedule(space, need_energy()?, a.error_budget, kind, a.segments)?
        }
        Protocol::Custom => {
            let path = a
                .schedule_file
                .as_deref()
                .ok_or_else(|| missing("schedule-file", "for --protocol custom"))?;
            ControlSchedule::from_json(&read_file(path)?)?
        }
    };
    let step = a.dt.map(|d| d.seconds()).unwrap_or(schedule.total_duration() / 1000.0);
    let trace = evolve(&EffectiveState::initial(space), &schedule, step)?;
    if let Some(path) = &a.schedule_out {
        write_file(path, &schedule.to_json())?;
    }
    Ok(match format {
        Format::Csv => Output::text(trace.to_csv()),
        Format::Json => Output::json(&json!({
            "protocol": format!("{:?}", a.protocol).to_lowercase(),
            "n": a.n,
            "underflow": trace.underflow,
            "trace": trace.to_json_value(),
            "constants_version": CONSTANTS_VERSION,
        })),
    })
}

fn bound(a: BoundArgs) -> CmdResult {
    let kind = match a.kind {
        BoundKindArg::Classical => BoundKind::Classical,
        BoundKindArg::Quantum => BoundKind::Quantum,
        BoundKindArg::Gate => BoundKind::Gate,
        BoundKindArg::Ballistic => BoundKind::Ballistic,
    };
    let unknown = match a.solve {
        SolveFor::Work => Unknown::Work,
        SolveFor::Time => Unknown::Time,
        SolveFor::Psuccess => Unknown::SuccessProbability,
        SolveFor::N => Unknown::Bits,
    };
    let given = [
        ("n", Unknown::Bits, a.n.is_some()),
        ("time", Unknown::Time, a.time.is_some()),
        ("psuccess", Unknown::SuccessProbability, a.psuccess.is_some()),
        ("work", Unknown::Work, a.work.is_some() || a.power.is_some()),
    ];
    for (flag, role, present) in given {
        if role != unknown && !present {
            let hint = if flag == "work" { "(or --power)" } else { "" };
            return Err(missing(
                flag,
                format!("{hint} when solving for {}", unknown_name(unknown)).trim_start(),
            ));
        }
    }
    if kind == BoundKind::Classical && a.temp.is_none() {
        return Err(missing("temp", "for the classical bound"));
    }
    let time = a.time.map(|t| t.seconds());
    let mut query = BoundQuery::new(unknown);
    query.n = a.n;
    query.time = time;
    query.temperature = a.temp;
    query.success_probability = a.psuccess;
    query.corrected_errors = a.corrected_errors;
    query.work = a.work;
    // A power with a known time is a work budget; solving for time keeps it as W(t) = P·t.
    match (a.power, time) {
        (Some(p), Some(t)) if unknown != Unknown::Time => query.work = Some(p * t),
        (Some(p), _) => query.power = Some(p),
        _ => {}
    }
    let result = solve_bound(kind, &query)?;
    Ok(Output::json(&result.to_json()))
}

fn keylength(a: KeylengthArgs, format: Format) -> CmdResult {
    let list: Vec<Scenario> = match &a.scenario {
        Some(name) if name == "all" => scenarios(),
        Some(name) => vec![scenario(name)?],
        None => {
            let time = a.time.ok_or_else(|| missing("time", "without --scenario"))?;
            let p = a.psuccess.ok_or_else(|| missing("psuccess", "without --scenario"))?;
            let work = if a.solar_budget {
                solar_budget(time)
            } else {
                match (a.work, a.power) {
                    (Some(w), _) => w,
                    (None, Some(pw)) => pw * time.seconds(),
                    _ => return Err(missing("work", "(or --power or --solar-budget) without --scenario")),
                }
            };
            vec![Scenario::new("custom", work, time, a.temp.unwrap_or(300.0), p, None)?]
        }
    };
    let list: Vec<Scenario> = match (a.temp, &a.scenario) {
        (Some(t), Some(_)) => list
            .into_iter()
            .map(|s| {
                Scenario::new(
                    s.name,
                    s.work,
                    s.duration,
                    t,
                    s.success_probability,
                    s.classical_key_bits,
                )
            })
            .collect::<Result<_, _>>()?,
        _ => list,
    };
    if a.mode == KeylengthMode::Table {
        let rows = build_report(&list);
        if let [Err(e)] = rows.as_slice() {
            return Err(CliError::Core(e.clone()));
        }
        return Ok(match format {
            Format::Csv => Output::text(report_to_csv(&list, &rows)),
            Format::Json => Output::json(&report_to_json(&list, &rows)),
        });
    }
    json_only(Some(format))?;
    let mut values = Vec::with_capacity(list.len());
    for s in &list {
        let (w, t, p) = (s.work, s.duration.seconds(), s.success_probability);
        let mut v = json!({
            "scenario": s.name,
            "work_J": w,
            "time_s": t,
            "temperature_K": s.temperature,
            "p_success": p,
        });
        match a.mode {
            KeylengthMode::Quantum => v["quantum_bits"] = json!(equivalent_quantum_keylength(w, t, p)?),
            KeylengthMode::Recoverable => v["recoverable_bits"] = json!(max_recoverable_keylength(w, t, p)?),
            KeylengthMode::Deterministic => v["deterministic_bits"] = json!(max_deterministic_keylength(w, t)?),
            KeylengthMode::Classical => {
                let c = classical_keylength(w, t, s.temperature, p)?;
                v["classical_bits"] = json!(c.bits);
                v["below_floor"] = json!(c.below_floor);
            }
            KeylengthMode::Table => unreachable!("handled above"),
        }
        values.push(with_version(v));
    }
    Ok(Output::json(&if values.len() == 1 {
        values.remove(0)
    } else {
        Value::Array(values)
    }))
}

fn bht(a: BhtArgs) -> CmdResult {
    if a.report {
        let rows = bht_image_report()?;
        let rows = serde_json::to_value(rows).expect("rows serialize");
        return Ok(Output::json(
            &json!({"rows": rows, "constants_version": CONSTANTS_VERSION}),
        ));
    }
    let sc = a.scenario.as_deref().map(scenario).transpose()?;
    let time = a
        .time
        .map(|t| t.seconds())
        .or(sc.as_ref().map(|s| s.duration.seconds()))
        .ok_or_else(|| missing("time", "without --scenario"))?;
    let temp = a.temp.or(sc.as_ref().map(|s| s.temperature)).unwrap_or(300.0);
    let p = a
        .psuccess
        .or(sc.as_ref().map(|s| s.success_probability))
        .ok_or_else(|| missing("psuccess", "without --scenario"))?;
    if a.invert {
        if a.n.is_some() || a.samples.is_some() {
            return Err(CliError::usage(
                "--invert solves for n; drop --n and --samples",
                "--invert".to_string(),
            ));
        }
        let budget = match (a.work, a.power) {
            (Some(w), _) => w,
            (None, Some(pw)) => pw * time,
            _ => sc
                .as_ref()
                .map(|s| s.work)
                .ok_or_else(|| missing("work", "(or --power) with --invert"))?,
        };
        let bits = bht_min_image_bits(budget, time, temp, p, BhtWorkModel::Optimum)?;
        let closed = bht_min_image_bits(budget, time, temp, p, BhtWorkModel::ClosedForm)?;
        let mut v = json!({
            "min_image_bits": bits,
            "closed_form_min_image_bits": closed,
            "work_J": budget,
            "t_total_s": time,
            "temperature_K": temp,
            "p_success": p,
            "constants_version": CONSTANTS_VERSION,
        });
        if let Some(s) = &sc {
            v["scenario"] = json!(s.name);
            if let Some((_, reported)) = REPORTED_IMAGE_BITS.iter().find(|(name, _)| *name == s.name) {
                v["reported_bits"] = json!(reported);
                v["agrees"] = json!(bits == *reported);
            }
        }
        return Ok(Output::json(&v));
    }
    if a.work.is_some() || a.power.is_some() {
        return Err(CliError::usage(
            "--work and --power apply with --invert only",
            "--work".to_string(),
        ));
    }
    let n =
        a.n.ok_or_else(|| missing("n", "unless --invert or --report is given"))?;
    let nf = n as f64;
    if let Some(k) = a.samples {
        let work = bht_work(nf, k, time, temp, p)?;
        return Ok(Output::json(&json!({
            "n": n,
            "k": k,
            "t_s_s": bht_split_time(nf, k, time, p)?,
            "t_total_s": time,
            "work_J": work,
            "log2_work_J": work.log2(),
            "constants_version": CONSTANTS_VERSION,
        })));
    }
    let plan = bht_optimal(n, time, temp, p)?;
    let mut v = plan.to_json();
    v["closed_form_k"] = json!(bht_closed_form_log2_samples(nf, time, temp, p)?.exp2());
    v["closed_form_log2_work_J"] = json!(bht_closed_form_log2_work(nf, time, temp, p)?);
    Ok(Output::json(&v))
}

fn cosmic(a: CosmicArgs) -> CmdResult {
    let params = CosmologyParams::new(a.h0, a.omega_lambda, a.rho_m)?;
    let (form, name) = match a.form {
        CosmicFormArg::FromOmega => (CosmicForm::FromOmega, "fromOmega"),
        CosmicFormArg::FromDensity => (CosmicForm::FromDensity, "fromDensity"),
    };
    let energy = cosmic_energy(&params, form);
    let mut v = json!({
        "energy_J": energy,
        "form": name,
        "H0_km_s_Mpc": a.h0,
        "H0_per_s": params.h0,
        "omega_lambda": a.omega_lambda,
        "constants_version": CONSTANTS_VERSION,
    });
    if form == CosmicForm::FromDensity {
        v["rho_matter_kg_per_m3"] = json!(a.rho_m);
    }
    if let Some(t) = a.time {
        let (t, p) = (t.seconds(), a.psuccess.unwrap_or(1.0));
        v["time_s"] = json!(t);
        v["p_success"] = json!(p);
        v["deterministic_bits"] = json!(max_deterministic_keylength(energy, t)?);
        v["recoverable_bits"] = json!(max_recoverable_keylength(energy, t, p)?);
        v["quantum_bits"] = json!(equivalent_quantum_keylength(energy, t, p)?);
    }
    Ok(Output::json(&v))
}

fn scenario_json(s: &Scenario) -> Value {
    with_version(serde_json::to_value(s).expect("scenarios serialize"))
}

fn scenario_cmd(c: ScenarioCommand) -> CmdResult {
    Ok(Output::json(&match c {
        ScenarioCommand::List => Value::Array(scenarios().iter().map(scenario_json).collect()),
        ScenarioCommand::Show { name } => scenario_json(&scenario(&name)?),
    }))
}

fn unknown_name(u: Unknown) -> &'static str {
    match u {
        Unknown::Work => "work",
        Unknown::Time => "time",
        Unknown::SuccessProbability => "psuccess",
        Unknown::Bits => "n",
    }
}
