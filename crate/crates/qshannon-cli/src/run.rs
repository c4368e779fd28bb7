//! Resolves parameters (flags over config over defaults), computes rows —
//! concurrently under `--jobs` but always emitted in sweep order — and
//! writes CSV or a versioned JSON document.

use std::f64::consts::{LN_2, PI};
use std::path::PathBuf;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use serde_json::{json, Map, Value};

use qshannon::cipher::{self, CipherParams, EveAttack, Mapper};
use qshannon::states::{Amplitude, Constellation, QuasiBellPair};
use qshannon::{capacity, detection, estimation, fock, reading, reliability};

use crate::config::Config;
use crate::sweep::{parse_bool, parse_f64, parse_sweep, parse_u32, parse_u64, parse_usize, product2};
use crate::table::{json_document, json_num, Cell, Table};
use crate::{Cli, CliError, Cmd, OutFormat, Units};

const ORACLE_TOL: f64 = 1e-8;

impl Units {
    fn conv(self, nats: f64) -> f64 {
        match self {
            Units::Nats => nats,
            Units::Bits => nats / LN_2,
        }
    }

    fn pick(self, nats: &'static str, bits: &'static str) -> &'static str {
        match self {
            Units::Nats => nats,
            Units::Bits => bits,
        }
    }

    fn tag(self) -> &'static str {
        self.pick("nats", "bits")
    }
}

pub struct Ctx {
    cfg: Config,
    format: Option<OutFormat>,
    units: Units,
    output: Option<PathBuf>,
    jobs: usize,
    log: bool,
    oracle: bool,
    seed: Option<String>,
}

impl Ctx {
    fn emit(&self, text: &str) -> Result<(), CliError> {
        match &self.output {
            Some(p) => std::fs::write(p, text)
                .map_err(|e| CliError::Compute(format!("cannot write {}: {e}", p.display()))),
            None => {
                print!("{text}");
                Ok(())
            }
        }
    }

    fn format_or(&self, default: OutFormat) -> OutFormat {
        self.format.unwrap_or(default)
    }

    fn emit_table(&self, inputs: Value, table: &Table) -> Result<(), CliError> {
        match self.format_or(OutFormat::Csv) {
            OutFormat::Csv => self.emit(&table.csv()),
            OutFormat::Json => {
                let cols = Value::Array(
                    table.columns.iter().map(|c| Value::String((*c).to_string())).collect(),
                );
                self.emit(&json_document(
                    inputs,
                    &[("columns", cols), ("rows", table.json_rows())],
                ))
            }
        }
    }

    fn seed_or(&self, default: u64) -> Result<u64, CliError> {
        match &self.seed {
            Some(s) => parse_u64(s, "seed"),
            None => Ok(default),
        }
    }
}

pub fn dispatch(cli: Cli) -> Result<(), CliError> {
    let cfg = Config::load(cli.config.as_deref())?;
    let format = match cli.format {
        Some(f) => Some(f),
        None => cfg
            .merge(None, "format")
            .map(|s| match s.as_str() {
                "csv" => Ok(OutFormat::Csv),
                "json" => Ok(OutFormat::Json),
                other => Err(CliError::Usage(format!("--format: csv or json, got '{other}'"))),
            })
            .transpose()?,
    };
    let units = match cli.units {
        Some(u) => u,
        None => cfg
            .merge(None, "units")
            .map(|s| match s.as_str() {
                "nats" => Ok(Units::Nats),
                "bits" => Ok(Units::Bits),
                other => Err(CliError::Usage(format!("--units: nats or bits, got '{other}'"))),
            })
            .transpose()?
            .unwrap_or(Units::Nats),
    };
    let output = cli.output.or_else(|| cfg.merge(None, "output").map(PathBuf::from));
    let jobs = match cli.jobs {
        Some(j) => j,
        None => cfg
            .merge(None, "jobs")
            .map(|s| parse_usize(&s, "jobs"))
            .transpose()?
            .unwrap_or(1),
    };
    if jobs == 0 {
        return Err(CliError::Usage("--jobs must be at least 1".into()));
    }
    let log = cli.log
        || cfg
            .merge(None, "log")
            .map(|s| parse_bool(&s, "log"))
            .transpose()?
            .unwrap_or(false);
    let oracle = cli.oracle_check
        || cfg
            .merge(None, "oracle-check")
            .map(|s| parse_bool(&s, "oracle-check"))
            .transpose()?
            .unwrap_or(false);
    let seed = cfg
        .merge(cli.seed, "seed")
        .or_else(|| std::env::var("QSHANNON_SEED").ok());

    let ctx = Ctx {
        cfg,
        format,
        units,
        output,
        jobs,
        log,
        oracle,
        seed,
    };

    match cli.cmd {
        Cmd::Detect { which } => match which {
            crate::DetectCmd::Psk(a) => detect_psk(&ctx, a),
        },
        Cmd::Capacity { which } => match which {
            crate::CapacityCmd::Gaussian(a) => capacity_gaussian(&ctx, a),
            crate::CapacityCmd::Psk(a) => capacity_psk(&ctx, a),
        },
        Cmd::Reliability(a) => match a.sub {
            Some(crate::ReliabilityCmd::Cutoff(c)) => reliability_cutoff(&ctx, c),
            Some(crate::ReliabilityCmd::Gaussian(g)) => reliability_gaussian(&ctx, g),
            None => reliability_curve(&ctx, a),
        },
        Cmd::Estimate(a) => estimate(&ctx, a),
        Cmd::Cipher { which } => match which {
            crate::CipherCmd::Report(a) => cipher_report(&ctx, a),
            crate::CipherCmd::Simulate(a) => cipher_simulate(&ctx, a),
        },
        Cmd::Reading(a) => reading_table(&ctx, a),
    }
}

type Row = Result<Vec<Cell>, CliError>;

/// Compute one row per point, spreading work over `jobs` threads; results
/// come back in point order and the first error (in that order) wins.
fn run_rows<P: Sync>(
    points: &[P],
    jobs: usize,
    f: impl Fn(&P) -> Row + Sync,
) -> Result<Vec<Vec<Cell>>, CliError> {
    if jobs <= 1 || points.len() <= 1 {
        return points.iter().map(f).collect();
    }
    let slots: Mutex<Vec<Option<Row>>> = Mutex::new((0..points.len()).map(|_| None).collect());
    let cursor = AtomicUsize::new(0);
    std::thread::scope(|s| {
        for _ in 0..jobs.min(points.len()) {
            s.spawn(|| loop {
                let i = cursor.fetch_add(1, Ordering::Relaxed);
                if i >= points.len() {
                    break;
                }
                let row = f(&points[i]);
                slots.lock().expect("row store poisoned")[i] = Some(row);
            });
        }
    });
    slots
        .into_inner()
        .expect("row store poisoned")
        .into_iter()
        .map(|r| r.expect("every point computed"))
        .collect()
}

fn oracle_gate(what: &str, worst: f64) -> Result<(), CliError> {
    if worst > ORACLE_TOL {
        Err(CliError::Compute(format!(
            "oracle check failed for {what}: deviation {worst:.3e} exceeds 1e-8"
        )))
    } else {
        Ok(())
    }
}

fn parse_f64_list(s: &str, name: &str) -> Result<Vec<f64>, CliError> {
    s.split(',').map(|v| parse_f64(v, name)).collect()
}

fn parse_u32_list(s: &str, name: &str) -> Result<Vec<u32>, CliError> {
    s.split(',')
        .map(|v| parse_u32(v, name))
        .collect()
}

fn detect_psk(ctx: &Ctx, a: crate::DetectPskArgs) -> Result<(), CliError> {
    let m = parse_usize(&ctx.cfg.require(a.m, "m")?, "m")?;
    let ns = parse_f64(&ctx.cfg.require(a.ns, "ns")?, "ns")?;
    let receiver = ctx
        .cfg
        .merge(a.receiver, "receiver")
        .unwrap_or_else(|| "srm".into());
    let priors = ctx.cfg.merge(a.priors, "priors");
    ctx.cfg.reject_unknown()?;

    let mut c = Constellation::psk(m, ns)?;
    if let Some(p) = &priors {
        c = c.with_priors(parse_f64_list(p, "priors")?)?;
    }
    let inputs = json!({
        "m": m, "ns": ns, "receiver": receiver, "priors": c.priors(),
    });

    match receiver.as_str() {
        "srm" => {
            let ch = detection::srm_channel(&c)?;
            if ctx.oracle {
                let oracle = fock::srm_channel_oracle(&c, None)?;
                let mut worst = 0.0f64;
                for i in 0..ch.n_inputs() {
                    for j in 0..ch.n_outcomes() {
                        worst = worst.max((ch.prob(i, j) - oracle[(i, j)]).abs());
                    }
                }
                oracle_gate("the SRM channel", worst)?;
            }
            match ctx.format_or(OutFormat::Csv) {
                OutFormat::Csv => ctx.emit(&ch.to_csv()),
                OutFormat::Json => ctx.emit(&json_document(
                    inputs,
                    &[
                        ("channel", serde_json::to_value(&ch).expect("serializable")),
                        ("error_probability", json_num(ch.error_probability())),
                    ],
                )),
            }
        }
        "optimal" | "homodyne" => {
            let pe = if receiver == "optimal" {
                if m == 2 {
                    detection::helstrom_binary(&c)?
                } else {
                    detection::covariant_optimal_pe(&c)?
                }
            } else {
                if m != 2 {
                    return Err(CliError::Compute(
                        "the homodyne baseline is defined for binary signals only".into(),
                    ));
                }
                detection::homodyne_bpsk_pe(ns)?
            };
            if ctx.oracle && receiver == "optimal" {
                let reference = if m == 2 {
                    fock::helstrom_binary_oracle(
                        c.amplitudes()[0],
                        c.amplitudes()[1],
                        c.priors()[0],
                        None,
                    )?
                } else {
                    // The covariant optimum equals 1 − mean SRM diagonal.
                    let oracle = fock::srm_channel_oracle(&c, None)?;
                    1.0 - (0..m).map(|i| oracle[(i, i)]).sum::<f64>() / m as f64
                };
                oracle_gate("the optimal error probability", (pe - reference).abs())?;
            }
            let t = Table {
                columns: vec!["M", "Ns", "receiver", "pe"],
                rows: vec![vec![
                    Cell::Str(m.to_string()),
                    Cell::echo(ns),
                    Cell::Str(receiver.clone()),
                    Cell::F(pe),
                ]],
            };
            ctx.emit_table(inputs, &t)
        }
        other => Err(CliError::Usage(format!(
            "--receiver must be srm, optimal, or homodyne, got '{other}'"
        ))),
    }
}

fn capacity_gaussian(ctx: &Ctx, a: crate::CapacityGaussianArgs) -> Result<(), CliError> {
    let ns_spec = ctx.cfg.require(a.ns, "ns")?;
    let nth_spec = ctx.cfg.merge(a.nth, "nth").unwrap_or_else(|| "0".into());
    ctx.cfg.reject_unknown()?;
    let points = product2(
        &parse_sweep(&ns_spec, "ns", ctx.log)?,
        &parse_sweep(&nth_spec, "nth", ctx.log)?,
    );
    let u = ctx.units;
    let rows = run_rows(&points, ctx.jobs, |&(ns, nth)| {
        let holevo = capacity::gaussian_capacity_holevo(ns, nth)?;
        let shannon = capacity::gaussian_capacity_shannon(ns, nth)?;
        let gap = capacity::quantum_advantage_gap(ns, nth)?;
        Ok(vec![
            Cell::echo(ns),
            Cell::echo(nth),
            Cell::F(u.conv(holevo.value_nats)),
            Cell::F(u.conv(shannon.value_nats)),
            Cell::F(u.conv(gap)),
        ])
    })?;
    let t = Table {
        columns: vec![
            "Ns",
            "Nth",
            u.pick("C_holevo_nats", "C_holevo_bits"),
            u.pick("C_shannon_nats", "C_shannon_bits"),
            u.pick("gap_nats", "gap_bits"),
        ],
        rows,
    };
    let inputs = json!({"ns": ns_spec, "nth": nth_spec, "units": u.tag()});
    ctx.emit_table(inputs, &t)
}

fn capacity_psk(ctx: &Ctx, a: crate::CapacityPskArgs) -> Result<(), CliError> {
    let m = parse_usize(&ctx.cfg.require(a.m, "m")?, "m")?;
    let ns_spec = ctx.cfg.require(a.ns, "ns")?;
    ctx.cfg.reject_unknown()?;
    let points = parse_sweep(&ns_spec, "ns", ctx.log)?;
    let u = ctx.units;
    let oracle = ctx.oracle;
    let rows = run_rows(&points, ctx.jobs, |&ns| {
        let c = Constellation::psk(m, ns)?;
        let srm = capacity::mutual_information(&detection::srm_channel(&c)?)?;
        let holevo = capacity::holevo_information(&c)?;
        if oracle {
            let reference = fock::von_neumann_entropy_oracle(c.amplitudes(), c.priors(), None)?;
            oracle_gate("the Holevo information", (holevo.value_nats - reference).abs())?;
        }
        let gap = (holevo.value_nats - srm.value_nats).max(0.0);
        Ok(vec![
            Cell::Str(m.to_string()),
            Cell::echo(ns),
            Cell::F(u.conv(srm.value_nats)),
            Cell::F(u.conv(holevo.value_nats)),
            Cell::F(u.conv(gap)),
        ])
    })?;
    let t = Table {
        columns: vec![
            "M",
            "Ns",
            u.pick("I_srm_nats", "I_srm_bits"),
            u.pick("C_holevo_nats", "C_holevo_bits"),
            u.pick("gap_nats", "gap_bits"),
        ],
        rows,
    };
    let inputs = json!({"m": m, "ns": ns_spec, "units": u.tag()});
    ctx.emit_table(inputs, &t)
}

fn reliability_curve(ctx: &Ctx, a: crate::ReliabilityArgs) -> Result<(), CliError> {
    let m = parse_usize(&ctx.cfg.require(a.m, "m")?, "m")?;
    let ns = parse_f64(&ctx.cfg.require(a.ns, "ns")?, "ns")?;
    let rate_spec = ctx.cfg.require(a.rate, "rate")?;
    let target_pe = parse_f64(
        &ctx.cfg
            .merge(a.target_pe, "target-pe")
            .unwrap_or_else(|| "1e-9".into()),
        "target-pe",
    )?;
    ctx.cfg.reject_unknown()?;

    let c = Constellation::psk(m, ns)?;
    let ch = detection::srm_channel(&c)?;
    if ctx.oracle {
        // The exponent rides on the modified-Gram spectrum; its entropy must
        // match the Fock mixture entropy.
        let holevo = capacity::holevo_information(&c)?;
        let reference = fock::von_neumann_entropy_oracle(c.amplitudes(), c.priors(), None)?;
        oracle_gate("the exponent spectrum", (holevo.value_nats - reference).abs())?;
    }
    let points = parse_sweep(&rate_spec, "rate", ctx.log)?;
    let u = ctx.units;
    let rows = run_rows(&points, ctx.jobs, |&r| {
        let eq = reliability::reliability_quantum(&c, r)?;
        let es = reliability::reliability_semi(&ch, r)?;
        let plan = |e: f64| match reliability::required_code_length(e, target_pe) {
            Ok(n) => Ok(Cell::U(n)),
            Err(qshannon::Error::RateNotSupported { .. }) => Ok(Cell::Empty),
            Err(e) => Err(CliError::from(e)),
        };
        Ok(vec![
            Cell::F(u.conv(r)),
            Cell::F(u.conv(eq)),
            Cell::F(u.conv(es)),
            plan(eq)?,
            plan(es)?,
        ])
    })?;
    let t = Table {
        columns: vec![
            u.pick("R_nats", "R_bits"),
            "E_quantum",
            "E_semi",
            "n_quantum",
            "n_semi",
        ],
        rows,
    };
    let inputs = json!({
        "m": m, "ns": ns, "rate": rate_spec, "target_pe": target_pe, "units": u.tag(),
    });
    ctx.emit_table(inputs, &t)
}

fn reliability_cutoff(ctx: &Ctx, a: crate::CutoffArgs) -> Result<(), CliError> {
    let m = parse_usize(&ctx.cfg.require(a.m, "m")?, "m")?;
    let ns = parse_f64(&ctx.cfg.require(a.ns, "ns")?, "ns")?;
    ctx.cfg.reject_unknown()?;
    let c = Constellation::psk(m, ns)?;
    let rep = reliability::cutoff_quantum(&c)?;
    let u = ctx.units;
    let inputs = json!({"m": m, "ns": ns, "units": u.tag()});
    match ctx.format_or(OutFormat::Csv) {
        OutFormat::Csv => {
            let priors = rep
                .optimal_priors
                .iter()
                .map(|&p| qshannon::fmt::sig12(p))
                .collect::<Vec<_>>()
                .join(";");
            let t = Table {
                columns: vec![
                    "M",
                    "Ns",
                    u.pick("R_q_nats", "R_q_bits"),
                    u.pick("R_semi_upper_nats", "R_semi_upper_bits"),
                    u.pick("R_q_uniform_nats", "R_q_uniform_bits"),
                    "optimal_priors",
                ],
                rows: vec![vec![
                    Cell::Str(m.to_string()),
                    Cell::echo(ns),
                    Cell::F(u.conv(rep.r_q)),
                    Cell::F(u.conv(rep.r_semi_upper)),
                    Cell::F(u.conv(rep.r_q_uniform)),
                    Cell::Str(priors),
                ]],
            };
            ctx.emit_table(inputs, &t)
        }
        OutFormat::Json => {
            let mut body = Map::new();
            body.insert(
                u.pick("r_q_nats", "r_q_bits").to_string(),
                json_num(u.conv(rep.r_q)),
            );
            body.insert(
                u.pick("r_semi_upper_nats", "r_semi_upper_bits").to_string(),
                json_num(u.conv(rep.r_semi_upper)),
            );
            body.insert(
                u.pick("r_q_uniform_nats", "r_q_uniform_bits").to_string(),
                json_num(u.conv(rep.r_q_uniform)),
            );
            body.insert(
                "optimal_priors".to_string(),
                Value::Array(rep.optimal_priors.iter().map(|&p| json_num(p)).collect()),
            );
            ctx.emit(&json_document(inputs, &[("cutoff", Value::Object(body))]))
        }
    }
}

fn reliability_gaussian(ctx: &Ctx, a: crate::GaussianCutoffArgs) -> Result<(), CliError> {
    let nsc_spec = ctx.cfg.require(a.nsc, "nsc")?;
    let lambda = parse_f64(
        &ctx.cfg.merge(a.lambda, "lambda").unwrap_or_else(|| "0.5".into()),
        "lambda",
    )?;
    ctx.cfg.reject_unknown()?;
    let points = parse_sweep(&nsc_spec, "nsc", ctx.log)?;
    let u = ctx.units;
    let rows = run_rows(&points, ctx.jobs, |&nsc| {
        Ok(vec![
            Cell::echo(nsc),
            Cell::echo(lambda),
            Cell::F(u.conv(reliability::gaussian_cutoff(nsc, lambda)?)),
        ])
    })?;
    let t = Table {
        columns: vec!["Nsc", "lambda", u.pick("R_q_nats", "R_q_bits")],
        rows,
    };
    let inputs = json!({"nsc": nsc_spec, "lambda": lambda, "units": u.tag()});
    ctx.emit_table(inputs, &t)
}

fn estimate(ctx: &Ctx, a: crate::EstimateArgs) -> Result<(), CliError> {
    let ns_spec = ctx.cfg.require(a.ns, "ns")?;
    let eps_spec = ctx.cfg.merge(a.epsilon, "epsilon").unwrap_or_else(|| "1".into());
    ctx.cfg.reject_unknown()?;
    let points = product2(
        &parse_sweep(&ns_spec, "ns", ctx.log)?,
        &parse_sweep(&eps_spec, "epsilon", ctx.log)?,
    );
    let rows = run_rows(&points, ctx.jobs, |&(ns, eps)| {
        let sq = estimation::squeezed_snr(ns, eps)?;
        let coh = estimation::coherent_snr(ns, eps)?;
        let (mu, nu) = sq
            .squeeze
            .map(|s| (s.mu(), s.nu()))
            .unwrap_or((1.0, 0.0));
        Ok(vec![
            Cell::echo(ns),
            Cell::echo(eps),
            Cell::F(sq.snr),
            Cell::F(sq.variance),
            Cell::F(coh.snr),
            Cell::F(coh.variance),
            Cell::F(mu),
            Cell::F(nu),
        ])
    })?;
    let t = Table {
        columns: vec![
            "Ns",
            "epsilon",
            "snr_squeezed",
            "var_squeezed",
            "snr_coherent",
            "var_coherent",
            "mu",
            "nu",
        ],
        rows,
    };
    let inputs = json!({"ns": ns_spec, "epsilon": eps_spec});
    ctx.emit_table(inputs, &t)
}

struct CipherSetup {
    params: CipherParams,
    seed: u64,
    mapper_name: String,
}

fn cipher_setup(
    ctx: &Ctx,
    m: Option<String>,
    ns: Option<String>,
    key_bits: Option<String>,
    mapper: Option<String>,
    taps: Option<String>,
) -> Result<CipherSetup, CliError> {
    let m = parse_u32(&ctx.cfg.require(m, "m")?, "m")?;
    let ns = parse_f64(&ctx.cfg.require(ns, "ns")?, "ns")?;
    let key_bits = parse_u32(&ctx.cfg.require(key_bits, "key-bits")?, "key-bits")?;
    let mapper_name = ctx
        .cfg
        .merge(mapper, "mapper")
        .unwrap_or_else(|| "keyed-polarity".into());
    let mapper = match mapper_name.as_str() {
        "keyed-polarity" => Mapper::KeyedPolarity,
        "direct" => Mapper::Direct,
        other => {
            return Err(CliError::Usage(format!(
                "--mapper must be keyed-polarity or direct, got '{other}'"
            )))
        }
    };
    let seed = ctx.seed_or(1)?;
    let mut params = CipherParams::new(m, ns, key_bits, seed)?.with_mapper(mapper);
    if let Some(t) = ctx.cfg.merge(taps, "taps") {
        params = params.with_taps(parse_u32_list(&t, "taps")?.into_iter().collect())?;
    }
    Ok(CipherSetup {
        params,
        seed,
        mapper_name,
    })
}

fn cipher_inputs(s: &CipherSetup, u: Units) -> Value {
    json!({
        "m": s.params.m,
        "ns": s.params.ns,
        "key_bits": s.params.key_bits,
        "seed": s.seed,
        "lfsr_taps": s.params.lfsr_taps,
        "mapper": s.mapper_name,
        "units": u.tag(),
    })
}

fn cipher_oracle_check(params: &CipherParams) -> Result<(), CliError> {
    let two_m = 2 * params.m;
    if two_m > 16 {
        return Ok(()); // dense Fock oracle is only tractable for small rings
    }
    let eve = cipher::eve_channel(params, EveAttack::Srm)?;
    let ring = Constellation::psk(two_m as usize, params.ns)?;
    let oracle = fock::srm_channel_oracle(&ring, None)?;
    let mut worst = 0.0f64;
    for j in 0..two_m as usize {
        worst = worst.max((eve.prob(0, j) - oracle[(0, j)]).abs());
    }
    oracle_gate("the eavesdropper channel", worst)
}

fn cipher_report(ctx: &Ctx, a: crate::CipherReportArgs) -> Result<(), CliError> {
    let setup = cipher_setup(ctx, a.m, a.ns, a.key_bits, a.mapper, a.taps)?;
    ctx.cfg.reject_unknown()?;
    if ctx.oracle {
        cipher_oracle_check(&setup.params)?;
    }
    let rep = cipher::security_report(&setup.params)?;
    let u = ctx.units;
    let inputs = cipher_inputs(&setup, u);
    match ctx.format_or(OutFormat::Json) {
        OutFormat::Json => {
            let mut body = Map::new();
            body.insert("pe_bob".into(), json_num(rep.pe_bob));
            body.insert("pe_eve".into(), json_num(rep.pe_eve));
            body.insert(
                u.pick("c1_eve_lower_nats", "c1_eve_lower_bits").to_string(),
                json_num(u.conv(rep.c1_eve_lower)),
            );
            body.insert(
                u.pick("eve_data_info_nats", "eve_data_info_bits").to_string(),
                json_num(u.conv(rep.eve_data_info_nats)),
            );
            body.insert(
                u.pick("bob_mutual_info_nats", "bob_mutual_info_bits").to_string(),
                json_num(u.conv(rep.bob_mutual_info_nats)),
            );
            body.insert("masking_number".into(), json!(rep.masking_number));
            body.insert("masking_warning".into(), json!(rep.masking_warning));
            body.insert("unicity_lower_bound".into(), json!(rep.unicity_lower_bound));
            body.insert("advantage".into(), json!(rep.advantage));
            ctx.emit(&json_document(inputs, &[("report", Value::Object(body))]))
        }
        OutFormat::Csv => {
            let t = Table {
                columns: vec![
                    "M",
                    "Ns",
                    "key_bits",
                    "seed",
                    "pe_bob",
                    "pe_eve",
                    u.pick("c1_eve_lower_nats", "c1_eve_lower_bits"),
                    u.pick("eve_data_info_nats", "eve_data_info_bits"),
                    u.pick("bob_mutual_info_nats", "bob_mutual_info_bits"),
                    "masking_number",
                    "masking_warning",
                    "unicity_lower_bound",
                    "advantage",
                ],
                rows: vec![vec![
                    Cell::Str(setup.params.m.to_string()),
                    Cell::echo(setup.params.ns),
                    Cell::Str(setup.params.key_bits.to_string()),
                    Cell::Str(setup.seed.to_string()),
                    Cell::F(rep.pe_bob),
                    Cell::F(rep.pe_eve),
                    Cell::F(u.conv(rep.c1_eve_lower)),
                    Cell::F(u.conv(rep.eve_data_info_nats)),
                    Cell::F(u.conv(rep.bob_mutual_info_nats)),
                    Cell::U(rep.masking_number),
                    Cell::Str(rep.masking_warning.to_string()),
                    rep.unicity_lower_bound.map(Cell::U).unwrap_or(Cell::Empty),
                    Cell::Str(rep.advantage.to_string()),
                ]],
            };
            ctx.emit_table(inputs, &t)
        }
    }
}

fn cipher_simulate(ctx: &Ctx, a: crate::CipherSimulateArgs) -> Result<(), CliError> {
    let setup = cipher_setup(ctx, a.m, a.ns, a.key_bits, a.mapper, a.taps)?;
    let slots = parse_usize(
        &ctx.cfg.merge(a.slots, "slots").unwrap_or_else(|| "10000".into()),
        "slots",
    )?;
    let noise_seed = parse_u64(
        &ctx.cfg
            .merge(a.noise_seed, "noise-seed")
            .unwrap_or_else(|| "42".into()),
        "noise-seed",
    )?;
    let data_seed = parse_u64(
        &ctx.cfg
            .merge(a.data_seed, "data-seed")
            .unwrap_or_else(|| "7".into()),
        "data-seed",
    )?;
    ctx.cfg.reject_unknown()?;
    if ctx.oracle {
        cipher_oracle_check(&setup.params)?;
    }

    let data = cipher::random_bits(slots, data_seed);
    let trace = cipher::simulate_trace(&data, &setup.params, noise_seed)?;
    let m = &trace.metrics;
    let mut inputs = cipher_inputs(&setup, ctx.units);
    {
        let obj = inputs.as_object_mut().expect("inputs object");
        obj.insert("slots".into(), json!(slots));
        obj.insert("noise_seed".into(), json!(noise_seed));
        obj.insert("data_seed".into(), json!(data_seed));
    }
    match ctx.format_or(OutFormat::Json) {
        OutFormat::Json => {
            let head = 16.min(slots);
            let body = json!({
                "slots": m.slots,
                "bob_bit_errors": m.bob_bit_errors,
                "bob_ber": json_num(m.bob_ber),
                "eve_state_errors": m.eve_state_errors,
                "eve_state_error_rate": json_num(m.eve_state_error_rate),
                "closed_form": {
                    "pe_bob_homodyne": json_num(cipher::bob_error_probability(
                        setup.params.ns, cipher::BobReceiver::Homodyne)?),
                    "pe_bob_quantum": json_num(cipher::bob_error_probability(
                        setup.params.ns, cipher::BobReceiver::Quantum)?),
                },
            });
            let head_block = json!({
                "data_bits": trace.data_bits[..head],
                "running_key": trace.running_key[..head],
                "polarity": trace.polarity[..head],
                "bob_decisions": trace.bob_decisions[..head],
                "eve_outcomes": trace.eve_outcomes[..head],
            });
            ctx.emit(&json_document(
                inputs,
                &[("metrics", body), ("head", head_block)],
            ))
        }
        OutFormat::Csv => {
            let t = Table {
                columns: vec![
                    "slots",
                    "bob_bit_errors",
                    "bob_ber",
                    "eve_state_errors",
                    "eve_state_error_rate",
                ],
                rows: vec![vec![
                    Cell::U(m.slots as u64),
                    Cell::U(m.bob_bit_errors),
                    Cell::F(m.bob_ber),
                    Cell::U(m.eve_state_errors),
                    Cell::F(m.eve_state_error_rate),
                ]],
            };
            ctx.emit_table(inputs, &t)
        }
    }
}

fn reading_table(ctx: &Ctx, a: crate::ReadingArgs) -> Result<(), CliError> {
    let alpha2_spec = ctx.cfg.require(a.alpha2, "alpha2")?;
    let xi0 = parse_f64(
        &ctx.cfg.merge(a.xi0, "xi0").unwrap_or_else(|| "0.5".into()),
        "xi0",
    )?;
    ctx.cfg.reject_unknown()?;
    let points = parse_sweep(&alpha2_spec, "alpha2", ctx.log)?;
    let priors = (xi0, 1.0 - xi0);
    let oracle = ctx.oracle;
    let rows = run_rows(&points, ctx.jobs, |&a2| {
        let alpha = Amplitude::from_photon_number(a2);
        let scenario = |src, rcv| reading::ReadingScenario::new(alpha, PI, src, rcv, priors);
        let pe_h = reading::reading_error(&scenario(
            reading::ReadingSource::Coherent,
            reading::ReadingReceiver::Homodyne,
        )?)?;
        let pe_q1 = reading::reading_error(&scenario(
            reading::ReadingSource::Coherent,
            reading::ReadingReceiver::Quantum,
        )?)?;
        let pe_q2 = reading::reading_error(&scenario(
            reading::ReadingSource::QuasiBell,
            reading::ReadingReceiver::Quantum,
        )?)?;
        let pair = QuasiBellPair::new(alpha)?;
        let eof = reading::entanglement_of_formation(1, pair.kappa)?;
        if oracle {
            let hel = fock::helstrom_binary_oracle(alpha, Amplitude(-alpha.0), xi0, None)?;
            oracle_gate("the quantum reading error", (pe_q1 - hel).abs())?;
            let psi1 = fock::quasi_bell_fock(&pair, 1, None)?;
            let ebits = fock::matrix_entropy(&psi1.reduced_a())? / LN_2;
            oracle_gate("the entanglement of formation", (eof - ebits).abs())?;
        }
        Ok(vec![
            Cell::echo(a2),
            Cell::F(pe_h),
            Cell::F(pe_q1),
            Cell::F(pe_q2),
            Cell::F(eof),
        ])
    })?;
    let t = Table {
        columns: vec!["alpha2", "pe_homodyne", "pe_q1", "pe_q2", "eof_psi1"],
        rows,
    };
    let inputs = json!({"alpha2": alpha2_spec, "xi0": xi0});
    ctx.emit_table(inputs, &t)
}
