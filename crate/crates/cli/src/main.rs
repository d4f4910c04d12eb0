// SPDX-License-Identifier: Apache-2.0

//! `iolb`: generate, harden, simulate and compare gate-level netlists.
//!
//! Exit codes: 0 success, 1 usage error, 2 input or parse error, 3 property
//! violation (a campaign below `--assert-corrected`).

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use iolb_core::analysis::{compare_report, cost_report, reliability_enumeration, CompareEntry};
use iolb_core::derive::{derive_error_table, simplify, Var};
use iolb_core::generate::{build_gate_demo, build_multiplier};
use iolb_core::harden::harden;
use iolb_core::netlist::{GateKind, HardeningMethod, Netlist};
use iolb_core::sim::{
    run_campaign, simulate_with_golden, CampaignConfig, CampaignSummary, FaultKind, FaultSpec, FaultUniverse,
    SimOptions, Stimulus, DEFAULT_CYCLES,
};
use iolb_core::text;

#[derive(Parser, Debug)]
#[command(name = "iolb", version, about = "Soft-error hardening toolkit for gate-level netlists")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Write a generated netlist.
    Gen(GenArgs),
    /// Apply a hardening pass to a netlist.
    Harden(HardenArgs),
    /// Print the error table and minimized error function of a gate kind.
    DeriveE(DeriveArgs),
    /// Simulate a netlist with optional faults against a golden model.
    Sim(SimArgs),
    /// Run single-fault campaigns on a generated multiplier.
    Campaign(CampaignArgs),
    /// Report resource cost and reliability of one or more netlists.
    Analyze(AnalyzeArgs),
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Subject {
    Mult,
    Gate,
}

#[derive(Args, Debug)]
struct GenArgs {
    subject: Subject,
    /// Operand width for `mult`.
    #[arg(long)]
    bits: Option<usize>,
    /// Gate kind for `gate`.
    #[arg(long, value_parser = parse_kind)]
    kind: Option<GateKind>,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Method {
    Iolb,
    Tmr,
    DwcCed,
}

impl From<Method> for HardeningMethod {
    fn from(m: Method) -> Self {
        match m {
            Method::Iolb => HardeningMethod::Iolb,
            Method::Tmr => HardeningMethod::Tmr,
            Method::DwcCed => HardeningMethod::DwcCed,
        }
    }
}

#[derive(Args, Debug)]
struct HardenArgs {
    #[arg(long, value_enum)]
    method: Method,
    #[arg(short, long)]
    input: PathBuf,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct DeriveArgs {
    #[arg(long, value_parser = parse_kind)]
    gate: GateKind,
    /// Show every variable, not just those E depends on.
    #[arg(long)]
    all_columns: bool,
    #[arg(long)]
    json: bool,
}

#[derive(Args, Debug)]
struct SimArgs {
    #[arg(short, long)]
    input: PathBuf,
    /// Unhardened reference; defaults to a fault-free copy of the input.
    #[arg(long)]
    golden: Option<PathBuf>,
    #[arg(long)]
    seed: u64,
    #[arg(long, default_value_t = DEFAULT_CYCLES)]
    cycles: usize,
    /// `NET:KIND@CYCLE`, KIND one of sa0, sa1, flip. Repeatable.
    #[arg(long = "fault")]
    faults: Vec<String>,
    /// Scrub before this cycle. Repeatable.
    #[arg(long)]
    scrub_at: Vec<usize>,
    /// Write a `cycle,net,value` trace.
    #[arg(long)]
    csv: Option<PathBuf>,
    /// Include every net in the CSV trace.
    #[arg(long)]
    all_nets: bool,
    #[arg(long)]
    json: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum CampaignMethod {
    None,
    Iolb,
    Tmr,
    DwcCed,
    All,
}

#[derive(Args, Debug)]
struct CampaignArgs {
    #[arg(long, value_enum)]
    method: CampaignMethod,
    #[arg(long)]
    bits: usize,
    #[arg(long, default_value_t = DEFAULT_CYCLES)]
    cycles: usize,
    #[arg(long)]
    seed: u64,
    #[arg(long, default_value = "module")]
    universe: FaultUniverse,
    /// Comma-separated fault kinds.
    #[arg(long, value_delimiter = ',', default_values = ["sa0", "sa1", "flip"])]
    kinds: Vec<FaultKind>,
    #[arg(long)]
    scrub_at: Vec<usize>,
    /// Worker threads; 0 picks one per core.
    #[arg(long, default_value_t = 0)]
    jobs: usize,
    /// Write the comparison JSON here.
    #[arg(long)]
    report: Option<PathBuf>,
    /// Exit with code 3 if a hardened design corrects less than PCT percent.
    #[arg(long, value_name = "PCT")]
    assert_corrected: Option<f64>,
    /// Print the comparison JSON instead of the table.
    #[arg(long)]
    json: bool,
}

#[derive(Args, Debug)]
struct AnalyzeArgs {
    /// Netlists to compare; all must share one interface.
    #[arg(short, long = "input", required = true)]
    inputs: Vec<PathBuf>,
    #[arg(long)]
    json: bool,
}

fn parse_kind(s: &str) -> Result<GateKind, String> {
    s.parse().map_err(|e: iolb_core::netlist::UnknownName| e.to_string())
}

enum Failure {
    Usage(anyhow::Error),
    Input(anyhow::Error),
    Property(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 1,
            Failure::Input(_) => 2,
            Failure::Property(_) => 3,
        }
    }
}

type Outcome = Result<(), Failure>;

fn usage(e: impl Into<anyhow::Error>) -> Failure {
    Failure::Usage(e.into())
}

fn input(e: impl Into<anyhow::Error>) -> Failure {
    Failure::Input(e.into())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("IOLB_LOG", "warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let result = match cli.command {
        Command::Gen(a) => cmd_gen(a),
        Command::Harden(a) => cmd_harden(a),
        Command::DeriveE(a) => cmd_derive(a),
        Command::Sim(a) => cmd_sim(a),
        Command::Campaign(a) => cmd_campaign(a),
        Command::Analyze(a) => cmd_analyze(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            match &f {
                Failure::Usage(e) | Failure::Input(e) => eprintln!("error: {e:#}"),
                Failure::Property(msg) => eprintln!("{msg}"),
            }
            ExitCode::from(f.code())
        }
    }
}

fn read_netlist(path: &Path) -> Result<Netlist, Failure> {
    let bytes = fs::read(path).with_context(|| format!("reading {}", path.display())).map_err(input)?;
    text::parse(&bytes).map_err(|e| input(anyhow!("{}:\n{e}", path.display())))
}

fn write_out(path: Option<&Path>, contents: &str) -> Outcome {
    match path {
        Some(p) => fs::write(p, contents)
            .with_context(|| format!("writing {}", p.display()))
            .map_err(input),
        None => {
            print!("{contents}");
            Ok(())
        }
    }
}

fn emit(n: &Netlist) -> Result<String, Failure> {
    text::emit(n).map_err(input)
}

fn cmd_gen(a: GenArgs) -> Outcome {
    let netlist = match a.subject {
        Subject::Mult => {
            let bits = a.bits.ok_or_else(|| usage(anyhow!("`gen mult` needs --bits")))?;
            build_multiplier(bits).map_err(usage)?
        }
        Subject::Gate => {
            let kind = a.kind.ok_or_else(|| usage(anyhow!("`gen gate` needs --kind")))?;
            build_gate_demo(kind).map_err(usage)?
        }
    };
    write_out(a.output.as_deref(), &emit(&netlist)?)
}

fn cmd_harden(a: HardenArgs) -> Outcome {
    let src = read_netlist(&a.input)?;
    let hardened = harden(&src, a.method.into()).map_err(input)?;
    log::info!("{}: {} gates -> {} gates", a.method.to_possible_value().unwrap().get_name(), src.gates().len(), hardened.gates().len());
    write_out(a.output.as_deref(), &emit(&hardened)?)
}

fn cmd_derive(a: DeriveArgs) -> Outcome {
    let table = derive_error_table(a.gate).map_err(usage)?;
    let function = simplify(&table);
    let columns: Vec<Var> = if a.all_columns {
        (0..table.var_count()).map(|i| Var::from_index(table.arity(), i)).collect()
    } else {
        function.support().to_vec()
    };
    let rendered = table.render(&columns);
    if a.json {
        let names: Vec<String> = columns.iter().map(|v| v.display_name(table.arity())).collect();
        let rows: Vec<Vec<u8>> = rendered
            .lines()
            .skip(1)
            .map(|l| l.split_whitespace().filter(|t| *t != "|").map(|t| t.parse().unwrap_or(0)).collect())
            .collect();
        let doc = serde_json::json!({
            "gate": a.gate.name(),
            "columns": names,
            "rows": rows,
            "expression": function.to_string(),
            "gates": function.gate_count(),
        });
        println!("{}", serde_json::to_string_pretty(&doc).expect("json"));
    } else {
        print!("{rendered}");
        println!();
        println!("{function}");
    }
    Ok(())
}

fn parse_fault(n: &Netlist, spec: &str) -> Result<FaultSpec, Failure> {
    let (net, rest) = spec
        .split_once(':')
        .ok_or_else(|| usage(anyhow!("fault `{spec}` is not NET:KIND@CYCLE")))?;
    let (kind, cycle) = rest
        .split_once('@')
        .ok_or_else(|| usage(anyhow!("fault `{spec}` is not NET:KIND@CYCLE")))?;
    let site = n
        .find_net(net)
        .ok_or_else(|| input(anyhow!("no net named `{net}`")))?;
    let kind: FaultKind = kind.parse().map_err(usage)?;
    let start_cycle = cycle
        .parse()
        .map_err(|_| usage(anyhow!("bad cycle `{cycle}` in fault `{spec}`")))?;
    Ok(FaultSpec {
        site,
        kind,
        start_cycle,
    })
}

fn cmd_sim(a: SimArgs) -> Outcome {
    let n = read_netlist(&a.input)?;
    let golden = a.golden.as_deref().map(read_netlist).transpose()?;
    let faults = a
        .faults
        .iter()
        .map(|f| parse_fault(&n, f))
        .collect::<Result<Vec<_>, _>>()?;
    let options = SimOptions {
        scrub_at: a.scrub_at.clone(),
        record_nets: a.all_nets,
    };
    let stimulus = Stimulus::Random {
        seed: a.seed,
        cycles: a.cycles,
    };
    let trace = simulate_with_golden(&n, golden.as_ref().unwrap_or(&n), &stimulus, &faults, &options).map_err(usage)?;
    if let Some(path) = &a.csv {
        write_out(Some(path), &trace.to_csv())?;
    }

    let mismatches = trace.mismatch_cycles();
    let mut fired: BTreeMap<String, usize> = BTreeMap::new();
    for (i, role) in trace.probe_roles.iter().enumerate() {
        let count = trace.cycles.iter().filter(|c| c.probes[i]).count();
        if count > 0 {
            *fired.entry(role.to_string()).or_default() += count;
        }
    }
    if a.json {
        let doc = serde_json::json!({
            "netlist": n.name(),
            "cycles": trace.cycles.len(),
            "faults": faults.len(),
            "mismatch_cycles": mismatches,
            "probe_activity": fired,
        });
        println!("{}", serde_json::to_string_pretty(&doc).expect("json"));
    } else {
        println!("{}: {} cycles, {} faults", n.name(), trace.cycles.len(), faults.len());
        match mismatches.first() {
            None => println!("outputs match golden on every cycle"),
            Some(first) => println!("outputs differ on {} cycles, first {first}", mismatches.len()),
        }
        for (role, count) in &fired {
            println!("  {role}: asserted {count} times");
        }
    }
    Ok(())
}

fn cmd_campaign(a: CampaignArgs) -> Outcome {
    let base = build_multiplier(a.bits).map_err(usage)?;
    let methods: Vec<Option<HardeningMethod>> = match a.method {
        CampaignMethod::All => [None]
            .into_iter()
            .chain(HardeningMethod::ALL.into_iter().map(Some))
            .collect(),
        CampaignMethod::None => vec![None],
        CampaignMethod::Iolb => vec![None, Some(HardeningMethod::Iolb)],
        CampaignMethod::Tmr => vec![None, Some(HardeningMethod::Tmr)],
        CampaignMethod::DwcCed => vec![None, Some(HardeningMethod::DwcCed)],
    };
    let mut config = CampaignConfig::new(
        Stimulus::Random {
            seed: a.seed,
            cycles: a.cycles,
        },
        a.seed,
    );
    config.universe = a.universe;
    config.kinds = a.kinds.clone();
    config.scrub_at = a.scrub_at.clone();
    config.jobs = a.jobs;

    let mut designs: Vec<(Option<HardeningMethod>, Netlist, CampaignSummary)> = Vec::new();
    for method in methods {
        let netlist = match method {
            Some(m) => harden(&base, m).map_err(input)?,
            None => base.clone(),
        };
        let (_, summary) = run_campaign(&netlist, Some(&base), &config).map_err(usage)?;
        log::info!(
            "{}: {}/{} corrected",
            summary.method,
            summary.corrected,
            summary.faults_total
        );
        designs.push((method, netlist, summary));
    }
    let entries: Vec<CompareEntry<'_>> = designs
        .iter()
        .map(|(method, netlist, summary)| CompareEntry {
            method: *method,
            netlist,
            campaign: Some(summary),
        })
        .collect();
    let comparison = compare_report(&entries).map_err(input)?;
    let json = comparison.to_json();
    if let Some(path) = &a.report {
        write_out(Some(path), &format!("{json}\n"))?;
    }
    if a.json {
        println!("{json}");
    } else {
        print!("{}", comparison.render_text());
    }

    if let Some(threshold) = a.assert_corrected {
        let failing: Vec<String> = designs
            .iter()
            .filter(|(m, _, s)| m.is_some() && s.corrected_pct < threshold)
            .map(|(_, _, s)| format!("{} corrected {:.3}% < {threshold}%", s.method, s.corrected_pct))
            .collect();
        if !failing.is_empty() {
            return Err(Failure::Property(failing.join("\n")));
        }
    }
    Ok(())
}

fn cmd_analyze(a: AnalyzeArgs) -> Outcome {
    let netlists = a
        .inputs
        .iter()
        .map(|p| read_netlist(p))
        .collect::<Result<Vec<_>, _>>()?;
    if let [n] = netlists.as_slice() {
        let cost = cost_report(n);
        let reliability = n.method().map(reliability_enumeration);
        if a.json {
            let doc = serde_json::json!({
                "report_version": iolb_core::analysis::REPORT_VERSION,
                "netlist": n.name(),
                "method": n.method().map(|m| m.name()),
                "cost": cost,
                "reliability": reliability.as_ref().map(|r| serde_json::json!({
                    "rows": r.rows,
                    "faithful_fraction": r.probability.to_string(),
                })),
            });
            println!("{}", serde_json::to_string_pretty(&doc).expect("json"));
        } else {
            println!("{}", n.name());
            println!("  lut_equiv      {}", cost.lut_equiv);
            println!("  flip_flops     {}", cost.flip_flops);
            println!("  io_pads        {}", cost.io_pads);
            println!("  raw_gate_count {}", cost.raw_gate_count);
            for (tag, t) in &cost.breakdown {
                println!("  {tag:<9} gates {:>6}  luts {:>6}  flip_flops {:>5}", t.gates, t.luts, t.flip_flops);
            }
            if let Some(r) = reliability {
                println!();
                print!("{}", r.render());
            }
        }
        return Ok(());
    }
    let entries: Vec<CompareEntry<'_>> = netlists
        .iter()
        .map(|n| CompareEntry {
            method: n.method(),
            netlist: n,
            campaign: None,
        })
        .collect();
    let comparison = compare_report(&entries).map_err(input)?;
    if a.json {
        println!("{}", comparison.to_json());
    } else {
        print!("{}", comparison.render_text());
    }
    Ok(())
}
