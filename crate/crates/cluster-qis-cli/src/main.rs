//! Command-line front end: channel generation, protocol runs, correction
//! synthesis, decoder audits, all-branch verification, security scans, and
//! configuration sweeps, with pinned conformance fixtures.
//!
//! Exit status: 0 all checks pass, 1 check or fixture failure, 2 usage
//! error, 3 I/O error.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use cluster_qis::channel::{
    build_circuit_form, build_product_form, channel_state, generation_circuit, reference_state,
    ChannelSource, ReferenceName,
};
use cluster_qis::protocol::{
    enumerate_protocol_branches, Bob1Style, Decoder, LockingVariant, ProtocolConfig, SecretState,
};
use cluster_qis::report::{
    check_against_fixture, to_canonical_json, write_canonical_json, FIXTURE_VERSION,
};
use cluster_qis::synth::{
    audit_decoder, security_scan, synthesize_with_escalation, variant_sweep, AuditReport,
    BitConvention, CorrectionTable, DecoderKind, Party, RowFlag, SecurityReport,
};
use cluster_qis::{Error, Result};

#[derive(Parser)]
#[command(
    name = "cluster-qis",
    about = "Quantum information splitting over linear cluster channels",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
enum SourceArg {
    Product,
    Circuit,
    Reference,
}

impl SourceArg {
    fn to_source(self) -> ChannelSource {
        match self {
            SourceArg::Product => ChannelSource::Product,
            SourceArg::Circuit => ChannelSource::Circuit,
            SourceArg::Reference => ChannelSource::Reference,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
enum HPsi1Arg {
    On,
    Off,
    Sweep,
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
enum StyleArg {
    Cnot,
    #[value(name = "cnot-h")]
    CnotH,
    #[value(name = "cz-h")]
    CzH,
    Sweep,
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
enum DecoderArg {
    Eq6,
    Eq8,
    Table,
}

/// Configuration flags shared by the protocol commands.
#[derive(Args, Debug, Serialize)]
struct ConfigArgs {
    /// Chain length N (>= 5 for protocol commands).
    #[arg(long)]
    n: usize,
    /// Channel construction; defaults to the sweep's accepted source.
    #[arg(long, value_enum)]
    source: Option<SourceArg>,
    /// Hadamard placement in the locking step.
    #[arg(long = "variant-h-psi1", value_enum, default_value = "sweep")]
    variant_h_psi1: HPsi1Arg,
    /// Bob1's unlocking style (N >= 6).
    #[arg(long = "bob1-style", value_enum, default_value = "sweep")]
    bob1_style: StyleArg,
}

impl ConfigArgs {
    /// Resolves flag values to a concrete configuration, consulting the
    /// variant sweep for anything left at `sweep`.
    fn resolve(&self) -> Result<ProtocolConfig> {
        if self.n < 5 {
            return Err(Error::invalid(format!(
                "protocol commands need --n >= 5, got {}",
                self.n
            )));
        }
        let want_source = self.source.map(SourceArg::to_source);
        let want_h = match self.variant_h_psi1 {
            HPsi1Arg::On => Some(true),
            HPsi1Arg::Off => Some(false),
            HPsi1Arg::Sweep => None,
        };
        let want_style = match self.bob1_style {
            StyleArg::Cnot => Some(Bob1Style::CnotThenMeasure),
            StyleArg::CnotH => Some(Bob1Style::CnotThenHadamards),
            StyleArg::CzH => Some(Bob1Style::CzThenHadamards),
            StyleArg::Sweep => None,
        };
        if let (Some(source), Some(h), Some(style)) = (want_source, want_h, want_style) {
            return Ok(ProtocolConfig::new(
                self.n,
                source,
                LockingVariant::new(h, style),
            ));
        }
        let report = variant_sweep(self.n)?;
        report
            .configs
            .iter()
            .filter(|c| c.fully_deterministic)
            .find(|c| {
                want_source.map_or(true, |s| c.source == s)
                    && want_h.map_or(true, |h| c.variant.h_on_psi1 == h)
                    && want_style.map_or(true, |s| c.variant.bob1_style == s)
            })
            .map(|c| ProtocolConfig::new(self.n, c.source, c.variant))
            .ok_or_else(|| {
                Error::CheckFailed(format!(
                    "no fully deterministic configuration matches the given flags at N={}",
                    self.n
                ))
            })
    }
}

#[derive(Args, Debug, Serialize)]
struct FixtureArgs {
    /// Directory holding pinned conformance fixtures.
    #[arg(long, default_value = "fixtures/v1")]
    fixtures: PathBuf,
    /// Rewrite the command's fixture instead of checking against it.
    #[arg(long = "regen-fixtures", default_value_t = false)]
    regen_fixtures: bool,
}

impl FixtureArgs {
    /// Checks (or regenerates) the artifact's pinned fixture. Missing
    /// fixtures are only an error when checking was explicitly possible.
    fn settle<T: Serialize>(&self, artifact: &T, file_name: &str) -> Result<bool> {
        let path = self.fixtures.join(file_name);
        if self.regen_fixtures {
            write_canonical_json(artifact, &path)?;
            eprintln!("regenerated fixture {}", path.display());
            return Ok(true);
        }
        if !path.exists() {
            eprintln!("note: no fixture at {}; nothing checked", path.display());
            return Ok(false);
        }
        check_against_fixture(artifact, &path)?;
        eprintln!("fixture {} matches", path.display());
        Ok(true)
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Emit the channel state, the redistributed protocol channel, and the
    /// generation circuit as JSON artifacts.
    Generate {
        /// Chain length (2..=16).
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value = "circuit")]
        source: SourceArg,
        /// Output directory.
        #[arg(long, default_value = "artifacts")]
        out: PathBuf,
    },
    /// Run the protocol once, sampling a single outcome path.
    Run {
        #[command(flatten)]
        config: ConfigArgs,
        /// Eight comma-separated reals (re,im pairs for the four secret
        /// coefficients); sampled from the seed when omitted.
        #[arg(long)]
        secret: Option<String>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value = "table")]
        decoder: DecoderArg,
        /// Correction table JSON to use instead of synthesizing one.
        #[arg(long)]
        table: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Synthesize the correction table for a configuration.
    Synthesize {
        #[command(flatten)]
        config: ConfigArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Audit a closed-form decoder against the synthesized table under every
    /// bit-reading convention.
    Audit {
        #[command(flatten)]
        config: ConfigArgs,
        #[arg(long, value_enum)]
        decoder: DecoderArg,
        #[arg(long)]
        table: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        fixtures: FixtureArgs,
    },
    /// Check every branch's recovery fidelity across seeded random secrets.
    Verify {
        #[command(flatten)]
        config: ConfigArgs,
        #[arg(long, value_enum, default_value = "table")]
        decoder: DecoderArg,
        #[arg(long)]
        table: Option<PathBuf>,
        /// Number of seeded random secrets.
        #[arg(long, default_value_t = 100)]
        secrets: usize,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        fixtures: FixtureArgs,
    },
    /// Scan each non-dealer party's reduced density matrix over secret pairs.
    Security {
        #[command(flatten)]
        config: ConfigArgs,
        /// Party to scan: bob1, bob<i>, charlie, or all.
        #[arg(long, default_value = "all")]
        party: String,
        #[arg(long, default_value_t = 50)]
        pairs: usize,
        #[arg(long, default_value_t = 11)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        fixtures: FixtureArgs,
    },
    /// Sweep channel sources and circuit variants, reporting which are
    /// fully deterministic.
    Sweep {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        fixtures: FixtureArgs,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            let code = match err {
                Error::InvalidInput(_) => 2u8,
                Error::CheckFailed(_) | Error::FixtureMismatch(_) => 1,
                Error::Io(_) | Error::Json(_) => 3,
                Error::DimensionMismatch(_) => 2,
            };
            ExitCode::from(code)
        }
    }
}

fn dispatch(command: Command) -> Result<()> {
    match command {
        Command::Generate { n, source, out } => generate(n, source, &out),
        Command::Run {
            config,
            secret,
            seed,
            decoder,
            table,
            out,
        } => run(config, secret, seed, decoder, table, out),
        Command::Synthesize { config, out } => synthesize(config, out),
        Command::Audit {
            config,
            decoder,
            table,
            out,
            fixtures,
        } => audit(config, decoder, table, out, fixtures),
        Command::Verify {
            config,
            decoder,
            table,
            secrets,
            seed,
            out,
            fixtures,
        } => verify(config, decoder, table, secrets, seed, out, fixtures),
        Command::Security {
            config,
            party,
            pairs,
            seed,
            out,
            fixtures,
        } => security(config, party, pairs, seed, out, fixtures),
        Command::Sweep { n, out, fixtures } => sweep(n, out, fixtures),
    }
}

fn write_or_print<T: Serialize>(artifact: &T, out: Option<&Path>) -> Result<()> {
    match out {
        Some(path) => {
            write_canonical_json(artifact, path)?;
            eprintln!("wrote {}", path.display());
        }
        None => print!("{}", to_canonical_json(artifact)?),
    }
    Ok(())
}

fn generate(n: usize, source: SourceArg, out: &Path) -> Result<()> {
    let state = match source.to_source() {
        ChannelSource::Circuit => build_circuit_form(n)?,
        ChannelSource::Product => build_product_form(n)?,
        ChannelSource::Reference => match n {
            5 => reference_state(ReferenceName::C5Prime)?,
            6 => reference_state(ReferenceName::C6Prime)?,
            _ => channel_state(ChannelSource::Reference, n)?,
        },
    };
    #[derive(Serialize)]
    struct Meta<'a> {
        fixture_version: u32,
        command: &'a str,
        n: usize,
        source: SourceArg,
    }
    write_canonical_json(
        &Meta {
            fixture_version: FIXTURE_VERSION,
            command: "generate",
            n,
            source,
        },
        &out.join("generate.json"),
    )?;
    write_canonical_json(&state, &out.join("state.json"))?;
    write_canonical_json(&generation_circuit(n)?, &out.join("circuit.json"))?;
    if n >= 5 {
        let channel = channel_state(source.to_source(), n)?;
        write_canonical_json(&channel, &out.join("channel.json"))?;
    }
    eprintln!("wrote state/circuit artifacts to {}", out.display());
    Ok(())
}

fn load_table(path: &Path) -> Result<CorrectionTable> {
    let text = std::fs::read_to_string(path)?;
    Ok(serde_json::from_str(&text)?)
}

fn table_for(config: &ProtocolConfig, table_path: Option<&Path>) -> Result<CorrectionTable> {
    match table_path {
        Some(path) => {
            let table = load_table(path)?;
            if table.n != config.n {
                return Err(Error::invalid(format!(
                    "table at {} is for N={}, requested N={}",
                    path.display(),
                    table.n,
                    config.n
                )));
            }
            Ok(table)
        }
        None => Ok(synthesize_with_escalation(config)?.0),
    }
}

fn parse_secret(text: Option<&str>, seed: u64) -> Result<SecretState> {
    match text {
        Some(csv) => {
            let (secret, adjustment) = SecretState::parse_csv(csv)?;
            if adjustment > 1e-6 {
                eprintln!(
                    "warning: secret coefficients renormalized (adjustment {adjustment:.3e})"
                );
            }
            Ok(secret)
        }
        None => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            Ok(SecretState::random(&mut rng))
        }
    }
}

fn decoder_of<'a>(
    arg: DecoderArg,
    n: usize,
    table: Option<&'a CorrectionTable>,
) -> Result<Decoder<'a>> {
    match arg {
        DecoderArg::Eq6 => {
            if n != 5 {
                return Err(Error::invalid("--decoder eq6 requires --n 5"));
            }
            Ok(Decoder::Eq6)
        }
        DecoderArg::Eq8 => {
            if n != 6 {
                return Err(Error::invalid("--decoder eq8 requires --n 6"));
            }
            Ok(Decoder::Eq8)
        }
        DecoderArg::Table => Ok(Decoder::Table(table.expect("table resolved for table decoder"))),
    }
}

fn run(
    config_args: ConfigArgs,
    secret_text: Option<String>,
    seed: u64,
    decoder_arg: DecoderArg,
    table_path: Option<PathBuf>,
    out: Option<PathBuf>,
) -> Result<()> {
    let config = config_args.resolve()?;
    let secret = parse_secret(secret_text.as_deref(), seed)?;
    let table = match decoder_arg {
        DecoderArg::Table => Some(table_for(&config, table_path.as_deref())?),
        _ => None,
    };
    let decoder = decoder_of(decoder_arg, config.n, table.as_ref())?;
    let reports = enumerate_protocol_branches(&config, &secret, &decoder)?;

    // sample one path by its probability
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let draw: f64 = rng.gen();
    let mut acc = 0.0;
    let mut picked = reports.len() - 1;
    for (i, r) in reports.iter().enumerate() {
        acc += r.probability;
        if draw < acc {
            picked = i;
            break;
        }
    }
    let hit = &reports[picked];

    #[derive(Serialize)]
    struct RunReport<'a> {
        fixture_version: u32,
        command: &'a str,
        config: &'a ProtocolConfig,
        decoder: DecoderArg,
        seed: u64,
        transcript: String,
        probability: f64,
        fidelity: Option<f64>,
        correction: &'a cluster_qis::protocol::GateSequence,
    }
    let report = RunReport {
        fixture_version: FIXTURE_VERSION,
        command: "run",
        config: &config,
        decoder: decoder_arg,
        seed,
        transcript: hit.transcript.to_string(),
        probability: hit.probability,
        fidelity: hit.fidelity,
        correction: &hit.correction,
    };
    write_or_print(&report, out.as_deref())
}

fn synthesize(config_args: ConfigArgs, out: Option<PathBuf>) -> Result<()> {
    let config = config_args.resolve()?;
    let (table, level) = synthesize_with_escalation(&config)?;
    eprintln!(
        "N={} {:?}: {} corrected, {} zero-probability, {} unsynthesizable (dictionary: {})",
        config.n,
        config.source,
        table.count(RowFlag::Corrected),
        table.count(RowFlag::ZeroProbability),
        table.count(RowFlag::Unsynthesizable),
        level.tag(),
    );
    write_or_print(&table, out.as_deref())
}

#[derive(Serialize)]
struct AuditArtifact {
    fixture_version: u32,
    command: &'static str,
    config: ProtocolConfig,
    decoder: DecoderKind,
    audits: Vec<AuditReport>,
}

fn build_audit_artifact(config: &ProtocolConfig, kind: DecoderKind) -> Result<AuditArtifact> {
    let table = synthesize_with_escalation(config)?.0;
    let audits = BitConvention::ALL
        .iter()
        .map(|&conv| audit_decoder(&table, kind, conv))
        .collect::<Result<Vec<_>>>()?;
    Ok(AuditArtifact {
        fixture_version: FIXTURE_VERSION,
        command: "audit",
        config: *config,
        decoder: kind,
        audits,
    })
}

fn audit(
    config_args: ConfigArgs,
    decoder_arg: DecoderArg,
    table_path: Option<PathBuf>,
    out: Option<PathBuf>,
    fixtures: FixtureArgs,
) -> Result<()> {
    let config = config_args.resolve()?;
    let kind = match decoder_arg {
        DecoderArg::Eq6 => DecoderKind::Eq6,
        DecoderArg::Eq8 => DecoderKind::Eq8,
        DecoderArg::Table => {
            return Err(Error::invalid("audit needs --decoder eq6 or eq8"));
        }
    };
    if kind.chain_length() != config.n {
        return Err(Error::invalid(format!(
            "--decoder {:?} requires --n {}",
            decoder_arg,
            kind.chain_length()
        )));
    }
    let artifact = match table_path {
        Some(path) => {
            let table = table_for(&config, Some(&path))?;
            let audits = BitConvention::ALL
                .iter()
                .map(|&conv| audit_decoder(&table, kind, conv))
                .collect::<Result<Vec<_>>>()?;
            AuditArtifact {
                fixture_version: FIXTURE_VERSION,
                command: "audit",
                config,
                decoder: kind,
                audits,
            }
        }
        None => build_audit_artifact(&config, kind)?,
    };
    for a in &artifact.audits {
        eprintln!(
            "{:?} under {:?}: {}/{} match; worked example: {}",
            kind, a.convention, a.matches, a.comparable_rows, a.worked_example.classification
        );
    }
    if let Some(path) = out.as_deref() {
        write_canonical_json(&artifact, path)?;
        eprintln!("wrote {}", path.display());
    }
    fixtures.settle(&artifact, &format!("audit_n{}.json", config.n))?;
    Ok(())
}

#[derive(Serialize)]
struct VerifyBranch {
    transcript: String,
    min_probability: f64,
    max_probability: f64,
    min_fidelity: Option<f64>,
}

#[derive(Serialize)]
struct VerifyArtifact {
    fixture_version: u32,
    command: &'static str,
    config: ProtocolConfig,
    decoder: DecoderArg,
    secrets: usize,
    seed: u64,
    branches: Vec<VerifyBranch>,
    min_fidelity: Option<f64>,
    all_branches_pass: bool,
}

fn verify(
    config_args: ConfigArgs,
    decoder_arg: DecoderArg,
    table_path: Option<PathBuf>,
    secrets: usize,
    seed: u64,
    out: Option<PathBuf>,
    fixtures: FixtureArgs,
) -> Result<()> {
    let config = config_args.resolve()?;
    let table = match decoder_arg {
        DecoderArg::Table => Some(table_for(&config, table_path.as_deref())?),
        _ => None,
    };
    let decoder = decoder_of(decoder_arg, config.n, table.as_ref())?;

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut branches: Vec<VerifyBranch> = Vec::new();
    for _ in 0..secrets {
        let secret = SecretState::random(&mut rng);
        let reports = enumerate_protocol_branches(&config, &secret, &decoder)?;
        if branches.is_empty() {
            branches = reports
                .iter()
                .map(|r| VerifyBranch {
                    transcript: r.transcript.to_string(),
                    min_probability: r.probability,
                    max_probability: r.probability,
                    min_fidelity: r.fidelity,
                })
                .collect();
        } else {
            for (b, r) in branches.iter_mut().zip(&reports) {
                b.min_probability = b.min_probability.min(r.probability);
                b.max_probability = b.max_probability.max(r.probability);
                b.min_fidelity = match (b.min_fidelity, r.fidelity) {
                    (Some(x), Some(y)) => Some(x.min(y)),
                    (x, None) => x,
                    (None, y) => y,
                };
            }
        }
    }
    let min_fidelity = branches
        .iter()
        .filter_map(|b| b.min_fidelity)
        .fold(None, |acc: Option<f64>, v| {
            Some(acc.map_or(v, |a| a.min(v)))
        });
    let all_branches_pass = branches
        .iter()
        .all(|b| b.min_fidelity.is_some_and(|f| f >= 1.0 - 1e-9));
    let artifact = VerifyArtifact {
        fixture_version: FIXTURE_VERSION,
        command: "verify",
        config,
        decoder: decoder_arg,
        secrets,
        seed,
        branches,
        min_fidelity,
        all_branches_pass,
    };
    eprintln!(
        "verify N={}: {} branches, min fidelity {:?}, all pass: {}",
        config.n,
        artifact.branches.len(),
        artifact.min_fidelity,
        artifact.all_branches_pass
    );
    if let Some(path) = out.as_deref() {
        write_canonical_json(&artifact, path)?;
        eprintln!("wrote {}", path.display());
    }
    fixtures.settle(&artifact, &format!("verify_n{}.json", config.n))?;
    if matches!(decoder_arg, DecoderArg::Table) && !artifact.all_branches_pass {
        return Err(Error::CheckFailed(
            "some branch missed the fidelity threshold under the synthesized table".into(),
        ));
    }
    Ok(())
}

#[derive(Serialize)]
struct SecurityArtifact {
    fixture_version: u32,
    command: &'static str,
    config: ProtocolConfig,
    pairs: usize,
    seed: u64,
    reports: Vec<SecurityReport>,
}

fn parse_party(text: &str, n: usize) -> Result<Vec<Party>> {
    match text {
        "all" => Ok(Party::all_for(n)),
        "bob1" => Ok(vec![Party::Bob1]),
        "charlie" => Ok(vec![Party::Charlie]),
        other => {
            if let Some(stripped) = other.strip_prefix("bob") {
                if let Ok(i) = stripped.parse::<usize>() {
                    if (2..=n.saturating_sub(5)).contains(&i) {
                        return Ok(vec![Party::MidBob(i)]);
                    }
                }
            }
            Err(Error::invalid(format!(
                "unknown party '{other}' (use bob1, bob<i>, charlie, or all)"
            )))
        }
    }
}

fn security(
    config_args: ConfigArgs,
    party: String,
    pairs: usize,
    seed: u64,
    out: Option<PathBuf>,
    fixtures: FixtureArgs,
) -> Result<()> {
    let config = config_args.resolve()?;
    let parties = parse_party(&party, config.n)?;
    let reports = parties
        .into_iter()
        .map(|p| security_scan(&config, p, pairs, seed))
        .collect::<Result<Vec<_>>>()?;
    for r in &reports {
        eprintln!("party {}: max trace distance {:.6e}", r.party, r.global_max);
    }
    let artifact = SecurityArtifact {
        fixture_version: FIXTURE_VERSION,
        command: "security",
        config,
        pairs,
        seed,
        reports,
    };
    if let Some(path) = out.as_deref() {
        write_canonical_json(&artifact, path)?;
        eprintln!("wrote {}", path.display());
    }
    if party == "all" {
        fixtures.settle(&artifact, &format!("security_n{}.json", config.n))?;
    }
    Ok(())
}

#[derive(Serialize)]
struct SweepArtifact {
    fixture_version: u32,
    command: &'static str,
    report: cluster_qis::synth::SweepReport,
}

fn sweep(n: usize, out: Option<PathBuf>, fixtures: FixtureArgs) -> Result<()> {
    let report = variant_sweep(n)?;
    for c in &report.configs {
        eprintln!(
            "source={:?} h_on_psi1={} style={}: corrected {}/{} ({})",
            c.source,
            c.variant.h_on_psi1,
            c.variant.bob1_style.tag(),
            c.corrected,
            c.transcripts,
            if c.fully_deterministic { "deterministic" } else { "not deterministic" },
        );
    }
    match &report.accepted {
        Some(c) => eprintln!(
            "accepted: source={:?} h_on_psi1={} style={}",
            c.source,
            c.variant.h_on_psi1,
            c.variant.bob1_style.tag()
        ),
        None => eprintln!("accepted: none (no fully deterministic configuration)"),
    }
    let artifact = SweepArtifact {
        fixture_version: FIXTURE_VERSION,
        command: "sweep",
        report,
    };
    if let Some(path) = out.as_deref() {
        write_canonical_json(&artifact, path)?;
        eprintln!("wrote {}", path.display());
    }
    fixtures.settle(&artifact, &format!("sweep_n{n}.json"))?;
    Ok(())
}
