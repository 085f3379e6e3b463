mod output;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use certilab::corpus::yes_instance;
use certilab::engine::{check_completeness, decide, CertificateMap, Scheme, WithModel};
use certilab::falsifier::{
    chunks_from_path, crossing_attack, cut_and_plug_search, default_cap, exhaustive_soundness, mutation_soundness,
    standard_mutations, AttackOutcome, SoundnessOutcome,
};
use certilab::graph::json::{instance_from_json, instance_to_json};
use certilab::graph::{
    make_cycle, make_dumbbell, make_path, make_random_connected, make_random_tree, make_random_weighted,
    make_symmetric_dumbbell, relabel_ids, sequential_ids, validate_instance, Graph, Instance,
};
use certilab::randomized::{amos_random_decide, default_p, estimate_acceptance};
use certilab::schemes::{scheme_by_name, CATALOG, PSEUDO_SCHEMES};
use certilab::views::Model;

use output::{emit, print_stdout, read, to_json, usage, write_atomic, CliResult, Failure, Outcome};

#[derive(Parser)]
#[command(name = "certilab")]
#[command(about = "Prove, verify and attack local certification schemes on graphs")]
#[command(version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a generated instance as JSON
    Generate(GenerateArgs),
    /// Run a scheme's prover on an instance
    Prove {
        #[arg(long)]
        scheme: String,
        #[arg(long)]
        instance: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run every node's verifier and report the verdict
    Verify {
        #[arg(long)]
        scheme: String,
        #[arg(long)]
        instance: PathBuf,
        #[arg(long)]
        certs: PathBuf,
        /// pls, nld or lcp:<T>
        #[arg(long)]
        model: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Search for certificates that make a no-instance accept
    Falsify(FalsifyArgs),
    /// Build a fooling cycle out of accepted paths
    Attack(AttackArgs),
    /// Randomized at-most-one decision without certificates
    RandomDecide {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long)]
        p: Option<f64>,
        #[arg(long, default_value_t = 100_000)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Run a single decision and exit with its outcome
        #[arg(long)]
        once: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Certificate sizes of the prover on generated yes-instances
    BenchSize {
        scheme: String,
        #[arg(long)]
        predicate: Option<String>,
        #[arg(long, value_delimiter = ',', default_value = "10,20,40,80")]
        sizes: Vec<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// List registered schemes
    List,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Path,
    Cycle,
    Tree,
    Connected,
    Weighted,
    Dumbbell,
    /// A yes-instance of the scheme given by --scheme
    Yes,
}

#[derive(Clone, Copy, ValueEnum)]
enum Variant {
    Symmetric,
    Asymmetric,
}

#[derive(Args)]
struct GenerateArgs {
    kind: Kind,
    #[arg(long, default_value_t = 10)]
    n: usize,
    #[arg(long)]
    m: Option<usize>,
    #[arg(long, default_value_t = 100)]
    w: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// triangle, path:<s>, cycle:<s> or tree:<s>
    #[arg(long, default_value = "triangle")]
    base: String,
    #[arg(long, default_value_t = 1)]
    k: usize,
    #[arg(long, value_enum, default_value_t = Variant::Symmetric)]
    variant: Variant,
    #[arg(long)]
    scheme: Option<String>,
    /// Replace sequential identifiers by a seeded permutation
    #[arg(long)]
    shuffle_ids: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct FalsifyArgs {
    #[arg(long)]
    scheme: String,
    #[arg(long)]
    instance: PathBuf,
    /// Longest certificate tried, in bits
    #[arg(long)]
    bits: Option<usize>,
    /// Assignment cap; defaults to CERTILAB_CAP or 10^8
    #[arg(long)]
    cap: Option<u128>,
    #[arg(long)]
    model: Option<String>,
    /// Replay the prover's certificates on mutated copies of a yes-instance
    #[arg(long, conflicts_with = "bits")]
    mutations: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum AttackKind {
    Crossing,
    CutAndPlug,
}

#[derive(Args)]
struct AttackArgs {
    kind: AttackKind,
    #[arg(long)]
    scheme: String,
    /// Path instance to attack; otherwise a path of --n nodes is generated
    #[arg(long)]
    instance: Option<PathBuf>,
    #[arg(long, default_value_t = 24)]
    n: usize,
    /// Ball radius for cut-and-plug
    #[arg(long, default_value_t = 1)]
    k: usize,
    /// Number of source paths for cut-and-plug
    #[arg(long, default_value_t = 2)]
    paths: usize,
    /// Where to write the fooled cycle instance
    #[arg(long)]
    out: Option<PathBuf>,
    /// Where to write the fooled cycle's certificates
    #[arg(long)]
    certs_out: Option<PathBuf>,
}

fn load_instance(path: &Path) -> Result<Instance, Failure> {
    let inst = instance_from_json(&read(path)?).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    let report = validate_instance(&inst);
    if !report.is_valid() {
        return Err(usage(format!(
            "{}: invalid instance: {}",
            path.display(),
            serde_json::to_string(&report.violations).expect("violations serialize")
        )));
    }
    Ok(inst)
}

fn load_scheme(name: &str, model: Option<&str>) -> Result<Box<dyn Scheme>, Failure> {
    let scheme = scheme_by_name(name).map_err(usage)?;
    match model {
        None => Ok(scheme),
        Some(m) => {
            let model: Model = m.parse().map_err(usage)?;
            Ok(Box::new(WithModel { inner: scheme, model }))
        }
    }
}

fn base_graph(spec: &str, seed: u64) -> Result<Graph, Failure> {
    let (kind, size) = match spec.split_once(':') {
        Some((k, s)) => (k, s.parse::<usize>().map_err(|_| usage(format!("bad base size in {spec:?}")))?),
        None => (spec, 3),
    };
    let inst = match kind {
        "triangle" => make_cycle(&sequential_ids(3)),
        "cycle" => make_cycle(&sequential_ids(size)),
        "path" => make_path(&sequential_ids(size)),
        "tree" => make_random_tree(size, seed),
        _ => return Err(usage(format!("unknown base graph {spec:?}"))),
    }
    .map_err(usage)?;
    Ok(inst.graph().clone())
}

fn generate(args: &GenerateArgs) -> CliResult {
    let n = args.n;
    let inst = match args.kind {
        Kind::Path => make_path(&sequential_ids(n)),
        Kind::Cycle => make_cycle(&sequential_ids(n)),
        Kind::Tree => make_random_tree(n, args.seed),
        Kind::Connected => make_random_connected(n, args.m.unwrap_or(n + n / 2), args.seed),
        Kind::Weighted => make_random_weighted(n, args.m.unwrap_or(n + n / 2), args.w, args.seed),
        Kind::Dumbbell => {
            let base = base_graph(&args.base, args.seed)?;
            match args.variant {
                Variant::Symmetric => make_symmetric_dumbbell(&base, args.k),
                Variant::Asymmetric => make_dumbbell(&base, args.k).map(|pair| pair.asymmetric),
            }
        }
        Kind::Yes => {
            let name = args.scheme.as_deref().ok_or_else(|| usage("generate yes needs --scheme"))?;
            scheme_by_name(name).map_err(usage)?;
            yes_instance(name, n, args.seed)
        }
    }
    .map_err(usage)?;
    let inst = if args.shuffle_ids { relabel_ids(&inst, args.seed) } else { inst };
    emit(args.out.as_deref(), &instance_to_json(&inst))?;
    Ok(Outcome::Pass)
}

fn prove(scheme: &str, instance: &Path, out: Option<&Path>) -> CliResult {
    let scheme = load_scheme(scheme, None)?;
    let inst = load_instance(instance)?;
    if let Err(reason) = scheme.membership(&inst) {
        return Err(Failure::Rejected(format!("not a yes-instance of {}: {reason}", scheme.name())));
    }
    let certs = scheme.prove(&inst).map_err(usage)?;
    emit(out, &certs.to_json())?;
    Ok(Outcome::Pass)
}

fn verify(scheme: &str, instance: &Path, certs: &Path, model: Option<&str>, out: Option<&Path>) -> CliResult {
    let scheme = load_scheme(scheme, model)?;
    let inst = load_instance(instance)?;
    let certs = CertificateMap::from_json(&read(certs)?).map_err(|e| usage(format!("{}: {e}", certs.display())))?;
    let verdict = decide(&inst, &certs, &scheme).map_err(usage)?;
    emit(out, &verdict.to_json())?;
    Ok(Outcome::from_pass(verdict.accepted()))
}

fn falsify(args: &FalsifyArgs) -> CliResult {
    let scheme = load_scheme(&args.scheme, args.model.as_deref())?;
    let inst = load_instance(&args.instance)?;
    if args.mutations {
        let report = mutation_soundness(&scheme, &inst, &standard_mutations(&inst)).map_err(usage)?;
        emit(args.out.as_deref(), &to_json(&report))?;
        return Ok(Outcome::from_pass(report.all_caught()));
    }
    let bits = args.bits.ok_or_else(|| usage("falsify needs --bits or --mutations"))?;
    let cap = args.cap.unwrap_or_else(default_cap);
    let report = exhaustive_soundness(&scheme, &inst, bits, cap).map_err(usage)?;
    emit(args.out.as_deref(), &to_json(&report))?;
    Ok(Outcome::from_pass(report.outcome == SoundnessOutcome::SoundUpToBudget))
}

fn write_fooled(outcome: &AttackOutcome, out: Option<&Path>, certs_out: Option<&Path>) -> Result<(), Failure> {
    if let AttackOutcome::Fooled { instance, certificates } = outcome {
        if let Some(path) = out {
            write_atomic(path, &instance_to_json(instance))?;
        }
        if let Some(path) = certs_out {
            write_atomic(path, &certificates.to_json())?;
        }
    }
    Ok(())
}

fn attack(args: &AttackArgs) -> CliResult {
    let scheme = load_scheme(&args.scheme, None)?;
    match args.kind {
        AttackKind::Crossing => {
            let path = match &args.instance {
                Some(p) => load_instance(p)?,
                None => make_path(&sequential_ids(args.n)).map_err(usage)?,
            };
            let certs = scheme.prove(&path).map_err(usage)?;
            let report = crossing_attack(&scheme, &path, &certs).map_err(usage)?;
            write_fooled(&report.outcome, args.out.as_deref(), args.certs_out.as_deref())?;
            print_stdout(&to_json(&report));
            Ok(Outcome::from_pass(!report.outcome.is_fooled()))
        }
        AttackKind::CutAndPlug => {
            let scheme = WithModel {
                inner: scheme,
                model: Model::Lcp { radius: args.k },
            };
            let mut pool = Vec::new();
            for t in 0..args.paths {
                let first = (t * args.n) as u64 + 1;
                let ids: Vec<u64> = (first..first + args.n as u64).collect();
                let path = make_path(&ids).map_err(usage)?;
                let certs = scheme.prove(&path).map_err(usage)?;
                pool.extend(chunks_from_path(&path, &certs, args.k).map_err(usage)?);
            }
            let report = cut_and_plug_search(&scheme, &pool, args.k).map_err(usage)?;
            write_fooled(&report.outcome, args.out.as_deref(), args.certs_out.as_deref())?;
            print_stdout(&to_json(&report));
            Ok(Outcome::from_pass(!report.outcome.is_fooled()))
        }
    }
}

fn random_decide(instance: &Path, p: Option<f64>, trials: u64, seed: u64, once: bool, out: Option<&Path>) -> CliResult {
    let inst = load_instance(instance)?;
    let p = p.unwrap_or_else(default_p);
    if once {
        let verdict = amos_random_decide(&inst, p, seed).map_err(usage)?;
        emit(out, &verdict.to_json())?;
        return Ok(Outcome::from_pass(verdict.accepted()));
    }
    let stats = estimate_acceptance(&inst, p, trials, seed).map_err(usage)?;
    emit(out, &to_json(&stats))?;
    Ok(Outcome::Pass)
}

#[derive(Serialize)]
struct SizePoint {
    n: usize,
    id_bits: u32,
    max_bits: usize,
    passed: bool,
}

#[derive(Serialize)]
struct SizeSeries {
    scheme: String,
    seed: u64,
    series: Vec<SizePoint>,
}

fn bench_size(scheme: &str, predicate: Option<&str>, sizes: &[usize], seed: u64, out: Option<&Path>) -> CliResult {
    let name = match predicate {
        Some(p) => format!("{scheme}:{p}"),
        None => scheme.to_string(),
    };
    let scheme = load_scheme(&name, None)?;
    let mut series = Vec::new();
    for &n in sizes {
        let inst = yes_instance(&name, n, seed).map_err(usage)?;
        let report = check_completeness(&scheme, &inst).map_err(usage)?;
        series.push(SizePoint {
            n: inst.node_count(),
            id_bits: report.id_bits,
            max_bits: report.certificate_bits,
            passed: report.passed,
        });
    }
    let all_passed = series.iter().all(|p| p.passed);
    emit(out, &to_json(&SizeSeries { scheme: name, seed, series }))?;
    Ok(Outcome::from_pass(all_passed))
}

fn list() -> CliResult {
    let descriptors: Vec<_> = CATALOG
        .iter()
        .chain(PSEUDO_SCHEMES)
        .map(|name| scheme_by_name(name).expect("registered").descriptor())
        .collect();
    print_stdout(&to_json(&descriptors));
    Ok(Outcome::Pass)
}

fn run(cli: Cli) -> CliResult {
    match cli.command {
        Command::Generate(args) => generate(&args),
        Command::Prove { scheme, instance, out } => prove(&scheme, &instance, out.as_deref()),
        Command::Verify {
            scheme,
            instance,
            certs,
            model,
            out,
        } => verify(&scheme, &instance, &certs, model.as_deref(), out.as_deref()),
        Command::Falsify(args) => falsify(&args),
        Command::Attack(args) => attack(&args),
        Command::RandomDecide {
            instance,
            p,
            trials,
            seed,
            once,
            out,
        } => random_decide(&instance, p, trials, seed, once, out.as_deref()),
        Command::BenchSize {
            scheme,
            predicate,
            sizes,
            seed,
            out,
        } => bench_size(&scheme, predicate.as_deref(), &sizes, seed, out.as_deref()),
        Command::List => list(),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(Outcome::Pass) => ExitCode::SUCCESS,
        Ok(Outcome::Fail) => ExitCode::from(1),
        Err(failure) => {
            eprintln!("error: {failure}");
            ExitCode::from(failure.code())
        }
    }
}
