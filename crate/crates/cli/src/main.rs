use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use pencil_backerr::{BlockSet, Field, OracleConfig};
use pencil_cli::commands::*;
use pencil_cli::suites::Fault;

#[derive(Parser)]
#[command(name = "pencil", version, about = "structured backward errors for imaginary eigenvalues of port-Hamiltonian pencils")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// backward errors of one approximate eigenpair
    Compute(ComputeOpts),
    /// eigenvalue backward errors over a grid on the imaginary axis
    Sweep(SweepOpts),
    /// comparison tables for admissible eigenpairs of one pencil
    Compare(CompareOpts),
    /// run the invariant suites
    Verify(VerifyOpts),
    /// write a random pencil file
    Generate(GenerateOpts),
}

#[derive(Clone, Copy, ValueEnum)]
enum StructureArg {
    Block,
    Sym,
    Both,
}

#[derive(Clone, Copy, ValueEnum)]
enum FieldArg {
    Complex,
    Real,
}

#[derive(Clone, Copy, ValueEnum)]
enum OutputArg {
    Text,
    Csv,
    Machine,
}

#[derive(Clone, Copy, ValueEnum)]
enum FaultArg {
    None,
    Divisor,
}

const ALL_SCOPES: &str = "JE,RE,JR,JB,RB,EB,JRB,REB,JEB,JRE,JREB";

#[derive(Args)]
struct SourceOpts {
    /// pencil file; when absent a random pencil is drawn from --seed
    #[arg(long)]
    pencil: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(short, long, default_value_t = 4)]
    n: usize,
    #[arg(short, long, default_value_t = 3)]
    m: usize,
}

impl SourceOpts {
    fn source(&self) -> PencilSource {
        match &self.pencil {
            Some(p) => PencilSource::File(p.clone()),
            None => PencilSource::Seed { n: self.n, m: self.m, seed: self.seed },
        }
    }
}

#[derive(Args)]
struct ComputeOpts {
    #[arg(long)]
    pencil: PathBuf,
    /// purely imaginary eigenvalue, e.g. i0.25 or 0.25i
    #[arg(long, allow_hyphen_values = true)]
    lambda: String,
    /// eigenvector file
    #[arg(long)]
    x: PathBuf,
    #[arg(long, default_value = ALL_SCOPES)]
    scopes: String,
    #[arg(long, value_enum, default_value_t = StructureArg::Both)]
    structure: StructureArg,
    #[arg(long, value_enum, default_value_t = FieldArg::Complex)]
    field: FieldArg,
    #[arg(long, default_value_t = DEFAULT_DIGITS)]
    precision: usize,
    #[arg(long, value_enum, default_value_t = OutputArg::Text)]
    output: OutputArg,
}

#[derive(Args)]
struct SweepOpts {
    #[command(flatten)]
    source: SourceOpts,
    /// t_min:t_max:count
    #[arg(long, allow_hyphen_values = true, default_value = "-3:3:121")]
    grid: String,
    #[arg(long, default_value = ALL_SCOPES)]
    scopes: String,
    #[arg(long, value_enum, default_value_t = StructureArg::Block)]
    structure: StructureArg,
    /// grid points closer than this to zero are skipped
    #[arg(long, default_value_t = 0.05)]
    min_abs_t: f64,
    /// significant digits; full precision when absent
    #[arg(long)]
    precision: Option<usize>,
}

#[derive(Args)]
struct CompareOpts {
    #[command(flatten)]
    source: SourceOpts,
    #[arg(long, default_value_t = 7)]
    num_lambdas: usize,
    #[arg(long, default_value_t = DEFAULT_DIGITS)]
    precision: usize,
    #[arg(long, value_enum, default_value_t = OutputArg::Text)]
    output: OutputArg,
}

#[derive(Args)]
struct VerifyOpts {
    #[command(flatten)]
    source: SourceOpts,
    #[arg(long, default_value_t = 20)]
    instances: usize,
    #[arg(long, default_value_t = OracleConfig::default().restarts)]
    restarts: usize,
    /// deliberately break a closed form to see the suites catch it
    #[arg(long, value_enum, default_value_t = FaultArg::None)]
    inject_fault: FaultArg,
}

#[derive(Args)]
struct GenerateOpts {
    #[arg(short, long)]
    n: usize,
    #[arg(short, long)]
    m: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    real: bool,
    /// allow a merely passive draw (skip the strict passivity screen)
    #[arg(long)]
    non_strict: bool,
    /// dimension of the common kernel of R and B^H
    #[arg(long)]
    kernel_dim: Option<usize>,
    #[arg(long)]
    description: Option<String>,
    /// write an admissible eigenvector file here as well
    #[arg(long)]
    query_out: Option<PathBuf>,
}

fn output(o: OutputArg) -> Output {
    match o {
        OutputArg::Text => Output::Text,
        OutputArg::Csv => Output::Csv,
        OutputArg::Machine => Output::Machine,
    }
}

fn structure(s: StructureArg) -> Structure {
    match s {
        StructureArg::Block => Structure::Block,
        StructureArg::Sym => Structure::Sym,
        StructureArg::Both => Structure::Both,
    }
}

fn scopes(s: &str) -> Result<Vec<BlockSet>, CmdOutput> {
    parse_scopes(s).map_err(|e| CmdOutput { stdout: String::new(), stderr: format!("error: {e}\n"), code: EXIT_INPUT })
}

fn run(cli: Cli) -> CmdOutput {
    match cli.cmd {
        Cmd::Compute(o) => {
            let scopes = match scopes(&o.scopes) {
                Ok(s) => s,
                Err(e) => return e,
            };
            let out = output(o.output);
            cmd_compute(&ComputeArgs {
                pencil: o.pencil,
                lambda: o.lambda,
                x: o.x,
                scopes,
                structure: structure(o.structure),
                field: match o.field {
                    FieldArg::Complex => Field::Complex,
                    FieldArg::Real => Field::Real,
                },
                precision: o.precision,
                output: out,
            })
        }
        Cmd::Sweep(o) => {
            let scopes = match scopes(&o.scopes) {
                Ok(s) => s,
                Err(e) => return e,
            };
            let grid = match o.grid.parse::<Grid>() {
                Ok(g) => g,
                Err(e) => return CmdOutput { stdout: String::new(), stderr: format!("error: {e}\n"), code: EXIT_INPUT },
            };
            cmd_sweep(&SweepArgs {
                pencil: o.source.source(),
                grid,
                scopes,
                structure: structure(o.structure),
                min_abs_t: o.min_abs_t,
                precision: o.precision,
            })
        }
        Cmd::Compare(o) => {
            let out = output(o.output);
            cmd_compare(&CompareArgs {
                pencil: o.source.source(),
                count: o.num_lambdas,
                seed: o.source.seed,
                precision: if matches!(out, Output::Machine) { None } else { Some(o.precision) },
                output: out,
            })
        }
        Cmd::Verify(o) => cmd_verify(&VerifyArgs {
            pencil: o.source.pencil.clone(),
            n: o.source.n,
            m: o.source.m,
            seed: o.source.seed,
            instances: o.instances,
            oracle: OracleConfig { restarts: o.restarts, ..OracleConfig::default() },
            fault: match o.inject_fault {
                FaultArg::None => Fault::None,
                FaultArg::Divisor => Fault::Divisor,
            },
        }),
        Cmd::Generate(o) => cmd_generate(&GenerateArgs {
            n: o.n,
            m: o.m,
            seed: o.seed,
            real: o.real,
            strictly_passive: !o.non_strict,
            kernel_dim: o.kernel_dim,
            description: o.description,
            query_out: o.query_out,
        }),
    }
}

fn main() -> ExitCode {
    let out = run(Cli::parse());
    let _ = std::io::stdout().write_all(out.stdout.as_bytes());
    let _ = std::io::stderr().write_all(out.stderr.as_bytes());
    ExitCode::from(out.code as u8)
}
