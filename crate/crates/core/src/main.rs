use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crpinv::bench::{emit_csv, emit_plot_data, run_bench, summarize, BenchConfig, BenchMethod};
use crpinv::io::{read_float, read_rational, write_matrix_market_array, write_rational_text};
use crpinv::{
    check_greville, check_penrose, check_projection_equation, check_reverse_order_demands,
    cr_factorize, relative_residual, rpinv, svd_pinv, Error, FloatMatrix, Matrix, PenroseReport,
    PinvMethod, RatMatrix, Result, Scalar, DEFAULT_TOL,
};

#[derive(Parser)]
#[command(name = "crpinv", version, about = "Pseudoinverses through the CR factorization")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Domain {
    Rational,
    Float,
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    ReverseOrder,
    ClosedForm,
    Always,
}

impl From<MethodArg> for PinvMethod {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::ReverseOrder => PinvMethod::ReverseOrder,
            MethodArg::ClosedForm => PinvMethod::ClosedForm,
            MethodArg::Always => PinvMethod::Always,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Print C, R, the rank and the pivot columns of A = CR.
    Factorize {
        matrix: PathBuf,
        #[arg(long, value_enum, default_value = "rational")]
        domain: Domain,
    },
    /// Compute the pseudoinverse and verify the Penrose identities.
    Pinv {
        matrix: PathBuf,
        #[arg(long, value_enum, default_value = "reverse-order")]
        method: MethodArg,
        #[arg(long, value_enum, default_value = "rational")]
        domain: Domain,
    },
    #[command(subcommand)]
    Check(CheckCommand),
    /// Randomized sketched pseudoinverse with Gaussian P (m×p) and Q (n×q).
    Rpinv {
        matrix: PathBuf,
        #[arg(long)]
        p: usize,
        #[arg(long)]
        q: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Also check the Penrose identities and the error against the SVD pseudoinverse.
        #[arg(long)]
        validate: bool,
    },
    /// Time rpinv, rsvd and the direct SVD pseudoinverse on randsvd matrices.
    Bench(BenchArgs),
}

#[derive(Subcommand)]
enum CheckCommand {
    /// Test the four Penrose identities for G against A.
    Penrose {
        a: PathBuf,
        g: PathBuf,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
        #[arg(long, value_enum, default_value = "rational")]
        domain: Domain,
    },
    /// Test Greville's conditions for (CR)⁺ = R⁺C⁺.
    Greville {
        c: PathBuf,
        r: PathBuf,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
        #[arg(long, value_enum, default_value = "rational")]
        domain: Domain,
    },
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long, value_delimiter = ',', default_value = "100,200,400")]
    sizes: Vec<usize>,
    #[arg(long, default_value_t = 0.4)]
    alpha: f64,
    #[arg(long, default_value_t = 1e8)]
    cond: f64,
    #[arg(long, default_value_t = 5)]
    trials: usize,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
    #[arg(long, value_delimiter = ',', default_value = "rpinv,rsvd,direct")]
    methods: Vec<String>,
    /// Per-method medians for external plotting.
    #[arg(long)]
    plot_data: Option<PathBuf>,
}

trait Render: Scalar {
    fn read(path: &Path) -> Result<Matrix<Self>>;
    fn render(m: &Matrix<Self>) -> String;
}

impl Render for crpinv::Rational {
    fn read(path: &Path) -> Result<RatMatrix> {
        read_rational(path)
    }
    fn render(m: &RatMatrix) -> String {
        write_rational_text(m)
    }
}

impl Render for f64 {
    fn read(path: &Path) -> Result<FloatMatrix> {
        read_float(path)
    }
    fn render(m: &FloatMatrix) -> String {
        write_matrix_market_array(m)
    }
}

fn penrose_line(r: &PenroseReport) -> String {
    format!(
        "penrose: {} holds=[{}] max_residual={:e}",
        if r.is_pseudoinverse() { "pass" } else { "fail" },
        r.holds.map(|h| h.to_string()).join(","),
        r.max_residual()
    )
}

fn factorize<T: Render>(path: &Path) -> Result<()> {
    let f = cr_factorize(&T::read(path)?);
    let pivots: Vec<String> = f.pivot_cols.iter().map(ToString::to_string).collect();
    println!("rank {}", f.rank);
    println!("pivot_cols {}", pivots.join(" "));
    print!("C\n{}", T::render(&f.c));
    print!("R\n{}", T::render(&f.r_factor));
    Ok(())
}

fn pinv_cmd<T: Render>(path: &Path, method: PinvMethod) -> Result<()> {
    let a = T::read(path)?;
    let g = method.apply(&a)?;
    print!("{}", T::render(&g));
    println!("{}", penrose_line(&check_penrose(&a, &g, DEFAULT_TOL)?));
    Ok(())
}

fn check_penrose_cmd<T: Render>(a: &Path, g: &Path, tol: f64) -> Result<()> {
    let report = check_penrose(&T::read(a)?, &T::read(g)?, tol)?;
    let names = ["AGA = A", "GAG = G", "(GA)ᵀ = GA", "(AG)ᵀ = AG"];
    for (k, name) in names.iter().enumerate() {
        println!("{name}: {} residual={:e}", report.holds[k], report.residuals[k]);
    }
    println!("{}", penrose_line(&report));
    Ok(())
}

fn check_greville_cmd<T: Render>(c: &Path, r: &Path, tol: f64) -> Result<()> {
    let c = T::read(c)?;
    let r = T::read(r)?;
    let greville = check_greville(&c, &r)?;
    let projection = check_projection_equation(&c, &r, tol)?;
    let (d1, d2) = check_reverse_order_demands(&c, &r, tol)?;
    println!("greville: {greville}");
    println!("projection_equation: {projection}");
    println!("reverse_order_demands: {d1} {d2}");
    Ok(())
}

fn rpinv_cmd(path: &Path, p: usize, q: usize, seed: u64, validate: bool) -> Result<()> {
    let a = read_float(path)?;
    let res = rpinv(&a, p, q, seed)?;
    print!("{}", write_matrix_market_array(&res.approx));
    let r = res.achieved_ranks;
    println!("ranks pta={} aq={} a={}", r.pta, r.aq, r.a);
    println!("rank_preserving: {}", res.rank_preserving);
    if validate {
        println!("{}", penrose_line(&check_penrose(&a, &res.approx, DEFAULT_TOL)?));
        let oracle = svd_pinv(&a)?;
        println!("relative_error: {:e}", relative_residual(&res.approx, &oracle));
    }
    Ok(())
}

fn bench_cmd(args: BenchArgs) -> Result<()> {
    let methods = args
        .methods
        .iter()
        .map(|m| m.parse::<BenchMethod>())
        .collect::<Result<Vec<_>>>()?;
    let config = BenchConfig {
        sizes: args.sizes,
        alpha: args.alpha,
        condition: args.cond,
        trials: args.trials,
        seed: args.seed,
        methods,
    };
    config.validate()?;
    let records = run_bench(&config)?;
    emit_csv(&records, &args.out)?;
    let summaries = summarize(&records);
    for s in &summaries {
        println!(
            "{:>6} n={:<5} median_time={:.4e}s median_error={:.3e}",
            s.method.to_string(),
            s.n,
            s.median_wall_time_seconds,
            s.median_relative_error
        );
    }
    if let Some(path) = args.plot_data {
        emit_plot_data(&summaries, &path)?;
    }
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Factorize { matrix, domain } => match domain {
            Domain::Rational => factorize::<crpinv::Rational>(&matrix),
            Domain::Float => factorize::<f64>(&matrix),
        },
        Command::Pinv { matrix, method, domain } => match domain {
            Domain::Rational => pinv_cmd::<crpinv::Rational>(&matrix, method.into()),
            Domain::Float => pinv_cmd::<f64>(&matrix, method.into()),
        },
        Command::Check(CheckCommand::Penrose { a, g, tol, domain }) => match domain {
            Domain::Rational => check_penrose_cmd::<crpinv::Rational>(&a, &g, tol),
            Domain::Float => check_penrose_cmd::<f64>(&a, &g, tol),
        },
        Command::Check(CheckCommand::Greville { c, r, tol, domain }) => match domain {
            Domain::Rational => check_greville_cmd::<crpinv::Rational>(&c, &r, tol),
            Domain::Float => check_greville_cmd::<f64>(&c, &r, tol),
        },
        Command::Rpinv {
            matrix,
            p,
            q,
            seed,
            validate,
        } => rpinv_cmd(&matrix, p, q, seed, validate),
        Command::Bench(args) => bench_cmd(args),
    }
}

fn first_line(e: &Error) -> String {
    e.to_string().lines().next().unwrap_or_default().to_string()
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = e.print();
                return ExitCode::SUCCESS;
            }
            let rendered = e.to_string();
            eprintln!("{}", rendered.lines().next().unwrap_or("error: invalid arguments"));
            return ExitCode::from(2);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", first_line(&e));
            ExitCode::FAILURE
        }
    }
}
