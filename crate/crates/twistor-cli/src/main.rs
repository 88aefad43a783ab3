//! Command-line front end for the rank-one twistor model.
//!
//! Exit codes: 0 success, 1 verification failure or inconsistent data,
//! 2 usage or parse errors.

mod descriptor;

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use twistor::harmonic::{fmt_sig, track_chambers, HarmonicDatum};
use twistor::lattice::{b_rank, descriptor_to_sequences, grw2, ns_u_tors, saturation};
use twistor::tate::InvariantSection;
use twistor::verify::{Injection, Suite, VerifyConfig};

const EXIT_FAIL: i32 = 1;
const EXIT_USAGE: i32 = 2;

#[derive(Parser)]
#[command(
    name = "twistor",
    about = "Coordinate conversion, identity verification, lattice analysis, and chamber tracking for the rank-one twistor model",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Convert between Higgs data (a, alpha) and the (weight, residue)
    /// coordinates at a point p of the twistor line.
    Convert(ConvertArgs),
    /// Run the named identity suites and report the worst defect of each.
    Verify(VerifyArgs),
    /// Analyze a descriptor: class groups, saturation, torsion quotient,
    /// kernel rank, and exactness of the generated sequences.
    Lattice(LatticeArgs),
    /// Track chamber offsets of a harmonic datum along a path; prints a CSV
    /// trace and, for closed paths, the net offsets.
    Track(TrackArgs),
}

#[derive(Args)]
struct ConvertArgs {
    /// Evaluation point p (complex, e.g. `0.5` or `1+2i`).
    #[arg(long, allow_hyphen_values = true)]
    p: String,
    /// Parabolic weight a of the Higgs datum.
    #[arg(long, allow_hyphen_values = true, requires = "alpha", conflicts_with_all = ["from_weight", "from_residue"])]
    a: Option<String>,
    /// Higgs residue alpha.
    #[arg(long, allow_hyphen_values = true, requires = "a")]
    alpha: Option<String>,
    /// Invert instead: the observed weight at p.
    #[arg(long, allow_hyphen_values = true, requires = "from_residue")]
    from_weight: Option<String>,
    /// Invert instead: the observed residue at p.
    #[arg(long, allow_hyphen_values = true, requires = "from_weight")]
    from_residue: Option<String>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Which suite to run.
    #[arg(long, default_value = "all")]
    suite: String,
    /// Random samples per identity.
    #[arg(long, default_value_t = 1000)]
    samples: usize,
    /// Seed for the sample generator; results are deterministic given it.
    #[arg(long, default_value_t = 7)]
    seed: u64,
    /// Tolerance for generic checks (pinned checks keep their own).
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
    /// Self-test fixture: inject a known defect and confirm it is caught.
    #[arg(long, value_parser = ["sigma-sign"])]
    inject: Option<String>,
}

#[derive(Args)]
struct LatticeArgs {
    /// Descriptor file path, or a built-in `@name`.
    #[arg(long)]
    descriptor: String,
}

#[derive(Args)]
struct TrackArgs {
    /// Parabolic weight a of the tracked datum.
    #[arg(long, allow_hyphen_values = true)]
    a: String,
    /// Higgs residue alpha.
    #[arg(long, allow_hyphen_values = true)]
    alpha: String,
    /// Path file: one complex sample per line (`re im` or `re,im`).
    #[arg(long, conflicts_with = "circle")]
    path: Option<String>,
    /// Closed circular path with this many segments.
    #[arg(long)]
    circle: Option<usize>,
    /// Radius for --circle.
    #[arg(long, default_value_t = 1.0)]
    radius: f64,
    /// Chamber base c: weights are kept in [c, c+1).
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    chamber_base: f64,
}

fn main() {
    let cli = Cli::parse();
    let code = match cli.command {
        Command::Convert(args) => cmd_convert(&args),
        Command::Verify(args) => cmd_verify(&args),
        Command::Lattice(args) => cmd_lattice(&args),
        Command::Track(args) => cmd_track(&args),
    };
    std::process::exit(code);
}

/// Parses `1.5`, `-2`, `1.5+2i`, `-i`, `2i`, or `re,im`.
fn parse_complex(s: &str) -> Result<Complex64, String> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if t.is_empty() {
        return Err("empty number".into());
    }
    if let Some((re, im)) = t.split_once(',') {
        let re: f64 = re.parse().map_err(|_| format!("bad real part `{re}`"))?;
        let im: f64 = im.parse().map_err(|_| format!("bad imaginary part `{im}`"))?;
        return Ok(Complex64::new(re, im));
    }
    if let Some(body) = t.strip_suffix('i') {
        // Split body into re and im at the last +/- that is not an exponent
        // sign and not the leading sign.
        let bytes = body.as_bytes();
        let mut split = None;
        for k in (1..bytes.len()).rev() {
            let c = bytes[k] as char;
            if (c == '+' || c == '-') && !matches!(bytes[k - 1] as char, 'e' | 'E') {
                split = Some(k);
                break;
            }
        }
        let (re_str, im_str) = match split {
            Some(k) => (&body[..k], &body[k..]),
            None => ("0", body),
        };
        let im: f64 = match im_str {
            "" | "+" => 1.0,
            "-" => -1.0,
            other => other.parse().map_err(|_| format!("bad imaginary part `{other}i`"))?,
        };
        let re: f64 = if re_str.is_empty() {
            0.0
        } else {
            re_str.parse().map_err(|_| format!("bad real part `{re_str}`"))?
        };
        return Ok(Complex64::new(re, im));
    }
    let re: f64 = t.parse().map_err(|_| format!("bad number `{t}`"))?;
    Ok(Complex64::new(re, 0.0))
}

fn parse_real(s: &str) -> Result<f64, String> {
    let z = parse_complex(s)?;
    if z.im != 0.0 {
        return Err(format!("expected a real number, got `{s}`"));
    }
    Ok(z.re)
}

fn fmt_complex(z: Complex64) -> String {
    if z.im == 0.0 {
        fmt_sig(z.re)
    } else if z.re == 0.0 {
        format!("{}i", fmt_sig(z.im))
    } else if z.im < 0.0 {
        format!("{}-{}i", fmt_sig(z.re), fmt_sig(-z.im))
    } else {
        format!("{}+{}i", fmt_sig(z.re), fmt_sig(z.im))
    }
}

fn usage_error(msg: &str) -> i32 {
    eprintln!("error: {msg}");
    EXIT_USAGE
}

fn cmd_convert(args: &ConvertArgs) -> i32 {
    let p = match parse_complex(&args.p) {
        Ok(p) => p,
        Err(e) => return usage_error(&format!("--p: {e}")),
    };
    match (&args.a, &args.alpha, &args.from_weight, &args.from_residue) {
        (Some(a), Some(alpha), None, None) => {
            let (a, alpha) = match (parse_real(a), parse_complex(alpha)) {
                (Ok(a), Ok(alpha)) => (a, alpha),
                (Err(e), _) => return usage_error(&format!("--a: {e}")),
                (_, Err(e)) => return usage_error(&format!("--alpha: {e}")),
            };
            let (w, r) = InvariantSection::new(a, alpha).coords_at(p);
            println!("weight = {}", fmt_sig(w));
            println!("residue = {}", fmt_complex(r));
            0
        }
        (None, None, Some(w), Some(r)) => {
            let (w, r) = match (parse_real(w), parse_complex(r)) {
                (Ok(w), Ok(r)) => (w, r),
                (Err(e), _) => return usage_error(&format!("--from-weight: {e}")),
                (_, Err(e)) => return usage_error(&format!("--from-residue: {e}")),
            };
            let s = InvariantSection::from_coords(w, r, p);
            println!("a = {}", fmt_sig(s.higgs_weight));
            println!("alpha = {}", fmt_complex(s.higgs_residue));
            0
        }
        _ => usage_error("provide either --a with --alpha, or --from-weight with --from-residue"),
    }
}

fn cmd_verify(args: &VerifyArgs) -> i32 {
    let suite: Suite = match args.suite.parse() {
        Ok(s) => s,
        Err(e) => return usage_error(&e),
    };
    let injection = match args.inject.as_deref() {
        None => Injection::None,
        Some("sigma-sign") => Injection::SigmaSignError,
        Some(other) => return usage_error(&format!("unknown injection `{other}`")),
    };
    let config = VerifyConfig {
        samples: args.samples,
        seed: args.seed,
        tol: args.tol,
        injection,
    };
    let results = twistor::verify::run(suite, &config);
    let mut failed = Vec::new();
    for r in &results {
        let status = if r.passed() { "PASS" } else { "FAIL" };
        println!(
            "{status}  {:<7} {:<34} max defect {:>10.3e}  (tol {:.1e})",
            r.suite, r.name, r.max_defect, r.tolerance
        );
        if !r.passed() {
            failed.push(r);
        }
    }
    println!(
        "verify: {} checks, {} passed, {} failed (suite {}, samples {}, seed {})",
        results.len(),
        results.len() - failed.len(),
        failed.len(),
        args.suite,
        args.samples,
        args.seed
    );
    if failed.is_empty() {
        0
    } else {
        for r in &failed {
            eprintln!(
                "failed identity: {}/{} (defect {:.3e} > tol {:.1e}); reproduce with --suite {} --samples {} --seed {}",
                r.suite, r.name, r.max_defect, r.tolerance, r.suite, args.samples, args.seed
            );
        }
        EXIT_FAIL
    }
}

fn cmd_lattice(args: &LatticeArgs) -> i32 {
    let (label, d) = match descriptor::load(&args.descriptor) {
        Ok(x) => x,
        Err(descriptor::LoadError::Parse(msg)) => {
            eprintln!("error: {msg}");
            return EXIT_USAGE;
        }
        Err(descriptor::LoadError::Inconsistent(msg)) => {
            eprintln!("inconsistent descriptor: {msg}");
            return EXIT_FAIL;
        }
    };
    println!("descriptor: {label} (k = {})", d.divisor_count);
    println!("H1(X) = {}", d.h1x);
    println!("H2(X) = {}", d.h2x);
    let data = saturation(&d);
    println!("NS(X,D) = {}", data.ns);
    println!("NS(X,D)^sat = {}", data.sat);
    println!("NS(U)^tors = {}", ns_u_tors(&d));
    let report = grw2(&d);
    println!("b = {}", b_rank(&d));
    println!(
        "rank H1(U) = {} = rank H1(X) + b = {} + {}",
        report.rank_h1u, report.rank_h1x, report.b
    );

    let sequences = match descriptor_to_sequences(&d) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("inconsistent descriptor: {e}");
            return EXIT_FAIL;
        }
    };
    let mut all_ok = true;
    for seq in &sequences {
        println!("sequence {}:", seq.name);
        println!("  {}", seq.group_names.join(" -> "));
        match seq.check() {
            Ok(report) => {
                for (i, verdict) in report.joints.iter().enumerate() {
                    println!("  joint at {}: {verdict}", seq.group_names[i + 1]);
                }
                if !report.all_exact() {
                    all_ok = false;
                }
            }
            Err(e) => {
                println!("  {e}");
                all_ok = false;
            }
        }
    }
    if all_ok {
        println!("verdict: all sequences exact");
        0
    } else {
        println!("verdict: exactness failure");
        EXIT_FAIL
    }
}

fn read_path_file(path: &str) -> Result<Vec<Complex64>, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("cannot read {path}: {e}"))?;
    let mut out = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let normalized = line.replace(char::is_whitespace, ",");
        let mut parts = normalized.split(',').filter(|t| !t.is_empty());
        let re: f64 = parts
            .next()
            .ok_or_else(|| format!("{path}:{}: empty sample", lineno + 1))?
            .parse()
            .map_err(|_| format!("{path}:{}: bad real part", lineno + 1))?;
        let im: f64 = match parts.next() {
            Some(t) => t
                .parse()
                .map_err(|_| format!("{path}:{}: bad imaginary part", lineno + 1))?,
            None => 0.0,
        };
        if parts.next().is_some() {
            return Err(format!("{path}:{}: too many fields", lineno + 1));
        }
        out.push(Complex64::new(re, im));
    }
    if out.is_empty() {
        return Err(format!("{path}: no samples"));
    }
    Ok(out)
}

fn circle_samples(segments: usize, radius: f64) -> Vec<Complex64> {
    (0..=segments)
        .map(|i| Complex64::from_polar(radius, std::f64::consts::TAU * i as f64 / segments as f64))
        .collect()
}

fn bisect(path: &[Complex64]) -> Vec<Complex64> {
    let mut out = Vec::with_capacity(path.len() * 2);
    for w in path.windows(2) {
        out.push(w[0]);
        out.push((w[0] + w[1]) / 2.0);
    }
    out.push(*path.last().expect("nonempty path"));
    out
}

fn cmd_track(args: &TrackArgs) -> i32 {
    let (a, alpha) = match (parse_real(&args.a), parse_complex(&args.alpha)) {
        (Ok(a), Ok(alpha)) => (a, alpha),
        (Err(e), _) => return usage_error(&format!("--a: {e}")),
        (_, Err(e)) => return usage_error(&format!("--alpha: {e}")),
    };
    let datum = HarmonicDatum::new(vec![(a, alpha)]);
    let base = [args.chamber_base];

    let mut circle_segments = args.circle;
    let mut path = match (&args.path, circle_segments) {
        (Some(file), None) => match read_path_file(file) {
            Ok(p) => p,
            Err(e) => return usage_error(&e),
        },
        (None, Some(n)) if n >= 1 => circle_samples(n, args.radius),
        _ => return usage_error("provide exactly one of --path FILE or --circle N"),
    };

    // Auto-refine coarse paths by bisection (regeneration for circles),
    // up to a hard cap.
    const MAX_SAMPLES: usize = 1 << 22;
    let trace = loop {
        match track_chambers(&datum, &path, &base) {
            Ok(trace) => break trace,
            Err(twistor::Error::RefinePath { .. }) if path.len() < MAX_SAMPLES => {
                path = match circle_segments {
                    Some(n) => {
                        circle_segments = Some(n * 2);
                        circle_samples(n * 2, args.radius)
                    }
                    None => bisect(&path),
                };
            }
            Err(twistor::Error::RefinePath { divisor, index, jump }) => {
                eprintln!(
                    "refine path: weight of divisor {divisor} still jumps by {jump:.3} near sample {index} at the {MAX_SAMPLES}-sample cap"
                );
                return EXIT_FAIL;
            }
            Err(e) => return usage_error(&e.to_string()),
        }
    };

    print!("{}", trace.to_csv());
    let closed = (path[0] - path[path.len() - 1]).norm() <= 1e-9;
    if closed {
        let net: Vec<String> = trace.net_offsets().iter().map(|n| n.to_string()).collect();
        println!("# net_offsets: {}", net.join(","));
    }
    0
}
