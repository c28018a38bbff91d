//! `ballmaps`: JSON front end for the ballmaps library.
//!
//! Exit codes: 0 success, 2 input error, 3 verification failure,
//! 4 capability error.

use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use ballmaps::analysis::analyze;
use ballmaps::hermitian::{is_proper, ProperCertificate};
use ballmaps::invariance::{diagonal_stabilizer, emit_invariance_system, membership, permutation_stabilizer, Permutation};
use ballmaps::maps::{
    catalog, catalog_names, compose_source, compose_target, descend, juxtapose_lambda, juxtapose_theta,
    lowest_order_subspace, matrix_from_json, oplus, tensor, tensor_power, whitney,
};
use ballmaps::realize::{
    pad_to_proper, realize_from_invariants, realize_subgroup, subgroup_elements, symmetric_group_map,
    symmetric_group_map_v2, PadOptions,
};
use ballmaps::sampling::{sphere_sample_check, DEFAULT_SEED};
use ballmaps::{BallAutomorphism, Error, Polynomial, RationalMap, Subspace, Tolerances, C64};
use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};
use serde_json::json;

#[derive(Parser)]
#[command(name = "ballmaps", version, about = "Proper rational maps between balls: forms, invariance groups, constructions")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Relative tolerance for coefficient equality.
    #[arg(long, global = true, default_value_t = 1e-9)]
    tol_eq: f64,
    /// Tolerance for the remainder of division by the sphere.
    #[arg(long, global = true, default_value_t = 1e-9)]
    tol_div: f64,
    /// Relative eigenvalue threshold for signatures and ranks.
    #[arg(long, global = true, default_value_t = 1e-8)]
    tol_sig: f64,
    /// Seed for the ChaCha8 sampler.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Write the primary output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Skip the properness check on constructed maps.
    #[arg(long, global = true)]
    no_verify: bool,
}

impl Global {
    fn tolerances(&self) -> Tolerances {
        Tolerances { eq: self.tol_eq, div: self.tol_div, sig: self.tol_sig, ..Tolerances::default() }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Full report: properness, signature, ranks, invariance structure.
    Analyze {
        map: PathBuf,
        /// Exit 3 when the map is not proper.
        #[arg(long)]
        require_proper: bool,
        /// Exit 4 instead of skipping steps that exceed enumeration limits.
        #[arg(long)]
        strict: bool,
    },
    /// Build a map from others or from the fixture catalog.
    #[command(subcommand)]
    Construct(Construct),
    /// Compose with a ball automorphism.
    #[command(subcommand)]
    Compose(Compose),
    /// Maps with prescribed invariance groups.
    #[command(subcommand)]
    Realize(Realize),
    /// Pad a polynomial map to a proper map.
    Pad {
        map: PathBuf,
        /// Fixed ε, verified instead of searched.
        #[arg(long)]
        epsilon: Option<f64>,
        /// Keep all degrees 0..=d in the target sum of norm powers.
        #[arg(long)]
        keep_all_degrees: bool,
        /// Comma-separated λ_j² for the retained degrees.
        #[arg(long, value_delimiter = ',')]
        weights: Option<Vec<f64>>,
    },
    /// Membership of an automorphism in the Hermitian invariant group.
    Member { map: PathBuf, automorphism: PathBuf },
    /// Polynomial system whose solutions are the invariance group.
    EmitSystem { map: PathBuf },
    /// Sphere-sampling properness oracle.
    Sample {
        map: PathBuf,
        #[arg(long, default_value_t = 1000)]
        count: usize,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },
}

#[derive(Subcommand)]
enum Construct {
    Tensor { a: PathBuf, b: PathBuf },
    /// `c·a ⊕ s·b`.
    Oplus {
        a: PathBuf,
        b: PathBuf,
        #[arg(long, value_delimiter = ',', default_values_t = [std::f64::consts::FRAC_1_SQRT_2, std::f64::consts::FRAC_1_SQRT_2])]
        weights: Vec<f64>,
    },
    /// `J_θ(a, b)` for two maps, or `J_λ` with `--lambda`.
    Juxtapose {
        maps: Vec<PathBuf>,
        #[arg(long, default_value_t = std::f64::consts::FRAC_PI_4)]
        theta: f64,
        #[arg(long, value_delimiter = ',')]
        lambda: Option<Vec<f64>>,
    },
    /// `E_{A,g} f`; `A` defaults to the lowest-order subspace of `f`.
    Descend {
        f: PathBuf,
        g: PathBuf,
        /// 1-based target coordinates spanning `A`.
        #[arg(long, value_delimiter = ',')]
        coords: Option<Vec<usize>>,
    },
    /// Tensor power `z^{⊗m}` on `C^n`.
    Power {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: u32,
    },
    Whitney {
        #[arg(long)]
        n: usize,
    },
    /// Named fixture; `--list` prints the names.
    Catalog {
        name: Option<String>,
        #[arg(long)]
        list: bool,
    },
}

#[derive(Subcommand)]
enum Compose {
    /// `f∘γ`.
    Source { map: PathBuf, automorphism: PathBuf },
    /// `ψ∘f`.
    Target { map: PathBuf, automorphism: PathBuf },
}

#[derive(Subcommand)]
enum Realize {
    /// `Γ_f = S_n`.
    Symmetric {
        #[arg(long)]
        n: usize,
        /// Use the product construction `Π(1 + z_j)`.
        #[arg(long)]
        v2: bool,
    },
    /// `Γ_f = G ≤ S_n`; input `{"n": …, "generators": [[…], …]}`, 1-based.
    Subgroup { group: PathBuf },
    /// Input `{"generators": [matrix, …], "invariants": [polynomial, …]}`.
    FromInvariants { spec: PathBuf },
}

#[derive(Deserialize)]
struct SubgroupSpec {
    n: usize,
    #[serde(default)]
    generators: Vec<Permutation>,
}

#[derive(Deserialize)]
struct InvariantSpec {
    #[serde(default)]
    n: Option<usize>,
    #[serde(default)]
    generators: Vec<Vec<Vec<[f64; 2]>>>,
    invariants: Vec<Polynomial>,
}

/// Failure with its exit code.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn input(message: impl Into<String>) -> Self {
        Failure { code: 2, message: message.into() }
    }

    fn verification(message: impl Into<String>) -> Self {
        Failure { code: 3, message: message.into() }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::TooManyVariables { .. }
            | Error::CapExceeded { .. }
            | Error::Unsupported(_)
            | Error::DisjointnessUnreachable { .. } => 4,
            Error::NotPositiveSemidefinite { .. } => 3,
            _ => 2,
        };
        Failure { code, message: e.to_string() }
    }
}

type Outcome<T> = std::result::Result<T, Failure>;

fn read_text(path: &Path) -> Outcome<String> {
    if path == Path::new("-") {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s).map_err(|e| Failure::input(format!("stdin: {e}")))?;
        return Ok(s);
    }
    fs::read_to_string(path).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Outcome<T> {
    serde_json::from_str(&read_text(path)?).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

fn emit<T: Serialize>(value: &T, out: Option<&Path>) -> Outcome<()> {
    let text = serde_json::to_string_pretty(value).map_err(|e| Failure::input(e.to_string()))?;
    match out {
        Some(p) => fs::write(p, text + "\n").map_err(|e| Failure::input(format!("{}: {e}", p.display()))),
        None => {
            let mut stdout = io::stdout().lock();
            match writeln!(stdout, "{text}") {
                Err(e) if e.kind() != io::ErrorKind::BrokenPipe => Err(Failure::input(e.to_string())),
                _ => Ok(()),
            }
        }
    }
}

fn note<T: Serialize>(value: &T) {
    if let Ok(text) = serde_json::to_string_pretty(value) {
        eprintln!("{text}");
    }
}

/// Properness gate for constructed maps.
fn checked(f: RationalMap, g: &Global) -> Outcome<RationalMap> {
    if g.no_verify {
        return Ok(f);
    }
    let ProperCertificate { proper, residual, bound, .. } = is_proper(&f, g.tol_div);
    if !proper {
        return Err(Failure::verification(format!(
            "constructed map is not proper: remainder {residual:e} exceeds {bound:e}"
        )));
    }
    Ok(f)
}

fn run(cli: Cli) -> Outcome<()> {
    let g = &cli.global;
    let tol = g.tolerances();
    let out = g.out.as_deref();
    match cli.command {
        Command::Analyze { map, require_proper, strict } => {
            let f: RationalMap = read_json(&map)?;
            if strict {
                permutation_stabilizer(&f, &tol)?;
            }
            let bundle = analyze(&f, &tol)?;
            emit(&bundle, out)?;
            if require_proper && !bundle.properness.proper {
                return Err(Failure::verification("map is not proper"));
            }
            Ok(())
        }
        Command::Construct(c) => {
            let f = construct(c, g)?;
            match f {
                Some(f) => emit(&checked(f, g)?, out),
                None => emit(&catalog_names(), out),
            }
        }
        Command::Compose(c) => {
            let f = match c {
                Compose::Source { map, automorphism } => {
                    compose_source(&read_json(&map)?, &read_json::<BallAutomorphism>(&automorphism)?)?
                }
                Compose::Target { map, automorphism } => {
                    compose_target(&read_json(&map)?, &read_json::<BallAutomorphism>(&automorphism)?)?
                }
            };
            emit(&checked(f, g)?, out)
        }
        Command::Realize(r) => realize(r, g, &tol),
        Command::Pad { map, epsilon, keep_all_degrees, weights } => {
            let f: RationalMap = read_json(&map)?;
            if !f.is_polynomial() {
                return Err(Error::NotPolynomial.into());
            }
            let opts = PadOptions { weights, keep_all_degrees, epsilon };
            let pad = pad_to_proper(f.n(), f.numerator(), &opts, &tol)?;
            let padded = checked(pad.padded_map(f.numerator())?, g)?;
            emit(&json!({ "pad": pad, "map": padded }), out)
        }
        Command::Member { map, automorphism } => {
            let f: RationalMap = read_json(&map)?;
            let gamma: BallAutomorphism = read_json(&automorphism)?;
            emit(&membership(&f, &gamma, &tol)?, out)
        }
        Command::EmitSystem { map } => emit(&emit_invariance_system(&read_json(&map)?)?, out),
        Command::Sample { map, count, tol: sample_tol } => {
            let f: RationalMap = read_json(&map)?;
            let report = sphere_sample_check(&f, count, sample_tol, g.seed)?;
            emit(&report, out)?;
            if !report.pass {
                return Err(Failure::verification(format!("sphere residual {:e}", report.max_residual)));
            }
            Ok(())
        }
    }
}

fn construct(c: Construct, g: &Global) -> Outcome<Option<RationalMap>> {
    let f = match c {
        Construct::Tensor { a, b } => tensor(&read_json(&a)?, &read_json(&b)?)?,
        Construct::Oplus { a, b, weights } => {
            let [c, s] = weights[..] else {
                return Err(Failure::input("--weights takes exactly two values c,s"));
            };
            oplus(&read_json(&a)?, &read_json(&b)?, (c, s))?
        }
        Construct::Juxtapose { maps, theta, lambda } => {
            let fs: Vec<RationalMap> = maps.iter().map(|p| read_json(p)).collect::<Outcome<_>>()?;
            match lambda {
                Some(l) => {
                    let refs: Vec<&RationalMap> = fs.iter().collect();
                    let w: Vec<C64> = l.iter().map(|&x| C64::new(x, 0.0)).collect();
                    juxtapose_lambda(&refs, &w, g.tol_eq)?
                }
                None => {
                    let [a, b] = fs.as_slice() else {
                        return Err(Failure::input("juxtapose with --theta takes exactly two maps"));
                    };
                    juxtapose_theta(a, b, theta)?
                }
            }
        }
        Construct::Descend { f, g: gm, coords } => {
            let f: RationalMap = read_json(&f)?;
            let gmap: RationalMap = read_json(&gm)?;
            let a = match coords {
                Some(c) => {
                    if c.contains(&0) {
                        return Err(Failure::input("coordinates are 1-based"));
                    }
                    let idx: Vec<usize> = c.iter().map(|i| i - 1).collect();
                    Subspace::coordinate(f.target_dim(), &idx)?
                }
                None => lowest_order_subspace(&f)?,
            };
            descend(&f, &a, &gmap)?
        }
        Construct::Power { n, m } => tensor_power(n, m)?,
        Construct::Whitney { n } => whitney(n)?,
        Construct::Catalog { name, list } => match (name, list) {
            (_, true) => return Ok(None),
            (Some(name), false) => catalog(&name)?,
            (None, false) => return Err(Failure::input("catalog needs a name or --list")),
        },
    };
    Ok(Some(f))
}

fn realize(r: Realize, g: &Global, tol: &Tolerances) -> Outcome<()> {
    let out = g.out.as_deref();
    match r {
        Realize::Symmetric { n, v2 } => {
            let f = if v2 { symmetric_group_map_v2(n, tol)? } else { symmetric_group_map(n, tol)? };
            let f = checked(f, g)?;
            note(&verification(&f, None, g, tol)?);
            emit(&f, out)
        }
        Realize::Subgroup { group } => {
            let spec: SubgroupSpec = read_json(&group)?;
            let f = checked(realize_subgroup(spec.n, &spec.generators, tol)?, g)?;
            let elements = subgroup_elements(spec.n, &spec.generators, tol)?;
            let summary = verification(&f, Some(&elements), g, tol)?;
            note(&summary);
            emit(&f, out)?;
            if summary["stabilizer_matches"] == json!(false) {
                return Err(Failure::verification("permutation stabilizer differs from the requested group"));
            }
            Ok(())
        }
        Realize::FromInvariants { spec } => {
            let spec: InvariantSpec = read_json(&spec)?;
            let n = spec
                .n
                .or_else(|| spec.invariants.first().map(Polynomial::nvars))
                .ok_or_else(|| Failure::input("no invariants supplied"))?;
            let gens = spec.generators.iter().map(|m| matrix_from_json(m)).collect::<Result<Vec<_>, _>>()?;
            let f = checked(realize_from_invariants(n, &spec.invariants, &gens, tol)?, g)?;
            note(&verification(&f, None, g, tol)?);
            emit(&f, out)
        }
    }
}

/// Properness, sampling and stabilizer summary for a realized map.
fn verification(
    f: &RationalMap,
    requested: Option<&[Permutation]>,
    g: &Global,
    tol: &Tolerances,
) -> Outcome<serde_json::Value> {
    let cert = is_proper(f, g.tol_div);
    let sample = sphere_sample_check(f, 1000, 1e-9, g.seed)?;
    let diagonal = diagonal_stabilizer(f, tol);
    let perms = permutation_stabilizer(f, tol).ok();
    let mut v = json!({
        "target_dim": f.target_dim(),
        "degree": f.degree(),
        "proper": cert.proper,
        "proper_residual": cert.residual,
        "sample": sample,
        "diagonal_stabilizer_trivial": diagonal.is_trivial(),
        "permutation_stabilizer": perms,
    });
    if let (Some(req), Some(p)) = (requested, &perms) {
        let (mut req, mut p) = (req.to_vec(), p.clone());
        req.sort();
        p.sort();
        v["stabilizer_matches"] = json!(req == p);
    }
    Ok(v)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
