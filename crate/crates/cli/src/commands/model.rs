use std::path::PathBuf;

use clap::{Args, Subcommand};
use qpg_core::hadamard::{fourier_matrix, parse_cycle_sizes, HadamardFile};
use qpg_core::linalg::DEFAULT_TOL;
use qpg_core::model::{
    character_law, classical_model, direct_sum_model, double_transitivity_test, hadamard_model,
    orbit_relations, regular_model, stationarity_test, tensor_model, transitivity_estimate,
    universal_latin_model, FlatModel, ModelFile,
};
use qpg_core::perm::families;
use qpg_core::random::haar_samples;
use qpg_core::report::{Check, Report};
use qpg_core::weyl::{uniform_samples, weyl_model, WeylBasis};
use qpg_core::Error;
use serde::Serialize;

use crate::output::{num, read_json, usage, write_json, CliResult, Outcome, Table};

#[derive(Debug, Subcommand)]
pub enum ModelCmd {
    /// Build a model and write it to a model file.
    Build(BuildArgs),
    /// Validate a model; optionally test stationarity and transitivity.
    Check(CheckArgs),
    /// Moments of the main character, with standard errors.
    Character(CharacterArgs),
    /// Orbits (k = 1), orbitals (k = 2) and the k = 3 relation.
    Orbits(OrbitsArgs),
}

#[derive(Debug, Args, Serialize)]
pub struct BuildArgs {
    /// `fourier:2x3`, `regular:<family>`, `classical:<family>`,
    /// `latin:<family>`, `weyl:<cycles>` or `hadamard:<file>`.
    #[arg(long)]
    pub spec: String,
    /// Tensor with a second model.
    #[arg(long, conflicts_with = "direct_sum")]
    pub tensor: Option<String>,
    /// Direct sum with a second model.
    #[arg(long)]
    pub direct_sum: Option<String>,
    /// Haar frames per Latin square (`latin:`).
    #[arg(long, default_value_t = 20)]
    pub frames: usize,
    /// Cap on enumerated Latin tuples (`latin:`).
    #[arg(long, default_value_t = 100_000)]
    pub limit: usize,
    /// Haar samples (`weyl:`).
    #[arg(long, default_value_t = 1000)]
    pub samples: usize,
    /// Seed for any stochastic part; required for `latin:` and `weyl:`.
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub output: PathBuf,
}

#[derive(Debug, Args, Serialize)]
pub struct CheckArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
    /// Assert `|T_p^2 - T_p| <= tol` for `p <= p_max`.
    #[arg(long)]
    pub stationary: bool,
    #[arg(long, default_value_t = 3)]
    pub p_max: usize,
    /// Report the Cesaro transitivity estimates.
    #[arg(long)]
    pub transitivity: bool,
    /// Report the double-transitivity table comparison.
    #[arg(long)]
    pub double_transitivity: bool,
    #[arg(long, default_value_t = 50)]
    pub r_max: usize,
}

#[derive(Debug, Args, Serialize)]
pub struct CharacterArgs {
    #[arg(long)]
    pub input: PathBuf,
    /// Moments of `tr(T_p^r)`, the `r`-fold convolution power.
    #[arg(long, default_value_t = 1)]
    pub r: usize,
    #[arg(long, default_value_t = 4)]
    pub p_max: usize,
}

#[derive(Debug, Args, Serialize)]
pub struct OrbitsArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, default_value_t = 2)]
    pub k: usize,
    /// Support threshold on the max-entry of projector products.
    #[arg(long, default_value_t = 10.0 * DEFAULT_TOL)]
    pub threshold: f64,
}

pub fn run(cmd: ModelCmd) -> CliResult<Outcome> {
    match cmd {
        ModelCmd::Build(a) => build(a),
        ModelCmd::Check(a) => check(a),
        ModelCmd::Character(a) => character(a),
        ModelCmd::Orbits(a) => orbits(a),
    }
}

fn need_seed(seed: Option<u64>, what: &str) -> CliResult<u64> {
    seed.ok_or_else(|| usage(format!("{what} is stochastic and needs --seed")))
}

fn build_one(spec: &str, args: &BuildArgs) -> CliResult<FlatModel> {
    let (kind, rest) = spec
        .split_once(':')
        .ok_or_else(|| usage(format!("model spec `{spec}` must have the form kind:arg")))?;
    Ok(match kind {
        "fourier" => hadamard_model(&fourier_matrix(&parse_cycle_sizes(rest)?)?),
        "regular" => {
            let g = families::parse_family(rest)?;
            // a transitive group of order N acts regularly already; otherwise
            // use the left action on itself
            if g.order() == g.degree() {
                regular_model(&g)?
            } else {
                regular_model(&g.regular_action())?
            }
        }
        "classical" => classical_model(&families::parse_family(rest)?),
        "latin" => {
            let seed = need_seed(args.seed, "latin:")?;
            let g = families::parse_family(rest)?;
            universal_latin_model(&g, &haar_samples(g.degree(), args.frames, seed), args.limit)?
        }
        "weyl" => {
            let seed = need_seed(args.seed, "weyl:")?;
            let basis = WeylBasis::new(&parse_cycle_sizes(rest)?)?;
            let xs = haar_samples(basis.base_order(), args.samples, seed);
            weyl_model(&basis, &uniform_samples(xs))?
        }
        "hadamard" => {
            let file: HadamardFile = read_json(rest.as_ref())?;
            hadamard_model(&file.into_hadamard(DEFAULT_TOL)?)
        }
        other => return Err(usage(format!("unknown model kind `{other}`"))),
    })
}

fn describe(report: &mut Report, m: &FlatModel, tol: f64) {
    let v = m.validate(tol);
    report
        .data("size", m.size())
        .data("dim", m.dim())
        .data("points", m.len())
        .data("flatness", m.flatness())
        .data("validation", v);
    report.check(
        Check::new("magic basis at every point", v.passed)
            .value(v.projection_defect.max(v.sum_defect).max(v.orthogonality_defect))
            .tolerance(tol)
            .samples(m.len()),
    );
}

fn build(args: BuildArgs) -> CliResult<Outcome> {
    let mut m = build_one(&args.spec, &args)?;
    if let Some(other) = &args.tensor {
        m = tensor_model(&m, &build_one(other, &args)?)?;
    }
    if let Some(other) = &args.direct_sum {
        m = direct_sum_model(&m, &build_one(other, &args)?)?;
    }
    write_json(&args.output, &m.to_file())?;
    let mut report = Report::new("model build", serde_json::to_value(&args).expect("args"));
    describe(&mut report, &m, DEFAULT_TOL);
    Ok(Outcome::new(report))
}

fn load(path: &PathBuf) -> CliResult<FlatModel> {
    let file: ModelFile = read_json(path)?;
    Ok(file.into_model()?)
}

fn check(args: CheckArgs) -> CliResult<Outcome> {
    let m = load(&args.input)?;
    let mut report = Report::new("model check", serde_json::to_value(&args).expect("args"));
    describe(&mut report, &m, args.tol);
    let mut table = Table::new(&["p", "stationarity_defect"]);
    if args.stationary {
        let s = stationarity_test(&m, args.p_max, args.tol)?;
        for (p, d) in s.defects.iter().enumerate() {
            report.check(Check::below(format!("T{} stationarity defect", p + 1), *d, args.tol).samples(m.len()));
            table.push(vec![(p + 1).to_string(), num(*d)]);
        }
        report.data("stationarity", &s);
    }
    if args.transitivity {
        let t = transitivity_estimate(&m, args.r_max, args.tol)?;
        report.check(
            Check::below("transitivity estimate is 1/N", t.max_deviation, args.tol).informational(),
        );
        report.data("transitivity", t);
    }
    if args.double_transitivity {
        let d = double_transitivity_test(&m, args.r_max, args.tol)?;
        report.check(
            Check::below("double transitivity table", d.integral_defect, args.tol).informational(),
        );
        report.data("double_transitivity", d);
    }
    Ok(Outcome::with_table(report, table))
}

fn character(args: CharacterArgs) -> CliResult<Outcome> {
    let m = load(&args.input)?;
    let law = character_law(&m, args.r, args.p_max)?;
    let mut report = Report::new("model character", serde_json::to_value(&args).expect("args"));
    let mut table = Table::new(&["p", "value", "stderr", "gram_value", "gram_stderr", "chi_moment"]);
    let opt = |x: Option<f64>| x.map(num).unwrap_or_default();
    for e in &law.moments {
        table.push(vec![
            e.p.to_string(),
            num(e.value),
            opt(e.stderr),
            opt(e.gram_value),
            opt(e.gram_stderr),
            num(law.chi_moment(e.p)),
        ]);
        if let (Some(g), Some(se)) = (e.gram_value, e.gram_stderr.or(e.stderr)) {
            let band = (3.0 * se).max(1e-9);
            report.check(
                Check::below(format!("p = {}: direct and Gram routes agree", e.p), (g - e.value).abs(), band)
                    .stderr(se)
                    .samples(m.len()),
            );
        }
    }
    report.data("law", &law);
    Ok(Outcome::with_table(report, table))
}

/// `[N]^k` flat index to a 1-based tuple.
fn tuple(mut t: usize, n: usize, k: usize) -> Vec<usize> {
    let mut out = vec![0; k];
    for slot in out.iter_mut().rev() {
        *slot = t % n + 1;
        t /= n;
    }
    out
}

fn orbits(args: OrbitsArgs) -> CliResult<Outcome> {
    let m = load(&args.input)?;
    let mut report = Report::new("model orbits", serde_json::to_value(&args).expect("args"));
    let n = m.size();
    match orbit_relations(&m, args.k, args.threshold) {
        Ok(rel) => {
            report
                .data("reflexive", rel.reflexive)
                .data("symmetric", rel.symmetric)
                .data("transitive", rel.transitive);
            let mut table = Table::new(&["class", "tuple"]);
            if let Some(classes) = &rel.classes {
                let tuples: Vec<Vec<Vec<usize>>> = classes
                    .iter()
                    .map(|c| c.iter().map(|&t| tuple(t, n, args.k)).collect())
                    .collect();
                for (i, c) in tuples.iter().enumerate() {
                    for t in c {
                        let cell: Vec<String> = t.iter().map(usize::to_string).collect();
                        table.push(vec![(i + 1).to_string(), cell.join(" ")]);
                    }
                }
                report.data("class_count", tuples.len()).data("classes", tuples);
            }
            let c = Check::new(format!("k = {} relation is an equivalence", args.k), rel.is_equivalence());
            report.check(if args.k >= 3 { c.informational() } else { c });
            Ok(Outcome::with_table(report, table))
        }
        Err(Error::RelationBroken(msg)) => {
            report.check(Check::new(format!("k = {} relation is an equivalence", args.k), false).detail(msg));
            Ok(Outcome::new(report))
        }
        Err(e) => Err(e.into()),
    }
}
