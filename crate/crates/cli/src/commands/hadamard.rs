use std::path::PathBuf;

use clap::{Args, Subcommand};
use qpg_core::hadamard::{
    dita_deform, fourier_matrix, magic_basis_is_hadamard_type, magic_from_hadamard,
    parse_cycle_sizes, validate_hadamard, DeformationParam, HadamardFile, HadamardMatrix,
};
use qpg_core::linalg::DEFAULT_TOL;
use qpg_core::magic::{flatness, validate_magic};
use qpg_core::model::{hadamard_model, stationarity_test};
use qpg_core::random::rng;
use qpg_core::report::{Check, Report};
use serde::Serialize;

use crate::output::{num, read_json, usage, write_json, CliResult, Outcome, Table};

#[derive(Debug, Subcommand)]
pub enum HadamardCmd {
    /// Check a Hadamard file and its magic unitary.
    Validate(ValidateArgs),
    /// Build `fourier:N1xN2..` or `dita:G|H` and write it to a file.
    Build(BuildArgs),
    /// Random Dita deformations of `F_G (x) F_H` with diagnostics.
    Deform(DeformArgs),
}

#[derive(Debug, Args, Serialize)]
pub struct ValidateArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, default_value_t = DEFAULT_TOL)]
    pub tol: f64,
}

#[derive(Debug, Args, Serialize)]
pub struct BuildArgs {
    /// `fourier:2x3` or `dita:2|3` (each side a list of cycle sizes).
    #[arg(long)]
    pub name: String,
    /// Deformation parameter file `{"left_size", "right_size", "q"}`.
    #[arg(long, conflicts_with = "random_q")]
    pub q: Option<PathBuf>,
    /// Draw the deformation phases at random.
    #[arg(long, requires = "seed")]
    pub random_q: bool,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub output: PathBuf,
}

#[derive(Debug, Args, Serialize)]
pub struct DeformArgs {
    /// Cycle sizes of the left factor, e.g. `2` or `2x2`.
    #[arg(long)]
    pub left: String,
    #[arg(long)]
    pub right: String,
    #[arg(long, default_value_t = 50)]
    pub count: usize,
    #[arg(long)]
    pub seed: u64,
    /// Stationarity diagnostics up to this order (0 disables).
    #[arg(long, default_value_t = 2)]
    pub p_max: usize,
    #[arg(long, default_value_t = DEFAULT_TOL)]
    pub tol: f64,
}

pub fn run(cmd: HadamardCmd) -> CliResult<Outcome> {
    match cmd {
        HadamardCmd::Validate(a) => validate(a),
        HadamardCmd::Build(a) => build(a),
        HadamardCmd::Deform(a) => deform(a),
    }
}

/// Magic, flatness and reconstruction checks for a valid Hadamard matrix.
fn magic_checks(report: &mut Report, h: &HadamardMatrix, tol: f64) {
    let m = magic_from_hadamard(h).projectors();
    let d = validate_magic(&m, tol);
    report.check(Check::below(
        "magic unitary defect",
        d.projection_defect.max(d.sum_defect),
        tol,
    ));
    let f = flatness(&m);
    report.data("flatness", f.verdict);
    match magic_basis_is_hadamard_type(&magic_from_hadamard(h), tol.max(1e-8)) {
        Ok(back) => {
            report.check(Check::below(
                "reconstruction matches the dephased matrix",
                back.matrix().max_abs_diff(&h.dephased()),
                tol.max(1e-8),
            ));
        }
        Err(v) => {
            report.check(Check::new("magic basis is of Hadamard type", false).detail(v.to_string()));
        }
    }
}

fn validate(args: ValidateArgs) -> CliResult<Outcome> {
    let file: HadamardFile = read_json(&args.input)?;
    if file.kind != "hadamard" {
        return Err(usage(format!("expected kind \"hadamard\", got \"{}\"", file.kind)));
    }
    file.matrix.check_shape()?;
    let mut report = Report::new("hadamard validate", serde_json::to_value(&args).expect("args"));
    let diag = validate_hadamard(&file.matrix, args.tol);
    report.data("size", file.matrix.rows()).data("diagnostics", diag);
    report.check(
        Check::new("complex Hadamard", diag.valid)
            .value(diag.modulus_deviation.max(diag.row_overlap))
            .tolerance(args.tol),
    );
    if diag.valid {
        let h = HadamardMatrix::new(file.matrix, args.tol)?;
        magic_checks(&mut report, &h, args.tol);
    }
    Ok(Outcome::new(report))
}

fn parse_dita(spec: &str) -> CliResult<(Vec<usize>, Vec<usize>)> {
    let (l, r) = spec
        .split_once('|')
        .ok_or_else(|| usage(format!("dita spec `{spec}` must look like G|H")))?;
    Ok((parse_cycle_sizes(l)?, parse_cycle_sizes(r)?))
}

fn build(args: BuildArgs) -> CliResult<Outcome> {
    let (kind, rest) = args
        .name
        .split_once(':')
        .ok_or_else(|| usage(format!("name `{}` must be fourier:.. or dita:..", args.name)))?;
    let h = match kind {
        "fourier" => fourier_matrix(&parse_cycle_sizes(rest)?)?,
        "dita" => {
            let (left, right) = parse_dita(rest)?;
            let (l, r): (usize, usize) = (left.iter().product(), right.iter().product());
            let q = match (&args.q, args.random_q, args.seed) {
                (Some(path), false, _) => {
                    let raw: DeformationParam = read_json(path)?;
                    let q = (0..l * r).map(|k| raw.get(k / r, k % r)).collect();
                    DeformationParam::new(raw.left_size, raw.right_size, q, DEFAULT_TOL)?
                }
                (None, true, Some(seed)) => DeformationParam::random(l, r, &mut rng(seed)),
                (None, false, _) => DeformationParam::ones(l, r),
                _ => return Err(usage("--random-q needs --seed and excludes --q")),
            };
            dita_deform(&left, &right, &q)?
        }
        other => return Err(usage(format!("unknown Hadamard family `{other}`"))),
    };
    write_json(&args.output, &h.to_file())?;
    let mut report = Report::new("hadamard build", serde_json::to_value(&args).expect("args"));
    let diag = validate_hadamard(h.matrix(), DEFAULT_TOL);
    report.data("size", h.size()).data("diagnostics", diag);
    report.check(Check::new("complex Hadamard", diag.valid));
    magic_checks(&mut report, &h, DEFAULT_TOL);
    Ok(Outcome::new(report))
}

fn deform(args: DeformArgs) -> CliResult<Outcome> {
    let left = parse_cycle_sizes(&args.left)?;
    let right = parse_cycle_sizes(&args.right)?;
    let (l, r): (usize, usize) = (left.iter().product(), right.iter().product());
    let mut gen = rng(args.seed);
    let mut report = Report::new("hadamard deform", serde_json::to_value(&args).expect("args"));
    let mut headers = vec!["index", "modulus_deviation", "magic_defect", "reconstruction"];
    let names: Vec<String> = (1..=args.p_max).map(|p| format!("stationarity_p{p}")).collect();
    headers.extend(names.iter().map(String::as_str));
    let mut table = Table::new(&headers);
    let (mut worst_magic, mut worst_back, mut all_valid): (f64, f64, bool) = (0.0, 0.0, true);
    for k in 0..args.count {
        let q = DeformationParam::random(l, r, &mut gen);
        let h = dita_deform(&left, &right, &q)?;
        let diag = validate_hadamard(h.matrix(), args.tol);
        all_valid &= diag.valid;
        let m = validate_magic(&magic_from_hadamard(&h).projectors(), args.tol);
        let magic = m.projection_defect.max(m.sum_defect);
        let back = magic_basis_is_hadamard_type(&magic_from_hadamard(&h), args.tol.max(1e-8))
            .map(|b| b.matrix().max_abs_diff(&h.dephased()))
            .unwrap_or(f64::INFINITY);
        worst_magic = worst_magic.max(magic);
        worst_back = worst_back.max(back);
        let mut row = vec![(k + 1).to_string(), num(diag.modulus_deviation), num(magic), num(back)];
        if args.p_max > 0 {
            let s = stationarity_test(&hadamard_model(&h), args.p_max, args.tol)?;
            row.extend(s.defects.iter().map(|d| num(*d)));
        }
        table.push(row);
    }
    report.check(Check::new("every deformation is complex Hadamard", all_valid).samples(args.count));
    report.check(Check::below("magic unitary defect", worst_magic, args.tol).samples(args.count));
    report.check(
        Check::below("reconstruction matches the dephased matrix", worst_back, args.tol.max(1e-8))
            .samples(args.count),
    );
    // stationarity of deformed models is open, so it is data, not a verdict
    let series: Vec<&Vec<String>> = table.rows.iter().collect();
    report.data("deformations", series);
    report.data("columns", &table.headers);
    Ok(Outcome::with_table(report, table))
}
