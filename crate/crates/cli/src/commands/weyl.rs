use clap::{Args, Subcommand};
use qpg_core::hadamard::parse_cycle_sizes;
use qpg_core::random::haar_samples;
use qpg_core::report::{Check, Report};
use qpg_core::weyl::{
    extract_cocycle, pauli_scalars, t_matrix_closed_form, uniform_samples, weyl_character_moments,
    WeylBasis,
};
use serde::Serialize;

use crate::output::{num, CliResult, Outcome, Table};

#[derive(Debug, Subcommand)]
pub enum WeylCmd {
    /// Cocycle, stationarity defects and character moments of a Weyl model.
    Run(RunArgs),
}

#[derive(Debug, Args, Serialize)]
pub struct RunArgs {
    /// Cycle sizes of the group, e.g. `2` or `2x3`.
    #[arg(long, default_value = "2")]
    pub group: String,
    /// Haar samples of the sampled unitary.
    #[arg(long, default_value_t = 1000)]
    pub samples: usize,
    #[arg(long)]
    pub seed: u64,
    #[arg(long, default_value_t = 2)]
    pub p_max: usize,
    /// Assert `|T_p^2 - T_p| <= 5 / sqrt(samples)`.
    #[arg(long)]
    pub check_stationary: bool,
}

pub fn run(cmd: WeylCmd) -> CliResult<Outcome> {
    match cmd {
        WeylCmd::Run(a) => run_model(a),
    }
}

fn run_model(args: RunArgs) -> CliResult<Outcome> {
    let basis = WeylBasis::new(&parse_cycle_sizes(&args.group)?)?;
    let cocycle = extract_cocycle(&basis)?;
    let samples = uniform_samples(haar_samples(basis.base_order(), args.samples, args.seed));
    let mut report = Report::new("weyl run", serde_json::to_value(&args).expect("args"));
    report
        .data("base_order", basis.base_order())
        .data("order", basis.order())
        .data("cocycle", &cocycle)
        .data("pauli_scalars", pauli_scalars(&basis));
    report.check(
        Check::below("cocycle is normalised", cocycle.identity_residual(&basis), 1e-12).informational(),
    );

    let band = 5.0 / (args.samples as f64).sqrt();
    let mut defects = Vec::with_capacity(args.p_max);
    for p in 1..=args.p_max {
        let t = t_matrix_closed_form(&basis, &cocycle, &samples, p)?;
        let d = t.idempotency_defect();
        let c = Check::below(format!("T{p} stationarity defect"), d, band).samples(args.samples);
        report.check(if args.check_stationary { c } else { c.informational() });
        defects.push(d);
    }
    report.data("stationarity_defects", &defects);

    let moments = weyl_character_moments(&basis, &cocycle, &samples, args.p_max.max(1))?;
    let mut table = Table::new(&["p", "moment", "stderr", "stationarity_defect"]);
    for m in &moments {
        let d = defects.get(m.p - 1).map(|d| num(*d)).unwrap_or_default();
        table.push(vec![m.p.to_string(), num(m.value), num(m.stderr), d]);
    }
    report.data("moments", &moments);
    Ok(Outcome::with_table(report, table))
}
