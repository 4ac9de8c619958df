use std::path::PathBuf;

use clap::{Args, Subcommand};
use qpg_core::perm::{
    character_measure, deranging_subgroups, families, strongest_transitive_certificate,
    transitivity_level, GroupSpec, PermGroup, DEFAULT_GROUP_CAP,
};
use qpg_core::report::{Check, Report};
use serde::Serialize;

use crate::output::{num, read_json, usage, CliResult, Outcome, Table};

#[derive(Debug, Subcommand)]
pub enum GroupCmd {
    /// Order, orbits, strongest-transitivity certificate, character measure.
    Analyze(AnalyzeArgs),
}

#[derive(Debug, Args, Serialize)]
pub struct GroupSource {
    /// Named family, e.g. `pgl2:5`, `symmetric:4`, `hyperoctahedral-segments:2`.
    #[arg(long, conflicts_with = "input")]
    pub family: Option<String>,
    /// Group file `{"degree": N, "generators": [[...], ...]}`, 1-based.
    #[arg(long)]
    pub input: Option<PathBuf>,
}

impl GroupSource {
    pub fn load(&self) -> CliResult<PermGroup> {
        match (&self.family, &self.input) {
            (Some(f), None) => Ok(families::parse_family(f)?),
            (None, Some(path)) => {
                let spec: GroupSpec = read_json(path)?;
                Ok(spec.build(DEFAULT_GROUP_CAP)?)
            }
            _ => Err(usage("give exactly one of --family or --input")),
        }
    }
}

#[derive(Debug, Args, Serialize)]
pub struct AnalyzeArgs {
    #[command(flatten)]
    pub group: GroupSource,
    /// Search deranging subgroups of this order (repeatable).
    #[arg(long = "deranging-order")]
    pub deranging_orders: Vec<usize>,
    /// Assert the group order.
    #[arg(long)]
    pub expect_order: Option<usize>,
    /// Assert that no deranging subgroup of this order exists (repeatable).
    #[arg(long = "expect-no-deranging")]
    pub expect_no_deranging: Vec<usize>,
}

#[derive(Serialize)]
struct DerangingSummary {
    order: usize,
    count: usize,
    cyclic: usize,
    /// 1-based generators of each subgroup found.
    generators: Vec<Vec<Vec<u32>>>,
}

pub fn run(cmd: GroupCmd) -> CliResult<Outcome> {
    match cmd {
        GroupCmd::Analyze(args) => analyze(args),
    }
}

fn analyze(args: AnalyzeArgs) -> CliResult<Outcome> {
    let g = args.group.load()?;
    let mut report = Report::new("group analyze", serde_json::to_value(&args).expect("args"));
    let orbits: Vec<Vec<usize>> = g
        .orbits()
        .into_iter()
        .map(|o| o.into_iter().map(|x| x + 1).collect())
        .collect();
    report
        .data("degree", g.degree())
        .data("order", g.order())
        .data("transitive", g.is_transitive())
        .data("orbits", orbits)
        .data("derangements", g.derangements().len());

    let cert = strongest_transitive_certificate(&g);
    report.data(
        "certificate",
        cert.as_ref()
            .map(|c| c.iter().map(|p| p.to_one_line()).collect::<Vec<_>>()),
    );
    report.data("certificate_found", cert.is_some());
    if g.is_transitive() {
        report.data("transitivity_level", transitivity_level(&g)?);
    }

    let mu = character_measure(&g);
    report.data("character_measure", mu.to_strings());
    let mut table = Table::new(&["fixed_points", "weight", "weight_f64"]);
    for (i, (w, x)) in mu.to_strings().into_iter().zip(mu.to_f64()).enumerate() {
        table.push(vec![i.to_string(), w, num(x)]);
    }

    let mut orders = args.deranging_orders.clone();
    orders.extend(&args.expect_no_deranging);
    orders.sort_unstable();
    orders.dedup();
    let mut summaries = Vec::new();
    for &k in &orders {
        let found = deranging_subgroups(&g, k);
        let cyclic = found
            .iter()
            .filter(|h| h.elements().iter().any(|e| e.order() == k))
            .count();
        if args.expect_no_deranging.contains(&k) {
            report.check(
                Check::new(format!("no deranging subgroup of order {k}"), found.is_empty())
                    .value(found.len() as f64),
            );
        }
        summaries.push(DerangingSummary {
            order: k,
            count: found.len(),
            cyclic,
            generators: found
                .iter()
                .map(|h| h.generators().iter().map(|p| p.to_one_line()).collect())
                .collect(),
        });
    }
    report.data("deranging_subgroups", summaries);

    if let Some(expect) = args.expect_order {
        report.check(Check::new("group order", g.order() == expect).value(g.order() as f64));
    }
    Ok(Outcome::with_table(report, table))
}
