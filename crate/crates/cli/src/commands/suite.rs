use clap::{Args, Subcommand};
use qpg_core::report::{Check, Report};
use qpg_core::suite::{self, CRITERIA};
use serde::Serialize;

use crate::output::{usage, CliResult, Outcome, Table};

#[derive(Debug, Subcommand)]
pub enum SuiteCmd {
    /// Run the acceptance criteria.
    Acceptance(AcceptanceArgs),
}

#[derive(Debug, Args, Serialize)]
pub struct AcceptanceArgs {
    /// Comma-separated criterion ids; all by default.
    #[arg(long, value_delimiter = ',')]
    pub criteria: Vec<u8>,
}

pub fn run(cmd: SuiteCmd) -> CliResult<Outcome> {
    match cmd {
        SuiteCmd::Acceptance(a) => acceptance(a),
    }
}

fn acceptance(args: AcceptanceArgs) -> CliResult<Outcome> {
    let ids: Vec<u8> = if args.criteria.is_empty() {
        CRITERIA.iter().map(|c| c.id).collect()
    } else {
        args.criteria.clone()
    };
    if let Some(bad) = ids.iter().find(|&&id| suite::info(id).is_none()) {
        return Err(usage(format!("no criterion {bad}; ids run from 1 to {}", CRITERIA.len())));
    }
    let mut report = Report::new("suite acceptance", serde_json::to_value(&args).expect("args"));
    let mut table = Table::new(&["criterion", "title", "verdict", "failed_checks"]);
    for id in ids {
        let res = suite::run(id)?;
        let verdict = if res.passed() { "pass" } else { "fail" };
        table.push(vec![
            id.to_string(),
            res.title.to_string(),
            verdict.to_string(),
            res.failures().len().to_string(),
        ]);
        for c in res.checks {
            report.check(Check {
                name: format!("[{id}] {}", c.name),
                ..c
            });
        }
    }
    Ok(Outcome::with_table(report, table))
}
