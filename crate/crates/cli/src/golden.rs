//! Golden-file regression corpus.
//!
//! `cases.json` in the corpus directory lists `{"name", "args"}` entries;
//! each case's JSON report is stored as `<name>.json`. Comparison is
//! byte-for-byte, so any change in output shows up as a failure until the
//! corpus is re-blessed.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::args::{parse_args, Command, Format};
use crate::report::Table;
use crate::{run, CliError};

pub const MANIFEST: &str = "cases.json";

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GoldenCase {
    pub name: String,
    /// Arguments after the program name.
    pub args: Vec<String>,
}

pub fn load_cases(dir: &Path) -> Result<Vec<GoldenCase>, CliError> {
    let path = dir.join(MANIFEST);
    let text = fs::read_to_string(&path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

/// The JSON report for one case, rendered exactly as stored.
pub fn render_case(case: &GoldenCase) -> Result<String, CliError> {
    let argv = std::iter::once("hochcurve".to_string()).chain(case.args.iter().cloned());
    let mut config = parse_args(argv)?;
    if matches!(config.command, Command::Golden { .. }) {
        return Err(CliError::Usage(format!("golden case '{}' cannot run the golden command", case.name)));
    }
    config.format = Format::Json;
    config.timing = false;
    config.caps = Default::default();
    Ok(run(config)?.to_json())
}

pub(crate) fn run_corpus(dir: &Path, bless: bool) -> Result<Table, CliError> {
    let mut t = Table::new("golden", &["case", "status"]);
    for case in load_cases(dir)? {
        let got = render_case(&case)?;
        let path = dir.join(format!("{}.json", case.name));
        let status = if bless {
            fs::write(&path, &got).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
            "BLESSED"
        } else {
            match fs::read_to_string(&path) {
                Ok(want) if want == got => "PASS",
                _ => "FAIL",
            }
        };
        t.push(vec![case.name, status.into()]);
    }
    Ok(t)
}
