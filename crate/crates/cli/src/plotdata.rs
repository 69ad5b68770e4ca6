//! Long-format CSV for plotting: one observation per row, with a series
//! column wherever an artifact holds more than one curve.

use std::fs;
use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde_json::Value;

use crate::artifacts::{Artifact, Table};
use crate::commands::*;
use crate::CliError;

fn data<T: DeserializeOwned>(v: &Value) -> Result<T, CliError> {
    serde_json::from_value(v.clone()).map_err(|e| CliError::Config(format!("malformed artifact data: {e}")))
}

/// Tidy table for an artifact; `dir` locates CSV siblings.
pub fn plot_table(artifact: &Artifact, dir: &Path) -> Result<Table, CliError> {
    let d = &artifact.data;
    Ok(match artifact.artifact_kind.as_str() {
        "count-zeros" => data::<CountZerosData>(d)?.table(),
        "nf-curve" => data::<NfCurveData>(d)?.table(),
        "mc-expect" => data::<McExpectData>(d)?.table(),
        "mc-increment" => data::<McIncrementData>(d)?.table(),
        "mc-tail" => data::<McTailData>(d)?.table(),
        "mc-concentration" => data::<McConcentrationData>(d)?.table(),
        "k0" => data::<K0Data>(d)?.table(),
        "charfn" => data::<CharFnData>(d)?.table(),
        "discrepancy" => data::<DiscrepancyData>(d)?.table(),
        "bs-check" => data::<BsCheckData>(d)?.table(),
        "tail-cdf" => data::<TailCdfData>(d)?.table(),
        "selberg-check" => data::<SelbergData>(d)?.table(),
        "littlewood-check" => data::<LittlewoodData>(d)?.table(),
        "density" => {
            let meta: DensityData = data(d)?;
            let name = artifact.csv.as_ref().ok_or_else(|| CliError::Config("density artifact lacks its grid CSV".into()))?;
            let grid = Table::read(&dir.join(name))?;
            if grid.header != density_header(meta.dims) {
                return Err(CliError::Config(format!("unexpected density grid columns {:?}", grid.header)));
            }
            grid
        }
        other => return Err(CliError::Config(format!("unknown artifact kind `{other}`"))),
    })
}

/// Reads `artifact`, writes its plot table and returns the output path.
pub fn emit(artifact: &Path, output: Option<&Path>) -> Result<PathBuf, CliError> {
    let text = fs::read_to_string(artifact).map_err(|e| CliError::Config(format!("{}: {e}", artifact.display())))?;
    let parsed: Artifact = serde_json::from_str(&text).map_err(|e| CliError::Config(format!("{}: not an artifact: {e}", artifact.display())))?;
    let dir = artifact.parent().unwrap_or(Path::new("."));
    let table = plot_table(&parsed, dir)?;
    let out = match output {
        Some(p) => p.to_path_buf(),
        None => {
            let stem = artifact.file_stem().and_then(|s| s.to_str()).unwrap_or("artifact");
            dir.join(format!("{stem}.plot.csv"))
        }
    };
    fs::write(&out, table.to_csv()?).map_err(|e| CliError::Io(format!("{}: {e}", out.display())))?;
    Ok(out)
}
