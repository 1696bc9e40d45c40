use std::fs::File;
use std::io::{self, BufWriter, Write};

use clap::Args;
use rayon::prelude::*;
use strainlab::{strain, StrainKind};

use crate::io::{parse_matrices, read_source, write_records, OutputFormat, StrainRecord};
use crate::{CliError, MetricArgs, EXIT_OK, EXIT_RECORD_ERROR};

#[derive(Debug, Args)]
pub struct ComputeArgs {
    /// Strain measure.
    #[arg(long, value_parser = parse_kind)]
    pub measure: StrainKind,
    #[command(flatten)]
    pub metric: MetricArgs,
    /// Matrix file (JSON or CSV); '-' reads standard input. Repeatable.
    #[arg(long, required = true)]
    pub input: Vec<String>,
    #[arg(long, value_enum, default_value = "json")]
    pub format: OutputFormat,
    /// Output file; standard output when absent.
    #[arg(long)]
    pub output: Option<String>,
}

pub(crate) fn parse_kind(s: &str) -> Result<StrainKind, String> {
    s.parse::<StrainKind>().map_err(|e| e.to_string())
}

pub fn run(args: &ComputeArgs) -> Result<u8, CliError> {
    let metric = args.metric.resolve(Some(args.measure))?;
    if args.input.iter().filter(|p| *p == "-").count() > 1 {
        return Err(CliError::Usage("standard input can be read only once".into()));
    }
    let mut inputs = Vec::new();
    for path in &args.input {
        inputs.extend(parse_matrices(path, &read_source(path)?)?);
    }

    let params = metric.map(|m| (m.alpha(), m.beta(), m.gamma()));
    let records: Vec<StrainRecord> = inputs
        .par_iter()
        .map(|item| StrainRecord {
            input_id: item.id.clone(),
            kind: args.measure,
            params,
            outcome: strain(args.measure, metric.as_ref(), &item.matrix)
                .map(|r| (r.value, r.minimizer))
                .map_err(|e| e.code()),
        })
        .collect();

    let mut out: Box<dyn Write> = match &args.output {
        Some(path) => Box::new(BufWriter::new(
            File::create(path).map_err(|e| CliError::Output(format!("{path}: {e}")))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    };
    write_records(&mut out, &records, args.format)?;
    out.flush()?;

    Ok(if records.iter().all(StrainRecord::is_ok) {
        EXIT_OK
    } else {
        EXIT_RECORD_ERROR
    })
}
