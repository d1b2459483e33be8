use std::io::{Read, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::features::{extract_features, FeatureMatrix, FeatureName};
use crate::model::{ClassLabel, Dataset, RangingSample, UwbConfig};

/// Column header of the canonical dataset CSV.
pub const DATASET_HEADER: [&str; 9] = [
    "index",
    "true_distance_m",
    "estimated_distance_m",
    "fp_amp1",
    "fp_amp2",
    "fp_amp3",
    "cir_power",
    "preamble_count",
    "label",
];

/// Shortest decimal that parses back to the same `f64`.
pub(crate) fn fmt_f64(v: f64) -> String {
    format!("{v:?}")
}

fn csv_err(e: csv::Error) -> Error {
    let line = e.position().map(|p| p.line() as usize).unwrap_or(0);
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::Io(io),
        other => Error::Parse {
            line,
            message: format!("{other:?}"),
        },
    }
}

fn field(rec: &csv::StringRecord, i: usize, line: usize) -> Result<&str> {
    rec.get(i).ok_or_else(|| Error::Parse {
        line,
        message: format!("missing column {}", DATASET_HEADER[i]),
    })
}

fn parse_num<T: std::str::FromStr>(s: &str, what: &str, line: usize) -> Result<T> {
    s.trim().parse().map_err(|_| Error::Parse {
        line,
        message: format!("invalid {what} `{s}`"),
    })
}

/// Read a dataset CSV. The file carries no radio configuration; `config` is
/// attached to the result.
pub fn read_dataset<R: Read>(reader: R, config: UwbConfig) -> Result<Dataset> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(reader);
    let header = rdr.headers().map_err(csv_err)?;
    if header.iter().ne(DATASET_HEADER.iter().copied()) {
        return Err(Error::Format(format!(
            "unexpected dataset header `{}`; expected `{}`",
            header.iter().collect::<Vec<_>>().join(","),
            DATASET_HEADER.join(",")
        )));
    }
    let mut samples = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(csv_err)?;
        let line = rec.position().map(|p| p.line() as usize).unwrap_or(0);
        let f = |i| field(&rec, i, line);
        let true_distance = match f(1)? {
            "" => None,
            s => Some(parse_num(s, "true_distance_m", line)?),
        };
        let label = match f(8)? {
            "" => None,
            s => Some(
                parse_num::<u8>(s, "label", line)
                    .ok()
                    .and_then(ClassLabel::from_code)
                    .ok_or_else(|| Error::Parse {
                        line,
                        message: format!("label must be 0, 1 or empty, got `{s}`"),
                    })?,
            ),
        };
        samples.push(RangingSample {
            index: parse_num(f(0)?, "index", line)?,
            estimated_distance: parse_num(f(2)?, "estimated_distance_m", line)?,
            true_distance,
            fp_amp: [
                parse_num(f(3)?, "fp_amp1", line)?,
                parse_num(f(4)?, "fp_amp2", line)?,
                parse_num(f(5)?, "fp_amp3", line)?,
            ],
            cir_power: parse_num(f(6)?, "cir_power", line)?,
            preamble_count: parse_num(f(7)?, "preamble_count", line)?,
            label,
        });
    }
    Ok(Dataset::new(config, samples))
}

pub fn write_dataset<W: Write>(writer: W, dataset: &Dataset) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(DATASET_HEADER).map_err(csv_err)?;
    for s in &dataset.samples {
        w.write_record([
            s.index.to_string(),
            s.true_distance.map(fmt_f64).unwrap_or_default(),
            fmt_f64(s.estimated_distance),
            fmt_f64(s.fp_amp[0]),
            fmt_f64(s.fp_amp[1]),
            fmt_f64(s.fp_amp[2]),
            fmt_f64(s.cir_power),
            s.preamble_count.to_string(),
            s.label.map(|l| l.code().to_string()).unwrap_or_default(),
        ])
        .map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

pub fn load_dataset(path: impl AsRef<Path>) -> Result<Dataset> {
    load_dataset_with(path, UwbConfig::default())
}

pub fn load_dataset_with(path: impl AsRef<Path>, config: UwbConfig) -> Result<Dataset> {
    read_dataset(super::open(path.as_ref())?, config)
}

pub fn save_dataset(dataset: &Dataset, path: impl AsRef<Path>) -> Result<()> {
    write_dataset(super::create(path.as_ref())?, dataset)
}

/// Feature table: `index,label,<feature…>` preceded by a `# window=<n>` line.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureTable {
    pub indices: Vec<usize>,
    pub labels: Vec<Option<ClassLabel>>,
    pub window: usize,
    pub matrix: FeatureMatrix,
}

impl FeatureTable {
    /// Extract `selection` from every sample of `dataset`.
    pub fn from_dataset(
        dataset: &Dataset,
        selection: &[FeatureName],
        window: usize,
    ) -> Result<Self> {
        Ok(Self {
            indices: dataset.samples.iter().map(|s| s.index).collect(),
            labels: dataset.samples.iter().map(|s| s.label).collect(),
            window,
            matrix: extract_features(dataset, selection, window)?,
        })
    }

    /// Labels of every row; fails if any row is unlabeled.
    pub fn require_labels(&self) -> Result<Vec<ClassLabel>> {
        self.labels
            .iter()
            .zip(&self.indices)
            .map(|(l, i)| l.ok_or_else(|| Error::arg(format!("row {i} is unlabeled"))))
            .collect()
    }
}

pub fn write_features<W: Write>(mut writer: W, table: &FeatureTable) -> Result<()> {
    writeln!(writer, "# window={}", table.window)?;
    let mut w = csv::Writer::from_writer(writer);
    let mut header = vec!["index".to_string(), "label".to_string()];
    header.extend(table.matrix.names.iter().map(|n| n.to_string()));
    w.write_record(&header).map_err(csv_err)?;
    for ((idx, label), row) in table
        .indices
        .iter()
        .zip(&table.labels)
        .zip(&table.matrix.rows)
    {
        let mut rec = vec![
            idx.to_string(),
            label.map(|l| l.code().to_string()).unwrap_or_default(),
        ];
        rec.extend(row.iter().map(|&v| fmt_f64(v)));
        w.write_record(&rec).map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_features<R: Read>(mut reader: R) -> Result<FeatureTable> {
    let mut text = String::new();
    reader.read_to_string(&mut text)?;
    let first = text.lines().next().unwrap_or("");
    let window = first
        .strip_prefix("# window=")
        .and_then(|w| w.trim().parse().ok())
        .ok_or_else(|| Error::Format("feature table must start with `# window=<n>`".into()))?;
    let mut rdr = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let header = rdr.headers().map_err(csv_err)?.clone();
    if header.len() < 3 || &header[0] != "index" || &header[1] != "label" {
        return Err(Error::Format(
            "feature table header must be `index,label,<features>`".into(),
        ));
    }
    let names = header
        .iter()
        .skip(2)
        .map(|s| {
            s.parse::<FeatureName>()
                .map_err(|e| Error::Format(e.to_string()))
        })
        .collect::<Result<Vec<_>>>()?;
    let (mut indices, mut labels, mut rows) = (Vec::new(), Vec::new(), Vec::new());
    for rec in rdr.records() {
        let rec = rec.map_err(csv_err)?;
        let line = rec.position().map(|p| p.line() as usize).unwrap_or(0);
        indices.push(parse_num(&rec[0], "index", line)?);
        labels.push(match &rec[1] {
            "" => None,
            s => Some(
                parse_num::<u8>(s, "label", line)
                    .ok()
                    .and_then(ClassLabel::from_code)
                    .ok_or_else(|| Error::Parse {
                        line,
                        message: format!("bad label `{s}`"),
                    })?,
            ),
        });
        rows.push(
            (2..rec.len())
                .map(|i| parse_num(&rec[i], header.get(i).unwrap_or("feature"), line))
                .collect::<Result<Vec<f64>>>()?,
        );
    }
    Ok(FeatureTable {
        indices,
        labels,
        window,
        matrix: FeatureMatrix { names, rows },
    })
}

pub fn save_features(table: &FeatureTable, path: impl AsRef<Path>) -> Result<()> {
    write_features(super::create(path.as_ref())?, table)
}

pub fn load_features(path: impl AsRef<Path>) -> Result<FeatureTable> {
    read_features(super::open(path.as_ref())?)
}
