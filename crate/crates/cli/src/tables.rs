//! CSV files exchanged between stages.

use std::path::Path;

use anyhow::{bail, Context, Result};
use strokekit::features::feature_names;
use strokekit::pipeline::WindowTruth;
use strokekit::StrokeLabel;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Split {
    Train,
    Test,
    None,
}

impl Split {
    pub fn name(self) -> &'static str {
        match self {
            Split::Train => "train",
            Split::Test => "test",
            Split::None => "none",
        }
    }

    fn parse(s: &str) -> Result<Self> {
        Ok(match s {
            "train" => Split::Train,
            "test" => Split::Test,
            "none" => Split::None,
            _ => bail!("unknown split `{s}`"),
        })
    }
}

pub fn truth_from_name(s: &str) -> Result<WindowTruth> {
    Ok(match s {
        "idle" => WindowTruth::Idle,
        "mixed" => WindowTruth::Mixed,
        _ => WindowTruth::Stroke(s.parse::<StrokeLabel>()?),
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct WindowRow {
    pub start: usize,
    pub end: usize,
    pub truth: WindowTruth,
    pub split: Split,
}

impl WindowRow {
    pub fn stroke(&self) -> Option<StrokeLabel> {
        match self.truth {
            WindowTruth::Stroke(l) => Some(l),
            _ => None,
        }
    }
}

fn reader(path: &Path) -> Result<csv::Reader<std::fs::File>> {
    csv::Reader::from_path(path).with_context(|| format!("cannot open {}", path.display()))
}

fn expect_header(r: &mut csv::Reader<std::fs::File>, want: &[&str], path: &Path) -> Result<()> {
    let got: Vec<String> = r.headers()?.iter().map(str::to_string).collect();
    if got.len() < want.len() || got[..want.len()] != *want {
        bail!("{}: expected columns starting with {}", path.display(), want.join(","));
    }
    Ok(())
}

const WINDOW_HEADER: [&str; 4] = ["start_index", "end_index", "truth", "split"];

pub fn write_windows(rows: &[WindowRow]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(WINDOW_HEADER)?;
    for r in rows {
        w.write_record([r.start.to_string(), r.end.to_string(), r.truth.name().into(), r.split.name().into()])?;
    }
    Ok(String::from_utf8(w.into_inner()?)?)
}

pub fn read_windows(path: &Path) -> Result<Vec<WindowRow>> {
    let mut r = reader(path)?;
    expect_header(&mut r, &WINDOW_HEADER, path)?;
    r.records()
        .map(|rec| {
            let rec = rec?;
            Ok(WindowRow {
                start: rec[0].parse()?,
                end: rec[1].parse()?,
                truth: truth_from_name(&rec[2])?,
                split: Split::parse(&rec[3])?,
            })
        })
        .collect::<Result<_>>()
        .with_context(|| format!("reading {}", path.display()))
}

#[derive(Debug, Clone, PartialEq)]
pub struct FeatureRow {
    pub window: WindowRow,
    pub values: Vec<f64>,
}

pub fn write_features(rows: &[FeatureRow]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header: Vec<String> = WINDOW_HEADER.iter().map(|s| s.to_string()).collect();
    header.extend(feature_names());
    w.write_record(&header)?;
    for r in rows {
        let mut rec = vec![r.window.start.to_string(), r.window.end.to_string(), r.window.truth.name().into(), r.window.split.name().into()];
        rec.extend(r.values.iter().map(|v| v.to_string()));
        w.write_record(&rec)?;
    }
    Ok(String::from_utf8(w.into_inner()?)?)
}

pub fn read_features(path: &Path) -> Result<Vec<FeatureRow>> {
    let mut r = reader(path)?;
    expect_header(&mut r, &WINDOW_HEADER, path)?;
    let width = r.headers()?.len();
    r.records()
        .map(|rec| {
            let rec = rec?;
            if rec.len() != width {
                bail!("row has {} fields, header has {width}", rec.len());
            }
            let window = WindowRow {
                start: rec[0].parse()?,
                end: rec[1].parse()?,
                truth: truth_from_name(&rec[2])?,
                split: Split::parse(&rec[3])?,
            };
            let values = (4..rec.len()).map(|i| rec[i].parse::<f64>()).collect::<Result<_, _>>()?;
            Ok(FeatureRow { window, values })
        })
        .collect::<Result<_>>()
        .with_context(|| format!("reading {}", path.display()))
}

#[derive(Debug, Clone, PartialEq)]
pub struct PredictionRow {
    pub start: usize,
    pub end: usize,
    pub active: bool,
    pub prediction: Option<StrokeLabel>,
}

const PREDICTION_HEADER: [&str; 4] = ["start_index", "end_index", "active", "prediction"];

pub fn write_predictions(rows: &[PredictionRow]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(PREDICTION_HEADER)?;
    for r in rows {
        let p = r.prediction.map_or("", |l| l.name());
        w.write_record([r.start.to_string(), r.end.to_string(), r.active.to_string(), p.to_string()])?;
    }
    Ok(String::from_utf8(w.into_inner()?)?)
}

pub fn read_predictions(path: &Path) -> Result<Vec<PredictionRow>> {
    let mut r = reader(path)?;
    expect_header(&mut r, &PREDICTION_HEADER, path)?;
    r.records()
        .map(|rec| {
            let rec = rec?;
            let prediction = if rec[3].is_empty() { None } else { Some(rec[3].parse::<StrokeLabel>()?) };
            Ok(PredictionRow { start: rec[0].parse()?, end: rec[1].parse()?, active: rec[2].parse()?, prediction })
        })
        .collect::<Result<_>>()
        .with_context(|| format!("reading {}", path.display()))
}
