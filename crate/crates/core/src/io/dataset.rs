//! Vestige-count CSV: `site_id,replicate,count,coverage`, one row per
//! (site, replicate), coverage repeated on every row of a site.

use std::collections::HashMap;
use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::model::{SiteRecord, SurveyDataset};

pub const DATASET_HEADER: [&str; 4] = ["site_id", "replicate", "count", "coverage"];

pub fn load_dataset(path: impl AsRef<Path>) -> Result<SurveyDataset> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    read_dataset(file, &path.display().to_string())
}

struct SiteRows {
    id: String,
    coverage: f64,
    coverage_line: u64,
    counts: Vec<(u64, u64)>,
}

/// Parses dataset CSV from any reader; `source` names it in errors.
pub fn read_dataset<R: Read>(reader: R, source: &str) -> Result<SurveyDataset> {
    let parse_err = |line: u64, message: String| Error::Parse {
        path: source.into(),
        line: line as usize,
        message,
    };
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
    let header = rdr.headers().map_err(|e| parse_err(1, e.to_string()))?.clone();
    if header.iter().collect::<Vec<_>>() != DATASET_HEADER {
        return Err(parse_err(
            1,
            format!(
                "expected header `{}`, found `{}`",
                DATASET_HEADER.join(","),
                header.iter().collect::<Vec<_>>().join(",")
            ),
        ));
    }

    let mut sites: Vec<SiteRows> = Vec::new();
    let mut index: HashMap<String, usize> = HashMap::new();
    for rec in rdr.records() {
        let rec = rec.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line());
            parse_err(line, e.to_string())
        })?;
        let line = rec.position().map_or(0, |p| p.line());
        let field = |i: usize| rec.get(i).unwrap_or("");
        let site_id = field(0).to_string();
        if site_id.is_empty() {
            return Err(parse_err(line, "empty site_id".into()));
        }
        let replicate: u64 = field(1)
            .parse()
            .map_err(|_| parse_err(line, format!("replicate `{}` is not a nonnegative integer", field(1))))?;
        let count: u64 = field(2)
            .parse()
            .map_err(|_| parse_err(line, format!("count `{}` is not a nonnegative integer", field(2))))?;
        let coverage: f64 = field(3)
            .parse()
            .map_err(|_| parse_err(line, format!("coverage `{}` is not a number", field(3))))?;
        if !(coverage > 0.0 && coverage < 1.0) {
            return Err(parse_err(line, format!("coverage {coverage} must lie strictly in (0, 1)")));
        }

        let k = *index.entry(site_id.clone()).or_insert_with(|| {
            sites.push(SiteRows {
                id: site_id.clone(),
                coverage,
                coverage_line: line,
                counts: Vec::new(),
            });
            sites.len() - 1
        });
        let site = &mut sites[k];
        if site.coverage != coverage {
            return Err(parse_err(
                line,
                format!(
                    "site {site_id}: coverage {coverage} differs from {} on line {}",
                    site.coverage, site.coverage_line
                ),
            ));
        }
        if site.counts.iter().any(|&(r, _)| r == replicate) {
            return Err(parse_err(line, format!("duplicate row for site {site_id}, replicate {replicate}")));
        }
        site.counts.push((replicate, count));
    }
    if sites.is_empty() {
        return Err(Error::Data(format!("{source}: no data rows")));
    }

    let records = sites
        .into_iter()
        .map(|mut s| {
            s.counts.sort_unstable();
            SiteRecord {
                site_id: s.id,
                coverage: s.coverage,
                counts: s.counts.into_iter().map(|(_, c)| c).collect(),
            }
        })
        .collect::<Vec<_>>();
    let replicate_ids = |s: &SiteRecord| s.counts.len();
    let expected = replicate_ids(&records[0]);
    if let Some(bad) = records.iter().find(|s| replicate_ids(s) != expected) {
        return Err(Error::Data(format!(
            "{source}: site {} has {} replicates but site {} has {expected}",
            bad.site_id,
            bad.counts.len(),
            records[0].site_id
        )));
    }
    SurveyDataset::new(records)
}

/// Writes rows in site order with replicates numbered from 1.
pub fn write_dataset_to<W: Write>(out: W, data: &SurveyDataset) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(DATASET_HEADER)?;
    for site in data.sites() {
        for (r, count) in site.counts.iter().enumerate() {
            w.write_record([
                site.site_id.clone(),
                (r + 1).to_string(),
                count.to_string(),
                site.coverage.to_string(),
            ])?;
        }
    }
    w.flush().map_err(|e| Error::io("<dataset>", e))?;
    Ok(())
}

pub fn write_dataset(path: impl AsRef<Path>, data: &SurveyDataset) -> Result<()> {
    let path = path.as_ref();
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    write_dataset_to(file, data)
}
