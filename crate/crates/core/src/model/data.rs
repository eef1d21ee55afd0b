use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One transect (or camera, or plot) with its coverage fraction and the
/// vestige counts from each temporal replicate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SiteRecord {
    pub site_id: String,
    pub coverage: f64,
    pub counts: Vec<u64>,
}

/// Replicated vestige counts across sites. Construct through
/// [`SurveyDataset::new`] so the invariants hold.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<SiteRecord>", into = "Vec<SiteRecord>")]
pub struct SurveyDataset {
    sites: Vec<SiteRecord>,
}

impl SurveyDataset {
    pub fn new(sites: Vec<SiteRecord>) -> Result<Self> {
        if sites.is_empty() {
            return Err(Error::Data("dataset has no sites".into()));
        }
        let replicates = sites[0].counts.len();
        if replicates == 0 {
            return Err(Error::Data(format!(
                "site `{}` has no counts",
                sites[0].site_id
            )));
        }
        for site in &sites {
            if !(site.coverage > 0.0 && site.coverage < 1.0) {
                return Err(Error::Data(format!(
                    "coverage of site `{}` must lie in (0, 1), got {}",
                    site.site_id, site.coverage
                )));
            }
            if site.counts.len() != replicates {
                return Err(Error::Data(format!(
                    "site `{}` has {} replicates but site `{}` has {}",
                    site.site_id,
                    site.counts.len(),
                    sites[0].site_id,
                    replicates
                )));
            }
        }
        Ok(Self { sites })
    }

    /// Convenience constructor: one site per coverage, ids `s1`, `s2`, ...
    pub fn from_counts(coverage: &[f64], counts: Vec<Vec<u64>>) -> Result<Self> {
        if coverage.len() != counts.len() {
            return Err(Error::Data(format!(
                "{} coverages for {} count vectors",
                coverage.len(),
                counts.len()
            )));
        }
        let sites = coverage
            .iter()
            .zip(counts)
            .enumerate()
            .map(|(i, (&coverage, counts))| SiteRecord {
                site_id: format!("s{}", i + 1),
                coverage,
                counts,
            })
            .collect();
        Self::new(sites)
    }

    pub fn sites(&self) -> &[SiteRecord] {
        &self.sites
    }

    pub fn n_sites(&self) -> usize {
        self.sites.len()
    }

    pub fn n_replicates(&self) -> usize {
        self.sites[0].counts.len()
    }

    /// Every `(count, coverage)` cell.
    pub fn cells(&self) -> impl Iterator<Item = (u64, f64)> + '_ {
        self.sites
            .iter()
            .flat_map(|s| s.counts.iter().map(move |&y| (y, s.coverage)))
    }

    pub fn total_count(&self) -> u64 {
        self.cells().map(|(y, _)| y).sum()
    }

    /// `Σ_{s,t} ν_s`, the coverage summed over every replicate.
    pub fn total_coverage(&self) -> f64 {
        self.sites
            .iter()
            .map(|s| s.coverage * s.counts.len() as f64)
            .sum()
    }
}

impl TryFrom<Vec<SiteRecord>> for SurveyDataset {
    type Error = Error;

    fn try_from(sites: Vec<SiteRecord>) -> Result<Self> {
        Self::new(sites)
    }
}

impl From<SurveyDataset> for Vec<SiteRecord> {
    fn from(d: SurveyDataset) -> Self {
        d.sites
    }
}
