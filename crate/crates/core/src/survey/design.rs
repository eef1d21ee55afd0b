use rand::Rng;
use serde::{Deserialize, Serialize};

use super::detection::half_normal_detection;
use crate::error::{Error, Result};
use crate::model::SurveyDataset;

/// Rectangular region with systematic parallel transects along its long
/// axis, the first at half a spacing from the edge.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SurveyDesign {
    pub region_width_m: f64,
    pub region_length_m: f64,
    pub transect_spacing_m: f64,
    pub truncation_m: f64,
    pub detection_sigma_m: f64,
    pub n_vestiges: u64,
}

impl Default for SurveyDesign {
    /// 2 × 5 km, 5000 vestiges, 1 km spacing, 10 m truncation: two 5 km
    /// transects.
    fn default() -> Self {
        Self {
            region_width_m: 2_000.0,
            region_length_m: 5_000.0,
            transect_spacing_m: 1_000.0,
            truncation_m: 10.0,
            detection_sigma_m: 5.0,
            n_vestiges: 5_000,
        }
    }
}

impl SurveyDesign {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("region_width_m", self.region_width_m),
            ("region_length_m", self.region_length_m),
            ("transect_spacing_m", self.transect_spacing_m),
            ("truncation_m", self.truncation_m),
            ("detection_sigma_m", self.detection_sigma_m),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::Design(format!("{name} must be positive, got {v}")));
            }
        }
        if self.truncation_m > self.transect_spacing_m / 2.0 {
            return Err(Error::Design(format!(
                "truncation {} m exceeds half the spacing {} m; strips would overlap",
                self.truncation_m, self.transect_spacing_m
            )));
        }
        if self.transect_positions().is_empty() {
            return Err(Error::Design("no transect fits inside the region".into()));
        }
        Ok(())
    }

    pub fn area_m2(&self) -> f64 {
        self.region_width_m * self.region_length_m
    }

    pub fn area_km2(&self) -> f64 {
        self.area_m2() / 1e6
    }

    /// Cross-axis coordinates of transects whose whole strip lies inside
    /// the region.
    pub fn transect_positions(&self) -> Vec<f64> {
        let mut out = Vec::new();
        let mut x = self.transect_spacing_m / 2.0;
        while x + self.truncation_m <= self.region_width_m {
            out.push(x);
            x += self.transect_spacing_m;
        }
        out
    }

    /// ν = 2wL/A for a single transect.
    pub fn coverage_per_transect(&self) -> f64 {
        2.0 * self.truncation_m * self.region_length_m / self.area_m2()
    }
}

/// Perpendicular distances of detected vestiges, per transect.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistanceData {
    pub truncation_m: f64,
    pub transect_lengths_m: Vec<f64>,
    pub distances_m: Vec<Vec<f64>>,
}

impl DistanceData {
    pub fn new(truncation_m: f64, transect_lengths_m: Vec<f64>, distances_m: Vec<Vec<f64>>) -> Result<Self> {
        if transect_lengths_m.len() != distances_m.len() {
            return Err(Error::Data(format!(
                "{} transect lengths for {} distance lists",
                transect_lengths_m.len(),
                distances_m.len()
            )));
        }
        if let Some(x) = distances_m
            .iter()
            .flatten()
            .find(|&&x| !(0.0..=truncation_m).contains(&x))
        {
            return Err(Error::Data(format!(
                "distance {x} m outside [0, {truncation_m}]"
            )));
        }
        Ok(Self {
            truncation_m,
            transect_lengths_m,
            distances_m,
        })
    }

    pub fn n_detected(&self) -> usize {
        self.distances_m.iter().map(Vec::len).sum()
    }

    pub fn total_length_m(&self) -> f64 {
        self.transect_lengths_m.iter().sum()
    }

    pub fn pooled(&self) -> Vec<f64> {
        self.distances_m.iter().flatten().copied().collect()
    }

    pub fn counts(&self) -> Vec<u64> {
        self.distances_m.iter().map(|d| d.len() as u64).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SurveySimulation {
    pub distances: DistanceData,
    pub counts: Vec<u64>,
    pub coverage: Vec<f64>,
}

impl SurveySimulation {
    /// Detected counts as a one-replicate vestige-count dataset.
    pub fn to_dataset(&self) -> Result<SurveyDataset> {
        SurveyDataset::from_counts(
            &self.coverage,
            self.counts.iter().map(|&c| vec![c]).collect(),
        )
    }
}

/// Scatters vestiges uniformly over the region and detects those inside a
/// strip with half-normal probability of their distance to the transect.
pub fn simulate_survey<R: Rng + ?Sized>(design: &SurveyDesign, rng: &mut R) -> Result<SurveySimulation> {
    design.validate()?;
    let positions = design.transect_positions();
    let w = design.truncation_m;
    let mut distances = vec![Vec::new(); positions.len()];
    for _ in 0..design.n_vestiges {
        let x = rng.random::<f64>() * design.region_width_m;
        // along-axis coordinate is irrelevant: transects span the full length
        let _along = rng.random::<f64>() * design.region_length_m;
        let k = ((x / design.transect_spacing_m - 0.5).round().max(0.0) as usize)
            .min(positions.len() - 1);
        let d = (x - positions[k]).abs();
        if d <= w && rng.random::<f64>() < half_normal_detection(d, design.detection_sigma_m) {
            distances[k].push(d);
        }
    }
    let counts = distances.iter().map(|d| d.len() as u64).collect();
    let n = positions.len();
    Ok(SurveySimulation {
        distances: DistanceData::new(w, vec![design.region_length_m; n], distances)?,
        counts,
        coverage: vec![design.coverage_per_transect(); n],
    })
}
