//! Data generators: a shifted two-Gaussian domain pair for tests and demos,
//! and Breiman's waveform generator restricted to two classes.

use std::sync::Arc;

use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::data::{Attribute, Dataset, EncodedDataset, Row, Schema, Value};
use crate::error::Result;
use crate::seed;

/// Two isotropic Gaussian classes per domain. The target domain's class
/// means are rotated by `rotation` radians and translated by `shift` along
/// the second axis, so source knowledge is related but not identical.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ShiftedGaussians {
    pub dim: usize,
    /// Distance between the two class means.
    pub separation: f64,
    pub shift: f64,
    pub rotation: f64,
    pub noise: f64,
}

impl Default for ShiftedGaussians {
    fn default() -> Self {
        ShiftedGaussians {
            dim: 2,
            separation: 2.5,
            shift: 1.0,
            rotation: 0.35,
            noise: 1.0,
        }
    }
}

impl ShiftedGaussians {
    /// `(source, target)` with `n_source` and `n_target` rows; labels are
    /// balanced in expectation.
    pub fn generate(
        &self,
        n_source: usize,
        n_target: usize,
        seed: u64,
    ) -> Result<(EncodedDataset, EncodedDataset)> {
        let mut rng = seed::rng(seed);
        let source = self.domain(n_source, false, &mut rng)?;
        let target = self.domain(n_target, true, &mut rng)?;
        Ok((source, target))
    }

    fn domain<R: Rng>(&self, n: usize, shifted: bool, rng: &mut R) -> Result<EncodedDataset> {
        let dim = self.dim.max(2);
        let (sin, cos) = self.rotation.sin_cos();
        let mut rows = Vec::with_capacity(n);
        let mut labels = Vec::with_capacity(n);
        for _ in 0..n {
            let label: u8 = rng.random_range(0..2);
            let half = self.separation / 2.0;
            let mut mean = vec![0.0; dim];
            mean[0] = if label == 1 { half } else { -half };
            if shifted {
                let (a, b) = (mean[0], mean[1]);
                mean[0] = cos * a - sin * b;
                mean[1] = sin * a + cos * b + self.shift;
            }
            let row: Vec<f64> = mean
                .iter()
                .map(|m| {
                    let z: f64 = StandardNormal.sample(rng);
                    m + self.noise * z
                })
                .collect();
            rows.push(row);
            labels.push(label);
        }
        EncodedDataset::from_rows(&rows, labels)
    }
}

/// Number of waveform attributes.
pub const WAVEFORM_WIDTH: usize = 21;

fn base_wave(center: f64, i: usize) -> f64 {
    (6.0 - (i as f64 - center).abs()).max(0.0)
}

/// Breiman's waveform data restricted to its first two classes. Each row
/// mixes two of three shifted triangular waves with a uniform weight and
/// adds unit Gaussian noise to all 21 attributes (`x1`..`x21`). Class 0
/// mixes the waves centred at 11 and 15, class 1 those at 11 and 7.
pub fn waveform(n: usize, seed: u64) -> Result<Dataset> {
    let attributes = (1..=WAVEFORM_WIDTH)
        .map(|i| Attribute::numeric(format!("x{i}")))
        .collect();
    let schema = Arc::new(Schema::binary(attributes, "class")?);
    let mut rng = seed::rng(seed);
    let mut rows = Vec::with_capacity(n);
    for _ in 0..n {
        let label: u8 = rng.random_range(0..2);
        let u: f64 = rng.random();
        let other = if label == 0 { 15.0 } else { 7.0 };
        let values = (1..=WAVEFORM_WIDTH)
            .map(|i| {
                let z: f64 = StandardNormal.sample(&mut rng);
                Value::Num(u * base_wave(11.0, i) + (1.0 - u) * base_wave(other, i) + z)
            })
            .collect();
        rows.push(Row {
            values,
            label: Some(label),
        });
    }
    Dataset::new(schema, rows)
}
