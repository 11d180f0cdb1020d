use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::TransformError;
use crate::beats::{BeatLabel, Dataset};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SplitSpec {
    pub train_fraction: f64,
    pub seed: u64,
    pub stratified: bool,
}

impl Default for SplitSpec {
    fn default() -> Self {
        SplitSpec {
            train_fraction: 0.8,
            seed: 42,
            stratified: true,
        }
    }
}

impl SplitSpec {
    pub fn validate(&self) -> Result<(), TransformError> {
        if self.train_fraction > 0.0 && self.train_fraction < 1.0 {
            Ok(())
        } else {
            Err(TransformError::InvalidSplit(self.train_fraction))
        }
    }
}

fn floor_share(n: usize, fraction: f64) -> usize {
    // The epsilon keeps products like 10 * 0.8 from landing just below 8.
    ((n as f64 * fraction) + 1e-9).floor() as usize
}

/// Number of training members per class under stratification.
///
/// The training set gets `floor(total * fraction)` members. Each class first
/// receives `floor(n_c * fraction)`, clamped so that it keeps at least one
/// member on each side; leftover slots go to the classes with the largest
/// fractional shares that can still give one up to training.
pub fn stratified_quota(class_sizes: &[usize], fraction: f64) -> Vec<usize> {
    let total: usize = class_sizes.iter().sum();
    let target = floor_share(total, fraction);
    let mut quota: Vec<usize> = class_sizes
        .iter()
        .map(|&n| {
            if n < 2 {
                floor_share(n, fraction)
            } else {
                floor_share(n, fraction).clamp(1, n - 1)
            }
        })
        .collect();
    let frac =
        |i: usize| class_sizes[i] as f64 * fraction - floor_share(class_sizes[i], fraction) as f64;

    let mut order: Vec<usize> = (0..class_sizes.len()).collect();
    order.sort_by(|&a, &b| frac(b).total_cmp(&frac(a)).then(a.cmp(&b)));
    loop {
        let assigned: usize = quota.iter().sum();
        let before = assigned;
        if assigned < target {
            if let Some(&i) = order
                .iter()
                .find(|&&i| class_sizes[i] >= 2 && quota[i] < class_sizes[i] - 1)
            {
                quota[i] += 1;
            }
        } else if assigned > target {
            if let Some(&i) = order.iter().rev().find(|&&i| quota[i] > 1) {
                quota[i] -= 1;
            }
        }
        if quota.iter().sum::<usize>() == before {
            break;
        }
    }
    quota
}

/// Seeded train/test partition. Both halves keep the source order.
pub fn split(dataset: &Dataset, spec: &SplitSpec) -> Result<(Dataset, Dataset), TransformError> {
    spec.validate()?;
    if dataset.is_empty() {
        return Err(TransformError::EmptyDataset);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut in_train = vec![false; dataset.len()];

    if spec.stratified {
        let members: Vec<Vec<usize>> = BeatLabel::ALL
            .iter()
            .map(|&l| {
                (0..dataset.len())
                    .filter(|&i| dataset.beats[i].label == l)
                    .collect()
            })
            .collect();
        if let Some((label, m)) = BeatLabel::ALL
            .iter()
            .zip(&members)
            .find(|(_, m)| m.len() == 1)
        {
            return Err(TransformError::ClassTooSmall {
                label: *label,
                members: m.len(),
            });
        }
        let sizes: Vec<usize> = members.iter().map(Vec::len).collect();
        let quota = stratified_quota(&sizes, spec.train_fraction);
        for (mut idx, q) in members.into_iter().zip(quota) {
            idx.shuffle(&mut rng);
            for &i in &idx[..q] {
                in_train[i] = true;
            }
        }
    } else {
        let mut idx: Vec<usize> = (0..dataset.len()).collect();
        idx.shuffle(&mut rng);
        for &i in &idx[..floor_share(dataset.len(), spec.train_fraction)] {
            in_train[i] = true;
        }
    }

    let (train, test): (Vec<usize>, Vec<usize>) = (0..dataset.len()).partition(|&i| in_train[i]);
    let mut train = dataset.select(&train);
    let mut test = dataset.select(&test);
    train.manifest.split_seed = spec.seed;
    test.manifest.split_seed = spec.seed;
    Ok((train, test))
}
