//! Increasing events (up-sets) of {0,1}^n and the layer-cake decomposition
//! of monotone functions.
//!
//! An up-set is a family of configurations closed under coordinatewise
//! increase. For n <= 5 sites the whole configuration space fits in a u32,
//! so an up-set is stored as a membership mask over the 2^n configurations.

use rand::Rng;

use crate::error::{Error, Result};

/// Enumeration is capped here: the number of up-sets grows as the Dedekind
/// numbers (2, 3, 6, 20, 168, 7581, ...).
pub const MAX_UPSET_SITES: usize = 5;

/// An upward-closed subset of {0,1}^n, stored as a bit mask over
/// configuration indices (configuration c is a member iff bit c is set).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct UpSet {
    n_sites: usize,
    mask: u64,
}

impl UpSet {
    /// Validate upward closure and wrap the mask.
    pub fn new(n_sites: usize, mask: u64) -> Result<Self> {
        if n_sites > MAX_UPSET_SITES {
            return Err(Error::CapacityExceeded {
                what: "up-set",
                n: n_sites,
                max: MAX_UPSET_SITES,
            });
        }
        let n_configs = 1u64 << n_sites;
        if n_configs < 64 && mask >> n_configs != 0 {
            return Err(Error::InvalidDistribution(format!(
                "up-set mask has bits beyond the {n_configs} configurations"
            )));
        }
        let u = UpSet { n_sites, mask };
        for c in 0..1u64 << n_sites {
            if u.contains(c) {
                for i in 0..n_sites {
                    let above = c | 1 << i;
                    if !u.contains(above) {
                        return Err(Error::NotMonotone { lo: c, hi: above });
                    }
                }
            }
        }
        Ok(u)
    }

    pub fn empty(n_sites: usize) -> Self {
        UpSet { n_sites, mask: 0 }
    }

    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    pub fn mask(&self) -> u64 {
        self.mask
    }

    #[inline]
    pub fn contains(&self, config: u64) -> bool {
        self.mask >> config & 1 == 1
    }

    pub fn len(&self) -> usize {
        self.mask.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.mask == 0
    }

    /// Intersection of two up-sets (again an up-set).
    pub fn intersect(&self, other: &UpSet) -> UpSet {
        debug_assert_eq!(self.n_sites, other.n_sites);
        UpSet {
            n_sites: self.n_sites,
            mask: self.mask & other.mask,
        }
    }
}

/// All upward-closed subsets of {0,1}^n, each exactly once (including the
/// empty family and the full space).
///
/// Configurations are visited in a monotone-compatible order (by popcount);
/// a configuration with a member strictly below it is forced in, otherwise
/// both choices branch.
pub fn enumerate_upsets(n_sites: usize) -> Result<Vec<UpSet>> {
    if n_sites > MAX_UPSET_SITES {
        return Err(Error::CapacityExceeded {
            what: "up-set enumeration",
            n: n_sites,
            max: MAX_UPSET_SITES,
        });
    }
    let n_configs = 1u64 << n_sites;
    let mut order: Vec<u64> = (0..n_configs).collect();
    order.sort_by_key(|&c| (c.count_ones(), c));

    let mut out = Vec::new();
    let mut stack = vec![(0usize, 0u64)];
    while let Some((pos, mask)) = stack.pop() {
        if pos == order.len() {
            out.push(UpSet { n_sites, mask });
            continue;
        }
        let c = order[pos];
        // forced in if any strict predecessor is already a member
        let mut forced = false;
        if c != 0 {
            let mut sub = (c - 1) & c;
            loop {
                if mask >> sub & 1 == 1 {
                    forced = true;
                    break;
                }
                if sub == 0 {
                    break;
                }
                sub = (sub - 1) & c;
            }
        }
        stack.push((pos + 1, mask | 1 << c));
        if !forced {
            stack.push((pos + 1, mask));
        }
    }
    out.sort();
    Ok(out)
}

/// A deterministic sample of up-sets, for site counts where the full family
/// is too large to scan pairwise.
pub fn sample_upsets(n_sites: usize, count: usize, seed: u64) -> Result<Vec<UpSet>> {
    let all = enumerate_upsets(n_sites)?;
    if all.len() <= count {
        return Ok(all);
    }
    let mut rng = crate::rng::Stream::new(seed, 0, crate::rng::StreamPurpose::MeasureDraw);
    let mut picked = Vec::with_capacity(count);
    let mut taken = vec![false; all.len()];
    while picked.len() < count {
        let i = rng.random_range(0..all.len());
        if !taken[i] {
            taken[i] = true;
            picked.push(all[i]);
        }
    }
    picked.sort();
    Ok(picked)
}

/// One slab of a layer-cake decomposition: `weight * 1_{upset}`.
#[derive(Clone, Debug)]
pub struct Layer {
    /// Function value at which this layer switches on.
    pub threshold: f64,
    /// Positive coefficient of the layer indicator.
    pub weight: f64,
    pub upset: UpSet,
}

/// `f = base + sum_k weight_k * 1_{upset_k}` for a monotone `f`.
#[derive(Clone, Debug)]
pub struct LayerDecomposition {
    pub n_sites: usize,
    pub base: f64,
    pub layers: Vec<Layer>,
}

impl LayerDecomposition {
    /// Re-evaluate the decomposition at a configuration.
    pub fn evaluate(&self, config: u64) -> f64 {
        self.base
            + self
                .layers
                .iter()
                .filter(|l| l.upset.contains(config))
                .map(|l| l.weight)
                .sum::<f64>()
    }
}

/// Decompose an increasing function on {0,1}^n (given as its value table
/// indexed by configuration) into positive-weight up-set indicators.
///
/// Monotonicity is checked on all single-coordinate covers, which implies it
/// on all comparable pairs.
pub fn layer_decompose(n_sites: usize, values: &[f64]) -> Result<LayerDecomposition> {
    if n_sites > MAX_UPSET_SITES {
        return Err(Error::CapacityExceeded {
            what: "layer decomposition",
            n: n_sites,
            max: MAX_UPSET_SITES,
        });
    }
    let n_configs = 1usize << n_sites;
    if values.len() != n_configs {
        return Err(Error::InvalidDistribution(format!(
            "expected {n_configs} values, got {}",
            values.len()
        )));
    }
    for c in 0..n_configs as u64 {
        for i in 0..n_sites {
            let above = c | 1 << i;
            if values[c as usize] > values[above as usize] {
                return Err(Error::NotMonotone { lo: c, hi: above });
            }
        }
    }

    let mut distinct: Vec<f64> = values.to_vec();
    distinct.sort_by(|a, b| a.partial_cmp(b).unwrap());
    distinct.dedup();

    let base = distinct[0];
    let mut layers = Vec::with_capacity(distinct.len().saturating_sub(1));
    for w in distinct.windows(2) {
        let (prev, threshold) = (w[0], w[1]);
        let mut mask = 0u64;
        for c in 0..n_configs as u64 {
            if values[c as usize] >= threshold {
                mask |= 1 << c;
            }
        }
        layers.push(Layer {
            threshold,
            weight: threshold - prev,
            // the superlevel set of a monotone function is upward closed
            upset: UpSet { n_sites, mask },
        });
    }
    Ok(LayerDecomposition {
        n_sites,
        base,
        layers,
    })
}
