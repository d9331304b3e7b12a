//! Built-in case studies: the concept-combination survey data and the
//! two-vessel siphon experiment.

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::joint::JointTable;
use crate::prob::{probabilities_from_counts, CountTable, OutcomeSet, ProbabilityVector};
use crate::sampling::{chunks, substream};

/// Survey counts: 81 participants choosing Horse/Bear, Growls/Whinnies and
/// the four combined sentences.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnimalActsDataset {
    pub animal: CountTable,
    pub acts: CountTable,
    /// Rows Horse, Bear; columns Growls, Whinnies.
    pub joint: [[u64; 2]; 2],
    pub participants: u64,
}

impl Default for AnimalActsDataset {
    fn default() -> Self {
        Self {
            animal: CountTable::from_pairs([("H", 43u64), ("B", 38)]).expect("static data"),
            acts: CountTable::from_pairs([("G", 39u64), ("W", 42)]).expect("static data"),
            joint: [[4, 51], [21, 5]],
            participants: 81,
        }
    }
}

impl AnimalActsDataset {
    pub fn joint_table(&self) -> JointTable {
        JointTable::from_counts(
            self.animal.outcomes().clone(),
            self.acts.outcomes().clone(),
            self.joint.iter().map(|r| r.to_vec()).collect(),
        )
        .expect("static data")
    }
}

/// `(e, f, g)`: Animal marginals, Acts marginals and the joint table, all
/// exact.
pub fn animal_acts_tables() -> (ProbabilityVector, ProbabilityVector, JointTable) {
    let data = AnimalActsDataset::default();
    (
        probabilities_from_counts(&data.animal),
        probabilities_from_counts(&data.acts),
        data.joint_table(),
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum VesselsMode {
    /// Independent volumes, each uniform on `[0, capacity]`.
    Separate,
    /// Total volume fixed at `capacity`; left share uniform on `[0, capacity]`.
    Connected,
}

impl std::str::FromStr for VesselsMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "separate" => Ok(Self::Separate),
            "connected" => Ok(Self::Connected),
            other => Err(Error::InvalidConfig(format!("unknown vessels mode {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VesselsConfig {
    /// Liters.
    pub capacity: f64,
    /// Liters; outcome `M` iff the collected volume exceeds it.
    pub threshold: f64,
    pub mode: VesselsMode,
    pub trials: u64,
    pub seed: u64,
}

impl VesselsConfig {
    pub fn new(mode: VesselsMode, trials: u64, seed: u64) -> Self {
        Self {
            capacity: 20.0,
            threshold: 10.0,
            mode,
            trials,
            seed,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.threshold > 0.0 && self.threshold < self.capacity && self.capacity.is_finite()) {
            return Err(Error::InvalidConfig(format!(
                "need 0 < threshold < capacity, got threshold {} and capacity {}",
                self.threshold, self.capacity
            )));
        }
        if self.trials == 0 {
            return Err(Error::InvalidConfig("trials must be at least 1".into()));
        }
        Ok(())
    }
}

/// Outcome tallies; first letter is the left vessel.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct VesselsOutcomeCounts {
    #[serde(rename = "MM")]
    pub mm: u64,
    #[serde(rename = "ML")]
    pub ml: u64,
    #[serde(rename = "LM")]
    pub lm: u64,
    #[serde(rename = "LL")]
    pub ll: u64,
}

impl VesselsOutcomeCounts {
    pub fn total(&self) -> u64 {
        self.mm + self.ml + self.lm + self.ll
    }

    fn record(&mut self, left_more: bool, right_more: bool) {
        match (left_more, right_more) {
            (true, true) => self.mm += 1,
            (true, false) => self.ml += 1,
            (false, true) => self.lm += 1,
            (false, false) => self.ll += 1,
        }
    }

    fn merge(mut self, other: Self) -> Self {
        self.mm += other.mm;
        self.ml += other.ml;
        self.lm += other.lm;
        self.ll += other.ll;
        self
    }
}

// Volume uniform on [0, capacity], redrawn if it lands exactly on the
// threshold.
fn draw_volume<R: Rng>(rng: &mut R, capacity: f64, threshold: f64) -> f64 {
    loop {
        let v = rng.random::<f64>() * capacity;
        if v != threshold {
            return v;
        }
    }
}

pub fn simulate_vessels(cfg: &VesselsConfig) -> Result<VesselsOutcomeCounts> {
    cfg.validate()?;
    let (capacity, threshold) = (cfg.capacity, cfg.threshold);
    let counts = chunks(cfg.trials)
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|(stream, len)| {
            let mut rng = substream(cfg.seed, stream);
            let mut counts = VesselsOutcomeCounts::default();
            for _ in 0..len {
                let (left, right) = match cfg.mode {
                    VesselsMode::Separate => (
                        draw_volume(&mut rng, capacity, threshold),
                        draw_volume(&mut rng, capacity, threshold),
                    ),
                    VesselsMode::Connected => loop {
                        let left = draw_volume(&mut rng, capacity, threshold);
                        let right = capacity - left;
                        if right != threshold {
                            break (left, right);
                        }
                    },
                };
                counts.record(left > threshold, right > threshold);
            }
            counts
        })
        .reduce(VesselsOutcomeCounts::default, VesselsOutcomeCounts::merge);
    Ok(counts)
}

/// Rows are the left vessel `(M, L)`, columns the right vessel `(M, L)`.
pub fn vessels_joint_table(counts: &VesselsOutcomeCounts) -> Result<JointTable> {
    if counts.total() == 0 {
        return Err(Error::InvalidCounts("no trials recorded".into()));
    }
    let ml = OutcomeSet::new(["M", "L"])?;
    JointTable::from_counts(
        ml.clone(),
        ml,
        vec![vec![counts.mm, counts.ml], vec![counts.lm, counts.ll]],
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::prob::rational;

    #[test]
    fn animal_acts_exact_values() {
        let (e, f, g) = animal_acts_tables();
        assert_eq!(e.exact().unwrap(), &[rational(43, 81), rational(38, 81)]);
        assert_eq!(e.rounded(2), vec![0.53, 0.47]);
        assert_eq!(f.exact().unwrap(), &[rational(39, 81), rational(42, 81)]);
        assert_eq!(f.rounded(2), vec![0.48, 0.52]);
        assert_eq!(
            g.exact().unwrap(),
            &[rational(4, 81), rational(51, 81), rational(21, 81), rational(5, 81)]
        );
        let data = AnimalActsDataset::default();
        assert_eq!(data.animal.total(), data.participants);
        assert_eq!(data.acts.total(), data.participants);
        assert_eq!(g.total(), Some(data.participants));
    }

    fn within(freq: f64, target: f64, p: f64, n: u64) -> bool {
        (freq - target).abs() <= 3.0 * (p * (1.0 - p) / n as f64).sqrt()
    }

    #[test]
    fn separate_vessels_are_uniform() {
        let n = 100_000;
        let c = simulate_vessels(&VesselsConfig::new(VesselsMode::Separate, n, 3)).unwrap();
        assert_eq!(c.total(), n);
        for x in [c.mm, c.ml, c.lm, c.ll] {
            assert!(within(x as f64 / n as f64, 0.25, 0.25, n), "{c:?}");
        }
    }

    #[test]
    fn connected_vessels_anticorrelate() {
        let n = 100_000;
        let c = simulate_vessels(&VesselsConfig::new(VesselsMode::Connected, n, 3)).unwrap();
        assert_eq!((c.mm, c.ll), (0, 0));
        assert!(within(c.ml as f64 / n as f64, 0.5, 0.5, n), "{c:?}");
        assert!(within(c.lm as f64 / n as f64, 0.5, 0.5, n), "{c:?}");
    }

    #[test]
    fn single_connected_trial() {
        for seed in 0..20 {
            let c = simulate_vessels(&VesselsConfig::new(VesselsMode::Connected, 1, seed)).unwrap();
            assert_eq!(c.ml + c.lm, 1);
        }
    }

    #[test]
    fn simulation_is_reproducible() {
        let cfg = VesselsConfig::new(VesselsMode::Separate, 50_000, 17);
        assert_eq!(simulate_vessels(&cfg).unwrap(), simulate_vessels(&cfg).unwrap());
    }

    #[test]
    fn config_validation() {
        let mut cfg = VesselsConfig::new(VesselsMode::Separate, 10, 1);
        cfg.threshold = 25.0;
        assert!(simulate_vessels(&cfg).is_err());
        let cfg = VesselsConfig::new(VesselsMode::Separate, 0, 1);
        assert!(simulate_vessels(&cfg).is_err());
        assert!("sideways".parse::<VesselsMode>().is_err());
        assert_eq!("connected".parse::<VesselsMode>().unwrap(), VesselsMode::Connected);
    }

    #[test]
    fn ideal_count_tables() {
        let t = vessels_joint_table(&VesselsOutcomeCounts { mm: 0, ml: 500, lm: 500, ll: 0 }).unwrap();
        assert_eq!(t.matrix(), vec![vec![0.0, 0.5], vec![0.5, 0.0]]);
        let t = vessels_joint_table(&VesselsOutcomeCounts { mm: 250, ml: 250, lm: 250, ll: 250 }).unwrap();
        assert_eq!(t.probs(), &[0.25; 4]);
        let t = vessels_joint_table(&VesselsOutcomeCounts { mm: 1000, ..Default::default() }).unwrap();
        assert_eq!(t.probs(), &[1.0, 0.0, 0.0, 0.0]);
        assert!(vessels_joint_table(&VesselsOutcomeCounts::default()).is_err());
    }
}
