//! Seeded synthetic instances.
//!
//! All randomness comes from a PCG-64 (`Lcg128Xsl64`) stream seeded with
//! `seed_from_u64`, so a spec and seed always produce the same file.

use std::collections::BTreeMap;

use rand::{RngExt, SeedableRng};
use rand_pcg::Pcg64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::policy::start_item_list;
use crate::submodular::{
    make_concave_modular_oracle, make_coverage_oracle, make_modular_oracle, GeneratorInfo,
    Instance, Item, ValueOracle, MAX_ITEMS,
};

/// Identity of the pseudo-random generator, recorded in every generated file.
pub const GENERATOR_ALGORITHM: &str = "pcg64-lcg128xsl64";

const PLANT_ATTEMPTS: usize = 100;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GeneratorKind {
    Modular,
    Coverage,
    ConcaveModular,
    /// Coverage instance with at least one indispensable item.
    Planted,
}

impl std::str::FromStr for GeneratorKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "modular" => Ok(GeneratorKind::Modular),
            "coverage" => Ok(GeneratorKind::Coverage),
            "concave_modular" => Ok(GeneratorKind::ConcaveModular),
            "planted" => Ok(GeneratorKind::Planted),
            _ => Err(Error::Config(format!("unknown generator kind '{s}'"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeneratorSpec {
    pub kind: GeneratorKind,
    pub n: usize,
    pub size_max: u64,
    pub seed: u64,
    /// Coverage and planted: size of the shared element universe.
    pub elements: usize,
    /// Coverage and planted: probability that an item covers a given element.
    pub density: f64,
    /// Concave-modular exponent.
    pub exponent: f64,
}

impl GeneratorSpec {
    pub fn new(kind: GeneratorKind, n: usize, size_max: u64, seed: u64) -> Self {
        GeneratorSpec {
            kind,
            n,
            size_max,
            seed,
            elements: (2 * n).max(1),
            density: 0.3,
            exponent: 0.5,
        }
    }

    fn check(&self) -> Result<()> {
        if self.n == 0 || self.n > MAX_ITEMS {
            return Err(Error::Config(format!(
                "item count {} outside 1..={MAX_ITEMS}",
                self.n
            )));
        }
        if self.size_max == 0 {
            return Err(Error::Config("size_max must be at least 1".into()));
        }
        if !(0.0..=1.0).contains(&self.density) {
            return Err(Error::Config(format!(
                "cover density {} outside [0, 1]",
                self.density
            )));
        }
        if self.elements == 0 {
            return Err(Error::Config("element count must be at least 1".into()));
        }
        if self.kind == GeneratorKind::Planted && (self.n < 2 || self.size_max < 2) {
            return Err(Error::Config(
                "planted instances need n >= 2 and size_max >= 2".into(),
            ));
        }
        Ok(())
    }
}

fn item_ids(n: usize) -> Vec<String> {
    let width = (n.saturating_sub(1)).to_string().len().max(2);
    (0..n).map(|i| format!("i{i:0width$}")).collect()
}

/// Weight drawn uniformly from `{0.1, 0.2, …, 10.0}`.
fn weight(rng: &mut Pcg64) -> f64 {
    rng.random_range(1..=100u32) as f64 / 10.0
}

fn random_covers(
    rng: &mut Pcg64,
    ids: &[String],
    elements: &[String],
    density: f64,
) -> BTreeMap<String, Vec<String>> {
    ids.iter()
        .map(|id| {
            let mut list: Vec<String> = elements
                .iter()
                .filter(|_| rng.random_bool(density))
                .cloned()
                .collect();
            if list.is_empty() {
                list.push(elements[rng.random_range(0..elements.len())].clone());
            }
            (id.clone(), list)
        })
        .collect()
}

fn element_ids(prefix: &str, m: usize) -> Vec<String> {
    let width = (m.saturating_sub(1)).to_string().len().max(2);
    (0..m).map(|e| format!("{prefix}{e:0width$}")).collect()
}

fn draw(spec: &GeneratorSpec, rng: &mut Pcg64) -> Result<Instance> {
    let ids = item_ids(spec.n);
    let mut sizes: Vec<u64> = ids
        .iter()
        .map(|_| rng.random_range(1..=spec.size_max))
        .collect();
    let oracle: ValueOracle = match spec.kind {
        GeneratorKind::Modular => {
            make_modular_oracle(ids.iter().map(|id| (id.clone(), weight(rng))))?
        }
        GeneratorKind::ConcaveModular => make_concave_modular_oracle(
            ids.iter().map(|id| (id.clone(), weight(rng))),
            spec.exponent,
        )?,
        GeneratorKind::Coverage => {
            let elements = element_ids("e", spec.elements);
            let weights: Vec<(String, f64)> =
                elements.iter().map(|e| (e.clone(), weight(rng))).collect();
            let covers = random_covers(rng, &ids, &elements, spec.density);
            make_coverage_oracle(weights, covers)?
        }
        GeneratorKind::Planted => {
            // Core pair: a dense unit-size item, then a larger item that is less
            // dense but worth more than everything packed in front of it.
            let elements = element_ids("e", spec.elements);
            let mut weights: Vec<(String, f64)> =
                elements.iter().map(|e| (e.clone(), weight(rng))).collect();
            let mut covers = random_covers(rng, &ids[2..], &elements, spec.density);
            sizes[0] = 1;
            sizes[1] = rng.random_range(2..=spec.size_max);
            // density in [6.0, 9.9], below the unit item's 10.0
            let tenths = rng.random_range(60..=99u64) * sizes[1];
            weights.push(("p0".into(), 10.0));
            weights.push(("p1".into(), tenths as f64 / 10.0));
            covers.insert(ids[0].clone(), vec!["p0".into()]);
            covers.insert(ids[1].clone(), vec!["p1".into()]);
            make_coverage_oracle(weights, covers)?
        }
    };
    let items = ids
        .iter()
        .zip(&sizes)
        .map(|(id, &s)| Item::new(id.clone(), s))
        .collect();
    Instance::new(items, oracle)
}

/// Generates an instance and stamps it with its provenance.
pub fn generate(spec: &GeneratorSpec) -> Result<Instance> {
    spec.check()?;
    let mut rng = Pcg64::seed_from_u64(spec.seed);
    let info = GeneratorInfo {
        algorithm: GENERATOR_ALGORITHM.into(),
        seed: spec.seed,
        spec: serde_json::to_value(spec)?,
    };
    let attempts = if spec.kind == GeneratorKind::Planted {
        PLANT_ATTEMPTS
    } else {
        1
    };
    for _ in 0..attempts {
        let inst = draw(spec, &mut rng)?;
        debug_assert!(inst.is_normalized());
        if spec.kind != GeneratorKind::Planted || !start_item_list(&inst).is_empty() {
            return Ok(inst.with_generator(info));
        }
    }
    Err(Error::Generation(format!(
        "no indispensable item after {PLANT_ATTEMPTS} planted draws (seed {})",
        spec.seed
    )))
}
