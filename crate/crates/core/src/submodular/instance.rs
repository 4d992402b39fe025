use std::collections::{BTreeSet, HashSet};
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::oracle::Compiled;
use super::{validate_oracle, ItemSet, ValueOracle, MAX_ITEMS};
use crate::error::{Error, Result};
use crate::numeric::TOL;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Item {
    pub id: String,
    pub size: u64,
}

impl Item {
    pub fn new(id: impl Into<String>, size: u64) -> Self {
        Item {
            id: id.into(),
            size,
        }
    }
}

/// Provenance of a generated instance, written at the head of the file.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeneratorInfo {
    pub algorithm: String,
    pub seed: u64,
    pub spec: serde_json::Value,
}

/// On-disk layout of an instance.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InstanceFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generator: Option<GeneratorInfo>,
    pub items: Vec<Item>,
    pub objective: ValueOracle,
}

/// Items with integer sizes plus the objective over them.
///
/// Items are kept sorted by id, so item indices follow the canonical order.
/// Instances are immutable once built and can be shared across threads.
#[derive(Clone, Debug)]
pub struct Instance {
    items: Vec<Item>,
    oracle: ValueOracle,
    compiled: Compiled,
    generator: Option<GeneratorInfo>,
}

impl Instance {
    /// Builds an instance. Table oracles are validated exhaustively and refused
    /// if they are not normalized, monotone and submodular.
    pub fn new(items: Vec<Item>, oracle: ValueOracle) -> Result<Self> {
        let inst = Self::new_unchecked(items, oracle)?;
        if matches!(inst.oracle, ValueOracle::Table { .. }) {
            let report = validate_oracle(&inst);
            if !report.is_valid() {
                return Err(Error::Validation(report.describe(&inst)));
            }
        }
        Ok(inst)
    }

    /// Builds an instance without the structural check on table oracles.
    ///
    /// Only diagnostic routines should see such instances; the algorithms assume
    /// a submodular objective.
    pub fn new_unchecked(mut items: Vec<Item>, oracle: ValueOracle) -> Result<Self> {
        if items.len() > MAX_ITEMS {
            return Err(Error::Config(format!(
                "{} items exceed the limit of {MAX_ITEMS}",
                items.len()
            )));
        }
        let mut seen = HashSet::new();
        for it in &items {
            if it.id.is_empty() || it.id.contains(',') {
                return Err(Error::Config(format!("invalid item id '{}'", it.id)));
            }
            if it.size == 0 {
                return Err(Error::Config(format!("item '{}' has size 0", it.id)));
            }
            if !seen.insert(it.id.as_str()) {
                return Err(Error::Config(format!("duplicate item id '{}'", it.id)));
            }
        }
        items.sort_by(|a, b| a.id.cmp(&b.id));
        let ids: Vec<String> = items.iter().map(|i| i.id.clone()).collect();
        let compiled = oracle.compile(&ids)?;
        Ok(Instance {
            items,
            oracle,
            compiled,
            generator: None,
        })
    }

    pub fn with_generator(mut self, info: GeneratorInfo) -> Self {
        self.generator = Some(info);
        self
    }

    pub fn generator(&self) -> Option<&GeneratorInfo> {
        self.generator.as_ref()
    }

    pub fn n(&self) -> usize {
        self.items.len()
    }

    pub fn items(&self) -> &[Item] {
        &self.items
    }

    pub fn oracle(&self) -> &ValueOracle {
        &self.oracle
    }

    pub fn id(&self, index: usize) -> &str {
        &self.items[index].id
    }

    pub fn size(&self, index: usize) -> u64 {
        self.items[index].size
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.items
            .binary_search_by(|it| it.id.as_str().cmp(id))
            .ok()
    }

    pub fn all(&self) -> ItemSet {
        ItemSet::full(self.n())
    }

    pub fn set_of<S: AsRef<str>>(&self, ids: &[S]) -> Result<ItemSet> {
        let mut set = ItemSet::EMPTY;
        for id in ids {
            let id = id.as_ref();
            let i = self
                .index_of(id)
                .ok_or_else(|| Error::Usage(format!("unknown item id '{id}'")))?;
            set.insert(i);
        }
        Ok(set)
    }

    /// Ids of the members in canonical (ascending) order.
    pub fn ids_of(&self, set: ItemSet) -> Vec<&str> {
        set.iter().map(|i| self.id(i)).collect()
    }

    /// `f(S)`.
    pub fn value(&self, set: ItemSet) -> f64 {
        self.compiled.evaluate(set)
    }

    /// `f(S)` for a set given by ids.
    pub fn evaluate<S: AsRef<str>>(&self, ids: &[S]) -> Result<f64> {
        Ok(self.value(self.set_of(ids)?))
    }

    /// `f(S ∪ {i}) − f(S)`.
    pub fn marginal(&self, set: ItemSet, index: usize) -> f64 {
        self.value(set.with(index)) - self.value(set)
    }

    pub fn singleton_value(&self, index: usize) -> f64 {
        self.value(ItemSet::singleton(index))
    }

    pub fn size_of(&self, set: ItemSet) -> u64 {
        set.iter().map(|i| self.size(i)).sum()
    }

    pub fn total_size(&self) -> u64 {
        self.size_of(self.all())
    }

    pub fn is_normalized(&self) -> bool {
        (0..self.n()).all(|i| self.singleton_value(i) > 0.0)
    }

    /// Drops every item whose singleton value is zero.
    pub fn normalize(&self) -> Result<Instance> {
        let keep: Vec<usize> = (0..self.n())
            .filter(|&i| self.singleton_value(i).abs() > TOL)
            .collect();
        if keep.len() == self.n() {
            return Ok(self.clone());
        }
        let ids: BTreeSet<&str> = keep.iter().map(|&i| self.id(i)).collect();
        let items = keep.iter().map(|&i| self.items[i].clone()).collect();
        let mut out = Instance::new_unchecked(items, self.oracle.restrict(&ids))?;
        out.generator = self.generator.clone();
        Ok(out)
    }

    /// `c = 1 − min_j (f(N) − f(N∖{j})) / f({j})`.
    ///
    /// Floating-point slack of at most `1e-9` outside `[0, 1]` is clamped; anything
    /// larger means the oracle is not monotone submodular and is reported.
    pub fn curvature(&self) -> Result<f64> {
        if self.n() == 0 {
            return Err(Error::Precondition("curvature of an empty instance".into()));
        }
        let all = self.all();
        let f_all = self.value(all);
        let mut min_ratio = f64::INFINITY;
        for j in 0..self.n() {
            let single = self.singleton_value(j);
            if single <= 0.0 {
                return Err(Error::Precondition(format!(
                    "item '{}' has zero singleton value; normalize the instance first",
                    self.id(j)
                )));
            }
            let ratio = (f_all - self.value(all.without(j))) / single;
            min_ratio = min_ratio.min(ratio);
        }
        let c = 1.0 - min_ratio;
        if (0.0..=1.0).contains(&c) {
            Ok(c)
        } else if (-TOL..0.0).contains(&c) {
            Ok(0.0)
        } else if c > 1.0 && c <= 1.0 + TOL {
            Ok(1.0)
        } else {
            Err(Error::Validation(format!(
                "curvature {c} outside [0, 1]; the oracle is not monotone submodular"
            )))
        }
    }

    pub fn to_file(&self) -> InstanceFile {
        InstanceFile {
            generator: self.generator.clone(),
            items: self.items.clone(),
            objective: self.oracle.clone(),
        }
    }

    pub fn from_file(file: InstanceFile) -> Result<Self> {
        let gen = file.generator;
        let mut inst = Instance::new(file.items, file.objective)?;
        inst.generator = gen;
        Ok(inst)
    }

    pub fn from_file_unchecked(file: InstanceFile) -> Result<Self> {
        let gen = file.generator;
        let mut inst = Instance::new_unchecked(file.items, file.objective)?;
        inst.generator = gen;
        Ok(inst)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_file())
            .expect("instance serialization is infallible");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Self::from_file(serde_json::from_str(text)?)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn load_unchecked(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_file_unchecked(serde_json::from_str(&std::fs::read_to_string(path)?)?)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_json())?;
        Ok(())
    }

    /// SHA-256 of the canonical JSON serialization, hex encoded.
    pub fn digest(&self) -> String {
        Sha256::digest(self.to_json().as_bytes())
            .iter()
            .map(|b| format!("{b:02x}"))
            .collect()
    }
}
