use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use super::{ItemSet, EXHAUSTIVE_MAX_ITEMS};
use crate::error::{Error, Result};

/// Specification of a monotone, normalized, submodular set function over item ids.
///
/// This is the id-keyed, serializable form; an [`Instance`](super::Instance)
/// compiles it against its item list before any evaluation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ValueOracle {
    /// `f(S) = Σ_{i∈S} w_i`.
    Modular { weights: BTreeMap<String, f64> },
    /// Weighted coverage: `f(S)` is the total weight of elements covered by `S`.
    Coverage {
        elements: BTreeMap<String, f64>,
        covers: BTreeMap<String, Vec<String>>,
    },
    /// `f(S) = (Σ_{i∈S} w_i)^p` with `p ∈ (0, 1]`.
    ConcaveModular {
        weights: BTreeMap<String, f64>,
        exponent: f64,
    },
    /// Explicit value for every subset, keyed by comma-joined ascending ids.
    Table { values: BTreeMap<String, f64> },
}

fn check_weight(what: &str, key: &str, w: f64) -> Result<()> {
    if !w.is_finite() || w < 0.0 {
        return Err(Error::Config(format!(
            "{what} '{key}' has invalid weight {w}"
        )));
    }
    Ok(())
}

pub fn make_modular_oracle<K: Into<String>>(
    weights: impl IntoIterator<Item = (K, f64)>,
) -> Result<ValueOracle> {
    let oracle = ValueOracle::Modular {
        weights: weights.into_iter().map(|(k, w)| (k.into(), w)).collect(),
    };
    oracle.check_parameters()?;
    Ok(oracle)
}

pub fn make_coverage_oracle<K, E, L>(
    element_weights: impl IntoIterator<Item = (E, f64)>,
    covers: impl IntoIterator<Item = (K, L)>,
) -> Result<ValueOracle>
where
    K: Into<String>,
    E: Into<String>,
    L: IntoIterator,
    L::Item: Into<String>,
{
    let oracle = ValueOracle::Coverage {
        elements: element_weights
            .into_iter()
            .map(|(e, w)| (e.into(), w))
            .collect(),
        covers: covers
            .into_iter()
            .map(|(k, l)| (k.into(), l.into_iter().map(Into::into).collect()))
            .collect(),
    };
    oracle.check_parameters()?;
    Ok(oracle)
}

pub fn make_concave_modular_oracle<K: Into<String>>(
    weights: impl IntoIterator<Item = (K, f64)>,
    exponent: f64,
) -> Result<ValueOracle> {
    let oracle = ValueOracle::ConcaveModular {
        weights: weights.into_iter().map(|(k, w)| (k.into(), w)).collect(),
        exponent,
    };
    oracle.check_parameters()?;
    Ok(oracle)
}

/// Builds a lookup-table oracle. Keys may list ids in any order; they are
/// canonicalized to ascending comma-joined form.
pub fn make_table_oracle<K: AsRef<str>>(
    values: impl IntoIterator<Item = (K, f64)>,
) -> Result<ValueOracle> {
    let mut canon = BTreeMap::new();
    for (k, v) in values {
        let key = canonical_key(k.as_ref())?;
        if canon.insert(key.clone(), v).is_some() {
            return Err(Error::Config(format!(
                "duplicate table entry for {{{key}}}"
            )));
        }
    }
    let oracle = ValueOracle::Table { values: canon };
    oracle.check_parameters()?;
    Ok(oracle)
}

/// Canonical table key for a list of ids.
pub fn table_key<S: AsRef<str>>(ids: &[S]) -> String {
    let mut v: Vec<&str> = ids.iter().map(AsRef::as_ref).collect();
    v.sort_unstable();
    v.join(",")
}

fn split_key(key: &str) -> Vec<&str> {
    if key.is_empty() {
        Vec::new()
    } else {
        key.split(',').map(str::trim).collect()
    }
}

fn canonical_key(key: &str) -> Result<String> {
    let ids = split_key(key);
    let set: BTreeSet<&str> = ids.iter().copied().collect();
    if set.len() != ids.len() || set.contains("") {
        return Err(Error::Config(format!("malformed table key '{key}'")));
    }
    Ok(table_key(&ids))
}

impl ValueOracle {
    pub fn kind(&self) -> &'static str {
        match self {
            ValueOracle::Modular { .. } => "modular",
            ValueOracle::Coverage { .. } => "coverage",
            ValueOracle::ConcaveModular { .. } => "concave_modular",
            ValueOracle::Table { .. } => "table",
        }
    }

    /// Checks everything that can be checked without knowing the item list.
    pub(crate) fn check_parameters(&self) -> Result<()> {
        match self {
            ValueOracle::Modular { weights } => {
                for (k, &w) in weights {
                    check_weight("item", k, w)?;
                }
            }
            ValueOracle::Coverage { elements, covers } => {
                for (e, &w) in elements {
                    check_weight("element", e, w)?;
                }
                for (item, list) in covers {
                    for e in list {
                        if !elements.contains_key(e) {
                            return Err(Error::Config(format!(
                                "item '{item}' covers unknown element '{e}'"
                            )));
                        }
                    }
                }
            }
            ValueOracle::ConcaveModular { weights, exponent } => {
                if !(*exponent > 0.0 && *exponent <= 1.0) {
                    return Err(Error::Config(format!("exponent {exponent} outside (0, 1]")));
                }
                for (k, &w) in weights {
                    check_weight("item", k, w)?;
                }
            }
            ValueOracle::Table { values } => {
                for (k, &v) in values {
                    if !v.is_finite() {
                        return Err(Error::Config(format!("table value for {{{k}}} is {v}")));
                    }
                    canonical_key(k)?;
                }
                match values.get("") {
                    Some(0.0) => {}
                    Some(&v) => {
                        return Err(Error::Config(format!(
                            "table value of the empty set is {v}, expected 0"
                        )))
                    }
                    None => {
                        return Err(Error::Config("table has no entry for the empty set".into()))
                    }
                }
            }
        }
        Ok(())
    }

    /// Compiles against a sorted, duplicate-free id list.
    pub(crate) fn compile(&self, ids: &[String]) -> Result<Compiled> {
        self.check_parameters()?;
        let index: HashMap<&str, usize> = ids
            .iter()
            .enumerate()
            .map(|(i, id)| (id.as_str(), i))
            .collect();
        let per_item = |map_keys: &mut dyn Iterator<Item = &String>, what: &str| -> Result<()> {
            let keys: BTreeSet<&str> = map_keys.map(String::as_str).collect();
            for id in ids {
                if !keys.contains(id.as_str()) {
                    return Err(Error::Config(format!("missing {what} for item '{id}'")));
                }
            }
            for k in keys {
                if !index.contains_key(k) {
                    return Err(Error::Config(format!(
                        "{what} given for unknown item '{k}'"
                    )));
                }
            }
            Ok(())
        };
        Ok(match self {
            ValueOracle::Modular { weights } => {
                per_item(&mut weights.keys(), "weight")?;
                Compiled::Modular(ids.iter().map(|id| weights[id]).collect())
            }
            ValueOracle::ConcaveModular { weights, exponent } => {
                per_item(&mut weights.keys(), "weight")?;
                Compiled::Concave {
                    weights: ids.iter().map(|id| weights[id]).collect(),
                    exponent: *exponent,
                }
            }
            ValueOracle::Coverage { elements, covers } => {
                per_item(&mut covers.keys(), "cover list")?;
                let element_index: HashMap<&str, usize> = elements
                    .keys()
                    .enumerate()
                    .map(|(i, e)| (e.as_str(), i))
                    .collect();
                let words = elements.len().div_ceil(64).max(1);
                let covers = ids
                    .iter()
                    .map(|id| {
                        let mut bits = vec![0u64; words];
                        for e in &covers[id] {
                            let j = element_index[e.as_str()];
                            bits[j / 64] |= 1 << (j % 64);
                        }
                        bits
                    })
                    .collect();
                Compiled::Coverage {
                    element_weights: elements.values().copied().collect(),
                    covers,
                }
            }
            ValueOracle::Table { values } => {
                let n = ids.len();
                if n > EXHAUSTIVE_MAX_ITEMS {
                    return Err(Error::TooLarge {
                        n,
                        max: EXHAUSTIVE_MAX_ITEMS,
                    });
                }
                let mut table = vec![f64::NAN; 1 << n];
                for (key, &v) in values {
                    let mut mask = 0usize;
                    for id in split_key(key) {
                        let i = *index.get(id).ok_or_else(|| {
                            Error::Config(format!("table key {{{key}}} names unknown item '{id}'"))
                        })?;
                        mask |= 1 << i;
                    }
                    table[mask] = v;
                }
                if let Some(mask) = table.iter().position(|v| v.is_nan()) {
                    let missing: Vec<&str> = ItemSet::from_bits(mask as u64)
                        .iter()
                        .map(|i| ids[i].as_str())
                        .collect();
                    return Err(Error::Config(format!(
                        "table has no entry for {{{}}}",
                        missing.join(",")
                    )));
                }
                Compiled::Table(table)
            }
        })
    }

    /// The same function restricted to the given ids.
    pub(crate) fn restrict(&self, keep: &BTreeSet<&str>) -> ValueOracle {
        let filter = |m: &BTreeMap<String, f64>| -> BTreeMap<String, f64> {
            m.iter()
                .filter(|(k, _)| keep.contains(k.as_str()))
                .map(|(k, &v)| (k.clone(), v))
                .collect()
        };
        match self {
            ValueOracle::Modular { weights } => ValueOracle::Modular {
                weights: filter(weights),
            },
            ValueOracle::ConcaveModular { weights, exponent } => ValueOracle::ConcaveModular {
                weights: filter(weights),
                exponent: *exponent,
            },
            ValueOracle::Coverage { elements, covers } => ValueOracle::Coverage {
                elements: elements.clone(),
                covers: covers
                    .iter()
                    .filter(|(k, _)| keep.contains(k.as_str()))
                    .map(|(k, v)| (k.clone(), v.clone()))
                    .collect(),
            },
            ValueOracle::Table { values } => ValueOracle::Table {
                values: values
                    .iter()
                    .filter(|(k, _)| split_key(k).iter().all(|id| keep.contains(id)))
                    .map(|(k, &v)| (k.clone(), v))
                    .collect(),
            },
        }
    }
}

/// Index-addressed form of a [`ValueOracle`].
#[derive(Clone, Debug)]
pub(crate) enum Compiled {
    Modular(Vec<f64>),
    Coverage {
        element_weights: Vec<f64>,
        covers: Vec<Vec<u64>>,
    },
    Concave {
        weights: Vec<f64>,
        exponent: f64,
    },
    Table(Vec<f64>),
}

impl Compiled {
    pub(crate) fn evaluate(&self, set: ItemSet) -> f64 {
        match self {
            Compiled::Modular(w) => set.iter().map(|i| w[i]).sum(),
            Compiled::Concave { weights, exponent } => {
                let total: f64 = set.iter().map(|i| weights[i]).sum();
                if *exponent == 1.0 {
                    total
                } else {
                    total.powf(*exponent)
                }
            }
            Compiled::Coverage {
                element_weights,
                covers,
            } => {
                let words = covers.first().map_or(0, Vec::len);
                let mut union = vec![0u64; words];
                for i in set.iter() {
                    for (u, c) in union.iter_mut().zip(&covers[i]) {
                        *u |= c;
                    }
                }
                let mut total = 0.0;
                for (w, &word) in union.iter().enumerate() {
                    let mut bits = word;
                    while bits != 0 {
                        let b = bits.trailing_zeros() as usize;
                        total += element_weights[w * 64 + b];
                        bits &= bits - 1;
                    }
                }
                total
            }
            Compiled::Table(t) => t[set.bits() as usize],
        }
    }
}
