//! Labelled multi-channel graph datasets and node partitions.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graphon::{DecoratedGraphon, WeightedGraph};
use crate::io::{self, GraphFile};

/// One subject: an id, a binary label and one graph per channel.
#[derive(Debug, Clone, PartialEq)]
pub struct Item {
    pub id: String,
    pub label: u8,
    pub channels: BTreeMap<String, WeightedGraph>,
}

/// Items sharing a channel set; graphs of one channel share a node count.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    items: Vec<Item>,
}

impl Dataset {
    pub fn new(items: Vec<Item>) -> Result<Self> {
        let first = items
            .first()
            .ok_or_else(|| Error::Domain("dataset has no items".into()))?;
        let names: Vec<&String> = first.channels.keys().collect();
        if names.is_empty() {
            return Err(Error::Domain(format!("item '{}' has no channels", first.id)));
        }
        let sizes: Vec<usize> = first.channels.values().map(|g| g.nodes()).collect();
        for it in &items {
            if it.label > 1 {
                return Err(Error::Invariant {
                    context: format!("item '{}'", it.id),
                    detail: format!("label {} is not 0 or 1", it.label),
                });
            }
            let these: Vec<&String> = it.channels.keys().collect();
            if these != names {
                return Err(Error::Invariant {
                    context: format!("item '{}'", it.id),
                    detail: format!("channels {these:?} differ from {names:?}"),
                });
            }
            for ((name, g), &k) in it.channels.iter().zip(&sizes) {
                if g.nodes() != k {
                    return Err(Error::Shape(format!(
                        "item '{}', channel '{name}' has {} nodes, expected {k}",
                        it.id,
                        g.nodes()
                    )));
                }
            }
        }
        if !(items.iter().any(|i| i.label == 0) && items.iter().any(|i| i.label == 1)) {
            return Err(Error::Degenerate("dataset must contain both labels 0 and 1".into()));
        }
        Ok(Dataset { items })
    }

    pub fn items(&self) -> &[Item] {
        &self.items
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn labels(&self) -> Vec<u8> {
        self.items.iter().map(|i| i.label).collect()
    }

    pub fn channel_names(&self) -> Vec<&str> {
        self.items[0].channels.keys().map(String::as_str).collect()
    }

    /// Graphs of one channel, in item order.
    pub fn channel(&self, name: &str) -> Result<Vec<&WeightedGraph>> {
        self.items
            .iter()
            .map(|it| {
                it.channels
                    .get(name)
                    .ok_or_else(|| Error::Domain(format!("unknown channel '{name}'")))
            })
            .collect()
    }

    /// Same graphs with new labels.
    pub fn relabeled(&self, labels: &[u8]) -> Result<Self> {
        if labels.len() != self.items.len() {
            return Err(Error::Shape(format!(
                "{} labels for {} items",
                labels.len(),
                self.items.len()
            )));
        }
        let items = self
            .items
            .iter()
            .zip(labels)
            .map(|(it, &label)| Item {
                label,
                ..it.clone()
            })
            .collect();
        Dataset::new(items)
    }

    /// Applies `f` to every graph of every item.
    pub fn map_graphs<F>(&self, f: F) -> Result<Self>
    where
        F: Fn(&str, &WeightedGraph) -> Result<WeightedGraph>,
    {
        let items = self
            .items
            .iter()
            .map(|it| {
                let channels = it
                    .channels
                    .iter()
                    .map(|(name, g)| Ok((name.clone(), f(name, g)?)))
                    .collect::<Result<_>>()?;
                Ok(Item {
                    id: it.id.clone(),
                    label: it.label,
                    channels,
                })
            })
            .collect::<Result<_>>()?;
        Dataset::new(items)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ItemFile {
    id: String,
    label: u8,
    channels: BTreeMap<String, GraphFile>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct DatasetFile {
    items: Vec<ItemFile>,
}

#[derive(Serialize)]
struct ItemOut<'a> {
    id: &'a str,
    label: u8,
    channels: &'a BTreeMap<String, WeightedGraph>,
}

#[derive(Serialize)]
struct DatasetOut<'a> {
    items: Vec<ItemOut<'a>>,
}

/// Parses dataset JSON; validation failures name the item and channel.
pub fn dataset_from_json(text: &str, context: &str) -> Result<Dataset> {
    let file: DatasetFile = io::parse_json(text, context)?;
    let items = file
        .items
        .into_iter()
        .map(|it| {
            let channels = it
                .channels
                .into_iter()
                .map(|(name, g)| {
                    let graph = WeightedGraph::try_from(g).map_err(|e| {
                        e.in_context(&format!("{context}: item '{}', channel '{name}'", it.id))
                    })?;
                    Ok((name, graph))
                })
                .collect::<Result<_>>()?;
            Ok(Item {
                id: it.id,
                label: it.label,
                channels,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Dataset::new(items)
}

/// `n_per_class` graphs from each of `d0` (label 0) and `d1` (label 1) in a
/// single channel named `channel`. Class `c` draws from sub-stream `(seed, c)`.
pub fn synthetic_two_class(
    d0: &DecoratedGraphon,
    d1: &DecoratedGraphon,
    k: usize,
    n_per_class: usize,
    channel: &str,
    seed: u64,
) -> Result<Dataset> {
    let mut items = Vec::with_capacity(2 * n_per_class);
    for (label, d) in [(0u8, d0), (1u8, d1)] {
        let graphs = d.sample_graphs(k, n_per_class, crate::rng::derive_seed(seed, label as u64))?;
        items.extend(graphs.into_iter().enumerate().map(|(i, g)| Item {
            id: format!("c{label}_{i:03}"),
            label,
            channels: [(channel.to_string(), g)].into_iter().collect(),
        }));
    }
    Dataset::new(items)
}

pub fn load_dataset(path: &Path) -> Result<Dataset> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io {
        path: path.display().to_string(),
        source: e,
    })?;
    dataset_from_json(&text, &path.display().to_string())
}

pub fn save_dataset(ds: &Dataset, path: &Path) -> Result<()> {
    let out = DatasetOut {
        items: ds
            .items
            .iter()
            .map(|it| ItemOut {
                id: &it.id,
                label: it.label,
                channels: &it.channels,
            })
            .collect(),
    };
    io::write_json(path, &out)
}

/// Assignment of each of `k` nodes to one of `g` groups, every group used.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "PartitionFile", into = "PartitionFile")]
pub struct Partition {
    groups: Vec<usize>,
    count: usize,
}

#[derive(Serialize, Deserialize)]
struct PartitionFile {
    groups: Vec<usize>,
}

impl TryFrom<PartitionFile> for Partition {
    type Error = Error;

    fn try_from(f: PartitionFile) -> Result<Self> {
        Partition::new(f.groups)
    }
}

impl From<Partition> for PartitionFile {
    fn from(p: Partition) -> Self {
        PartitionFile { groups: p.groups }
    }
}

impl Partition {
    pub fn new(groups: Vec<usize>) -> Result<Self> {
        let count = groups.iter().max().map_or(0, |&g| g + 1);
        if count == 0 {
            return Err(Error::Domain("partition covers no nodes".into()));
        }
        let mut used = vec![false; count];
        groups.iter().for_each(|&g| used[g] = true);
        if let Some(g) = used.iter().position(|&u| !u) {
            return Err(Error::Domain(format!("group {g} of 0..{count} has no nodes")));
        }
        Ok(Partition { groups, count })
    }

    /// Singleton groups.
    pub fn identity(k: usize) -> Result<Self> {
        Partition::new((0..k).collect())
    }

    pub fn nodes(&self) -> usize {
        self.groups.len()
    }

    pub fn group_count(&self) -> usize {
        self.count
    }

    pub fn group_of(&self, node: usize) -> usize {
        self.groups[node]
    }

    /// `other ∘ self`: node `i` goes to `other.group_of(self.group_of(i))`.
    pub fn then(&self, other: &Partition) -> Result<Partition> {
        if other.nodes() != self.count {
            return Err(Error::Shape(format!(
                "outer partition covers {} nodes, inner has {} groups",
                other.nodes(),
                self.count
            )));
        }
        Partition::new(self.groups.iter().map(|&g| other.groups[g]).collect())
    }
}

pub fn load_partition(path: &Path) -> Result<Partition> {
    io::read_json(path)
}

/// Averages weights between groups: the coarse weight of `I ≠ J` is the
/// mean of `w_ij` over `i ∈ I, j ∈ J`. Within-group averages are dropped so
/// the coarse graph keeps a zero diagonal.
pub fn coarsen(g: &WeightedGraph, p: &Partition) -> Result<WeightedGraph> {
    let k = g.nodes();
    if p.nodes() != k {
        return Err(Error::Domain(format!(
            "partition assigns {} nodes, graph has {k}",
            p.nodes()
        )));
    }
    let c = p.group_count();
    let mut sums = vec![0.0; c * c];
    let mut sizes = vec![0usize; c];
    for i in 0..k {
        let gi = p.group_of(i);
        sizes[gi] += 1;
        for (j, &w) in g.row(i).iter().enumerate() {
            sums[gi * c + p.group_of(j)] += w;
        }
    }
    let mut out = vec![0.0; c * c];
    for a in 0..c {
        for b in 0..c {
            if a != b {
                out[a * c + b] = (sums[a * c + b] / (sizes[a] * sizes[b]) as f64).clamp(0.0, 1.0);
            }
        }
    }
    // sums[a][b] and sums[b][a] hold the same terms, possibly added in another order
    for a in 0..c {
        for b in 0..a {
            out[a * c + b] = out[b * c + a];
        }
    }
    WeightedGraph::from_flat(c, out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn item(id: &str, label: u8, g: WeightedGraph) -> Item {
        Item {
            id: id.into(),
            label,
            channels: [("adj".to_string(), g)].into_iter().collect(),
        }
    }

    fn small() -> Dataset {
        Dataset::new(vec![
            item("a", 0, WeightedGraph::complete(3, 0.5).unwrap()),
            item("b", 1, WeightedGraph::from_upper(3, &[0.1, 0.2, 0.3]).unwrap()),
        ])
        .unwrap()
    }

    #[test]
    fn save_then_load() {
        let dir = std::env::temp_dir().join(format!("gs-dataset-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("ds.json");
        let ds = small();
        save_dataset(&ds, &path).unwrap();
        assert_eq!(load_dataset(&path).unwrap(), ds);
        std::fs::remove_dir_all(&dir).unwrap();
    }

    #[test]
    fn validation_names_the_graph() {
        let asym = r#"{"items":[
            {"id":"s1","label":0,"channels":{"fa":{"k":2,"weights_upper":[0.5]}}},
            {"id":"s2","label":1,"channels":{"fa":{"k":2,"weights":[[0,0.5],[0.3,0]]}}}]}"#;
        let e = dataset_from_json(asym, "ds.json").unwrap_err();
        assert!(matches!(e, Error::Invariant { .. }));
        let msg = e.to_string();
        assert!(msg.contains("s2") && msg.contains("fa"), "{msg}");

        let high = r#"{"items":[
            {"id":"s1","label":0,"channels":{"fa":{"k":2,"weights_upper":[1.5]}}},
            {"id":"s2","label":1,"channels":{"fa":{"k":2,"weights_upper":[0.5]}}}]}"#;
        let e = dataset_from_json(high, "ds.json").unwrap_err();
        assert!(matches!(e, Error::Range { .. }));
        assert!(e.to_string().contains("s1"));

        let broken = "{\"items\": [\n  {\"id\": \"s1\", \"label\": \"zero\"}\n]}";
        let e = dataset_from_json(broken, "ds.json").unwrap_err();
        assert!(e.to_string().contains("line 2"), "{e}");
    }

    #[test]
    fn dataset_invariants() {
        let g = WeightedGraph::complete(3, 0.5).unwrap();
        assert!(matches!(
            Dataset::new(vec![item("a", 0, g.clone()), item("b", 0, g.clone())]),
            Err(Error::Degenerate(_))
        ));
        assert!(Dataset::new(vec![item("a", 0, g.clone()), item("b", 2, g.clone())]).is_err());
        let other = WeightedGraph::complete(4, 0.5).unwrap();
        assert!(matches!(
            Dataset::new(vec![item("a", 0, g), item("b", 1, other)]),
            Err(Error::Shape(_))
        ));
    }

    #[test]
    fn coarsen_examples() {
        let ones = WeightedGraph::complete(5, 1.0).unwrap();
        let p = Partition::new(vec![0, 1, 0, 1, 1]).unwrap();
        let c = coarsen(&ones, &p).unwrap();
        assert_eq!(c.nodes(), 2);
        assert_eq!(c.weight(0, 1), 1.0);
        assert_eq!(c.weight(0, 0), 0.0);

        let mut g = WeightedGraph::empty(4);
        for (i, j, w) in [(0, 2, 0.2), (0, 3, 0.4), (1, 2, 0.6), (1, 3, 0.8), (0, 1, 0.9)] {
            g.set_weight(i, j, w).unwrap();
        }
        let c = coarsen(&g, &Partition::new(vec![0, 0, 1, 1]).unwrap()).unwrap();
        assert!((c.weight(0, 1) - 0.5).abs() < 1e-15);

        let same = coarsen(&g, &Partition::identity(4).unwrap()).unwrap();
        assert_eq!(same, g);
        assert!(matches!(
            coarsen(&g, &Partition::new(vec![0, 0, 1]).unwrap()),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn partition_validation() {
        assert!(Partition::new(vec![0, 2]).is_err());
        assert!(Partition::new(vec![]).is_err());
        let p: Partition = serde_json::from_str(r#"{"groups":[1,0,1]}"#).unwrap();
        assert_eq!(p.group_count(), 2);
        assert!(serde_json::from_str::<Partition>(r#"{"groups":[1,1]}"#).is_err());
    }
}
