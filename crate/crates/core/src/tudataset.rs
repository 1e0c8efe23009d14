//! Reader for the TUDataset text format.
//!
//! A dataset `DS` is a directory with
//!
//! * `DS_A.txt` - one `row, col` pair of 1-based global node ids per line,
//! * `DS_graph_indicator.txt` - the 1-based graph id of every node,
//! * `DS_node_labels.txt` (optional) - one integer label per node,
//! * `DS_graph_labels.txt` (optional) - one integer class per graph.
//!
//! Edge labels and attributes are ignored.

use std::fs;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::graph::{GraphCollection, LabelDictionary, LabelId, LabeledGraph};

fn read_lines(path: &Path) -> Result<Vec<(usize, String)>> {
    let text = fs::read_to_string(path)?;
    Ok(text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim().to_string()))
        .filter(|(_, l)| !l.is_empty())
        .collect())
}

fn parse_int(path: &Path, line: usize, field: &str) -> Result<i64> {
    field.trim().parse::<i64>().map_err(|e| Error::Parse {
        file: path.to_path_buf(),
        line,
        msg: format!("invalid integer {field:?}: {e}"),
    })
}

fn parse_column(path: &Path) -> Result<Vec<(usize, i64)>> {
    read_lines(path)?
        .into_iter()
        .map(|(line, text)| parse_int(path, line, &text).map(|v| (line, v)))
        .collect()
}

/// Loads dataset `name` from `directory`.
pub fn parse_tudataset(directory: impl AsRef<Path>, name: &str) -> Result<GraphCollection> {
    let dir = directory.as_ref();
    let file = |suffix: &str| -> PathBuf { dir.join(format!("{name}_{suffix}.txt")) };

    let indicator_path = file("graph_indicator");
    let indicator = parse_column(&indicator_path)?;
    let node_total = indicator.len();

    // graph id (0-based) and local index for every global node
    let mut node_graph = Vec::with_capacity(node_total);
    let mut node_local = Vec::with_capacity(node_total);
    let mut graph_sizes: Vec<usize> = Vec::new();
    for &(line, gid) in &indicator {
        if gid < 1 {
            return Err(Error::Parse {
                file: indicator_path.clone(),
                line,
                msg: format!("graph id {gid} is not positive"),
            });
        }
        let g = (gid - 1) as usize;
        if g >= graph_sizes.len() {
            graph_sizes.resize(g + 1, 0);
        }
        node_graph.push(g);
        node_local.push(graph_sizes[g]);
        graph_sizes[g] += 1;
    }

    let mut dictionary = LabelDictionary::new();
    let labels_path = file("node_labels");
    let node_labels: Vec<LabelId> = if labels_path.exists() {
        let raw = parse_column(&labels_path)?;
        if raw.len() != node_total {
            return Err(Error::Structure(format!(
                "{} has {} entries but there are {node_total} nodes",
                labels_path.display(),
                raw.len()
            )));
        }
        // intern in ascending raw order so ids do not depend on node order
        let mut distinct: Vec<i64> = raw.iter().map(|&(_, v)| v).collect();
        distinct.sort_unstable();
        distinct.dedup();
        for v in distinct {
            dictionary.intern(v);
        }
        raw.iter()
            .map(|&(_, v)| dictionary.get(v).expect("interned above"))
            .collect()
    } else {
        vec![dictionary.intern(0); node_total]
    };

    let mut per_graph_labels: Vec<Vec<LabelId>> =
        graph_sizes.iter().map(|&n| Vec::with_capacity(n)).collect();
    for (i, &g) in node_graph.iter().enumerate() {
        per_graph_labels[g].push(node_labels[i]);
    }

    let edges_path = file("A");
    let mut per_graph_edges: Vec<Vec<(usize, usize)>> = vec![Vec::new(); graph_sizes.len()];
    for (line, text) in read_lines(&edges_path)? {
        let mut parts = text.split(',');
        let (Some(a), Some(b), None) = (parts.next(), parts.next(), parts.next()) else {
            return Err(Error::Parse {
                file: edges_path.clone(),
                line,
                msg: format!("expected `row, col`, got {text:?}"),
            });
        };
        let a = parse_int(&edges_path, line, a)?;
        let b = parse_int(&edges_path, line, b)?;
        let in_range = |x: i64| x >= 1 && (x as usize) <= node_total;
        if !in_range(a) || !in_range(b) {
            return Err(Error::Structure(format!(
                "{}:{line}: node id out of range 1..={node_total}",
                edges_path.display()
            )));
        }
        let (a, b) = ((a - 1) as usize, (b - 1) as usize);
        if node_graph[a] != node_graph[b] {
            return Err(Error::Structure(format!(
                "{}:{line}: edge joins graph {} and graph {}",
                edges_path.display(),
                node_graph[a] + 1,
                node_graph[b] + 1
            )));
        }
        per_graph_edges[node_graph[a]].push((node_local[a], node_local[b]));
    }

    let graphs = per_graph_labels
        .into_iter()
        .zip(per_graph_edges)
        .map(|(labels, edges)| LabeledGraph::new(labels, edges))
        .collect::<Result<Vec<_>>>()?;

    let mut collection = GraphCollection {
        graphs,
        class_labels: None,
        names: None,
        dictionary,
    };

    let classes_path = file("graph_labels");
    if classes_path.exists() {
        let classes: Vec<i64> = parse_column(&classes_path)?
            .into_iter()
            .map(|(_, v)| v)
            .collect();
        collection = collection.with_class_labels(classes)?;
    }
    Ok(collection)
}
