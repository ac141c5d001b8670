use std::collections::BTreeSet;

use subspace_core::generator::{generate, GeneratorSpec};
use subspace_core::io::format_dims_table;
use subspace_core::visualization::{
    emit_colored_table, render_colored_table, render_subspace_matrix, ColorAssignment, TableOptions,
};
use subspace_core::{Clustering, Dataset, SubspaceCluster};

/// `(object, dim)` of every cell carrying a bar marker.
fn bar_cells(html: &str) -> BTreeSet<(usize, usize)> {
    let mut out = BTreeSet::new();
    for row in html.split("<tr ").skip(1) {
        let Some(obj) = attr(row, "data-object") else { continue };
        for cell in row.split("<td ").skip(1) {
            if cell.contains("class=\"bar\"") {
                out.insert((obj, attr(cell, "data-dim").unwrap()));
            }
        }
    }
    out
}

fn attr(s: &str, name: &str) -> Option<usize> {
    let start = s.find(&format!("{name}=\""))? + name.len() + 2;
    s[start..].split('"').next()?.parse().ok()
}

/// Rows of the three-cluster scenario: an all-dims cluster, a cluster
/// relevant in the 2nd and 4th attribute with a spread first attribute, and
/// a third cluster.
fn three_clusters() -> (Dataset, Clustering) {
    let rows = vec![
        vec![5.0, 3.4, 1.5, 0.2],
        vec![5.1, 3.5, 1.4, 0.2],
        vec![4.9, 3.1, 1.5, 0.1],
        vec![5.0, 2.0, 3.5, 1.0],
        vec![5.7, 2.2, 4.5, 1.1],
        vec![6.3, 2.4, 4.9, 1.0],
        vec![6.0, 2.3, 4.0, 1.1],
        vec![7.7, 2.8, 6.7, 2.0],
        vec![7.2, 3.0, 5.8, 1.6],
    ];
    let names = ["sepallength", "sepalwidth", "petallength", "petalwidth"]
        .map(String::from)
        .to_vec();
    let data = Dataset::new(rows, names, Some("three-clusters".into())).unwrap();
    let c = Clustering::new(
        vec![
            SubspaceCluster::new([0, 1, 2], [0, 1, 2, 3]).unwrap(),
            SubspaceCluster::new([3, 4, 5, 6], [1, 3]).unwrap(),
            SubspaceCluster::new([7, 8], [0, 2]).unwrap(),
        ],
        9,
        4,
    )
    .unwrap();
    (data, c)
}

#[test]
fn green_cluster_marks_dims_two_and_four() {
    let (data, c) = three_clusters();
    let html = render_colored_table(&data, &c, &ColorAssignment::default(), &TableOptions::default()).unwrap();
    let bars = bar_cells(&html);
    let green: BTreeSet<usize> = bars
        .iter()
        .filter(|(o, _)| (3..=6).contains(o))
        .map(|&(_, j)| j)
        .collect();
    assert_eq!(green, BTreeSet::from([1, 3]));
    for o in 0..3 {
        assert_eq!(bars.iter().filter(|(x, _)| *x == o).count(), 4);
    }
}

#[test]
fn bars_match_dims_table_flags() {
    let g = generate(&GeneratorSpec::new(80, 10, 6, 3, 2, 4, 12)).unwrap();
    let mut clusters = g.truth.clusters().to_vec();
    // an overlapping extra cluster: its rows keep their primary cluster's marks
    clusters.push(SubspaceCluster::new(0..90, [0]).unwrap());
    let c = Clustering::new(clusters, 90, 6).unwrap();
    let html = render_colored_table(&g.data, &c, &ColorAssignment::default(), &TableOptions::default()).unwrap();
    let table = format_dims_table(&c, None);
    let flags: Vec<Vec<bool>> = table
        .lines()
        .skip(1)
        .map(|l| l.split(',').skip(1).map(|f| f == "1").collect())
        .collect();
    for (o, j) in bar_cells(&html) {
        let primary = c.clusters().iter().position(|cl| cl.has_object(o)).unwrap();
        assert!(flags[primary][j], "bar at ({o}, {j}) without flag");
    }
    let tints: BTreeSet<&str> = html
        .split("<tr data-object")
        .skip(1)
        .map(|r| r.split("background:").nth(1).unwrap().split('"').next().unwrap())
        .collect();
    let primaries: BTreeSet<usize> = (0..90)
        .filter_map(|o| c.clusters().iter().position(|cl| cl.has_object(o)))
        .collect();
    assert_eq!(tints.len(), primaries.len());
}

#[test]
fn matrix_equals_dims_table() {
    let (data, c) = three_clusters();
    let svg = render_subspace_matrix(&c, data.dim_names());
    let table = format_dims_table(&c, Some(data.dim_names()));
    for (ci, line) in table.lines().skip(1).enumerate() {
        for (j, flag) in line.split(',').skip(1).enumerate() {
            let cell = format!(
                "data-cluster=\"{ci}\" data-dim=\"{j}\" class=\"{}\"",
                if flag == "1" { "on" } else { "off" }
            );
            assert!(svg.contains(&cell), "{cell}");
        }
    }
    assert!(svg.contains("cluster 1 (4)"));
}

#[test]
fn iris_style_matrix_row() {
    let names = ["sepallength", "sepalwidth", "petallength", "petalwidth"].map(String::from);
    let c = Clustering::new(
        vec![
            SubspaceCluster::new(0..50, [2, 3]).unwrap(),
            SubspaceCluster::new(50..100, [2]).unwrap(),
            SubspaceCluster::new(100..150, [0, 1, 3]).unwrap(),
        ],
        150,
        4,
    )
    .unwrap();
    let svg = render_subspace_matrix(&c, &names);
    let on: Vec<usize> = (0..4)
        .filter(|j| svg.contains(&format!("data-cluster=\"2\" data-dim=\"{j}\" class=\"on\"")))
        .collect();
    assert_eq!(on, vec![0, 1, 3]);
    assert_eq!(svg.matches("<rect").count(), 12);
}

#[test]
fn output_is_deterministic_bytes() {
    let (data, c) = three_clusters();
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a.html"), dir.path().join("b.html"));
    let opts = TableOptions {
        show_unclustered: true,
        title: None,
    };
    emit_colored_table(&data, &c, &ColorAssignment::default(), &opts, &a).unwrap();
    emit_colored_table(&data, &c, &ColorAssignment::default(), &opts, &b).unwrap();
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    let html = std::fs::read_to_string(&a).unwrap();
    assert!(!html.contains("<script"));
    assert!(!html.contains("http://") && !html.contains("https://"));
}
