//! Dataset readers (ARFF subset, CSV) and clustering exchange formats.
//!
//! Clusterings are exchanged either as a pair of CSV tables (relevant
//! dimensions as a binary flag row per cluster; object memberships as an
//! n:m relation) or as the compact one-file `.clu` format, one cluster per
//! line: `d` binary flags, the object count, then the sorted object ids.
//!
//! Writers are deterministic: stable sort orders, shortest round-trip float
//! formatting, LF line endings. Files are written to a sibling temporary path
//! and renamed into place.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::model::{default_dim_names, Clustering, Dataset, ModelError, SubspaceCluster};

#[derive(Debug, Error)]
pub enum DataIoError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("malformed ARFF at line {line}: {message}")]
    MalformedArff { line: usize, message: String },
    #[error("unsupported ARFF construct at line {line}: {what}")]
    UnsupportedAttribute { line: usize, what: String },
    #[error("missing value '?' at line {line} for attribute {attribute:?}")]
    MissingValue { line: usize, attribute: String },
    #[error("malformed CSV at line {line}: {message}")]
    MalformedCsv { line: usize, message: String },
    #[error("non-numeric cell {cell:?} at line {line}, column {column}")]
    NonNumericCell { line: usize, column: usize, cell: String },
    #[error("ragged rows: line {line} has {found} fields, expected {expected}")]
    RaggedRows { line: usize, expected: usize, found: usize },
    #[error("format error at line {line}: {message}")]
    Format { line: usize, message: String },
    #[error("line {line}: {kind} id {id} out of range (limit {limit})")]
    IdOutOfRange {
        line: usize,
        kind: &'static str,
        id: usize,
        limit: usize,
    },
    #[error("cluster id {id} appears only in the {present_in} table")]
    DanglingClusterId { id: usize, present_in: &'static str },
    #[error("dimensionality mismatch: file has d={found}, dataset has d={expected}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error(transparent)]
    Model(#[from] ModelError),
}

type Result<T> = std::result::Result<T, DataIoError>;

/// Input formats understood by [`read_dataset`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DataFormat {
    Arff,
    Csv,
}

impl DataFormat {
    pub fn parse(s: &str) -> Option<Self> {
        match s.to_ascii_lowercase().as_str() {
            "arff" => Some(Self::Arff),
            "csv" => Some(Self::Csv),
            _ => None,
        }
    }

    pub fn from_path(path: &Path) -> Option<Self> {
        path.extension().and_then(|e| e.to_str()).and_then(Self::parse)
    }
}

fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|source| DataIoError::Io {
        path: path.to_owned(),
        source,
    })
}

/// Writes `contents` to a sibling temporary file, then renames it over `path`.
pub fn write_file(path: &Path, contents: &str) -> Result<()> {
    let io_err = |source| DataIoError::Io {
        path: path.to_owned(),
        source,
    };
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    let tmp = PathBuf::from(tmp);
    fs::write(&tmp, contents).map_err(io_err)?;
    fs::rename(&tmp, path).map_err(io_err)
}

/// Reads a dataset, choosing the format from `format` or the file extension
/// (CSV files are expected to carry a header row and use commas).
pub fn read_dataset(path: &Path, format: Option<DataFormat>) -> Result<Dataset> {
    match format.or_else(|| DataFormat::from_path(path)) {
        Some(DataFormat::Arff) => read_arff(path),
        Some(DataFormat::Csv) | None => read_csv(path, true, ','),
    }
}

// ---------------------------------------------------------------- ARFF

pub fn read_arff(path: &Path) -> Result<Dataset> {
    parse_arff(&read_text(path)?)
}

enum AttrKind {
    Numeric,
    Class,
}

/// Parses numeric ARFF. A trailing nominal attribute named `class`
/// (case-insensitive) is accepted and dropped; the relation name becomes the
/// dataset's source label.
pub fn parse_arff(text: &str) -> Result<Dataset> {
    let mut relation: Option<String> = None;
    let mut attrs: Vec<(String, AttrKind, usize)> = Vec::new();
    let mut rows: Vec<Vec<f64>> = Vec::new();
    let mut in_data = false;

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('%') {
            continue;
        }
        if !in_data {
            let lower = line.to_ascii_lowercase();
            if lower.starts_with("@relation") {
                let rest = line["@relation".len()..].trim();
                relation = Some(split_name(rest, line_no)?.0);
            } else if lower.starts_with("@attribute") {
                let rest = line["@attribute".len()..].trim();
                let (name, ty) = split_name(rest, line_no)?;
                if attrs.iter().any(|(a, _, _)| *a == name) {
                    return Err(DataIoError::MalformedArff {
                        line: line_no,
                        message: format!("attribute {name:?} declared twice"),
                    });
                }
                if let Some((_, AttrKind::Class, at)) = attrs.last() {
                    return Err(DataIoError::UnsupportedAttribute {
                        line: *at,
                        what: "nominal class attribute must be the last attribute".into(),
                    });
                }
                let ty_lower = ty.trim().to_ascii_lowercase();
                let kind = if matches!(ty_lower.as_str(), "numeric" | "real" | "integer") {
                    AttrKind::Numeric
                } else if ty_lower.starts_with('{') {
                    if !name.eq_ignore_ascii_case("class") {
                        return Err(DataIoError::UnsupportedAttribute {
                            line: line_no,
                            what: format!("nominal attribute {name:?}"),
                        });
                    }
                    AttrKind::Class
                } else if ty_lower.is_empty() {
                    return Err(DataIoError::MalformedArff {
                        line: line_no,
                        message: format!("attribute {name:?} has no type"),
                    });
                } else {
                    return Err(DataIoError::UnsupportedAttribute {
                        line: line_no,
                        what: format!("attribute {name:?} of type {}", ty.trim()),
                    });
                };
                attrs.push((name, kind, line_no));
            } else if lower.starts_with("@data") {
                if attrs.is_empty() {
                    return Err(DataIoError::MalformedArff {
                        line: line_no,
                        message: "@data before any @attribute".into(),
                    });
                }
                in_data = true;
            } else {
                return Err(DataIoError::MalformedArff {
                    line: line_no,
                    message: format!("unexpected header line {line:?}"),
                });
            }
            continue;
        }

        if line.starts_with('{') {
            return Err(DataIoError::UnsupportedAttribute {
                line: line_no,
                what: "sparse data row".into(),
            });
        }
        if line.starts_with('@') {
            return Err(DataIoError::MalformedArff {
                line: line_no,
                message: "header declaration inside @data section".into(),
            });
        }
        let cells: Vec<&str> = line.split(',').map(str::trim).collect();
        if cells.len() != attrs.len() {
            return Err(DataIoError::MalformedArff {
                line: line_no,
                message: format!("{} values, expected {}", cells.len(), attrs.len()),
            });
        }
        let mut row = Vec::with_capacity(attrs.len());
        for (cell, (name, kind, _)) in cells.iter().zip(&attrs) {
            if let AttrKind::Numeric = kind {
                let cell = unquote(cell);
                if cell == "?" {
                    return Err(DataIoError::MissingValue {
                        line: line_no,
                        attribute: name.clone(),
                    });
                }
                let v: f64 = cell.parse().map_err(|_| DataIoError::MalformedArff {
                    line: line_no,
                    message: format!("value {cell:?} of attribute {name:?} is not numeric"),
                })?;
                row.push(v);
            }
        }
        rows.push(row);
    }

    if !in_data {
        return Err(DataIoError::MalformedArff {
            line: text.lines().count(),
            message: "missing @data section".into(),
        });
    }
    let names: Vec<String> = attrs
        .into_iter()
        .filter(|(_, k, _)| matches!(k, AttrKind::Numeric))
        .map(|(n, _, _)| n)
        .collect();
    if names.is_empty() {
        return Err(DataIoError::MalformedArff {
            line: 1,
            message: "no numeric attributes".into(),
        });
    }
    Ok(Dataset::new(rows, names, relation)?)
}

/// Splits a possibly quoted leading name from the rest of the line.
fn split_name(s: &str, line: usize) -> Result<(String, &str)> {
    let malformed = |message: &str| DataIoError::MalformedArff {
        line,
        message: message.into(),
    };
    let first = s.chars().next().ok_or_else(|| malformed("missing name"))?;
    if first == '\'' || first == '"' {
        let end = s[1..]
            .find(first)
            .ok_or_else(|| malformed("unterminated quoted name"))?;
        Ok((s[1..1 + end].to_string(), &s[end + 2..]))
    } else {
        let end = s.find(char::is_whitespace).unwrap_or(s.len());
        Ok((s[..end].to_string(), &s[end..]))
    }
}

fn unquote(s: &str) -> &str {
    let b = s.as_bytes();
    if b.len() >= 2 && (b[0] == b'\'' || b[0] == b'"') && b[b.len() - 1] == b[0] {
        &s[1..s.len() - 1]
    } else {
        s
    }
}

// ---------------------------------------------------------------- CSV

pub fn read_csv(path: &Path, has_header: bool, delimiter: char) -> Result<Dataset> {
    let ds = parse_csv(&read_text(path)?, has_header, delimiter)?;
    Ok(match path.file_stem().and_then(|s| s.to_str()) {
        Some(stem) => ds.with_source_label(stem),
        None => ds,
    })
}

pub fn parse_csv(text: &str, has_header: bool, delimiter: char) -> Result<Dataset> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty());
    let mut names: Option<Vec<String>> = None;
    if has_header {
        let (_, header) = lines.next().ok_or(DataIoError::MalformedCsv {
            line: 1,
            message: "missing header row".into(),
        })?;
        names = Some(header.split(delimiter).map(|s| unquote(s.trim()).to_string()).collect());
    }
    let mut width = names.as_ref().map(Vec::len);
    let mut rows = Vec::new();
    for (line_no, line) in lines {
        let cells: Vec<&str> = line.split(delimiter).map(str::trim).collect();
        let expected = *width.get_or_insert(cells.len());
        if cells.len() != expected {
            return Err(DataIoError::RaggedRows {
                line: line_no,
                expected,
                found: cells.len(),
            });
        }
        let row = cells
            .iter()
            .enumerate()
            .map(|(j, c)| {
                c.parse::<f64>().map_err(|_| DataIoError::NonNumericCell {
                    line: line_no,
                    column: j + 1,
                    cell: (*c).to_string(),
                })
            })
            .collect::<Result<Vec<f64>>>()?;
        rows.push(row);
    }
    let names = match (names, width) {
        (Some(n), _) => n,
        (None, Some(w)) => default_dim_names(w),
        (None, None) => {
            return Err(DataIoError::MalformedCsv {
                line: 1,
                message: "empty file without header: dimensionality unknown".into(),
            })
        }
    };
    Ok(Dataset::new(rows, names, None)?)
}

/// Dataset as comma-separated values with a header of dimension names.
pub fn format_dataset_csv(ds: &Dataset) -> String {
    let mut out = ds.dim_names().join(",");
    out.push('\n');
    for row in ds.rows() {
        push_joined(&mut out, row.iter().map(|v| v.to_string()), ',');
        out.push('\n');
    }
    out
}

pub fn write_dataset_csv(ds: &Dataset, path: &Path) -> Result<()> {
    write_file(path, &format_dataset_csv(ds))
}

fn push_joined<I: Iterator<Item = String>>(out: &mut String, items: I, sep: char) {
    for (i, item) in items.enumerate() {
        if i > 0 {
            out.push(sep);
        }
        out.push_str(&item);
    }
}

// ---------------------------------------------------------------- cluster tables

/// Dimension table: `ClusterID,<dim names>` then one 0/1 flag row per cluster.
/// Cluster ids are the clusters' positions in the list.
pub fn format_dims_table(c: &Clustering, dim_names: Option<&[String]>) -> String {
    let names = match dim_names {
        Some(n) if n.len() == c.d() => n.to_vec(),
        _ => default_dim_names(c.d()),
    };
    let mut out = String::from("ClusterID");
    for name in &names {
        out.push(',');
        out.push_str(name);
    }
    out.push('\n');
    for (id, cl) in c.clusters().iter().enumerate() {
        let _ = write!(out, "{id}");
        for j in 0..c.d() {
            out.push_str(if cl.has_dim(j) { ",1" } else { ",0" });
        }
        out.push('\n');
    }
    out
}

/// Object table: `ObjectID,ClusterID`, one row per membership, sorted by
/// (cluster id, object id).
pub fn format_objects_table(c: &Clustering) -> String {
    let mut out = String::from("ObjectID,ClusterID\n");
    for (id, cl) in c.clusters().iter().enumerate() {
        for &o in cl.objects() {
            let _ = writeln!(out, "{o},{id}");
        }
    }
    out
}

pub fn write_cluster_tables(
    c: &Clustering,
    dim_names: Option<&[String]>,
    out_dims: &Path,
    out_objects: &Path,
) -> Result<()> {
    write_file(out_dims, &format_dims_table(c, dim_names))?;
    write_file(out_objects, &format_objects_table(c))
}

pub fn read_cluster_tables(in_dims: &Path, in_objects: &Path, n: usize, d: usize) -> Result<Clustering> {
    parse_cluster_tables(&read_text(in_dims)?, &read_text(in_objects)?, n, d)
}

fn parse_id(tok: &str, line: usize, what: &str) -> Result<usize> {
    tok.trim().parse().map_err(|_| DataIoError::Format {
        line,
        message: format!("{what} {tok:?} is not a non-negative integer"),
    })
}

pub fn parse_cluster_tables(dims_text: &str, objects_text: &str, n: usize, d: usize) -> Result<Clustering> {
    let mut dims_lines = dims_text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    let (_, header) = dims_lines.next().ok_or(DataIoError::Format {
        line: 1,
        message: "dims table: missing header".into(),
    })?;
    let header: Vec<&str> = header.trim().split(',').collect();
    if header[0].trim() != "ClusterID" {
        return Err(DataIoError::Format {
            line: 1,
            message: "dims table header must start with ClusterID".into(),
        });
    }
    if header.len() - 1 != d {
        return Err(DataIoError::DimensionMismatch {
            expected: d,
            found: header.len() - 1,
        });
    }

    let mut dims: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (idx, line) in dims_lines {
        let line_no = idx + 1;
        let cells: Vec<&str> = line.trim().split(',').collect();
        if cells.len() != d + 1 {
            return Err(DataIoError::Format {
                line: line_no,
                message: format!("{} dimension flags, expected {d}", cells.len() - 1),
            });
        }
        let id = parse_id(cells[0], line_no, "ClusterID")?;
        let mut relevant = Vec::new();
        for (j, flag) in cells[1..].iter().enumerate() {
            match flag.trim() {
                "1" => relevant.push(j),
                "0" => {}
                other => {
                    return Err(DataIoError::Format {
                        line: line_no,
                        message: format!("flag {other:?} is not 0 or 1"),
                    })
                }
            }
        }
        if relevant.is_empty() {
            return Err(DataIoError::Format {
                line: line_no,
                message: format!("cluster {id} has no relevant dimension"),
            });
        }
        if dims.insert(id, relevant).is_some() {
            return Err(DataIoError::Format {
                line: line_no,
                message: format!("duplicate ClusterID {id}"),
            });
        }
    }

    let mut objects: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    let mut obj_lines = objects_text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    match obj_lines.next() {
        Some((_, h)) if h.trim() == "ObjectID,ClusterID" => {}
        _ => {
            return Err(DataIoError::Format {
                line: 1,
                message: "objects table header must be ObjectID,ClusterID".into(),
            })
        }
    }
    for (idx, line) in obj_lines {
        let line_no = idx + 1;
        let cells: Vec<&str> = line.trim().split(',').collect();
        if cells.len() != 2 {
            return Err(DataIoError::Format {
                line: line_no,
                message: format!("{} fields, expected 2", cells.len()),
            });
        }
        let object = parse_id(cells[0], line_no, "ObjectID")?;
        let cluster = parse_id(cells[1], line_no, "ClusterID")?;
        if object >= n {
            return Err(DataIoError::IdOutOfRange {
                line: line_no,
                kind: "object",
                id: object,
                limit: n,
            });
        }
        if !dims.contains_key(&cluster) {
            return Err(DataIoError::DanglingClusterId {
                id: cluster,
                present_in: "objects",
            });
        }
        objects.entry(cluster).or_default().push(object);
    }

    let mut clusters = Vec::with_capacity(dims.len());
    for (id, relevant) in dims {
        let members = objects
            .remove(&id)
            .ok_or(DataIoError::DanglingClusterId { id, present_in: "dims" })?;
        clusters.push(SubspaceCluster::new(members, relevant)?);
    }
    Ok(Clustering::new(clusters, n, d)?)
}

// ---------------------------------------------------------------- .clu

pub fn format_clu(c: &Clustering) -> String {
    let mut out = String::new();
    for cl in c.clusters() {
        let flags = (0..c.d()).map(|j| if cl.has_dim(j) { "1" } else { "0" }.to_string());
        push_joined(&mut out, flags, ' ');
        let _ = write!(out, " {}", cl.objects().len());
        for o in cl.objects() {
            let _ = write!(out, " {o}");
        }
        out.push('\n');
    }
    out
}

pub fn write_clu(c: &Clustering, path: &Path) -> Result<()> {
    write_file(path, &format_clu(c))
}

pub fn read_clu(path: &Path, n: usize, d: usize) -> Result<Clustering> {
    parse_clu(&read_text(path)?, n, d)
}

/// Whether `tokens` encode a cluster line for dimensionality `d`.
fn clu_line_fits(tokens: &[&str], d: usize) -> bool {
    tokens.len() > d
        && tokens[..d].iter().all(|t| *t == "0" || *t == "1")
        && tokens[d]
            .parse::<usize>()
            .is_ok_and(|count| tokens.len() == d + 1 + count)
}

pub fn parse_clu(text: &str, n: usize, d: usize) -> Result<Clustering> {
    let mut clusters = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let line_no = idx + 1;
        let tokens: Vec<&str> = line.split_whitespace().collect();
        if tokens.is_empty() {
            continue;
        }
        if !clu_line_fits(&tokens, d) {
            if let Some(found) = (1..tokens.len()).find(|&k| clu_line_fits(&tokens, k)) {
                return Err(DataIoError::DimensionMismatch { expected: d, found });
            }
            return Err(DataIoError::Format {
                line: line_no,
                message: format!("expected {d} flags, an object count and that many ids"),
            });
        }
        let relevant: Vec<usize> = (0..d).filter(|&j| tokens[j] == "1").collect();
        if relevant.is_empty() {
            return Err(DataIoError::Format {
                line: line_no,
                message: "cluster has no relevant dimension".into(),
            });
        }
        let mut members = Vec::with_capacity(tokens.len() - d - 1);
        for tok in &tokens[d + 1..] {
            let id = parse_id(tok, line_no, "object id")?;
            if id >= n {
                return Err(DataIoError::IdOutOfRange {
                    line: line_no,
                    kind: "object",
                    id,
                    limit: n,
                });
            }
            members.push(id);
        }
        if members.is_empty() {
            return Err(DataIoError::Format {
                line: line_no,
                message: "cluster has no objects".into(),
            });
        }
        clusters.push(SubspaceCluster::new(members, relevant)?);
    }
    Ok(Clustering::new(clusters, n, d)?)
}

/// Dimensionality encoded by the first cluster line of a `.clu` text, if
/// it can be determined unambiguously.
pub fn clu_dimensionality(text: &str) -> Option<usize> {
    let line = text.lines().find(|l| !l.trim().is_empty())?;
    let tokens: Vec<&str> = line.split_whitespace().collect();
    let mut fits = (1..tokens.len()).filter(|&k| clu_line_fits(&tokens, k));
    let first = fits.next()?;
    fits.next().is_none().then_some(first)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cl(o: &[usize], s: &[usize]) -> SubspaceCluster {
        SubspaceCluster::new(o.iter().copied(), s.iter().copied()).unwrap()
    }

    const TINY_ARFF: &str = "% comment\n@RELATION tiny\n\n@ATTRIBUTE a NUMERIC\n@attribute 'b c' real\n@attribute class {x,y}\n@data\n1.0,2.5,x\n-3,4e-1,y\n";

    #[test]
    fn arff_numeric_with_class() {
        let ds = parse_arff(TINY_ARFF).unwrap();
        assert_eq!(ds.n(), 2);
        assert_eq!(ds.dim_names(), &["a".to_string(), "b c".to_string()]);
        assert_eq!(ds.row(1), &[-3.0, 0.4]);
        assert_eq!(ds.source_label(), Some("tiny"));
    }

    #[test]
    fn arff_zero_rows() {
        let ds = parse_arff("@relation e\n@attribute a numeric\n@data\n").unwrap();
        assert_eq!(ds.n(), 0);
        assert_eq!(ds.d(), 1);
    }

    #[test]
    fn arff_errors() {
        let dup = "@relation r\n@attribute a numeric\n@attribute a numeric\n@data\n";
        assert!(matches!(
            parse_arff(dup),
            Err(DataIoError::MalformedArff { line: 3, .. })
        ));
        let string = "@relation r\n@attribute a string\n@data\n";
        assert!(matches!(
            parse_arff(string),
            Err(DataIoError::UnsupportedAttribute { .. })
        ));
        let date = "@relation r\n@attribute a date \"yyyy\"\n@data\n";
        assert!(matches!(
            parse_arff(date),
            Err(DataIoError::UnsupportedAttribute { .. })
        ));
        let sparse = "@relation r\n@attribute a numeric\n@data\n{0 1.0}\n";
        assert!(matches!(
            parse_arff(sparse),
            Err(DataIoError::UnsupportedAttribute { .. })
        ));
        let missing = "@relation r\n@attribute a numeric\n@data\n?\n";
        assert!(matches!(
            parse_arff(missing),
            Err(DataIoError::MissingValue { line: 4, .. })
        ));
        let nominal = "@relation r\n@attribute colour {r,g}\n@attribute a numeric\n@data\n";
        assert!(matches!(
            parse_arff(nominal),
            Err(DataIoError::UnsupportedAttribute { .. })
        ));
        let short = "@relation r\n@attribute a numeric\n@attribute b numeric\n@data\n1\n";
        assert!(matches!(parse_arff(short), Err(DataIoError::MalformedArff { .. })));
        let no_data = "@relation r\n@attribute a numeric\n";
        assert!(matches!(parse_arff(no_data), Err(DataIoError::MalformedArff { .. })));
        let class_not_last = "@relation r\n@attribute class {a}\n@attribute a numeric\n@data\n";
        assert!(matches!(
            parse_arff(class_not_last),
            Err(DataIoError::UnsupportedAttribute { .. })
        ));
    }

    #[test]
    fn csv_examples() {
        let ds = parse_csv("1.0,2.0\n3.0,4.0", false, ',').unwrap();
        assert_eq!((ds.n(), ds.d()), (2, 2));
        assert_eq!(ds.dim_names(), &["dim_0".to_string(), "dim_1".to_string()]);

        let ds = parse_csv("x,y\n0.5,0.25", true, ',').unwrap();
        assert_eq!(ds.n(), 1);
        assert_eq!(ds.dim_names(), &["x".to_string(), "y".to_string()]);

        let ds = parse_csv("1;2\n3;4\n", false, ';').unwrap();
        assert_eq!(ds.row(1), &[3.0, 4.0]);

        assert!(matches!(
            parse_csv("1,2\n3\n", false, ','),
            Err(DataIoError::RaggedRows {
                line: 2,
                expected: 2,
                found: 1
            })
        ));
        assert!(matches!(
            parse_csv("a,b\n1,zz\n", true, ','),
            Err(DataIoError::NonNumericCell { line: 2, column: 2, .. })
        ));
        assert!(matches!(
            parse_csv("", true, ','),
            Err(DataIoError::MalformedCsv { .. })
        ));
    }

    #[test]
    fn dataset_csv_uses_shortest_floats() {
        let ds = Dataset::new(
            vec![vec![0.1, 1.0, 1e-7]],
            vec!["a".into(), "b".into(), "c".into()],
            None,
        )
        .unwrap();
        assert_eq!(format_dataset_csv(&ds), "a,b,c\n0.1,1,0.0000001\n");
        let back = parse_csv(&format_dataset_csv(&ds), true, ',').unwrap();
        assert_eq!(back, ds);
    }

    fn iris_like() -> Clustering {
        // cluster 2 relevant in sepallength, sepalwidth, petalwidth
        Clustering::new(
            vec![
                cl(&[149, 3], &[0, 1, 2, 3]),
                cl(&[17], &[2, 3]),
                cl(&[5, 6], &[0, 1, 3]),
            ],
            150,
            4,
        )
        .unwrap()
    }

    #[test]
    fn dims_table_binary_encoding() {
        let names: Vec<String> = ["sepallength", "sepalwidth", "petallength", "petalwidth"]
            .iter()
            .map(|s| s.to_string())
            .collect();
        let t = format_dims_table(&iris_like(), Some(&names));
        let lines: Vec<&str> = t.lines().collect();
        assert_eq!(lines[0], "ClusterID,sepallength,sepalwidth,petallength,petalwidth");
        assert_eq!(lines[3], "2,1,1,0,1");
        let o = format_objects_table(&iris_like());
        let lines: Vec<&str> = o.lines().collect();
        assert_eq!(lines[0], "ObjectID,ClusterID");
        assert!(lines.contains(&"149,0"));
        assert!(lines.contains(&"17,1"));
        assert_eq!(lines[1..3], ["3,0", "149,0"]);
    }

    #[test]
    fn empty_clustering_tables_are_headers_only() {
        let c = Clustering::empty(4, 2);
        assert_eq!(format_dims_table(&c, None), "ClusterID,dim_0,dim_1\n");
        assert_eq!(format_objects_table(&c), "ObjectID,ClusterID\n");
        assert_eq!(
            parse_cluster_tables("ClusterID,dim_0,dim_1\n", "ObjectID,ClusterID\n", 4, 2).unwrap(),
            c
        );
    }

    #[test]
    fn tables_round_trip_and_errors() {
        let c = iris_like();
        let back = parse_cluster_tables(&format_dims_table(&c, None), &format_objects_table(&c), 150, 4).unwrap();
        assert_eq!(back, c);

        let dims = "ClusterID,a,b\n0,1,0\n";
        assert!(matches!(
            parse_cluster_tables(dims, "ObjectID,ClusterID\n1,7\n", 5, 2),
            Err(DataIoError::DanglingClusterId {
                id: 7,
                present_in: "objects"
            })
        ));
        assert!(matches!(
            parse_cluster_tables(dims, "ObjectID,ClusterID\n", 5, 2),
            Err(DataIoError::DanglingClusterId {
                id: 0,
                present_in: "dims"
            })
        ));
        assert!(matches!(
            parse_cluster_tables("ClusterID,a,b\n0,1\n", "ObjectID,ClusterID\n1,0\n", 5, 2),
            Err(DataIoError::Format { line: 2, .. })
        ));
        assert!(matches!(
            parse_cluster_tables(dims, "ObjectID,ClusterID\n5,0\n", 5, 2),
            Err(DataIoError::IdOutOfRange { id: 5, .. })
        ));
        assert!(matches!(
            parse_cluster_tables(dims, "ObjectID,ClusterID\n1,0\n", 5, 3),
            Err(DataIoError::DimensionMismatch { expected: 3, found: 2 })
        ));
    }

    #[test]
    fn clu_encoding() {
        let c = Clustering::new(vec![cl(&[0, 2], &[1])], 3, 3).unwrap();
        assert_eq!(format_clu(&c), "0 1 0 2 0 2\n");
        assert_eq!(parse_clu("0 1 0 2 0 2\n", 3, 3).unwrap(), c);
        assert_eq!(parse_clu("", 3, 3).unwrap(), Clustering::empty(3, 3));
        assert_eq!(clu_dimensionality("0 1 0 2 0 2\n"), Some(3));
    }

    #[test]
    fn clu_errors() {
        assert!(matches!(
            parse_clu("0 1 0 1 9\n", 5, 3),
            Err(DataIoError::IdOutOfRange { id: 9, .. })
        ));
        assert!(matches!(
            parse_clu("0 0 0 1 1\n", 5, 3),
            Err(DataIoError::Format { .. })
        ));
        assert!(matches!(
            parse_clu("0 1 0 1 x\n", 5, 3),
            Err(DataIoError::Format { .. })
        ));
        // written for d = 4, read with d = 3
        assert!(matches!(
            parse_clu("1 0 0 1 2 0 1\n", 5, 3),
            Err(DataIoError::DimensionMismatch { expected: 3, found: 4 })
        ));
    }

    #[test]
    fn files_round_trip_on_disk() {
        let dir = tempfile::tempdir().unwrap();
        let c = iris_like();
        let p = dir.path().join("c.clu");
        write_clu(&c, &p).unwrap();
        assert_eq!(read_clu(&p, 150, 4).unwrap(), c);
        let (dp, op) = (dir.path().join("d.csv"), dir.path().join("o.csv"));
        write_cluster_tables(&c, None, &dp, &op).unwrap();
        assert_eq!(read_cluster_tables(&dp, &op, 150, 4).unwrap(), c);
        assert!(!dir.path().join("c.clu.tmp").exists());
        assert!(matches!(
            read_clu(&dir.path().join("missing"), 1, 1),
            Err(DataIoError::Io { .. })
        ));
    }
}
