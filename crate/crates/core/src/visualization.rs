//! Static reports: a colored object table (HTML) and a cluster × dimension
//! overview (SVG). Output contains no scripts and no external references,
//! and is byte-identical for equal inputs.
//!
//! Rows of the object table are tinted with the color of their primary
//! cluster, the lowest-index cluster containing the object. Further
//! memberships are listed in a trailing "also in" cell. A value in a
//! relevant dimension of the primary cluster carries a colored bar.

use std::fmt::Write as _;
use std::path::Path;

use thiserror::Error;

use crate::io::{write_file, DataIoError};
use crate::model::{default_dim_names, Clustering, Dataset};

#[derive(Debug, Error)]
pub enum VisError {
    #[error("clustering does not fit the dataset: clustering has n={cn}, d={cd}, data has n={dn}, d={dd}")]
    Mismatch { cn: usize, cd: usize, dn: usize, dd: usize },
    #[error("invalid color '{0}' (expected #rrggbb)")]
    BadColor(String),
    #[error(transparent)]
    Io(#[from] DataIoError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Rgb(pub u8, pub u8, pub u8);

impl Rgb {
    pub fn hex(self) -> String {
        format!("#{:02x}{:02x}{:02x}", self.0, self.1, self.2)
    }

    /// Parses `#rrggbb` or `rrggbb`.
    pub fn parse(s: &str) -> Result<Rgb, VisError> {
        let h = s.trim().trim_start_matches('#');
        let bad = || VisError::BadColor(s.to_string());
        if h.len() != 6 || !h.is_ascii() {
            return Err(bad());
        }
        let c = |i: usize| u8::from_str_radix(&h[i..i + 2], 16).map_err(|_| bad());
        Ok(Rgb(c(0)?, c(2)?, c(4)?))
    }

    /// Mix with white; `keep` is the share of the original color.
    fn tint(self, keep: f64) -> Rgb {
        let mix = |c: u8| (255.0 - (255.0 - c as f64) * keep).round() as u8;
        Rgb(mix(self.0), mix(self.1), mix(self.2))
    }
}

/// Default cycle: cluster `i` gets `PALETTE[i % 12]`.
pub const PALETTE: [Rgb; 12] = [
    Rgb(0x1f, 0x77, 0xb4), // blue
    Rgb(0x2c, 0xa0, 0x2c), // green
    Rgb(0xd6, 0x27, 0x28), // red
    Rgb(0xff, 0x7f, 0x0e), // orange
    Rgb(0x94, 0x67, 0xbd), // purple
    Rgb(0x8c, 0x56, 0x4b), // brown
    Rgb(0xe3, 0x77, 0xc2), // pink
    Rgb(0xbc, 0xbd, 0x22), // olive
    Rgb(0x17, 0xbe, 0xcf), // cyan
    Rgb(0x39, 0x3b, 0x79), // navy
    Rgb(0xad, 0x49, 0x4a), // brick
    Rgb(0x63, 0x79, 0x39), // moss
];

const UNCLUSTERED_GRAY: Rgb = Rgb(0xe0, 0xe0, 0xe0);

/// Cluster index → color, cycling through a palette.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColorAssignment {
    palette: Vec<Rgb>,
}

impl Default for ColorAssignment {
    fn default() -> Self {
        Self {
            palette: PALETTE.to_vec(),
        }
    }
}

impl ColorAssignment {
    /// Uses `palette` instead of the default; an empty list means default.
    pub fn with_palette(palette: Vec<Rgb>) -> Self {
        if palette.is_empty() {
            Self::default()
        } else {
            Self { palette }
        }
    }

    /// Comma-separated `#rrggbb` list.
    pub fn parse(list: &str) -> Result<Self, VisError> {
        let colors = list
            .split(',')
            .filter(|s| !s.trim().is_empty())
            .map(Rgb::parse)
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self::with_palette(colors))
    }

    pub fn color(&self, cluster: usize) -> Rgb {
        self.palette[cluster % self.palette.len()]
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TableOptions {
    /// Append objects that belong to no cluster in a gray section.
    pub show_unclustered: bool,
    pub title: Option<String>,
}

fn escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for ch in s.chars() {
        match ch {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&#39;"),
            c => out.push(c),
        }
    }
    out
}

fn check_fit(data: &Dataset, c: &Clustering) -> Result<(), VisError> {
    if c.n() != data.n() || c.d() != data.d() {
        return Err(VisError::Mismatch {
            cn: c.n(),
            cd: c.d(),
            dn: data.n(),
            dd: data.d(),
        });
    }
    Ok(())
}

/// Memberships per object, in ascending cluster order.
fn memberships(c: &Clustering) -> Vec<Vec<usize>> {
    let mut m = vec![Vec::new(); c.n()];
    for (ci, cl) in c.clusters().iter().enumerate() {
        for &o in cl.objects() {
            m[o].push(ci);
        }
    }
    m
}

const STYLE: &str = "body{font-family:sans-serif;font-size:13px}\
table{border-collapse:collapse}\
th,td{border:1px solid #ccc;padding:2px 6px;text-align:right}\
td.also{text-align:left}\
span.bar{display:inline-block;width:4px;height:12px;margin-left:4px;vertical-align:middle}\
span.swatch{display:inline-block;width:12px;height:12px;margin-right:4px;vertical-align:middle}\
tr.unclustered td{color:#666}";

pub fn render_colored_table(
    data: &Dataset,
    clustering: &Clustering,
    colors: &ColorAssignment,
    options: &TableOptions,
) -> Result<String, VisError> {
    check_fit(data, clustering)?;
    let title = options
        .title
        .clone()
        .or_else(|| data.source_label().map(str::to_string))
        .unwrap_or_else(|| "clustering".to_string());
    let mut h = String::new();
    h.push_str("<!DOCTYPE html>\n<html lang=\"en\">\n<head>\n<meta charset=\"utf-8\">\n");
    let _ = writeln!(h, "<title>{}</title>", escape(&title));
    let _ = writeln!(h, "<style>{STYLE}</style>\n</head>\n<body>");
    let _ = writeln!(h, "<h1>{}</h1>", escape(&title));
    let _ = writeln!(
        h,
        "<p>{} objects, {} dimensions, {} clusters</p>",
        data.n(),
        data.d(),
        clustering.len()
    );

    if clustering.is_empty() {
        h.push_str("<p class=\"notice\">no clusters</p>\n");
    } else {
        h.push_str("<ul class=\"legend\">\n");
        for (ci, cl) in clustering.clusters().iter().enumerate() {
            let dims: Vec<String> = cl.dims().iter().map(|&j| escape(&data.dim_names()[j])).collect();
            let _ = writeln!(
                h,
                "<li data-cluster=\"{ci}\"><span class=\"swatch\" style=\"background:{}\"></span>cluster {ci}: {} objects, dims {{{}}}</li>",
                colors.color(ci).hex(),
                cl.objects().len(),
                dims.join(", ")
            );
        }
        h.push_str("</ul>\n");
    }

    let member = memberships(clustering);
    let mut rows: Vec<(usize, usize)> = member
        .iter()
        .enumerate()
        .filter_map(|(o, m)| m.first().map(|&p| (p, o)))
        .collect();
    rows.sort_unstable();
    let unclustered: Vec<usize> = if options.show_unclustered {
        (0..data.n()).filter(|&o| member[o].is_empty()).collect()
    } else {
        Vec::new()
    };
    if rows.is_empty() && unclustered.is_empty() {
        h.push_str("</body>\n</html>\n");
        return Ok(h);
    }

    h.push_str("<table>\n<thead><tr><th>object</th>");
    for name in data.dim_names() {
        let _ = write!(h, "<th>{}</th>", escape(name));
    }
    h.push_str("<th>also in</th></tr></thead>\n<tbody>\n");
    for &(primary, o) in &rows {
        let cl = &clustering.clusters()[primary];
        let color = colors.color(primary);
        let _ = write!(
            h,
            "<tr data-object=\"{o}\" data-cluster=\"{primary}\" style=\"background:{}\"><td>{o}</td>",
            color.tint(0.3).hex()
        );
        for (j, v) in data.row(o).iter().enumerate() {
            if cl.has_dim(j) {
                let _ = write!(
                    h,
                    "<td data-dim=\"{j}\">{v}<span class=\"bar\" style=\"background:{}\"></span></td>",
                    color.hex()
                );
            } else {
                let _ = write!(h, "<td data-dim=\"{j}\">{v}</td>");
            }
        }
        let also: Vec<String> = member[o][1..].iter().map(usize::to_string).collect();
        let _ = writeln!(h, "<td class=\"also\">{}</td></tr>", also.join(", "));
    }
    h.push_str("</tbody>\n");
    if !unclustered.is_empty() {
        h.push_str("<tbody class=\"unclustered\">\n");
        for &o in &unclustered {
            let _ = write!(
                h,
                "<tr class=\"unclustered\" data-object=\"{o}\" style=\"background:{}\"><td>{o}</td>",
                UNCLUSTERED_GRAY.hex()
            );
            for (j, v) in data.row(o).iter().enumerate() {
                let _ = write!(h, "<td data-dim=\"{j}\">{v}</td>");
            }
            h.push_str("<td class=\"also\"></td></tr>\n");
        }
        h.push_str("</tbody>\n");
    }
    h.push_str("</table>\n</body>\n</html>\n");
    Ok(h)
}

pub fn emit_colored_table(
    data: &Dataset,
    clustering: &Clustering,
    colors: &ColorAssignment,
    options: &TableOptions,
    out: &Path,
) -> Result<(), VisError> {
    let html = render_colored_table(data, clustering, colors, options)?;
    Ok(write_file(out, &html)?)
}

const CELL: usize = 18;

/// SVG grid with one row per cluster and one column per dimension; a cell
/// is filled iff the dimension is relevant. Names default to `dim_<j>` when
/// `dim_names` does not match the dimensionality.
pub fn render_subspace_matrix(clustering: &Clustering, dim_names: &[String]) -> String {
    let names = if dim_names.len() == clustering.d() {
        dim_names.to_vec()
    } else {
        default_dim_names(clustering.d())
    };
    let labels: Vec<String> = clustering
        .clusters()
        .iter()
        .enumerate()
        .map(|(ci, cl)| format!("cluster {ci} ({})", cl.objects().len()))
        .collect();
    let label_w = 8 + 7 * labels.iter().map(String::len).max().unwrap_or(0);
    let header_h = 8 + 6 * names.iter().map(|n| n.chars().count()).max().unwrap_or(0);
    let width = label_w + CELL * names.len() + 8;
    let height = header_h + CELL * clustering.len().max(1) + 8;

    let mut s = String::new();
    let _ = writeln!(
        s,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{width}\" height=\"{height}\" font-family=\"sans-serif\" font-size=\"11\">"
    );
    for (j, name) in names.iter().enumerate() {
        let x = label_w + j * CELL + CELL / 2 + 4;
        let _ = writeln!(
            s,
            "<text x=\"{x}\" y=\"{}\" transform=\"rotate(-60 {x} {})\">{}</text>",
            header_h - 4,
            header_h - 4,
            escape(name)
        );
    }
    if clustering.is_empty() {
        let _ = writeln!(s, "<text x=\"4\" y=\"{}\">no clusters</text>", header_h + 13);
    }
    for (ci, cl) in clustering.clusters().iter().enumerate() {
        let y = header_h + ci * CELL;
        let _ = writeln!(s, "<text x=\"4\" y=\"{}\">{}</text>", y + 13, labels[ci]);
        for j in 0..names.len() {
            let on = cl.has_dim(j);
            let _ = writeln!(
                s,
                "<rect data-cluster=\"{ci}\" data-dim=\"{j}\" class=\"{}\" x=\"{}\" y=\"{y}\" width=\"{CELL}\" height=\"{CELL}\" fill=\"{}\" stroke=\"#999999\"/>",
                if on { "on" } else { "off" },
                label_w + j * CELL,
                if on { "#333333" } else { "#ffffff" }
            );
        }
    }
    s.push_str("</svg>\n");
    s
}

pub fn emit_subspace_matrix(clustering: &Clustering, dim_names: &[String], out: &Path) -> Result<(), VisError> {
    Ok(write_file(out, &render_subspace_matrix(clustering, dim_names))?)
}
