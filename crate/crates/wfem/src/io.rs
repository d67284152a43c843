//! Plain-text mesh files, MatrixMarket matrices and the CSV tables of a study.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use serde::Serialize;
use wfem_core::benchmark::StudyReport;
use wfem_core::geometry::Point2;
use wfem_core::mesh::FineMesh;
use wfem_core::picard::PicardLogEntry;
use wfem_core::sparse::CsrMatrix;

/// Vertices and element triples as read back from a mesh file.
#[derive(Debug, Clone, PartialEq)]
pub struct MeshText {
    pub vertices: Vec<Point2>,
    pub elements: Vec<[usize; 3]>,
}

impl From<&FineMesh> for MeshText {
    fn from(m: &FineMesh) -> Self {
        MeshText { vertices: m.vertices.clone(), elements: m.elements.clone() }
    }
}

pub fn format_mesh(mesh: &MeshText) -> String {
    let mut s = format!("vertices {} elements {}\n", mesh.vertices.len(), mesh.elements.len());
    for p in &mesh.vertices {
        // `{:e}` round-trips f64 exactly.
        let _ = writeln!(s, "{:e} {:e}", p.x, p.y);
    }
    for t in &mesh.elements {
        let _ = writeln!(s, "{} {} {}", t[0], t[1], t[2]);
    }
    s
}

pub fn parse_mesh(text: &str) -> Result<MeshText> {
    let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
    let head: Vec<&str> = lines.next().ok_or_else(|| anyhow!("empty mesh file"))?.split_whitespace().collect();
    let (nv, ne) = match head.as_slice() {
        ["vertices", n, "elements", m] => (n.parse::<usize>()?, m.parse::<usize>()?),
        _ => bail!("bad mesh header {:?}", head.join(" ")),
    };
    let mut vertices = Vec::with_capacity(nv);
    for i in 0..nv {
        let l = lines.next().ok_or_else(|| anyhow!("missing vertex line {i}"))?;
        let v: Vec<f64> = l.split_whitespace().map(str::parse).collect::<Result<_, _>>().with_context(|| format!("vertex line {i}"))?;
        let [x, y] = v[..] else { bail!("vertex line {i} needs two numbers") };
        vertices.push(Point2::new(x, y));
    }
    let mut elements = Vec::with_capacity(ne);
    for i in 0..ne {
        let l = lines.next().ok_or_else(|| anyhow!("missing element line {i}"))?;
        let v: Vec<usize> = l.split_whitespace().map(str::parse).collect::<Result<_, _>>().with_context(|| format!("element line {i}"))?;
        let [a, b, c] = v[..] else { bail!("element line {i} needs three indices") };
        if a.max(b).max(c) >= nv {
            bail!("element {i} references vertex beyond {nv}");
        }
        elements.push([a, b, c]);
    }
    if lines.next().is_some() {
        bail!("trailing data after {ne} elements");
    }
    Ok(MeshText { vertices, elements })
}

pub fn write_mesh(path: &Path, mesh: &MeshText) -> Result<()> {
    fs::write(path, format_mesh(mesh)).with_context(|| format!("writing {}", path.display()))
}

pub fn read_mesh(path: &Path) -> Result<MeshText> {
    parse_mesh(&fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?)
}

/// MatrixMarket `coordinate real general`, one-based indices.
pub fn format_matrix_market(a: &CsrMatrix) -> String {
    let mut s = String::from("%%MatrixMarket matrix coordinate real general\n");
    let _ = writeln!(s, "{} {} {}", a.nrows, a.ncols, a.nnz());
    for i in 0..a.nrows {
        for k in a.row_ptr[i]..a.row_ptr[i + 1] {
            let _ = writeln!(s, "{} {} {:e}", i + 1, a.col_idx[k] + 1, a.values[k]);
        }
    }
    s
}

pub fn parse_matrix_market(text: &str) -> Result<CsrMatrix> {
    let mut lines = text.lines();
    let banner = lines.next().unwrap_or_default().to_ascii_lowercase();
    if !banner.starts_with("%%matrixmarket matrix coordinate real general") {
        bail!("unsupported MatrixMarket banner {banner:?}");
    }
    let mut lines = lines.map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('%'));
    let size: Vec<usize> = lines
        .next()
        .ok_or_else(|| anyhow!("missing size line"))?
        .split_whitespace()
        .map(str::parse)
        .collect::<Result<_, _>>()?;
    let [nrows, ncols, nnz] = size[..] else { bail!("size line needs three integers") };
    let mut trip = Vec::with_capacity(nnz);
    for l in lines {
        let f: Vec<&str> = l.split_whitespace().collect();
        let [i, j, v] = f[..] else { bail!("bad entry line {l:?}") };
        let (i, j): (usize, usize) = (i.parse()?, j.parse()?);
        if i == 0 || j == 0 || i > nrows || j > ncols {
            bail!("entry ({i}, {j}) outside {nrows}x{ncols}");
        }
        trip.push((i - 1, j - 1, v.parse::<f64>()?));
    }
    if trip.len() != nnz {
        bail!("expected {nnz} entries, found {}", trip.len());
    }
    Ok(CsrMatrix::from_triplets(nrows, ncols, &trip))
}

pub fn write_matrix_market(path: &Path, a: &CsrMatrix) -> Result<()> {
    fs::write(path, format_matrix_market(a)).with_context(|| format!("writing {}", path.display()))
}

pub fn read_matrix_market(path: &Path) -> Result<CsrMatrix> {
    parse_matrix_market(&fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?)
}

#[derive(Serialize)]
struct ErrorRow<'a> {
    h: f64,
    velocity_dofs: usize,
    pressure_dofs: usize,
    error: Option<f64>,
    picard_converged: bool,
    failure: &'a str,
}

#[derive(Serialize)]
struct RateRow {
    h_coarse: f64,
    h_fine: f64,
    rate: Option<f64>,
}

#[derive(Serialize)]
struct FractionRow {
    h: f64,
    threshold: f64,
    fraction: f64,
}

#[derive(Serialize)]
struct PicardRow {
    h: f64,
    k: usize,
    #[serde(rename = "L_k")]
    l_k: usize,
    relative_update: f64,
    uzawa_residual: f64,
    uzawa_converged: bool,
}

#[derive(Serialize)]
struct UzawaRow {
    outer_iter: usize,
    residual: f64,
}

fn write_rows<T: Serialize>(path: &Path, rows: impl IntoIterator<Item = T>) -> Result<()> {
    let mut w = csv::Writer::from_path(path).with_context(|| format!("creating {}", path.display()))?;
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

/// Picard log of one solve: `k, L_k, relative_update` where `L_k` counts the
/// outer Uzawa iterations of step `k`.
pub fn write_picard_log(path: &Path, h: f64, log: &[PicardLogEntry]) -> Result<()> {
    write_rows(
        path,
        log.iter().map(|e| PicardRow {
            h,
            k: e.k,
            l_k: e.uzawa_iterations,
            relative_update: e.relative_update,
            uzawa_residual: e.uzawa_residual,
            uzawa_converged: e.uzawa_converged,
        }),
    )
}

pub fn write_uzawa_log(path: &Path, history: &[f64]) -> Result<()> {
    write_rows(path, history.iter().enumerate().map(|(outer_iter, &residual)| UzawaRow { outer_iter, residual }))
}

/// Writes `errors.csv`, `rates.csv`, `fractions.csv`, `iterations.csv` and one
/// Uzawa log per level and Picard step under `uzawa/`.
pub fn write_study(dir: &Path, report: &StudyReport) -> Result<()> {
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let cells = &report.cells;
    write_rows(
        &dir.join("errors.csv"),
        cells.iter().map(|c| ErrorRow {
            h: c.h,
            velocity_dofs: c.velocity_dofs,
            pressure_dofs: c.pressure_dofs,
            error: c.error,
            picard_converged: c.picard_converged,
            failure: c.failure.as_deref().unwrap_or(""),
        }),
    )?;
    write_rows(
        &dir.join("rates.csv"),
        report.rates.iter().enumerate().map(|(i, &rate)| RateRow { h_coarse: cells[i].h, h_fine: cells[i + 1].h, rate }),
    )?;
    let th = &report.config.thresholds;
    write_rows(
        &dir.join("fractions.csv"),
        cells.iter().flat_map(|c| c.fractions.iter().zip(th).map(|(&fraction, &threshold)| FractionRow { h: c.h, threshold, fraction })),
    )?;
    write_rows(
        &dir.join("iterations.csv"),
        cells.iter().flat_map(|c| {
            c.picard_log.iter().map(|e| PicardRow {
                h: c.h,
                k: e.k,
                l_k: e.uzawa_iterations,
                relative_update: e.relative_update,
                uzawa_residual: e.uzawa_residual,
                uzawa_converged: e.uzawa_converged,
            })
        }),
    )?;
    let uz = dir.join("uzawa");
    fs::create_dir_all(&uz)?;
    for (level, c) in cells.iter().enumerate() {
        for e in &c.picard_log {
            write_uzawa_log(&uz.join(format!("level{level}_k{}.csv", e.k)), &e.uzawa_history)?;
        }
    }
    Ok(())
}
