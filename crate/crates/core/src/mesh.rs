//! Parameter grids, zero-set extraction and OBJ/CSV export.

use std::collections::HashMap;
use std::io::Write;

use rayon::prelude::*;
use thiserror::Error;

use crate::holo::Complex;

/// Fraction of masked cells above which a grid is rejected.
pub const MAX_MASKED_FRACTION: f64 = 0.9;

#[derive(Debug, Error)]
pub enum MeshError {
    #[error("grid needs at least 2x2 nodes, got {0}x{1}")]
    TooSmall(usize, usize),
    #[error("{masked} of {total} cells masked; nothing meaningful to render")]
    MostlyMasked { masked: usize, total: usize },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

/// Axis-aligned rectangle `[u0, u1] x [v0, v1]` in the z-plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rect {
    pub u0: f64,
    pub u1: f64,
    pub v0: f64,
    pub v1: f64,
}

impl Rect {
    pub fn new(u0: f64, u1: f64, v0: f64, v1: f64) -> Self {
        Rect { u0, u1, v0, v1 }
    }

    pub fn contains(&self, z: Complex) -> bool {
        (self.u0..=self.u1).contains(&z.re) && (self.v0..=self.v1).contains(&z.im)
    }

    pub fn center(&self) -> Complex {
        Complex::new(0.5 * (self.u0 + self.u1), 0.5 * (self.v0 + self.v1))
    }
}

/// `nu x nv` nodes spanning a rectangle, corners included.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    pub rect: Rect,
    pub nu: usize,
    pub nv: usize,
}

impl Grid {
    pub fn new(rect: Rect, nu: usize, nv: usize) -> Result<Self, MeshError> {
        if nu < 2 || nv < 2 {
            return Err(MeshError::TooSmall(nu, nv));
        }
        Ok(Grid { rect, nu, nv })
    }

    pub fn square(rect: Rect, n: usize) -> Result<Self, MeshError> {
        Grid::new(rect, n, n)
    }

    pub fn du(&self) -> f64 {
        (self.rect.u1 - self.rect.u0) / (self.nu - 1) as f64
    }

    pub fn dv(&self) -> f64 {
        (self.rect.v1 - self.rect.v0) / (self.nv - 1) as f64
    }

    pub fn point(&self, i: usize, j: usize) -> Complex {
        Complex::new(
            self.rect.u0 + i as f64 * self.du(),
            self.rect.v0 + j as f64 * self.dv(),
        )
    }

    pub fn index(&self, i: usize, j: usize) -> usize {
        j * self.nu + i
    }

    pub fn len(&self) -> usize {
        self.nu * self.nv
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn cell_count(&self) -> usize {
        (self.nu - 1) * (self.nv - 1)
    }
}

/// Values at grid nodes (row-major in `j`), `None` where evaluation failed.
#[derive(Debug, Clone)]
pub struct Sampled<T> {
    pub grid: Grid,
    pub values: Vec<Option<T>>,
}

impl<T> Sampled<T> {
    pub fn get(&self, i: usize, j: usize) -> Option<&T> {
        self.values[self.grid.index(i, j)].as_ref()
    }

    /// A cell is masked when any of its corners failed.
    pub fn cell_masked(&self, i: usize, j: usize) -> bool {
        [(i, j), (i + 1, j), (i, j + 1), (i + 1, j + 1)]
            .iter()
            .any(|&(a, b)| self.get(a, b).is_none())
    }

    pub fn masked_cells(&self) -> usize {
        let g = self.grid;
        (0..g.nv - 1)
            .flat_map(|j| (0..g.nu - 1).map(move |i| (i, j)))
            .filter(|&(i, j)| self.cell_masked(i, j))
            .count()
    }

    pub fn map<U>(&self, f: impl Fn(&T) -> Option<U>) -> Sampled<U> {
        Sampled {
            grid: self.grid,
            values: self.values.iter().map(|v| v.as_ref().and_then(&f)).collect(),
        }
    }

    /// Reject grids where almost every cell is masked.
    pub fn check_coverage(&self) -> Result<(), MeshError> {
        let masked = self.masked_cells();
        let total = self.grid.cell_count();
        if masked as f64 > MAX_MASKED_FRACTION * total as f64 {
            return Err(MeshError::MostlyMasked { masked, total });
        }
        Ok(())
    }
}

/// Evaluate `f` at every node in parallel; the result order is deterministic.
pub fn sample_grid<T, E, F>(grid: Grid, f: F) -> Sampled<T>
where
    T: Send,
    F: Fn(Complex) -> Result<T, E> + Sync,
{
    let values = (0..grid.len())
        .into_par_iter()
        .map(|k| f(grid.point(k % grid.nu, k / grid.nu)).ok())
        .collect();
    Sampled { grid, values }
}

pub type ScalarGrid = Sampled<f64>;

/// Up to `iters` Newton steps towards the zero set of a real function, along
/// its finite-difference gradient.
pub fn newton_project(f: impl Fn(Complex) -> Option<f64>, z: Complex, iters: usize) -> Complex {
    let mut z = z;
    for _ in 0..iters {
        let step = 1e-6 * (1.0 + z.norm());
        let (Some(v), Some(up), Some(um), Some(vp), Some(vm)) = (
            f(z),
            f(z + step),
            f(z - step),
            f(z + Complex::new(0.0, step)),
            f(z - Complex::new(0.0, step)),
        ) else {
            break;
        };
        if v == 0.0 {
            break;
        }
        let grad = Complex::new((up - um) / (2.0 * step), (vp - vm) / (2.0 * step));
        let g2 = grad.norm_sqr();
        if g2 == 0.0 || !g2.is_finite() {
            break;
        }
        let next = z - grad * (v / g2);
        if !(next.re.is_finite() && next.im.is_finite()) {
            break;
        }
        z = next;
    }
    z
}

/// A polyline in the parameter plane.
#[derive(Debug, Clone, PartialEq)]
pub struct Polyline {
    pub points: Vec<Complex>,
    pub closed: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum EdgeKey {
    // edge from node (i, j) to (i+1, j)
    H(usize, usize),
    // edge from node (i, j) to (i, j+1)
    V(usize, usize),
}

/// Zero set of a scalar grid by marching squares. Saddle cells are resolved
/// with the average of the corner values; each crossing is refined with
/// `refine_iters` Newton steps on `exact` when given.
pub fn zero_set(
    grid: &ScalarGrid,
    exact: Option<&(dyn Fn(Complex) -> Option<f64> + Sync)>,
    refine_iters: usize,
) -> Vec<Polyline> {
    let g = grid.grid;
    let positive = |i: usize, j: usize| *grid.get(i, j).unwrap() >= 0.0;

    let mut crossings: HashMap<EdgeKey, Complex> = HashMap::new();
    let mut crossing = |key: EdgeKey| -> Complex {
        *crossings.entry(key).or_insert_with(|| {
            let ((i0, j0), (i1, j1)) = match key {
                EdgeKey::H(i, j) => ((i, j), (i + 1, j)),
                EdgeKey::V(i, j) => ((i, j), (i, j + 1)),
            };
            let (a, b) = (*grid.get(i0, j0).unwrap(), *grid.get(i1, j1).unwrap());
            let t = if a == b { 0.5 } else { a / (a - b) };
            let z = g.point(i0, j0) + (g.point(i1, j1) - g.point(i0, j0)) * t;
            match exact {
                Some(f) if refine_iters > 0 => {
                    let r = newton_project(f, z, refine_iters);
                    // Keep the refined point only if it stays near the edge.
                    if (r - z).norm() <= g.du().max(g.dv()) {
                        r
                    } else {
                        z
                    }
                }
                _ => z,
            }
        })
    };

    let mut links: HashMap<EdgeKey, Vec<EdgeKey>> = HashMap::new();
    let mut link = |a: EdgeKey, b: EdgeKey| {
        links.entry(a).or_default().push(b);
        links.entry(b).or_default().push(a);
    };

    for j in 0..g.nv - 1 {
        for i in 0..g.nu - 1 {
            if grid.cell_masked(i, j) {
                continue;
            }
            // corners: a (i,j), b (i+1,j), c (i+1,j+1), d (i,j+1)
            let (sa, sb, sc, sd) = (
                positive(i, j),
                positive(i + 1, j),
                positive(i + 1, j + 1),
                positive(i, j + 1),
            );
            let ab = EdgeKey::H(i, j);
            let dc = EdgeKey::H(i, j + 1);
            let ad = EdgeKey::V(i, j);
            let bc = EdgeKey::V(i + 1, j);
            let mut edges = Vec::with_capacity(4);
            if sa != sb {
                edges.push(ab);
            }
            if sb != sc {
                edges.push(bc);
            }
            if sc != sd {
                edges.push(dc);
            }
            if sd != sa {
                edges.push(ad);
            }
            match edges.len() {
                2 => link(edges[0], edges[1]),
                4 => {
                    let mean = [(i, j), (i + 1, j), (i + 1, j + 1), (i, j + 1)]
                        .iter()
                        .map(|&(a, b)| *grid.get(a, b).unwrap())
                        .sum::<f64>()
                        / 4.0;
                    if (mean >= 0.0) == sa {
                        // a and c connected through the centre: isolate b and d
                        link(ab, bc);
                        link(dc, ad);
                    } else {
                        link(ad, ab);
                        link(bc, dc);
                    }
                }
                _ => {}
            }
        }
    }

    for key in links.keys() {
        crossing(*key);
    }

    // Walk the link graph; every node has degree 1 (curve end) or 2.
    let mut keys: Vec<EdgeKey> = links.keys().copied().collect();
    keys.sort_by_key(|k| match *k {
        EdgeKey::H(i, j) => (j, i, 0),
        EdgeKey::V(i, j) => (j, i, 1),
    });
    let mut visited: HashMap<EdgeKey, bool> = HashMap::new();
    let mut out = Vec::new();
    let trace = |start: EdgeKey, visited: &mut HashMap<EdgeKey, bool>| -> (Vec<EdgeKey>, bool) {
        let mut path = vec![start];
        visited.insert(start, true);
        let mut prev: Option<EdgeKey> = None;
        let mut cur = start;
        loop {
            let next = links[&cur]
                .iter()
                .copied()
                .find(|n| Some(*n) != prev && !visited.get(n).copied().unwrap_or(false));
            match next {
                Some(n) => {
                    visited.insert(n, true);
                    path.push(n);
                    prev = Some(cur);
                    cur = n;
                }
                None => {
                    let closed = path.len() > 2 && links[&cur].contains(&start);
                    return (path, closed);
                }
            }
        }
    };
    // Open curves first, from their endpoints.
    for k in keys.iter().filter(|k| links[k].len() == 1) {
        if visited.get(k).copied().unwrap_or(false) {
            continue;
        }
        let (path, _) = trace(*k, &mut visited);
        out.push(Polyline {
            points: path.iter().map(|k| crossings[k]).collect(),
            closed: false,
        });
    }
    for k in &keys {
        if visited.get(k).copied().unwrap_or(false) {
            continue;
        }
        let (path, closed) = trace(*k, &mut visited);
        out.push(Polyline {
            points: path.iter().map(|k| crossings[k]).collect(),
            closed,
        });
    }
    out
}

/// Triangle mesh with optional polyline overlays.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Mesh {
    pub vertices: Vec<[f64; 3]>,
    pub faces: Vec<[usize; 3]>,
    pub lines: Vec<Vec<usize>>,
}

impl Mesh {
    /// Two triangles per unmasked cell.
    pub fn from_grid(points: &Sampled<[f64; 3]>) -> Mesh {
        let g = points.grid;
        let mut mesh = Mesh::default();
        let mut index = vec![usize::MAX; g.len()];
        for (k, v) in points.values.iter().enumerate() {
            if let Some(p) = v {
                index[k] = mesh.vertices.len();
                mesh.vertices.push(*p);
            }
        }
        for j in 0..g.nv - 1 {
            for i in 0..g.nu - 1 {
                if points.cell_masked(i, j) {
                    continue;
                }
                let a = index[g.index(i, j)];
                let b = index[g.index(i + 1, j)];
                let c = index[g.index(i + 1, j + 1)];
                let d = index[g.index(i, j + 1)];
                mesh.faces.push([a, b, c]);
                mesh.faces.push([a, c, d]);
            }
        }
        mesh
    }

    pub fn add_line(&mut self, points: &[[f64; 3]]) {
        let start = self.vertices.len();
        self.vertices.extend_from_slice(points);
        self.lines.push((start..start + points.len()).collect());
    }
}

pub fn export_obj<W: Write>(mut w: W, mesh: &Mesh) -> Result<(), MeshError> {
    writeln!(w, "# frontlab {}", env!("CARGO_PKG_VERSION"))?;
    for v in &mesh.vertices {
        writeln!(w, "v {} {} {}", v[0], v[1], v[2])?;
    }
    if !mesh.faces.is_empty() {
        writeln!(w, "o surface")?;
    }
    for f in &mesh.faces {
        writeln!(w, "f {} {} {}", f[0] + 1, f[1] + 1, f[2] + 1)?;
    }
    for (k, l) in mesh.lines.iter().filter(|l| l.len() >= 2).enumerate() {
        writeln!(w, "o singular_curve_{k}")?;
        let idx: Vec<String> = l.iter().map(|k| (k + 1).to_string()).collect();
        writeln!(w, "l {}", idx.join(" "))?;
    }
    Ok(())
}

/// One row of the per-sample CSV export.
#[derive(Debug, Clone, PartialEq)]
pub struct CsvRow {
    pub z: Complex,
    pub mean: Option<f64>,
    pub gauss: Option<f64>,
    pub phi: Option<f64>,
    pub delta: Option<f64>,
    pub class: Option<String>,
}

pub fn export_csv<W: Write>(mut w: W, rows: &[CsvRow]) -> Result<(), MeshError> {
    writeln!(w, "# frontlab {}", env!("CARGO_PKG_VERSION"))?;
    let mut out = csv::Writer::from_writer(w);
    out.write_record(["z_re", "z_im", "H", "K", "Phi", "Delta", "class"])?;
    let opt = |x: Option<f64>| x.map(|v| v.to_string()).unwrap_or_default();
    for r in rows {
        out.write_record([
            r.z.re.to_string(),
            r.z.im.to_string(),
            opt(r.mean),
            opt(r.gauss),
            opt(r.phi),
            opt(r.delta),
            r.class.clone().unwrap_or_default(),
        ])?;
    }
    out.flush()?;
    Ok(())
}
