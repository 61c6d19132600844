//! Tracing the real algebraic curve `Im(B^k/A^l) = 0` on a grid, and the
//! empirical equimodular locus of `D(t, z) = A(z) t^k + B(z) t^l + 1`.
//!
//! The curve is found as the zero set of the bounded defect
//! `s(z) = Im(w)/(1 + |w|)`, which has the same zeros as `Im(w)` but neither
//! overflows near poles nor vanishes into rounding elsewhere.

use std::str::FromStr;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{domain, pole, Error, Result};
use crate::par::Exec;
use crate::polyalg::discriminant;
use crate::recurrence::RecurrenceSpec;
use crate::rootfind::{find_roots, RootOptions};

/// Axis-aligned rectangle `[x0, x1] × [y0, y1]` in the z-plane.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BBox {
    pub x0: f64,
    pub x1: f64,
    pub y0: f64,
    pub y1: f64,
}

impl BBox {
    pub fn new(x0: f64, x1: f64, y0: f64, y1: f64) -> Result<Self> {
        let ok = [x0, x1, y0, y1].iter().all(|v| v.is_finite()) && x0 < x1 && y0 < y1;
        if !ok {
            return domain(format!("degenerate bounding box [{x0}, {x1}] x [{y0}, {y1}]"));
        }
        Ok(BBox { x0, x1, y0, y1 })
    }

    /// A square of half-width `r` around the origin.
    pub fn square(r: f64) -> Result<Self> {
        Self::new(-r, r, -r, r)
    }

    pub fn contains(&self, z: C64) -> bool {
        z.re >= self.x0 && z.re <= self.x1 && z.im >= self.y0 && z.im <= self.y1
    }

    /// Smallest box holding all points, padded by `pad` times its size (at
    /// least `min_half_width` from the center in each direction).
    pub fn around(points: &[C64], pad: f64, min_half_width: f64) -> Result<Self> {
        if points.is_empty() {
            return Self::square(min_half_width);
        }
        let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
        for z in points {
            x0 = x0.min(z.re);
            x1 = x1.max(z.re);
            y0 = y0.min(z.im);
            y1 = y1.max(z.im);
        }
        let half = ((x1 - x0).max(y1 - y0) * (0.5 + pad)).max(min_half_width);
        let (cx, cy) = ((x0 + x1) / 2.0, (y0 + y1) / 2.0);
        Self::new(cx - half, cx + half, cy - half, cy + half)
    }
}

impl FromStr for BBox {
    type Err = Error;

    /// Parses `x0,x1,y0,y1`.
    fn from_str(s: &str) -> Result<Self> {
        let v: Vec<f64> = s
            .split(',')
            .map(|t| t.trim().parse::<f64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| Error::Domain(format!("bad bounding box '{s}': {e}")))?;
        match v[..] {
            [x0, x1, y0, y1] => BBox::new(x0, x1, y0, y1),
            _ => domain(format!("bounding box needs four numbers x0,x1,y0,y1, got '{s}'")),
        }
    }
}

/// `nx × ny` nodes spanning a bounding box, corners included.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    pub bbox: BBox,
    pub nx: usize,
    pub ny: usize,
}

impl Grid {
    pub const MIN_NODES: usize = 8;

    pub fn new(bbox: BBox, nx: usize, ny: usize) -> Result<Self> {
        if nx < Self::MIN_NODES || ny < Self::MIN_NODES {
            return domain(format!("grid needs at least {0}x{0} nodes, got {nx}x{ny}", Self::MIN_NODES));
        }
        Ok(Grid { bbox, nx, ny })
    }

    pub fn dx(&self) -> f64 {
        (self.bbox.x1 - self.bbox.x0) / (self.nx - 1) as f64
    }

    pub fn dy(&self) -> f64 {
        (self.bbox.y1 - self.bbox.y0) / (self.ny - 1) as f64
    }

    pub fn node(&self, i: usize, j: usize) -> C64 {
        // pin the last node to the box edge exactly
        let x = if i + 1 == self.nx { self.bbox.x1 } else { self.bbox.x0 + i as f64 * self.dx() };
        let y = if j + 1 == self.ny { self.bbox.y1 } else { self.bbox.y0 + j as f64 * self.dy() };
        C64::new(x, y)
    }

    pub fn len(&self) -> usize {
        self.nx * self.ny
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Fractional node coordinates of a point.
    pub fn locate(&self, z: C64) -> (f64, f64) {
        ((z.re - self.bbox.x0) / self.dx(), (z.im - self.bbox.y0) / self.dy())
    }
}

/// `(ln|w|, arg w)` for `w = B(z)^k / A(z)^l`; `ln|w| = −∞` when `B(z) = 0`.
pub fn w_log(z: C64, spec: &RecurrenceSpec) -> Result<(f64, f64)> {
    let a = spec.a().eval(z);
    if a.norm() == 0.0 {
        return pole(format!("A vanishes at {z}"));
    }
    let b = spec.b().eval(z);
    if b.norm() == 0.0 {
        return Ok((f64::NEG_INFINITY, 0.0));
    }
    let (k, l) = (spec.k() as f64, spec.l() as f64);
    let ln = k * b.norm().ln() - l * a.norm().ln();
    let arg = (k * b.arg() - l * a.arg()).rem_euclid(std::f64::consts::TAU);
    Ok((ln, arg))
}

fn from_log(ln: f64, arg: f64) -> C64 {
    if ln == f64::NEG_INFINITY {
        return C64::new(0.0, 0.0);
    }
    let m = ln.exp();
    // keep signs when the modulus overflows
    let part = |c: f64| if c == 0.0 { 0.0 } else { m * c };
    C64::new(part(arg.cos()), part(arg.sin()))
}

/// `w = B(z)^k / A(z)^l`, accumulated through logarithms so that high powers
/// do not overflow before they cancel.
pub fn w_map(z: C64, spec: &RecurrenceSpec) -> Result<C64> {
    let (ln, arg) = w_log(z, spec)?;
    Ok(from_log(ln, arg))
}

/// `Im(w)/(1 + |w|)`.
pub fn curve_defect(z: C64, spec: &RecurrenceSpec) -> Result<f64> {
    let (ln, arg) = w_log(z, spec)?;
    if ln == f64::NEG_INFINITY {
        return Ok(0.0);
    }
    Ok(arg.sin() / (1.0 + (-ln).exp()))
}

/// Where `w` falls relative to the sign/range rule for `(k, l)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SignClass {
    Admissible,
    Excluded,
}

impl SignClass {
    pub fn as_str(self) -> &'static str {
        match self {
            SignClass::Admissible => "admissible",
            SignClass::Excluded => "excluded",
        }
    }
}

/// Upper end `k^k/(k−1)^{k−1}` of the window for `l = 1`.
pub fn window_bound(k: usize) -> f64 {
    let k = k as f64;
    (k * (k / (k - 1.0)).ln() + (k - 1.0).ln()).exp()
}

/// Whether `Re(w)` must be nonnegative (rather than nonpositive) for `l > 1`.
pub fn half_line_nonnegative(k: usize, l: usize) -> bool {
    !(k % 2 == 1 && l % 2 == 1)
}

/// Classifies `w` by the rule for `(k, l)`, with tolerance `1e−9·(1 + |w|)`.
///
/// For `l = 1`: `0 ≤ (−1)^k Re(w) ≤ k^k/(k−1)^{k−1}`. For `l > 1`: `Re(w) ≥ 0`
/// unless `k` and `l` are both odd, in which case `Re(w) ≤ 0`.
pub fn classify_region(w: C64, k: usize, l: usize) -> SignClass {
    let admissible = if w.re.is_nan() || w.im.is_nan() {
        false
    } else {
        let tol = if w.is_finite() { 1e-9 * (1.0 + w.norm()) } else { 0.0 };
        if l == 1 {
            let x = if k.is_multiple_of(2) { w.re } else { -w.re };
            x >= -tol && x <= window_bound(k) + tol
        } else if half_line_nonnegative(k, l) {
            w.re >= -tol
        } else {
            w.re <= tol
        }
    };
    if admissible {
        SignClass::Admissible
    } else {
        SignClass::Excluded
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurveVertex {
    pub z: C64,
    pub w: C64,
    /// `Im(w)/(1 + |w|)` at `z`.
    pub defect: f64,
    pub class: SignClass,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Polyline {
    pub vertices: Vec<CurveVertex>,
    pub closed: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurveNet {
    pub grid: Grid,
    pub refine_tol: f64,
    pub polylines: Vec<Polyline>,
    /// Cells skipped because they are within the guard radius of a zero of A.
    pub guarded_cells: usize,
}

impl CurveNet {
    pub fn vertices(&self) -> impl Iterator<Item = &CurveVertex> {
        self.polylines.iter().flat_map(|p| p.vertices.iter())
    }

    pub fn is_empty(&self) -> bool {
        self.polylines.is_empty()
    }
}

/// Cells (row-major, `(nx−1)·(ny−1)`) within one cell diagonal of a zero of `A`.
fn pole_guard(spec: &RecurrenceSpec, grid: &Grid) -> Vec<bool> {
    let (cx, cy) = (grid.nx - 1, grid.ny - 1);
    let mut guarded = vec![false; cx * cy];
    let Ok(rs) = find_roots(spec.a(), &RootOptions::default()) else {
        return guarded;
    };
    let radius = grid.dx().hypot(grid.dy());
    for r in rs.roots() {
        let (fi, fj) = grid.locate(*r);
        let (ri, rj) = (radius / grid.dx(), radius / grid.dy());
        let i0 = (fi - ri).floor().max(0.0) as usize;
        let j0 = (fj - rj).floor().max(0.0) as usize;
        let i1 = ((fi + ri).ceil().max(0.0) as usize).min(cx);
        let j1 = ((fj + rj).ceil().max(0.0) as usize).min(cy);
        for j in j0..j1 {
            for i in i0..i1 {
                guarded[j * cx + i] = true;
            }
        }
    }
    guarded
}

/// Bisects `s` on the segment `[za, zb]` (opposite signs at the ends) until
/// `|s| ≤ tol`. `None` when the sign change is a jump (a pole on the edge).
fn refine_crossing(spec: &RecurrenceSpec, mut za: C64, mut sa: f64, mut zb: C64, mut sb: f64, tol: f64) -> Option<C64> {
    for _ in 0..200 {
        if sa.abs() <= tol {
            return Some(za);
        }
        if sb.abs() <= tol {
            return Some(zb);
        }
        let zm = (za + zb) * 0.5;
        if zm == za || zm == zb {
            return None;
        }
        let sm = curve_defect(zm, spec).ok()?;
        if (sm > 0.0) == (sa > 0.0) {
            za = zm;
            sa = sm;
        } else {
            zb = zm;
            sb = sm;
        }
    }
    None
}

/// Traces `Im(B^k/A^l) = 0` over the grid by marching squares.
///
/// Sign changes of `s` along cell edges are refined by bisection to
/// `|s| ≤ refine_tol`; crossings that do not refine (jumps through a pole)
/// are dropped. Saddle cells are resolved by the sign at the cell center.
pub fn trace_curve(spec: &RecurrenceSpec, grid: &Grid, refine_tol: f64, exec: Exec) -> Result<CurveNet> {
    if refine_tol.is_nan() || refine_tol <= 0.0 {
        return domain("refine_tol must be positive");
    }
    let (nx, ny) = (grid.nx, grid.ny);
    let values: Vec<Option<f64>> = exec.map_range(nx * ny, |idx| {
        let z = grid.node(idx % nx, idx / nx);
        let a = spec.a().eval(z);
        if a.norm() <= 1e-12 * spec.a().eval_abs(z.norm()) {
            return None;
        }
        curve_defect(z, spec).ok()
    });
    let pos = |v: f64| v > 0.0;

    // edges: horizontal (i,j)-(i+1,j) first, then vertical (i,j)-(i,j+1)
    let n_h = (nx - 1) * ny;
    let edge_ends = |e: usize| -> ((usize, usize), (usize, usize)) {
        if e < n_h {
            let (i, j) = (e % (nx - 1), e / (nx - 1));
            ((i, j), (i + 1, j))
        } else {
            let e = e - n_h;
            let (i, j) = (e % nx, e / nx);
            ((i, j), (i, j + 1))
        }
    };
    let n_edges = n_h + nx * (ny - 1);
    let candidates: Vec<usize> = (0..n_edges)
        .filter(|&e| {
            let ((i0, j0), (i1, j1)) = edge_ends(e);
            match (values[j0 * nx + i0], values[j1 * nx + i1]) {
                (Some(a), Some(b)) => pos(a) != pos(b),
                _ => false,
            }
        })
        .collect();
    let refined: Vec<Option<C64>> = exec.map_slice(&candidates, |&e| {
        let ((i0, j0), (i1, j1)) = edge_ends(e);
        let (sa, sb) = (values[j0 * nx + i0]?, values[j1 * nx + i1]?);
        refine_crossing(spec, grid.node(i0, j0), sa, grid.node(i1, j1), sb, refine_tol)
    });

    let mut crossing_of_edge: Vec<Option<usize>> = vec![None; n_edges];
    let mut points: Vec<C64> = Vec::new();
    for (&e, r) in candidates.iter().zip(&refined) {
        if let Some(z) = r {
            crossing_of_edge[e] = Some(points.len());
            points.push(*z);
        }
    }

    let guarded = pole_guard(spec, grid);
    let (cx, cy) = (nx - 1, ny - 1);
    let h_edge = |i: usize, j: usize| j * (nx - 1) + i;
    let v_edge = |i: usize, j: usize| n_h + j * nx + i;
    let mut adjacency: Vec<Vec<usize>> = vec![Vec::new(); points.len()];
    let mut link = |a: usize, b: usize| {
        adjacency[a].push(b);
        adjacency[b].push(a);
    };
    for j in 0..cy {
        for i in 0..cx {
            if guarded[j * cx + i] {
                continue;
            }
            let bottom = crossing_of_edge[h_edge(i, j)];
            let right = crossing_of_edge[v_edge(i + 1, j)];
            let top = crossing_of_edge[h_edge(i, j + 1)];
            let left = crossing_of_edge[v_edge(i, j)];
            let present: Vec<usize> = [bottom, right, top, left].into_iter().flatten().collect();
            match present.len() {
                2 => link(present[0], present[1]),
                4 => {
                    let (b, r, t, l) = (present[0], present[1], present[2], present[3]);
                    let corner = values[j * nx + i].map(pos);
                    let centre = curve_defect((grid.node(i, j) + grid.node(i + 1, j + 1)) * 0.5, spec)
                        .ok()
                        .map(pos);
                    if centre.is_none() || centre == corner {
                        // bottom-left and top-right corners joined through the centre
                        link(b, r);
                        link(t, l);
                    } else {
                        link(l, b);
                        link(r, t);
                    }
                }
                _ => {}
            }
        }
    }
    let guarded_cells = guarded.iter().filter(|&&g| g).count();

    let vertex = |z: C64| -> CurveVertex {
        let w = w_map(z, spec).unwrap_or(C64::new(f64::NAN, f64::NAN));
        let defect = curve_defect(z, spec).unwrap_or(f64::NAN);
        CurveVertex { z, w, defect, class: classify_region(w, spec.k(), spec.l()) }
    };

    let mut polylines = Vec::new();
    let mut visited = vec![false; points.len()];
    let walk = |start: usize, visited: &mut Vec<bool>| -> (Vec<usize>, bool) {
        let mut chain = vec![start];
        visited[start] = true;
        let mut prev = usize::MAX;
        let mut cur = start;
        loop {
            let next = adjacency[cur].iter().copied().find(|&n| n != prev && !visited[n]);
            match next {
                Some(n) => {
                    visited[n] = true;
                    chain.push(n);
                    prev = cur;
                    cur = n;
                }
                None => {
                    let closes = chain.len() > 2 && adjacency[cur].contains(&start);
                    return (chain, closes);
                }
            }
        }
    };
    // open chains from their ends first, then the remaining cycles
    let mut order: Vec<usize> = (0..points.len()).filter(|&v| adjacency[v].len() == 1).collect();
    order.extend((0..points.len()).filter(|&v| adjacency[v].len() >= 2));
    for start in order {
        if visited[start] {
            continue;
        }
        let (chain, closed) = walk(start, &mut visited);
        if chain.len() < 2 {
            continue;
        }
        let mut vertices: Vec<CurveVertex> = chain.iter().map(|&v| vertex(points[v])).collect();
        if closed {
            vertices.push(vertices[0].clone());
        }
        polylines.push(Polyline { vertices, closed });
    }

    Ok(CurveNet { grid: *grid, refine_tol, polylines, guarded_cells })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DominanceClass {
    UniqueDominant,
    EquimodularSmallestPair,
    NearDegenerateDiscriminant,
}

impl DominanceClass {
    pub fn as_str(self) -> &'static str {
        match self {
            DominanceClass::UniqueDominant => "unique-dominant",
            DominanceClass::EquimodularSmallestPair => "equimodular-smallest-pair",
            DominanceClass::NearDegenerateDiscriminant => "near-degenerate-discriminant",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DominanceNode {
    pub z: C64,
    pub class: DominanceClass,
    /// The root set of `D(·, z)` passed residual certification.
    pub certified: bool,
    /// `|t_2|/|t_1| − 1` for the two smallest roots (∞ with fewer than two).
    pub modulus_gap: f64,
    /// The smallest root changes identity towards a neighbouring node.
    pub switch: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DominanceField {
    pub grid: Grid,
    pub equimodular_tol: f64,
    /// Row-major, `nodes[j * nx + i]`.
    pub nodes: Vec<DominanceNode>,
}

impl DominanceField {
    pub fn count(&self, class: DominanceClass) -> usize {
        self.nodes.iter().filter(|n| n.certified && n.class == class).count()
    }

    pub fn uncertified(&self) -> usize {
        self.nodes.iter().filter(|n| !n.certified).count()
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DominanceOptions {
    pub equimodular_tol: f64,
    /// `|Disc_t D| ≤ degenerate_tol · max(|A|, |B|, 1)^{2k−2}` marks a node
    /// as near-degenerate.
    pub degenerate_tol: f64,
    pub roots: RootOptions,
    pub exec: Exec,
}

impl Default for DominanceOptions {
    fn default() -> Self {
        DominanceOptions {
            equimodular_tol: 1e-6,
            degenerate_tol: 1e-10,
            roots: RootOptions::default(),
            exec: Exec::default(),
        }
    }
}

struct NodeRoots {
    sorted: Vec<C64>,
    certified: bool,
    near_degenerate: bool,
}

fn nearest(roots: &[C64], t: C64) -> usize {
    let mut best = 0;
    for (i, r) in roots.iter().enumerate() {
        if (r - t).norm() < (roots[best] - t).norm() {
            best = i;
        }
    }
    best
}

/// Classifies every grid node by the moduli of the roots of `D(·, z)`.
///
/// A node is equimodular when `|t_2|/|t_1| − 1 ≤ equimodular_tol`. Since the
/// equimodular set is a curve, exact hits are rare on a grid; a node is also
/// counted when the smallest root changes identity between it and a
/// neighbour (matching roots by proximity both ways), choosing whichever of
/// the two nodes has the smaller modulus gap.
pub fn dominance_map(spec: &RecurrenceSpec, grid: &Grid, opts: &DominanceOptions) -> Result<DominanceField> {
    let (nx, ny) = (grid.nx, grid.ny);
    let k = spec.k() as i32;
    let per_node: Vec<NodeRoots> = opts.exec.map_range(nx * ny, |idx| {
        let z = grid.node(idx % nx, idx / nx);
        let (a, b) = (spec.a().eval(z), spec.b().eval(z));
        let d = crate::polyalg::trinomial(a, b, spec.k(), spec.l());
        let scale = a.norm().max(b.norm()).max(1.0).powi(2 * k - 2);
        let near_degenerate = d.degree() == Some(spec.k())
            && discriminant(&d).is_ok_and(|disc| disc.norm() <= opts.degenerate_tol * scale);
        match find_roots(&d, &opts.roots) {
            Ok(rs) => NodeRoots { sorted: rs.sorted(), certified: rs.is_certified(), near_degenerate },
            Err(_) => NodeRoots { sorted: Vec::new(), certified: false, near_degenerate },
        }
    });

    let gap = |r: &NodeRoots| match r.sorted[..] {
        [t1, t2, ..] if t1.norm() > 0.0 => t2.norm() / t1.norm() - 1.0,
        _ => f64::INFINITY,
    };
    let mut nodes: Vec<DominanceNode> = per_node
        .iter()
        .enumerate()
        .map(|(idx, r)| {
            let g = gap(r);
            let class = if r.near_degenerate {
                DominanceClass::NearDegenerateDiscriminant
            } else if g <= opts.equimodular_tol {
                DominanceClass::EquimodularSmallestPair
            } else {
                DominanceClass::UniqueDominant
            };
            DominanceNode { z: grid.node(idx % nx, idx / nx), class, certified: r.certified, modulus_gap: g, switch: false }
        })
        .collect();

    let switches = |p: &NodeRoots, q: &NodeRoots| -> bool {
        if p.sorted.len() < 2 || q.sorted.len() != p.sorted.len() || !p.certified || !q.certified {
            return false;
        }
        nearest(&q.sorted, p.sorted[0]) != 0 && nearest(&p.sorted, q.sorted[0]) != 0
    };
    for j in 0..ny {
        for i in 0..nx {
            let here = j * nx + i;
            for there in [(i + 1 < nx).then(|| here + 1), (j + 1 < ny).then(|| here + nx)].into_iter().flatten() {
                if switches(&per_node[here], &per_node[there]) {
                    let pick = if nodes[here].modulus_gap <= nodes[there].modulus_gap { here } else { there };
                    nodes[pick].switch = true;
                }
            }
        }
    }
    for n in nodes.iter_mut() {
        if n.switch && n.class == DominanceClass::UniqueDominant {
            n.class = DominanceClass::EquimodularSmallestPair;
        }
    }
    Ok(DominanceField { grid: *grid, equimodular_tol: opts.equimodular_tol, nodes })
}

/// How many certified equimodular nodes lie near the admissible part of the
/// traced curve.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Agreement {
    pub equimodular: usize,
    pub near_admissible_curve: usize,
}

impl Agreement {
    pub fn fraction(&self) -> f64 {
        if self.equimodular == 0 {
            return 0.0;
        }
        self.near_admissible_curve as f64 / self.equimodular as f64
    }
}

/// Counts certified equimodular nodes of `field` within `radius_cells` grid
/// cells (in each axis) of an admissible vertex of `net`.
pub fn curve_agreement(field: &DominanceField, net: &CurveNet, radius_cells: f64) -> Agreement {
    let grid = &field.grid;
    let (nx, ny) = (grid.nx, grid.ny);
    let mut near = vec![false; nx * ny];
    for v in net.vertices().filter(|v| v.class == SignClass::Admissible) {
        let (fi, fj) = grid.locate(v.z);
        let i0 = (fi - radius_cells).ceil().max(0.0) as usize;
        let j0 = (fj - radius_cells).ceil().max(0.0) as usize;
        let i1 = ((fi + radius_cells).floor().max(-1.0) + 1.0) as usize;
        let j1 = ((fj + radius_cells).floor().max(-1.0) + 1.0) as usize;
        for j in j0..j1.min(ny) {
            for i in i0..i1.min(nx) {
                near[j * nx + i] = true;
            }
        }
    }
    let mut agreement = Agreement { equimodular: 0, near_admissible_curve: 0 };
    for (idx, n) in field.nodes.iter().enumerate() {
        if n.certified && n.class == DominanceClass::EquimodularSmallestPair {
            agreement.equimodular += 1;
            if near[idx] {
                agreement.near_admissible_curve += 1;
            }
        }
    }
    agreement
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(k: usize, l: usize, a: &str, b: &str) -> RecurrenceSpec {
        RecurrenceSpec::parse(k, l, a, b).unwrap()
    }

    #[test]
    fn w_map_examples() {
        let s = spec(2, 1, "z", "z");
        let z = C64::new(0.7, -1.3);
        assert!((w_map(z, &s).unwrap() - z).norm() < 1e-14);
        let s = spec(3, 2, "z+5", "-z^2+2z+5");
        assert!((w_map(C64::new(0.0, 0.0), &s).unwrap() - C64::new(5.0, 0.0)).norm() < 1e-13);
        assert!(matches!(w_map(C64::new(-5.0, 0.0), &s), Err(Error::Pole(_))));
        // B(1 + √6) = 0
        let s = spec(3, 2, "z+5", "-z^2+2z+5");
        let z = C64::new(1.0 + 6f64.sqrt(), 0.0);
        let w = w_map(z, &s).unwrap();
        assert!(w.norm() < 1e-40);
        let s = spec(3, 2, "1", "z^2 - 2");
        assert!(w_map(C64::new(2f64.sqrt(), 0.0), &s).unwrap().norm() < 1e-40);
    }

    #[test]
    fn w_map_survives_large_powers() {
        let s = spec(9, 2, "1e-200", "1e100 z");
        let w = w_map(C64::new(1.0, 0.0), &s).unwrap();
        assert!(w.re.is_infinite() && w.re > 0.0);
        let d = curve_defect(C64::new(1.0, 0.1), &s).unwrap();
        assert!(d.is_finite());
    }

    #[test]
    fn classify_examples() {
        assert_eq!(classify_region(C64::new(-6.75, 0.0), 3, 2), SignClass::Excluded);
        assert_eq!(classify_region(C64::new(2.0, 0.0), 2, 1), SignClass::Admissible);
        assert_eq!(classify_region(C64::new(256.0 / 27.0, 0.0), 4, 3), SignClass::Admissible);
        assert_eq!(classify_region(C64::new(4.5, 0.0), 2, 1), SignClass::Excluded);
        assert_eq!(classify_region(C64::new(-1.0, 0.0), 3, 1), SignClass::Admissible);
        assert_eq!(classify_region(C64::new(-1.0, 0.0), 5, 3), SignClass::Admissible);
        assert_eq!(classify_region(C64::new(1.0, 0.0), 5, 3), SignClass::Excluded);
        assert!((window_bound(2) - 4.0).abs() < 1e-14);
        assert!((window_bound(3) - 27.0 / 4.0).abs() < 1e-13);
    }

    #[test]
    fn bbox_parsing() {
        let b: BBox = "-6, 6,-6,6".parse().unwrap();
        assert_eq!(b, BBox::new(-6.0, 6.0, -6.0, 6.0).unwrap());
        assert!("1,0,0,1".parse::<BBox>().is_err());
        assert!("1,2,3".parse::<BBox>().is_err());
        assert!("a,2,3,4".parse::<BBox>().is_err());
        assert!(Grid::new(b, 7, 100).is_err());
    }

    #[test]
    fn real_axis_is_traced() {
        let s = spec(2, 1, "z", "z");
        let g = Grid::new(BBox::new(-3.0, 2.0, -1.0, 1.3).unwrap(), 17, 13).unwrap();
        let net = trace_curve(&s, &g, 1e-12, Exec::Sequential).unwrap();
        assert!(!net.is_empty());
        for v in net.vertices() {
            assert!(v.z.im.abs() <= 1e-12, "{}", v.z);
        }
    }

    #[test]
    fn cube_lines_are_traced() {
        let s = spec(3, 2, "1", "z");
        let g = Grid::new(BBox::new(-2.1, 1.9, -2.05, 1.95).unwrap(), 41, 41).unwrap();
        let net = trace_curve(&s, &g, 1e-12, Exec::Sequential).unwrap();
        assert!(net.vertices().count() > 100);
        for v in net.vertices() {
            let w = v.z.powi(3);
            assert!(w.im.abs() <= 1e-12 * (1.0 + w.norm()), "{}", v.z);
            if v.z.norm() > 0.1 {
                assert!((3.0 * v.z.arg()).sin().abs() < 1e-9, "{}", v.z);
            }
        }
    }

    #[test]
    fn constant_spec_is_all_equimodular() {
        let s = spec(3, 2, "1", "1");
        let g = Grid::new(BBox::square(1.0).unwrap(), 8, 8).unwrap();
        let f = dominance_map(&s, &g, &DominanceOptions::default()).unwrap();
        assert_eq!(f.count(DominanceClass::EquimodularSmallestPair), 64);
    }

    #[test]
    fn l1_window_points() {
        let s = spec(2, 1, "z", "z");
        // nodes at x = 2, 2.5, …, 5.5 and y = −3.5, …, 0
        let g = Grid::new(BBox::new(2.0, 5.5, -3.5, 0.0).unwrap(), 8, 8).unwrap();
        let opts = DominanceOptions { exec: Exec::Sequential, ..Default::default() };
        let f = dominance_map(&s, &g, &opts).unwrap();
        let at = |x: f64| f.nodes.iter().find(|n| n.z == C64::new(x, 0.0)).unwrap();
        assert_eq!(at(5.0).class, DominanceClass::UniqueDominant);
        assert_eq!(at(2.0).class, DominanceClass::EquimodularSmallestPair);
        assert!(at(2.0).modulus_gap < 1e-12);
    }
}
