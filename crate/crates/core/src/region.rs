//! Sharp parameter regions: L² containment E_p, 0-Radonification R_p,
//! p-Radonification R_p^(p) (which is also the Gaussian region), Besov
//! embeddings, and Triebel-diagram export.

use std::fmt::Write as _;
use std::io::{self, Write};

use crate::besov::BesovParams;
use crate::error::{invalid, Error, Result};

/// Signed Chebyshev distances in (s, w); positive inside.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegionMargins {
    pub e_p: f64,
    pub r_p: f64,
    pub r_p_p: f64,
    pub gaussian: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BoundaryFlags {
    pub e_p: bool,
    pub r_p: bool,
    pub r_p_p: bool,
    pub gaussian: bool,
    /// The point is where E_p membership and the embedding test
    /// L² ↪ B^p_{s,w} disagree (s = −d/2 + d/p for p > 2).
    pub embedding_mismatch: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegionVerdict {
    pub params: BesovParams,
    pub in_e_p: bool,
    pub in_r_p: bool,
    pub in_r_p_p: bool,
    pub in_gaussian_region: bool,
    pub margins: RegionMargins,
    pub boundary_flags: BoundaryFlags,
}

/// Corner (a, b) of the quadrant-shaped region and whether each side is closed.
#[derive(Debug, Clone, Copy, PartialEq)]
struct Quadrant {
    s_max: f64,
    w_max: f64,
    s_closed: bool,
    w_closed: bool,
}

impl Quadrant {
    fn contains(&self, s: f64, w: f64) -> bool {
        let s_ok = if self.s_closed {
            s <= self.s_max
        } else {
            s < self.s_max
        };
        let w_ok = if self.w_closed {
            w <= self.w_max
        } else {
            w < self.w_max
        };
        s_ok && w_ok
    }

    fn margin(&self, s: f64, w: f64) -> f64 {
        (self.s_max - s).min(self.w_max - w)
    }
}

fn e_region(p: f64, d: f64) -> Quadrant {
    if p < 2.0 {
        Quadrant {
            s_max: 0.0,
            w_max: d / 2.0 - d / p,
            s_closed: false,
            w_closed: false,
        }
    } else if p == 2.0 {
        Quadrant {
            s_max: 0.0,
            w_max: 0.0,
            s_closed: true,
            w_closed: true,
        }
    } else {
        Quadrant {
            s_max: -d / 2.0 + d / p,
            w_max: 0.0,
            s_closed: false,
            w_closed: true,
        }
    }
}

fn r_region(p: f64, d: f64) -> Quadrant {
    if p <= 2.0 {
        Quadrant {
            s_max: -d / 2.0,
            w_max: -d / p,
            s_closed: false,
            w_closed: false,
        }
    } else {
        Quadrant {
            s_max: -d + d / p,
            w_max: -d / 2.0,
            s_closed: false,
            w_closed: false,
        }
    }
}

fn rp_region(p: f64, d: f64) -> Quadrant {
    Quadrant {
        s_max: -d / 2.0,
        w_max: -d / p,
        s_closed: false,
        w_closed: false,
    }
}

pub fn classify_point(params: &BesovParams) -> Result<RegionVerdict> {
    if !(params.p > 1.0) {
        return Err(invalid(format!("p must exceed 1, got {}", params.p)));
    }
    let (p, s, w, d) = (params.p, params.s, params.w, params.dim());
    let e = e_region(p, d);
    let r = r_region(p, d);
    let rp = rp_region(p, d);
    let in_e_p = e.contains(s, w);
    let in_r_p = r.contains(s, w);
    let in_r_p_p = rp.contains(s, w);
    let margins = RegionMargins {
        e_p: e.margin(s, w),
        r_p: r.margin(s, w),
        r_p_p: rp.margin(s, w),
        gaussian: rp.margin(s, w),
    };
    let l2 = BesovParams {
        p: 2.0,
        s: 0.0,
        w: 0.0,
        d: params.d,
    };
    let embeds = besov_embeds(&l2, params)?;
    let boundary_flags = BoundaryFlags {
        e_p: margins.e_p == 0.0,
        r_p: margins.r_p == 0.0,
        r_p_p: margins.r_p_p == 0.0,
        gaussian: margins.gaussian == 0.0,
        embedding_mismatch: embeds != in_e_p,
    };
    Ok(RegionVerdict {
        params: *params,
        in_e_p,
        in_r_p,
        in_r_p_p,
        in_gaussian_region: in_r_p_p,
        margins,
        boundary_flags,
    })
}

/// Whether B^{p₀}_{s₀,w₀} embeds continuously into B^{p₁}_{s₁,w₁}.
pub fn besov_embeds(a: &BesovParams, b: &BesovParams) -> Result<bool> {
    if a.d != b.d {
        return Err(Error::DimensionMismatch(a.d, b.d));
    }
    if !(a.p > 1.0) || !(b.p > 1.0) {
        return Err(invalid("both integrability exponents must exceed 1"));
    }
    let d = a.dim();
    Ok(if a.p > b.p {
        a.s > b.s && a.w - b.w > d * (1.0 / b.p - 1.0 / a.p)
    } else {
        a.s - b.s >= d * (1.0 / a.p - 1.0 / b.p) && a.w >= b.w
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Plane {
    S,
    W,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RegionKind {
    E,
    R,
    Rp,
}

impl RegionKind {
    pub const ALL: [RegionKind; 3] = [RegionKind::E, RegionKind::R, RegionKind::Rp];

    pub fn label(&self) -> &'static str {
        match self {
            RegionKind::E => "E_p",
            RegionKind::R => "R_p",
            RegionKind::Rp => "R_p^(p)",
        }
    }
}

/// Height of a region boundary over x = 1/p in the given plane.
pub fn boundary_value(plane: Plane, kind: RegionKind, x: f64, d: f64) -> f64 {
    let h = d / 2.0;
    let y = match (plane, kind) {
        (Plane::S, RegionKind::R) => (2.0 * x - 2.0).min(-1.0),
        (Plane::S, RegionKind::E) => (2.0 * x - 1.0).min(0.0),
        (Plane::S, RegionKind::Rp) => -1.0,
        (Plane::W, RegionKind::R) => (-2.0 * x).min(-1.0),
        (Plane::W, RegionKind::E) => (1.0 - 2.0 * x).min(0.0),
        (Plane::W, RegionKind::Rp) => -2.0 * x,
    };
    h * y
}

/// Membership of the single coordinate `y` in the region's factor.
fn factor_contains(plane: Plane, kind: RegionKind, x: f64, y: f64, d: f64) -> bool {
    let p = 1.0 / x;
    let q = match kind {
        RegionKind::E => e_region(p, d),
        RegionKind::R => r_region(p, d),
        RegionKind::Rp => rp_region(p, d),
    };
    match plane {
        Plane::S => {
            if q.s_closed {
                y <= q.s_max
            } else {
                y < q.s_max
            }
        }
        Plane::W => {
            if q.w_closed {
                y <= q.w_max
            } else {
                y < q.w_max
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Polyline {
    pub plane: Plane,
    pub kind: RegionKind,
    pub vertices: Vec<(f64, f64)>,
}

/// Region boundaries over x ∈ [0, 1] with the kink at x = 1/2.
pub fn boundary_polylines(d: u32) -> Vec<Polyline> {
    let df = d as f64;
    let mut out = Vec::new();
    for plane in [Plane::S, Plane::W] {
        for kind in RegionKind::ALL {
            let vertices = [0.0, 0.5, 1.0]
                .iter()
                .map(|&x| (x, boundary_value(plane, kind, x, df)))
                .collect();
            out.push(Polyline {
                plane,
                kind,
                vertices,
            });
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridCell {
    pub one_over_p: f64,
    pub value: f64,
    pub in_e_p: bool,
    pub in_r_p: bool,
    pub in_r_p_p: bool,
    /// Some region boundary passes through the cell.
    pub boundary: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TriebelGrid {
    pub d: u32,
    pub x_range: (f64, f64),
    pub y_range: (f64, f64),
    pub nx: usize,
    pub ny: usize,
    /// Row-major, rows ordered by increasing value, columns by increasing 1/p.
    pub s_plane: Vec<GridCell>,
    pub w_plane: Vec<GridCell>,
}

impl TriebelGrid {
    pub fn plane(&self, plane: Plane) -> &[GridCell] {
        match plane {
            Plane::S => &self.s_plane,
            Plane::W => &self.w_plane,
        }
    }
}

fn boundary_crosses(
    plane: Plane,
    kind: RegionKind,
    x0: f64,
    x1: f64,
    y0: f64,
    y1: f64,
    d: f64,
) -> bool {
    let mut xs = vec![x0, x1];
    if x0 < 0.5 && 0.5 < x1 {
        xs.push(0.5);
    }
    let vals: Vec<f64> = xs
        .iter()
        .map(|&x| boundary_value(plane, kind, x, d))
        .collect();
    let lo = vals.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = vals.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    hi >= y0 && lo <= y1
}

/// Cell-centred grids over (1/p, s) and (1/p, w) for p in `p_range`
/// (p_max may be +∞) and values in `sw_window`.
pub fn triebel_grid(
    p_range: (f64, f64),
    sw_window: (f64, f64),
    d: u32,
    resolution: (usize, usize),
) -> Result<TriebelGrid> {
    let (p_min, p_max) = p_range;
    if !(p_min > 1.0) || !(p_max > p_min) {
        return Err(invalid("need 1 < p_min < p_max"));
    }
    let (lo, hi) = sw_window;
    if !(hi > lo) || !lo.is_finite() || !hi.is_finite() {
        return Err(invalid("empty s/w window"));
    }
    if resolution.0 < 2 || resolution.1 < 2 {
        return Err(invalid("resolution must be at least 2 per axis"));
    }
    if d == 0 {
        return Err(invalid("d must be positive"));
    }
    let df = d as f64;
    let x_range = (1.0 / p_max, 1.0 / p_min);
    let (nx, ny) = resolution;
    let dx = (x_range.1 - x_range.0) / nx as f64;
    let dy = (hi - lo) / ny as f64;
    let build = |plane: Plane| -> Vec<GridCell> {
        let mut cells = Vec::with_capacity(nx * ny);
        for iy in 0..ny {
            let y = lo + (iy as f64 + 0.5) * dy;
            for ix in 0..nx {
                let x = x_range.0 + (ix as f64 + 0.5) * dx;
                let x0 = x_range.0 + ix as f64 * dx;
                let boundary = RegionKind::ALL.iter().any(|&k| {
                    boundary_crosses(plane, k, x0, x0 + dx, y - dy / 2.0, y + dy / 2.0, df)
                });
                cells.push(GridCell {
                    one_over_p: x,
                    value: y,
                    in_e_p: factor_contains(plane, RegionKind::E, x, y, df),
                    in_r_p: factor_contains(plane, RegionKind::R, x, y, df),
                    in_r_p_p: factor_contains(plane, RegionKind::Rp, x, y, df),
                    boundary,
                });
            }
        }
        cells
    };
    Ok(TriebelGrid {
        d,
        x_range,
        y_range: (lo, hi),
        nx,
        ny,
        s_plane: build(Plane::S),
        w_plane: build(Plane::W),
    })
}

pub const GRID_CSV_HEADER: &str = "one_over_p,s_or_w,in_Ep,in_Rp,in_Rpp,boundary";

pub fn write_grid_csv<W: Write>(grid: &TriebelGrid, plane: Plane, mut out: W) -> io::Result<()> {
    writeln!(out, "{GRID_CSV_HEADER}")?;
    for c in grid.plane(plane) {
        writeln!(
            out,
            "{},{},{},{},{},{}",
            c.one_over_p,
            c.value,
            c.in_e_p as u8,
            c.in_r_p as u8,
            c.in_r_p_p as u8,
            c.boundary as u8
        )?;
    }
    Ok(())
}

/// Two side-by-side panels (s-plane, w-plane) with shaded regions and the
/// exact boundary polylines on top.
pub fn render_svg(grid: &TriebelGrid) -> String {
    const PANEL: f64 = 360.0;
    const PAD: f64 = 40.0;
    let width = 2.0 * PANEL + 3.0 * PAD;
    let height = PANEL + 2.0 * PAD;
    let (x0, x1) = grid.x_range;
    let (y0, y1) = grid.y_range;
    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}">"#
    );
    let _ = writeln!(svg, r#"<rect width="100%" height="100%" fill="white"/>"#);
    for (panel, plane) in [Plane::S, Plane::W].into_iter().enumerate() {
        let ox = PAD + panel as f64 * (PANEL + PAD);
        let oy = PAD;
        let px = |x: f64| ox + (x - x0) / (x1 - x0) * PANEL;
        let py = |y: f64| oy + (y1 - y) / (y1 - y0) * PANEL;
        let cw = PANEL / grid.nx as f64;
        let ch = PANEL / grid.ny as f64;
        for (i, c) in grid.plane(plane).iter().enumerate() {
            let fill = if c.in_r_p && c.in_r_p_p {
                "#2b6cb0"
            } else if c.in_r_p || c.in_r_p_p {
                "#63b3ed"
            } else if c.in_e_p {
                "#bee3f8"
            } else {
                "#f7fafc"
            };
            let ix = i % grid.nx;
            let iy = i / grid.nx;
            let _ = writeln!(
                svg,
                r#"<rect x="{:.3}" y="{:.3}" width="{:.3}" height="{:.3}" fill="{fill}"/>"#,
                ox + ix as f64 * cw,
                oy + PANEL - (iy as f64 + 1.0) * ch,
                cw,
                ch
            );
        }
        for line in boundary_polylines(grid.d)
            .iter()
            .filter(|l| l.plane == plane)
        {
            let colour = match line.kind {
                RegionKind::E => "#1a202c",
                RegionKind::R => "#c53030",
                RegionKind::Rp => "#2f855a",
            };
            let pts: Vec<String> = clip_polyline(&line.vertices, x0, x1)
                .iter()
                .map(|&(x, y)| format!("{:.3},{:.3}", px(x), py(y.clamp(y0, y1))))
                .collect();
            let _ = writeln!(
                svg,
                r#"<polyline points="{}" fill="none" stroke="{colour}" stroke-width="2"><title>{}</title></polyline>"#,
                pts.join(" "),
                line.kind.label()
            );
        }
        let _ = writeln!(
            svg,
            r#"<rect x="{ox}" y="{oy}" width="{PANEL}" height="{PANEL}" fill="none" stroke="black"/>"#
        );
        let label = match plane {
            Plane::S => "s",
            Plane::W => "w",
        };
        let _ = writeln!(
            svg,
            r#"<text x="{:.1}" y="{:.1}" font-family="sans-serif" font-size="14" text-anchor="middle">1/p</text>"#,
            ox + PANEL / 2.0,
            oy + PANEL + 28.0
        );
        let _ = writeln!(
            svg,
            r#"<text x="{:.1}" y="{:.1}" font-family="sans-serif" font-size="14">{label}</text>"#,
            ox - 24.0,
            oy + PANEL / 2.0
        );
    }
    svg.push_str("</svg>\n");
    svg
}

fn clip_polyline(v: &[(f64, f64)], x0: f64, x1: f64) -> Vec<(f64, f64)> {
    let interp = |x: f64| -> f64 {
        for w in v.windows(2) {
            if x >= w[0].0 && x <= w[1].0 {
                let t = (x - w[0].0) / (w[1].0 - w[0].0);
                return w[0].1 + t * (w[1].1 - w[0].1);
            }
        }
        v.last().map(|p| p.1).unwrap_or(0.0)
    };
    let mut out = vec![(x0, interp(x0))];
    out.extend(v.iter().copied().filter(|&(x, _)| x > x0 && x < x1));
    out.push((x1, interp(x1)));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cp(p: f64, s: f64, w: f64, d: u32) -> RegionVerdict {
        classify_point(&BesovParams::new(p, s, w, d).unwrap()).unwrap()
    }

    #[test]
    fn printed_examples() {
        let v = cp(2.0, 0.0, 0.0, 1);
        assert!(v.in_e_p && !v.in_r_p && v.boundary_flags.e_p);
        let v = cp(3.0, -1.0, -1.0, 1);
        assert!(v.in_e_p && v.in_r_p && v.in_r_p_p && v.in_gaussian_region);
        assert!(cp(1.5, -0.6, -0.7, 1).in_r_p);
    }

    #[test]
    fn embedding_examples() {
        let a = BesovParams::new(4.0, 0.0, 1.0, 1).unwrap();
        let b = BesovParams::new(2.0, -1.0, 0.0, 1).unwrap();
        assert!(besov_embeds(&a, &b).unwrap());
        assert!(besov_embeds(&a, &a).unwrap());
        let a = BesovParams::new(2.0, 0.0, 0.0, 1).unwrap();
        let b = BesovParams::new(3.0, 0.0, 0.0, 1).unwrap();
        assert!(!besov_embeds(&a, &b).unwrap());
        let c = BesovParams::new(2.0, 0.0, 0.0, 2).unwrap();
        assert!(besov_embeds(&a, &c).is_err());
    }

    #[test]
    fn open_s_edge_for_large_p_is_flagged() {
        let v = cp(3.0, -0.5 + 1.0 / 3.0, -0.2, 1);
        assert!(!v.in_e_p && v.boundary_flags.embedding_mismatch);
    }

    #[test]
    fn figure_boundaries_at_half() {
        let d = 1.0;
        assert_eq!(boundary_value(Plane::S, RegionKind::E, 0.5, d), 0.0);
        assert_eq!(boundary_value(Plane::S, RegionKind::R, 0.5, d), -0.5);
        assert_eq!(boundary_value(Plane::S, RegionKind::R, 0.9, d), -0.5);
    }

    #[test]
    fn smallest_grid() {
        let g = triebel_grid((1.5, 4.0), (-2.0, 1.0), 1, (2, 2)).unwrap();
        assert_eq!(g.s_plane.len(), 4);
        assert_eq!(g.w_plane.len(), 4);
        assert!(triebel_grid((1.5, 4.0), (1.0, 1.0), 1, (2, 2)).is_err());
        assert!(render_svg(&g).starts_with("<svg"));
    }
}
