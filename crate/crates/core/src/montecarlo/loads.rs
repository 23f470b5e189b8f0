//! Users per base station in one realization.

use super::association::Policy;
use super::scene::{Node, Realization};
use crate::error::{Error, Result};

/// Bucket grid over node positions for nearest-neighbour queries.
#[derive(Debug, Clone)]
pub struct SpatialGrid {
    cell: f64,
    side: usize,
    origin: f64,
    cells: Vec<Vec<u32>>,
    points: Vec<(f64, f64)>,
}

impl SpatialGrid {
    pub fn new(points: Vec<(f64, f64)>, half_width: f64, cell: f64) -> Self {
        let side = ((2.0 * half_width / cell).ceil() as usize).max(1);
        let mut cells = vec![Vec::new(); side * side];
        let origin = -half_width;
        let mut grid = Self {
            cell,
            side,
            origin,
            cells: Vec::new(),
            points,
        };
        for (i, &(x, y)) in grid.points.iter().enumerate() {
            let (cx, cy) = grid.cell_of(x, y);
            cells[cy * side + cx].push(i as u32);
        }
        grid.cells = cells;
        grid
    }

    fn cell_of(&self, x: f64, y: f64) -> (usize, usize) {
        let clamp = |v: f64| (((v - self.origin) / self.cell).floor().max(0.0) as usize).min(self.side - 1);
        (clamp(x), clamp(y))
    }

    /// Nearest point accepted by `keep`, with its distance.
    pub fn nearest(&self, x: f64, y: f64, keep: impl Fn(usize) -> bool) -> Option<(usize, f64)> {
        let (cx, cy) = self.cell_of(x, y);
        let mut best: Option<(usize, f64)> = None;
        for ring in 0..=self.side {
            // Every point outside ring `ring` is at least `ring * cell` away
            // from the query minus its offset inside the home cell.
            if let Some((_, d)) = best {
                if d <= (ring as f64 - 1.0) * self.cell {
                    break;
                }
            }
            let lo_x = cx as i64 - ring as i64;
            let hi_x = cx as i64 + ring as i64;
            let lo_y = cy as i64 - ring as i64;
            let hi_y = cy as i64 + ring as i64;
            for gy in lo_y..=hi_y {
                for gx in lo_x..=hi_x {
                    let on_ring = gx == lo_x || gx == hi_x || gy == lo_y || gy == hi_y;
                    if !on_ring || gx < 0 || gy < 0 || gx >= self.side as i64 || gy >= self.side as i64 {
                        continue;
                    }
                    for &i in &self.cells[gy as usize * self.side + gx as usize] {
                        let i = i as usize;
                        if !keep(i) {
                            continue;
                        }
                        let (px, py) = self.points[i];
                        let d = (px - x).hypot(py - y);
                        if best.is_none_or(|(_, b)| d < b) {
                            best = Some((i, d));
                        }
                    }
                }
            }
        }
        best
    }
}

fn grid_for(nodes: &[Node], radius: f64) -> SpatialGrid {
    let n = nodes.len().max(1) as f64;
    let area = std::f64::consts::PI * radius * radius;
    let cell = (area / n).sqrt().max(1.0);
    SpatialGrid::new(nodes.iter().map(|n| n.pos.xy()).collect(), radius, cell)
}

/// Number of users associated with each F-AP and each RRH.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct BsLoads {
    pub fap: Vec<u32>,
    pub rrh: Vec<u32>,
    /// Users with no node to attach to.
    pub unserved: u32,
}

/// Associate every user of the realization by distance-based rules.
///
/// Minimal delay depends on each user's own SINR field and is not supported
/// here; its loads come from the analytic equilibrium.
pub fn per_bs_loads(real: &Realization, policy: Policy, k: f64) -> Result<BsLoads> {
    let fg = grid_for(&real.fap, real.radius);
    let rg = grid_for(&real.rrh, real.radius);
    let mut loads = BsLoads {
        fap: vec![0; real.fap.len()],
        rrh: vec![0; real.rrh.len()],
        unserved: 0,
    };
    for user in &real.users {
        let (x, y) = user.xy();
        let near_r = rg.nearest(x, y, |_| true);
        let choice = match policy {
            Policy::MaxRsrp => {
                let near_f = fg.nearest(x, y, |_| true);
                match (near_f, near_r) {
                    (Some((f, df)), Some((_, dr))) if dr >= k * df => Some((true, f)),
                    (Some((f, _)), None) => Some((true, f)),
                    (_, Some((r, _))) => Some((false, r)),
                    (None, None) => None,
                }
            }
            Policy::ClusterMaxCacheHit { radius } => {
                match fg.nearest(x, y, |i| real.fap_hit[i]) {
                    Some((f, d)) if d <= radius => Some((true, f)),
                    _ => near_r.map(|(r, _)| (false, r)),
                }
            }
            Policy::MinDelay => {
                return Err(Error::Unsupported(
                    "per-BS loads under minimal delay; use the equilibrium loads".into(),
                ))
            }
        };
        match choice {
            Some((true, i)) => loads.fap[i] += 1,
            Some((false, i)) => loads.rrh[i] += 1,
            None => loads.unserved += 1,
        }
    }
    Ok(loads)
}
