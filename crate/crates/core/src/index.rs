//! Uniform bucket grid for exact nearest-point distance queries.

use crate::geometry::Point2;

const MAX_CELLS_PER_AXIS: usize = 512;

#[derive(Debug, Clone)]
pub(crate) struct PointGrid {
    min: Point2,
    cell: f64,
    nx: usize,
    ny: usize,
    /// `cell_start[c]..cell_start[c + 1]` indexes `points` for cell `c`.
    cell_start: Vec<u32>,
    points: Vec<Point2>,
}

impl PointGrid {
    /// `None` for an empty point set.
    pub(crate) fn build(points: &[Point2]) -> Option<Self> {
        let first = *points.first()?;
        let (mut min, mut max) = (first, first);
        for p in points {
            min.x = min.x.min(p.x);
            min.y = min.y.min(p.y);
            max.x = max.x.max(p.x);
            max.y = max.y.max(p.y);
        }
        let width = max.x - min.x;
        let height = max.y - min.y;
        let extent = width.max(height);
        // Roughly one point per cell, bounded so degenerate spreads stay small.
        let mut cell = ((width.max(1e-9) * height.max(1e-9)) / points.len() as f64).sqrt();
        cell = cell.max(extent / MAX_CELLS_PER_AXIS as f64).max(1e-6);
        let nx = ((width / cell).floor() as usize + 1).min(MAX_CELLS_PER_AXIS);
        let ny = ((height / cell).floor() as usize + 1).min(MAX_CELLS_PER_AXIS);

        let cell_of = |p: &Point2| -> usize {
            let ix = (((p.x - min.x) / cell).floor() as usize).min(nx - 1);
            let iy = (((p.y - min.y) / cell).floor() as usize).min(ny - 1);
            iy * nx + ix
        };

        let mut counts = vec![0u32; nx * ny + 1];
        for p in points {
            counts[cell_of(p) + 1] += 1;
        }
        for i in 1..counts.len() {
            counts[i] += counts[i - 1];
        }
        let cell_start = counts.clone();
        let mut cursor = counts;
        let mut sorted = vec![Point2::default(); points.len()];
        for p in points {
            let c = cell_of(p);
            sorted[cursor[c] as usize] = *p;
            cursor[c] += 1;
        }

        Some(Self {
            min,
            cell,
            nx,
            ny,
            cell_start,
            points: sorted,
        })
    }

    fn scan_cell(&self, ix: i64, iy: i64, q: Point2, best: &mut f64) {
        let c = iy as usize * self.nx + ix as usize;
        let range = self.cell_start[c] as usize..self.cell_start[c + 1] as usize;
        for p in &self.points[range] {
            let d = p.distance_squared(q);
            if d < *best {
                *best = d;
            }
        }
    }

    /// Squared distance to the closest indexed point.
    ///
    /// Rings of cells are visited outward from the query cell. After ring `k`
    /// every unvisited point is farther than `k` cells, so the search stops as
    /// soon as the best candidate is within that bound.
    pub(crate) fn nearest_distance_squared(&self, q: Point2) -> f64 {
        let nx = self.nx as i64;
        let ny = self.ny as i64;
        let qx = ((q.x - self.min.x) / self.cell).floor() as i64;
        let qy = ((q.y - self.min.y) / self.cell).floor() as i64;

        let gap_x = (-qx).max(qx - (nx - 1)).max(0);
        let gap_y = (-qy).max(qy - (ny - 1)).max(0);
        let k_start = gap_x.max(gap_y);
        let k_end = (qx.abs().max((qx - (nx - 1)).abs())).max(qy.abs().max((qy - (ny - 1)).abs()));

        let mut best = f64::INFINITY;
        for k in k_start..=k_end {
            let y_lo = (qy - k).max(0);
            let y_hi = (qy + k).min(ny - 1);
            for iy in y_lo..=y_hi {
                if iy == qy - k || iy == qy + k {
                    let x_lo = (qx - k).max(0);
                    let x_hi = (qx + k).min(nx - 1);
                    for ix in x_lo..=x_hi {
                        self.scan_cell(ix, iy, q, &mut best);
                    }
                } else {
                    if qx - k >= 0 && qx - k < nx {
                        self.scan_cell(qx - k, iy, q, &mut best);
                    }
                    if k > 0 && qx + k >= 0 && qx + k < nx {
                        self.scan_cell(qx + k, iy, q, &mut best);
                    }
                }
            }
            // Slack of a thousandth of a cell absorbs rounding in the cell
            // assignment of points lying on cell borders.
            let bound = (k as f64 - 1e-3) * self.cell;
            if bound > 0.0 && best <= bound * bound {
                break;
            }
        }
        best
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute(points: &[Point2], q: Point2) -> f64 {
        points
            .iter()
            .map(|p| p.distance_squared(q))
            .fold(f64::INFINITY, f64::min)
    }

    #[test]
    fn single_point() {
        let pts = [Point2::new(1.0, 2.0)];
        let grid = PointGrid::build(&pts).unwrap();
        assert_eq!(grid.nearest_distance_squared(Point2::new(1.0, 0.0)), 4.0);
        assert_eq!(grid.nearest_distance_squared(Point2::new(-100.0, 2.0)), 101.0 * 101.0);
    }

    #[test]
    fn collinear_points_and_far_queries() {
        let pts: Vec<_> = (0..50).map(|i| Point2::new(i as f64 * 0.1, 3.0)).collect();
        let grid = PointGrid::build(&pts).unwrap();
        for q in [
            Point2::new(2.55, 3.0),
            Point2::new(-7.0, -9.0),
            Point2::new(40.0, 3.1),
            Point2::new(2.0, 1e6),
        ] {
            assert_eq!(grid.nearest_distance_squared(q), brute(&pts, q));
        }
    }

    #[test]
    fn duplicates() {
        let pts = vec![Point2::new(0.5, 0.5); 10];
        let grid = PointGrid::build(&pts).unwrap();
        assert_eq!(grid.nearest_distance_squared(Point2::new(0.5, 1.5)), 1.0);
    }
}
