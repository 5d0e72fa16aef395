//! Square evaluation grids, cell sets and interpolation.
//!
//! A [`GridSpec`] pins a physical window `[origin, origin + side]^2` and its
//! division into `cells_per_side^2` square cells. Fields are stored at cell
//! centres in row-major [`ScalarGrid`]s. Cell unions ([`CellSet`]) carry the
//! windows that restrict measures in the potential-theory operations.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Axis-aligned rectangle `[x0, x1] x [y0, y1]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Rect {
    pub x0: f64,
    pub y0: f64,
    pub x1: f64,
    pub y1: f64,
}

impl Rect {
    pub fn new(x0: f64, y0: f64, x1: f64, y1: f64) -> Result<Self> {
        if !(x0 < x1 && y0 < y1) {
            return Err(Error::InvalidParameter(format!(
                "degenerate rectangle [{x0}, {x1}] x [{y0}, {y1}]"
            )));
        }
        Ok(Rect { x0, y0, x1, y1 })
    }

    pub fn contains(&self, p: [f64; 2]) -> bool {
        p[0] >= self.x0 && p[0] <= self.x1 && p[1] >= self.y0 && p[1] <= self.y1
    }
}

/// Physical window and its discretization.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub origin: [f64; 2],
    pub side: f64,
    pub cells_per_side: usize,
    /// Torus enlargement factor for the periodic embedding used in sampling.
    pub padding_factor: usize,
}

impl GridSpec {
    pub fn new(
        origin: [f64; 2],
        side: f64,
        cells_per_side: usize,
        padding_factor: usize,
    ) -> Result<Self> {
        if !(side > 0.0) || !side.is_finite() {
            return Err(Error::InvalidParameter(format!("side must be positive, got {side}")));
        }
        if !cells_per_side.is_power_of_two() {
            return Err(Error::InvalidParameter(format!(
                "cells_per_side must be a power of two, got {cells_per_side}"
            )));
        }
        if padding_factor < 2 {
            return Err(Error::InvalidParameter(format!(
                "padding_factor must be at least 2, got {padding_factor}"
            )));
        }
        if !origin.iter().all(|c| c.is_finite()) {
            return Err(Error::InvalidParameter("origin must be finite".into()));
        }
        Ok(GridSpec { origin, side, cells_per_side, padding_factor })
    }

    /// Unit window `[0,1]^2`; the padding default keeps the periodization
    /// bias of a unit-mass band below 1e-3 of its variance.
    pub fn unit(cells_per_side: usize) -> Result<Self> {
        Self::new([0.0, 0.0], 1.0, cells_per_side, 8)
    }

    pub fn cell_width(&self) -> f64 {
        self.side / self.cells_per_side as f64
    }

    pub fn cell_area(&self) -> f64 {
        let h = self.cell_width();
        h * h
    }

    pub fn num_cells(&self) -> usize {
        self.cells_per_side * self.cells_per_side
    }

    pub fn index(&self, ix: usize, iy: usize) -> usize {
        debug_assert!(ix < self.cells_per_side && iy < self.cells_per_side);
        iy * self.cells_per_side + ix
    }

    pub fn coords(&self, index: usize) -> (usize, usize) {
        (index % self.cells_per_side, index / self.cells_per_side)
    }

    pub fn cell_center(&self, ix: usize, iy: usize) -> [f64; 2] {
        let h = self.cell_width();
        [
            self.origin[0] + (ix as f64 + 0.5) * h,
            self.origin[1] + (iy as f64 + 0.5) * h,
        ]
    }

    pub fn center_of(&self, index: usize) -> [f64; 2] {
        let (ix, iy) = self.coords(index);
        self.cell_center(ix, iy)
    }

    /// All cell centres in index order.
    pub fn centers(&self) -> Vec<[f64; 2]> {
        (0..self.num_cells()).map(|i| self.center_of(i)).collect()
    }

    pub fn window_rect(&self) -> Rect {
        Rect {
            x0: self.origin[0],
            y0: self.origin[1],
            x1: self.origin[0] + self.side,
            y1: self.origin[1] + self.side,
        }
    }

    /// Convex hull of the cell centres; bilinear interpolation is defined here.
    pub fn interpolation_hull(&self) -> Rect {
        let h = self.cell_width();
        Rect {
            x0: self.origin[0] + 0.5 * h,
            y0: self.origin[1] + 0.5 * h,
            x1: self.origin[0] + self.side - 0.5 * h,
            y1: self.origin[1] + self.side - 0.5 * h,
        }
    }

    /// Closed cells containing `p` (up to four on cell boundaries).
    pub fn cells_containing(&self, p: [f64; 2]) -> Vec<(usize, usize)> {
        let n = self.cells_per_side;
        let h = self.cell_width();
        let mut out = Vec::with_capacity(4);
        let ux = (p[0] - self.origin[0]) / h;
        let uy = (p[1] - self.origin[1]) / h;
        if ux < 0.0 || uy < 0.0 || ux > n as f64 || uy > n as f64 {
            return out;
        }
        let candidates = |u: f64| -> Vec<usize> {
            let mut cs = Vec::with_capacity(2);
            let f = u.floor();
            // boundary points belong to both adjacent cells
            if u == f && f as usize > 0 {
                cs.push(f as usize - 1);
            }
            if (f as usize) < n {
                cs.push(f as usize);
            }
            cs
        };
        for &ix in &candidates(ux) {
            for &iy in &candidates(uy) {
                out.push((ix, iy));
            }
        }
        out
    }
}

/// Row-major scalar field on the cells of a [`GridSpec`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalarGrid {
    cells_per_side: usize,
    values: Vec<f64>,
}

impl ScalarGrid {
    pub fn zeros(cells_per_side: usize) -> Self {
        ScalarGrid { cells_per_side, values: vec![0.0; cells_per_side * cells_per_side] }
    }

    pub fn from_values(cells_per_side: usize, values: Vec<f64>) -> Result<Self> {
        if values.len() != cells_per_side * cells_per_side {
            return Err(Error::ShapeMismatch(format!(
                "expected {} values for a {}x{} grid, got {}",
                cells_per_side * cells_per_side,
                cells_per_side,
                cells_per_side,
                values.len()
            )));
        }
        Ok(ScalarGrid { cells_per_side, values })
    }

    pub fn cells_per_side(&self) -> usize {
        self.cells_per_side
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn get(&self, ix: usize, iy: usize) -> f64 {
        self.values[iy * self.cells_per_side + ix]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.values
    }

    pub fn add_assign(&mut self, other: &ScalarGrid) -> Result<()> {
        if self.cells_per_side != other.cells_per_side {
            return Err(Error::ShapeMismatch(format!(
                "cannot add {}^2 grid to {}^2 grid",
                other.cells_per_side, self.cells_per_side
            )));
        }
        for (a, b) in self.values.iter_mut().zip(&other.values) {
            *a += b;
        }
        Ok(())
    }

    /// Bilinear interpolation of the cell-centre mesh at `p`; `None` outside
    /// the interpolation hull. Exact at the mesh knots.
    pub fn bilinear(&self, spec: &GridSpec, p: [f64; 2]) -> Option<f64> {
        let n = self.cells_per_side;
        debug_assert_eq!(n, spec.cells_per_side);
        let h = spec.cell_width();
        let u = (p[0] - spec.origin[0]) / h - 0.5;
        let v = (p[1] - spec.origin[1]) / h - 0.5;
        if !(u >= 0.0 && v >= 0.0 && u <= (n - 1) as f64 && v <= (n - 1) as f64) {
            return None;
        }
        let i = (u.floor() as usize).min(n - 2);
        let j = (v.floor() as usize).min(n - 2);
        let fu = u - i as f64;
        let fv = v - j as f64;
        Some(
            (1.0 - fu) * (1.0 - fv) * self.get(i, j)
                + fu * (1.0 - fv) * self.get(i + 1, j)
                + (1.0 - fu) * fv * self.get(i, j + 1)
                + fu * fv * self.get(i + 1, j + 1),
        )
    }
}

/// Sorted union of cell indices of one grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellSet {
    indices: Vec<usize>,
}

impl CellSet {
    pub fn empty() -> Self {
        CellSet { indices: Vec::new() }
    }

    pub fn full(grid: &GridSpec) -> Self {
        CellSet { indices: (0..grid.num_cells()).collect() }
    }

    /// Cells whose centres lie in `rect`.
    pub fn from_rect(grid: &GridSpec, rect: &Rect) -> Self {
        let indices = (0..grid.num_cells())
            .filter(|&i| rect.contains(grid.center_of(i)))
            .collect();
        CellSet { indices }
    }

    pub fn from_indices(grid: &GridSpec, mut indices: Vec<usize>) -> Result<Self> {
        indices.sort_unstable();
        indices.dedup();
        if let Some(&last) = indices.last() {
            if last >= grid.num_cells() {
                return Err(Error::InvalidParameter(format!(
                    "cell index {last} out of range for {} cells",
                    grid.num_cells()
                )));
            }
        }
        Ok(CellSet { indices })
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn contains(&self, index: usize) -> bool {
        self.indices.binary_search(&index).is_ok()
    }

    pub fn union(&self, other: &CellSet) -> CellSet {
        let mut indices: Vec<usize> =
            self.indices.iter().chain(other.indices.iter()).copied().collect();
        indices.sort_unstable();
        indices.dedup();
        CellSet { indices }
    }

    pub fn area(&self, grid: &GridSpec) -> f64 {
        self.indices.len() as f64 * grid.cell_area()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spec_validation() {
        assert!(GridSpec::new([0.0, 0.0], 1.0, 64, 2).is_ok());
        assert!(GridSpec::new([0.0, 0.0], 1.0, 63, 2).is_err());
        assert!(GridSpec::new([0.0, 0.0], 0.0, 64, 2).is_err());
        assert!(GridSpec::new([0.0, 0.0], 1.0, 64, 1).is_err());
    }

    #[test]
    fn centers_and_indexing() {
        let g = GridSpec::new([1.0, 2.0], 2.0, 4, 2).unwrap();
        assert_eq!(g.cell_width(), 0.5);
        assert_eq!(g.cell_center(0, 0), [1.25, 2.25]);
        assert_eq!(g.cell_center(3, 3), [2.75, 3.75]);
        assert_eq!(g.index(1, 2), 9);
        assert_eq!(g.coords(9), (1, 2));
    }

    #[test]
    fn bilinear_is_exact_at_knots_and_linear_between() {
        let g = GridSpec::unit(4).unwrap();
        let field =
            ScalarGrid::from_values(4, (0..16).map(|i| i as f64 * 0.37 - 1.0).collect()).unwrap();
        for iy in 0..4 {
            for ix in 0..4 {
                let p = g.cell_center(ix, iy);
                let v = field.bilinear(&g, p).unwrap();
                assert_eq!(v, field.get(ix, iy));
            }
        }
        // midpoint between two horizontal knots
        let a = g.cell_center(0, 0);
        let b = g.cell_center(1, 0);
        let mid = [(a[0] + b[0]) / 2.0, a[1]];
        let v = field.bilinear(&g, mid).unwrap();
        assert!((v - 0.5 * (field.get(0, 0) + field.get(1, 0))).abs() < 1e-15);
        // outside the hull
        assert!(field.bilinear(&g, [0.01, 0.01]).is_none());
        assert!(field.bilinear(&g, [0.999, 0.5]).is_none());
    }

    #[test]
    fn cells_containing_interior_and_boundary() {
        let g = GridSpec::unit(4).unwrap();
        assert_eq!(g.cells_containing([0.1, 0.1]), vec![(0, 0)]);
        // shared edge between cells (0,0) and (1,0)
        let on_edge = g.cells_containing([0.25, 0.1]);
        assert_eq!(on_edge.len(), 2);
        assert!(on_edge.contains(&(0, 0)) && on_edge.contains(&(1, 0)));
        // shared corner of four cells
        let corner = g.cells_containing([0.25, 0.25]);
        assert_eq!(corner.len(), 4);
        // window corner belongs to one cell
        assert_eq!(g.cells_containing([1.0, 1.0]), vec![(3, 3)]);
        // outside
        assert!(g.cells_containing([1.1, 0.5]).is_empty());
    }

    #[test]
    fn cell_set_operations() {
        let g = GridSpec::unit(4).unwrap();
        let left = CellSet::from_rect(&g, &Rect::new(0.0, 0.0, 0.5, 1.0).unwrap());
        let right = CellSet::from_rect(&g, &Rect::new(0.5, 0.0, 1.0, 1.0).unwrap());
        assert_eq!(left.len(), 8);
        assert_eq!(right.len(), 8);
        let all = left.union(&right);
        assert_eq!(all.len(), 16);
        assert_eq!(all, CellSet::full(&g));
        assert_eq!(left.area(&g), 0.5);
        assert!(CellSet::empty().is_empty());
    }
}
