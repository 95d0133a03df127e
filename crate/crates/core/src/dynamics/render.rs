use super::orbit::{iterate_orbit, FinalClass};
use super::DynamicsError;
use crate::builder::Construction;
use crate::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Axis-aligned rectangle in the plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Window {
    pub center: Complex64,
    pub width: f64,
    pub height: f64,
}

impl Window {
    pub fn new(center: Complex64, width: f64, height: f64) -> Result<Self, DynamicsError> {
        if !(width > 0.0 && height > 0.0 && width.is_finite() && height.is_finite() && center.is_finite()) {
            return Err(DynamicsError::BadArguments(format!("window {width}x{height} at {center}")));
        }
        Ok(Self { center, width, height })
    }

    /// Center of pixel `(i, j)`, row 0 at the top.
    pub fn pixel_center(&self, i: usize, j: usize, nx: usize, ny: usize) -> Complex64 {
        let x = self.center.re - 0.5 * self.width + (i as f64 + 0.5) * self.width / nx as f64;
        let y = self.center.im + 0.5 * self.height - (j as f64 + 0.5) * self.height / ny as f64;
        Complex64::new(x, y)
    }

    /// Largest `|z|` over the window.
    pub fn max_modulus(&self) -> f64 {
        let x = self.center.re.abs() + 0.5 * self.width;
        let y = self.center.im.abs() + 0.5 * self.height;
        x.hypot(y)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cell {
    pub final_class: FinalClass,
    pub first_b_level: Option<usize>,
    pub steps_used: u32,
}

impl Cell {
    /// The label compared by [`julia_mask`].
    pub fn label(&self) -> (FinalClass, Option<usize>) {
        (self.final_class, self.first_b_level)
    }
}

/// Row-major cells, row 0 at the top of the window.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    pub window: Window,
    pub nx: usize,
    pub ny: usize,
    pub budget: usize,
    pub cells: Vec<Cell>,
}

impl Grid {
    pub fn cell(&self, i: usize, j: usize) -> &Cell {
        &self.cells[j * self.nx + i]
    }
}

/// Classifies the orbit of every pixel center. Rows are computed in
/// parallel; each cell depends only on its own pixel, so the grid does not
/// depend on scheduling.
pub fn render(c: &Construction, window: Window, nx: usize, ny: usize, budget: usize) -> Grid {
    let mut cells = vec![Cell { final_class: FinalClass::Budget, first_b_level: None, steps_used: 0 }; nx * ny];
    cells.par_chunks_mut(nx.max(1)).enumerate().for_each(|(j, row)| {
        for (i, cell) in row.iter_mut().enumerate() {
            let orbit = iterate_orbit(c, window.pixel_center(i, j, nx, ny), budget);
            *cell = Cell {
                final_class: orbit.final_class,
                first_b_level: orbit.first_b_level(),
                steps_used: orbit.iterations() as u32,
            };
        }
    });
    Grid { window, nx, ny, budget, cells }
}

/// Boolean image over a window, row-major with row 0 at the top.
#[derive(Debug, Clone, PartialEq)]
pub struct Mask {
    pub window: Window,
    pub nx: usize,
    pub ny: usize,
    pub bits: Vec<bool>,
}

impl Mask {
    pub fn new(window: Window, nx: usize, ny: usize) -> Self {
        Self { window, nx, ny, bits: vec![false; nx * ny] }
    }

    /// Pixels on `[0,1]^2` with `nx = ny = n`, set where `f(x, y)` holds at the
    /// pixel center.
    pub fn unit_square(n: usize, f: impl Fn(f64, f64) -> bool) -> Self {
        let window = Window { center: Complex64::new(0.5, 0.5), width: 1.0, height: 1.0 };
        let mut m = Self::new(window, n, n);
        for j in 0..n {
            for i in 0..n {
                let z = window.pixel_center(i, j, n, n);
                m.bits[j * n + i] = f(z.re, z.im);
            }
        }
        m
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.bits[j * self.nx + i]
    }

    pub fn set(&mut self, i: usize, j: usize, v: bool) {
        self.bits[j * self.nx + i] = v;
    }

    pub fn count(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    pub fn union(&self, other: &Mask) -> Mask {
        assert_eq!((self.nx, self.ny), (other.nx, other.ny), "mask shapes differ");
        let bits = self.bits.iter().zip(&other.bits).map(|(a, b)| *a || *b).collect();
        Mask { bits, ..self.clone() }
    }

    /// Side of a pixel along x, in plane units.
    pub fn pixel_size(&self) -> f64 {
        self.window.width / self.nx as f64
    }
}

/// Pixels whose 4-neighbourhood (itself included) shows at least two distinct
/// `(final_class, first_b_level)` labels: the frontier between escape classes.
pub fn julia_mask(g: &Grid) -> Mask {
    let (nx, ny) = (g.nx, g.ny);
    let mut mask = Mask::new(g.window, nx, ny);
    mask.bits.par_chunks_mut(nx.max(1)).enumerate().for_each(|(j, row)| {
        for (i, bit) in row.iter_mut().enumerate() {
            let here = g.cell(i, j).label();
            let differs = |a: usize, b: usize| g.cell(a, b).label() != here;
            *bit = (i > 0 && differs(i - 1, j))
                || (i + 1 < nx && differs(i + 1, j))
                || (j > 0 && differs(i, j - 1))
                || (j + 1 < ny && differs(i, j + 1));
        }
    });
    mask
}
