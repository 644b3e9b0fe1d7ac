use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Boundary {
    Periodic,
    /// Ghost cells copy the boundary cell.
    Outflow,
}

impl std::fmt::Display for Boundary {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Boundary::Periodic => "periodic",
            Boundary::Outflow => "outflow",
        })
    }
}

impl std::str::FromStr for Boundary {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "periodic" => Ok(Boundary::Periodic),
            "outflow" => Ok(Boundary::Outflow),
            other => Err(Error::Config(format!("unknown boundary '{other}'"))),
        }
    }
}

/// Uniform mesh of `n` cells on `[a, b]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid1D {
    a: f64,
    b: f64,
    n: usize,
    boundary: Boundary,
}

impl Grid1D {
    pub const MIN_CELLS: usize = 3;

    pub fn new(a: f64, b: f64, n: usize, boundary: Boundary) -> Result<Self> {
        if !(a.is_finite() && b.is_finite()) || b <= a {
            return Err(Error::param(format!("domain [{a}, {b}] is empty")));
        }
        if n < Self::MIN_CELLS {
            return Err(Error::param(format!(
                "grid needs at least {} cells, got {n}",
                Self::MIN_CELLS
            )));
        }
        Ok(Self { a, b, n, boundary })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn boundary(&self) -> Boundary {
        self.boundary
    }

    pub fn is_periodic(&self) -> bool {
        self.boundary == Boundary::Periodic
    }

    pub fn width(&self) -> f64 {
        self.b - self.a
    }

    pub fn dx(&self) -> f64 {
        (self.b - self.a) / self.n as f64
    }

    pub fn center(&self, i: usize) -> f64 {
        self.a + (i as f64 + 0.5) * self.dx()
    }

    /// Position of the interface between cells `i` and `i + 1`.
    pub fn interface(&self, i: usize) -> f64 {
        self.a + (i as f64 + 1.0) * self.dx()
    }

    pub fn centers(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.center(i)).collect()
    }

    /// Cell index for a possibly out-of-range stencil offset.
    pub fn wrap(&self, i: isize) -> usize {
        let n = self.n as isize;
        match self.boundary {
            Boundary::Periodic => i.rem_euclid(n) as usize,
            Boundary::Outflow => i.clamp(0, n - 1) as usize,
        }
    }

    /// Maps `x` into `[a, b)` for periodic grids.
    pub fn reduce(&self, x: f64) -> f64 {
        match self.boundary {
            Boundary::Periodic => self.a + (x - self.a).rem_euclid(self.width()),
            Boundary::Outflow => x,
        }
    }
}
