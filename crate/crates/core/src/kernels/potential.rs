//! Potential functions `q` acting on the killed process.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::geometry::Point;

/// A potential evaluable anywhere in the plane.
///
/// `RadialPower` is `scale * |x - center|^{-beta}` restricted to the radial
/// shell `r_lo < |x - center| <= r_hi`; the plain power with support radius
/// `cutoff` is the shell `(0, cutoff]`. Thresholding a radial power at level
/// `M` (as the Kato decomposition does) splits the shell at
/// `r = (scale/M)^{1/beta}`, so both halves stay in this family.
#[derive(Debug, Clone)]
pub enum Potential {
    Constant {
        value: f64,
    },
    RadialPower {
        center: Point,
        beta: f64,
        scale: f64,
        r_lo: f64,
        r_hi: f64,
    },
    Grid(GridPotential),
}

/// Cell-sampled potential tied to a lattice geometry (cell lookup is O(1),
/// zero outside the covered cells).
#[derive(Debug, Clone)]
pub struct GridPotential {
    pub values: Arc<Vec<f64>>,
    pub cells: Arc<Vec<Point>>,
    pub h: f64,
    origin: Point,
    nx: usize,
    ny: usize,
    lattice: Arc<Vec<Option<usize>>>,
}

impl GridPotential {
    /// Builds the lattice index from cell centers laid out on a regular grid
    /// anchored at `origin` with spacing `h`.
    pub fn new(values: Vec<f64>, cells: Arc<Vec<Point>>, h: f64, origin: Point) -> Self {
        let mut nx = 0usize;
        let mut ny = 0usize;
        let idx_of = |c: &Point| {
            let ix = ((c.x - origin.x) / h - 0.5).round() as usize;
            let iy = ((c.y - origin.y) / h - 0.5).round() as usize;
            (ix, iy)
        };
        for c in cells.iter() {
            let (ix, iy) = idx_of(c);
            nx = nx.max(ix + 1);
            ny = ny.max(iy + 1);
        }
        let mut lattice = vec![None; nx * ny];
        for (i, c) in cells.iter().enumerate() {
            let (ix, iy) = idx_of(c);
            lattice[iy * nx + ix] = Some(i);
        }
        GridPotential {
            values: Arc::new(values),
            cells,
            h,
            origin,
            nx,
            ny,
            lattice: Arc::new(lattice),
        }
    }

    pub fn cell_of(&self, p: Point) -> Option<usize> {
        let ix = ((p.x - self.origin.x) / self.h).floor();
        let iy = ((p.y - self.origin.y) / self.h).floor();
        if ix < 0.0 || iy < 0.0 || ix >= self.nx as f64 || iy >= self.ny as f64 {
            return None;
        }
        self.lattice[iy as usize * self.nx + ix as usize]
    }
}

impl Potential {
    pub fn zero() -> Self {
        Potential::Constant { value: 0.0 }
    }

    pub fn constant(value: f64) -> Self {
        Potential::Constant { value }
    }

    /// `|x - center|^{-beta}` supported on the ball of radius `cutoff`.
    pub fn radial_power(center: Point, beta: f64, cutoff: f64) -> Result<Self> {
        if beta < 0.0 {
            return Err(Error::InvalidArgument {
                name: "beta",
                reason: format!("radial power exponent must be >= 0, got {beta}"),
            });
        }
        if !(cutoff > 0.0) {
            return Err(Error::InvalidArgument {
                name: "cutoff",
                reason: format!("support radius must be > 0, got {cutoff}"),
            });
        }
        Ok(Potential::RadialPower {
            center,
            beta,
            scale: 1.0,
            r_lo: 0.0,
            r_hi: cutoff,
        })
    }

    pub fn scaled(self, factor: f64) -> Self {
        match self {
            Potential::Constant { value } => Potential::Constant {
                value: value * factor,
            },
            Potential::RadialPower {
                center,
                beta,
                scale,
                r_lo,
                r_hi,
            } => Potential::RadialPower {
                center,
                beta,
                scale: scale * factor,
                r_lo,
                r_hi,
            },
            Potential::Grid(g) => Potential::Grid(GridPotential {
                values: Arc::new(g.values.iter().map(|v| v * factor).collect()),
                ..g
            }),
        }
    }

    /// Pointwise value. Radial powers return +inf at their center when
    /// `r_lo = 0`; grid-cell sampling averages that cell analytically instead
    /// (see `cell_average`).
    pub fn eval(&self, p: Point) -> f64 {
        match self {
            Potential::Constant { value } => *value,
            Potential::RadialPower {
                center,
                beta,
                scale,
                r_lo,
                r_hi,
            } => {
                let r = p.dist(*center);
                if r > *r_lo && r <= *r_hi {
                    scale * r.powf(-beta)
                } else if r == 0.0 && *r_lo == 0.0 {
                    if *beta == 0.0 {
                        *scale
                    } else {
                        f64::INFINITY
                    }
                } else {
                    0.0
                }
            }
            Potential::Grid(g) => g.cell_of(p).map_or(0.0, |i| g.values[i]),
        }
    }

    /// Average of the potential over the square cell of side `h` centered at
    /// `c`. For a singular radial power whose center falls inside the cell,
    /// the cell is replaced by the equal-area disk and the radial integral is
    /// done in closed form; elsewhere this is the midpoint value.
    pub fn cell_average(&self, c: Point, h: f64) -> f64 {
        if let Potential::RadialPower {
            center,
            beta,
            scale,
            r_lo,
            r_hi,
        } = self
        {
            let d = c.dist(*center);
            if d <= h && *r_lo == 0.0 && *beta > 0.0 {
                // equal-area disk: radius h/sqrt(pi)
                let re = (h * h / std::f64::consts::PI).sqrt().min(*r_hi);
                if *beta >= 2.0 {
                    return f64::INFINITY * scale.signum();
                }
                return scale * 2.0 * std::f64::consts::PI * re.powf(2.0 - beta)
                    / ((2.0 - beta) * h * h);
            }
        }
        self.eval(c)
    }

    /// Splits `q = kept + excess` at threshold `M >= 0`: `excess` carries the
    /// values with `|q| > M`, `kept` the rest. The split is exact pointwise.
    pub fn threshold(&self, m: f64) -> (Potential, Potential) {
        match self {
            Potential::Constant { value } => {
                if value.abs() > m {
                    (Potential::zero(), self.clone())
                } else {
                    (self.clone(), Potential::zero())
                }
            }
            Potential::RadialPower {
                center,
                beta,
                scale,
                r_lo,
                r_hi,
            } => {
                if *beta == 0.0 {
                    return if scale.abs() > m {
                        (Potential::zero(), self.clone())
                    } else {
                        (self.clone(), Potential::zero())
                    };
                }
                // |q| > M  <=>  r < (|scale|/M)^{1/beta}
                let r_split = if m <= 0.0 {
                    f64::INFINITY
                } else {
                    (scale.abs() / m).powf(1.0 / beta)
                };
                let r_split = r_split.clamp(*r_lo, *r_hi);
                let kept = Potential::RadialPower {
                    center: *center,
                    beta: *beta,
                    scale: *scale,
                    r_lo: r_split,
                    r_hi: *r_hi,
                };
                let excess = Potential::RadialPower {
                    center: *center,
                    beta: *beta,
                    scale: *scale,
                    r_lo: *r_lo,
                    r_hi: r_split,
                };
                (kept, excess)
            }
            Potential::Grid(g) => {
                let kept: Vec<f64> = g
                    .values
                    .iter()
                    .map(|&v| if v.abs() > m { 0.0 } else { v })
                    .collect();
                let excess: Vec<f64> = g
                    .values
                    .iter()
                    .map(|&v| if v.abs() > m { v } else { 0.0 })
                    .collect();
                (
                    Potential::Grid(GridPotential {
                        values: Arc::new(kept),
                        ..g.clone()
                    }),
                    Potential::Grid(GridPotential {
                        values: Arc::new(excess),
                        ..g.clone()
                    }),
                )
            }
        }
    }

    /// Supremum of |q| when finite (None for a singular radial power).
    pub fn sup_abs(&self) -> Option<f64> {
        match self {
            Potential::Constant { value } => Some(value.abs()),
            Potential::RadialPower {
                beta,
                scale,
                r_lo,
                r_hi,
                ..
            } => {
                if r_lo >= r_hi || *scale == 0.0 {
                    Some(0.0)
                } else if *beta == 0.0 {
                    Some(scale.abs())
                } else if *r_lo > 0.0 {
                    Some(scale.abs() * r_lo.powf(-beta))
                } else {
                    None
                }
            }
            Potential::Grid(g) => g
                .values
                .iter()
                .map(|v| v.abs())
                .fold(Some(0.0f64), |acc, v| acc.map(|a| a.max(v))),
        }
    }

    /// Radial singularities of the potential (centers with unbounded values).
    pub fn singular_points(&self) -> Vec<Point> {
        match self {
            Potential::RadialPower {
                center,
                beta,
                scale,
                r_lo,
                ..
            } if *beta > 0.0 && *r_lo == 0.0 && *scale != 0.0 => vec![*center],
            _ => Vec::new(),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Potential::Constant { value } => *value == 0.0,
            Potential::RadialPower { scale, r_lo, r_hi, .. } => *scale == 0.0 || r_lo >= r_hi,
            Potential::Grid(g) => g.values.iter().all(|&v| v == 0.0),
        }
    }
}
