use crate::error::{Error, Result};

/// Partition `a = x_0 < x_1 < ... < x_n = b` with `n >= 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct Division {
    points: Vec<f64>,
}

impl Division {
    pub fn new(points: Vec<f64>) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::BadDivision("need at least two points".into()));
        }
        if let Some(x) = points.iter().find(|x| !x.is_finite()) {
            return Err(Error::BadDivision(format!("non-finite point {x}")));
        }
        if let Some(w) = points.windows(2).find(|w| w[0] >= w[1]) {
            return Err(Error::BadDivision(format!(
                "points not strictly increasing at {} >= {}",
                w[0], w[1]
            )));
        }
        Ok(Division { points })
    }

    /// `n + 1` equally spaced points with exact endpoints.
    pub fn uniform(a: f64, b: f64, n: usize) -> Result<Self> {
        if !(a.is_finite() && b.is_finite() && a < b) {
            return Err(Error::BadInterval { a, b });
        }
        if n == 0 {
            return Err(Error::BadDivision("n must be at least 1".into()));
        }
        let h = (b - a) / n as f64;
        let mut points: Vec<f64> = (0..n).map(|i| a + h * i as f64).collect();
        points.push(b);
        Division::new(points)
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    /// Number of subintervals.
    pub fn len(&self) -> usize {
        self.points.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn a(&self) -> f64 {
        self.points[0]
    }

    pub fn b(&self) -> f64 {
        self.points[self.points.len() - 1]
    }

    /// Subintervals `(x_i, x_{i+1})` in order.
    pub fn intervals(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.points.windows(2).map(|w| (w[0], w[1]))
    }
}
