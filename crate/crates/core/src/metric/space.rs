use std::fmt;

use crate::error::{Error, Result};

/// Relative tolerance used for triangle-inequality and symmetry checks.
pub const METRIC_TOLERANCE: f64 = 1e-9;

/// A finite metric space on points `0..n`.
#[derive(Debug, Clone, PartialEq)]
pub enum MetricSpace {
    /// Symmetric matrix of pairwise distances.
    Explicit { matrix: Vec<Vec<f64>> },
    /// Coordinate vectors of uniform dimension with Euclidean distance.
    Euclidean { points: Vec<Vec<f64>> },
}

/// A single defect found by [`validate_metric`].
#[derive(Debug, Clone, PartialEq)]
pub enum MetricViolation {
    NonFinite {
        p: usize,
        q: usize,
    },
    Negative {
        p: usize,
        q: usize,
        value: f64,
    },
    NonZeroDiagonal {
        p: usize,
        value: f64,
    },
    Asymmetric {
        p: usize,
        q: usize,
    },
    /// `d(p, r) > d(p, via) + d(via, r)` beyond tolerance.
    Triangle {
        p: usize,
        r: usize,
        via: usize,
    },
}

impl fmt::Display for MetricViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MetricViolation::NonFinite { p, q } => write!(f, "d({p},{q}) is not finite"),
            MetricViolation::Negative { p, q, value } => {
                write!(f, "d({p},{q}) = {value} is negative")
            }
            MetricViolation::NonZeroDiagonal { p, value } => {
                write!(f, "d({p},{p}) = {value} is not zero")
            }
            MetricViolation::Asymmetric { p, q } => write!(f, "d({p},{q}) != d({q},{p})"),
            MetricViolation::Triangle { p, r, via } => {
                write!(f, "triangle inequality fails for d({p},{r}) via {via}")
            }
        }
    }
}

impl MetricSpace {
    /// Builds an explicit space. Only the shape is checked here; metric axioms are
    /// reported by [`validate_metric`].
    pub fn explicit(matrix: Vec<Vec<f64>>) -> Result<Self> {
        let n = matrix.len();
        if let Some((row, r)) = matrix.iter().enumerate().find(|(_, r)| r.len() != n) {
            return Err(Error::Input(format!(
                "distance matrix row {row} has {} entries, expected {n}",
                r.len()
            )));
        }
        Ok(MetricSpace::Explicit { matrix })
    }

    pub fn euclidean(points: Vec<Vec<f64>>) -> Result<Self> {
        if let Some(first) = points.first() {
            let dim = first.len();
            for (i, p) in points.iter().enumerate() {
                if p.len() != dim {
                    return Err(Error::Input(format!(
                        "point {i} has dimension {}, expected {dim}",
                        p.len()
                    )));
                }
                if p.iter().any(|c| !c.is_finite()) {
                    return Err(Error::Input(format!(
                        "point {i} has a non-finite coordinate"
                    )));
                }
            }
        }
        Ok(MetricSpace::Euclidean { points })
    }

    /// Points on the real line.
    pub fn line(xs: &[f64]) -> Result<Self> {
        Self::euclidean(xs.iter().map(|&x| vec![x]).collect())
    }

    pub fn len(&self) -> usize {
        match self {
            MetricSpace::Explicit { matrix } => matrix.len(),
            MetricSpace::Euclidean { points } => points.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn contains(&self, p: usize) -> bool {
        p < self.len()
    }

    pub fn distance(&self, p: usize, q: usize) -> Result<f64> {
        let n = self.len();
        if p >= n || q >= n {
            return Err(Error::Input(format!(
                "point pair ({p},{q}) out of range for a space of {n} points"
            )));
        }
        Ok(self.d(p, q))
    }

    /// Unchecked distance; panics on out-of-range identifiers.
    pub fn d(&self, p: usize, q: usize) -> f64 {
        match self {
            MetricSpace::Explicit { matrix } => matrix[p][q],
            MetricSpace::Euclidean { points } => {
                if p == q {
                    return 0.0;
                }
                points[p]
                    .iter()
                    .zip(&points[q])
                    .map(|(a, b)| (a - b) * (a - b))
                    .sum::<f64>()
                    .sqrt()
            }
        }
    }
}

/// Lists every violated metric axiom. Euclidean spaces are valid by construction.
pub fn validate_metric(space: &MetricSpace) -> Vec<MetricViolation> {
    let matrix = match space {
        MetricSpace::Euclidean { .. } => return Vec::new(),
        MetricSpace::Explicit { matrix } => matrix,
    };
    let n = matrix.len();
    let mut out = Vec::new();
    let mut entries_ok = true;
    for (p, row) in matrix.iter().enumerate() {
        for (q, &v) in row.iter().enumerate() {
            if !v.is_finite() {
                out.push(MetricViolation::NonFinite { p, q });
                entries_ok = false;
            } else if v < 0.0 {
                out.push(MetricViolation::Negative { p, q, value: v });
                entries_ok = false;
            } else if p == q && v != 0.0 {
                out.push(MetricViolation::NonZeroDiagonal { p, value: v });
            } else if p < q && !close(v, matrix[q][p]) {
                out.push(MetricViolation::Asymmetric { p, q });
            }
        }
    }
    if !entries_ok {
        return out;
    }
    for p in 0..n {
        for r in p + 1..n {
            let direct = matrix[p][r];
            for (via, through) in matrix.iter().enumerate() {
                if via == p || via == r {
                    continue;
                }
                let detour = matrix[p][via] + through[r];
                if direct - detour > METRIC_TOLERANCE * direct.max(detour) {
                    out.push(MetricViolation::Triangle { p, r, via });
                }
            }
        }
    }
    out
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= METRIC_TOLERANCE * a.abs().max(b.abs())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn explicit_lookup() {
        let s = MetricSpace::explicit(vec![
            vec![0.0, 2.0, 5.0],
            vec![2.0, 0.0, 3.0],
            vec![5.0, 3.0, 0.0],
        ])
        .unwrap();
        assert_eq!(s.distance(0, 1).unwrap(), 2.0);
        assert_eq!(s.distance(2, 2).unwrap(), 0.0);
        assert!(s.distance(0, 3).is_err());
    }

    #[test]
    fn euclidean_three_four_five() {
        let s = MetricSpace::euclidean(vec![vec![0.0, 0.0], vec![3.0, 4.0]]).unwrap();
        assert_eq!(s.distance(0, 1).unwrap(), 5.0);
        assert_eq!(s.distance(1, 0).unwrap(), 5.0);
        assert_eq!(s.distance(1, 1).unwrap(), 0.0);
    }

    #[test]
    fn ragged_shapes_rejected() {
        assert!(MetricSpace::explicit(vec![vec![0.0, 1.0], vec![1.0]]).is_err());
        assert!(MetricSpace::euclidean(vec![vec![0.0, 1.0], vec![1.0]]).is_err());
    }

    #[test]
    fn single_triangle_violation() {
        let s = MetricSpace::explicit(vec![
            vec![0.0, 1.0, 5.0],
            vec![1.0, 0.0, 1.0],
            vec![5.0, 1.0, 0.0],
        ])
        .unwrap();
        assert_eq!(
            validate_metric(&s),
            vec![MetricViolation::Triangle { p: 0, r: 2, via: 1 }]
        );
    }

    #[test]
    fn trivial_spaces_are_valid() {
        let e = MetricSpace::euclidean(vec![vec![0.3], vec![0.9], vec![-2.0]]).unwrap();
        assert!(validate_metric(&e).is_empty());
        let one = MetricSpace::explicit(vec![vec![0.0]]).unwrap();
        assert!(validate_metric(&one).is_empty());
    }

    #[test]
    fn asymmetry_and_negatives_reported() {
        let s = MetricSpace::explicit(vec![vec![0.0, 1.0], vec![2.0, 0.0]]).unwrap();
        assert_eq!(
            validate_metric(&s),
            vec![MetricViolation::Asymmetric { p: 0, q: 1 }]
        );
        let s = MetricSpace::explicit(vec![vec![0.0, -1.0], vec![-1.0, 0.0]]).unwrap();
        assert_eq!(validate_metric(&s).len(), 2);
    }
}
