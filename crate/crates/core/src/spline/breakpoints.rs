use serde::Serialize;

use crate::error::{Error, Result};

/// A strictly increasing partition `a = ξ_0 < ξ_1 < ... < ξ_{N+1} = b`.
///
/// Elements are half open, `I_j = [ξ_j, ξ_{j+1})`, except the last one
/// which also contains `b`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Breakpoints {
    points: Vec<f64>,
}

impl Breakpoints {
    pub fn new(points: Vec<f64>) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::Breakpoints(format!(
                "need at least 2 points, got {}",
                points.len()
            )));
        }
        if let Some(bad) = points.iter().find(|x| !x.is_finite()) {
            return Err(Error::Breakpoints(format!("non-finite point {bad}")));
        }
        for (j, w) in points.windows(2).enumerate() {
            if w[1] <= w[0] {
                return Err(Error::Breakpoints(format!(
                    "not strictly increasing at index {}: {} >= {}",
                    j + 1,
                    w[0],
                    w[1]
                )));
            }
        }
        Ok(Self { points })
    }

    /// Uniform partition of `[a, b]` into `elements` pieces.
    pub fn uniform(a: f64, b: f64, elements: usize) -> Result<Self> {
        if elements == 0 {
            return Err(Error::Breakpoints("need at least one element".into()));
        }
        let len = b - a;
        let points = (0..=elements)
            .map(|j| {
                if j == elements {
                    b
                } else {
                    a + len * j as f64 / elements as f64
                }
            })
            .collect();
        Self::new(points)
    }

    /// Graded partition `x_j = a + (b-a) (j/n)^grading`, refined towards `a`
    /// for `grading > 1`.
    pub fn graded(a: f64, b: f64, elements: usize, grading: f64) -> Result<Self> {
        if !(grading > 0.0) {
            return Err(Error::Breakpoints(format!(
                "grading exponent must be positive, got {grading}"
            )));
        }
        if elements == 0 {
            return Err(Error::Breakpoints("need at least one element".into()));
        }
        let points = (0..=elements)
            .map(|j| {
                if j == elements {
                    b
                } else {
                    a + (b - a) * (j as f64 / elements as f64).powf(grading)
                }
            })
            .collect();
        Self::new(points)
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn a(&self) -> f64 {
        self.points[0]
    }

    pub fn b(&self) -> f64 {
        *self.points.last().unwrap()
    }

    pub fn length(&self) -> f64 {
        self.b() - self.a()
    }

    /// Number of interior breakpoints `N`.
    pub fn num_interior(&self) -> usize {
        self.points.len() - 2
    }

    /// Number of elements `N + 1`.
    pub fn num_elements(&self) -> usize {
        self.points.len() - 1
    }

    pub fn element(&self, j: usize) -> (f64, f64) {
        (self.points[j], self.points[j + 1])
    }

    pub fn elements(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.points.windows(2).map(|w| (w[0], w[1]))
    }

    /// Largest element length.
    pub fn h(&self) -> f64 {
        self.elements().map(|(l, r)| r - l).fold(0.0, f64::max)
    }

    /// Smallest element length.
    pub fn h_min(&self) -> f64 {
        self.elements().map(|(l, r)| r - l).fold(f64::INFINITY, f64::min)
    }

    pub fn contains(&self, x: f64) -> bool {
        x >= self.a() && x <= self.b()
    }

    /// Index of the element containing `x`: right-continuous at interior
    /// breakpoints, with `b` assigned to the last element.
    pub fn element_of(&self, x: f64) -> Result<usize> {
        if !self.contains(x) {
            return Err(Error::OutOfDomain {
                x,
                a: self.a(),
                b: self.b(),
            });
        }
        let last = self.num_elements() - 1;
        // first index with points[i] > x, minus one
        let j = self.points.partition_point(|&p| p <= x).saturating_sub(1);
        Ok(j.min(last))
    }

    /// True when every point of `self` is also a point of `other`.
    pub fn is_subset_of(&self, other: &Breakpoints) -> bool {
        let tol = 1e-14 * self.length().abs().max(1.0);
        self.points
            .iter()
            .all(|x| other.points.iter().any(|y| (x - y).abs() <= tol))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_non_increasing() {
        assert!(Breakpoints::new(vec![0.0, 0.5, 0.5, 1.0]).is_err());
        assert!(Breakpoints::new(vec![0.0]).is_err());
        assert!(Breakpoints::new(vec![1.0, 0.0]).is_err());
        assert!(Breakpoints::new(vec![0.0, f64::NAN]).is_err());
    }

    #[test]
    fn spacing() {
        let xi = Breakpoints::new(vec![0.0, 0.1, 0.5, 1.0]).unwrap();
        assert!((xi.h() - 0.5).abs() < 1e-15);
        assert!((xi.h_min() - 0.1).abs() < 1e-15);
        assert_eq!(xi.num_interior(), 2);
    }

    #[test]
    fn element_lookup_is_half_open() {
        let xi = Breakpoints::uniform(0.0, 1.0, 4).unwrap();
        assert_eq!(xi.element_of(0.0).unwrap(), 0);
        assert_eq!(xi.element_of(0.25).unwrap(), 1);
        assert_eq!(xi.element_of(0.2).unwrap(), 0);
        assert_eq!(xi.element_of(1.0).unwrap(), 3);
        assert!(xi.element_of(1.0 + 1e-9).is_err());
    }

    #[test]
    fn uniform_hits_endpoints_exactly() {
        let xi = Breakpoints::uniform(-1.0, 3.0, 7).unwrap();
        assert_eq!(xi.a(), -1.0);
        assert_eq!(xi.b(), 3.0);
        assert_eq!(xi.num_elements(), 7);
    }
}
