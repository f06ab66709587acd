//! Chebyshev grids, barycentric interpolation and coefficient transforms.

use crate::C64;
use std::f64::consts::PI;

/// Chebyshev–Lobatto grid of degree `n` on `[a, b]`.
#[derive(Debug, Clone)]
pub struct ChebGrid {
    pub a: f64,
    pub b: f64,
    pub nodes: Vec<f64>,
    bary: Vec<f64>,
}

impl ChebGrid {
    pub fn new(a: f64, b: f64, n: usize) -> Self {
        let nodes = (0..=n)
            .map(|j| {
                let x = -(PI * j as f64 / n as f64).cos();
                0.5 * (a + b) + 0.5 * (b - a) * x
            })
            .collect();
        let bary = (0..=n)
            .map(|j| {
                let s = if j % 2 == 0 { 1.0 } else { -1.0 };
                if j == 0 || j == n {
                    0.5 * s
                } else {
                    s
                }
            })
            .collect();
        Self { a, b, nodes, bary }
    }

    pub fn degree(&self) -> usize {
        self.nodes.len() - 1
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Row `r` with `p(x) = sum_j r_j p(x_j)` for every polynomial of the grid degree.
    pub fn interp_row(&self, x: f64) -> Vec<f64> {
        let mut row = vec![0.0; self.nodes.len()];
        if let Some(j) = self.nodes.iter().position(|&t| t == x) {
            row[j] = 1.0;
            return row;
        }
        let mut total = 0.0;
        for (j, (&t, &w)) in self.nodes.iter().zip(&self.bary).enumerate() {
            let r = w / (x - t);
            row[j] = r;
            total += r;
        }
        for r in &mut row {
            *r /= total;
        }
        row
    }

    /// Evaluate the interpolant of nodal `values` at `x`.
    pub fn interpolate(&self, values: &[C64], x: f64) -> C64 {
        self.interp_row(x)
            .iter()
            .zip(values)
            .map(|(r, v)| *r * v)
            .sum()
    }

    /// Chebyshev coefficients of the interpolant of nodal `values`.
    pub fn coefficients(&self, values: &[C64]) -> Vec<C64> {
        let n = self.degree();
        let nf = n as f64;
        (0..=n)
            .map(|k| {
                let mut acc = C64::new(0.0, 0.0);
                for (j, v) in values.iter().enumerate() {
                    // node j sits at -cos(pi j/n) = cos(pi (n-j)/n)
                    let w = if j == 0 || j == n { 0.5 } else { 1.0 };
                    acc += w * v * (PI * k as f64 * (n - j) as f64 / nf).cos();
                }
                let scale = if k == 0 || k == n { 1.0 / nf } else { 2.0 / nf };
                acc * scale
            })
            .collect()
    }
}

/// Chebyshev–Gauss nodes (interior) of order `n` on `[a, b]`.
pub fn gauss_nodes(a: f64, b: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|j| {
            let x = (PI * (j as f64 + 0.5) / n as f64).cos();
            0.5 * (a + b) + 0.5 * (b - a) * x
        })
        .collect()
}

