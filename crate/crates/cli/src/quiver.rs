//! One-step displacement fields for two-state dynamics models.
//!
//! For a model whose equality block encodes `x(k+1) = A x(k) + B u(k)`, the
//! autonomous displacement at a grid point `x` is `(A - I) x`. The output is
//! data for external plotting: CSV rows `(x1, x2, dx1, dx2, kind)` covering
//! the sampled field plus the corners of the state constraint box.

use anyhow::{anyhow, bail, Result};
use bsys_core::rational::parse_rational;
use bsys_core::{rat, BehavioralSystem, Rational};
use num_traits::{One, Zero};

pub struct QuiverData {
    pub field: Vec<[Rational; 4]>,
    pub corners: Vec<[Rational; 4]>,
}

/// Recovers the 2x2 state matrix from the dynamics rows `[s*I - A, -B, ...]`.
pub fn state_matrix(sys: &BehavioralSystem) -> Result<[[Rational; 2]; 2]> {
    let part = sys
        .equality()
        .ok_or_else(|| anyhow!("quiver needs a model with an equality (dynamics) block"))?;
    let r = &part.matrix;
    if r.rows() < 2 || r.cols() < 2 {
        bail!("quiver needs a two-state dynamics block");
    }
    // The first two rows must read s*I - A on the state columns and have no
    // shifted terms elsewhere.
    for row in 0..2 {
        for col in 0..r.cols() {
            let entry = r.entry(row, col);
            let advance = entry.coeff(1);
            let expected = if row == col { Rational::one() } else { Rational::zero() };
            if advance != expected {
                bail!("dynamics rows do not have the shape s*I - A over two states");
            }
            if entry
                .terms()
                .any(|(degree, _)| degree != 0 && degree != 1)
            {
                bail!("dynamics rows mix in shifts beyond one step");
            }
        }
    }
    Ok([
        [-r.entry(0, 0).coeff(0), -r.entry(0, 1).coeff(0)],
        [-r.entry(1, 0).coeff(0), -r.entry(1, 1).coeff(0)],
    ])
}

/// Axis-aligned bounds on the two state components, read off inequality rows
/// that touch exactly one state with coefficient +-1.
pub fn state_box(sys: &BehavioralSystem) -> Option<[(Rational, Rational); 2]> {
    let part = sys.inequality()?;
    let h = &part.matrix;
    let mut lower = [None, None];
    let mut upper = [None, None];
    for row in 0..h.rows() {
        let mut touched: Option<(usize, Rational)> = None;
        let mut clean = true;
        for col in 0..h.cols() {
            let entry = h.entry(row, col);
            if entry.is_zero() {
                continue;
            }
            let constant = entry.coeff(0);
            if entry.terms().count() != 1 || constant.is_zero() {
                clean = false;
                break;
            }
            if touched.is_some() {
                clean = false;
                break;
            }
            touched = Some((col, constant));
        }
        let Some((col, coeff)) = touched else { continue };
        if !clean || col > 1 {
            continue;
        }
        let bound = part.rhs.value_at(0)[row].clone();
        if coeff == rat(1) {
            upper[col] = Some(bound);
        } else if coeff == rat(-1) {
            lower[col] = Some(-bound);
        }
    }
    match (lower, upper) {
        ([Some(l1), Some(l2)], [Some(u1), Some(u2)]) => Some([(l1, u1), (l2, u2)]),
        _ => None,
    }
}

#[derive(Clone, Debug)]
pub struct GridAxis {
    pub lo: Rational,
    pub hi: Rational,
    pub steps: usize,
}

/// Grid specification `lo:hi:steps,lo:hi:steps` with rational endpoints.
pub fn parse_grid(text: &str) -> Result<[GridAxis; 2]> {
    let axes: Vec<&str> = text.split(',').collect();
    if axes.len() != 2 {
        bail!("grid spec needs two axes, e.g. `1:5:5,-5:5:5`");
    }
    let mut parsed = Vec::with_capacity(2);
    for axis in axes {
        let parts: Vec<&str> = axis.split(':').collect();
        if parts.len() != 3 {
            bail!("axis spec must be lo:hi:steps");
        }
        let lo = parse_rational(parts[0]).map_err(|e| anyhow!("{e}"))?;
        let hi = parse_rational(parts[1]).map_err(|e| anyhow!("{e}"))?;
        let steps: usize = parts[2].parse().map_err(|_| anyhow!("invalid step count"))?;
        if steps < 2 || lo >= hi {
            bail!("axis needs lo < hi and at least two steps");
        }
        parsed.push(GridAxis { lo, hi, steps });
    }
    Ok([parsed[0].clone(), parsed[1].clone()])
}

fn axis_points(axis: &GridAxis) -> Vec<Rational> {
    let denom = rat((axis.steps - 1) as i64);
    (0..axis.steps)
        .map(|i| &axis.lo + (&axis.hi - &axis.lo) * rat(i as i64) / &denom)
        .collect()
}

pub fn displacement(a: &[[Rational; 2]; 2], x: &[Rational; 2]) -> [Rational; 2] {
    [
        &a[0][0] * &x[0] + &a[0][1] * &x[1] - &x[0],
        &a[1][0] * &x[0] + &a[1][1] * &x[1] - &x[1],
    ]
}

pub fn quiver(sys: &BehavioralSystem, grid: Option<[GridAxis; 2]>) -> Result<QuiverData> {
    let a = state_matrix(sys)?;
    let state_box = state_box(sys);
    let grid = match grid {
        Some(grid) => grid,
        None => {
            let bounds = state_box
                .clone()
                .ok_or_else(|| anyhow!("no state box in the model; pass --grid"))?;
            [
                GridAxis { lo: bounds[0].0.clone(), hi: bounds[0].1.clone(), steps: 5 },
                GridAxis { lo: bounds[1].0.clone(), hi: bounds[1].1.clone(), steps: 5 },
            ]
        }
    };
    let mut field = Vec::new();
    for x1 in axis_points(&grid[0]) {
        for x2 in axis_points(&grid[1]) {
            let x = [x1.clone(), x2.clone()];
            let d = displacement(&a, &x);
            field.push([x[0].clone(), x[1].clone(), d[0].clone(), d[1].clone()]);
        }
    }
    let mut corners = Vec::new();
    if let Some(bounds) = state_box {
        for x1 in [&bounds[0].0, &bounds[0].1] {
            for x2 in [&bounds[1].0, &bounds[1].1] {
                let x = [x1.clone(), x2.clone()];
                let d = displacement(&a, &x);
                corners.push([x[0].clone(), x[1].clone(), d[0].clone(), d[1].clone()]);
            }
        }
    }
    Ok(QuiverData { field, corners })
}

pub fn write_quiver(data: &QuiverData) -> String {
    let mut out = String::from("x1,x2,dx1,dx2,kind\n");
    for row in &data.field {
        out.push_str(&format!("{},{},{},{},field\n", row[0], row[1], row[2], row[3]));
    }
    for row in &data.corners {
        out.push_str(&format!("{},{},{},{},corner\n", row[0], row[1], row[2], row[3]));
    }
    out
}
