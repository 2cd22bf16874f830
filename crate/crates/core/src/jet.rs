//! Exact partial derivatives of component functions via nested duals, plus a
//! central-difference gradient used only as an independent test oracle.

use crate::error::{GeometryError, Result};
use crate::scalar::{Dual, Scalar};

/// A scalar function of coordinates that can be evaluated over any [`Scalar`].
pub trait ScalarField {
    fn eval<S: Scalar>(&self, x: &[S]) -> Result<S>;
}

/// Value and partial derivatives of a scalar field at a point.
///
/// Second and third partials are stored densely (`dim²`, `dim³`, row-major)
/// and are symmetric under index permutation by construction: each distinct
/// multiset of indices is evaluated once and mirrored.
#[derive(Clone, Debug, PartialEq)]
pub struct JetScalar {
    pub value: f64,
    pub partials: Vec<f64>,
    pub second: Option<Vec<f64>>,
    pub third: Option<Vec<f64>>,
}

impl JetScalar {
    pub fn dim(&self) -> usize {
        self.partials.len()
    }

    pub fn second(&self, i: usize, j: usize) -> Option<f64> {
        let n = self.dim();
        self.second.as_ref().map(|s| s[i * n + j])
    }

    pub fn third(&self, i: usize, j: usize, k: usize) -> Option<f64> {
        let n = self.dim();
        self.third.as_ref().map(|s| s[(i * n + j) * n + k])
    }
}

fn finite_or_domain<S: Scalar>(v: S) -> Result<S> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(GeometryError::DomainViolation(
            "component function is not finite at this point".into(),
        ))
    }
}

fn seeded1(x: &[f64], a: usize) -> Vec<Dual<f64>> {
    crate::scalar::seed_axis(x, a)
}

fn seeded2(x: &[f64], a: usize, b: usize) -> Vec<Dual<Dual<f64>>> {
    x.iter()
        .enumerate()
        .map(|(m, &xm)| {
            let inner = Dual::new(xm, if m == b { 1.0 } else { 0.0 });
            let outer_eps = Dual::new(if m == a { 1.0 } else { 0.0 }, 0.0);
            Dual::new(inner, outer_eps)
        })
        .collect()
}

fn seeded3(x: &[f64], a: usize, b: usize, c: usize) -> Vec<Dual<Dual<Dual<f64>>>> {
    x.iter()
        .enumerate()
        .map(|(m, &xm)| {
            let d = |k: usize| if m == k { 1.0 } else { 0.0 };
            let lvl1 = Dual::new(xm, d(c));
            let lvl2 = Dual::new(lvl1, Dual::new(d(b), 0.0));
            Dual::new(lvl2, Dual::new(Dual::new(d(a), 0.0), Dual::lift(0.0)))
        })
        .collect()
}

/// Evaluate `field` at `point` together with all partials up to `order` (1..=3).
pub fn jet_eval<F: ScalarField>(field: &F, point: &[f64], order: usize) -> Result<JetScalar> {
    if !(1..=3).contains(&order) {
        return Err(GeometryError::Precondition(format!(
            "jet order must be 1..=3, got {order}"
        )));
    }
    let n = point.len();
    let value = finite_or_domain(field.eval(point)?)?;

    let mut partials = vec![0.0; n];
    for (a, slot) in partials.iter_mut().enumerate() {
        *slot = finite_or_domain(field.eval(&seeded1(point, a))?)?.eps;
    }

    let second = if order >= 2 {
        let mut s = vec![0.0; n * n];
        for a in 0..n {
            for b in a..n {
                let r = finite_or_domain(field.eval(&seeded2(point, a, b))?)?;
                s[a * n + b] = r.eps.eps;
                s[b * n + a] = r.eps.eps;
            }
        }
        Some(s)
    } else {
        None
    };

    let third = if order >= 3 {
        let mut s = vec![0.0; n * n * n];
        for a in 0..n {
            for b in a..n {
                for c in b..n {
                    let r = finite_or_domain(field.eval(&seeded3(point, a, b, c))?)?;
                    let v = r.eps.eps.eps;
                    for (i, j, k) in [(a, b, c), (a, c, b), (b, a, c), (b, c, a), (c, a, b), (c, b, a)] {
                        s[(i * n + j) * n + k] = v;
                    }
                }
            }
        }
        Some(s)
    } else {
        None
    };

    Ok(JetScalar {
        value,
        partials,
        second,
        third,
    })
}

/// Central-difference gradient with spacing `step`. Truncation error is
/// `O(step²)`.
pub fn fd_gradient<F: ScalarField>(field: &F, point: &[f64], step: f64) -> Result<Vec<f64>> {
    if !(step > 0.0) {
        return Err(GeometryError::Precondition(format!(
            "finite-difference step must be positive, got {step}"
        )));
    }
    let mut x = point.to_vec();
    let mut grad = Vec::with_capacity(point.len());
    for k in 0..point.len() {
        x[k] = point[k] + step;
        let fp = finite_or_domain(field.eval(&x)?)?;
        x[k] = point[k] - step;
        let fm = finite_or_domain(field.eval(&x)?)?;
        x[k] = point[k];
        grad.push((fp - fm) / (2.0 * step));
    }
    Ok(grad)
}
