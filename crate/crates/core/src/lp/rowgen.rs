//! Dual simplex with row generation for `min c.y` subject to `a.y >= b`.
//!
//! The basis is a set of `d` rows (`d = dim y`) whose multipliers
//! `lambda = c^T B^-1` stay nonnegative. Each pivot brings in a violated row,
//! taken from the explicit rows when any is violated and from the separation
//! routine otherwise. The leaving row is chosen by the lexicographic ratio
//! rule on `(lambda_j, B^-1[0][j], ..., B^-1[d-1][j]) / alpha_j`, which keeps
//! the perturbed dual objective strictly increasing and so cannot cycle,
//! whatever order rows are generated in.
//!
//! The starting basis is the box `y_j >= -M` (or `-y_j >= -M` when
//! `c_j < 0`). `M` must be large enough that the box never binds at the
//! optimum; a box row left in the final basis is reported as unboundedness.

use num_traits::{One, Signed, Zero};

use super::LpError;
use crate::error::Result;
use crate::rational::Rational;

const PIVOT_LIMIT: usize = 1_000_000;

/// The inequality `coeffs . y >= rhs`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Row {
    pub coeffs: Vec<Rational>,
    pub rhs: Rational,
}

impl Row {
    pub fn new(coeffs: Vec<Rational>, rhs: Rational) -> Self {
        Row { coeffs, rhs }
    }

    /// `rhs - coeffs . y`; positive when violated.
    pub fn violation(&self, y: &[Rational]) -> Rational {
        self.coeffs
            .iter()
            .zip(y)
            .filter(|(a, _)| !a.is_zero())
            .fold(self.rhs.clone(), |acc, (a, v)| acc - a * v)
    }
}

pub trait Separator<T> {
    /// A row violated at `y` (any row will do; the most violated is best), or
    /// `None` when `y` satisfies every implicit row. Only called once `y`
    /// satisfies all explicit rows.
    fn separate(&mut self, y: &[Rational]) -> Result<Option<(Row, T)>>;
}

/// Separator for problems with explicit rows only.
pub struct NoRows;

impl<T> Separator<T> for NoRows {
    fn separate(&mut self, _: &[Rational]) -> Result<Option<(Row, T)>> {
        Ok(None)
    }
}

#[derive(Clone, Debug)]
pub struct RowGenSolution<T> {
    pub y: Vec<Rational>,
    pub value: Rational,
    /// Rows of the optimal basis with their multipliers.
    pub active: Vec<(T, Rational)>,
    pub pivots: usize,
}

struct Slot<T> {
    row: Row,
    tag: Option<T>,
}

pub fn minimize<T: Clone>(
    c: &[Rational],
    bound: &Rational,
    explicit: &[(Row, T)],
    sep: &mut dyn Separator<T>,
) -> Result<RowGenSolution<T>> {
    let d = c.len();
    let mut slots: Vec<Slot<T>> = Vec::with_capacity(d);
    // binv[k][j]: column j belongs to basis slot j
    let mut binv = vec![vec![Rational::zero(); d]; d];
    for j in 0..d {
        let sign = if c[j].is_negative() { -Rational::one() } else { Rational::one() };
        let mut coeffs = vec![Rational::zero(); d];
        coeffs[j] = sign.clone();
        binv[j][j] = sign;
        slots.push(Slot {
            row: Row::new(coeffs, -bound.clone()),
            tag: None,
        });
    }
    let mut pivots = 0usize;
    loop {
        let lambda: Vec<Rational> = (0..d)
            .map(|j| {
                (0..d)
                    .filter(|&k| !c[k].is_zero())
                    .fold(Rational::zero(), |acc, k| acc + &c[k] * &binv[k][j])
            })
            .collect();
        let y: Vec<Rational> = (0..d)
            .map(|k| {
                (0..d)
                    .filter(|&j| !binv[k][j].is_zero())
                    .fold(Rational::zero(), |acc, j| acc + &binv[k][j] * &slots[j].row.rhs)
            })
            .collect();

        let mut entering: Option<(Rational, usize)> = None;
        for (i, (row, _)) in explicit.iter().enumerate() {
            let v = row.violation(&y);
            if v.is_positive() && entering.as_ref().is_none_or(|(best, _)| v > *best) {
                entering = Some((v, i));
            }
        }
        let (row, tag) = match entering {
            Some((_, i)) => explicit[i].clone(),
            None => match sep.separate(&y)? {
                Some(found) => found,
                None => {
                    if slots.iter().any(|s| s.tag.is_none()) {
                        return Err(LpError::Unbounded.into());
                    }
                    let value = c.iter().zip(&y).fold(Rational::zero(), |acc, (a, b)| acc + a * b);
                    let active = slots
                        .into_iter()
                        .zip(lambda)
                        .map(|(s, l)| (s.tag.expect("box rows were checked"), l))
                        .collect();
                    return Ok(RowGenSolution {
                        y,
                        value,
                        active,
                        pivots,
                    });
                }
            },
        };

        let alpha: Vec<Rational> = (0..d)
            .map(|j| {
                (0..d)
                    .filter(|&k| !row.coeffs[k].is_zero())
                    .fold(Rational::zero(), |acc, k| acc + &row.coeffs[k] * &binv[k][j])
            })
            .collect();
        let mut leave: Option<usize> = None;
        for j in (0..d).filter(|&j| alpha[j].is_positive()) {
            let Some(p) = leave else {
                leave = Some(j);
                continue;
            };
            // compare L_j / alpha_j with L_p / alpha_p lexicographically
            let key = |s: usize, t: usize| if t == 0 { &lambda[s] } else { &binv[t - 1][s] };
            for t in 0..=d {
                let lhs = key(j, t) * &alpha[p];
                let rhs = key(p, t) * &alpha[j];
                if lhs != rhs {
                    if lhs < rhs {
                        leave = Some(j);
                    }
                    break;
                }
            }
        }
        let p = leave.ok_or(LpError::Infeasible)?;

        let ap = alpha[p].clone();
        for k in 0..d {
            binv[k][p] /= &ap;
        }
        for j in (0..d).filter(|&j| j != p && !alpha[j].is_zero()) {
            for k in 0..d {
                if !binv[k][p].is_zero() {
                    let t = &alpha[j] * &binv[k][p];
                    binv[k][j] -= t;
                }
            }
        }
        slots[p] = Slot { row, tag: Some(tag) };
        pivots += 1;
        if pivots > PIVOT_LIMIT {
            return Err(LpError::IterationLimit(pivots).into());
        }
    }
}
