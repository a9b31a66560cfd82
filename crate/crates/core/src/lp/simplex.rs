//! Revised primal simplex in standard form `min c.z, A z = b, z >= 0`.
//!
//! Pivoting follows Bland's rule: the entering column is the lowest-index
//! column with negative reduced cost, and ratio-test ties leave by the
//! lowest basic column index. Columns may be supplied lazily through
//! [`ColumnSource`], so a problem with many columns can price them without
//! materializing the matrix.

use num_traits::{One, Signed, Zero};

use super::LpError;
use crate::rational::Rational;

const PIVOT_LIMIT: usize = 1_000_000;

pub trait ColumnSource {
    fn rows(&self) -> usize;
    fn columns(&self) -> usize;
    fn column(&self, j: usize) -> Vec<Rational>;
    fn cost(&self, j: usize) -> Rational;
    fn rhs(&self) -> Vec<Rational>;

    /// Lowest-index column with `cost(j) - pi . column(j) < 0`.
    fn entering(&self, pi: &[Rational]) -> Option<usize> {
        (0..self.columns()).find(|&j| reduced_cost(self.cost(j), pi, &self.column(j)).is_negative())
    }
}

fn reduced_cost(cost: Rational, pi: &[Rational], col: &[Rational]) -> Rational {
    pi.iter()
        .zip(col)
        .filter(|(_, a)| !a.is_zero())
        .fold(cost, |acc, (p, a)| acc - p * a)
}

/// Simplex state: basic column indices, explicit basis inverse, basic values.
pub struct Simplex<'a, S: ColumnSource + ?Sized> {
    src: &'a S,
    basis: Vec<usize>,
    binv: Vec<Vec<Rational>>,
    xb: Vec<Rational>,
    pivots: usize,
}

impl<'a, S: ColumnSource + ?Sized> Simplex<'a, S> {
    /// Starts from the given basic columns, which must be nonsingular and
    /// primal feasible.
    pub fn with_basis(src: &'a S, basis: Vec<usize>) -> Result<Self, LpError> {
        let m = src.rows();
        if basis.len() != m {
            return Err(LpError::InvalidBasis(format!("{} columns for {m} rows", basis.len())));
        }
        let cols: Vec<Vec<Rational>> = basis.iter().map(|&j| src.column(j)).collect();
        // B[r][k] = cols[k][r]
        let b: Vec<Vec<Rational>> = (0..m).map(|r| (0..m).map(|k| cols[k][r].clone()).collect()).collect();
        let binv = invert(b).ok_or_else(|| LpError::InvalidBasis("singular basis".into()))?;
        let rhs = src.rhs();
        let xb: Vec<Rational> = binv.iter().map(|row| dot(row, &rhs)).collect();
        if xb.iter().any(Signed::is_negative) {
            return Err(LpError::InvalidBasis("basis is not primal feasible".into()));
        }
        Ok(Simplex {
            src,
            basis,
            binv,
            xb,
            pivots: 0,
        })
    }

    pub fn basis(&self) -> &[usize] {
        &self.basis
    }

    pub fn basic_values(&self) -> &[Rational] {
        &self.xb
    }

    pub fn pivots(&self) -> usize {
        self.pivots
    }

    /// Simplex multipliers `pi = c_B B^-1`.
    pub fn duals(&self) -> Vec<Rational> {
        let m = self.basis.len();
        let costs: Vec<Rational> = self.basis.iter().map(|&j| self.src.cost(j)).collect();
        (0..m)
            .map(|k| {
                costs
                    .iter()
                    .zip(&self.binv)
                    .filter(|(c, _)| !c.is_zero())
                    .fold(Rational::zero(), |acc, (c, row)| acc + c * &row[k])
            })
            .collect()
    }

    pub fn objective(&self) -> Rational {
        self.basis
            .iter()
            .zip(&self.xb)
            .fold(Rational::zero(), |acc, (&j, v)| acc + self.src.cost(j) * v)
    }

    /// Value of every column, zero for nonbasic ones.
    pub fn primal(&self) -> Vec<Rational> {
        let mut z = vec![Rational::zero(); self.src.columns()];
        for (&j, v) in self.basis.iter().zip(&self.xb) {
            if j < z.len() {
                z[j] = v.clone();
            }
        }
        z
    }

    /// Pivots to optimality.
    pub fn run(&mut self) -> Result<(), LpError> {
        loop {
            let pi = self.duals();
            let Some(j) = self.src.entering(&pi) else {
                return Ok(());
            };
            let col = self.src.column(j);
            let d: Vec<Rational> = self.binv.iter().map(|row| dot(row, &col)).collect();
            let r = self.leaving(&d).ok_or(LpError::Unbounded)?;
            self.pivot(r, j, &d);
            if self.pivots > PIVOT_LIMIT {
                return Err(LpError::IterationLimit(self.pivots));
            }
        }
    }

    fn leaving(&self, d: &[Rational]) -> Option<usize> {
        let mut best: Option<(usize, Rational)> = None;
        for (r, dr) in d.iter().enumerate() {
            if !dr.is_positive() {
                continue;
            }
            let ratio = &self.xb[r] / dr;
            let better = match &best {
                None => true,
                Some((b, br)) => ratio < *br || (ratio == *br && self.basis[r] < self.basis[*b]),
            };
            if better {
                best = Some((r, ratio));
            }
        }
        best.map(|(r, _)| r)
    }

    fn pivot(&mut self, r: usize, j: usize, d: &[Rational]) {
        let m = self.basis.len();
        let dr = d[r].clone();
        for v in self.binv[r].iter_mut() {
            *v /= &dr;
        }
        self.xb[r] /= &dr;
        let pivot_row = self.binv[r].clone();
        let pivot_x = self.xb[r].clone();
        for i in 0..m {
            if i == r || d[i].is_zero() {
                continue;
            }
            let f = &d[i];
            for (v, p) in self.binv[i].iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *v -= f * p;
                }
            }
            self.xb[i] -= f * &pivot_x;
        }
        self.basis[r] = j;
        self.pivots += 1;
    }

    fn row_times_column(&self, r: usize, j: usize) -> Rational {
        dot(&self.binv[r], &self.src.column(j))
    }
}

fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter()
        .zip(b)
        .filter(|(x, y)| !x.is_zero() && !y.is_zero())
        .fold(Rational::zero(), |acc, (x, y)| acc + x * y)
}

/// Gauss-Jordan inverse; `None` when singular.
pub(crate) fn invert(mut a: Vec<Vec<Rational>>) -> Option<Vec<Vec<Rational>>> {
    let m = a.len();
    let mut inv: Vec<Vec<Rational>> = (0..m)
        .map(|i| (0..m).map(|k| if i == k { Rational::one() } else { Rational::zero() }).collect())
        .collect();
    for c in 0..m {
        let p = (c..m).find(|&r| !a[r][c].is_zero())?;
        a.swap(c, p);
        inv.swap(c, p);
        let piv = a[c][c].clone();
        for k in 0..m {
            a[c][k] /= &piv;
            inv[c][k] /= &piv;
        }
        for r in 0..m {
            if r == c || a[r][c].is_zero() {
                continue;
            }
            let f = a[r][c].clone();
            for k in 0..m {
                let t = &f * &a[c][k];
                a[r][k] -= t;
                let t = &f * &inv[c][k];
                inv[r][k] -= t;
            }
        }
    }
    Some(inv)
}

/// `src` plus one artificial identity column per row.
struct Augmented<'a, S: ColumnSource + ?Sized> {
    src: &'a S,
    phase_one: bool,
}

impl<S: ColumnSource + ?Sized> ColumnSource for Augmented<'_, S> {
    fn rows(&self) -> usize {
        self.src.rows()
    }

    fn columns(&self) -> usize {
        self.src.columns() + self.src.rows()
    }

    fn column(&self, j: usize) -> Vec<Rational> {
        let n = self.src.columns();
        if j < n {
            self.src.column(j)
        } else {
            let mut e = vec![Rational::zero(); self.rows()];
            e[j - n] = Rational::one();
            e
        }
    }

    fn cost(&self, j: usize) -> Rational {
        let artificial = j >= self.src.columns();
        match (self.phase_one, artificial) {
            (true, true) => Rational::one(),
            (true, false) | (false, true) => Rational::zero(),
            (false, false) => self.src.cost(j),
        }
    }

    fn rhs(&self) -> Vec<Rational> {
        self.src.rhs()
    }

    // Artificials never re-enter.
    fn entering(&self, pi: &[Rational]) -> Option<usize> {
        if self.phase_one {
            (0..self.src.columns())
                .find(|&j| reduced_cost(Rational::zero(), pi, &self.src.column(j)).is_negative())
        } else {
            self.src.entering(pi)
        }
    }
}

/// Optimum of a standard-form problem.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StandardSolution {
    pub value: Rational,
    pub z: Vec<Rational>,
    pub duals: Vec<Rational>,
}

/// Two-phase solve of a standard-form problem with `b >= 0`.
pub fn solve_standard<S: ColumnSource + ?Sized>(src: &S) -> Result<StandardSolution, LpError> {
    let n = src.columns();
    let m = src.rows();
    if src.rhs().iter().any(Signed::is_negative) {
        return Err(LpError::InvalidBasis("right-hand side must be nonnegative".into()));
    }
    let one = Augmented { src, phase_one: true };
    let mut sx = Simplex::with_basis(&one, (n..n + m).collect())?;
    sx.run()?;
    if sx.objective().is_positive() {
        return Err(LpError::Infeasible);
    }
    // drive zero-level artificials out where some real column allows it
    for r in 0..m {
        if sx.basis[r] < n {
            continue;
        }
        if let Some(j) = (0..n).find(|&j| !sx.basis.contains(&j) && !sx.row_times_column(r, j).is_zero()) {
            let col = src.column(j);
            let d: Vec<Rational> = sx.binv.iter().map(|row| dot(row, &col)).collect();
            sx.pivot(r, j, &d);
        }
    }
    let two = Augmented { src, phase_one: false };
    let mut sx = Simplex {
        src: &two,
        basis: sx.basis,
        binv: sx.binv,
        xb: sx.xb,
        pivots: sx.pivots,
    };
    sx.run()?;
    let mut z = sx.primal();
    z.truncate(n);
    Ok(StandardSolution {
        value: sx.objective(),
        z,
        duals: sx.duals(),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    Le,
    Eq,
    Ge,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sense {
    Minimize,
    Maximize,
}

/// A general LP over variables that are nonnegative unless marked free.
#[derive(Clone, Debug)]
pub struct LinearProgram {
    free: Vec<bool>,
    sense: Sense,
    objective: Vec<Rational>,
    constraints: Vec<(Vec<Rational>, Relation, Rational)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LpSolution {
    pub value: Rational,
    pub x: Vec<Rational>,
}

impl LinearProgram {
    pub fn new(vars: usize, sense: Sense, objective: Vec<Rational>) -> Self {
        assert_eq!(objective.len(), vars);
        LinearProgram {
            free: vec![false; vars],
            sense,
            objective,
            constraints: Vec::new(),
        }
    }

    pub fn vars(&self) -> usize {
        self.free.len()
    }

    pub fn set_free(&mut self, var: usize) -> &mut Self {
        self.free[var] = true;
        self
    }

    /// Adds `sum coeffs[k].1 * x[coeffs[k].0]  rel  rhs`.
    pub fn constrain(&mut self, coeffs: &[(usize, Rational)], rel: Relation, rhs: Rational) -> &mut Self {
        let mut row = vec![Rational::zero(); self.vars()];
        for (j, a) in coeffs {
            row[*j] += a;
        }
        self.constraints.push((row, rel, rhs));
        self
    }

    pub fn solve(&self) -> Result<LpSolution, LpError> {
        // column layout: x+ for every var, x- for free vars, one slack per inequality
        let nv = self.vars();
        let mut minus = vec![None; nv];
        let mut ncol = nv;
        for j in 0..nv {
            if self.free[j] {
                minus[j] = Some(ncol);
                ncol += 1;
            }
        }
        let m = self.constraints.len();
        let mut cols = vec![vec![Rational::zero(); m]; ncol];
        let mut b = Vec::with_capacity(m);
        for (r, (row, rel, rhs)) in self.constraints.iter().enumerate() {
            let flip = rhs.is_negative();
            let s = |v: &Rational| if flip { -v } else { v.clone() };
            for j in 0..nv {
                cols[j][r] = s(&row[j]);
                if let Some(k) = minus[j] {
                    cols[k][r] = -s(&row[j]);
                }
            }
            let slack = match rel {
                Relation::Le => Some(Rational::one()),
                Relation::Ge => Some(-Rational::one()),
                Relation::Eq => None,
            };
            if let Some(sl) = slack {
                let mut c = vec![Rational::zero(); m];
                c[r] = s(&sl);
                cols.push(c);
            }
            b.push(s(rhs));
        }
        let sign = match self.sense {
            Sense::Minimize => Rational::one(),
            Sense::Maximize => -Rational::one(),
        };
        let mut costs = vec![Rational::zero(); cols.len()];
        for j in 0..nv {
            costs[j] = &sign * &self.objective[j];
            if let Some(k) = minus[j] {
                costs[k] = -&costs[j];
            }
        }
        let dense = DenseColumns { cols, costs, b };
        let sol = solve_standard(&dense)?;
        let x: Vec<Rational> = (0..nv)
            .map(|j| match minus[j] {
                Some(k) => &sol.z[j] - &sol.z[k],
                None => sol.z[j].clone(),
            })
            .collect();
        Ok(LpSolution {
            value: sign * sol.value,
            x,
        })
    }
}

struct DenseColumns {
    cols: Vec<Vec<Rational>>,
    costs: Vec<Rational>,
    b: Vec<Rational>,
}

impl ColumnSource for DenseColumns {
    fn rows(&self) -> usize {
        self.b.len()
    }

    fn columns(&self) -> usize {
        self.cols.len()
    }

    fn column(&self, j: usize) -> Vec<Rational> {
        self.cols[j].clone()
    }

    fn cost(&self, j: usize) -> Rational {
        self.costs[j].clone()
    }

    fn rhs(&self) -> Vec<Rational> {
        self.b.clone()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    #[test]
    fn textbook_maximization() {
        // max 3x + 5y, x <= 4, 2y <= 12, 3x + 2y <= 18 -> (2, 6), 36
        let mut lp = LinearProgram::new(2, Sense::Maximize, vec![int(3), int(5)]);
        lp.constrain(&[(0, int(1))], Relation::Le, int(4))
            .constrain(&[(1, int(2))], Relation::Le, int(12))
            .constrain(&[(0, int(3)), (1, int(2))], Relation::Le, int(18));
        let s = lp.solve().unwrap();
        assert_eq!(s.value, int(36));
        assert_eq!(s.x, vec![int(2), int(6)]);
    }

    #[test]
    fn free_variables_and_equalities() {
        // min x + y, x - y = -3, x + 2y >= 1, x free
        let mut lp = LinearProgram::new(2, Sense::Minimize, vec![int(1), int(1)]);
        lp.set_free(0)
            .constrain(&[(0, int(1)), (1, int(-1))], Relation::Eq, int(-3))
            .constrain(&[(0, int(1)), (1, int(2))], Relation::Ge, int(1));
        let s = lp.solve().unwrap();
        assert_eq!(s.x, vec![ratio(-5, 3), ratio(4, 3)]);
        assert_eq!(s.value, ratio(-1, 3));
    }

    #[test]
    fn infeasible_and_unbounded() {
        let mut lp = LinearProgram::new(1, Sense::Minimize, vec![int(1)]);
        lp.constrain(&[(0, int(1))], Relation::Le, int(-1));
        assert_eq!(lp.solve(), Err(LpError::Infeasible));
        let mut lp = LinearProgram::new(1, Sense::Maximize, vec![int(1)]);
        lp.constrain(&[(0, int(1))], Relation::Ge, int(1));
        assert_eq!(lp.solve(), Err(LpError::Unbounded));
    }

    #[test]
    fn degenerate_problem_terminates() {
        // Beale's cycling example; Bland's rule must terminate at value -1/20.
        let mut lp = LinearProgram::new(
            4,
            Sense::Minimize,
            vec![ratio(-3, 4), int(150), ratio(-1, 50), int(6)],
        );
        lp.constrain(
            &[(0, ratio(1, 4)), (1, int(-60)), (2, ratio(-1, 25)), (3, int(9))],
            Relation::Le,
            int(0),
        )
        .constrain(
            &[(0, ratio(1, 2)), (1, int(-90)), (2, ratio(-1, 50)), (3, int(3))],
            Relation::Le,
            int(0),
        )
        .constrain(&[(2, int(1))], Relation::Le, int(1));
        let s = lp.solve().unwrap();
        assert_eq!(s.value, ratio(-1, 20));
    }

    #[test]
    fn redundant_equalities() {
        let mut lp = LinearProgram::new(2, Sense::Maximize, vec![int(1), int(2)]);
        lp.constrain(&[(0, int(1)), (1, int(1))], Relation::Eq, int(1))
            .constrain(&[(0, int(2)), (1, int(2))], Relation::Eq, int(2));
        let s = lp.solve().unwrap();
        assert_eq!(s.x, vec![int(0), int(1)]);
    }

    #[test]
    fn inverse_round_trip() {
        let a = vec![vec![int(2), int(1)], vec![int(1), int(1)]];
        let inv = invert(a).unwrap();
        assert_eq!(inv, vec![vec![int(1), int(-1)], vec![int(-1), int(2)]]);
        assert!(invert(vec![vec![int(1), int(2)], vec![int(2), int(4)]]).is_none());
    }
}
