use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::coalition::Coalition;
use crate::error::{GameError, Result};
use crate::rational::Rational;

/// Linear span of coalition indicator vectors in `Q^n`.
///
/// Membership is tested against an integer basis of the orthogonal
/// complement: `S` is in the span iff `z . 1_S = 0` for every basis vector `z`.
#[derive(Clone, Debug)]
pub(crate) struct Span {
    n: usize,
    /// Reduced row echelon form; `pivots[r]` is the pivot column of row `r`.
    rows: Vec<Vec<Rational>>,
    pivots: Vec<usize>,
    null: Vec<Vec<i128>>,
}

impl Span {
    pub(crate) fn new(n: usize) -> Self {
        let mut s = Span {
            n,
            rows: Vec::new(),
            pivots: Vec::new(),
            null: Vec::new(),
        };
        s.rebuild_null().expect("unit vectors fit");
        s
    }

    pub(crate) fn rank(&self) -> usize {
        self.rows.len()
    }

    pub(crate) fn is_full(&self) -> bool {
        self.rank() == self.n
    }

    pub(crate) fn contains(&self, s: Coalition) -> bool {
        self.null.iter().all(|z| s.members().map(|i| z[i]).sum::<i128>() == 0)
    }

    /// Adds `1_S`; returns whether the rank grew.
    pub(crate) fn add(&mut self, s: Coalition) -> Result<bool> {
        if self.contains(s) {
            return Ok(false);
        }
        let mut v: Vec<Rational> = (0..self.n)
            .map(|i| if s.contains(i) { Rational::one() } else { Rational::zero() })
            .collect();
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if !v[p].is_zero() {
                let f = v[p].clone();
                for (a, b) in v.iter_mut().zip(row) {
                    *a -= &f * b;
                }
            }
        }
        let p = v.iter().position(|a| !a.is_zero()).expect("vector outside the span");
        let piv = v[p].clone();
        v.iter_mut().for_each(|a| *a /= &piv);
        for row in &mut self.rows {
            if !row[p].is_zero() {
                let f = row[p].clone();
                for (a, b) in row.iter_mut().zip(&v) {
                    *a -= &f * b;
                }
            }
        }
        self.rows.push(v);
        self.pivots.push(p);
        self.rebuild_null()?;
        Ok(true)
    }

    fn rebuild_null(&mut self) -> Result<()> {
        let mut null = Vec::new();
        for f in (0..self.n).filter(|c| !self.pivots.contains(c)) {
            let mut z = vec![Rational::zero(); self.n];
            z[f] = Rational::one();
            for (row, &p) in self.rows.iter().zip(&self.pivots) {
                z[p] = -row[f].clone();
            }
            let den = z.iter().fold(num_bigint::BigInt::one(), |l, a| l.lcm(a.denom()));
            let ints = z
                .iter()
                .map(|a| {
                    (a.numer() * (&den / a.denom()))
                        .to_i128()
                        .filter(|v| v.abs() < 1 << 100)
                        .ok_or_else(|| GameError::Unsupported {
                            operation: "coalition span test",
                            reason: "orthogonal complement entries exceed 100 bits".into(),
                        })
                })
                .collect::<Result<Vec<i128>>>()?;
            null.push(ints);
        }
        self.null = null;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grand_coalition_span() {
        let mut s = Span::new(4);
        assert!(s.contains(Coalition::EMPTY));
        assert!(!s.contains(Coalition::grand(4)));
        assert!(s.add(Coalition::grand(4)).unwrap());
        assert!(s.contains(Coalition::grand(4)));
        assert!(!s.contains(Coalition::from_members([0, 1])));
        assert!(s.add(Coalition::from_members([0, 1])).unwrap());
        assert!(s.contains(Coalition::from_members([2, 3])));
        assert!(!s.add(Coalition::from_members([2, 3])).unwrap());
        assert_eq!(s.rank(), 2);
        s.add(Coalition::from_members([0])).unwrap();
        s.add(Coalition::from_members([2])).unwrap();
        assert!(s.is_full());
        assert!(s.contains(Coalition::from_members([1, 3])));
    }
}
