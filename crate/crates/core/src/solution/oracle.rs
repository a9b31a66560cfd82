//! Reference nucleolus for small games: the sequential-LP scheme with every
//! proper coalition written out explicitly.
//!
//! Each round's LP is solved through its dual with the Bland-rule revised
//! simplex of [`crate::lp::simplex`], pricing the `2^n - 2` coalition columns
//! exhaustively. Shares no LP code with the row-generation solver.

use num_traits::{One, Signed, ToPrimitive, Zero};

use super::span::Span;
use crate::coalition::Coalition;
use crate::error::{GameError, Result};
use crate::game::VotingGame;
use crate::indices::{IndexKind, PowerProfile};
use crate::lp::simplex::{ColumnSource, Simplex};
use crate::rational::{self, Rational};

pub const ORACLE_LIMIT: usize = 15;

/// Dual of one round:
///
/// ```text
/// max  sum mu_S v(S) + sum rho_i l_i + sum nu_k r_k
/// s.t. sum_{S ∋ i} mu_S + rho_i + sum_{k: i ∈ F_k} nu_k = 0   (each i)
///      sum mu_S = 1
///      mu, rho >= 0, nu free (split into nu+ and nu-)
/// ```
///
/// over free coalitions `S`, lower bounds `l_i` and fixed rows `x(F_k) = r_k`,
/// written as a minimization. Column order: `mu` by coalition bits, `rho`,
/// then `nu+`/`nu-` pairs.
struct RoundDual<'a> {
    n: usize,
    free: &'a [u64],
    wins: &'a [bool],
    lower: &'a [Rational],
    fixed: &'a [(Coalition, Rational)],
}

impl RoundDual<'_> {
    fn rho(&self, i: usize) -> usize {
        self.free.len() + i
    }

    fn nu(&self, k: usize, minus: bool) -> usize {
        self.free.len() + self.n + 2 * k + usize::from(minus)
    }

    fn value(&self, mask: u64) -> Rational {
        if self.wins[mask as usize] {
            Rational::one()
        } else {
            Rational::zero()
        }
    }
}

impl ColumnSource for RoundDual<'_> {
    fn rows(&self) -> usize {
        self.n + 1
    }

    fn columns(&self) -> usize {
        self.free.len() + self.n + 2 * self.fixed.len()
    }

    fn column(&self, j: usize) -> Vec<Rational> {
        let mut col = vec![Rational::zero(); self.n + 1];
        let f = self.free.len();
        if j < f {
            for i in Coalition::from_bits(self.free[j]).members() {
                col[i] = Rational::one();
            }
            col[self.n] = Rational::one();
        } else if j < f + self.n {
            col[j - f] = Rational::one();
        } else {
            let k = (j - f - self.n) / 2;
            let sign = if (j - f - self.n) % 2 == 0 { Rational::one() } else { -Rational::one() };
            for i in self.fixed[k].0.members() {
                col[i] = sign.clone();
            }
        }
        col
    }

    fn cost(&self, j: usize) -> Rational {
        let f = self.free.len();
        if j < f {
            -self.value(self.free[j])
        } else if j < f + self.n {
            -self.lower[j - f].clone()
        } else {
            let k = (j - f - self.n) / 2;
            if (j - f - self.n) % 2 == 0 {
                -self.fixed[k].1.clone()
            } else {
                self.fixed[k].1.clone()
            }
        }
    }

    fn rhs(&self) -> Vec<Rational> {
        let mut b = vec![Rational::zero(); self.n + 1];
        b[self.n] = Rational::one();
        b
    }

    /// Coalition columns are priced from a subset-sum table of the scaled
    /// multipliers: column `S` has reduced cost `-v(S) - pi(S) - pi_eps`.
    fn entering(&self, pi: &[Rational]) -> Option<usize> {
        let (nums, den) = rational::scale_to_integers(pi);
        let found = match nums.iter().chain([&den]).map(|v| v.to_i128().filter(|v| v.abs() < 1 << 100)).collect::<Option<Vec<_>>>() {
            Some(small) => self.first_improving_coalition(&small[..self.n], small[self.n], small[self.n + 1]),
            None => self.first_improving_coalition(&nums[..self.n], nums[self.n].clone(), den),
        };
        if found.is_some() {
            return found;
        }
        (self.free.len()..self.columns()).find(|&j| {
            let col = self.column(j);
            let rc = pi.iter().zip(&col).fold(self.cost(j), |acc, (p, a)| acc - p * a);
            rc.is_negative()
        })
    }
}

impl RoundDual<'_> {
    fn first_improving_coalition<T>(&self, p: &[T], pe: T, den: T) -> Option<usize>
    where
        T: Clone + Zero + PartialOrd + std::ops::Add<Output = T>,
    {
        let mut sums = vec![T::zero(); 1 << self.n];
        for m in 1..sums.len() {
            sums[m] = sums[m & (m - 1)].clone() + p[m.trailing_zeros() as usize].clone();
        }
        let base_win = pe.clone() + den;
        self.free.iter().position(|&m| {
            let rc_neg = if self.wins[m as usize] {
                sums[m as usize].clone() + base_win.clone()
            } else {
                sums[m as usize].clone() + pe.clone()
            };
            rc_neg > T::zero()
        })
    }
}

/// The nucleolus by explicit sequential LPs; `n <= 15`.
pub fn nucleolus_oracle(game: &VotingGame) -> Result<PowerProfile> {
    let n = game.n();
    if n > ORACLE_LIMIT {
        return Err(GameError::capability("nucleolus oracle", ORACLE_LIMIT, n));
    }
    let profile = |values| PowerProfile {
        kind: IndexKind::Nucleolus,
        values,
    };
    if n == 1 {
        return Ok(profile(vec![Rational::one()]));
    }
    let grand = game.grand_coalition();
    let wins: Vec<bool> = (0..=grand.bits()).map(|m| game.is_winning(Coalition::from_bits(m))).collect();
    let lower: Vec<Rational> = (0..n)
        .map(|i| if wins[1 << i] { Rational::one() } else { Rational::zero() })
        .collect();
    if lower.iter().filter(|l| l.is_one()).count() > 1 {
        return Err(GameError::NoImputation);
    }
    let mut span = Span::new(n);
    span.add(grand)?;
    let mut fixed = vec![(grand, Rational::one())];
    loop {
        let free: Vec<u64> = (1..grand.bits())
            .filter(|&m| !span.contains(Coalition::from_bits(m)))
            .collect();
        let dual = RoundDual {
            n,
            free: &free,
            wins: &wins,
            lower: &lower,
            fixed: &fixed,
        };
        // feasible start: mu_{S0} = 1, nu-_N = 1, rho_i = 1 - [i in S0] for i != i0
        let s0 = Coalition::from_bits(free[0]);
        let i0 = s0.members().next().expect("free coalitions are nonempty");
        let mut basis = vec![0, dual.nu(0, true)];
        basis.extend((0..n).filter(|&i| i != i0).map(|i| dual.rho(i)));
        let mut sx = Simplex::with_basis(&dual, basis)?;
        sx.run()?;
        let pi = sx.duals();
        let x: Vec<Rational> = pi[..n].iter().map(|p| -p).collect();
        let level = -pi[n].clone();
        let rank = span.rank();
        let positive: Vec<usize> = sx
            .basis()
            .iter()
            .zip(sx.basic_values())
            .filter(|(_, v)| v.is_positive())
            .map(|(&j, _)| j)
            .collect();
        let mut newly = Vec::new();
        for &j in &positive {
            if j < free.len() {
                let s = Coalition::from_bits(free[j]);
                newly.push((s, game.value(s) - &level));
            } else if j < free.len() + n {
                let i = j - free.len();
                newly.push((Coalition::singleton(i), lower[i].clone()));
            }
        }
        newly.sort_by_key(|(s, _)| *s);
        for (s, rhs) in newly {
            if span.add(s)? {
                fixed.push((s, rhs));
            }
        }
        if span.rank() == rank {
            return Err(GameError::Unsupported {
                operation: "nucleolus oracle",
                reason: "a round fixed no new coalition".into(),
            });
        }
        if span.is_full() {
            debug_assert!(rational::sum(&x).is_one());
            return Ok(profile(x));
        }
    }
}
