use crate::exec::{map_reduce, Execution};
use crate::game::VotingGame;

/// Per-player tallies from one sweep over all `2^n` coalitions.
///
/// Row `i` of each table is indexed by a coalition size (or, for
/// `johnston`, by the number of critical players in the coalition).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SwingCounts {
    pub n: usize,
    /// `critical[i][s]`: winning coalitions of size `s` in which `i` is critical.
    pub critical: Vec<Vec<u64>>,
    /// `johnston[i][k]`: winning coalitions with exactly `k` critical players, `i` among them.
    pub johnston: Vec<Vec<u64>>,
    /// `minimal[i][s]`: minimal winning coalitions of size `s` containing `i`.
    pub minimal: Vec<Vec<u64>>,
    pub minimal_total: u64,
}

impl SwingCounts {
    fn zero(n: usize) -> Self {
        SwingCounts {
            n,
            critical: vec![vec![0; n + 1]; n],
            johnston: vec![vec![0; n + 1]; n],
            minimal: vec![vec![0; n + 1]; n],
            minimal_total: 0,
        }
    }

    fn merge(mut self, other: Self) -> Self {
        for (a, b) in [
            (&mut self.critical, &other.critical),
            (&mut self.johnston, &other.johnston),
            (&mut self.minimal, &other.minimal),
        ] {
            for (ra, rb) in a.iter_mut().zip(b) {
                for (x, y) in ra.iter_mut().zip(rb) {
                    *x += y;
                }
            }
        }
        self.minimal_total += other.minimal_total;
        self
    }

    /// Sweeps every coalition. The caller guarantees `n <= 30`.
    pub fn enumerate(game: &VotingGame, exec: Execution) -> Self {
        let n = game.n();
        assert!(n <= crate::game::ENUMERATION_LIMIT, "enumeration limited to 30 players");
        let tables = game.split_tables();
        let rules = game.integer_rules();
        map_reduce(
            1u64 << n,
            exec,
            || SwingCounts::zero(n),
            |range| {
                let mut acc = SwingCounts::zero(n);
                let mut sums = vec![0u64; rules.len()];
                let mut crit = Vec::with_capacity(n);
                for m in range {
                    let mut winning = true;
                    for ((t, r), s) in tables.iter().zip(rules).zip(sums.iter_mut()) {
                        *s = t.sum(m);
                        winning &= *s >= r.quota;
                    }
                    if !winning {
                        continue;
                    }
                    crit.clear();
                    let mut bits = m;
                    while bits != 0 {
                        let i = bits.trailing_zeros() as usize;
                        bits &= bits - 1;
                        if rules.iter().zip(&sums).any(|(r, &s)| s - r.weights[i] < r.quota) {
                            crit.push(i);
                        }
                    }
                    let size = m.count_ones() as usize;
                    let k = crit.len();
                    for &i in &crit {
                        acc.critical[i][size] += 1;
                        acc.johnston[i][k] += 1;
                    }
                    if k == size {
                        acc.minimal_total += 1;
                        for &i in &crit {
                            acc.minimal[i][size] += 1;
                        }
                    }
                }
                acc
            },
            SwingCounts::merge,
        )
    }

    /// Raw Banzhaf swing count of player `i`.
    pub fn swings(&self, i: usize) -> u64 {
        self.critical[i].iter().sum()
    }

    /// Number of minimal winning coalitions containing `i`.
    pub fn minimal_memberships(&self, i: usize) -> u64 {
        self.minimal[i].iter().sum()
    }
}
