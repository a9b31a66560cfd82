//! Subset-sum counting for single-rule integer-weight games.
//!
//! `counts[k][w]` is the number of coalitions of size `k` with weight `w < q`.
//! The table for `N \ {i}` is peeled off the full table by inverting the
//! convolution with player `i`, so all `n` players cost one table build plus
//! `n` linear passes.

use crate::game::IntegerRule;

/// Largest `n * q` cell count the counting tables may use.
pub const DP_CELL_LIMIT: u64 = 1 << 26;

pub(crate) fn applicable(rule: &IntegerRule) -> bool {
    let n = rule.weights.len() as u64;
    (n + 1).saturating_mul(rule.quota) <= DP_CELL_LIMIT
}

/// For each player, `swings[i][k]`: coalitions `T ⊆ N \ {i}` of size `k` with
/// `q - w_i <= w(T) < q`, i.e. those `i` turns from losing into winning.
pub(crate) fn swing_table(rule: &IntegerRule) -> Vec<Vec<u128>> {
    let n = rule.weights.len();
    let q = rule.quota as usize;
    let mut full = vec![vec![0u128; q]; n + 1];
    full[0][0] = 1;
    for (j, &w) in rule.weights.iter().enumerate() {
        let w = w as usize;
        for k in (0..=j).rev() {
            for s in (w..q).rev() {
                let add = full[k][s - w];
                if add != 0 {
                    full[k + 1][s] += add;
                }
            }
        }
    }
    rule.weights
        .iter()
        .map(|&wi| {
            let wi = wi as usize;
            // without[k][s] = full[k][s] - without[k-1][s-wi]
            let mut without = vec![vec![0u128; q]; n];
            for k in 0..n {
                for s in 0..q {
                    let mut v = full[k][s];
                    if k > 0 && s >= wi {
                        v -= without[k - 1][s - wi];
                    }
                    without[k][s] = v;
                }
            }
            let lo = q.saturating_sub(wi);
            without
                .iter()
                .map(|row| row[lo..q].iter().sum())
                .collect()
        })
        .collect()
}
