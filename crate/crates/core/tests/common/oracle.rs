//! Brute-force Smith normal form from determinantal divisors.

use num_integer::Integer;

pub fn det(m: &[Vec<i64>]) -> i128 {
    let n = m.len();
    if n == 1 {
        return m[0][0] as i128;
    }
    (0..n)
        .map(|j| {
            let minor: Vec<Vec<i64>> = m[1..]
                .iter()
                .map(|row| {
                    row.iter()
                        .enumerate()
                        .filter(|(c, _)| *c != j)
                        .map(|(_, &x)| x)
                        .collect()
                })
                .collect();
            let sign = if j % 2 == 0 { 1 } else { -1 };
            sign * m[0][j] as i128 * det(&minor)
        })
        .sum()
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    (k - 1..n)
        .flat_map(|last| {
            subsets(last, k - 1).into_iter().map(move |mut s| {
                s.push(last);
                s
            })
        })
        .collect()
}

/// Determinantal divisors: gcd of all k by k minors.
pub fn minor_gcds(m: &[Vec<i64>]) -> Vec<i128> {
    let (r, c) = (m.len(), m[0].len());
    (1..=r.min(c))
        .map(|k| {
            let mut g = 0i128;
            for rows in subsets(r, k) {
                for cols in subsets(c, k) {
                    let sub: Vec<Vec<i64>> = rows
                        .iter()
                        .map(|&i| cols.iter().map(|&j| m[i][j]).collect())
                        .collect();
                    g = g.gcd(&det(&sub));
                }
            }
            g
        })
        .collect()
}

/// Invariant factors from determinantal divisors, with zeros once a divisor vanishes.
pub fn oracle_snf(m: &[Vec<i64>]) -> Vec<i128> {
    let d = minor_gcds(m);
    let mut out = Vec::new();
    let mut prev = 1i128;
    for dk in d {
        if dk == 0 {
            out.push(0);
            prev = 0;
        } else if prev == 0 {
            out.push(0);
        } else {
            out.push(dk / prev);
            prev = dk;
        }
    }
    out
}
