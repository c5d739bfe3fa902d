//! Exact linear solving over Q(w) by fraction-free (Bareiss) elimination on
//! rows cleared to Z[w].

use malachite_base::num::arithmetic::traits::Lcm;
use malachite_base::num::basic::traits::One as _;
use malachite_nz::natural::Natural;
use num_traits::{One, Zero};

use crate::cyclofield::{CycloNumber, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LinearSolution {
    Unique(Vec<CycloNumber>),
    /// Consistent with free unknowns; the particular solution sets them to 0.
    Underdetermined { particular: Vec<CycloNumber>, free: Vec<usize> },
    Inconsistent,
}

fn clear_denominators(row: &mut [CycloNumber]) {
    let lcm = row.iter().fold(Natural::ONE, |acc, c| acc.lcm(c.denominator_lcm()));
    if lcm != 1u32 {
        let s = Rational::from(lcm);
        for c in row.iter_mut() {
            *c = c.scale(&s);
        }
    }
}

/// Solve `A x = b`. Rows are scaled to integral entries, eliminated with
/// Bareiss' exact division and the smallest-height pivot in each column,
/// and the answer is checked against the original equations.
pub fn solve(a: &[Vec<CycloNumber>], b: &[CycloNumber]) -> LinearSolution {
    let ncols = a.first().map_or(0, Vec::len);
    let mut m: Vec<Vec<CycloNumber>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            clear_denominators(&mut r);
            r
        })
        .collect();
    let nrows = m.len();
    let mut prev = CycloNumber::one();
    let mut pivots: Vec<usize> = Vec::new();
    let mut rank = 0;
    for c in 0..ncols {
        let best = (rank..nrows).filter(|&i| !m[i][c].is_zero()).min_by_key(|&i| m[i][c].height());
        let Some(p) = best else { continue };
        m.swap(rank, p);
        for i in rank + 1..nrows {
            let factor = m[i][c].clone();
            for k in c + 1..=ncols {
                let v = &(&m[rank][c] * &m[i][k]) - &(&factor * &m[rank][k]);
                m[i][k] = v.checked_div(&prev).expect("nonzero previous pivot");
            }
            m[i][c] = CycloNumber::zero();
        }
        prev = m[rank][c].clone();
        pivots.push(c);
        rank += 1;
    }
    if m[rank..].iter().any(|row| !row[ncols].is_zero()) {
        return LinearSolution::Inconsistent;
    }
    let mut x = vec![CycloNumber::zero(); ncols];
    for (r, &c) in pivots.iter().enumerate().rev() {
        let mut acc = m[r][ncols].clone();
        for k in c + 1..ncols {
            acc -= &(&m[r][k] * &x[k]);
        }
        x[c] = acc.checked_div(&m[r][c]).expect("nonzero pivot");
    }
    for (row, rhs) in a.iter().zip(b) {
        let lhs: CycloNumber = row.iter().zip(&x).map(|(p, q)| p * q).sum();
        assert_eq!(&lhs, rhs, "elimination produced a wrong solution");
    }
    if rank == ncols {
        LinearSolution::Unique(x)
    } else {
        let free = (0..ncols).filter(|c| !pivots.contains(c)).collect();
        LinearSolution::Underdetermined { particular: x, free }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(s: &str) -> CycloNumber {
        s.parse().unwrap()
    }

    #[test]
    fn small_systems() {
        let a = vec![vec![c("1"), c("w")], vec![c("1/2"), c("-1")]];
        let x = vec![c("3 - w"), c("2/7")];
        let b: Vec<CycloNumber> = a.iter().map(|r| r.iter().zip(&x).map(|(p, q)| p * q).sum()).collect();
        assert_eq!(solve(&a, &b), LinearSolution::Unique(x));

        let a = vec![vec![c("1"), c("1")], vec![c("2"), c("2")]];
        assert_eq!(solve(&a, &[c("1"), c("3")]), LinearSolution::Inconsistent);
        match solve(&a, &[c("1"), c("2")]) {
            LinearSolution::Underdetermined { free, .. } => assert_eq!(free, vec![1]),
            other => panic!("{other:?}"),
        }
    }

    fn cyclo() -> impl Strategy<Value = CycloNumber> {
        (-20i64..20, 1i64..6, -20i64..20, 1i64..6)
            .prop_map(|(a, b, c, d)| CycloNumber::new(crate::cyclofield::rat(a, b), crate::cyclofield::rat(c, d)))
    }

    proptest! {
        #[test]
        fn recovers_planted_solutions(
            a in prop::collection::vec(prop::collection::vec(cyclo(), 4), 6),
            x in prop::collection::vec(cyclo(), 4),
        ) {
            let b: Vec<CycloNumber> = a.iter().map(|r| r.iter().zip(&x).map(|(p, q)| p * q).sum()).collect();
            match solve(&a, &b) {
                LinearSolution::Unique(y) => prop_assert_eq!(y, x),
                LinearSolution::Underdetermined { particular, .. } => {
                    for (row, rhs) in a.iter().zip(&b) {
                        let lhs: CycloNumber = row.iter().zip(&particular).map(|(p, q)| p * q).sum();
                        prop_assert_eq!(&lhs, rhs);
                    }
                }
                LinearSolution::Inconsistent => prop_assert!(false, "planted system reported inconsistent"),
            }
        }
    }
}
