//! Exact linear-span membership.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::Zero;

use super::{ContactExpr, Rational, Slot};

/// Coefficients `c` with `target = sum c_i basis_i`, or `None` when `target`
/// lies outside the span.
///
/// Each `(atan, q)` slot is brought to the largest denominator power any of
/// the expressions uses there, and the numerator coefficients of `p^k` become
/// the rows of an exact linear system. For a dependent basis the returned
/// solution sets free coefficients to zero.
pub fn span_membership(target: &ContactExpr, basis: &[ContactExpr]) -> Option<Vec<Rational>> {
    let all: Vec<&ContactExpr> = basis.iter().chain(std::iter::once(target)).collect();

    let mut common: BTreeMap<Slot, u32> = BTreeMap::new();
    for e in &all {
        for (slot, r) in e.terms() {
            let c = common.entry(*slot).or_insert(0);
            *c = (*c).max(r.denom_power());
        }
    }

    let flatten = |e: &ContactExpr| -> BTreeMap<(Slot, usize), Rational> {
        let mut out = BTreeMap::new();
        for (slot, r) in e.terms() {
            for (k, c) in r.numerator_at(common[slot]).terms() {
                out.insert((*slot, k), c.clone());
            }
        }
        out
    };
    let columns: Vec<_> = all.iter().map(|e| flatten(e)).collect();
    let rows: BTreeSet<(Slot, usize)> = columns.iter().flat_map(|c| c.keys().copied()).collect();

    let n = basis.len();
    let mut m: Vec<Vec<Rational>> = rows
        .iter()
        .map(|key| columns.iter().map(|c| c.get(key).cloned().unwrap_or_else(Rational::zero)).collect())
        .collect();
    solve_augmented(&mut m, n)
}

/// Gauss-Jordan elimination on an augmented matrix whose last column is the
/// right-hand side.
fn solve_augmented(m: &mut [Vec<Rational>], n: usize) -> Option<Vec<Rational>> {
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..n {
        let Some(pr) = (row..m.len()).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(row, pr);
        let inv = m[row][col].recip();
        for v in m[row].iter_mut() {
            *v *= &inv;
        }
        for r in 0..m.len() {
            if r != row && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                let pivot_row = m[row].clone();
                for (v, pv) in m[r].iter_mut().zip(pivot_row.iter()) {
                    *v -= &f * pv;
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    if m[row..].iter().any(|r| !r[n].is_zero()) {
        return None;
    }
    let mut x = vec![Rational::zero(); n];
    for (r, &col) in pivots.iter().enumerate() {
        x[col] = m[r][n].clone();
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    fn e(s: &str) -> ContactExpr {
        ContactExpr::parse(s).unwrap()
    }

    #[test]
    fn member_of_own_basis() {
        let phi6 = e("p*q^2/(1+p^2) + atan(p)");
        let c = span_membership(&phi6, &[phi6.clone(), ContactExpr::one()]).unwrap();
        assert_eq!(c, vec![r(1, 1), r(0, 1)]);
    }

    #[test]
    fn arctan_outside_polynomial_span() {
        let phi5 = e("q*atan(p)");
        assert!(span_membership(&phi5, &[e("1"), e("p"), e("q")]).is_none());
    }

    #[test]
    fn mixes_denominator_powers() {
        // p/(1+p^2) = p^3/(1+p^2)^2 + p/(1+p^2)^2
        let target = e("p/(1+p^2)");
        let c = span_membership(&target, &[e("p^3/(1+p^2)^2"), e("p/(1+p^2)^2")]).unwrap();
        assert_eq!(c, vec![r(1, 1), r(1, 1)]);
    }

    #[test]
    fn zero_target_and_empty_basis() {
        assert_eq!(span_membership(&ContactExpr::zero(), &[]), Some(vec![]));
        assert_eq!(span_membership(&e("p"), &[]), None);
        assert_eq!(span_membership(&ContactExpr::zero(), &[e("q")]), Some(vec![r(0, 1)]));
    }
}
