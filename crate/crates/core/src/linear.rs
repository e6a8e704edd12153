//! Exact linear algebra: Gaussian elimination over rational functions for small systems,
//! fraction-free (Bareiss) elimination over polynomials for determinants and ranks.

use crate::expr::{lcm, Poly, RatExpr};

/// Row echelon form of `rows`; returns the pivot columns.
fn echelon(rows: &mut [Vec<RatExpr>], cols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r >= rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).filter(|&i| !rows[i][c].is_zero()).min_by_key(|&i| {
            let e = &rows[i][c];
            e.num().len() + e.den().len()
        }) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][c].recip().expect("pivot is nonzero");
        let pivot_row: Vec<RatExpr> = rows[r].iter().map(|x| x.mul(&inv)).collect();
        rows[r] = pivot_row;
        for i in 0..rows.len() {
            if i == r || rows[i][c].is_zero() {
                continue;
            }
            let f = rows[i][c].clone();
            for j in c..rows[i].len() {
                if !rows[r][j].is_zero() {
                    let t = rows[i][j].sub(&f.mul(&rows[r][j]));
                    rows[i][j] = t;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Rank of a matrix given by rows.
pub fn rank(rows: &[Vec<RatExpr>]) -> usize {
    let cols = rows.first().map_or(0, |r| r.len());
    let mut m = rows.to_vec();
    echelon(&mut m, cols).len()
}

/// Solves `A x = b` where `A` is given by its columns; `None` if inconsistent.
///
/// Free unknowns, if any, are set to zero.
pub fn solve_columns(columns: &[Vec<RatExpr>], b: &[RatExpr]) -> Option<Vec<RatExpr>> {
    let k = columns.len();
    let n = b.len();
    let mut rows: Vec<Vec<RatExpr>> = (0..n)
        .map(|i| {
            let mut row: Vec<RatExpr> = columns.iter().map(|c| c[i].clone()).collect();
            row.push(b[i].clone());
            row
        })
        .collect();
    let pivots = echelon(&mut rows, k);
    for row in rows.iter().skip(pivots.len()) {
        if !row[k].is_zero() {
            return None;
        }
    }
    let mut x = vec![RatExpr::zero(); k];
    for (r, &c) in pivots.iter().enumerate() {
        x[c] = rows[r][k].clone();
    }
    Some(x)
}

/// Nonzero entry of the trailing submatrix with the fewest terms, scanning rows then columns.
fn pick_pivot(a: &[Vec<Poly>], k: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize, usize)> = None;
    for (i, row) in a.iter().enumerate().skip(k) {
        for (j, e) in row.iter().enumerate().skip(k) {
            if !e.is_zero() && best.is_none_or(|b| e.len() < b.2) {
                best = Some((i, j, e.len()));
            }
        }
    }
    best.map(|(i, j, _)| (i, j))
}

/// Result of fraction-free elimination with full pivoting.
#[derive(Clone, Debug)]
pub struct Elimination {
    pub rank: usize,
    /// Original row and column indices of the pivots, in elimination order.
    pub pivot_rows: Vec<usize>,
    pub pivot_cols: Vec<usize>,
    /// Last pivot, equal up to sign to the minor on the pivot rows and columns.
    pub last_pivot: Poly,
    /// True if some pivot involves a symbolic parameter.
    pub parameter_pivot: bool,
}

/// Bareiss elimination with full pivoting; every division is exact.
pub fn bareiss(mut a: Vec<Vec<Poly>>) -> Elimination {
    let n = a.len();
    let c = a.first().map_or(0, |r| r.len());
    let mut rows: Vec<usize> = (0..n).collect();
    let mut cols: Vec<usize> = (0..c).collect();
    let mut prev = Poly::one();
    let mut parameter_pivot = false;
    let mut k = 0;
    while k < n.min(c) {
        let Some((pi, pj)) = pick_pivot(&a, k) else { break };
        a.swap(k, pi);
        rows.swap(k, pi);
        if pj != k {
            for row in a.iter_mut() {
                row.swap(k, pj);
            }
            cols.swap(k, pj);
        }
        parameter_pivot |= a[k][k].vars().iter().any(|v| v.is_parameter());
        let (top, rest) = a.split_at_mut(k + 1);
        let pivot_row = &top[k];
        let piv = &pivot_row[k];
        for row in rest.iter_mut() {
            let lead = std::mem::take(&mut row[k]);
            for j in (k + 1)..c {
                let mut t = piv.mul(&row[j]);
                if !lead.is_zero() && !pivot_row[j].is_zero() {
                    t = t.sub(&lead.mul(&pivot_row[j]));
                }
                row[j] = if prev.is_one() || t.is_zero() {
                    t
                } else {
                    t.exact_divide(&prev).expect("Bareiss division is exact")
                };
            }
        }
        prev = a[k][k].clone();
        k += 1;
    }
    Elimination {
        rank: k,
        pivot_rows: rows[..k].to_vec(),
        pivot_cols: cols[..k].to_vec(),
        last_pivot: if k == 0 { Poly::one() } else { prev },
        parameter_pivot,
    }
}

/// Determinant of a square polynomial matrix.
pub fn det_poly(a: &[Vec<Poly>]) -> Poly {
    let n = a.len();
    if n == 0 {
        return Poly::one();
    }
    let e = bareiss(a.to_vec());
    if e.rank < n {
        return Poly::zero();
    }
    let sign = permutation_sign(&e.pivot_rows) * permutation_sign(&e.pivot_cols);
    if sign < 0 {
        e.last_pivot.neg()
    } else {
        e.last_pivot
    }
}

/// Determinant by cofactor expansion along the first row; reference for small matrices.
pub fn det_cofactor(a: &[Vec<Poly>]) -> Poly {
    let n = a.len();
    match n {
        0 => Poly::one(),
        1 => a[0][0].clone(),
        _ => {
            let mut acc = Poly::zero();
            for j in 0..n {
                if a[0][j].is_zero() {
                    continue;
                }
                let minor: Vec<Vec<Poly>> = a[1..]
                    .iter()
                    .map(|r| r.iter().enumerate().filter(|(c, _)| *c != j).map(|(_, e)| e.clone()).collect())
                    .collect();
                let t = a[0][j].mul(&det_cofactor(&minor));
                acc = if j % 2 == 0 { acc.add(&t) } else { acc.sub(&t) };
            }
            acc
        }
    }
}

fn permutation_sign(p: &[usize]) -> i32 {
    // p is a prefix of a permutation built by transpositions; count inversions of the
    // full sequence obtained by appending the missing indices in increasing order
    let n = p.iter().copied().max().map_or(0, |m| m + 1).max(p.len());
    let mut full: Vec<usize> = p.to_vec();
    let mut missing: Vec<usize> = (0..n).filter(|i| !p.contains(i)).collect();
    full.append(&mut missing);
    let mut seen = vec![false; full.len()];
    let mut sign = 1;
    for start in 0..full.len() {
        if seen[start] {
            continue;
        }
        let mut len = 0;
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            i = full[i];
            len += 1;
        }
        if len % 2 == 0 {
            sign = -sign;
        }
    }
    sign
}

/// Clears the denominators of each row; returns the polynomial rows and the row multipliers.
pub fn clear_row_denominators(rows: &[Vec<RatExpr>]) -> (Vec<Vec<Poly>>, Vec<Poly>) {
    let mut out = Vec::with_capacity(rows.len());
    let mut scales = Vec::with_capacity(rows.len());
    for row in rows {
        let mut l = Poly::one();
        for e in row {
            if !e.den().is_one() {
                l = lcm(&l, e.den());
            }
        }
        let prow = row
            .iter()
            .map(|e| {
                if l.is_one() {
                    e.num().clone()
                } else {
                    e.num().mul(&l.exact_divide(e.den()).expect("lcm is a multiple"))
                }
            })
            .collect();
        out.push(prow);
        scales.push(l);
    }
    (out, scales)
}

/// Determinant of a square matrix of rational functions.
pub fn det_ratexpr(rows: &[Vec<RatExpr>]) -> RatExpr {
    let (p, scales) = clear_row_denominators(rows);
    let d = det_poly(&p);
    let s = scales.iter().fold(Poly::one(), |acc, l| acc.mul(l));
    RatExpr::new(d, s).expect("row multipliers are nonzero")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::VarId;

    fn v(i: usize) -> Poly {
        Poly::var(VarId::jet(1, i))
    }

    #[test]
    fn bareiss_matches_cofactor() {
        let a = vec![
            vec![v(1), Poly::one(), v(2)],
            vec![Poly::int(2), v(0).mul(&v(1)), Poly::zero()],
            vec![v(2), Poly::int(-1), v(0).add(&Poly::one())],
        ];
        assert_eq!(det_poly(&a), det_cofactor(&a));
        let b = vec![vec![Poly::zero(), Poly::one()], vec![Poly::one(), Poly::zero()]];
        assert_eq!(det_poly(&b), Poly::int(-1));
        let singular = vec![vec![v(1), v(2)], vec![v(1).mul(&v(0)), v(2).mul(&v(0))]];
        assert!(det_poly(&singular).is_zero());
        assert_eq!(bareiss(singular).rank, 1);
    }

    #[test]
    fn solves_parametric_system() {
        let a = RatExpr::var(VarId::param("a").unwrap());
        let one = RatExpr::one();
        // columns (1, a), (1, 1); rhs (2, 1 + a)
        let cols = vec![vec![one.clone(), a.clone()], vec![one.clone(), one.clone()]];
        let b = vec![RatExpr::int(2), &one + &a];
        let x = solve_columns(&cols, &b).unwrap();
        assert_eq!(x, vec![one.clone(), one.clone()]);
        assert_eq!(rank(&[vec![one.clone(), a.clone()], vec![a.clone(), &a * &a]]), 1);
        assert!(solve_columns(&[vec![one.clone(), one.clone()]], &[one.clone(), RatExpr::int(2)])
            .is_none());
    }
}
