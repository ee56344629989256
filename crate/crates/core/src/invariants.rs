//! Fox colorings, the knot determinant and dihedral quandles.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::knotio::KnotDiagram;
use crate::modelfinder::FiniteQuandle;
use crate::presentation::{presentation_of, Presentation};

/// Rows are crossings (relations), columns arcs (generators).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColoringMatrix {
    pub rows: Vec<Vec<i64>>,
    pub cols: usize,
}

/// Row `-1·a + 2·b - 1·c` for each relation `a ▷ b = c`.
pub fn coloring_matrix_of(p: &Presentation) -> ColoringMatrix {
    let cols = p.generators.len();
    let rows = p
        .relations
        .iter()
        .map(|r| {
            let mut row = vec![0i64; cols];
            row[r.a] -= 1;
            row[r.b] += 2;
            row[r.c] -= 1;
            row
        })
        .collect();
    ColoringMatrix { rows, cols }
}

pub fn coloring_matrix(d: &KnotDiagram) -> ColoringMatrix {
    coloring_matrix_of(&presentation_of(d))
}

/// Fraction-free elimination; exact for integer matrices.
fn bareiss(mut a: Vec<Vec<BigInt>>) -> BigInt {
    let n = a.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            let Some(r) = (k + 1..n).find(|&r| !a[r][k].is_zero()) else { return BigInt::zero() };
            a.swap(k, r);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
                a[i][j] = v;
            }
        }
        prev = a[k][k].clone();
    }
    sign * a[n - 1][n - 1].clone()
}

/// |det| of the coloring matrix with its last row and column removed.
pub fn determinant_of(p: &Presentation) -> BigUint {
    let m = coloring_matrix_of(p);
    let k = m.rows.len().min(m.cols).saturating_sub(1);
    let minor: Vec<Vec<BigInt>> = m.rows[..k].iter().map(|r| r[..k].iter().map(|&v| BigInt::from(v)).collect()).collect();
    bareiss(minor).abs().to_biguint().expect("absolute value")
}

/// 1 for the crossingless diagram by convention.
pub fn determinant(d: &KnotDiagram) -> BigUint {
    if d.is_trivial() {
        return BigUint::one();
    }
    determinant_of(&presentation_of(d))
}

/// Knots have odd determinants; anything else points at bad input.
pub fn determinant_warning(det: &BigUint) -> Option<String> {
    if det.is_zero() {
        Some("determinant is 0: input is not a knot diagram (link or malformed)".into())
    } else if !(det % 2u32).is_zero() {
        None
    } else {
        Some(format!("determinant {det} is even: input is not a knot diagram (link or malformed)"))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Coloring {
    ConstantOnly,
    Nonconstant(Vec<u64>),
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = (r as u128 * b as u128 % m as u128) as u64;
        }
        b = (b as u128 * b as u128 % m as u128) as u64;
        e >>= 1;
    }
    r
}

/// A kernel vector of `rows` mod the prime `p` that is not constant.
fn nonconstant_kernel_mod_prime(rows: &[Vec<i64>], cols: usize, p: u64) -> Option<Vec<u64>> {
    let md = |v: i64| v.rem_euclid(p as i64) as u64;
    let mut a: Vec<Vec<u64>> = rows.iter().map(|r| r.iter().map(|&v| md(v)).collect()).collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(pr) = (r..a.len()).find(|&i| a[i][c] != 0) else { continue };
        a.swap(r, pr);
        let inv = pow_mod(a[r][c], p - 2, p);
        for v in a[r].iter_mut() {
            *v = *v * inv % p;
        }
        for i in 0..a.len() {
            if i != r && a[i][c] != 0 {
                let f = a[i][c];
                for j in 0..cols {
                    a[i][j] = (a[i][j] + (p - f) * a[r][j]) % p;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    // Each free column gives a basis vector; the constants span one line.
    for free in (0..cols).filter(|c| !pivots.contains(c)) {
        let mut x = vec![0u64; cols];
        x[free] = 1;
        for (row, &pc) in pivots.iter().enumerate() {
            x[pc] = (p - a[row][free]) % p;
        }
        if x.iter().any(|&v| v != x[0]) {
            let base = x[0];
            let mut x: Vec<u64> = x.iter().map(|&v| (v + p - base) % p).collect();
            let lead = *x.iter().find(|&&v| v != 0).expect("nonconstant");
            let inv = pow_mod(lead, p - 2, p);
            for v in &mut x {
                *v = *v * inv % p;
            }
            return Some(x);
        }
    }
    None
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut q = 2;
    while q * q <= n {
        if n % q == 0 {
            out.push(q);
            while n % q == 0 {
                n /= q;
            }
        }
        q += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Solutions of `M·x ≡ 0 (mod n)`. A nonconstant solution exists mod `n`
/// iff one exists mod some prime `p | n`, and then `(n/p)·x` works mod `n`.
pub fn fox_colorings_of(p: &Presentation, n: u64) -> Coloring {
    assert!(n >= 2, "modulus must be at least 2");
    let m = coloring_matrix_of(p);
    for q in prime_factors(n) {
        if let Some(x) = nonconstant_kernel_mod_prime(&m.rows, m.cols, q) {
            let s = n / q;
            return Coloring::Nonconstant(x.into_iter().map(|v| v * s % n).collect());
        }
    }
    Coloring::ConstantOnly
}

pub fn fox_colorings(d: &KnotDiagram, n: u64) -> Coloring {
    fox_colorings_of(&presentation_of(d), n)
}

/// `i ▷ j = 2j − i (mod n)`.
pub fn dihedral_quandle(n: usize) -> FiniteQuandle {
    assert!(n >= 1, "order must be positive");
    let table = (0..n).flat_map(|i| (0..n).map(move |j| (2 * j + n - i) % n)).collect();
    FiniteQuandle { size: n, table, assignment: None }
}

pub fn smallest_prime_factor(n: &BigUint) -> Option<u64> {
    let mut q = 2u64;
    while BigUint::from(q) * BigUint::from(q) <= *n {
        if (n % q).is_zero() {
            return Some(q);
        }
        q += 1;
    }
    if *n > BigUint::one() {
        u64::try_from(n.clone()).ok()
    } else {
        None
    }
}

/// `R_p` colored by a Fox `p`-coloring, `p` the least prime dividing the
/// determinant.
pub fn dihedral_countermodel_of(p: &Presentation) -> Option<FiniteQuandle> {
    let det = determinant_of(p);
    if det.is_zero() || p.generators.len() < 2 {
        return None;
    }
    let q = smallest_prime_factor(&det)?;
    match fox_colorings_of(p, q) {
        Coloring::Nonconstant(x) => {
            Some(dihedral_quandle(q as usize).with_assignment(x.into_iter().map(|v| v as usize).collect()))
        }
        Coloring::ConstantOnly => None,
    }
}

pub fn dihedral_countermodel(d: &KnotDiagram) -> Option<FiniteQuandle> {
    if d.is_trivial() {
        return None;
    }
    dihedral_countermodel_of(&presentation_of(d))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::knotio::parse_pd;

    const TREFOIL: &str = "PD[X(1,4,2,5),X(3,6,4,1),X(5,2,6,3)]";

    #[test]
    fn trefoil_matrix_rows() {
        let m = coloring_matrix(&parse_pd(TREFOIL).unwrap());
        for r in &m.rows {
            let mut s = r.clone();
            s.sort_unstable();
            assert_eq!(s, vec![-1, -1, 2]);
        }
    }

    #[test]
    fn kink_matrix_is_zero() {
        let m = coloring_matrix(&parse_pd("PD[X(1,1,2,2)]").unwrap());
        assert_eq!(m.rows, vec![vec![0]]);
        assert_eq!(determinant(&parse_pd("PD[X(1,1,2,2)]").unwrap()), BigUint::one());
    }

    #[test]
    fn bareiss_small() {
        let m = |r: Vec<Vec<i64>>| r.into_iter().map(|r| r.into_iter().map(BigInt::from).collect()).collect();
        assert_eq!(bareiss(m(vec![vec![2, 1], vec![1, 3]])), BigInt::from(5));
        assert_eq!(bareiss(m(vec![vec![0, 1], vec![1, 0]])), BigInt::from(-1));
        assert_eq!(bareiss(m(vec![vec![1, 2, 3], vec![4, 5, 6], vec![7, 8, 10]])), BigInt::from(-3));
    }

    #[test]
    fn dihedral_tables() {
        assert_eq!(dihedral_quandle(3).rows(), vec![vec![0, 2, 1], vec![2, 1, 0], vec![1, 0, 2]]);
        assert_eq!(dihedral_quandle(2).rows(), vec![vec![0, 0], vec![1, 1]]);
        assert_eq!(dihedral_quandle(1).rows(), vec![vec![0]]);
    }

    #[test]
    fn composite_modulus() {
        let p = presentation_of(&parse_pd(TREFOIL).unwrap());
        let Coloring::Nonconstant(x) = fox_colorings_of(&p, 6) else { panic!() };
        let m = coloring_matrix_of(&p);
        for r in &m.rows {
            let s: i64 = r.iter().zip(&x).map(|(a, &b)| a * b as i64).sum();
            assert_eq!(s.rem_euclid(6), 0);
        }
        assert_eq!(fox_colorings_of(&p, 4), Coloring::ConstantOnly);
    }
}
