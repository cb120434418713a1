//! Exact matrix algebra over ℤ, ℤ/n and ℚ.
//!
//! Smith normal form is computed over ℤ and over local rings ℤ/p^k; composite
//! moduli are handled by splitting into prime-power parts.

use std::fmt;

use num_rational::Ratio;

use crate::arith::{crt_combine, factorize, gcd, inv_mod, is_prime};
use crate::error::LinalgError;
use crate::ring::Scalars;

/// Dense row-major matrix with canonical entries.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    scalars: Scalars,
    rows: usize,
    cols: usize,
    data: Vec<i128>,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}{}x{}", self.scalars, self.rows, self.cols)?;
        f.debug_list().entries(self.to_rows()).finish()
    }
}

impl Matrix {
    pub fn new(scalars: Scalars, rows: usize, cols: usize, data: Vec<i128>) -> Matrix {
        assert_eq!(data.len(), rows * cols, "matrix data length");
        let data = data.into_iter().map(|x| scalars.reduce(x)).collect();
        Matrix {
            scalars,
            rows,
            cols,
            data,
        }
    }

    pub fn zeros(scalars: Scalars, rows: usize, cols: usize) -> Matrix {
        Matrix {
            scalars,
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(scalars: Scalars, n: usize) -> Matrix {
        let mut m = Matrix::zeros(scalars, n, n);
        for i in 0..n {
            m.data[i * n + i] = scalars.reduce(1);
        }
        m
    }

    /// From a list of rows; all rows must have `cols` entries.
    pub fn from_rows(scalars: Scalars, rows: &[Vec<i128>], cols: usize) -> Matrix {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged matrix");
            data.extend_from_slice(r);
        }
        Matrix::new(scalars, rows.len(), cols, data)
    }

    /// From a list of columns, each of length `rows`.
    pub fn from_columns(scalars: Scalars, rows: usize, columns: &[Vec<i128>]) -> Matrix {
        let mut m = Matrix::zeros(scalars, rows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            assert_eq!(c.len(), rows, "column length");
            for (i, &x) in c.iter().enumerate() {
                m.set(i, j, x);
            }
        }
        m
    }

    pub fn scalars(&self) -> Scalars {
        self.scalars
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> i128 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, x: i128) {
        self.data[i * self.cols + j] = self.scalars.reduce(x);
    }

    pub fn to_rows(&self) -> Vec<Vec<i128>> {
        (0..self.rows)
            .map(|i| self.data[i * self.cols..(i + 1) * self.cols].to_vec())
            .collect()
    }

    pub fn column(&self, j: usize) -> Vec<i128> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn columns(&self) -> Vec<Vec<i128>> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.scalars, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.get(i, j);
            }
        }
        t
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "matrix product dimensions");
        let s = self.scalars;
        let mut out = Matrix::zeros(s, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let idx = i * other.cols + j;
                    out.data[idx] = s.add(out.data[idx], s.mul(a, other.get(k, j)));
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, x: &[i128]) -> Vec<i128> {
        assert_eq!(self.cols, x.len(), "matrix-vector dimensions");
        let s = self.scalars;
        (0..self.rows)
            .map(|i| {
                (0..self.cols).fold(0, |acc, j| s.add(acc, s.mul(self.get(i, j), x[j])))
            })
            .collect()
    }

    /// `[self | other]`.
    pub fn hstack(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.rows, other.rows, "hstack rows");
        let mut out = Matrix::zeros(self.scalars, self.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.data[i * out.cols + j] = self.get(i, j);
            }
            for j in 0..other.cols {
                out.data[i * out.cols + self.cols + j] = other.get(i, j);
            }
        }
        out
    }

    pub fn block_diag(&self, other: &Matrix) -> Matrix {
        let mut out = Matrix::zeros(self.scalars, self.rows + other.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(i, j, self.get(i, j));
            }
        }
        for i in 0..other.rows {
            for j in 0..other.cols {
                out.set(self.rows + i, self.cols + j, other.get(i, j));
            }
        }
        out
    }

    /// Kronecker product `self ⊗ other`.
    pub fn kron(&self, other: &Matrix) -> Matrix {
        let s = self.scalars;
        let (r, c) = (self.rows * other.rows, self.cols * other.cols);
        let mut out = Matrix::zeros(s, r, c);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j);
                if a == 0 {
                    continue;
                }
                for k in 0..other.rows {
                    for l in 0..other.cols {
                        out.data[(i * other.rows + k) * c + j * other.cols + l] =
                            s.mul(a, other.get(k, l));
                    }
                }
            }
        }
        out
    }

    /// Reinterprets the (integer representatives of the) entries in `target`.
    pub fn reduce_into(&self, target: Scalars) -> Matrix {
        Matrix::new(target, self.rows, self.cols, self.data.clone())
    }

    pub fn scale(&self, c: i128) -> Matrix {
        let s = self.scalars;
        Matrix {
            scalars: s,
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&x| s.mul(x, c)).collect(),
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row[dst] += q * row[src]
    fn add_row(&mut self, dst: usize, src: usize, q: i128) {
        let s = self.scalars;
        for j in 0..self.cols {
            let v = s.add(self.get(dst, j), s.mul(q, self.get(src, j)));
            self.data[dst * self.cols + j] = v;
        }
    }

    /// col[dst] += q * col[src]
    fn add_col(&mut self, dst: usize, src: usize, q: i128) {
        let s = self.scalars;
        for i in 0..self.rows {
            let v = s.add(self.get(i, dst), s.mul(q, self.get(i, src)));
            self.data[i * self.cols + dst] = v;
        }
    }

    fn scale_row(&mut self, r: usize, c: i128) {
        let s = self.scalars;
        for j in 0..self.cols {
            self.data[r * self.cols + j] = s.mul(self.get(r, j), c);
        }
    }

    fn scale_col(&mut self, col: usize, c: i128) {
        let s = self.scalars;
        for i in 0..self.rows {
            self.data[i * self.cols + col] = s.mul(self.get(i, col), c);
        }
    }
}

/// `U·A·V = D` with `U`, `V` invertible and `D` diagonal with a divisibility chain.
#[derive(Clone, Debug)]
pub struct SnfResult {
    pub u: Matrix,
    pub d: Matrix,
    pub v: Matrix,
    pub u_inv: Matrix,
    pub v_inv: Matrix,
    /// The `min(rows, cols)` diagonal entries: nonzero factors first, then zeros.
    /// Over ℤ they are positive; over ℤ/p^k each is `p^j` (with `p^k` written 0).
    pub invariant_factors: Vec<i128>,
    /// Number of nonzero invariant factors.
    pub rank: usize,
}

/// Carries `A` together with the accumulated transforms and their inverses.
struct Reduction {
    a: Matrix,
    u: Matrix,
    u_inv: Matrix,
    v: Matrix,
    v_inv: Matrix,
}

impl Reduction {
    fn new(a: &Matrix) -> Self {
        let s = a.scalars;
        Reduction {
            a: a.clone(),
            u: Matrix::identity(s, a.rows),
            u_inv: Matrix::identity(s, a.rows),
            v: Matrix::identity(s, a.cols),
            v_inv: Matrix::identity(s, a.cols),
        }
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        self.a.swap_rows(i, j);
        self.u.swap_rows(i, j);
        self.u_inv.swap_cols(i, j);
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        self.a.swap_cols(i, j);
        self.v.swap_cols(i, j);
        self.v_inv.swap_rows(i, j);
    }

    fn add_row(&mut self, dst: usize, src: usize, q: i128) {
        self.a.add_row(dst, src, q);
        self.u.add_row(dst, src, q);
        self.u_inv.add_col(src, dst, -q);
    }

    fn add_col(&mut self, dst: usize, src: usize, q: i128) {
        self.a.add_col(dst, src, q);
        self.v.add_col(dst, src, q);
        self.v_inv.add_row(src, dst, -q);
    }

    fn scale_row(&mut self, r: usize, c: i128, c_inv: i128) {
        self.a.scale_row(r, c);
        self.u.scale_row(r, c);
        self.u_inv.scale_col(r, c_inv);
    }

    fn move_to_diagonal(&mut self, t: usize, (i, j): (usize, usize)) {
        self.swap_rows(t, i);
        self.swap_cols(t, j);
    }

    /// Nonzero entry of the trailing submatrix minimizing `key`; ties go to
    /// the lowest (row, col).
    fn pivot(&self, t: usize, key: impl Fn(i128) -> i128) -> Option<(usize, usize)> {
        let mut best: Option<(i128, usize, usize)> = None;
        for i in t..self.a.rows {
            for j in t..self.a.cols {
                let x = self.a.get(i, j);
                if x != 0 {
                    let k = key(x);
                    if best.is_none_or(|(bk, _, _)| k < bk) {
                        best = Some((k, i, j));
                    }
                }
            }
        }
        best.map(|(_, i, j)| (i, j))
    }

    fn finish(self) -> SnfResult {
        let n = self.a.rows.min(self.a.cols);
        let invariant_factors: Vec<i128> = (0..n).map(|i| self.a.get(i, i)).collect();
        let rank = invariant_factors.iter().take_while(|&&x| x != 0).count();
        SnfResult {
            u: self.u,
            d: self.a,
            v: self.v,
            u_inv: self.u_inv,
            v_inv: self.v_inv,
            invariant_factors,
            rank,
        }
    }
}

fn snf_integers(a: &Matrix) -> SnfResult {
    let mut r = Reduction::new(a);
    let (rows, cols) = (a.rows, a.cols);
    for t in 0..rows.min(cols) {
        let Some(p) = r.pivot(t, |x| x.abs()) else {
            break;
        };
        r.move_to_diagonal(t, p);
        loop {
            let piv = r.a.get(t, t);
            let mut clean = true;
            for i in t + 1..rows {
                let x = r.a.get(i, t);
                if x != 0 {
                    r.add_row(i, t, -(x / piv));
                    clean &= r.a.get(i, t) == 0;
                }
            }
            for j in t + 1..cols {
                let x = r.a.get(t, j);
                if x != 0 {
                    r.add_col(j, t, -(x / piv));
                    clean &= r.a.get(t, j) == 0;
                }
            }
            if !clean {
                let p = r.pivot(t, |x| x.abs()).expect("nonzero remainder");
                r.move_to_diagonal(t, p);
                continue;
            }
            let bad = (t + 1..rows)
                .flat_map(|i| (t + 1..cols).map(move |j| (i, j)))
                .find(|&(i, j)| r.a.get(i, j) % piv != 0);
            match bad {
                Some((i, _)) => r.add_row(t, i, 1),
                None => break,
            }
        }
        if r.a.get(t, t) < 0 {
            r.scale_row(t, -1, -1);
        }
    }
    r.finish()
}

/// SNF over a local ring ℤ/p^k, with `n = p^k`.
fn snf_local(a: &Matrix, n: u64) -> SnfResult {
    let mut r = Reduction::new(a);
    let ni = n as i128;
    let (rows, cols) = (a.rows, a.cols);
    for t in 0..rows.min(cols) {
        let Some(p) = r.pivot(t, |x| gcd(x, ni)) else {
            break;
        };
        r.move_to_diagonal(t, p);
        let x = r.a.get(t, t);
        let g = gcd(x, ni);
        let unit = x / g;
        let unit_inv = inv_mod(unit, n).expect("cofactor of a p-power is a unit");
        r.scale_row(t, unit_inv, unit);
        for i in t + 1..rows {
            let y = r.a.get(i, t);
            if y != 0 {
                r.add_row(i, t, -(y / g));
            }
        }
        for j in t + 1..cols {
            let y = r.a.get(t, j);
            if y != 0 {
                r.add_col(j, t, -(y / g));
            }
        }
    }
    r.finish()
}

fn prime_power(n: u64) -> Option<(u64, u32)> {
    match factorize(n).as_slice() {
        [(p, k)] => Some((*p, *k)),
        _ => None,
    }
}

pub fn smith_normal_form(a: &Matrix) -> Result<SnfResult, LinalgError> {
    match a.scalars {
        Scalars::Integers => Ok(snf_integers(a)),
        Scalars::Modular(n) if prime_power(n).is_some() => Ok(snf_local(a, n)),
        s => Err(LinalgError::UnsupportedScalars {
            op: "smith_normal_form",
            scalars: format!("{s:?}"),
        }),
    }
}

/// Row-echelon rank over 𝔽_p or ℚ.
pub fn rank_over_field(a: &Matrix) -> Result<usize, LinalgError> {
    match a.scalars {
        Scalars::Modular(p) if is_prime(p) => Ok(rank_mod_prime(a, p)),
        Scalars::Rationals => Ok(rational_echelon(a).pivots.len()),
        s => Err(LinalgError::UnsupportedScalars {
            op: "rank_over_field",
            scalars: format!("{s:?}"),
        }),
    }
}

fn rank_mod_prime(a: &Matrix, p: u64) -> usize {
    let mut m = a.clone();
    let mut rank = 0;
    for col in 0..m.cols {
        let Some(piv) = (rank..m.rows).find(|&i| m.get(i, col) != 0) else {
            continue;
        };
        m.swap_rows(rank, piv);
        let inv = inv_mod(m.get(rank, col), p).expect("nonzero in a field");
        m.scale_row(rank, inv);
        for i in 0..m.rows {
            if i != rank {
                let f = m.get(i, col);
                if f != 0 {
                    m.add_row(i, rank, -f);
                }
            }
        }
        rank += 1;
    }
    rank
}

struct Echelon {
    rows: Vec<Vec<Ratio<i128>>>,
    pivots: Vec<usize>,
}

/// Reduced row echelon form over ℚ.
fn rational_echelon(a: &Matrix) -> Echelon {
    let mut m: Vec<Vec<Ratio<i128>>> = a
        .to_rows()
        .into_iter()
        .map(|r| r.into_iter().map(Ratio::from_integer).collect())
        .collect();
    let zero = Ratio::from_integer(0);
    let mut pivots = Vec::new();
    let mut rank = 0;
    for col in 0..a.cols {
        let Some(piv) = (rank..a.rows).find(|&i| m[i][col] != zero) else {
            continue;
        };
        m.swap(rank, piv);
        let lead = m[rank][col];
        for x in m[rank].iter_mut() {
            *x /= lead;
        }
        for i in 0..a.rows {
            if i != rank && m[i][col] != zero {
                let f = m[i][col];
                let pivot_row = m[rank].clone();
                for (x, p) in m[i].iter_mut().zip(&pivot_row) {
                    *x -= f * p;
                }
            }
        }
        pivots.push(col);
        rank += 1;
    }
    Echelon { rows: m, pivots }
}

fn check_rhs(a: &Matrix, b: &[i128]) -> Result<(), LinalgError> {
    if b.len() != a.rows {
        return Err(LinalgError::DimensionMismatch(format!(
            "right-hand side has length {}, matrix has {} rows",
            b.len(),
            a.rows
        )));
    }
    Ok(())
}

/// One solution of `A·x = b`, or `None` when the system is inconsistent.
pub fn solve_linear(a: &Matrix, b: &[i128]) -> Result<Option<Vec<i128>>, LinalgError> {
    check_rhs(a, b)?;
    match a.scalars {
        Scalars::Integers => Ok(solve_via_snf(a, b, None)),
        Scalars::Modular(n) => {
            let parts = factorize(n);
            if parts.len() == 1 {
                return Ok(solve_via_snf(a, b, Some(n)));
            }
            let mut sols = Vec::new();
            for (p, k) in parts {
                let q = p.pow(k);
                let s = Scalars::Modular(q);
                let bq: Vec<i128> = b.iter().map(|&x| s.reduce(x)).collect();
                match solve_via_snf(&a.reduce_into(s), &bq, Some(q)) {
                    Some(x) => sols.push((x, q)),
                    None => return Ok(None),
                }
            }
            let x = (0..a.cols)
                .map(|j| crt_combine(&sols.iter().map(|(x, q)| (x[j], *q)).collect::<Vec<_>>()))
                .collect();
            Ok(Some(x))
        }
        s => Err(LinalgError::UnsupportedScalars {
            op: "solve_linear",
            scalars: format!("{s:?}"),
        }),
    }
}

fn solve_via_snf(a: &Matrix, b: &[i128], modulus: Option<u64>) -> Option<Vec<i128>> {
    let snf = match modulus {
        None => snf_integers(a),
        Some(n) => snf_local(a, n),
    };
    let s = a.scalars;
    let c = snf.u.mul_vec(&b.iter().map(|&x| s.reduce(x)).collect::<Vec<_>>());
    let mut y = vec![0i128; a.cols];
    for (i, &ci) in c.iter().enumerate() {
        if i < snf.rank {
            let d = snf.invariant_factors[i];
            if ci % d != 0 {
                return None;
            }
            y[i] = ci / d;
        } else if ci != 0 {
            return None;
        }
    }
    Some(snf.v.mul_vec(&y))
}

/// A matrix whose columns generate `ker(A)`: a basis over a field, a finite
/// generating set over ℤ or ℤ/n.
pub fn kernel_generators(a: &Matrix) -> Result<Matrix, LinalgError> {
    match a.scalars {
        Scalars::Integers => Ok(kernel_via_snf(a, None)),
        Scalars::Rationals => Ok(kernel_rational(a)),
        Scalars::Modular(n) => {
            let parts = factorize(n);
            if parts.len() == 1 {
                return Ok(kernel_via_snf(a, Some(n)));
            }
            let moduli: Vec<u64> = parts.iter().map(|&(p, k)| p.pow(k)).collect();
            let mut columns = Vec::new();
            for (idx, &q) in moduli.iter().enumerate() {
                let kq = kernel_via_snf(&a.reduce_into(Scalars::Modular(q)), Some(q));
                for col in kq.columns() {
                    // lift: ≡ col mod q, ≡ 0 mod the other prime powers
                    let lifted = col
                        .iter()
                        .map(|&x| {
                            let residues: Vec<(i128, u64)> = moduli
                                .iter()
                                .enumerate()
                                .map(|(j, &m)| (if j == idx { x } else { 0 }, m))
                                .collect();
                            crt_combine(&residues)
                        })
                        .collect();
                    columns.push(lifted);
                }
            }
            Ok(Matrix::from_columns(a.scalars, a.cols, &columns))
        }
    }
}

fn kernel_via_snf(a: &Matrix, modulus: Option<u64>) -> Matrix {
    let snf = match modulus {
        None => snf_integers(a),
        Some(n) => snf_local(a, n),
    };
    let mut columns = Vec::new();
    for j in 0..a.cols {
        let scale = match modulus {
            _ if j >= snf.rank => 1,
            None => continue,
            Some(n) => {
                // annihilator of the invariant factor d_j = p^e is (p^{k-e})
                let d = snf.invariant_factors[j];
                if d == 1 {
                    continue;
                }
                n as i128 / d
            }
        };
        columns.push(snf.v.column(j).into_iter().map(|x| a.scalars.mul(x, scale)).collect());
    }
    Matrix::from_columns(a.scalars, a.cols, &columns)
}

fn kernel_rational(a: &Matrix) -> Matrix {
    let ech = rational_echelon(a);
    let free: Vec<usize> = (0..a.cols).filter(|c| !ech.pivots.contains(c)).collect();
    let mut columns = Vec::new();
    for &f in &free {
        let mut v = vec![Ratio::from_integer(0i128); a.cols];
        v[f] = Ratio::from_integer(1);
        for (r, &pc) in ech.pivots.iter().enumerate() {
            v[pc] = -ech.rows[r][f];
        }
        let lcm = v
            .iter()
            .fold(1i128, |acc, x| acc / gcd(acc, *x.denom()) * *x.denom());
        columns.push(v.iter().map(|x| (x * lcm).to_integer()).collect());
    }
    Matrix::from_columns(Scalars::Rationals, a.cols, &columns)
}
