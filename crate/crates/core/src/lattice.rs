//! Dense integer matrices with Hermite and Smith normal forms.

use std::fmt;

use num_integer::Integer;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<i128>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1;
        }
        m
    }

    pub fn from_rows<R: AsRef<[i64]>>(cols: usize, rows: &[R]) -> Self {
        let mut m = Self::zeros(rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            let r = r.as_ref();
            assert_eq!(r.len(), cols, "ragged matrix");
            for (j, &x) in r.iter().enumerate() {
                m[(i, j)] = x as i128;
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[i128] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_i64(&self, i: usize) -> Vec<i64> {
        self.row(i)
            .iter()
            .map(|&x| i64::try_from(x).expect("entry exceeds i64"))
            .collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<i64>> {
        (0..self.rows).map(|i| self.row_i64(i)).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows);
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] += a * other[(k, j)];
                }
            }
        }
        out
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.rows {
                self.data.swap(i * self.cols + a, i * self.cols + b);
            }
        }
    }

    /// row[dst] += k * row[src]
    fn add_row(&mut self, dst: usize, src: usize, k: i128) {
        for j in 0..self.cols {
            let v = self[(src, j)];
            self[(dst, j)] += k * v;
        }
    }

    fn add_col(&mut self, dst: usize, src: usize, k: i128) {
        for i in 0..self.rows {
            let v = self[(i, src)];
            self[(i, dst)] += k * v;
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            self[(i, j)] = -self[(i, j)];
        }
    }

    /// Row-style Hermite normal form: returns `(H, U)` with `U` unimodular,
    /// `U·self = H`, `H` in row echelon form with positive pivots and
    /// entries above each pivot reduced into `[0, pivot)`.
    pub fn hnf(&self) -> (IntMatrix, IntMatrix) {
        let mut h = self.clone();
        let mut u = Self::identity(self.rows);
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            loop {
                let pivot = (r..self.rows)
                    .filter(|&i| h[(i, c)] != 0)
                    .min_by_key(|&i| h[(i, c)].abs());
                let Some(p) = pivot else { break };
                h.swap_rows(r, p);
                u.swap_rows(r, p);
                let mut done = true;
                for i in r + 1..self.rows {
                    let q = Integer::div_floor(&h[(i, c)], &h[(r, c)]);
                    if q != 0 {
                        h.add_row(i, r, -q);
                        u.add_row(i, r, -q);
                    }
                    if h[(i, c)] != 0 {
                        done = false;
                    }
                }
                if done {
                    break;
                }
            }
            if h[(r, c)] == 0 {
                continue;
            }
            if h[(r, c)] < 0 {
                h.negate_row(r);
                u.negate_row(r);
            }
            for i in 0..r {
                let q = Integer::div_floor(&h[(i, c)], &h[(r, c)]);
                if q != 0 {
                    h.add_row(i, r, -q);
                    u.add_row(i, r, -q);
                }
            }
            r += 1;
        }
        (h, u)
    }

    pub fn rank(&self) -> usize {
        let (h, _) = self.hnf();
        (0..h.rows)
            .filter(|&i| h.row(i).iter().any(|&x| x != 0))
            .count()
    }

    /// Basis of the integer left kernel `{x : x·self = 0}` in Hermite form.
    pub fn left_kernel(&self) -> IntMatrix {
        let (h, u) = self.hnf();
        let kernel_rows: Vec<Vec<i64>> = (0..h.rows)
            .filter(|&i| h.row(i).iter().all(|&x| x == 0))
            .map(|i| u.row_i64(i))
            .collect();
        if kernel_rows.is_empty() {
            return IntMatrix::zeros(0, self.rows);
        }
        IntMatrix::from_rows(self.rows, &kernel_rows).hnf().0
    }

    /// Smith normal form: returns `(D, U, V)` with `U·self·V = D` diagonal,
    /// each diagonal entry nonnegative and dividing the next.
    pub fn snf(&self) -> (IntMatrix, IntMatrix, IntMatrix) {
        let mut d = self.clone();
        let mut u = Self::identity(self.rows);
        let mut v = Self::identity(self.cols);
        let n = self.rows.min(self.cols);
        for t in 0..n {
            loop {
                let mut best: Option<(usize, usize)> = None;
                for i in t..self.rows {
                    for j in t..self.cols {
                        if d[(i, j)] != 0
                            && best.is_none_or(|(a, b)| d[(i, j)].abs() < d[(a, b)].abs())
                        {
                            best = Some((i, j));
                        }
                    }
                }
                let Some((pi, pj)) = best else {
                    return (d, u, v);
                };
                d.swap_rows(t, pi);
                u.swap_rows(t, pi);
                d.swap_cols(t, pj);
                v.swap_cols(t, pj);
                let mut clean = true;
                for i in t + 1..self.rows {
                    let q = Integer::div_floor(&d[(i, t)], &d[(t, t)]);
                    d.add_row(i, t, -q);
                    u.add_row(i, t, -q);
                    clean &= d[(i, t)] == 0;
                }
                for j in t + 1..self.cols {
                    let q = Integer::div_floor(&d[(t, j)], &d[(t, t)]);
                    d.add_col(j, t, -q);
                    v.add_col(j, t, -q);
                    clean &= d[(t, j)] == 0;
                }
                if !clean {
                    continue;
                }
                // divisibility: fold any offending row into row t
                let piv = d[(t, t)];
                let bad = (t + 1..self.rows)
                    .flat_map(|i| (t + 1..self.cols).map(move |j| (i, j)))
                    .find(|&(i, j)| d[(i, j)] % piv != 0);
                match bad {
                    Some((i, _)) => {
                        d.add_row(t, i, 1);
                        u.add_row(t, i, 1);
                    }
                    None => break,
                }
            }
            if d[(t, t)] < 0 {
                d.negate_row(t);
                u.negate_row(t);
            }
        }
        (d, u, v)
    }

    pub fn elementary_divisors(&self) -> Vec<i128> {
        let (d, _, _) = self.snf();
        (0..self.rows.min(self.cols))
            .map(|i| d[(i, i)])
            .filter(|&x| x != 0)
            .collect()
    }

    /// Determinant of a square matrix by fraction-free elimination.
    pub fn det(&self) -> i128 {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        if n == 0 {
            return 1;
        }
        let mut m = self.clone();
        let mut sign = 1;
        let mut prev = 1i128;
        for k in 0..n {
            let Some(p) = (k..n).find(|&i| m[(i, k)] != 0) else {
                return 0;
            };
            if p != k {
                m.swap_rows(p, k);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    m[(i, j)] = (m[(i, j)] * m[(k, k)] - m[(i, k)] * m[(k, j)]) / prev;
                }
                m[(i, k)] = 0;
            }
            prev = m[(k, k)];
        }
        sign * m[(n - 1, n - 1)]
    }

    /// Adjugate of a square matrix, so that `adj·M = det·I`.
    pub fn adjugate(&self) -> IntMatrix {
        let n = self.rows;
        assert_eq!(n, self.cols);
        let mut adj = Self::zeros(n, n);
        if n == 1 {
            adj[(0, 0)] = 1;
            return adj;
        }
        for i in 0..n {
            for j in 0..n {
                let minor = self.minor(j, i);
                let s = if (i + j) % 2 == 0 { 1 } else { -1 };
                adj[(i, j)] = s * minor.det();
            }
        }
        adj
    }

    fn minor(&self, skip_row: usize, skip_col: usize) -> IntMatrix {
        let mut m = Self::zeros(self.rows - 1, self.cols - 1);
        for (r, i) in (0..self.rows).filter(|&i| i != skip_row).enumerate() {
            for (c, j) in (0..self.cols).filter(|&j| j != skip_col).enumerate() {
                m[(r, c)] = self[(i, j)];
            }
        }
        m
    }
}

impl std::ops::Index<(usize, usize)> for IntMatrix {
    type Output = i128;
    fn index(&self, (i, j): (usize, usize)) -> &i128 {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut i128 {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = (0..self.rows)
            .map(|i| {
                format!(
                    "({})",
                    self.row(i)
                        .iter()
                        .map(|x| x.to_string())
                        .collect::<Vec<_>>()
                        .join(",")
                )
            })
            .collect();
        write!(f, "[{}]", rows.join(", "))
    }
}

pub fn gcd_all(xs: &[i64]) -> i64 {
    xs.iter().fold(0i64, |g, &x| g.gcd(&x))
}
