//! Arithmetic and exact linear algebra over binary extension fields GF(2^l).
//!
//! Elements are polynomials over GF(2) packed into the low `l` bits of a
//! [`Elem`]; addition is XOR, multiplication is carry-less (peasant) product
//! followed by reduction modulo an irreducible polynomial. Widths 1..=16 are
//! supported; the default field is GF(2^8) with the polynomial 0x11B.
//!
//! Everything downstream (secret sharing, MDS extension, the leakage oracle)
//! rests on two exact-linear-algebra facts provided here: every square
//! submatrix of a Cauchy matrix is invertible, and Gaussian elimination over
//! the field computes ranks and solutions without rounding error.

use thiserror::Error;

/// A field element, stored in the low bits of a `u16`.
pub type Elem = u16;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GfError {
    #[error("unsupported field width {0} (supported: 1..=16)")]
    InvalidWidth(u8),
    #[error("modulus {0:#x} does not have degree matching the field width")]
    InvalidModulus(u32),
    #[error("modulus {0:#x} is reducible over GF(2)")]
    NotIrreducible(u32),
    #[error("zero has no multiplicative inverse")]
    ZeroInverse,
    #[error("evaluation points are not pairwise distinct")]
    DuplicateEvaluationPoint,
    #[error("element {value:#x} is not in a field of order {order}")]
    ElementOutOfRange { value: u32, order: u32 },
    #[error("linear system is inconsistent")]
    NoSolution,
    #[error("linear system does not determine a unique solution")]
    Underdetermined,
}

/// Degree of a GF(2) polynomial, or -1 for the zero polynomial.
fn poly_deg(p: u64) -> i32 {
    63 - p.leading_zeros() as i32
}

/// Remainder of carry-less division of `a` by nonzero `b`.
fn poly_rem(mut a: u64, b: u64) -> u64 {
    let db = poly_deg(b);
    while poly_deg(a) >= db {
        a ^= b << (poly_deg(a) - db);
    }
    a
}

/// Carry-less product of two GF(2) polynomials.
fn poly_mul(a: u64, mut b: u64) -> u64 {
    let mut r = 0;
    let mut shift = 0;
    while b != 0 {
        if b & 1 == 1 {
            r ^= a << shift;
        }
        b >>= 1;
        shift += 1;
    }
    r
}

/// Irreducibility over GF(2) by exhaustive trial division: a polynomial of
/// degree l is reducible iff it has a factor of degree in [1, l/2].
fn is_irreducible(p: u32) -> bool {
    let l = poly_deg(p as u64);
    if l < 1 {
        return false;
    }
    for d in 1..=(l / 2) {
        for q in (1u64 << d)..(1u64 << (d + 1)) {
            if poly_rem(p as u64, q) == 0 {
                return false;
            }
        }
    }
    true
}

/// Default irreducible modulus for each supported width (index = width - 1).
/// Standard low-weight polynomials; width 8 is the familiar 0x11B.
const DEFAULT_POLY: [u32; 16] = [
    0x3, 0x7, 0xB, 0x13, 0x25, 0x43, 0x83, 0x11B, 0x211, 0x409, 0x805, 0x1053, 0x201B, 0x4443,
    0x8003, 0x1100B,
];

/// A binary extension field GF(2^l), cheap to copy and pass by value.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Field {
    width: u8,
    poly: u32,
}

impl Field {
    /// Field with an explicit modulus; the modulus must have degree exactly
    /// `width` and be irreducible (checked by trial division).
    pub fn new(width: u8, poly: u32) -> Result<Self, GfError> {
        if width == 0 || width > 16 {
            return Err(GfError::InvalidWidth(width));
        }
        if poly_deg(poly as u64) != width as i32 {
            return Err(GfError::InvalidModulus(poly));
        }
        if !is_irreducible(poly) {
            return Err(GfError::NotIrreducible(poly));
        }
        Ok(Field { width, poly })
    }

    /// Field of the given width with the default modulus.
    pub fn with_width(width: u8) -> Result<Self, GfError> {
        if width == 0 || width > 16 {
            return Err(GfError::InvalidWidth(width));
        }
        Field::new(width, DEFAULT_POLY[width as usize - 1])
    }

    /// The default field GF(2^8) modulo 0x11B.
    pub fn gf256() -> Self {
        Field { width: 8, poly: 0x11B }
    }

    pub fn width(self) -> u8 {
        self.width
    }

    pub fn modulus(self) -> u32 {
        self.poly
    }

    /// Number of elements, 2^l.
    pub fn order(self) -> u32 {
        1 << self.width
    }

    /// Field addition: XOR of coefficient vectors.
    pub fn add(self, a: Elem, b: Elem) -> Elem {
        a ^ b
    }

    /// Field multiplication: carry-less peasant product with interleaved
    /// reduction by the modulus.
    pub fn mul(self, a: Elem, b: Elem) -> Elem {
        let mut a = a as u32;
        let mut b = b as u32;
        let top = 1u32 << self.width;
        let mut r = 0u32;
        while b != 0 {
            if b & 1 == 1 {
                r ^= a;
            }
            b >>= 1;
            a <<= 1;
            if a & top != 0 {
                a ^= self.poly;
            }
        }
        r as Elem
    }

    /// Multiplicative inverse via the extended Euclidean algorithm on
    /// polynomials over GF(2).
    pub fn inv(self, a: Elem) -> Result<Elem, GfError> {
        if a == 0 {
            return Err(GfError::ZeroInverse);
        }
        // Invariant: r0 = t0*a + s0*poly, r1 = t1*a + s1*poly (s not tracked).
        let (mut r0, mut r1) = (self.poly as u64, a as u64);
        let (mut t0, mut t1) = (0u64, 1u64);
        while r1 != 0 {
            // Polynomial division step: r0 = q*r1 + r.
            let mut q = 0u64;
            let mut r = r0;
            let d1 = poly_deg(r1);
            while poly_deg(r) >= d1 {
                let shift = poly_deg(r) - d1;
                q ^= 1 << shift;
                r ^= r1 << shift;
            }
            (r0, r1) = (r1, r);
            (t0, t1) = (t1, t0 ^ poly_mul(q, t1));
        }
        debug_assert_eq!(r0, 1, "gcd(a, modulus) must be 1 for irreducible modulus");
        Ok(poly_rem(t0, self.poly as u64) as Elem)
    }

    /// Field division `a / b`.
    pub fn div(self, a: Elem, b: Elem) -> Result<Elem, GfError> {
        Ok(self.mul(a, self.inv(b)?))
    }
}

/// A dense matrix of field elements (row-major); plain data, arithmetic is
/// provided by [`Field`] methods.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Elem>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    /// Build from equal-length rows; panics on ragged input (programmer error).
    pub fn from_rows(rows: Vec<Vec<Elem>>) -> Self {
        let ncols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == ncols), "ragged rows");
        let nrows = rows.len();
        Matrix { rows: nrows, cols: ncols, data: rows.into_iter().flatten().collect() }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> Elem {
        self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Elem) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[Elem] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_mut(&mut self, r: usize) -> &mut [Elem] {
        &mut self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c));
            }
        }
        t
    }

    /// Submatrix selected by (possibly repeated) row and column indices.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Matrix {
        let mut m = Matrix::zeros(rows.len(), cols.len());
        for (i, &r) in rows.iter().enumerate() {
            for (j, &c) in cols.iter().enumerate() {
                m.set(i, j, self.get(r, c));
            }
        }
        m
    }
}

impl Field {
    /// Matrix product; panics on shape mismatch (programmer error).
    pub fn matmul(self, a: &Matrix, b: &Matrix) -> Matrix {
        assert_eq!(a.cols(), b.rows(), "matmul shape mismatch");
        let mut out = Matrix::zeros(a.rows(), b.cols());
        for i in 0..a.rows() {
            for k in 0..a.cols() {
                let aik = a.get(i, k);
                if aik == 0 {
                    continue;
                }
                for j in 0..b.cols() {
                    let v = self.add(out.get(i, j), self.mul(aik, b.get(k, j)));
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    /// Cauchy matrix with entries 1/(xs[i] + ys[j]).
    ///
    /// All evaluation points (the union of `xs` and `ys`) must be pairwise
    /// distinct elements of the field, which requires |xs| + |ys| ≤ 2^l and
    /// guarantees every square submatrix is invertible.
    pub fn cauchy_matrix(self, xs: &[Elem], ys: &[Elem]) -> Result<Matrix, GfError> {
        let order = self.order();
        for &p in xs.iter().chain(ys) {
            if (p as u32) >= order {
                return Err(GfError::ElementOutOfRange { value: p as u32, order });
            }
        }
        let mut seen = vec![false; order as usize];
        for &p in xs.iter().chain(ys) {
            if seen[p as usize] {
                return Err(GfError::DuplicateEvaluationPoint);
            }
            seen[p as usize] = true;
        }
        let mut m = Matrix::zeros(xs.len(), ys.len());
        for (i, &x) in xs.iter().enumerate() {
            for (j, &y) in ys.iter().enumerate() {
                m.set(i, j, self.inv(x ^ y)?);
            }
        }
        Ok(m)
    }

    /// Rank over the field, by Gaussian elimination.
    pub fn rank(self, m: &Matrix) -> usize {
        let mut acc = Rref::new(self, m.cols());
        for r in 0..m.rows() {
            acc.insert(m.row(r));
        }
        acc.rank()
    }

    /// Solve `A x = b` for the unique `x` (multiple right-hand sides allowed:
    /// `b` and the result have one column per RHS).
    ///
    /// Pivoting is deterministic: columns are processed left to right and the
    /// pivot is the first (lowest-index) remaining row with a nonzero entry.
    pub fn solve(self, a: &Matrix, b: &Matrix) -> Result<Matrix, GfError> {
        assert_eq!(a.rows(), b.rows(), "solve shape mismatch");
        let (n, cols, rhs) = (a.rows(), a.cols(), b.cols());
        // Augmented matrix [A | b].
        let mut aug = Matrix::zeros(n, cols + rhs);
        for r in 0..n {
            aug.row_mut(r)[..cols].copy_from_slice(a.row(r));
            aug.row_mut(r)[cols..].copy_from_slice(b.row(r));
        }
        let mut pivot_row = 0;
        let mut pivots = Vec::new();
        for c in 0..cols {
            let Some(sel) = (pivot_row..n).find(|&r| aug.get(r, c) != 0) else {
                continue;
            };
            if sel != pivot_row {
                for j in 0..cols + rhs {
                    let (x, y) = (aug.get(pivot_row, j), aug.get(sel, j));
                    aug.set(pivot_row, j, y);
                    aug.set(sel, j, x);
                }
            }
            let inv = self.inv(aug.get(pivot_row, c))?;
            for j in 0..cols + rhs {
                let v = self.mul(inv, aug.get(pivot_row, j));
                aug.set(pivot_row, j, v);
            }
            for r in 0..n {
                if r != pivot_row && aug.get(r, c) != 0 {
                    let f = aug.get(r, c);
                    for j in 0..cols + rhs {
                        let v = self.add(aug.get(r, j), self.mul(f, aug.get(pivot_row, j)));
                        aug.set(r, j, v);
                    }
                }
            }
            pivots.push(c);
            pivot_row += 1;
            if pivot_row == n {
                break;
            }
        }
        // Inconsistent row: zero coefficients with a nonzero RHS.
        for r in pivot_row..n {
            if aug.row(r)[cols..].iter().any(|&v| v != 0) {
                return Err(GfError::NoSolution);
            }
        }
        if pivots.len() < cols {
            return Err(GfError::Underdetermined);
        }
        let mut x = Matrix::zeros(cols, rhs);
        for (r, &c) in pivots.iter().enumerate() {
            for j in 0..rhs {
                x.set(c, j, aug.get(r, cols + j));
            }
        }
        Ok(x)
    }

    /// Inverse of a square matrix; `Underdetermined` if rank-deficient.
    pub fn invert(self, m: &Matrix) -> Result<Matrix, GfError> {
        assert_eq!(m.rows(), m.cols(), "invert requires a square matrix");
        self.solve(m, &Matrix::identity(m.rows()))
    }
}

/// Dense multiplication table for small fields (width ≤ 8), turning each
/// product into one lookup. Intended for rank-heavy sweeps; the plain
/// carry-less multiply stays authoritative and fills the table.
#[derive(Debug)]
pub struct MulTable {
    order: usize,
    table: Vec<Elem>,
}

impl MulTable {
    /// Build the full order×order table; `None` when the field is too wide
    /// to tabulate (width > 8).
    pub fn new(field: Field) -> Option<MulTable> {
        if field.width() > 8 {
            return None;
        }
        let order = field.order() as usize;
        let mut table = vec![0; order * order];
        for a in 0..order {
            for b in 0..order {
                table[a * order + b] = field.mul(a as Elem, b as Elem);
            }
        }
        Some(MulTable { order, table })
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        self.table[a as usize * self.order + b as usize]
    }
}

/// Incremental row-echelon accumulator: supports rank queries, membership
/// tests, and residual reduction without re-eliminating from scratch.
///
/// Rows are kept normalized (pivot coefficient 1) and indexed by pivot
/// column, so reducing a vector is a single ascending sweep over its columns.
#[derive(Debug, Clone)]
pub struct Rref {
    field: Field,
    table: Option<std::sync::Arc<MulTable>>,
    cols: usize,
    /// pivot column -> normalized row with that pivot.
    by_pivot: Vec<Option<Vec<Elem>>>,
    rank: usize,
}

impl Rref {
    pub fn new(field: Field, cols: usize) -> Self {
        Rref { field, table: None, cols, by_pivot: vec![None; cols], rank: 0 }
    }

    /// Use a shared multiplication table for the inner elimination loops.
    pub fn with_table(mut self, table: std::sync::Arc<MulTable>) -> Self {
        self.table = Some(table);
        self
    }

    #[inline]
    fn mul(&self, a: Elem, b: Elem) -> Elem {
        match &self.table {
            Some(t) => t.mul(a, b),
            None => self.field.mul(a, b),
        }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Reduce `row` in place against the accumulated basis. The result is
    /// zero iff the vector lies in the accumulated row space.
    pub fn reduce(&self, row: &mut [Elem]) {
        debug_assert_eq!(row.len(), self.cols);
        for c in 0..self.cols {
            if row[c] != 0 {
                if let Some(basis) = &self.by_pivot[c] {
                    let f = row[c];
                    for j in c..self.cols {
                        row[j] ^= self.mul(f, basis[j]);
                    }
                }
            }
        }
    }

    /// Insert a row; returns true when it enlarged the row space.
    pub fn insert(&mut self, row: &[Elem]) -> bool {
        let mut v = row.to_vec();
        self.reduce(&mut v);
        let Some(pivot) = v.iter().position(|&x| x != 0) else {
            return false;
        };
        let inv = self.field.inv(v[pivot]).expect("pivot is nonzero");
        for x in v.iter_mut() {
            *x = self.mul(inv, *x);
        }
        self.by_pivot[pivot] = Some(v);
        self.rank += 1;
        true
    }

    /// Whether the vector lies in the accumulated row space.
    pub fn contains(&self, row: &[Elem]) -> bool {
        let mut v = row.to_vec();
        self.reduce(&mut v);
        v.iter().all(|&x| x == 0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn default_moduli_are_irreducible() {
        for width in 1..=16u8 {
            let f = Field::with_width(width).expect("default modulus must construct");
            assert_eq!(f.order(), 1 << width);
        }
    }

    #[test]
    fn rejects_bad_moduli() {
        assert_eq!(Field::new(0, 0x3).unwrap_err(), GfError::InvalidWidth(0));
        assert_eq!(Field::new(17, 0x3).unwrap_err(), GfError::InvalidWidth(17));
        assert_eq!(Field::new(8, 0x1B).unwrap_err(), GfError::InvalidModulus(0x1B));
        // x^8 + 1 = (x + 1)^8 over GF(2).
        assert_eq!(Field::new(8, 0x101).unwrap_err(), GfError::NotIrreducible(0x101));
        // x^9 + 1 = (x + 1)(x^8 + x^7 + ... + 1).
        assert!(matches!(Field::new(9, 0x201), Err(GfError::NotIrreducible(_))));
    }

    #[test]
    fn gf256_known_values() {
        let f = Field::gf256();
        // Additions are XOR.
        assert_eq!(f.add(0x0B, 0x0D), 0x06);
        // Classic inverse pair in the 0x11B field.
        assert_eq!(f.mul(0x53, 0xCA), 0x01);
        assert_eq!(f.inv(0x53).unwrap(), 0xCA);
        // FIPS-197 worked example: {57} x {83} = {c1}.
        assert_eq!(f.mul(0x57, 0x83), 0xC1);
        assert_eq!(f.inv(0).unwrap_err(), GfError::ZeroInverse);
    }

    #[test]
    fn inverse_exhaustive_small_widths() {
        for width in 1..=10u8 {
            let f = Field::with_width(width).unwrap();
            for a in 1..f.order() as Elem {
                let inv = f.inv(a).unwrap();
                assert_eq!(f.mul(a, inv), 1, "width {width}, a={a:#x}");
            }
        }
    }

    #[test]
    fn cauchy_rejects_bad_points() {
        let f = Field::gf256();
        assert_eq!(
            f.cauchy_matrix(&[1, 2], &[2, 5]).unwrap_err(),
            GfError::DuplicateEvaluationPoint
        );
        assert_eq!(
            f.cauchy_matrix(&[1, 1], &[2, 5]).unwrap_err(),
            GfError::DuplicateEvaluationPoint
        );
        let small = Field::with_width(2).unwrap();
        assert!(matches!(
            small.cauchy_matrix(&[0, 1], &[2, 7]),
            Err(GfError::ElementOutOfRange { .. })
        ));
    }

    #[test]
    fn cauchy_submatrices_are_invertible() {
        // Every square submatrix of a Cauchy matrix has full rank; check
        // exhaustively for all u x v shapes up to 4x4.
        let f = Field::gf256();
        let xs: Vec<Elem> = (0..4).collect();
        let ys: Vec<Elem> = (4..8).collect();
        let m = f.cauchy_matrix(&xs, &ys).unwrap();
        for size in 1..=4usize {
            for rows in crate::combin::subsets(4, size) {
                for cols in crate::combin::subsets(4, size) {
                    let rows0: Vec<usize> = rows.iter().map(|&r| r - 1).collect();
                    let cols0: Vec<usize> = cols.iter().map(|&c| c - 1).collect();
                    let sub = m.select(&rows0, &cols0);
                    assert_eq!(f.rank(&sub), size, "rows {rows:?} cols {cols:?}");
                }
            }
        }
    }

    #[test]
    fn solve_round_trip_and_errors() {
        let f = Field::gf256();
        let a = f.cauchy_matrix(&[0, 1, 2], &[3, 4, 5]).unwrap();
        let x = Matrix::from_rows(vec![vec![0x17], vec![0x4D], vec![0xB2]]);
        let b = f.matmul(&a, &x);
        assert_eq!(f.solve(&a, &b).unwrap(), x);

        // Wide system: consistent but underdetermined.
        let wide = Matrix::from_rows(vec![vec![1, 0, 1]]);
        let rhs = Matrix::from_rows(vec![vec![1]]);
        assert_eq!(f.solve(&wide, &rhs).unwrap_err(), GfError::Underdetermined);

        // Inconsistent: duplicate equation with different RHS.
        let tall = Matrix::from_rows(vec![vec![1, 0], vec![1, 0]]);
        let rhs = Matrix::from_rows(vec![vec![1], vec![2]]);
        assert_eq!(f.solve(&tall, &rhs).unwrap_err(), GfError::NoSolution);
    }

    #[test]
    fn invert_matches_solve() {
        let f = Field::gf256();
        let a = f.cauchy_matrix(&[0, 1, 2, 3], &[4, 5, 6, 7]).unwrap();
        let inv = f.invert(&a).unwrap();
        assert_eq!(f.matmul(&a, &inv), Matrix::identity(4));
        // AX = I is inconsistent for a singular A.
        let singular = Matrix::from_rows(vec![vec![1, 1], vec![1, 1]]);
        assert_eq!(f.invert(&singular).unwrap_err(), GfError::NoSolution);
    }

    #[test]
    fn rref_membership_and_rank() {
        let f = Field::gf256();
        let mut acc = Rref::new(f, 3);
        assert!(acc.insert(&[1, 2, 3]));
        assert!(acc.insert(&[0, 5, 7]));
        assert!(!acc.insert(&[1, 7, 4])); // = row1 + row2
        assert_eq!(acc.rank(), 2);
        assert!(acc.contains(&[1, 7, 4]));
        assert!(!acc.contains(&[0, 0, 1]));
    }

    #[test]
    fn mul_table_agrees_with_carryless_multiply() {
        for width in [1u8, 4, 8] {
            let f = Field::with_width(width).unwrap();
            let t = MulTable::new(f).unwrap();
            for a in 0..f.order() as Elem {
                for b in 0..f.order() as Elem {
                    assert_eq!(t.mul(a, b), f.mul(a, b), "width {width}: {a}*{b}");
                }
            }
        }
        assert!(MulTable::new(Field::with_width(9).unwrap()).is_none());

        // A table-backed accumulator reaches the same basis as a plain one.
        let f = Field::gf256();
        let table = std::sync::Arc::new(MulTable::new(f).unwrap());
        let mut plain = Rref::new(f, 4);
        let mut fast = Rref::new(f, 4).with_table(table);
        for row in [[8u16, 0, 3, 1], [9, 9, 9, 9], [1, 2, 3, 4], [0, 0, 7, 7]] {
            assert_eq!(plain.insert(&row), fast.insert(&row));
        }
        assert_eq!(plain.rank(), fast.rank());
        assert!(fast.contains(&[8, 0, 3, 1]));
    }

    /// Strategy: a width in 1..=8 and two elements of that field.
    fn field_and_elems() -> impl Strategy<Value = (Field, Elem, Elem, Elem)> {
        (1u8..=8).prop_flat_map(|w| {
            let f = Field::with_width(w).unwrap();
            let top = f.order() as u16;
            (Just(f), 0..top, 0..top, 0..top)
        })
    }

    proptest! {
        #[test]
        fn field_laws((f, a, b, c) in field_and_elems()) {
            // Commutativity and associativity of both operations.
            prop_assert_eq!(f.add(a, b), f.add(b, a));
            prop_assert_eq!(f.mul(a, b), f.mul(b, a));
            prop_assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
            // Distributivity.
            prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
            // Identities and inverses.
            prop_assert_eq!(f.mul(a, 1), a);
            prop_assert_eq!(f.add(a, a), 0);
            if a != 0 {
                prop_assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
            }
        }

        #[test]
        fn rank_invariant_under_row_operations(seed in 0u64..256, scale in 1u16..255) {
            // Swapping rows, scaling a row, and adding one row to another
            // preserve rank.
            let f = Field::gf256();
            let mut v = seed;
            let mut next = || { v = v.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407); (v >> 33) as Elem & 0xFF };
            let m = Matrix::from_rows((0..4).map(|_| (0..5).map(|_| next()).collect()).collect());
            let base = f.rank(&m);

            let mut swapped = m.clone();
            for j in 0..5 {
                let (x, y) = (swapped.get(0, j), swapped.get(2, j));
                swapped.set(0, j, y);
                swapped.set(2, j, x);
            }
            prop_assert_eq!(f.rank(&swapped), base);

            let mut scaled = m.clone();
            for j in 0..5 {
                let val = f.mul(scale, scaled.get(1, j));
                scaled.set(1, j, val);
            }
            prop_assert_eq!(f.rank(&scaled), base);

            let mut added = m.clone();
            for j in 0..5 {
                let val = f.add(added.get(3, j), m.get(0, j));
                added.set(3, j, val);
            }
            prop_assert_eq!(f.rank(&added), base);
        }
    }
}
