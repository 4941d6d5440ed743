//! Non-perfect secret sharing of files over a finite field, plus the MDS
//! extension from shares to coded shares and exact reconstruction.
//!
//! A file is split into n−m parts and padded with m uniformly random keys;
//! the n shares are a Cauchy transform of that stack, and F coded shares
//! are produced by a systematic (F, n) MDS code. The share-to-coded-share
//! composite is itself one F×n Cauchy matrix, so *every* square submatrix
//! of the composite map is invertible: any n coded shares reconstruct the
//! stack, and any m or fewer reveal nothing about the parts.

use thiserror::Error;

use crate::gf::{Elem, Field, GfError, Matrix};

#[derive(Debug, Error)]
pub enum SharingError {
    #[error("field of order {actual} too small: need at least {required} elements")]
    FieldTooSmall { required: usize, actual: usize },
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("need at least {needed} coded shares with distinct rows, got {got}")]
    InsufficientShares { needed: usize, got: usize },
    #[error("selected coded-share rows are singular")]
    SingularSelection,
    #[error(transparent)]
    Field(#[from] GfError),
}

/// Matrices and sizes for one (m, n) sharing with an (F, n) MDS extension.
#[derive(Debug, Clone)]
pub struct SharingSpec {
    m: usize,
    n: usize,
    f: usize,
    field: Field,
    /// n×n Cauchy: stack (parts then keys) -> shares.
    a: Matrix,
    /// n×F systematic generator: shares -> coded shares (column per row f).
    g: Matrix,
    /// F×n Cauchy composite: stack -> coded shares; rows 0..n equal `a`.
    t: Matrix,
    part_len: usize,
}

impl SharingSpec {
    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn f(&self) -> usize {
        self.f
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn part_len(&self) -> usize {
        self.part_len
    }

    pub fn a(&self) -> &Matrix {
        &self.a
    }

    pub fn g(&self) -> &Matrix {
        &self.g
    }

    /// Row f of the composite stack -> coded-share map.
    pub fn composite_row(&self, f: usize) -> &[Elem] {
        self.t.row(f)
    }
}

/// Build the sharing spec deterministically from the field's natural
/// element order: the composite map is the Cauchy matrix on row points
/// {0..n-1} ∪ {2n..n+F-1} versus column points {n..2n-1}, making A (its
/// first n rows) exactly the Cauchy matrix on the first 2n elements and G
/// systematic.
pub fn make_sharing_spec(
    m: usize,
    n: usize,
    f: usize,
    field: Field,
    part_len: usize,
) -> Result<SharingSpec, SharingError> {
    if n == 0 || m >= n || f < n || part_len == 0 {
        return Err(SharingError::InvalidParameters(format!(
            "need F >= n > m >= 0 and part_len >= 1, got m={m} n={n} F={f} part_len={part_len}"
        )));
    }
    let required = (2 * n).max(n + f);
    if (field.order() as usize) < required {
        return Err(SharingError::FieldTooSmall { required, actual: field.order() as usize });
    }
    let rows: Vec<Elem> = (0..n).chain(2 * n..n + f).map(|x| x as Elem).collect();
    let cols: Vec<Elem> = (n..2 * n).map(|x| x as Elem).collect();
    let t = field.cauchy_matrix(&rows, &cols)?;
    let a = t.select(&(0..n).collect::<Vec<_>>(), &(0..n).collect::<Vec<_>>());
    // G = (T·A^{-1})^T is systematic: T's first n rows are A itself.
    let a_inv = field.invert(&a)?;
    let g = field.matmul(&t, &a_inv).transpose();
    Ok(SharingSpec { m, n, f, field, a, g, t, part_len })
}

fn check_payloads(
    what: &str,
    payloads: &[Vec<Elem>],
    count: usize,
    part_len: usize,
) -> Result<(), SharingError> {
    if payloads.len() != count {
        return Err(SharingError::DimensionMismatch(format!(
            "expected {count} {what}, got {}",
            payloads.len()
        )));
    }
    if let Some(bad) = payloads.iter().find(|p| p.len() != part_len) {
        return Err(SharingError::DimensionMismatch(format!(
            "{what} length {} != part_len {part_len}",
            bad.len()
        )));
    }
    Ok(())
}

/// Apply a matrix to a stack of payload vectors, coordinate-wise.
fn apply(field: Field, rows: &Matrix, stack: &[&Vec<Elem>], part_len: usize) -> Vec<Vec<Elem>> {
    (0..rows.rows())
        .map(|r| {
            (0..part_len)
                .map(|c| {
                    stack
                        .iter()
                        .enumerate()
                        .fold(0, |acc, (j, payload)| {
                            field.add(acc, field.mul(rows.get(r, j), payload[c]))
                        })
                })
                .collect()
        })
        .collect()
}

/// Produce the n shares of one file: share s = Σ_j A[s,j]·stack[j], where
/// the stack is the n−m parts followed by the m keys.
pub fn share_file(
    spec: &SharingSpec,
    parts: &[Vec<Elem>],
    keys: &[Vec<Elem>],
) -> Result<Vec<Vec<Elem>>, SharingError> {
    check_payloads("parts", parts, spec.n - spec.m, spec.part_len)?;
    check_payloads("keys", keys, spec.m, spec.part_len)?;
    let stack: Vec<&Vec<Elem>> = parts.iter().chain(keys).collect();
    Ok(apply(spec.field, &spec.a, &stack, spec.part_len))
}

/// Extend n shares to F coded shares; the first n equal the shares.
pub fn mds_extend(
    spec: &SharingSpec,
    shares: &[Vec<Elem>],
) -> Result<Vec<Vec<Elem>>, SharingError> {
    check_payloads("shares", shares, spec.n, spec.part_len)?;
    let stack: Vec<&Vec<Elem>> = shares.iter().collect();
    Ok(apply(spec.field, &spec.g.transpose(), &stack, spec.part_len))
}

/// A reconstructed file: its n−m parts and the m sharing keys.
pub type PartsAndKeys = (Vec<Vec<Elem>>, Vec<Vec<Elem>>);

/// Invert the sharing from any n coded shares with distinct row indices;
/// returns (parts, keys).
pub fn reconstruct_file(
    spec: &SharingSpec,
    coded: &[(usize, Vec<Elem>)],
) -> Result<PartsAndKeys, SharingError> {
    let mut seen = vec![false; spec.f];
    let mut chosen: Vec<&(usize, Vec<Elem>)> = Vec::with_capacity(spec.n);
    for entry in coded {
        let (row, payload) = entry;
        if *row >= spec.f {
            return Err(SharingError::DimensionMismatch(format!(
                "coded-share row {row} out of range 0..{}",
                spec.f
            )));
        }
        if payload.len() != spec.part_len {
            return Err(SharingError::DimensionMismatch(format!(
                "coded-share length {} != part_len {}",
                payload.len(),
                spec.part_len
            )));
        }
        if !seen[*row] {
            seen[*row] = true;
            chosen.push(entry);
            if chosen.len() == spec.n {
                break;
            }
        }
    }
    if chosen.len() < spec.n {
        return Err(SharingError::InsufficientShares { needed: spec.n, got: chosen.len() });
    }
    let sel = Matrix::from_rows(chosen.iter().map(|(r, _)| spec.t.row(*r).to_vec()).collect());
    let rhs = Matrix::from_rows(chosen.iter().map(|(_, p)| p.clone()).collect());
    let stack = spec.field.solve(&sel, &rhs).map_err(|_| SharingError::SingularSelection)?;
    let parts = (0..spec.n - spec.m).map(|r| stack.row(r).to_vec()).collect();
    let keys = (spec.n - spec.m..spec.n).map(|r| stack.row(r).to_vec()).collect();
    Ok((parts, keys))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combin::subsets;
    use rand::{RngCore, SeedableRng};
    use rand_chacha::ChaCha12Rng;

    fn rng(seed: u64) -> ChaCha12Rng {
        ChaCha12Rng::seed_from_u64(seed)
    }

    fn random_payload(field: Field, part_len: usize, rng: &mut ChaCha12Rng) -> Vec<Elem> {
        (0..part_len).map(|_| (rng.next_u32() & (field.order() - 1)) as Elem).collect()
    }

    #[test]
    fn spec_shapes_and_systematic_prefix() {
        let spec = make_sharing_spec(5, 8, 15, Field::gf256(), 1).unwrap();
        assert_eq!((spec.m(), spec.n(), spec.f()), (5, 8, 15));
        assert_eq!((spec.a().rows(), spec.a().cols()), (8, 8));
        assert_eq!((spec.g().rows(), spec.g().cols()), (8, 15));
        for s in 0..8 {
            for f in 0..15 {
                let want = if s == f { 1 } else { 0 };
                if f < 8 {
                    assert_eq!(spec.g().get(s, f), want, "systematic block at ({s},{f})");
                }
            }
        }
        // Degenerate m=0, F=n: G is exactly the identity.
        let spec = make_sharing_spec(0, 4, 4, Field::gf256(), 1).unwrap();
        for s in 0..4 {
            for f in 0..4 {
                assert_eq!(spec.g().get(s, f), u16::from(s == f));
            }
        }
        // Example 3's sizes fit GF(2^8): need max(22, 25) = 25 elements.
        make_sharing_spec(7, 11, 14, Field::gf256(), 1).unwrap();
    }

    #[test]
    fn field_too_small_reports_requirement() {
        let f16 = Field::with_width(4).unwrap();
        match make_sharing_spec(5, 8, 15, f16, 1) {
            Err(SharingError::FieldTooSmall { required: 23, actual: 16 }) => {}
            other => panic!("unexpected: {other:?}"),
        }
        make_sharing_spec(5, 8, 15, Field::with_width(5).unwrap(), 1).unwrap();
        assert!(make_sharing_spec(3, 3, 5, Field::gf256(), 1).is_err());
        assert!(make_sharing_spec(0, 2, 1, Field::gf256(), 1).is_err());
    }

    #[test]
    fn composite_map_is_mds_exhaustively() {
        // Every n-subset of composite rows is invertible (checked by rank).
        for (m, n, f) in [(1, 2, 5), (2, 3, 7), (5, 8, 15), (7, 11, 14)] {
            let spec = make_sharing_spec(m, n, f, Field::gf256(), 1).unwrap();
            for rows in subsets(f, n) {
                let idx: Vec<usize> = rows.iter().map(|&r| r - 1).collect();
                let cols: Vec<usize> = (0..n).collect();
                let sub = spec.t.select(&idx, &cols);
                assert_eq!(spec.field.rank(&sub), n, "rows {rows:?} of ({m},{n},{f})");
            }
        }
    }

    #[test]
    fn any_m_coded_shares_leak_nothing_about_parts() {
        // Rank oracle: for row subset S with |S| <= m, zeroing the part
        // columns must not change the rank (the key block already spans).
        for (m, n, f) in [(1, 2, 5), (2, 3, 7), (3, 5, 9)] {
            let spec = make_sharing_spec(m, n, f, Field::gf256(), 1).unwrap();
            for size in 1..=m {
                for rows in subsets(f, size) {
                    let idx: Vec<usize> = rows.iter().map(|&r| r - 1).collect();
                    let all: Vec<usize> = (0..n).collect();
                    let sub = spec.t.select(&idx, &all);
                    let mut keys_only = sub.clone();
                    for r in 0..keys_only.rows() {
                        for c in 0..n - m {
                            keys_only.set(r, c, 0);
                        }
                    }
                    assert_eq!(
                        spec.field.rank(&sub),
                        spec.field.rank(&keys_only),
                        "rows {rows:?} of ({m},{n},{f})"
                    );
                }
            }
        }
    }

    #[test]
    fn share_extend_reconstruct_round_trip() {
        let mut rng = rng(7);
        for (m, n, f, part_len) in [(5, 8, 15, 1), (7, 11, 14, 3), (1, 2, 4, 2), (0, 3, 5, 1)] {
            let field = Field::gf256();
            let spec = make_sharing_spec(m, n, f, field, part_len).unwrap();
            let parts: Vec<Vec<Elem>> =
                (0..n - m).map(|_| random_payload(field, part_len, &mut rng)).collect();
            let keys: Vec<Vec<Elem>> =
                (0..m).map(|_| random_payload(field, part_len, &mut rng)).collect();
            let shares = share_file(&spec, &parts, &keys).unwrap();
            assert_eq!(shares.len(), n);
            let coded = mds_extend(&spec, &shares).unwrap();
            assert_eq!(coded.len(), f);
            assert_eq!(&coded[..n], &shares[..], "systematic prefix");

            // Reconstruct from the systematic rows and from the last n rows.
            for idx in [
                (0..n).collect::<Vec<_>>(),
                (f - n..f).collect::<Vec<_>>(),
            ] {
                let selection: Vec<(usize, Vec<Elem>)> =
                    idx.iter().map(|&r| (r, coded[r].clone())).collect();
                let (got_parts, got_keys) = reconstruct_file(&spec, &selection).unwrap();
                assert_eq!(got_parts, parts);
                assert_eq!(got_keys, keys);
            }

            // Too few rows, and duplicated rows do not double-count.
            let short: Vec<(usize, Vec<Elem>)> =
                (0..n - 1).map(|r| (r, coded[r].clone())).collect();
            assert!(matches!(
                reconstruct_file(&spec, &short),
                Err(SharingError::InsufficientShares { .. })
            ));
            let dupes: Vec<(usize, Vec<Elem>)> = vec![(0, coded[0].clone()); n + 2];
            assert!(matches!(
                reconstruct_file(&spec, &dupes),
                Err(SharingError::InsufficientShares { .. })
            ));
        }
    }

    #[test]
    fn sharing_is_linear() {
        let field = Field::gf256();
        let spec = make_sharing_spec(2, 4, 7, field, 2).unwrap();
        let mut rng = rng(11);
        let alpha: Elem = (rng.next_u32() & 0xFF) as Elem;
        let draw = |rng: &mut ChaCha12Rng, count: usize| -> Vec<Vec<Elem>> {
            (0..count).map(|_| random_payload(field, 2, rng)).collect()
        };
        let (p1, k1) = (draw(&mut rng, 2), draw(&mut rng, 2));
        let (p2, k2) = (draw(&mut rng, 2), draw(&mut rng, 2));
        let combine = |x: &[Vec<Elem>], y: &[Vec<Elem>]| -> Vec<Vec<Elem>> {
            x.iter()
                .zip(y)
                .map(|(a, b)| {
                    a.iter().zip(b).map(|(&u, &v)| field.add(field.mul(alpha, u), v)).collect()
                })
                .collect()
        };
        let lhs = share_file(&spec, &combine(&p1, &p2), &combine(&k1, &k2)).unwrap();
        let s1 = share_file(&spec, &p1, &k1).unwrap();
        let s2 = share_file(&spec, &p2, &k2).unwrap();
        assert_eq!(lhs, combine(&s1, &s2));
    }

    #[test]
    fn dimension_mismatches_are_rejected() {
        let spec = make_sharing_spec(1, 3, 5, Field::gf256(), 2).unwrap();
        let ok = vec![vec![0u16, 0]; 2];
        let bad_count = vec![vec![0u16, 0]; 3];
        let bad_len = vec![vec![0u16]; 2];
        let keys = vec![vec![0u16, 0]; 1];
        assert!(share_file(&spec, &ok, &keys).is_ok());
        assert!(matches!(
            share_file(&spec, &bad_count, &keys),
            Err(SharingError::DimensionMismatch(_))
        ));
        assert!(matches!(
            share_file(&spec, &bad_len, &keys),
            Err(SharingError::DimensionMismatch(_))
        ));
        assert!(mds_extend(&spec, &ok).is_err());
        assert!(reconstruct_file(&spec, &[(9, vec![0, 0])]).is_err());
    }
}
