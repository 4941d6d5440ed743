//! Placement delivery arrays (PDAs): the combinatorial objects that encode a
//! coded-caching placement and delivery schedule.
//!
//! A `(K, F, Z, S)` PDA is an F x K array over `*` and integers `1..=S`
//! satisfying:
//!
//! * **C1** — every column contains exactly `Z` stars;
//! * **C2** — every integer in `[1, S]` occurs at least once;
//! * **C3** — two equal integers never share a row or column, and each sees a
//!   star at the two "crossing" positions.
//!
//! The Maddah-Ali–Niesen array `man_pda(K, t)` is the canonical family: rows
//! are the t-subsets of `[K]` in lexicographic order, the cell at (row `T`,
//! column `k`) is a star iff `k ∈ T` and otherwise the lexicographic rank of
//! `T ∪ {k}` among (t+1)-subsets.
//!
//! Arrays also admit `-` (null) cells so the same grid type can carry the
//! star/null outer arrays of hotplug constructions; a valid PDA must not
//! contain any.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::analysis::{Provenance, RatePoint, Rational};
use crate::combin::{binomial, lex_rank, subsets};

/// One cell of an array: star, null, or an integer symbol (1-based).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Cell {
    Star,
    Null,
    Int(u32),
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cell::Star => write!(f, "*"),
            Cell::Null => write!(f, "-"),
            Cell::Int(s) => write!(f, "{s}"),
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PdaError {
    #[error("invalid t={t} for K={k}")]
    InvalidT { k: usize, t: usize },
    #[error("number of files must be at least 1, got {0}")]
    InvalidFileCount(usize),
    #[error("array must be non-empty")]
    Empty,
    #[error("line {line}: cannot parse cell token {token:?}")]
    Parse { line: usize, token: String },
    #[error("line {line}: expected {expected} cells, found {found}")]
    RaggedRow { line: usize, expected: usize, found: usize },
}

/// An F x K grid of [`Cell`]s, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pda {
    f: usize,
    k: usize,
    cells: Vec<Cell>,
}

impl Pda {
    pub fn new(f: usize, k: usize, cells: Vec<Cell>) -> Result<Self, PdaError> {
        if f == 0 || k == 0 {
            return Err(PdaError::Empty);
        }
        assert_eq!(cells.len(), f * k, "cell count must equal F*K");
        Ok(Pda { f, k, cells })
    }

    /// Number of rows F.
    pub fn rows(&self) -> usize {
        self.f
    }

    /// Number of columns K.
    pub fn cols(&self) -> usize {
        self.k
    }

    /// Cell at 0-based (row, col).
    pub fn get(&self, row: usize, col: usize) -> Cell {
        self.cells[row * self.k + col]
    }

    pub fn set(&mut self, row: usize, col: usize, cell: Cell) {
        self.cells[row * self.k + col] = cell;
    }

    /// Stars in a 0-based column.
    pub fn column_stars(&self, col: usize) -> usize {
        (0..self.f).filter(|&r| self.get(r, col) == Cell::Star).count()
    }

    /// Render as text: one row per line, cells space-separated, `*` for
    /// stars, `-` for nulls, decimal digits for integers.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for r in 0..self.f {
            for c in 0..self.k {
                if c > 0 {
                    out.push(' ');
                }
                out.push_str(&self.get(r, c).to_string());
            }
            out.push('\n');
        }
        out
    }

    /// Parse the text format produced by [`Pda::to_text`]. Lines that are
    /// empty or start with `#` are ignored.
    pub fn from_text(text: &str) -> Result<Self, PdaError> {
        let mut rows: Vec<Vec<Cell>> = Vec::new();
        let mut width = None;
        for (idx, line) in text.lines().enumerate() {
            let line_no = idx + 1;
            let trimmed = line.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let mut row = Vec::new();
            for token in trimmed.split_whitespace() {
                let cell = match token {
                    "*" => Cell::Star,
                    "-" => Cell::Null,
                    _ => match token.parse::<u32>() {
                        Ok(s) if s >= 1 => Cell::Int(s),
                        _ => {
                            return Err(PdaError::Parse { line: line_no, token: token.into() })
                        }
                    },
                };
                row.push(cell);
            }
            match width {
                None => width = Some(row.len()),
                Some(w) if w != row.len() => {
                    return Err(PdaError::RaggedRow { line: line_no, expected: w, found: row.len() })
                }
                _ => {}
            }
            rows.push(row);
        }
        let k = width.ok_or(PdaError::Empty)?;
        let f = rows.len();
        Pda::new(f, k, rows.into_iter().flatten().collect())
    }
}

/// Parameters of a valid PDA.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PdaParams {
    pub k: usize,
    pub f: usize,
    pub z: usize,
    pub s: usize,
}

/// Why an array fails to be a PDA: the first violated condition, with the
/// offending cells (1-based coordinates).
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Violation {
    #[error("null cell at ({row}, {col}): a PDA admits only stars and integers")]
    NullCell { row: usize, col: usize },
    #[error("column {col} has {count} stars, column 1 has {expected} (C1)")]
    UnevenStars { col: usize, count: usize, expected: usize },
    #[error("integer {s} never occurs although {max} does (C2)")]
    MissingSymbol { s: u32, max: u32 },
    #[error("integer {s} at ({r1}, {c1}) and ({r2}, {c2}): {kind} (C3)")]
    RepeatClash { s: u32, r1: usize, c1: usize, r2: usize, c2: usize, kind: ClashKind },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClashKind {
    SameRow,
    SameColumn,
    /// The crossing cell at the given 1-based position is not a star.
    MissingStar { row: usize, col: usize },
}

impl fmt::Display for ClashKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ClashKind::SameRow => write!(f, "repeated in one row"),
            ClashKind::SameColumn => write!(f, "repeated in one column"),
            ClashKind::MissingStar { row, col } => {
                write!(f, "crossing cell ({row}, {col}) is not a star")
            }
        }
    }
}

/// Check conditions C1-C3 and return the array's parameters, or the first
/// violated condition (C1, then C2, then C3; witnesses in row-major order).
pub fn verify_pda(p: &Pda) -> Result<PdaParams, Violation> {
    // Structural: no null cells.
    for r in 0..p.rows() {
        for c in 0..p.cols() {
            if p.get(r, c) == Cell::Null {
                return Err(Violation::NullCell { row: r + 1, col: c + 1 });
            }
        }
    }
    // C1: uniform star count per column.
    let z = p.column_stars(0);
    for c in 1..p.cols() {
        let count = p.column_stars(c);
        if count != z {
            return Err(Violation::UnevenStars { col: c + 1, count, expected: z });
        }
    }
    // C2: the symbol set is exactly [1, S].
    let mut occurrences: BTreeMap<u32, Vec<(usize, usize)>> = BTreeMap::new();
    for r in 0..p.rows() {
        for c in 0..p.cols() {
            if let Cell::Int(s) = p.get(r, c) {
                occurrences.entry(s).or_default().push((r, c));
            }
        }
    }
    let s_max = occurrences.keys().next_back().copied().unwrap_or(0);
    for s in 1..=s_max {
        if !occurrences.contains_key(&s) {
            return Err(Violation::MissingSymbol { s, max: s_max });
        }
    }
    // C3: equal integers pairwise in distinct rows and columns, with stars at
    // the crossing positions.
    for (&s, cells) in &occurrences {
        for (i, &(r1, c1)) in cells.iter().enumerate() {
            for &(r2, c2) in &cells[i + 1..] {
                let kind = if r1 == r2 {
                    Some(ClashKind::SameRow)
                } else if c1 == c2 {
                    Some(ClashKind::SameColumn)
                } else if p.get(r1, c2) != Cell::Star {
                    Some(ClashKind::MissingStar { row: r1 + 1, col: c2 + 1 })
                } else if p.get(r2, c1) != Cell::Star {
                    Some(ClashKind::MissingStar { row: r2 + 1, col: c1 + 1 })
                } else {
                    None
                };
                if let Some(kind) = kind {
                    return Err(Violation::RepeatClash {
                        s,
                        r1: r1 + 1,
                        c1: c1 + 1,
                        r2: r2 + 1,
                        c2: c2 + 1,
                        kind,
                    });
                }
            }
        }
    }
    Ok(PdaParams { k: p.cols(), f: p.rows(), z, s: s_max as usize })
}

/// The Maddah-Ali–Niesen PDA for `K` users at parameter `t ∈ [0, K]`.
///
/// Parameters: `F = C(K,t)`, `Z = C(K-1,t-1)`, `S = C(K,t+1)`; the array is
/// (t+1)-regular (every symbol occurs exactly t+1 times).
pub fn man_pda(k: usize, t: usize) -> Result<Pda, PdaError> {
    if k == 0 || t > k {
        return Err(PdaError::InvalidT { k, t });
    }
    let rows = subsets(k, t);
    let mut cells = Vec::with_capacity(rows.len() * k);
    for row in &rows {
        for user in 1..=k {
            if row.binary_search(&user).is_ok() {
                cells.push(Cell::Star);
            } else {
                let mut merged = row.clone();
                let pos = merged.partition_point(|&x| x < user);
                merged.insert(pos, user);
                cells.push(Cell::Int(lex_rank(&merged, k) as u32 + 1));
            }
        }
    }
    Pda::new(rows.len().max(1), k, cells)
}

/// Memory/rate point of the baseline (dedicated-key) scheme on `man_pda(K,t)`
/// serving `N` files, measured by counting on the built array: per user,
/// `M = (N * stars + distinct integers in the column) / (F - Z)` and
/// `R = S / (F - Z)`.
pub fn baseline_point(k: usize, t: usize, n: usize) -> Result<RatePoint, PdaError> {
    if k == 0 || t >= k {
        return Err(PdaError::InvalidT { k, t });
    }
    if n == 0 {
        return Err(PdaError::InvalidFileCount(n));
    }
    let p = man_pda(k, t)?;
    let params = verify_pda(&p).expect("construction yields a valid PDA");
    let (f, z, s) = (params.f, params.z, params.s);
    debug_assert_eq!(z, if t == 0 { 0 } else { binomial(k - 1, t - 1) });
    // Per-user cache load: N coded shares per star plus one key per distinct
    // integer in the user's column; uniform across columns by symmetry.
    let mut per_user = None;
    for c in 0..k {
        let mut ints: Vec<u32> = (0..f)
            .filter_map(|r| match p.get(r, c) {
                Cell::Int(s) => Some(s),
                _ => None,
            })
            .collect();
        ints.sort_unstable();
        ints.dedup();
        let load = n * p.column_stars(c) + ints.len();
        match per_user {
            None => per_user = Some(load),
            Some(prev) => debug_assert_eq!(prev, load, "baseline cache load must be uniform"),
        }
    }
    let units = (f - z) as i64;
    let m = Rational::new(per_user.expect("K >= 1") as i64, units);
    let r = Rational::new(s as i64, units);
    Ok(RatePoint { provenance: Provenance::Baseline { t }, m, r })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn cells(text: &str) -> Pda {
        Pda::from_text(text).unwrap()
    }

    #[test]
    fn man_4_2_matches_known_array() {
        let expected = "\
* * 1 2
* 1 * 3
* 2 3 *
1 * * 4
2 * 4 *
3 4 * *
";
        assert_eq!(man_pda(4, 2).unwrap().to_text(), expected);
    }

    #[test]
    fn man_2_1_matches_known_array() {
        assert_eq!(man_pda(2, 1).unwrap().to_text(), "* 1\n1 *\n");
    }

    #[test]
    fn man_edge_parameters() {
        // t = 0: one all-integer row 1..K.
        assert_eq!(man_pda(4, 0).unwrap().to_text(), "1 2 3 4\n");
        // t = K: one all-star column per user.
        assert_eq!(man_pda(3, 3).unwrap().to_text(), "* * *\n");
        assert_eq!(man_pda(3, 4).unwrap_err(), PdaError::InvalidT { k: 3, t: 4 });
    }

    #[test]
    fn man_params_match_closed_forms() {
        for k in 1..=8 {
            for t in 0..=k {
                let params = verify_pda(&man_pda(k, t).unwrap()).unwrap();
                let z = if t == 0 { 0 } else { binomial(k - 1, t - 1) };
                assert_eq!(
                    params,
                    PdaParams { k, f: binomial(k, t), z, s: binomial(k, t + 1) },
                    "K={k} t={t}"
                );
            }
        }
    }

    #[test]
    fn man_is_g_regular() {
        // Every symbol of man_pda(K, t) occurs exactly t+1 times.
        for k in 1..=8 {
            for t in 0..k {
                let p = man_pda(k, t).unwrap();
                let mut counts = std::collections::HashMap::new();
                for r in 0..p.rows() {
                    for c in 0..p.cols() {
                        if let Cell::Int(s) = p.get(r, c) {
                            *counts.entry(s).or_insert(0usize) += 1;
                        }
                    }
                }
                assert!(counts.values().all(|&n| n == t + 1), "K={k} t={t}");
            }
        }
    }

    #[test]
    fn verify_reports_first_violation() {
        assert_eq!(
            verify_pda(&cells("* -\n1 *")).unwrap_err(),
            Violation::NullCell { row: 1, col: 2 }
        );
        assert_eq!(
            verify_pda(&cells("* *\n1 *")).unwrap_err(),
            Violation::UnevenStars { col: 2, count: 2, expected: 1 }
        );
        assert_eq!(
            verify_pda(&cells("* 2\n2 *")).unwrap_err(),
            Violation::MissingSymbol { s: 1, max: 2 }
        );
        assert_eq!(
            verify_pda(&cells("1 1")).unwrap_err(),
            Violation::RepeatClash { s: 1, r1: 1, c1: 1, r2: 1, c2: 2, kind: ClashKind::SameRow }
        );
        assert_eq!(
            verify_pda(&cells("1 *\n1 *\n* 1\n* 2")).unwrap_err(),
            Violation::RepeatClash { s: 1, r1: 1, c1: 1, r2: 2, c2: 1, kind: ClashKind::SameColumn }
        );
        assert_eq!(
            verify_pda(&cells("1 2\n2 1")).unwrap_err(),
            Violation::RepeatClash {
                s: 1,
                r1: 1,
                c1: 1,
                r2: 2,
                c2: 2,
                kind: ClashKind::MissingStar { row: 1, col: 2 },
            }
        );
    }

    #[test]
    fn baseline_points_match_known_values() {
        let p = baseline_point(8, 4, 8).unwrap();
        assert_eq!((p.m, p.r), (Rational::from_integer(9), Rational::new(8, 5)));
        let p = baseline_point(8, 7, 8).unwrap();
        assert_eq!((p.m, p.r), (Rational::from_integer(57), Rational::from_integer(1)));
        for k in 2..=6 {
            let p = baseline_point(k, 0, 5).unwrap();
            assert_eq!((p.m, p.r), (Rational::from_integer(1), Rational::from_integer(k as i64)));
        }
        assert_eq!(baseline_point(8, 8, 8).unwrap_err(), PdaError::InvalidT { k: 8, t: 8 });
        assert_eq!(baseline_point(8, 3, 0).unwrap_err(), PdaError::InvalidFileCount(0));
    }

    #[test]
    fn baseline_monotone_in_t() {
        // More placement (larger t) trades memory for rate.
        let points: Vec<_> = (0..8).map(|t| baseline_point(8, t, 8).unwrap()).collect();
        for w in points.windows(2) {
            assert!(w[0].m < w[1].m);
            assert!(w[0].r > w[1].r);
        }
    }

    #[test]
    fn text_round_trip_and_errors() {
        let p = man_pda(5, 2).unwrap();
        assert_eq!(Pda::from_text(&p.to_text()).unwrap(), p);
        assert_eq!(
            Pda::from_text("* x\n").unwrap_err(),
            PdaError::Parse { line: 1, token: "x".into() }
        );
        assert_eq!(
            Pda::from_text("* 0\n").unwrap_err(),
            PdaError::Parse { line: 1, token: "0".into() }
        );
        assert_eq!(
            Pda::from_text("* 1\n2\n").unwrap_err(),
            PdaError::RaggedRow { line: 2, expected: 2, found: 1 }
        );
        assert_eq!(Pda::from_text("# only comments\n").unwrap_err(), PdaError::Empty);
    }

    proptest! {
        #[test]
        fn man_arrays_verify(k in 1usize..=8, t_frac in 0.0f64..=1.0) {
            let t = (t_frac * k as f64).floor() as usize;
            let p = man_pda(k, t).unwrap();
            prop_assert!(verify_pda(&p).is_ok());
        }

        #[test]
        fn tampering_star_to_int_breaks_verification(k in 2usize..=6, t in 1usize..=5, seed in 0u64..1000) {
            prop_assume!(t < k);
            let mut p = man_pda(k, t).unwrap();
            // Overwrite one star with a fresh symbol: C1 must catch it.
            let stars: Vec<(usize, usize)> = (0..p.rows())
                .flat_map(|r| (0..p.cols()).map(move |c| (r, c)))
                .filter(|&(r, c)| p.get(r, c) == Cell::Star)
                .collect();
            let (r, c) = stars[(seed as usize) % stars.len()];
            let s = verify_pda(&p).unwrap().s as u32;
            p.set(r, c, Cell::Int(s + 1));
            prop_assert!(verify_pda(&p).is_err());
        }
    }
}
