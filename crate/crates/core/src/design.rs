//! Combinatorial t-designs: the block structures behind the second hotplug
//! construction.
//!
//! A t-(v, k, λ) design is a collection of k-subsets (*blocks*) of a v-point
//! ground set such that every t-subset of points lies in exactly λ blocks.
//! Two classical small designs ship as a named catalog: the Fano plane
//! (2-(7,3,1)) and a Steiner quadruple system SQS(8) (3-(8,4,1)), with block
//! orders fixed so that array constructions and witness searches built on
//! them are reproducible.

use std::fmt::Write as _;
use std::path::Path;

use thiserror::Error;

use crate::combin::{binomial, subsets};

#[derive(Debug, Error)]
pub enum DesignError {
    #[error("unknown design {0:?} (catalog: fano-7-3-1, sqs-8-4-1)")]
    UnknownDesign(String),
    #[error("invalid design parameters v={v} k={k} t={t} lambda={lambda}")]
    InvalidParameters { v: usize, k: usize, t: usize, lambda: usize },
    #[error("block {block} has {size} points, expected k={k}")]
    WrongBlockSize { block: usize, size: usize, k: usize },
    #[error("block {block} contains point {point} outside 1..={v}")]
    PointOutOfRange { block: usize, point: usize, v: usize },
    #[error("block {block} repeats point {point}")]
    DuplicatePoint { block: usize, point: usize },
    #[error("index {index} out of range 0..={max}")]
    OutOfRange { index: usize, max: usize },
    #[error("count for s={s} is not integral; not a valid t-design")]
    NonIntegralCount { s: usize },
    #[error("t-subset {t_subset:?} lies in {count} blocks, expected lambda={expected}")]
    DesignInvalid { t_subset: Vec<usize>, count: usize, expected: usize },
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// A t-(v, k, λ) design candidate. Construction checks block shape only;
/// the defining counting property is checked by [`verify_design`].
///
/// Block order and the point order inside each block are preserved exactly as
/// given: downstream constructions index blocks by position, and the text
/// format round-trips bit-exactly.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TDesign {
    v: usize,
    k: usize,
    t: usize,
    lambda: usize,
    blocks: Vec<Vec<usize>>,
}

impl TDesign {
    pub fn new(
        v: usize,
        k: usize,
        t: usize,
        lambda: usize,
        blocks: Vec<Vec<usize>>,
    ) -> Result<Self, DesignError> {
        if t == 0 || t > k || k > v || lambda == 0 {
            return Err(DesignError::InvalidParameters { v, k, t, lambda });
        }
        for (idx, block) in blocks.iter().enumerate() {
            let block_no = idx + 1;
            if block.len() != k {
                return Err(DesignError::WrongBlockSize { block: block_no, size: block.len(), k });
            }
            let mut seen = vec![false; v + 1];
            for &point in block {
                if point == 0 || point > v {
                    return Err(DesignError::PointOutOfRange { block: block_no, point, v });
                }
                if seen[point] {
                    return Err(DesignError::DuplicatePoint { block: block_no, point });
                }
                seen[point] = true;
            }
        }
        Ok(TDesign { v, k, t, lambda, blocks })
    }

    pub fn v(&self) -> usize {
        self.v
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn t(&self) -> usize {
        self.t
    }

    pub fn lambda(&self) -> usize {
        self.lambda
    }

    /// Number of blocks, usually written b.
    pub fn b(&self) -> usize {
        self.blocks.len()
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    /// Whether block `idx` (0-based) contains the point.
    pub fn block_contains(&self, idx: usize, point: usize) -> bool {
        self.blocks[idx].contains(&point)
    }

    /// λ_s: the number of blocks through any fixed s-subset of points,
    /// `λ·C(v−s, t−s) / C(k−s, t−s)`, for `0 ≤ s ≤ t`.
    pub fn lambda_s(&self, s: usize) -> Result<usize, DesignError> {
        if s > self.t {
            return Err(DesignError::OutOfRange { index: s, max: self.t });
        }
        let num = self.lambda * binomial(self.v - s, self.t - s);
        let den = binomial(self.k - s, self.t - s);
        if !num.is_multiple_of(den) {
            return Err(DesignError::NonIntegralCount { s });
        }
        Ok(num / den)
    }

    /// λ_i^t: the number of blocks through a fixed i-subset that avoid a
    /// fixed disjoint (t−i)-subset, `λ·C(v−t, k−i) / C(v−t, k−t)`, for
    /// `0 ≤ i ≤ t`.
    pub fn lambda_i_t(&self, i: usize) -> Result<usize, DesignError> {
        if i > self.t {
            return Err(DesignError::OutOfRange { index: i, max: self.t });
        }
        let num = self.lambda * binomial(self.v - self.t, self.k - i);
        let den = binomial(self.v - self.t, self.k - self.t);
        if !num.is_multiple_of(den) {
            return Err(DesignError::NonIntegralCount { s: i });
        }
        Ok(num / den)
    }

    /// Render in the file format: header `v k t lambda`, then one block per
    /// line as space-separated points. Bit-exact round trip with the parser
    /// for files without comments.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{} {} {} {}", self.v, self.k, self.t, self.lambda);
        for block in &self.blocks {
            let line: Vec<String> = block.iter().map(usize::to_string).collect();
            let _ = writeln!(out, "{}", line.join(" "));
        }
        out
    }

    /// Parse the file format. `#` starts a comment line; blank lines are
    /// ignored.
    pub fn from_text(text: &str) -> Result<Self, DesignError> {
        let mut header: Option<(usize, usize, usize, usize)> = None;
        let mut blocks = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let fields: Result<Vec<usize>, _> = line.split_whitespace().map(str::parse).collect();
            let fields = fields.map_err(|e| DesignError::Parse {
                line: line_no,
                msg: format!("expected integers: {e}"),
            })?;
            if header.is_none() {
                if fields.len() != 4 {
                    return Err(DesignError::Parse {
                        line: line_no,
                        msg: format!("header needs 4 fields (v k t lambda), found {}", fields.len()),
                    });
                }
                header = Some((fields[0], fields[1], fields[2], fields[3]));
            } else {
                blocks.push(fields);
            }
        }
        let (v, k, t, lambda) = header.ok_or(DesignError::Parse {
            line: 0,
            msg: "missing header line".into(),
        })?;
        TDesign::new(v, k, t, lambda, blocks)
    }
}

/// Check the defining property: every t-subset of `[1..=v]` lies in exactly
/// λ blocks. Returns the first counterexample subset otherwise.
pub fn verify_design(d: &TDesign) -> Result<(), DesignError> {
    for t_subset in subsets(d.v, d.t) {
        let count = (0..d.b())
            .filter(|&b| t_subset.iter().all(|&p| d.block_contains(b, p)))
            .count();
        if count != d.lambda {
            return Err(DesignError::DesignInvalid { t_subset, count, expected: d.lambda });
        }
    }
    Ok(())
}

/// Named small designs with pinned block order.
pub fn catalog(name: &str) -> Result<TDesign, DesignError> {
    match name {
        "fano-7-3-1" => TDesign::new(
            7,
            3,
            2,
            1,
            vec![
                vec![1, 2, 7],
                vec![1, 4, 5],
                vec![1, 3, 6],
                vec![4, 6, 7],
                vec![2, 5, 6],
                vec![3, 5, 7],
                vec![2, 3, 4],
            ],
        ),
        "sqs-8-4-1" => TDesign::new(
            8,
            4,
            3,
            1,
            vec![
                vec![1, 2, 5, 6],
                vec![3, 4, 7, 8],
                vec![2, 4, 6, 8],
                vec![1, 3, 5, 7],
                vec![1, 4, 5, 8],
                vec![2, 3, 6, 7],
                vec![1, 2, 3, 4],
                vec![5, 6, 7, 8],
                vec![1, 2, 7, 8],
                vec![3, 4, 5, 6],
                vec![1, 3, 6, 8],
                vec![2, 4, 5, 7],
                vec![1, 4, 6, 7],
                vec![2, 3, 5, 8],
            ],
        ),
        other => Err(DesignError::UnknownDesign(other.into())),
    }
}

/// Load a design from a file in the documented text format.
pub fn load_design(path: &Path) -> Result<TDesign, DesignError> {
    TDesign::from_text(&std::fs::read_to_string(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use itertools::Itertools;

    #[test]
    fn catalog_designs_satisfy_their_parameters() {
        for name in ["fano-7-3-1", "sqs-8-4-1"] {
            let d = catalog(name).unwrap();
            verify_design(&d).unwrap_or_else(|e| panic!("{name}: {e}"));
        }
        assert!(matches!(catalog("agh-1-2-3"), Err(DesignError::UnknownDesign(_))));
    }

    #[test]
    fn lambda_values_fano() {
        let d = catalog("fano-7-3-1").unwrap();
        assert_eq!(d.lambda_s(0).unwrap(), 7); // = b
        assert_eq!(d.lambda_s(1).unwrap(), 3); // = replication r
        assert_eq!(d.lambda_s(2).unwrap(), 1); // = lambda
        assert_eq!(d.lambda_i_t(0).unwrap(), 2);
        assert_eq!(d.lambda_i_t(1).unwrap(), 2);
        assert_eq!(d.lambda_i_t(2).unwrap(), 1);
        assert!(matches!(d.lambda_s(3), Err(DesignError::OutOfRange { index: 3, max: 2 })));
        assert!(matches!(d.lambda_i_t(5), Err(DesignError::OutOfRange { index: 5, max: 2 })));
    }

    #[test]
    fn lambda_values_sqs() {
        let d = catalog("sqs-8-4-1").unwrap();
        assert_eq!(d.lambda_s(0).unwrap(), 14);
        assert_eq!(d.lambda_s(1).unwrap(), 7);
        assert_eq!(d.lambda_s(2).unwrap(), 3);
        assert_eq!(d.lambda_s(3).unwrap(), 1);
        assert_eq!(
            (0..=3).map(|i| d.lambda_i_t(i).unwrap()).collect::<Vec<_>>(),
            vec![1, 2, 2, 1]
        );
    }

    #[test]
    fn lambda_closed_forms_match_exhaustive_counts() {
        // For both catalog designs and every s: count blocks through every
        // s-subset (lambda_s) and blocks through an s-subset avoiding a
        // disjoint (t-s)-subset (lambda_i_t), exhaustively over all choices.
        for name in ["fano-7-3-1", "sqs-8-4-1"] {
            let d = catalog(name).unwrap();
            for s in 0..=d.t() {
                let ls = d.lambda_s(s).unwrap();
                let lit = d.lambda_i_t(s).unwrap();
                for y in subsets(d.v(), s) {
                    let through = (0..d.b())
                        .filter(|&b| y.iter().all(|&p| d.block_contains(b, p)))
                        .count();
                    assert_eq!(through, ls, "{name} lambda_{s} at {y:?}");
                    let rest: Vec<usize> =
                        (1..=d.v()).filter(|p| !y.contains(p)).collect();
                    for avoid in rest.into_iter().combinations(d.t() - s) {
                        let qualifying = (0..d.b())
                            .filter(|&b| {
                                y.iter().all(|&p| d.block_contains(b, p))
                                    && avoid.iter().all(|&p| !d.block_contains(b, p))
                            })
                            .count();
                        assert_eq!(qualifying, lit, "{name} lambda_{s}^t at {y:?} avoiding {avoid:?}");
                    }
                }
                // Divisibility identity lambda_s * C(k-s, t-s) = lambda * C(v-s, t-s).
                assert_eq!(
                    ls * binomial(d.k() - s, d.t() - s),
                    d.lambda() * binomial(d.v() - s, d.t() - s)
                );
            }
        }
    }

    #[test]
    fn verify_reports_counterexample() {
        let mut blocks = catalog("fano-7-3-1").unwrap().blocks().to_vec();
        blocks[0] = vec![1, 2, 3]; // clobber {1,2,7}: {1,3} is now covered twice
        let d = TDesign::new(7, 3, 2, 1, blocks).unwrap();
        match verify_design(&d) {
            Err(DesignError::DesignInvalid { t_subset, count, expected }) => {
                assert_eq!(t_subset, vec![1, 3]);
                assert_eq!((count, expected), (2, 1));
            }
            other => panic!("expected counterexample, got {other:?}"),
        }
    }

    #[test]
    fn structural_errors() {
        assert!(matches!(
            TDesign::new(7, 3, 0, 1, vec![]),
            Err(DesignError::InvalidParameters { .. })
        ));
        assert!(matches!(
            TDesign::new(7, 3, 2, 1, vec![vec![1, 2]]),
            Err(DesignError::WrongBlockSize { block: 1, size: 2, k: 3 })
        ));
        assert!(matches!(
            TDesign::new(7, 3, 2, 1, vec![vec![1, 2, 9]]),
            Err(DesignError::PointOutOfRange { block: 1, point: 9, v: 7 })
        ));
        assert!(matches!(
            TDesign::new(7, 3, 2, 1, vec![vec![1, 2, 2]]),
            Err(DesignError::DuplicatePoint { block: 1, point: 2 })
        ));
    }

    #[test]
    fn text_round_trip_is_bit_exact() {
        for name in ["fano-7-3-1", "sqs-8-4-1"] {
            let d = catalog(name).unwrap();
            let text = d.to_text();
            let reparsed = TDesign::from_text(&text).unwrap();
            assert_eq!(reparsed, d);
            assert_eq!(reparsed.to_text(), text);
        }
        // Comments and blank lines are tolerated on input.
        let commented = "# Fano plane\n7 3 2 1\n\n1 2 7\n1 4 5\n1 3 6\n4 6 7\n2 5 6\n3 5 7\n2 3 4\n";
        let d = TDesign::from_text(commented).unwrap();
        assert_eq!(d, catalog("fano-7-3-1").unwrap());
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(
            TDesign::from_text("7 3 2\n1 2 7\n"),
            Err(DesignError::Parse { line: 1, .. })
        ));
        assert!(matches!(
            TDesign::from_text("7 3 2 1\n1 x 7\n"),
            Err(DesignError::Parse { line: 2, .. })
        ));
        assert!(matches!(
            TDesign::from_text("# nothing\n"),
            Err(DesignError::Parse { line: 0, .. })
        ));
    }

    #[test]
    fn load_design_from_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("fano.design");
        std::fs::write(&path, catalog("fano-7-3-1").unwrap().to_text()).unwrap();
        let d = load_design(&path).unwrap();
        assert_eq!(d, catalog("fano-7-3-1").unwrap());
        assert!(matches!(
            load_design(&dir.path().join("missing.design")),
            Err(DesignError::Io(_))
        ));
    }
}
