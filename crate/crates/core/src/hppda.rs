//! Hotplug placement delivery arrays: a pair (P, B) where P is an F×K star
//! pattern and B an F'×K' placement delivery array such that for every
//! K'-subset τ of users there is a row selection ζ with [P]_{ζ×τ} matching
//! B's star pattern. Two constructions are provided: one from a replication
//! pattern on t-subsets (Scheme 1) and one from a t-design (Scheme 2).

use std::fmt;

use thiserror::Error;

use crate::combin::{lex_rank, subsets};
use crate::design::{DesignError, TDesign};
use crate::pda::{man_pda, verify_pda, Cell, Pda, PdaError, Violation};

#[derive(Debug, Error)]
pub enum HpPdaError {
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error("multiplicity a_{s} = {given} outside 0..={max} (lambda_{s}^t = {max})")]
    MultiplicityOutOfRange { s: usize, given: usize, max: usize },
    #[error("invalid active set: {0}")]
    BadActiveSet(String),
    #[error("no witness row for active set {tau:?}")]
    WitnessNotFound { tau: Vec<usize> },
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("serialized arrays do not match the canonical construction: {0}")]
    TextMismatch(String),
    #[error(transparent)]
    Design(#[from] DesignError),
    #[error(transparent)]
    Pda(#[from] PdaError),
}

/// Which construction produced the pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum HpPdaKind {
    Man { k: usize, kp: usize, t: usize },
    TDesign { design: TDesign, a: Vec<usize> },
}

/// Identity of one row of B.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BRowLabel {
    /// A t-subset of the K' column positions.
    Subset(Vec<usize>),
    /// A pair (Y, i): Y a subset of the t column positions, copy i (1-based).
    Pair { y: Vec<usize>, copy: usize },
}

impl fmt::Display for BRowLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BRowLabel::Subset(s) => {
                write!(f, "{{")?;
                for (i, x) in s.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{x}")?;
                }
                write!(f, "}}")
            }
            BRowLabel::Pair { y, copy } => {
                write!(f, "(")?;
                for x in y {
                    write!(f, "{x}")?;
                }
                write!(f, ",{copy})")
            }
        }
    }
}

/// Identity of one transmission slot in a filled subarray.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum TxLabel {
    /// Scheme 1: a (t+1)-subset of actual user ids.
    Subset(Vec<usize>),
    /// Scheme 2: positions Y ⊆ [t] (|Y| in 2..=t) and copy index i.
    Pair { y: Vec<usize>, copy: usize },
    /// Baseline: a bare PDA symbol.
    Integer(u32),
}

impl fmt::Display for TxLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TxLabel::Subset(s) => {
                write!(f, "{{")?;
                for (i, x) in s.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{x}")?;
                }
                write!(f, "}}")
            }
            TxLabel::Pair { y, copy } => {
                write!(f, "(")?;
                for x in y {
                    write!(f, "{x}")?;
                }
                write!(f, ",{copy})")
            }
            TxLabel::Integer(s) => write!(f, "[{s}]"),
        }
    }
}

/// Measured parameter tuple (K, K', F, F', Z, Z', S).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HpPdaParams {
    pub k: usize,
    pub kp: usize,
    pub f: usize,
    pub fp: usize,
    pub z: usize,
    pub zp: usize,
    pub s: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HpPda {
    kind: HpPdaKind,
    p: Pda,
    b: Pda,
    b_labels: Vec<BRowLabel>,
    params: HpPdaParams,
}

/// Count stars per column, requiring uniformity.
fn uniform_column_stars(p: &Pda, what: &str) -> Result<usize, HpPdaError> {
    let z = p.column_stars(0);
    for c in 1..p.cols() {
        if p.column_stars(c) != z {
            return Err(HpPdaError::InvalidParameters(format!(
                "{what} column {} has {} stars, column 1 has {z}",
                c + 1,
                p.column_stars(c)
            )));
        }
    }
    Ok(z)
}

/// Parameters measured directly on the built arrays.
fn measure(kind_k: usize, kind_kp: usize, p: &Pda, b: &Pda) -> Result<HpPdaParams, HpPdaError> {
    let z = uniform_column_stars(p, "P")?;
    let zp = uniform_column_stars(b, "B")?;
    let mut max_symbol = 0u32;
    for r in 0..b.rows() {
        for c in 0..b.cols() {
            if let Cell::Int(s) = b.get(r, c) {
                max_symbol = max_symbol.max(s);
            }
        }
    }
    Ok(HpPdaParams {
        k: kind_k,
        kp: kind_kp,
        f: p.rows(),
        fp: b.rows(),
        z,
        zp,
        s: max_symbol as usize,
    })
}

impl HpPda {
    pub fn kind(&self) -> &HpPdaKind {
        &self.kind
    }

    pub fn p(&self) -> &Pda {
        &self.p
    }

    pub fn b(&self) -> &Pda {
        &self.b
    }

    pub fn b_labels(&self) -> &[BRowLabel] {
        &self.b_labels
    }

    pub fn params(&self) -> HpPdaParams {
        self.params
    }

    /// Validate and sort an active set: K' distinct users from [K].
    fn check_tau(&self, tau: &[usize]) -> Result<Vec<usize>, HpPdaError> {
        let kp = self.params.kp;
        let k = self.params.k;
        if tau.len() != kp {
            return Err(HpPdaError::BadActiveSet(format!(
                "expected {kp} active users, got {}",
                tau.len()
            )));
        }
        let mut sorted = tau.to_vec();
        sorted.sort_unstable();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(HpPdaError::BadActiveSet("duplicate user".into()));
        }
        if sorted[0] < 1 || sorted[sorted.len() - 1] > k {
            return Err(HpPdaError::BadActiveSet(format!("users must lie in 1..={k}")));
        }
        Ok(sorted)
    }

    /// Row selection ζ (0-based P-row index per B-row) for the active set
    /// τ, so that [P]_{ζ×τ} has B's star pattern.
    pub fn witness(&self, tau: &[usize]) -> Result<Vec<usize>, HpPdaError> {
        let tau = self.check_tau(tau)?;
        let phi = |pos: usize| tau[pos - 1]; // order-preserving [K'] -> τ
        match &self.kind {
            HpPdaKind::Man { k, .. } => self
                .b_labels
                .iter()
                .map(|label| {
                    let BRowLabel::Subset(t_set) = label else {
                        return Err(HpPdaError::WitnessNotFound { tau: tau.clone() });
                    };
                    let image: Vec<usize> = t_set.iter().map(|&x| phi(x)).collect();
                    Ok(lex_rank(&image, *k))
                })
                .collect(),
            HpPdaKind::TDesign { design, .. } => {
                let t = design.t();
                self.b_labels
                    .iter()
                    .map(|label| {
                        let BRowLabel::Pair { y, copy } = label else {
                            return Err(HpPdaError::WitnessNotFound { tau: tau.clone() });
                        };
                        let need: Vec<usize> = y.iter().map(|&x| phi(x)).collect();
                        let avoid: Vec<usize> =
                            (1..=t).filter(|p| !y.contains(p)).map(phi).collect();
                        let mut seen = 0usize;
                        for (f, block) in design.blocks().iter().enumerate() {
                            if need.iter().all(|p| block.contains(p))
                                && !avoid.iter().any(|p| block.contains(p))
                            {
                                seen += 1;
                                if seen == *copy {
                                    return Ok(f);
                                }
                            }
                        }
                        Err(HpPdaError::WitnessNotFound { tau: tau.clone() })
                    })
                    .collect()
            }
        }
    }

    /// Fill the witnessed subarray: B's integers become transmission labels.
    pub fn fill(&self, tau: &[usize]) -> Result<FilledSubarray, HpPdaError> {
        let zeta = self.witness(tau)?;
        let tau = self.check_tau(tau)?;
        let labels: Vec<TxLabel> = match &self.kind {
            HpPdaKind::Man { k: _, kp: _, t } => subsets(self.params.kp, t + 1)
                .into_iter()
                .map(|set| TxLabel::Subset(set.into_iter().map(|x| tau[x - 1]).collect()))
                .collect(),
            HpPdaKind::TDesign { design, a } => symbol_labels(design.t(), a),
        };
        debug_assert_eq!(labels.len(), self.params.s);
        Ok(FilledSubarray { tau, zeta, labels, grid: self.b.clone() })
    }

    /// The same pair with B's rows (and their labels) reordered; row order
    /// carries no semantics, so every derived quantity must be unchanged.
    pub fn permuted_rows(&self, perm: &[usize]) -> Result<HpPda, HpPdaError> {
        let fp = self.params.fp;
        let mut seen = vec![false; fp];
        if perm.len() != fp || perm.iter().any(|&r| r >= fp || std::mem::replace(&mut seen[r], true))
        {
            return Err(HpPdaError::InvalidParameters(format!(
                "permutation must list each row index 0..{fp} exactly once"
            )));
        }
        let cells = perm
            .iter()
            .flat_map(|&r| (0..self.b.cols()).map(move |c| self.b.get(r, c)))
            .collect();
        let b = Pda::new(fp, self.b.cols(), cells)?;
        let b_labels = perm.iter().map(|&r| self.b_labels[r].clone()).collect();
        Ok(HpPda { kind: self.kind.clone(), p: self.p.clone(), b, b_labels, params: self.params })
    }
}

/// A witnessed, filled F'×K' subarray for one active set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FilledSubarray {
    /// Active users, sorted ascending; column j serves user tau[j].
    pub tau: Vec<usize>,
    /// 0-based P-row index for each B-row.
    pub zeta: Vec<usize>,
    /// Transmission label for each integer 1..=S (index s-1).
    pub labels: Vec<TxLabel>,
    /// The filled pattern (equals B).
    pub grid: Pda,
}

/// Canonical transmission-label order for the design construction: sizes
/// s+1 = t down to 2 (mirroring the row grouping), subsets lexicographic,
/// copies ascending.
fn symbol_labels(t: usize, a: &[usize]) -> Vec<TxLabel> {
    let mut labels = Vec::new();
    for s in (1..t).rev() {
        for w in subsets(t, s + 1) {
            for i in 1..=a[s - 1] {
                labels.push(TxLabel::Pair { y: w.clone(), copy: i });
            }
        }
    }
    labels
}

/// B-row labels in the printed order: sizes t-1 down to 1; at size t-1
/// copies are the outer loop, below it subsets are.
fn b_row_labels(t: usize, a: &[usize]) -> Vec<BRowLabel> {
    let mut labels = Vec::new();
    for s in (1..t).rev() {
        if s == t - 1 {
            for i in 1..=a[s - 1] {
                for y in subsets(t, s) {
                    labels.push(BRowLabel::Pair { y, copy: i });
                }
            }
        } else {
            for y in subsets(t, s) {
                for i in 1..=a[s - 1] {
                    labels.push(BRowLabel::Pair { y: y.clone(), copy: i });
                }
            }
        }
    }
    labels
}

/// Scheme 1 pair: P is the star pattern of the t-replication array on K
/// users, B the full array on K' users.
pub fn man_hppda(k: usize, kp: usize, t: usize) -> Result<HpPda, HpPdaError> {
    if kp < 1 || kp > k || t > kp - 1 {
        return Err(HpPdaError::InvalidParameters(format!(
            "need 1 <= K' <= K and t <= K'-1, got K={k} K'={kp} t={t}"
        )));
    }
    let full = man_pda(k, t)?;
    let mut p = Pda::new(
        full.rows(),
        full.cols(),
        vec![Cell::Null; full.rows() * full.cols()],
    )?;
    for r in 0..full.rows() {
        for c in 0..full.cols() {
            if full.get(r, c) == Cell::Star {
                p.set(r, c, Cell::Star);
            }
        }
    }
    let b = man_pda(kp, t)?;
    let b_labels = subsets(kp, t).into_iter().map(BRowLabel::Subset).collect();
    let params = measure(k, kp, &p, &b)?;
    Ok(HpPda { kind: HpPdaKind::Man { k, kp, t }, p, b, b_labels, params })
}

/// Scheme 2 pair from a t-design: P is the block-point incidence pattern,
/// B the multiplicity-a array on the t column positions.
pub fn tdesign_hppda(design: &TDesign, a: &[usize]) -> Result<HpPda, HpPdaError> {
    let t = design.t();
    if t < 2 || a.len() != t - 1 {
        return Err(HpPdaError::InvalidParameters(format!(
            "design with t={t} needs {} multiplicities, got {}",
            t.saturating_sub(1),
            a.len()
        )));
    }
    for (idx, &a_s) in a.iter().enumerate() {
        let s = idx + 1;
        let max = design.lambda_i_t(s)?;
        if a_s > max {
            return Err(HpPdaError::MultiplicityOutOfRange { s, given: a_s, max });
        }
    }
    if a.iter().all(|&x| x == 0) {
        return Err(HpPdaError::InvalidParameters(
            "at least one multiplicity must be positive".into(),
        ));
    }

    let v = design.v();
    let mut p = Pda::new(design.b(), v, vec![Cell::Null; design.b() * v])?;
    for (r, block) in design.blocks().iter().enumerate() {
        for &point in block {
            p.set(r, point - 1, Cell::Star);
        }
    }

    let b_labels = b_row_labels(t, a);
    let tx_labels = symbol_labels(t, a);
    let symbol_of = |w: &[usize], i: usize| -> u32 {
        let target = TxLabel::Pair { y: w.to_vec(), copy: i };
        tx_labels.iter().position(|l| *l == target).expect("label exists") as u32 + 1
    };
    let mut cells = Vec::with_capacity(b_labels.len() * t);
    for label in &b_labels {
        let BRowLabel::Pair { y, copy } = label else { unreachable!() };
        for j in 1..=t {
            if y.contains(&j) {
                cells.push(Cell::Star);
            } else {
                let mut w = y.clone();
                let pos = w.partition_point(|&x| x < j);
                w.insert(pos, j);
                cells.push(Cell::Int(symbol_of(&w, *copy)));
            }
        }
    }
    let b = Pda::new(b_labels.len(), t, cells)?;
    let params = measure(v, t, &p, &b)?;
    Ok(HpPda {
        kind: HpPdaKind::TDesign { design: design.clone(), a: a.to_vec() },
        p,
        b,
        b_labels,
        params,
    })
}

/// One defect found by `verify_hppda`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum HpPdaFailure {
    /// B is not itself a valid placement delivery array.
    InvalidB(Violation),
    /// P has an integer cell or non-uniform star columns.
    BadPattern(String),
    /// Some active set has no witness row selection.
    NoWitness { tau: Vec<usize> },
    /// The witnessed subarray's stars disagree with B (1-based coordinates).
    PatternMismatch { tau: Vec<usize>, b_row: usize, position: usize },
}

impl fmt::Display for HpPdaFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HpPdaFailure::InvalidB(v) => write!(f, "B is not a valid PDA: {v}"),
            HpPdaFailure::BadPattern(msg) => write!(f, "bad P pattern: {msg}"),
            HpPdaFailure::NoWitness { tau } => write!(f, "no witness for tau={tau:?}"),
            HpPdaFailure::PatternMismatch { tau, b_row, position } => write!(
                f,
                "tau={tau:?}: star pattern mismatch at B row {b_row}, position {position}"
            ),
        }
    }
}

/// Check the defining property over every K'-subset of [K] (exhaustive;
/// intended for K <= 12).
pub fn verify_hppda(h: &HpPda) -> Result<(), HpPdaFailure> {
    if let Err(v) = verify_pda(h.b()) {
        return Err(HpPdaFailure::InvalidB(v));
    }
    let z = h.p().column_stars(0);
    for c in 0..h.p().cols() {
        if h.p().column_stars(c) != z {
            return Err(HpPdaFailure::BadPattern(format!(
                "column {} has {} stars, column 1 has {z}",
                c + 1,
                h.p().column_stars(c)
            )));
        }
        for r in 0..h.p().rows() {
            if matches!(h.p().get(r, c), Cell::Int(_)) {
                return Err(HpPdaFailure::BadPattern(format!(
                    "integer at row {}, column {}",
                    r + 1,
                    c + 1
                )));
            }
        }
    }
    let params = h.params();
    for tau in subsets(params.k, params.kp) {
        let zeta = match h.witness(&tau) {
            Ok(z) => z,
            Err(_) => return Err(HpPdaFailure::NoWitness { tau }),
        };
        for (r, &pr) in zeta.iter().enumerate() {
            for (c, &user) in tau.iter().enumerate() {
                let want_star = h.b().get(r, c) == Cell::Star;
                let have_star = h.p().get(pr, user - 1) == Cell::Star;
                if want_star != have_star {
                    return Err(HpPdaFailure::PatternMismatch {
                        tau,
                        b_row: r + 1,
                        position: c + 1,
                    });
                }
            }
        }
    }
    Ok(())
}

impl HpPda {
    /// Text form: a header naming the construction, P's grid, a blank line,
    /// then B's grid.
    pub fn to_text(&self) -> String {
        let header = match &self.kind {
            HpPdaKind::Man { k, kp, t } => format!("hppda man K={k} Kp={kp} t={t}"),
            HpPdaKind::TDesign { design, a } => {
                let parts: Vec<String> = a.iter().map(usize::to_string).collect();
                format!(
                    "hppda tdesign v={} k={} t={} lambda={} a={}",
                    design.v(),
                    design.k(),
                    design.t(),
                    design.lambda(),
                    parts.join(",")
                )
            }
        };
        format!("{header}\n{}\n{}", self.p.to_text(), self.b.to_text())
    }

    /// Parse the text form, rebuild the canonical construction it names,
    /// and require the serialized grids to match it exactly.
    pub fn from_text(text: &str) -> Result<Self, HpPdaError> {
        let mut header: Option<(usize, &str)> = None;
        let mut p_lines: Vec<&str> = Vec::new();
        let mut b_lines: Vec<&str> = Vec::new();
        let mut in_b = false;
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.starts_with('#') {
                continue;
            }
            if header.is_none() {
                if !line.is_empty() {
                    header = Some((idx + 1, line));
                }
                continue;
            }
            if line.is_empty() {
                if !p_lines.is_empty() {
                    in_b = true;
                }
                continue;
            }
            if in_b {
                b_lines.push(line);
            } else {
                p_lines.push(line);
            }
        }
        let (header_line, header) = header.ok_or(HpPdaError::Parse {
            line: 1,
            msg: "missing header line".into(),
        })?;
        let parse_err = |msg: String| HpPdaError::Parse { line: header_line, msg };
        let tokens: Vec<&str> = header.split_whitespace().collect();
        if tokens.first() != Some(&"hppda") || tokens.len() < 2 {
            return Err(parse_err("expected `hppda <kind> key=value...`".into()));
        }
        let mut kv = std::collections::BTreeMap::new();
        for tok in &tokens[2..] {
            let (key, value) = tok
                .split_once('=')
                .ok_or_else(|| parse_err(format!("expected key=value, got `{tok}`")))?;
            kv.insert(key, value);
        }
        let field = |key: &str| -> Result<usize, HpPdaError> {
            kv.get(key)
                .ok_or_else(|| parse_err(format!("missing {key}=")))?
                .parse()
                .map_err(|_| parse_err(format!("bad value for {key}")))
        };

        let p_text = p_lines.join("\n");
        let b_text = b_lines.join("\n");
        let p = Pda::from_text(&p_text)?;
        let b = Pda::from_text(&b_text)?;

        let canonical = match tokens[1] {
            "man" => man_hppda(field("K")?, field("Kp")?, field("t")?)?,
            "tdesign" => {
                let (v, k, t, lambda) =
                    (field("v")?, field("k")?, field("t")?, field("lambda")?);
                let a: Vec<usize> = kv
                    .get("a")
                    .ok_or_else(|| parse_err("missing a=".into()))?
                    .split(',')
                    .map(|x| x.parse().map_err(|_| parse_err("bad value for a".into())))
                    .collect::<Result<_, _>>()?;
                // P's rows are the design's blocks, in order.
                let blocks: Vec<Vec<usize>> = (0..p.rows())
                    .map(|r| {
                        (0..p.cols()).filter(|&c| p.get(r, c) == Cell::Star).map(|c| c + 1).collect()
                    })
                    .collect();
                let design = TDesign::new(v, k, t, lambda, blocks)?;
                tdesign_hppda(&design, &a)?
            }
            other => return Err(parse_err(format!("unknown kind `{other}`"))),
        };
        if p != canonical.p {
            return Err(HpPdaError::TextMismatch("P grid differs".into()));
        }
        if b != canonical.b {
            return Err(HpPdaError::TextMismatch("B grid differs".into()));
        }
        Ok(canonical)
    }
}
