//! End-to-end scheme execution: seeded placement (library, sharing, key
//! schedule, caches), delivery over any active set, per-user decoding, and
//! the exact rank-based secrecy/decodability oracle.
//!
//! Everything observable is linear over the field, so mutual information in
//! log-q units is a rank difference: a user's view is a matrix over the
//! variables (all file parts, all sharing keys, all delivery keys), and
//! leakage about a file is how much the view's rank drops when that file's
//! part columns are zeroed.

use std::fmt;
use std::sync::Arc;

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha12Rng;
use thiserror::Error;

use crate::analysis::Rational;
use crate::combin::subsets;
use crate::gf::{Elem, Field, MulTable, Rref};
use crate::hppda::{man_hppda, FilledSubarray, HpPda, HpPdaError, HpPdaKind, TxLabel};
use crate::pda::Cell;
use crate::sharing::{
    make_sharing_spec, mds_extend, reconstruct_file, share_file, SharingError, SharingSpec,
};

#[derive(Debug, Error)]
pub enum EngineError {
    #[error("user {user} demands file {demand}, library has 1..={n_files}")]
    BadDemand { user: usize, demand: usize, n_files: usize },
    #[error("invalid active set: {0}")]
    BadActiveSet(String),
    #[error("user {user} failed to decode: {reason}")]
    DecodeFailed { user: usize, reason: String },
    #[error(transparent)]
    HpPda(#[from] HpPdaError),
    #[error(transparent)]
    Sharing(#[from] SharingError),
}

/// Identity of one delivery-key vector in the schedule.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum KeyLabel {
    /// Scheme 1: the (t+1)-subset of users the key protects.
    Subset(Vec<usize>),
    /// Scheme 2: an (s+1)-subset of users plus a copy index.
    Pair { s: Vec<usize>, copy: usize },
    /// Baseline: one key per delivery symbol.
    Integer(u32),
}

impl fmt::Display for KeyLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |xs: &[usize]| {
            xs.iter().map(usize::to_string).collect::<Vec<_>>().join(",")
        };
        match self {
            KeyLabel::Subset(s) => write!(f, "{{{}}}", join(s)),
            KeyLabel::Pair { s, copy } => write!(f, "({{{}}},{copy})", join(s)),
            KeyLabel::Integer(x) => write!(f, "[{x}]"),
        }
    }
}

/// The delivery-key vectors, in their canonical (= drawing) order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KeySchedule {
    pub entries: Vec<(KeyLabel, Vec<Elem>)>,
}

impl KeySchedule {
    fn position(&self, label: &KeyLabel) -> Option<usize> {
        self.entries.iter().position(|(l, _)| l == label)
    }
}

/// What one user stores: the same coded-share rows for every file, plus
/// schedule keys (indices into the schedule).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CacheContents {
    pub user: usize,
    pub coded_rows: Vec<usize>,
    pub key_indices: Vec<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Flavor {
    Hotplug,
    Baseline,
}

/// Output of the placement phase, fixed before demands are known.
#[derive(Debug, Clone)]
pub struct Placement {
    hppda: HpPda,
    flavor: Flavor,
    n_files: usize,
    field: Field,
    part_len: usize,
    spec: SharingSpec,
    /// [file][part h][coordinate] — the n−m secret parts per file.
    library: Vec<Vec<Vec<Elem>>>,
    /// [file][p][coordinate] — the m sharing keys per file.
    sharing_keys: Vec<Vec<Vec<Elem>>>,
    /// [file][row f][coordinate] — all F coded shares per file.
    coded: Vec<Vec<Vec<Elem>>>,
    schedule: KeySchedule,
    caches: Vec<CacheContents>,
}

fn draw_payload(field: Field, part_len: usize, rng: &mut dyn RngCore) -> Vec<Elem> {
    (0..part_len).map(|_| (rng.next_u32() & (field.order() - 1)) as Elem).collect()
}

fn xor_into(field: Field, acc: &mut [Elem], rhs: &[Elem]) {
    for (a, &b) in acc.iter_mut().zip(rhs) {
        *a = field.add(*a, b);
    }
}

/// Whether Scheme 1 runs in the single-transmission regime (t = K'−1),
/// which sends one unkeyed XOR and needs no key schedule.
fn is_single_mode(kind: &HpPdaKind) -> bool {
    matches!(kind, HpPdaKind::Man { kp, t, .. } if t + 1 == *kp)
}

fn schedule_labels(hppda: &HpPda, flavor: Flavor) -> Vec<KeyLabel> {
    let params = hppda.params();
    match flavor {
        Flavor::Baseline => (1..=params.s as u32).map(KeyLabel::Integer).collect(),
        Flavor::Hotplug => match hppda.kind() {
            HpPdaKind::Man { k, t, .. } => {
                if is_single_mode(hppda.kind()) {
                    Vec::new()
                } else {
                    subsets(*k, t + 1).into_iter().map(KeyLabel::Subset).collect()
                }
            }
            HpPdaKind::TDesign { design, a } => {
                let t = design.t();
                let mut labels = Vec::new();
                for s in 1..=t.saturating_sub(2) {
                    for set in subsets(design.v(), s + 1) {
                        for i in 1..=a[s - 1] {
                            labels.push(KeyLabel::Pair { s: set.clone(), copy: i });
                        }
                    }
                }
                labels
            }
        },
    }
}

fn run_place(
    hppda: &HpPda,
    flavor: Flavor,
    n_files: usize,
    field: Field,
    part_len: usize,
    rng: &mut dyn RngCore,
) -> Result<Placement, EngineError> {
    if n_files == 0 {
        return Err(EngineError::BadDemand { user: 0, demand: 0, n_files });
    }
    let params = hppda.params();
    let units = params.fp - params.zp;
    let spec = make_sharing_spec(params.z, units + params.z, params.f, field, part_len)?;

    // Draw order is part of the public contract: every file's parts, then
    // every file's sharing keys, then the schedule keys in label order.
    let library: Vec<Vec<Vec<Elem>>> = (0..n_files)
        .map(|_| (0..units).map(|_| draw_payload(field, part_len, rng)).collect())
        .collect();
    let sharing_keys: Vec<Vec<Vec<Elem>>> = (0..n_files)
        .map(|_| (0..params.z).map(|_| draw_payload(field, part_len, rng)).collect())
        .collect();
    let labels = schedule_labels(hppda, flavor);
    let entries = labels
        .into_iter()
        .map(|l| (l, draw_payload(field, part_len, rng)))
        .collect();
    let schedule = KeySchedule { entries };

    let coded = (0..n_files)
        .map(|i| {
            let shares = share_file(&spec, &library[i], &sharing_keys[i])?;
            mds_extend(&spec, &shares)
        })
        .collect::<Result<Vec<_>, _>>()?;

    let caches = (1..=params.k)
        .map(|user| {
            let coded_rows: Vec<usize> = (0..params.f)
                .filter(|&f| hppda.p().get(f, user - 1) == Cell::Star)
                .collect();
            let key_indices: Vec<usize> = schedule
                .entries
                .iter()
                .enumerate()
                .filter(|(_, (label, _))| match label {
                    KeyLabel::Subset(s) | KeyLabel::Pair { s, .. } => s.contains(&user),
                    KeyLabel::Integer(sym) => (0..hppda.b().rows())
                        .any(|r| hppda.b().get(r, user - 1) == Cell::Int(*sym)),
                })
                .map(|(idx, _)| idx)
                .collect();
            CacheContents { user, coded_rows, key_indices }
        })
        .collect();

    Ok(Placement {
        hppda: hppda.clone(),
        flavor,
        n_files,
        field,
        part_len,
        spec,
        library,
        sharing_keys,
        coded,
        schedule,
        caches,
    })
}

/// Placement for the hotplug schemes (Scheme 1 and Scheme 2).
pub fn place(
    hppda: &HpPda,
    n_files: usize,
    field: Field,
    part_len: usize,
    rng: &mut dyn RngCore,
) -> Result<Placement, EngineError> {
    run_place(hppda, Flavor::Hotplug, n_files, field, part_len, rng)
}

/// Placement for the all-active baseline: P = B is the t-replication array
/// on K users, the sharing is (Z, F), and each delivery symbol gets its own
/// key, cached by exactly the users its transmission serves.
pub fn place_baseline(
    k: usize,
    t: usize,
    n_files: usize,
    field: Field,
    part_len: usize,
    rng: &mut dyn RngCore,
) -> Result<Placement, EngineError> {
    let hppda = man_hppda(k, k, t)?;
    run_place(&hppda, Flavor::Baseline, n_files, field, part_len, rng)
}

impl Placement {
    pub fn hppda(&self) -> &HpPda {
        &self.hppda
    }

    pub fn is_baseline(&self) -> bool {
        self.flavor == Flavor::Baseline
    }

    pub fn n_files(&self) -> usize {
        self.n_files
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn part_len(&self) -> usize {
        self.part_len
    }

    pub fn sharing(&self) -> &SharingSpec {
        &self.spec
    }

    pub fn library(&self) -> &[Vec<Vec<Elem>>] {
        &self.library
    }

    pub fn sharing_keys(&self) -> &[Vec<Vec<Elem>>] {
        &self.sharing_keys
    }

    pub fn coded(&self) -> &[Vec<Vec<Elem>>] {
        &self.coded
    }

    pub fn schedule(&self) -> &KeySchedule {
        &self.schedule
    }

    pub fn caches(&self) -> &[CacheContents] {
        &self.caches
    }

    /// File-size units: one unit = 1/(F'−Z') of a file.
    pub fn units(&self) -> usize {
        let p = self.hppda.params();
        p.fp - p.zp
    }

    /// Measured cache size in file units (identical across users).
    pub fn memory(&self) -> Rational {
        let first = &self.caches[0];
        let load = self.n_files * first.coded_rows.len() + first.key_indices.len();
        for c in &self.caches {
            assert_eq!(
                self.n_files * c.coded_rows.len() + c.key_indices.len(),
                load,
                "cache loads must be uniform"
            );
        }
        Rational::new(load as i64, self.units() as i64)
    }
}

/// One constituent of a transmission: the coded share C_{file, row} held
/// for `user`. `user` and `file` are 1-based, `row` is a 0-based P-row.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TxTerm {
    pub user: usize,
    pub file: usize,
    pub row: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Transmission {
    pub label: TxLabel,
    /// Index into the schedule when the transmission is keyed.
    pub key: Option<usize>,
    /// Constituent coded shares, in increasing column-position order.
    pub terms: Vec<TxTerm>,
    pub payload: Vec<Elem>,
}

/// One delivery round: the witnessed subarray, the demand pairing, and the
/// transmissions in symbol order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Delivery {
    pub fill: FilledSubarray,
    /// (user, demanded file), sorted by user.
    pub demands: Vec<(usize, usize)>,
    pub transmissions: Vec<Transmission>,
}

impl Delivery {
    pub fn demand_of(&self, user: usize) -> Option<usize> {
        self.demands.iter().find(|(u, _)| *u == user).map(|(_, d)| *d)
    }
}

/// Run the delivery phase: demands[i] is the demand of active[i].
pub fn deliver(
    p: &Placement,
    active: &[usize],
    demands: &[usize],
) -> Result<Delivery, EngineError> {
    if demands.len() != active.len() {
        return Err(EngineError::BadActiveSet(format!(
            "{} active users but {} demands",
            active.len(),
            demands.len()
        )));
    }
    for (&user, &demand) in active.iter().zip(demands) {
        if demand < 1 || demand > p.n_files {
            return Err(EngineError::BadDemand { user, demand, n_files: p.n_files });
        }
    }
    let params = p.hppda.params();
    if p.is_baseline() {
        let mut sorted = active.to_vec();
        sorted.sort_unstable();
        if sorted != (1..=params.k).collect::<Vec<_>>() {
            return Err(EngineError::BadActiveSet(
                "the baseline serves all K users at once".into(),
            ));
        }
    }
    let fill = p.hppda.fill(active)?;
    let mut pairs: Vec<(usize, usize)> =
        active.iter().copied().zip(demands.iter().copied()).collect();
    pairs.sort_unstable();
    let demand_at = |col: usize| pairs[col].1; // fill.tau is the same sorted order

    let single = is_single_mode(p.hppda.kind());
    let t_design = match p.hppda.kind() {
        HpPdaKind::TDesign { design, .. } => Some(design.t()),
        HpPdaKind::Man { .. } => None,
    };

    let mut transmissions = Vec::with_capacity(params.s);
    for sym in 1..=params.s as u32 {
        let mut terms = Vec::new();
        for c in 0..fill.grid.cols() {
            for r in 0..fill.grid.rows() {
                if fill.grid.get(r, c) == Cell::Int(sym) {
                    terms.push(TxTerm {
                        user: fill.tau[c],
                        file: demand_at(c),
                        row: fill.zeta[r],
                    });
                }
            }
        }
        let label = if p.is_baseline() {
            TxLabel::Integer(sym)
        } else {
            fill.labels[(sym - 1) as usize].clone()
        };
        let key_label = if p.is_baseline() {
            Some(KeyLabel::Integer(sym))
        } else {
            match &label {
                TxLabel::Subset(users) => {
                    (!single).then(|| KeyLabel::Subset(users.clone()))
                }
                TxLabel::Pair { y, copy } => (y.len() < t_design.expect("design kind"))
                    .then(|| KeyLabel::Pair {
                        s: y.iter().map(|&pos| fill.tau[pos - 1]).collect(),
                        copy: *copy,
                    }),
                TxLabel::Integer(_) => unreachable!("hotplug labels are never bare"),
            }
        };
        let key = key_label.map(|kl| {
            p.schedule
                .position(&kl)
                .unwrap_or_else(|| panic!("schedule is missing {kl}"))
        });
        let mut payload = vec![0; p.part_len];
        if let Some(idx) = key {
            xor_into(p.field, &mut payload, &p.schedule.entries[idx].1);
        }
        for term in &terms {
            xor_into(p.field, &mut payload, &p.coded[term.file - 1][term.row]);
        }
        transmissions.push(Transmission { label, key, terms, payload });
    }
    Ok(Delivery { fill, demands: pairs, transmissions })
}

/// Decode one active user's demanded file from its cache plus the broadcast;
/// returns the file's parts.
pub fn decode(p: &Placement, d: &Delivery, user: usize) -> Result<Vec<Vec<Elem>>, EngineError> {
    let demand = d
        .demand_of(user)
        .ok_or_else(|| EngineError::BadActiveSet(format!("user {user} is not active")))?;
    let cache = &p.caches[user - 1];
    let fail = |reason: String| EngineError::DecodeFailed { user, reason };
    let mut collected: Vec<(usize, Vec<Elem>)> = Vec::with_capacity(p.spec.n());
    for tx in &d.transmissions {
        let Some(own) = tx.terms.iter().find(|t| t.user == user) else {
            continue;
        };
        let mut acc = tx.payload.clone();
        if let Some(idx) = tx.key {
            if !cache.key_indices.contains(&idx) {
                return Err(fail(format!("missing key {}", p.schedule.entries[idx].0)));
            }
            xor_into(p.field, &mut acc, &p.schedule.entries[idx].1);
        }
        for term in &tx.terms {
            if term.user == user {
                continue;
            }
            if !cache.coded_rows.contains(&term.row) {
                return Err(fail(format!("coded-share row {} not cached", term.row + 1)));
            }
            xor_into(p.field, &mut acc, &p.coded[term.file - 1][term.row]);
        }
        collected.push((own.row, acc));
    }
    for &f in &cache.coded_rows {
        collected.push((f, p.coded[demand - 1][f].clone()));
    }
    let (parts, _) = reconstruct_file(&p.spec, &collected).map_err(|e| fail(e.to_string()))?;
    Ok(parts)
}

/// Column layout of the observation matrices: every file's parts
/// (file-major), every file's sharing keys (file-major), then the schedule.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VarLayout {
    pub n_files: usize,
    pub parts: usize,
    pub keys: usize,
    pub sched: usize,
}

impl VarLayout {
    pub fn cols(&self) -> usize {
        self.n_files * (self.parts + self.keys) + self.sched
    }

    pub fn part_col(&self, file0: usize, h: usize) -> usize {
        file0 * self.parts + h
    }

    pub fn key_col(&self, file0: usize, p: usize) -> usize {
        self.n_files * self.parts + file0 * self.keys + p
    }

    pub fn sched_col(&self, j: usize) -> usize {
        self.n_files * (self.parts + self.keys) + j
    }
}

/// Exact leakage/decodability oracle. Cache views are fixed at placement
/// time, so their echelon bases (plain and per-file-censored) are built
/// once; auditing one delivery only inserts the handful of transmission
/// rows on top of a cloned base.
pub struct Auditor<'a> {
    p: &'a Placement,
    layout: VarLayout,
    table: Option<Arc<MulTable>>,
    /// Per user: raw observation rows of the cache contents.
    cache_rows: Vec<Vec<Vec<Elem>>>,
    /// Per user: echelon basis of the cache view.
    base: Vec<Rref>,
    /// Per user, per file: basis of the cache view with that file's part
    /// columns zeroed.
    base_no: Vec<Vec<Rref>>,
}

impl<'a> Auditor<'a> {
    pub fn new(p: &'a Placement) -> Auditor<'a> {
        let layout = VarLayout {
            n_files: p.n_files,
            parts: p.spec.n() - p.spec.m(),
            keys: p.spec.m(),
            sched: p.schedule.entries.len(),
        };
        let table = MulTable::new(p.field).map(Arc::new);
        let fresh = || {
            let r = Rref::new(p.field, layout.cols());
            match &table {
                Some(t) => r.with_table(Arc::clone(t)),
                None => r,
            }
        };
        let mut cache_rows = Vec::with_capacity(p.caches.len());
        let mut base = Vec::with_capacity(p.caches.len());
        let mut base_no = Vec::with_capacity(p.caches.len());
        for cache in &p.caches {
            let mut rows = Vec::new();
            for i in 0..p.n_files {
                for &f in &cache.coded_rows {
                    let mut row = vec![0; layout.cols()];
                    scatter(&layout, &mut row, i, p.spec.composite_row(f));
                    rows.push(row);
                }
            }
            for &idx in &cache.key_indices {
                let mut row = vec![0; layout.cols()];
                row[layout.sched_col(idx)] = 1;
                rows.push(row);
            }
            let mut b = fresh();
            for row in &rows {
                b.insert(row);
            }
            let mut no = Vec::with_capacity(p.n_files);
            for j in 0..p.n_files {
                let mut bj = fresh();
                for row in &rows {
                    let mut censored = row.clone();
                    zero_file(&layout, &mut censored, j);
                    bj.insert(&censored);
                }
                no.push(bj);
            }
            cache_rows.push(rows);
            base.push(b);
            base_no.push(no);
        }
        Auditor { p, layout, table, cache_rows, base, base_no }
    }

    pub fn layout(&self) -> VarLayout {
        self.layout
    }

    fn fresh(&self) -> Rref {
        let r = Rref::new(self.p.field, self.layout.cols());
        match &self.table {
            Some(t) => r.with_table(Arc::clone(t)),
            None => r,
        }
    }

    /// Observation row of one transmission (coefficients over all variables).
    pub fn tx_row(&self, tx: &Transmission) -> Vec<Elem> {
        let mut row = vec![0; self.layout.cols()];
        for term in &tx.terms {
            scatter(&self.layout, &mut row, term.file - 1, self.p.spec.composite_row(term.row));
        }
        if let Some(idx) = tx.key {
            let c = self.layout.sched_col(idx);
            row[c] ^= 1;
        }
        row
    }

    /// Eq. (1) oracle: what the cache alone reveals about one file.
    pub fn cache_leakage(&self, user: usize, file: usize) -> usize {
        self.base[user - 1].rank() - self.base_no[user - 1][file - 1].rank()
    }

    /// Eq. (3) oracle, per file: what cache plus the whole broadcast reveal.
    /// The demanded file's entry equals n−m exactly when decoding works.
    pub fn per_file_leakage(&self, user: usize, txs: &[Transmission]) -> Vec<usize> {
        let rows: Vec<Vec<Elem>> = txs.iter().map(|tx| self.tx_row(tx)).collect();
        let mut full = self.base[user - 1].clone();
        for row in &rows {
            full.insert(row);
        }
        (0..self.p.n_files)
            .map(|j| {
                let mut acc = self.base_no[user - 1][j].clone();
                for row in &rows {
                    let mut censored = row.clone();
                    zero_file(&self.layout, &mut censored, j);
                    acc.insert(&censored);
                }
                full.rank() - acc.rank()
            })
            .collect()
    }

    /// Eq. (2) oracle: every part of `file` lies in the view's row space.
    pub fn decodable(&self, user: usize, file: usize, txs: &[Transmission]) -> bool {
        let mut acc = self.base[user - 1].clone();
        for tx in txs {
            acc.insert(&self.tx_row(tx));
        }
        (0..self.layout.parts).all(|h| {
            let mut unit = vec![0; self.layout.cols()];
            unit[self.layout.part_col(file - 1, h)] = 1;
            acc.contains(&unit)
        })
    }

    /// Joint leakage about every file except `keep_file` — the
    /// I(W_{[N]∖{d}}; X, Z_k) statistic — for one user's full view.
    pub fn joint_leakage(&self, user: usize, keep_file: usize, txs: &[Transmission]) -> usize {
        let rows: Vec<Vec<Elem>> = txs.iter().map(|tx| self.tx_row(tx)).collect();
        let mut full = self.base[user - 1].clone();
        for row in &rows {
            full.insert(row);
        }
        let censor = |row: &[Elem]| {
            let mut c = row.to_vec();
            for j in 0..self.p.n_files {
                if j != keep_file - 1 {
                    zero_file(&self.layout, &mut c, j);
                }
            }
            c
        };
        let mut acc = self.fresh();
        for row in self.cache_rows[user - 1].iter().chain(&rows) {
            acc.insert(&censor(row));
        }
        full.rank() - acc.rank()
    }
}

fn scatter(layout: &VarLayout, row: &mut [Elem], file0: usize, composite: &[Elem]) {
    for (j, &coeff) in composite.iter().enumerate() {
        let col = if j < layout.parts {
            layout.part_col(file0, j)
        } else {
            layout.key_col(file0, j - layout.parts)
        };
        row[col] ^= coeff;
    }
}

fn zero_file(layout: &VarLayout, row: &mut [Elem], file0: usize) {
    for h in 0..layout.parts {
        row[layout.part_col(file0, h)] = 0;
    }
}

/// Secrecy/decodability audit of one active user's full view.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ViewAudit {
    pub user: usize,
    pub demand: usize,
    /// Rank-based leakage per file; the demanded entry is n−m by design.
    pub per_file: Vec<usize>,
    /// Joint leakage about all non-demanded files at once.
    pub joint_non_demanded: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimulationReport {
    pub memory: Rational,
    pub rate: Rational,
    pub n_transmissions: usize,
    /// (user, decoded exactly) per active user.
    pub decode_ok: Vec<(usize, bool)>,
    /// K×N grid: full-view leakage for active users, cache-only for the
    /// rest. For an active user the demanded column reads n−m.
    pub leakage: Vec<Vec<usize>>,
    pub views: Vec<ViewAudit>,
}

impl SimulationReport {
    /// Largest leakage entry outside the (active user, demanded file) slots
    /// — the headline secrecy number, 0 on a correct run.
    pub fn worst_leakage(&self) -> usize {
        let demanded: Vec<(usize, usize)> =
            self.views.iter().map(|v| (v.user, v.demand)).collect();
        let mut worst = 0;
        for (user0, row) in self.leakage.iter().enumerate() {
            for (file0, &x) in row.iter().enumerate() {
                if !demanded.contains(&(user0 + 1, file0 + 1)) {
                    worst = worst.max(x);
                }
            }
        }
        worst
    }
}

/// Decode every active user and measure all leakage statistics for one
/// placement + delivery round.
pub fn audit(p: &Placement, d: &Delivery) -> Result<SimulationReport, EngineError> {
    let auditor = Auditor::new(p);
    let txs = &d.transmissions;
    let mut decode_ok = Vec::new();
    for &(user, demand) in &d.demands {
        let parts = decode(p, d, user)?;
        decode_ok.push((user, parts == p.library[demand - 1]));
    }
    let params = p.hppda.params();
    let mut leakage = Vec::with_capacity(params.k);
    let mut views = Vec::new();
    for user in 1..=params.k {
        if let Some(demand) = d.demand_of(user) {
            let per_file = auditor.per_file_leakage(user, txs);
            leakage.push(per_file.clone());
            views.push(ViewAudit {
                user,
                demand,
                per_file,
                joint_non_demanded: auditor.joint_leakage(user, demand, txs),
            });
        } else {
            leakage.push(
                (1..=p.n_files).map(|j| auditor.cache_leakage(user, j)).collect(),
            );
        }
    }
    Ok(SimulationReport {
        memory: p.memory(),
        rate: Rational::new(txs.len() as i64, p.units() as i64),
        n_transmissions: txs.len(),
        decode_ok,
        leakage,
        views,
    })
}

/// Seeded placement plus delivery, returning both phases for inspection.
pub fn run_once(
    hppda: &HpPda,
    n_files: usize,
    active: &[usize],
    demands: &[usize],
    field: Field,
    part_len: usize,
    seed: u64,
) -> Result<(Placement, Delivery), EngineError> {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let p = place(hppda, n_files, field, part_len, &mut rng)?;
    let d = deliver(&p, active, demands)?;
    Ok((p, d))
}

/// Place, deliver, decode, and audit one hotplug run; deterministic in the
/// seed.
pub fn simulate(
    hppda: &HpPda,
    n_files: usize,
    active: &[usize],
    demands: &[usize],
    field: Field,
    part_len: usize,
    seed: u64,
) -> Result<SimulationReport, EngineError> {
    let (p, d) = run_once(hppda, n_files, active, demands, field, part_len, seed)?;
    audit(&p, &d)
}

/// Baseline counterpart: all K users are active.
pub fn simulate_baseline(
    k: usize,
    t: usize,
    n_files: usize,
    demands: &[usize],
    field: Field,
    part_len: usize,
    seed: u64,
) -> Result<SimulationReport, EngineError> {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let p = place_baseline(k, t, n_files, field, part_len, &mut rng)?;
    let active: Vec<usize> = (1..=k).collect();
    let d = deliver(&p, &active, demands)?;
    audit(&p, &d)
}

fn hex(field: Field, payload: &[Elem]) -> String {
    let digits = usize::from(field.width()).div_ceil(4);
    payload.iter().map(|e| format!("{e:0digits$X}")).collect()
}

/// Line-oriented trace of a run: cache contents, the witness row selection,
/// and the transmissions. `full` appends seed-dependent hex payloads.
pub fn trace_lines(p: &Placement, d: &Delivery, full: bool) -> Vec<String> {
    let params = p.hppda.params();
    let row_name: Box<dyn Fn(usize) -> String> = match p.hppda.kind() {
        HpPdaKind::Man { k, t, .. } => {
            let names: Vec<String> = subsets(*k, *t)
                .into_iter()
                .map(|s| {
                    format!(
                        "{{{}}}",
                        s.iter().map(usize::to_string).collect::<Vec<_>>().join(",")
                    )
                })
                .collect();
            Box::new(move |f| names[f].clone())
        }
        HpPdaKind::TDesign { .. } => Box::new(|f| (f + 1).to_string()),
    };
    let mut lines = Vec::new();
    for cache in &p.caches {
        for i in 1..=p.n_files {
            for &f in &cache.coded_rows {
                let mut line = format!("cache user={} C[{},{}]", cache.user, i, row_name(f));
                if full {
                    line.push_str(&format!(" value={}", hex(p.field, &p.coded[i - 1][f])));
                }
                lines.push(line);
            }
        }
        for &idx in &cache.key_indices {
            let (label, payload) = &p.schedule.entries[idx];
            let mut line = format!("cache user={} V{}", cache.user, label);
            if full {
                line.push_str(&format!(" value={}", hex(p.field, payload)));
            }
            lines.push(line);
        }
    }
    if !p.is_baseline() {
        let rows: Vec<String> = d.fill.zeta.iter().map(|&r| (r + 1).to_string()).collect();
        lines.push(format!("witness rows: ({})", rows.join(",")));
    }
    for tx in &d.transmissions {
        let mut rhs: Vec<String> = Vec::new();
        if let Some(idx) = tx.key {
            rhs.push(format!("V{}", p.schedule.entries[idx].0));
        }
        for term in &tx.terms {
            rhs.push(format!("C[d{},{}]", term.user, row_name(term.row)));
        }
        let mut line = format!("tx X{} = {}", tx.label, rhs.join(" ^ "));
        if full {
            line.push_str(&format!(" payload={}", hex(p.field, &tx.payload)));
        }
        lines.push(line);
    }
    let _ = params;
    lines
}

/// A copy of the delivery with the key stripped from one transmission —
/// the negative control for the leakage oracle.
pub fn strip_transmission_key(p: &Placement, d: &Delivery, tx_index: usize) -> Delivery {
    let mut out = d.clone();
    let tx = &mut out.transmissions[tx_index];
    if let Some(idx) = tx.key.take() {
        // Remove the pad from the payload as well: the adversary sees the
        // bare XOR of coded shares.
        let payload = tx.payload.clone();
        tx.payload = payload
            .iter()
            .zip(&p.schedule.entries[idx].1)
            .map(|(&a, &b)| p.field.add(a, b))
            .collect();
    }
    out
}
