//! Seeded search over quasi-twisted codes built from constacyclic
//! representatives.
//!
//! A campaign expands its config into an ordered list of work items, one per
//! (m, a, ell, g, p, candidate batch). Every item carries its own sub-seed, so
//! the ledger does not depend on the number of worker threads.

pub mod ledger;
pub mod targets;

use std::path::{Path, PathBuf};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::algebra::{binomial_factor, Fe, Field, Poly};
use crate::codec::parse_coeffs;
use crate::constacyclic::enumerate_divisors;
use crate::distance::{min_distance, upper_bound_probe, DistanceOptions};
use crate::equivalence::{classes_for, PartitionMode};
use crate::error::{Error, Result};
use crate::linearcode::DistanceStatus;
use crate::qt::{qt_assemble, QtForm, QtGeneratorSpec};

pub use ledger::{CodeRecord, Ledger, LedgerWriter};
pub use targets::{classify_distance, Classification, TargetTable};

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PPolicy {
    #[default]
    Fixed1,
    AllDivisors,
    DegreeCapped { max_degree: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FSampling {
    /// Every polynomial of degree below `degree_bound` coprime to h, in each
    /// position; the total number of tuples must not exceed `cap`.
    Exhaustive { degree_bound: usize, cap: u64 },
    /// `trials` random tuples per (g, p).
    Random { trials: usize },
    /// Explicit candidates per position; entries violating the gcd or
    /// degree conditions are dropped.
    Pool { f1: Vec<Vec<String>>, f2: Vec<Vec<String>> },
}

fn default_shift() -> Vec<u8> {
    vec![1]
}

fn default_batch() -> usize {
    64
}

fn default_probe() -> usize {
    4
}

fn default_budget() -> u64 {
    crate::distance::QUICK_BUDGET
}

fn default_partition() -> Option<PartitionMode> {
    Some(PartitionMode::Multiplier)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SearchConfig {
    pub q: u32,
    pub m_values: Vec<usize>,
    pub ell_values: Vec<usize>,
    /// Shift constants as field element indices.
    #[serde(default = "default_shift")]
    pub shift_constants: Vec<u8>,
    pub form: QtForm,
    #[serde(default = "PPolicy::default")]
    pub p_policy: PPolicy,
    /// Smallest deg g_2 tried by the identity-g_1 form; degrees are visited
    /// from the largest down to this floor.
    #[serde(default)]
    pub degree_floor: usize,
    pub f_sampling: FSampling,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_budget")]
    pub budget: u64,
    #[serde(default)]
    pub targets: Option<PathBuf>,
    #[serde(default)]
    pub min_k: Option<usize>,
    #[serde(default)]
    pub max_k: Option<usize>,
    /// Emit codes with d >= target - slack.
    #[serde(default)]
    pub slack: usize,
    /// Also emit LCD or dual-containing codes with d at least this value.
    #[serde(default)]
    pub property_floor: Option<usize>,
    /// Emit codes whose parameters have no target.
    #[serde(default)]
    pub emit_untargeted: bool,
    /// `None` iterates every constacyclic code instead of class representatives.
    #[serde(default = "default_partition")]
    pub partition: Option<PartitionMode>,
    #[serde(default = "default_batch")]
    pub batch_size: usize,
    #[serde(default = "default_probe")]
    pub probe_rounds: usize,
    #[serde(default)]
    pub threads: Option<usize>,
    #[serde(default)]
    pub timestamp: Option<String>,
}

impl SearchConfig {
    pub fn new(q: u32, form: QtForm, f_sampling: FSampling) -> SearchConfig {
        SearchConfig {
            q,
            m_values: Vec::new(),
            ell_values: Vec::new(),
            shift_constants: default_shift(),
            form,
            p_policy: PPolicy::Fixed1,
            degree_floor: 0,
            f_sampling,
            seed: 0,
            budget: default_budget(),
            targets: None,
            min_k: None,
            max_k: None,
            slack: 0,
            property_floor: None,
            emit_untargeted: false,
            partition: default_partition(),
            batch_size: default_batch(),
            probe_rounds: default_probe(),
            threads: None,
            timestamp: None,
        }
    }

    pub fn from_json(text: &str) -> Result<SearchConfig> {
        Ok(serde_json::from_str(text)?)
    }

    /// Digest of every setting that can change the ledger.
    pub fn hash(&self) -> String {
        let mut c = self.clone();
        c.threads = None;
        c.timestamp = None;
        let json = serde_json::to_string(&c).expect("config serializes");
        Sha256::digest(json.as_bytes())[..8]
            .iter()
            .map(|b| format!("{b:02x}"))
            .collect()
    }

    fn validate(&self, field: Field) -> Result<Vec<Fe>> {
        if self.batch_size == 0 {
            return Err(Error::precondition("batch_size must be positive"));
        }
        if self.ell_values.contains(&0) || self.m_values.contains(&0) {
            return Err(Error::precondition("m and ell must be positive"));
        }
        let mut shifts = Vec::new();
        for &s in &self.shift_constants {
            let a = field.try_elem(s as u32)?;
            if a.is_zero() {
                return Err(Error::InvalidShiftConstant);
            }
            shifts.push(a);
        }
        if let FSampling::Pool { f1, f2 } = &self.f_sampling {
            for &ell in &self.ell_values {
                let want2 = if matches!(self.form, QtForm::OneGen | QtForm::TwoGenShifted) { 0 } else { ell };
                if f1.len() != ell || f2.len() != want2 {
                    return Err(Error::precondition(format!(
                        "candidate pool has {}/{} positions, index {ell} needs {ell}/{want2}",
                        f1.len(),
                        f2.len()
                    )));
                }
            }
        }
        Ok(shifts)
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CampaignStats {
    pub items: usize,
    pub candidates: u64,
    pub invalid: u64,
    pub dimension_defects: u64,
    pub pruned: u64,
    pub evaluated: u64,
    pub emitted: u64,
    pub skipped_items: u64,
}

impl CampaignStats {
    fn merge(&mut self, o: &CampaignStats) {
        self.candidates += o.candidates;
        self.invalid += o.invalid;
        self.dimension_defects += o.dimension_defects;
        self.pruned += o.pruned;
        self.evaluated += o.evaluated;
        self.emitted += o.emitted;
        self.skipped_items += o.skipped_items;
    }
}

/// Candidate f polynomials per position.
#[derive(Clone, Debug)]
enum Candidates {
    Lists { f1: Vec<Vec<Poly>>, f2: Vec<Vec<Poly>> },
    Random { h1: Poly, h2: Poly, ell: usize, f2_len: usize, fixed_zero: bool },
}

#[derive(Clone, Debug)]
struct WorkItem {
    id: usize,
    field: Field,
    m: usize,
    a: Fe,
    g: Poly,
    p: Poly,
    candidates: std::sync::Arc<Candidates>,
    /// Half-open range of candidate indices.
    start: u64,
    end: u64,
}

fn splitmix(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}

fn item_seed(seed: u64, id: usize) -> u64 {
    splitmix(seed ^ splitmix(id as u64))
}

/// Nonzero polynomials of degree below `bound` coprime to `h`.
fn coprime_list(field: Field, h: &Poly, bound: usize) -> Vec<Poly> {
    let q = field.q() as u64;
    let count = q.pow(bound as u32);
    (1..count)
        .map(|mut idx| {
            let mut v = Vec::with_capacity(bound);
            for _ in 0..bound {
                v.push(field.elem((idx % q) as u8));
                idx /= q;
            }
            Poly::new(field, v)
        })
        .filter(|f| f.gcd(h).is_one())
        .collect()
}

fn random_coprime(field: Field, h: &Poly, rng: &mut ChaCha8Rng) -> Option<Poly> {
    let dh = h.deg0();
    for _ in 0..256 {
        let v: Vec<Fe> = (0..dh).map(|_| field.elem(rng.gen_range(0..field.q()))).collect();
        let f = Poly::new(field, v);
        if !f.is_zero() && f.gcd(h).is_one() {
            return Some(f);
        }
    }
    None
}

struct Plan {
    items: Vec<WorkItem>,
    skipped: u64,
}

fn plan(config: &SearchConfig) -> Result<Plan> {
    let field = Field::new(config.q)?;
    let shifts = config.validate(field)?;
    let mut items = Vec::new();
    let mut skipped = 0;
    let two_row = !matches!(config.form, QtForm::OneGen | QtForm::TwoGenShifted);
    for &m in &config.m_values {
        for &a in &shifts {
            let modulus = Poly::binomial(field, m, a);
            let reps: Vec<Poly> = match config.partition {
                Some(mode) => classes_for(field, m, a, None, mode)?
                    .iter()
                    .map(|c| c.representative.clone())
                    .collect(),
                None => enumerate_divisors(field, m, a, None, false)?
                    .into_iter()
                    .map(|c| c.g().clone())
                    .collect(),
            };
            for &ell in &config.ell_values {
                let mut pairs: Vec<(Poly, Poly)> = Vec::new();
                match config.form {
                    QtForm::TwoGenIdentityG1 => {
                        let mut g2s: Vec<Poly> =
                            reps.iter().filter(|g2| g2.deg0() >= config.degree_floor).cloned().collect();
                        g2s.sort_by(|x, y| y.deg0().cmp(&x.deg0()).then_with(|| x.cmp(y)));
                        pairs.extend(g2s.into_iter().map(|g2| (Poly::one(field), g2)));
                    }
                    QtForm::TwoGenGeneral => {
                        for g in &reps {
                            let h1 = modulus.exact_div(g)?;
                            let mut ps: Vec<Poly> = binomial_factor(field, m, a)?
                                .divisors(field)
                                .into_iter()
                                .filter(|p| p.divides(&h1) && p.deg0() < h1.deg0())
                                .filter(|p| match &config.p_policy {
                                    PPolicy::Fixed1 => p.is_one(),
                                    PPolicy::AllDivisors => true,
                                    PPolicy::DegreeCapped { max_degree } => p.deg0() <= *max_degree,
                                })
                                .collect();
                            ps.sort();
                            pairs.extend(ps.into_iter().map(|p| (g.clone(), p)));
                        }
                    }
                    _ => pairs.extend(reps.iter().map(|g| (g.clone(), Poly::one(field)))),
                }
                for (g, p) in pairs {
                    let h1 = modulus.exact_div(&g)?;
                    let h2 = if two_row { modulus.exact_div(&p.mul(&g))? } else { Poly::one(field) };
                    let (k1, k2) = (h1.deg0(), h2.deg0());
                    let k = match config.form {
                        QtForm::OneGen => k1,
                        QtForm::TwoGenShifted => 2 * k1,
                        _ => k1 + k2,
                    };
                    if k1 == 0 || (two_row && k2 == 0) || k > m * ell {
                        log::info!("skip m={m} g={} p={}: degenerate dimensions", crate::codec::render_coeffs(&g), crate::codec::render_coeffs(&p));
                        skipped += 1;
                        continue;
                    }
                    if config.min_k.is_some_and(|x| k < x) || config.max_k.is_some_and(|x| k > x) {
                        continue;
                    }
                    let f2_len = if two_row { ell } else { 0 };
                    let fixed_zero = two_row && config.form != QtForm::TwoGenGeneral;
                    let (cands, total) = match &config.f_sampling {
                        FSampling::Random { trials } => (
                            Candidates::Random { h1: h1.clone(), h2: h2.clone(), ell, f2_len, fixed_zero },
                            *trials as u64,
                        ),
                        FSampling::Exhaustive { degree_bound, cap } => {
                            let l1 = coprime_list(field, &h1, (*degree_bound).min(k1));
                            let l2 = coprime_list(field, &h2, (*degree_bound).min(k2));
                            let mut f1 = vec![l1; ell];
                            let mut f2 = vec![l2; f2_len];
                            if fixed_zero {
                                f2[0] = vec![Poly::zero(field)];
                            }
                            let total = f1
                                .iter_mut()
                                .chain(f2.iter_mut())
                                .try_fold(1u64, |acc, l| acc.checked_mul(l.len() as u64))
                                .filter(|t| t <= cap)
                                .ok_or_else(|| {
                                    Error::precondition(format!(
                                        "exhaustive sampling for m={m}, ell={ell} exceeds the cap of {cap} tuples"
                                    ))
                                })?;
                            (Candidates::Lists { f1, f2 }, total)
                        }
                        FSampling::Pool { f1, f2 } => {
                            let keep = |list: &Vec<String>, h: &Poly, zero_ok: bool| -> Result<Vec<Poly>> {
                                let mut out = Vec::new();
                                for s in list {
                                    let f = parse_coeffs(s, field)?;
                                    let ok = if zero_ok {
                                        f.is_zero()
                                    } else {
                                        !f.is_zero() && f.gcd(h).is_one() && f.deg0() < h.deg0()
                                    };
                                    if ok && !out.contains(&f) {
                                        out.push(f);
                                    } else if !ok {
                                        log::debug!("pool entry {s} dropped for m={m}");
                                    }
                                }
                                Ok(out)
                            };
                            let l1 = f1.iter().map(|l| keep(l, &h1, false)).collect::<Result<Vec<_>>>()?;
                            let l2 = f2
                                .iter()
                                .enumerate()
                                .map(|(j, l)| keep(l, &h2, j == 0 && fixed_zero))
                                .collect::<Result<Vec<_>>>()?;
                            let total = l1
                                .iter()
                                .chain(l2.iter())
                                .map(|l| l.len() as u64)
                                .try_fold(1u64, |acc, x| acc.checked_mul(x))
                                .ok_or_else(|| Error::precondition("candidate pool too large"))?;
                            (Candidates::Lists { f1: l1, f2: l2 }, total)
                        }
                    };
                    if total == 0 {
                        log::info!("skip m={m} g={}: no f satisfies the gcd conditions", crate::codec::render_coeffs(&g));
                        skipped += 1;
                        continue;
                    }
                    let cands = std::sync::Arc::new(cands);
                    let bs = config.batch_size as u64;
                    let mut start = 0;
                    while start < total {
                        let end = (start + bs).min(total);
                        items.push(WorkItem {
                            id: items.len(),
                            field,
                            m,
                            a,
                            g: g.clone(),
                            p: p.clone(),
                            candidates: cands.clone(),
                            start,
                            end,
                        });
                        start = end;
                    }
                }
            }
        }
    }
    Ok(Plan { items, skipped })
}

fn decode(lists: &[Vec<Poly>], mut idx: u64) -> Vec<Poly> {
    lists
        .iter()
        .map(|l| {
            let n = l.len() as u64;
            let p = l[(idx % n) as usize].clone();
            idx /= n;
            p
        })
        .collect()
}

struct ItemOutput {
    records: Vec<CodeRecord>,
    stats: CampaignStats,
}

struct Context<'a> {
    config: &'a SearchConfig,
    targets: &'a TargetTable,
    hash: String,
    timestamp: Option<String>,
}

fn build_spec(config: &SearchConfig, item: &WorkItem, f1: Vec<Poly>, f2: Vec<Poly>) -> QtGeneratorSpec {
    let (field, m, a, g) = (item.field, item.m, item.a, item.g.clone());
    match config.form {
        QtForm::OneGen => QtGeneratorSpec::one_gen(field, m, a, g, f1),
        QtForm::TwoGenShifted => QtGeneratorSpec::shifted(field, m, a, g, f1),
        QtForm::TwoGenP1 => QtGeneratorSpec::p1(field, m, a, g, f1, f2),
        QtForm::TwoGenIdentityG1 => QtGeneratorSpec::identity_g1(field, m, a, item.p.clone(), f1, f2),
        QtForm::TwoGenGeneral => QtGeneratorSpec::two_gen(field, m, a, g, item.p.clone(), f1, f2),
    }
}

fn run_item(ctx: &Context, item: &WorkItem) -> ItemOutput {
    let config = ctx.config;
    let mut stats = CampaignStats::default();
    let mut records = Vec::new();
    let seed = item_seed(config.seed, item.id);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for idx in item.start..item.end {
        stats.candidates += 1;
        let (f1, f2) = match &*item.candidates {
            Candidates::Lists { f1, f2 } => {
                let n1: u64 = f1.iter().map(|l| l.len() as u64).product();
                (decode(f1, idx % n1), decode(f2, idx / n1))
            }
            Candidates::Random { h1, h2, ell, f2_len, fixed_zero } => {
                let f1: Option<Vec<Poly>> = (0..*ell).map(|_| random_coprime(item.field, h1, &mut rng)).collect();
                let f2: Option<Vec<Poly>> = (0..*f2_len)
                    .map(|j| {
                        if j == 0 && *fixed_zero {
                            Some(Poly::zero(item.field))
                        } else {
                            random_coprime(item.field, h2, &mut rng)
                        }
                    })
                    .collect();
                match (f1, f2) {
                    (Some(a), Some(b)) => (a, b),
                    _ => {
                        log::info!("item {}: no coprime f found, trial skipped", item.id);
                        stats.invalid += 1;
                        continue;
                    }
                }
            }
        };
        let spec = build_spec(config, item, f1, f2);
        let code = match qt_assemble(&spec) {
            Ok(c) => c,
            Err(Error::DimensionDefect { expected, actual }) => {
                log::warn!("item {}: rank {actual} instead of {expected}", item.id);
                stats.dimension_defects += 1;
                continue;
            }
            Err(e) => {
                log::debug!("item {}: {e}", item.id);
                stats.invalid += 1;
                continue;
            }
        };
        let (n, k) = (code.n(), code.k());
        let target = ctx.targets.get(config.q, n, k);
        let props = code.matrix.properties();
        let mut required = target.map(|t| t.saturating_sub(config.slack));
        if let Some(floor) = config.property_floor {
            if props.lcd || props.dual_containing {
                required = Some(required.map_or(floor, |r| r.min(floor)));
            }
        }
        let required = match required {
            Some(r) => r,
            None if config.emit_untargeted => 0,
            None => {
                stats.pruned += 1;
                continue;
            }
        };
        if required > code.distance_floor && config.probe_rounds > 0 {
            if let Ok((up, _)) = upper_bound_probe(&code.matrix, config.probe_rounds, splitmix(seed ^ idx)) {
                if up < required {
                    stats.pruned += 1;
                    continue;
                }
            }
        }
        stats.evaluated += 1;
        let r = match min_distance(&code.matrix, &DistanceOptions::with_budget(config.budget).threads(1)) {
            Ok(r) => r,
            Err(e) => {
                log::warn!("item {}: distance failed: {e}", item.id);
                stats.invalid += 1;
                continue;
            }
        };
        if r.upper < required {
            continue;
        }
        let lower = r.lower.max(code.distance_floor).min(r.upper);
        let d = DistanceStatus::bounded(lower, r.upper).unwrap_or(DistanceStatus::Unknown);
        // revalidate before writing
        if spec.validate().is_err() {
            stats.invalid += 1;
            continue;
        }
        let mut rec = CodeRecord::from_spec(&spec, k, d, props);
        rec.target = target;
        rec.classification = classify_distance(d, target);
        rec.config_hash = ctx.hash.clone();
        rec.seed = config.seed;
        rec.timestamp = ctx.timestamp.clone();
        stats.emitted += 1;
        records.push(rec);
    }
    ItemOutput { records, stats }
}

/// Resume point: the config digest and the next unprocessed item.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cursor {
    pub config_hash: String,
    pub next_item: usize,
}

impl Cursor {
    pub fn load(path: &Path) -> Result<Option<Cursor>> {
        if !path.exists() {
            return Ok(None);
        }
        let text = std::fs::read_to_string(path)?;
        let mut it = text.split_whitespace();
        match (it.next(), it.next(), it.next()) {
            (Some("cursor"), Some(h), Some(n)) => Ok(Some(Cursor {
                config_hash: h.to_string(),
                next_item: n
                    .parse()
                    .map_err(|_| Error::FormatError(format!("bad cursor item {n:?}")))?,
            })),
            _ => Err(Error::FormatError(format!("malformed cursor file {}", path.display()))),
        }
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let tmp = path.with_extension("tmp");
        std::fs::write(&tmp, format!("cursor {} {}\n", self.config_hash, self.next_item))?;
        std::fs::rename(tmp, path)?;
        Ok(())
    }
}

/// Output locations for a persistent campaign.
#[derive(Clone, Debug, Default)]
pub struct CampaignIo {
    pub ledger: Option<PathBuf>,
    pub cursor: Option<PathBuf>,
}

pub struct Campaign {
    pub ledger: Ledger,
    pub stats: CampaignStats,
}

fn timestamp(config: &SearchConfig) -> Option<String> {
    config
        .timestamp
        .clone()
        .or_else(|| std::env::var("SOURCE_DATE_EPOCH").ok().map(|s| format!("@{}", s.trim())))
}

/// Runs a campaign in memory.
pub fn run_campaign(config: &SearchConfig) -> Result<Ledger> {
    Ok(run_campaign_with(config, &CampaignIo::default())?.ledger)
}

/// Runs a campaign, appending to a ledger file and maintaining a cursor file
/// when given. Records already in the ledger file are not written again.
pub fn run_campaign_with(config: &SearchConfig, io: &CampaignIo) -> Result<Campaign> {
    let targets = match &config.targets {
        Some(p) => TargetTable::load(p)?,
        None => TargetTable::default(),
    };
    let plan = plan(config)?;
    let hash = config.hash();
    let mut stats = CampaignStats {
        items: plan.items.len(),
        skipped_items: plan.skipped,
        ..Default::default()
    };
    let mut writer = io.ledger.as_deref().map(LedgerWriter::open).transpose()?;
    let mut ledger = Ledger::new();
    let mut next = 0;
    if let Some(path) = &io.cursor {
        if let Some(c) = Cursor::load(path)? {
            if c.config_hash != hash {
                return Err(Error::FormatError(format!(
                    "cursor belongs to config {}, not {hash}",
                    c.config_hash
                )));
            }
            next = c.next_item.min(plan.items.len());
        }
    }
    let ctx = Context {
        config,
        targets: &targets,
        hash: hash.clone(),
        timestamp: timestamp(config),
    };
    let pool = match config.threads {
        Some(t) => Some(
            rayon::ThreadPoolBuilder::new()
                .num_threads(t.max(1))
                .build()
                .map_err(|e| Error::precondition(e.to_string()))?,
        ),
        None => None,
    };
    let chunk = 4 * config.threads.unwrap_or_else(rayon::current_num_threads).max(1);
    while next < plan.items.len() {
        let end = (next + chunk).min(plan.items.len());
        let work = &plan.items[next..end];
        let outs: Vec<ItemOutput> = match &pool {
            Some(p) => p.install(|| work.par_iter().map(|it| run_item(&ctx, it)).collect()),
            None => work.par_iter().map(|it| run_item(&ctx, it)).collect(),
        };
        for out in outs {
            stats.merge(&out.stats);
            for rec in out.records {
                if let Some(w) = writer.as_mut() {
                    w.append(rec.clone())?;
                }
                ledger.append(rec);
            }
        }
        if let Some(w) = writer.as_mut() {
            w.flush()?;
        }
        next = end;
        if let Some(path) = &io.cursor {
            Cursor {
                config_hash: hash.clone(),
                next_item: next,
            }
            .save(path)?;
        }
    }
    Ok(Campaign { ledger, stats })
}

/// Classification of a record against a target table.
pub fn classify(record: &CodeRecord, targets: &TargetTable) -> Classification {
    classify_distance(record.d, targets.get(record.q as u32, record.n, record.k))
}
