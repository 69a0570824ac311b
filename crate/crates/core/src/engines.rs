//! Product engines for Clifford polynomials.
//!
//! All engines compute `sum_i sum_j c_i d_j * (e_{a_i} e_{b_j})` and agree
//! exactly on rational coefficients. They differ in how the Cartesian
//! product of the two term lists is scheduled:
//!
//! * `walsh-seq`: one double loop.
//! * `walsh-par-tasks`: recursive binary splitting of the larger term list,
//!   child tasks run through `rayon::join`, partial results are combined by
//!   addition in split order.
//! * `walsh-par-flat`: one OS thread per contiguous block of the left term
//!   list, results summed in block order after all threads are joined.
//! * `chevalley`: blade-times-polynomial recursion over generators.
//! * `oracle`: double loop over the transposition-counting blade product.

use std::cell::RefCell;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::num::NonZeroUsize;
use std::str::FromStr;
use std::sync::{Arc, Mutex, OnceLock};

use rayon::{ThreadPool, ThreadPoolBuilder};
use thiserror::Error;

use crate::blades::{
    inverse_gray, oplus, oracle_blade_product, twist, walsh, Blade, Sign, Signature,
};
use crate::multivector::{AlgebraError, Multivector, Term};
use crate::scalar::Coefficient;

pub const DEFAULT_PACKSIZE: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConfigError {
    #[error("unknown engine `{0}` (expected walsh-seq, walsh-par-tasks, walsh-par-flat, chevalley or oracle)")]
    UnknownEngine(String),
    #[error("invalid thread count `{0}` (expected a positive integer or `auto`)")]
    InvalidThreads(String),
    #[error("packsize must be at least 1")]
    ZeroPacksize,
    #[error("unknown split rule `{0}` (expected packsize or midpoint)")]
    UnknownSplit(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EngineKind {
    WalshSeq,
    WalshParTasks,
    WalshParFlat,
    Chevalley,
    Oracle,
}

impl EngineKind {
    pub const ALL: [EngineKind; 5] = [
        EngineKind::WalshSeq,
        EngineKind::WalshParTasks,
        EngineKind::WalshParFlat,
        EngineKind::Chevalley,
        EngineKind::Oracle,
    ];

    pub fn name(self) -> &'static str {
        match self {
            EngineKind::WalshSeq => "walsh-seq",
            EngineKind::WalshParTasks => "walsh-par-tasks",
            EngineKind::WalshParFlat => "walsh-par-flat",
            EngineKind::Chevalley => "chevalley",
            EngineKind::Oracle => "oracle",
        }
    }
}

impl fmt::Display for EngineKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for EngineKind {
    type Err = ConfigError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        EngineKind::ALL
            .into_iter()
            .find(|e| e.name() == s)
            .ok_or_else(|| ConfigError::UnknownEngine(s.to_string()))
    }
}

/// Worker thread count: explicit, or the number of hardware threads.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Threads {
    #[default]
    Auto,
    Fixed(NonZeroUsize),
}

impl Threads {
    pub fn fixed(n: usize) -> Result<Self, ConfigError> {
        NonZeroUsize::new(n)
            .map(Threads::Fixed)
            .ok_or_else(|| ConfigError::InvalidThreads(n.to_string()))
    }

    pub fn resolve(self) -> usize {
        match self {
            Threads::Auto => hardware_threads(),
            Threads::Fixed(n) => n.get(),
        }
    }
}

impl FromStr for Threads {
    type Err = ConfigError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "auto" {
            return Ok(Threads::Auto);
        }
        s.parse::<usize>()
            .ok()
            .and_then(NonZeroUsize::new)
            .map(Threads::Fixed)
            .ok_or_else(|| ConfigError::InvalidThreads(s.to_string()))
    }
}

impl fmt::Display for Threads {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Threads::Auto => f.write_str("auto"),
            Threads::Fixed(n) => write!(f, "{n}"),
        }
    }
}

/// Logical hardware threads visible to this process.
pub fn hardware_threads() -> usize {
    std::thread::available_parallelism()
        .map(NonZeroUsize::get)
        .unwrap_or(1)
}

/// Where the task engine cuts an oversized term list.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SplitRule {
    /// `[..packsize]` and `[packsize..]`.
    #[default]
    AtPacksize,
    /// Two halves.
    Midpoint,
}

impl FromStr for SplitRule {
    type Err = ConfigError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "packsize" => Ok(SplitRule::AtPacksize),
            "midpoint" => Ok(SplitRule::Midpoint),
            _ => Err(ConfigError::UnknownSplit(s.to_string())),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EngineConfig {
    pub engine: EngineKind,
    packsize: usize,
    pub threads: Threads,
    pub dynamic_packsize: bool,
    pub split: SplitRule,
}

impl Default for EngineConfig {
    fn default() -> Self {
        Self {
            engine: EngineKind::WalshSeq,
            packsize: DEFAULT_PACKSIZE,
            threads: Threads::Auto,
            dynamic_packsize: false,
            split: SplitRule::AtPacksize,
        }
    }
}

impl EngineConfig {
    pub fn new(engine: EngineKind) -> Self {
        Self {
            engine,
            ..Self::default()
        }
    }

    pub fn with_packsize(mut self, packsize: usize) -> Result<Self, ConfigError> {
        if packsize == 0 {
            return Err(ConfigError::ZeroPacksize);
        }
        self.packsize = packsize;
        Ok(self)
    }

    pub fn with_threads(mut self, threads: Threads) -> Self {
        self.threads = threads;
        self
    }

    pub fn with_dynamic_packsize(mut self, on: bool) -> Self {
        self.dynamic_packsize = on;
        self
    }

    pub fn with_split(mut self, split: SplitRule) -> Self {
        self.split = split;
        self
    }

    pub fn packsize(&self) -> usize {
        self.packsize
    }

    /// Leaf threshold for inputs of the given sizes. With dynamic packsize on,
    /// `max(4, ceil(max(len_x, len_y) / (4 * threads)))`.
    pub fn effective_packsize(&self, len_x: usize, len_y: usize) -> usize {
        if !self.dynamic_packsize {
            return self.packsize;
        }
        let denom = 4 * self.threads.resolve();
        len_x.max(len_y).div_ceil(denom).max(4)
    }
}

/// Multiplies with the engine selected in `cfg`.
pub fn multiply<C: Coefficient>(
    x: &Multivector<C>,
    y: &Multivector<C>,
    cfg: &EngineConfig,
) -> Result<Multivector<C>, AlgebraError> {
    match cfg.engine {
        EngineKind::WalshSeq => mul_sequential(x, y),
        EngineKind::WalshParTasks => mul_parallel_tasks(x, y, cfg),
        EngineKind::WalshParFlat => mul_parallel_flat(x, y, cfg),
        EngineKind::Chevalley => mul_chevalley(x, y),
        EngineKind::Oracle => mul_oracle(x, y),
    }
}

#[inline]
fn signed_product<C: Coefficient>(sign: Sign, a: &C, b: &C) -> C {
    let c = a.mul_ref(b);
    if sign.is_minus() {
        c.neg()
    } else {
        c
    }
}

/// Above this dimension accumulators index blades through a hash map
/// instead of a per-thread `2^n` slot table.
const SLOT_TABLE_MAX_DIM: u32 = 20;

thread_local! {
    static SLOT_TABLE: RefCell<Vec<u32>> = const { RefCell::new(Vec::new()) };
}

enum SlotIndex<'a> {
    /// `table[blade]` is one plus the blade's position in `terms`, or 0.
    Table(&'a mut [u32]),
    Map(HashMap<u32, usize>),
}

/// Sums signed values per blade. Terms stay in first-seen order and every
/// coefficient is accumulated in arrival order.
struct Accumulator<'a, C> {
    terms: Vec<Term<C>>,
    index: SlotIndex<'a>,
}

impl<C: Coefficient> Accumulator<'_, C> {
    #[inline]
    fn add(&mut self, blade: Blade, value: C) {
        let slot = match &mut self.index {
            SlotIndex::Table(table) => {
                let s = &mut table[blade.0 as usize];
                if *s == 0 {
                    self.terms.push(Term::new(value, blade));
                    *s = self.terms.len() as u32;
                    return;
                }
                *s as usize - 1
            }
            SlotIndex::Map(map) => match map.get(&blade.0) {
                Some(&k) => k,
                None => {
                    map.insert(blade.0, self.terms.len());
                    self.terms.push(Term::new(value, blade));
                    return;
                }
            },
        };
        self.terms[slot].coeff.add_assign_ref(&value);
    }

    #[inline]
    fn add_signed(&mut self, blade: Blade, sign: Sign, value: C) {
        let slot = match &mut self.index {
            SlotIndex::Table(table) => {
                let s = table[blade.0 as usize];
                (s != 0).then(|| s as usize - 1)
            }
            SlotIndex::Map(map) => map.get(&blade.0).copied(),
        };
        match slot {
            Some(k) => {
                let acc = &mut self.terms[k].coeff;
                if sign.is_minus() {
                    acc.sub_assign_ref(&value);
                } else {
                    acc.add_assign_ref(&value);
                }
            }
            None => self.add(blade, if sign.is_minus() { value.neg() } else { value }),
        }
    }
}

/// Runs `fill` against an empty accumulator for blades of `sig` and returns
/// the distinct terms it produced.
fn accumulate<C: Coefficient>(
    sig: Signature,
    capacity: usize,
    fill: impl FnOnce(&mut Accumulator<'_, C>),
) -> Vec<Term<C>> {
    if sig.dim() > SLOT_TABLE_MAX_DIM {
        let mut acc = Accumulator {
            terms: Vec::with_capacity(capacity),
            index: SlotIndex::Map(HashMap::with_capacity(capacity)),
        };
        fill(&mut acc);
        return acc.terms;
    }
    SLOT_TABLE.with(|cell| {
        let mut table = cell.borrow_mut();
        let len = sig.basis_len() as usize;
        if table.len() < len {
            table.resize(len, 0);
        }
        let mut acc = Accumulator {
            terms: Vec::with_capacity(capacity),
            index: SlotIndex::Table(&mut table[..len]),
        };
        fill(&mut acc);
        let terms = acc.terms;
        for t in &terms {
            table[t.blade.0 as usize] = 0;
        }
        terms
    })
}

/// Double loop over two term slices, rows of `xs` outermost, with the
/// inverse Gray codes of `ys` computed once.
fn double_loop<C: Coefficient>(xs: &[Term<C>], ys: &[Term<C>], sig: Signature) -> Vec<Term<C>> {
    let n = sig.dim();
    let gray_ys: Vec<Blade> = ys.iter().map(|t| inverse_gray(t.blade, n)).collect();
    let capacity = (xs.len() * ys.len()).min(sig.basis_len() as usize);
    accumulate(sig, capacity, |acc| {
        for tx in xs {
            let a = tx.blade;
            for (ty, &gy) in ys.iter().zip(&gray_ys) {
                let sign = twist(a, ty.blade, sig) * walsh(a, gy);
                acc.add_signed(oplus(a, ty.blade), sign, tx.coeff.mul_ref(&ty.coeff));
            }
        }
    })
}

/// Sequential product over the Walsh blade product, accumulated in
/// canonical term order.
pub fn mul_sequential<C: Coefficient>(
    x: &Multivector<C>,
    y: &Multivector<C>,
) -> Result<Multivector<C>, AlgebraError> {
    x.check_same_signature(y)?;
    let sig = x.signature();
    let terms = double_loop(x.terms(), y.terms(), sig);
    Ok(Multivector::from_unsorted(sig, terms))
}

/// Ground-truth product built on [`oracle_blade_product`].
pub fn mul_oracle<C: Coefficient>(
    x: &Multivector<C>,
    y: &Multivector<C>,
) -> Result<Multivector<C>, AlgebraError> {
    x.check_same_signature(y)?;
    let sig = x.signature();
    let mut acc: BTreeMap<Blade, C> = BTreeMap::new();
    for tx in x.terms() {
        for ty in y.terms() {
            let (sign, blade) = oracle_blade_product(tx.blade, ty.blade, sig);
            let value = signed_product(sign, &tx.coeff, &ty.coeff);
            acc.entry(blade)
                .and_modify(|c| c.add_assign_ref(&value))
                .or_insert(value);
        }
    }
    Ok(Multivector::from_unsorted(
        sig,
        acc.into_iter().map(|(b, c)| Term::new(c, b)).collect(),
    ))
}

/// Partial result of a task. Raw partials are product lists in a
/// structurally fixed order and may repeat blades; dense ones are indexed
/// by blade.
enum Partial<C> {
    Raw(Vec<Term<C>>),
    Dense(Vec<Option<C>>),
}

/// Raw partials with at least `basis / DENSE_FRACTION` entries are folded
/// into dense form.
const DENSE_FRACTION: usize = 4;

impl<C: Coefficient> Partial<C> {
    fn raw(terms: Vec<Term<C>>, sig: Signature) -> Self {
        let basis = sig.basis_len() as usize;
        if sig.dim() <= SLOT_TABLE_MAX_DIM && basis > 64 && terms.len() * DENSE_FRACTION >= basis {
            let mut dense: Vec<Option<C>> = vec![None; basis];
            add_into_dense(&mut dense, terms);
            Partial::Dense(dense)
        } else {
            Partial::Raw(terms)
        }
    }

    fn is_empty(&self) -> bool {
        match self {
            Partial::Raw(t) => t.is_empty(),
            Partial::Dense(_) => false,
        }
    }

    /// Distinct blades with their summed coefficients.
    fn into_terms(self, sig: Signature) -> Vec<Term<C>> {
        match self {
            Partial::Raw(terms) => accumulate(sig, terms.len(), |acc| {
                for t in terms {
                    acc.add(t.blade, t.coeff);
                }
            }),
            Partial::Dense(d) => d
                .into_iter()
                .enumerate()
                .filter_map(|(k, c)| c.map(|c| Term::new(c, Blade(k as u32))))
                .collect(),
        }
    }
}

fn add_into_dense<C: Coefficient>(dense: &mut [Option<C>], terms: Vec<Term<C>>) {
    for t in terms {
        match &mut dense[t.blade.0 as usize] {
            Some(a) => a.add_assign_ref(&t.coeff),
            slot => *slot = Some(t.coeff),
        }
    }
}

/// Every product of `xs` and `ys`, rows of `xs` outermost.
fn leaf<C: Coefficient>(xs: &[Term<C>], ys: &[Term<C>], sig: Signature) -> Vec<Term<C>> {
    let n = sig.dim();
    let mut out = Vec::with_capacity(xs.len() * ys.len());
    for tx in xs {
        let a = tx.blade;
        for ty in ys {
            let sign = twist(a, ty.blade, sig) * walsh(a, inverse_gray(ty.blade, n));
            out.push(Term::new(
                signed_product(sign, &tx.coeff, &ty.coeff),
                oplus(a, ty.blade),
            ));
        }
    }
    out
}

/// `left + right`, combined in an order fixed by the operands' structure.
fn merge<C: Coefficient>(left: Partial<C>, right: Partial<C>, sig: Signature) -> Partial<C> {
    if left.is_empty() {
        return right;
    }
    if right.is_empty() {
        return left;
    }
    match (left, right) {
        (Partial::Dense(mut l), Partial::Dense(r)) => {
            for (a, b) in l.iter_mut().zip(r) {
                if let Some(b) = b {
                    match a {
                        Some(a) => a.add_assign_ref(&b),
                        None => *a = Some(b),
                    }
                }
            }
            Partial::Dense(l)
        }
        (Partial::Dense(mut l), Partial::Raw(r)) => {
            add_into_dense(&mut l, r);
            Partial::Dense(l)
        }
        (Partial::Raw(l), Partial::Dense(mut r)) => {
            for mut t in l {
                let slot = &mut r[t.blade.0 as usize];
                if let Some(b) = slot.take() {
                    t.coeff.add_assign_ref(&b);
                }
                *slot = Some(t.coeff);
            }
            Partial::Dense(r)
        }
        (Partial::Raw(mut l), Partial::Raw(r)) => {
            l.extend(r);
            Partial::raw(l, sig)
        }
    }
}

/// Shape of the task tree produced by one parallel product.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct TaskStats {
    /// Tasks that computed a block directly.
    pub leaves: u64,
    /// Tasks that split and continued with two children.
    pub splits: u64,
    pub max_depth: u32,
    pub packsize: usize,
}

impl TaskStats {
    fn combine(a: TaskStats, b: TaskStats) -> TaskStats {
        TaskStats {
            leaves: a.leaves + b.leaves,
            splits: a.splits + b.splits + 1,
            max_depth: a.max_depth.max(b.max_depth) + 1,
            packsize: a.packsize,
        }
    }
}

struct TaskCtx {
    sig: Signature,
    packsize: usize,
    split: SplitRule,
}

impl TaskCtx {
    fn cut(&self, len: usize) -> usize {
        match self.split {
            SplitRule::AtPacksize => self.packsize,
            SplitRule::Midpoint => len / 2,
        }
    }

    fn run<C: Coefficient>(&self, xs: &[Term<C>], ys: &[Term<C>]) -> (Partial<C>, TaskStats) {
        if xs.len().max(ys.len()) <= self.packsize {
            let stats = TaskStats {
                leaves: 1,
                splits: 0,
                max_depth: 0,
                packsize: self.packsize,
            };
            return (Partial::raw(leaf(xs, ys, self.sig), self.sig), stats);
        }
        let ((left, ls), (right, rs)) = if xs.len() < ys.len() {
            let (y1, y2) = ys.split_at(self.cut(ys.len()));
            rayon::join(|| self.run(xs, y1), || self.run(xs, y2))
        } else {
            let (x1, x2) = xs.split_at(self.cut(xs.len()));
            rayon::join(|| self.run(x1, ys), || self.run(x2, ys))
        };
        (merge(left, right, self.sig), TaskStats::combine(ls, rs))
    }
}

fn pool(threads: usize) -> Arc<ThreadPool> {
    static POOLS: OnceLock<Mutex<HashMap<usize, Arc<ThreadPool>>>> = OnceLock::new();
    let mut pools = POOLS
        .get_or_init(|| Mutex::new(HashMap::new()))
        .lock()
        .unwrap_or_else(|e| e.into_inner());
    pools
        .entry(threads)
        .or_insert_with(|| {
            Arc::new(
                ThreadPoolBuilder::new()
                    .num_threads(threads)
                    .thread_name(move |i| format!("cliffmul-{threads}-{i}"))
                    .build()
                    .expect("failed to build worker pool"),
            )
        })
        .clone()
}

/// Runs `f` on a worker pool with exactly `threads` workers.
pub fn in_pool<R: Send>(threads: usize, f: impl FnOnce() -> R + Send) -> R {
    pool(threads.max(1)).install(f)
}

/// Recursive split-then-combine product.
pub fn mul_parallel_tasks<C: Coefficient>(
    x: &Multivector<C>,
    y: &Multivector<C>,
    cfg: &EngineConfig,
) -> Result<Multivector<C>, AlgebraError> {
    mul_parallel_tasks_instrumented(x, y, cfg).map(|(m, _)| m)
}

/// [`mul_parallel_tasks`] that also reports the task tree it built.
pub fn mul_parallel_tasks_instrumented<C: Coefficient>(
    x: &Multivector<C>,
    y: &Multivector<C>,
    cfg: &EngineConfig,
) -> Result<(Multivector<C>, TaskStats), AlgebraError> {
    x.check_same_signature(y)?;
    let sig = x.signature();
    let packsize = cfg.effective_packsize(x.len(), y.len());
    if x.is_zero() || y.is_zero() {
        let stats = TaskStats {
            packsize,
            ..TaskStats::default()
        };
        return Ok((Multivector::zero(sig), stats));
    }
    let ctx = TaskCtx {
        sig,
        packsize,
        split: cfg.split,
    };
    let (partial, stats) = in_pool(cfg.threads.resolve(), || ctx.run(x.terms(), y.terms()));
    Ok((Multivector::from_unsorted(sig, partial.into_terms(sig)), stats))
}

/// Flat parallel product: `threads` contiguous row blocks of `x`'s term list,
/// each on its own thread; block results are summed in block order.
pub fn mul_parallel_flat<C: Coefficient>(
    x: &Multivector<C>,
    y: &Multivector<C>,
    cfg: &EngineConfig,
) -> Result<Multivector<C>, AlgebraError> {
    x.check_same_signature(y)?;
    let threads = cfg.threads.resolve();
    if threads == 1 {
        return mul_sequential(x, y);
    }
    let sig = x.signature();
    if x.is_zero() || y.is_zero() {
        return Ok(Multivector::zero(sig));
    }
    let blocks = row_blocks(x.len(), threads);
    let partials: Vec<Partial<C>> = std::thread::scope(|s| {
        let handles: Vec<_> = blocks
            .iter()
            .map(|r| {
                let rows = &x.terms()[r.clone()];
                let ys = y.terms();
                s.spawn(move || Partial::raw(double_loop(rows, ys, sig), sig))
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("product thread panicked"))
            .collect()
    });
    let total = partials
        .into_iter()
        .fold(Partial::Raw(Vec::new()), |acc, p| merge(acc, p, sig));
    Ok(Multivector::from_unsorted(sig, total.into_terms(sig)))
}

/// Splits `0..len` into at most `parts` contiguous nonempty ranges whose
/// sizes differ by at most one.
pub fn row_blocks(len: usize, parts: usize) -> Vec<std::ops::Range<usize>> {
    let parts = parts.clamp(1, len.max(1));
    let (base, extra) = (len / parts, len % parts);
    let mut out = Vec::with_capacity(parts);
    let mut start = 0;
    for k in 0..parts {
        let size = base + usize::from(k < extra);
        if size > 0 {
            out.push(start..start + size);
        }
        start += size;
    }
    out
}

/// Left action of the generator `e_i` on a signed blade:
/// `e_i e_M = (-1)^{#(j in M, j < i)} (e_{M+i} or Q_i e_{M-i})`.
fn generator_action(i: u32, m: Blade, sig: Signature) -> (Sign, Blade) {
    let bit = 1u32 << (i - 1);
    let below = (m.0 & (bit - 1)).count_ones();
    let mut sign = Sign::from_parity(below);
    if m.0 & bit != 0 && i > sig.p() {
        sign = -sign;
    }
    (sign, Blade(m.0 ^ bit))
}

/// `e_a * y` by peeling generators off `a`, lowest first:
/// `e_a = e_i e_{a'}` with `i` the lowest generator of `a`.
fn blade_times<C: Coefficient>(a: Blade, ys: &[Term<C>], sig: Signature) -> Vec<Term<C>> {
    if a.0 == 0 {
        return ys.to_vec();
    }
    let i = a.0.trailing_zeros() + 1;
    let rest = Blade(a.0 & (a.0 - 1));
    let mut out = blade_times(rest, ys, sig);
    for t in &mut out {
        let (sign, blade) = generator_action(i, t.blade, sig);
        t.blade = blade;
        if sign.is_minus() {
            t.coeff = t.coeff.neg();
        }
    }
    out
}

/// Product from Chevalley's recursive definition.
pub fn mul_chevalley<C: Coefficient>(
    x: &Multivector<C>,
    y: &Multivector<C>,
) -> Result<Multivector<C>, AlgebraError> {
    x.check_same_signature(y)?;
    let sig = x.signature();
    let mut acc: HashMap<Blade, C> = HashMap::new();
    for tx in x.terms() {
        for t in blade_times(tx.blade, y.terms(), sig) {
            let value = tx.coeff.mul_ref(&t.coeff);
            acc.entry(t.blade)
                .and_modify(|c| c.add_assign_ref(&value))
                .or_insert(value);
        }
    }
    Ok(Multivector::from_unsorted(
        sig,
        acc.into_iter().map(|(b, c)| Term::new(c, b)).collect(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse;
    use crate::scalar::Rational;

    fn sig(p: u32, q: u32) -> Signature {
        Signature::new(p, q).unwrap()
    }

    fn ex(text: &str, s: Signature) -> Multivector<Rational> {
        parse(text, s).unwrap()
    }

    fn all_engines(threads: usize, packsize: usize) -> Vec<EngineConfig> {
        EngineKind::ALL
            .into_iter()
            .map(|e| {
                EngineConfig::new(e)
                    .with_packsize(packsize)
                    .unwrap()
                    .with_threads(Threads::fixed(threads).unwrap())
            })
            .collect()
    }

    #[test]
    fn engine_names_round_trip() {
        for e in EngineKind::ALL {
            assert_eq!(e.name().parse::<EngineKind>(), Ok(e));
        }
        assert!("cmulRS".parse::<EngineKind>().is_err());
        assert_eq!("auto".parse::<Threads>(), Ok(Threads::Auto));
        assert_eq!("3".parse::<Threads>(), Threads::fixed(3));
        assert!("0".parse::<Threads>().is_err());
        assert!("-2".parse::<Threads>().is_err());
        assert_eq!(
            EngineConfig::default().with_packsize(0),
            Err(ConfigError::ZeroPacksize)
        );
    }

    #[test]
    fn metric_and_unit_examples() {
        for cfg in all_engines(2, 1) {
            let s = sig(1, 0);
            let e1 = ex("e1", s);
            assert_eq!(multiply(&e1, &e1, &cfg).unwrap(), ex("Id", s), "{}", cfg.engine);
            let a = ex("1 + e1", s);
            let b = ex("1 - e1", s);
            assert!(multiply(&a, &b, &cfg).unwrap().is_zero());
            let x = ex("2*e1we2 - 3*Id + e3", sig(2, 1));
            let one = Multivector::one(sig(2, 1));
            assert_eq!(multiply(&x, &one, &cfg).unwrap(), x);
            assert_eq!(multiply(&one, &x, &cfg).unwrap(), x);
            let s01 = sig(0, 1);
            assert_eq!(
                multiply(&ex("e1", s01), &ex("e1", s01), &cfg).unwrap(),
                ex("-Id", s01)
            );
        }
    }

    #[test]
    fn chevalley_examples() {
        let s = sig(3, 1);
        assert_eq!(
            mul_chevalley(&ex("e1", s), &ex("e2we4", s)).unwrap(),
            ex("e1we2we4", s)
        );
        let s2 = sig(2, 0);
        assert_eq!(
            mul_chevalley(&ex("e2", s2), &ex("e1", s2)).unwrap(),
            ex("-e1we2", s2)
        );
    }

    #[test]
    fn oracle_example_is_consistent() {
        let s = sig(3, 0);
        let x = ex("e1we2", s);
        let y = ex("e2we3", s);
        let expected = mul_oracle(&x, &y).unwrap();
        assert_eq!(expected, ex("e1we3", s));
        for cfg in all_engines(2, 1) {
            assert_eq!(multiply(&x, &y, &cfg).unwrap(), expected);
        }
    }

    #[test]
    fn zero_inputs_spawn_nothing() {
        let s = sig(3, 0);
        let zero = Multivector::<Rational>::zero(s);
        let x = ex("e1 + e2 + e3", s);
        let cfg = EngineConfig::new(EngineKind::WalshParTasks)
            .with_packsize(1)
            .unwrap();
        let (m, stats) = mul_parallel_tasks_instrumented(&zero, &x, &cfg).unwrap();
        assert!(m.is_zero());
        assert_eq!(stats.leaves, 0);
        assert_eq!(stats.splits, 0);
        for cfg in all_engines(3, 1) {
            assert!(multiply(&x, &zero, &cfg).unwrap().is_zero());
            assert!(multiply(&zero, &zero, &cfg).unwrap().is_zero());
        }
    }

    #[test]
    fn small_inputs_take_the_leaf_branch() {
        let s = sig(4, 0);
        let x = ex("1 + e1 + e2we3", s);
        let y = ex("e4 - 2*e1we2", s);
        let cfg = EngineConfig::new(EngineKind::WalshParTasks);
        let (m, stats) = mul_parallel_tasks_instrumented(&x, &y, &cfg).unwrap();
        assert_eq!(stats.leaves, 1);
        assert_eq!(stats.splits, 0);
        assert_eq!(m, mul_sequential(&x, &y).unwrap());
    }

    #[test]
    fn signature_mismatch_is_rejected() {
        let x = ex("e1", sig(2, 0));
        let y = ex("e1", sig(1, 1));
        for cfg in all_engines(2, 1) {
            assert!(matches!(
                multiply(&x, &y, &cfg),
                Err(AlgebraError::SignatureMismatch { .. })
            ));
        }
    }

    #[test]
    fn dynamic_packsize_formula() {
        let cfg = EngineConfig::new(EngineKind::WalshParTasks)
            .with_threads(Threads::fixed(4).unwrap())
            .with_dynamic_packsize(true);
        assert_eq!(cfg.effective_packsize(10, 3), 4);
        assert_eq!(cfg.effective_packsize(1000, 1000), 63);
        assert_eq!(cfg.effective_packsize(4096, 16), 256);
        let fixed = cfg.with_dynamic_packsize(false);
        assert_eq!(fixed.effective_packsize(4096, 4096), DEFAULT_PACKSIZE);
    }

    #[test]
    fn row_blocks_cover_the_range() {
        assert_eq!(row_blocks(10, 3), vec![0..4, 4..7, 7..10]);
        assert_eq!(row_blocks(2, 4), vec![0..1, 1..2]);
        assert_eq!(row_blocks(5, 1), vec![0..5]);
        assert_eq!(row_blocks(0, 4), Vec::<std::ops::Range<usize>>::new());
    }

    #[test]
    fn midpoint_split_builds_balanced_tree() {
        let s = sig(6, 0);
        let x = ex(
            &s.basis()
                .into_iter()
                .map(crate::blades::blade_to_name)
                .collect::<Vec<_>>()
                .join(" + "),
            s,
        );
        let cfg = EngineConfig::new(EngineKind::WalshParTasks)
            .with_packsize(8)
            .unwrap()
            .with_split(SplitRule::Midpoint);
        let (m, stats) = mul_parallel_tasks_instrumented(&x, &x, &cfg).unwrap();
        assert_eq!(stats.leaves, 64);
        assert_eq!(stats.max_depth, 6);
        assert_eq!(m, mul_sequential(&x, &x).unwrap());
    }
}
