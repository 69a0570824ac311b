//! Threading smoke test: the parallel sum `1 + 2 + ... + n`.
//!
//! The task variant splits a range at its midpoint until it is shorter than
//! [`SUM_LEAF`], then adds the halves back in split order. The flat variant
//! starts one thread per contiguous block and waits for all of them.

use crate::engines::{hardware_threads, in_pool, row_blocks};

/// Ranges with `hi - lo` below this are summed directly.
pub const SUM_LEAF: u64 = 1000;

/// Upper bound of the reference summation.
pub const SUM_TOP: u64 = 10_000_000;

/// `1 + ... + 10^7`.
pub const SUM_EXPECTED: u64 = 50_000_005_000_000;

pub fn sequential_sum(lo: u64, hi: u64) -> u64 {
    (lo..=hi).sum()
}

fn task_sum(lo: u64, hi: u64) -> u64 {
    if hi - lo < SUM_LEAF {
        return sequential_sum(lo, hi);
    }
    let mid = (hi - lo) / 2 + lo;
    let (a, b) = rayon::join(|| task_sum(lo, mid), || task_sum(mid + 1, hi));
    a + b
}

/// Recursive split-then-continue summation on a pool of `threads` workers.
pub fn parallel_sum_tasks(lo: u64, hi: u64, threads: usize) -> u64 {
    if hi < lo {
        return 0;
    }
    in_pool(threads, || task_sum(lo, hi))
}

/// One thread per block, results added in block order after joining.
pub fn parallel_sum_flat(lo: u64, hi: u64, threads: usize) -> u64 {
    if hi < lo {
        return 0;
    }
    let len = (hi - lo + 1) as usize;
    std::thread::scope(|s| {
        let handles: Vec<_> = row_blocks(len, threads)
            .into_iter()
            .map(|r| {
                let (a, b) = (lo + r.start as u64, lo + r.end as u64 - 1);
                s.spawn(move || sequential_sum(a, b))
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("sum thread panicked"))
            .sum()
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SelfTestReport {
    pub threads: usize,
    pub sequential: u64,
    pub tasks: u64,
    pub flat: u64,
    pub logical_cpus: usize,
    pub physical_cpus: usize,
}

impl SelfTestReport {
    pub fn passed(&self) -> bool {
        self.sequential == SUM_EXPECTED && self.tasks == SUM_EXPECTED && self.flat == SUM_EXPECTED
    }
}

pub fn run_selftest(threads: usize) -> SelfTestReport {
    SelfTestReport {
        threads,
        sequential: sequential_sum(1, SUM_TOP),
        tasks: parallel_sum_tasks(1, SUM_TOP, threads),
        flat: parallel_sum_flat(1, SUM_TOP, threads),
        logical_cpus: hardware_threads(),
        physical_cpus: num_cpus::get_physical(),
    }
}
