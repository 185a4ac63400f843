//! Worker pools on scoped threads. Results never depend on the number of workers.

use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Mutex;
use std::thread;

use approxeq_core::lipschitz::Search;
use approxeq_core::oracle::{grid_best_response_range, grid_size, GridBest};
use approxeq_core::uniform::CountVector;
use approxeq_core::{ConvexStrategySpace, LipschitzVerdict};

/// Chunks handed out per worker, so faster workers pick up more of the range.
const CHUNKS_PER_WORKER: u64 = 16;

fn chunk_len(total: u64, workers: usize) -> u64 {
    (total / (workers as u64 * CHUNKS_PER_WORKER)).max(1)
}

/// Runs a profile search on `workers` threads. Workers claim chunks in index order and share
/// the lowest accepted index, so in `ScanMode::First` the verdict is that of a serial scan.
pub fn run_search(search: &Search<'_>, workers: usize) -> approxeq_core::Result<LipschitzVerdict> {
    let workers = workers.max(1);
    if workers == 1 {
        return search.run();
    }
    let total = search.total();
    let chunk = chunk_len(total, workers);
    let next = AtomicU64::new(0);
    let bound = AtomicU64::new(u64::MAX);
    let failure: Mutex<Option<(u64, approxeq_core::Error)>> = Mutex::new(None);
    thread::scope(|s| {
        for _ in 0..workers {
            s.spawn(|| loop {
                let start = next.fetch_add(chunk, Ordering::Relaxed);
                if start >= total || start > bound.load(Ordering::Acquire) {
                    break;
                }
                if let Err(e) = search.scan(start, start.saturating_add(chunk).min(total), &bound) {
                    let mut slot = failure.lock().expect("no worker panics holding the lock");
                    if slot.as_ref().is_none_or(|(at, _)| start < *at) {
                        *slot = Some((start, e));
                    }
                    break;
                }
            });
        }
    });
    if let Some((_, e)) = failure.into_inner().expect("no worker panics holding the lock") {
        return Err(e);
    }
    search.verdict(bound.load(Ordering::Acquire))
}

/// Grid maximization split across workers, reduced by value then lowest index.
pub fn grid_best_response_parallel<F>(
    value_fn: F,
    space: &ConvexStrategySpace,
    l: u64,
    workers: usize,
) -> approxeq_core::Result<(CountVector, f64)>
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    let total = grid_size(space.vertex_count(), l)?;
    let workers = workers.max(1);
    let chunk = chunk_len(total, workers);
    let next = AtomicU64::new(0);
    let results: Vec<approxeq_core::Result<Option<GridBest>>> = thread::scope(|s| {
        let handles: Vec<_> = (0..workers)
            .map(|_| {
                s.spawn(|| {
                    let mut best: Option<GridBest> = None;
                    loop {
                        let start = next.fetch_add(chunk, Ordering::Relaxed);
                        if start >= total {
                            return Ok(best);
                        }
                        let end = start.saturating_add(chunk).min(total);
                        if let Some(b) = grid_best_response_range(&value_fn, space, l, start, end)? {
                            best = Some(match best {
                                None => b,
                                Some(old) => old.better(b),
                            });
                        }
                    }
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("grid worker panicked")).collect()
    });
    let mut best: Option<GridBest> = None;
    for r in results {
        if let Some(b) = r? {
            best = Some(match best {
                None => b,
                Some(old) => old.better(b),
            });
        }
    }
    let best = best.ok_or(approxeq_core::Error::Empty)?;
    Ok((best.counts, best.value))
}

/// `items.map(f)` on `workers` threads, results in input order.
pub fn parallel_map<T, R, F>(items: &[T], workers: usize, f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync,
{
    let workers = workers.max(1).min(items.len().max(1));
    if workers == 1 {
        return items.iter().map(f).collect();
    }
    let next = AtomicU64::new(0);
    let mut out: Vec<(usize, R)> = thread::scope(|s| {
        let handles: Vec<_> = (0..workers)
            .map(|_| {
                s.spawn(|| {
                    let mut local = Vec::new();
                    loop {
                        let i = next.fetch_add(1, Ordering::Relaxed) as usize;
                        if i >= items.len() {
                            return local;
                        }
                        local.push((i, f(&items[i])));
                    }
                })
            })
            .collect();
        handles.into_iter().flat_map(|h| h.join().expect("map worker panicked")).collect()
    });
    out.sort_by_key(|(i, _)| *i);
    out.into_iter().map(|(_, r)| r).collect()
}
