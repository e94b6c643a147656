//! Order-preserving parallel evaluation.
//!
//! Workers pull indices from a shared counter and send `(index, value)`
//! pairs back; results are reassembled in index order, so the output is
//! independent of scheduling and identical to the serial run.

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::mpsc;

pub fn parallel_map<T, F>(count: usize, jobs: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync,
{
    if jobs <= 1 || count <= 1 {
        return (0..count).map(f).collect();
    }
    let next = AtomicUsize::new(0);
    let (tx, rx) = mpsc::channel::<(usize, T)>();
    std::thread::scope(|scope| {
        for _ in 0..jobs.min(count) {
            let tx = tx.clone();
            let next = &next;
            let f = &f;
            scope.spawn(move || loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                if i >= count {
                    break;
                }
                if tx.send((i, f(i))).is_err() {
                    break;
                }
            });
        }
        drop(tx);
        let mut slots: Vec<Option<T>> = (0..count).map(|_| None).collect();
        for (i, v) in rx {
            slots[i] = Some(v);
        }
        slots.into_iter().map(|s| s.expect("worker filled every slot")).collect()
    })
}

/// Degree of parallelism: the `--jobs` flag, else `REARRANGE_LAB_JOBS`,
/// else 1.
pub fn effective_jobs(flag: Option<usize>) -> usize {
    flag.or_else(|| {
        std::env::var("REARRANGE_LAB_JOBS")
            .ok()
            .and_then(|v| v.parse().ok())
    })
    .unwrap_or(1)
    .max(1)
}
