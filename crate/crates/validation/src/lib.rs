//! Synthetic workloads and an allocation meter for the acceptance checks.

use std::alloc::{GlobalAlloc, Layout, System};
use std::collections::BTreeSet;
use std::io::{self, Read};
use std::sync::atomic::{AtomicUsize, Ordering};

use qrnet_core::qr::{EdgeData, QrGraph};
use qrnet_core::UserId;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

/// System allocator that tracks live bytes and their high-water mark.
pub struct CountingAlloc;

static LIVE: AtomicUsize = AtomicUsize::new(0);
static PEAK: AtomicUsize = AtomicUsize::new(0);

unsafe impl GlobalAlloc for CountingAlloc {
    unsafe fn alloc(&self, layout: Layout) -> *mut u8 {
        let p = System.alloc(layout);
        if !p.is_null() {
            grow(layout.size());
        }
        p
    }

    unsafe fn alloc_zeroed(&self, layout: Layout) -> *mut u8 {
        let p = System.alloc_zeroed(layout);
        if !p.is_null() {
            grow(layout.size());
        }
        p
    }

    unsafe fn dealloc(&self, ptr: *mut u8, layout: Layout) {
        System.dealloc(ptr, layout);
        LIVE.fetch_sub(layout.size(), Ordering::Relaxed);
    }

    unsafe fn realloc(&self, ptr: *mut u8, layout: Layout, new_size: usize) -> *mut u8 {
        let p = System.realloc(ptr, layout, new_size);
        if !p.is_null() {
            LIVE.fetch_sub(layout.size(), Ordering::Relaxed);
            grow(new_size);
        }
        p
    }
}

fn grow(size: usize) {
    let live = LIVE.fetch_add(size, Ordering::Relaxed) + size;
    PEAK.fetch_max(live, Ordering::Relaxed);
}

pub fn live_bytes() -> usize {
    LIVE.load(Ordering::Relaxed)
}

/// Resets the high-water mark to the current live size.
pub fn reset_peak() {
    PEAK.store(LIVE.load(Ordering::Relaxed), Ordering::Relaxed);
}

pub fn peak_bytes() -> usize {
    PEAK.load(Ordering::Relaxed)
}

/// A Posts.xml document generated on the fly: `rows` rows alternating
/// between a question and one answer to it, owners drawn from `users`.
pub struct SyntheticPosts {
    rows: u64,
    next: u64,
    users: u64,
    rng: StdRng,
    pending: Vec<u8>,
    pos: usize,
    finished: bool,
}

impl SyntheticPosts {
    pub fn new(rows: u64, users: u64, seed: u64) -> Self {
        SyntheticPosts {
            rows,
            next: 0,
            users,
            rng: StdRng::seed_from_u64(seed),
            pending: b"<?xml version=\"1.0\" encoding=\"utf-8\"?>\n<posts>\n".to_vec(),
            pos: 0,
            finished: false,
        }
    }

    fn refill(&mut self) {
        self.pending.clear();
        self.pos = 0;
        if self.next == self.rows {
            if !self.finished {
                self.pending.extend_from_slice(b"</posts>\n");
                self.finished = true;
            }
            return;
        }
        let id = self.next + 1;
        let owner = self.rng.random_range(1..=self.users);
        // one minute per question, answers up to a day later
        let base = 1_600_000_000u64 + 60 * (id / 2);
        let row = if id % 2 == 1 {
            format!(
                "  <row Id=\"{id}\" PostTypeId=\"1\" CreationDate=\"{}\" Score=\"3\" ViewCount=\"120\" Body=\"&lt;p&gt;How do I compute this?&lt;/p&gt;\" OwnerUserId=\"{owner}\" />\n",
                iso(base)
            )
        } else {
            let delay = self.rng.random_range(0..86_400);
            format!(
                "  <row Id=\"{id}\" PostTypeId=\"2\" ParentId=\"{}\" CreationDate=\"{}\" Score=\"1\" Body=\"&lt;p&gt;Like so.&lt;/p&gt;\" OwnerUserId=\"{owner}\" />\n",
                id - 1,
                iso(base + delay)
            )
        };
        self.pending.extend_from_slice(row.as_bytes());
        self.next += 1;
    }
}

fn iso(unix: u64) -> String {
    let days = unix / 86_400;
    let secs = unix % 86_400;
    let (y, m, d) = civil_from_days(days as i64);
    format!(
        "{y:04}-{m:02}-{d:02}T{:02}:{:02}:{:02}.000",
        secs / 3600,
        secs / 60 % 60,
        secs % 60
    )
}

// days since 1970-01-01 to a proleptic Gregorian date
fn civil_from_days(z: i64) -> (i64, u32, u32) {
    let z = z + 719_468;
    let era = z.div_euclid(146_097);
    let doe = z.rem_euclid(146_097);
    let yoe = (doe - doe / 1460 + doe / 36_524 - doe / 146_096) / 365;
    let doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    let mp = (5 * doy + 2) / 153;
    let d = (doy - (153 * mp + 2) / 5 + 1) as u32;
    let m = if mp < 10 { mp + 3 } else { mp - 9 } as u32;
    let y = yoe + era * 400 + i64::from(m <= 2);
    (y, m, d)
}

impl Read for SyntheticPosts {
    fn read(&mut self, buf: &mut [u8]) -> io::Result<usize> {
        if self.pos == self.pending.len() {
            self.refill();
            if self.pending.is_empty() {
                return Ok(0);
            }
        }
        let n = buf.len().min(self.pending.len() - self.pos);
        buf[..n].copy_from_slice(&self.pending[self.pos..self.pos + n]);
        self.pos += n;
        Ok(n)
    }
}

/// Random simple digraph on exactly `nodes` users and `edges` edges. Most
/// answers go to a small core of prolific responders, as in real QR
/// networks; every user touches at least one edge.
pub fn synthetic_qr_graph(nodes: usize, edges: usize, seed: u64) -> QrGraph<f64> {
    assert!(edges >= nodes / 2 && edges <= nodes * (nodes - 1));
    let mut rng = StdRng::seed_from_u64(seed);
    let mut set = BTreeSet::new();
    let pick_responder = |rng: &mut StdRng| {
        let u: f64 = rng.random();
        ((u * u * u) * nodes as f64) as usize
    };
    // cover every node first
    for v in 0..nodes {
        loop {
            let r = pick_responder(&mut rng);
            if r != v && set.insert((v, r)) {
                break;
            }
        }
        if set.len() == edges {
            break;
        }
    }
    while set.len() < edges {
        let q = rng.random_range(0..nodes);
        let r = pick_responder(&mut rng);
        if q != r {
            set.insert((q, r));
        }
    }
    QrGraph::from_edges(
        (0..nodes as i64).map(UserId),
        set.into_iter().map(|(q, r)| {
            let hours: f64 = rng.random_range(0.0..72.0);
            (
                UserId(q as i64),
                UserId(r as i64),
                EdgeData {
                    weight: 1.0 / (hours + 0.01),
                    interaction_count: 1,
                },
            )
        }),
        0.01,
    )
    .expect("generated edges are simple")
}
