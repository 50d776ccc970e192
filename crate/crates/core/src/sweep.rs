//! Chunked parallel sweeps with JSON-lines checkpoints.
//!
//! A checkpoint file starts with a header line naming the task, followed by
//! one line per completed chunk: `{chunk_id, range, digest, payload}`, with
//! `digest` the SHA-256 of the payload's JSON text. A torn final line (from
//! an interrupted write) is discarded on resume; any other damage is an
//! error.

use std::fs::{self, File, OpenOptions};
use std::io::Write;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::arith::{scan_discriminant_range, PrimePower};
use crate::curves::{count_p4_range, ProjectiveSpace, QuadricSystem, SearchTable, TrigonalEntry, TrigonalKernel};
use crate::error::{Error, Result};
use crate::ff::FieldSpec;

pub const CHECKPOINT_SCHEMA: u32 = 1;

/// A search split into independent chunks `0..chunk_count()`.
pub trait SweepTask: Sync {
    type Chunk: Serialize + DeserializeOwned + Send;
    type Output;

    /// Command name and parameters; equal identities share checkpoints.
    fn identity(&self) -> Value;
    fn chunk_count(&self) -> u64;
    /// Parameter range covered by a chunk, recorded in the checkpoint.
    fn chunk_range(&self, id: u64) -> (u128, u128);
    fn run_chunk(&self, id: u64) -> Result<Self::Chunk>;
    /// Combines all chunks, given in chunk-id order.
    fn merge(&self, chunks: Vec<Self::Chunk>) -> Result<Self::Output>;
}

#[derive(Debug, Clone, Default)]
pub struct SweepOptions {
    /// Worker threads; 0 uses the rayon default.
    pub threads: usize,
    pub checkpoint_dir: Option<PathBuf>,
    /// Stop after this many newly computed chunks, leaving a resumable
    /// checkpoint.
    pub stop_after: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SweepOutcome<T> {
    Complete(T),
    Interrupted { completed: u64, total: u64 },
}

impl<T> SweepOutcome<T> {
    pub fn complete(self) -> Option<T> {
        match self {
            SweepOutcome::Complete(t) => Some(t),
            SweepOutcome::Interrupted { .. } => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
struct Header {
    schema: u32,
    identity: Value,
    identity_digest: String,
    chunks: u64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct ChunkRecord {
    chunk_id: u64,
    range: (u128, u128),
    digest: String,
    payload: Value,
}

fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

pub fn identity_digest(identity: &Value) -> String {
    sha256_hex(identity.to_string().as_bytes())
}

pub fn checkpoint_path(dir: &Path, identity: &Value) -> PathBuf {
    dir.join(format!("{}.jsonl", &identity_digest(identity)[..16]))
}

struct Checkpoint {
    file: File,
}

impl Checkpoint {
    /// Opens or creates the checkpoint and returns the verified chunks.
    fn open<T: SweepTask>(task: &T, dir: &Path) -> Result<(Self, Vec<Option<Value>>)> {
        fs::create_dir_all(dir)?;
        let identity = task.identity();
        let path = checkpoint_path(dir, &identity);
        let header = Header {
            schema: CHECKPOINT_SCHEMA,
            identity_digest: identity_digest(&identity),
            identity,
            chunks: task.chunk_count(),
        };
        let mut done = vec![None; task.chunk_count() as usize];
        if !path.exists() {
            let mut file = File::create(&path)?;
            writeln!(file, "{}", serde_json::to_string(&header).expect("header serializes"))?;
            file.sync_data()?;
            return Ok((Checkpoint { file }, done));
        }
        let corrupt = |chunk_id: Option<u64>, reason: String| Error::CorruptCheckpoint { chunk_id, reason };
        let text = fs::read_to_string(&path)?;
        let complete_len = text.rfind('\n').map_or(0, |i| i + 1);
        let mut lines = text[..complete_len].lines();
        let first = lines.next().ok_or_else(|| corrupt(None, "missing header".into()))?;
        let found: Header = serde_json::from_str(first).map_err(|e| corrupt(None, format!("bad header: {e}")))?;
        if found != header {
            return Err(corrupt(None, "header does not match this task".into()));
        }
        for line in lines {
            let rec: ChunkRecord = serde_json::from_str(line).map_err(|e| corrupt(None, format!("bad record: {e}")))?;
            let id = rec.chunk_id;
            if id >= task.chunk_count() {
                return Err(corrupt(Some(id), "chunk id out of range".into()));
            }
            if rec.range != task.chunk_range(id) {
                return Err(corrupt(Some(id), "range does not match the task".into()));
            }
            if sha256_hex(rec.payload.to_string().as_bytes()) != rec.digest {
                return Err(corrupt(Some(id), "payload digest mismatch".into()));
            }
            if done[id as usize].replace(rec.payload).is_some() {
                return Err(corrupt(Some(id), "duplicate chunk".into()));
            }
        }
        if complete_len < text.len() {
            // drop the torn tail so appends start on a fresh line
            let f = OpenOptions::new().write(true).open(&path)?;
            f.set_len(complete_len as u64)?;
        }
        let file = OpenOptions::new().append(true).open(&path)?;
        Ok((Checkpoint { file }, done))
    }

    fn append(&mut self, rec: &ChunkRecord) -> Result<()> {
        writeln!(self.file, "{}", serde_json::to_string(rec).expect("record serializes"))?;
        self.file.sync_data()?;
        Ok(())
    }
}

/// Runs all pending chunks and merges them in chunk-id order.
pub fn run_sweep<T: SweepTask>(task: &T, options: &SweepOptions) -> Result<SweepOutcome<T::Output>> {
    let total = task.chunk_count();
    let (mut checkpoint, mut done) = match &options.checkpoint_dir {
        Some(dir) => {
            let (c, d) = Checkpoint::open(task, dir)?;
            (Some(c), d)
        }
        None => (None, vec![None; total as usize]),
    };
    let pending: Vec<u64> = (0..total).filter(|&id| done[id as usize].is_none()).collect();
    let budget = options.stop_after.map_or(pending.len(), |n| (n as usize).min(pending.len()));
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(options.threads)
        .build()
        .map_err(|e| Error::InvalidArgument(format!("thread pool: {e}")))?;
    let batch = pool.current_num_threads().max(1) * 2;
    for ids in pending[..budget].chunks(batch) {
        let results: Vec<Result<Value>> = pool.install(|| {
            ids.par_iter()
                .map(|&id| task.run_chunk(id).map(|c| serde_json::to_value(c).expect("chunk serializes")))
                .collect()
        });
        for (&id, payload) in ids.iter().zip(results) {
            let payload = payload?;
            if let Some(cp) = checkpoint.as_mut() {
                cp.append(&ChunkRecord {
                    chunk_id: id,
                    range: task.chunk_range(id),
                    digest: sha256_hex(payload.to_string().as_bytes()),
                    payload: payload.clone(),
                })?;
            }
            done[id as usize] = Some(payload);
        }
    }
    let completed = done.iter().filter(|d| d.is_some()).count() as u64;
    if completed < total {
        return Ok(SweepOutcome::Interrupted { completed, total });
    }
    let chunks = done
        .into_iter()
        .enumerate()
        .map(|(id, v)| {
            serde_json::from_value(v.expect("all chunks done")).map_err(|e| Error::CorruptCheckpoint {
                chunk_id: Some(id as u64),
                reason: format!("payload does not decode: {e}"),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    task.merge(chunks).map(SweepOutcome::Complete)
}

/// The trigonal table, one chunk per block of `a3` rows.
pub struct TrigonalSweep {
    pub kernel: TrigonalKernel,
    pub rows_per_chunk: u64,
}

impl TrigonalSweep {
    pub fn new(kernel: TrigonalKernel) -> Self {
        let q = kernel.q();
        // about 64 chunks, whole rows each
        TrigonalSweep { rows_per_chunk: q.div_ceil(64).max(1), kernel }
    }
}

impl SweepTask for TrigonalSweep {
    /// `(total, singular_fq, singular_fq2)` per entry, row-major.
    type Chunk = Vec<(u32, u8, u8)>;
    type Output = SearchTable;

    fn identity(&self) -> Value {
        serde_json::json!({
            "command": "trigonal",
            "q": self.kernel.q(),
            "mode": self.kernel.mode(),
            "rows_per_chunk": self.rows_per_chunk,
        })
    }

    fn chunk_count(&self) -> u64 {
        self.kernel.q().div_ceil(self.rows_per_chunk)
    }

    fn chunk_range(&self, id: u64) -> (u128, u128) {
        let lo = id * self.rows_per_chunk;
        (lo as u128, (lo + self.rows_per_chunk).min(self.kernel.q()) as u128)
    }

    fn run_chunk(&self, id: u64) -> Result<Self::Chunk> {
        let (lo, hi) = self.chunk_range(id);
        Ok(self
            .kernel
            .rows(lo as u64..hi as u64)
            .into_iter()
            .map(|e| (e.total, e.singular_fq, e.singular_fq2))
            .collect())
    }

    fn merge(&self, chunks: Vec<Self::Chunk>) -> Result<SearchTable> {
        let entries: Vec<TrigonalEntry> = chunks
            .into_iter()
            .flatten()
            .map(|(total, singular_fq, singular_fq2)| TrigonalEntry { total, singular_fq, singular_fq2 })
            .collect();
        let q = self.kernel.q();
        if entries.len() as u64 != q * q {
            return Err(Error::CorruptCheckpoint { chunk_id: None, reason: "table size mismatch".into() });
        }
        Ok(SearchTable::new(q, entries))
    }
}

/// Points of a three-quadric system in `P^4(F_q)`, by index ranges.
pub struct P4CountSweep {
    pub spec: FieldSpec,
    pub system: QuadricSystem,
    pub chunk_size: u128,
}

impl P4CountSweep {
    pub fn new(spec: FieldSpec, system: QuadricSystem) -> Self {
        let len = ProjectiveSpace::new(spec.q(), 5).len();
        P4CountSweep { chunk_size: len.div_ceil(256).max(1), spec, system }
    }

    fn len(&self) -> u128 {
        ProjectiveSpace::new(self.spec.q(), 5).len()
    }
}

impl SweepTask for P4CountSweep {
    type Chunk = u64;
    type Output = u64;

    fn identity(&self) -> Value {
        let coeffs: Vec<Vec<u64>> = self.system.coeffs.iter().map(|&c| self.spec.coeffs(c)).collect();
        serde_json::json!({
            "command": "quadric-count",
            "q": self.spec.q(),
            "case": self.system.case,
            "coeffs": coeffs,
            "chunk_size": self.chunk_size.to_string(),
        })
    }

    fn chunk_count(&self) -> u64 {
        self.len().div_ceil(self.chunk_size) as u64
    }

    fn chunk_range(&self, id: u64) -> (u128, u128) {
        let lo = id as u128 * self.chunk_size;
        (lo, (lo + self.chunk_size).min(self.len()))
    }

    fn run_chunk(&self, id: u64) -> Result<u64> {
        let (lo, hi) = self.chunk_range(id);
        Ok(count_p4_range(&self.spec, &self.system, lo..hi))
    }

    fn merge(&self, chunks: Vec<u64>) -> Result<u64> {
        Ok(chunks.iter().sum())
    }
}

/// Prime powers `q <= q_max` with discriminant `d`, by ranges of `q`.
pub struct DiscriminantSweep {
    pub d: i64,
    pub q_max: u64,
    pub width: u64,
}

impl DiscriminantSweep {
    pub fn new(d: i64, q_max: u64) -> Self {
        DiscriminantSweep { d, q_max, width: (q_max / 64).max(1 << 16) }
    }
}

impl SweepTask for DiscriminantSweep {
    type Chunk = Vec<u64>;
    type Output = Vec<PrimePower>;

    fn identity(&self) -> Value {
        serde_json::json!({ "command": "scan-disc", "d": self.d, "q_max": self.q_max, "width": self.width })
    }

    fn chunk_count(&self) -> u64 {
        if self.q_max < 2 {
            0
        } else {
            (self.q_max - 1).div_ceil(self.width)
        }
    }

    fn chunk_range(&self, id: u64) -> (u128, u128) {
        let lo = 2 + id * self.width;
        (lo as u128, (lo + self.width).min(self.q_max + 1) as u128)
    }

    fn run_chunk(&self, id: u64) -> Result<Vec<u64>> {
        let (lo, hi) = self.chunk_range(id);
        Ok(scan_discriminant_range(self.d, lo as u64, hi as u64).into_iter().map(|pp| pp.q).collect())
    }

    fn merge(&self, chunks: Vec<Vec<u64>>) -> Result<Vec<PrimePower>> {
        chunks.into_iter().flatten().map(PrimePower::new).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::scan_discriminant;
    use crate::curves::{count_p4_points, QuadricCase, TrigonalMode};

    #[test]
    fn trigonal_sweep_matches_direct_table() {
        let kernel = TrigonalKernel::new(31, TrigonalMode::Fast).unwrap();
        let direct = kernel.table();
        let sweep = TrigonalSweep::new(kernel);
        for threads in [1, 3] {
            let opts = SweepOptions { threads, ..Default::default() };
            let table = run_sweep(&sweep, &opts).unwrap().complete().unwrap();
            assert_eq!(table.digest(), direct.digest());
        }
    }

    #[test]
    fn interrupt_and_resume() {
        let dir = tempfile::tempdir().unwrap();
        let sweep = TrigonalSweep::new(TrigonalKernel::new(31, TrigonalMode::Fast).unwrap());
        let expected = sweep.kernel.table().digest();
        let opts = SweepOptions { threads: 2, checkpoint_dir: Some(dir.path().to_path_buf()), stop_after: Some(5) };
        let first = run_sweep(&sweep, &opts).unwrap();
        assert_eq!(first, SweepOutcome::Interrupted { completed: 5, total: sweep.chunk_count() });
        let second = run_sweep(&sweep, &SweepOptions { stop_after: Some(7), ..opts.clone() }).unwrap();
        assert!(matches!(second, SweepOutcome::Interrupted { completed: 12, .. }));

        // a torn write at the end is discarded
        let path = checkpoint_path(dir.path(), &sweep.identity());
        let mut f = OpenOptions::new().append(true).open(&path).unwrap();
        write!(f, "{{\"chunk_id\": 12, \"ran").unwrap();
        drop(f);

        let done = run_sweep(&sweep, &SweepOptions { stop_after: None, ..opts }).unwrap();
        assert_eq!(done.complete().unwrap().digest(), expected);
    }

    #[test]
    fn corrupt_payload_is_reported() {
        let dir = tempfile::tempdir().unwrap();
        let sweep = TrigonalSweep::new(TrigonalKernel::new(11, TrigonalMode::Fast).unwrap());
        let opts = SweepOptions { threads: 1, checkpoint_dir: Some(dir.path().to_path_buf()), stop_after: Some(3) };
        run_sweep(&sweep, &opts).unwrap();
        let path = checkpoint_path(dir.path(), &sweep.identity());
        let text = fs::read_to_string(&path).unwrap();
        let mut lines: Vec<String> = text.lines().map(String::from).collect();
        let mut rec: ChunkRecord = serde_json::from_str(&lines[2]).unwrap();
        rec.payload[0][0] = Value::from(999);
        lines[2] = serde_json::to_string(&rec).unwrap();
        fs::write(&path, lines.join("\n") + "\n").unwrap();
        let err = run_sweep(&sweep, &opts).unwrap_err();
        assert!(matches!(err, Error::CorruptCheckpoint { chunk_id: Some(1), .. }), "{err:?}");
    }

    #[test]
    fn mismatched_header_is_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let sweep = TrigonalSweep::new(TrigonalKernel::new(11, TrigonalMode::Fast).unwrap());
        let path = checkpoint_path(dir.path(), &sweep.identity());
        fs::write(&path, "{\"schema\":1}\n").unwrap();
        let opts = SweepOptions { checkpoint_dir: Some(dir.path().to_path_buf()), ..Default::default() };
        assert!(matches!(run_sweep(&sweep, &opts), Err(Error::CorruptCheckpoint { chunk_id: None, .. })));
    }

    #[test]
    fn p4_sweep_matches_direct_count() {
        let f = FieldSpec::prime(11).unwrap();
        let system = QuadricSystem::new(&f, QuadricCase::Two, &[1, 2, 3, 4, 5, 6, 7, 8, 9]).unwrap();
        let direct = count_p4_points(&f, &system, 1 << 20).unwrap();
        let sweep = P4CountSweep::new(f, system);
        let opts = SweepOptions { threads: 2, ..Default::default() };
        assert_eq!(run_sweep(&sweep, &opts).unwrap().complete(), Some(direct));
    }

    #[test]
    fn discriminant_sweep_matches_scan() {
        let sweep = DiscriminantSweep { d: -19, q_max: 100_000, width: 7_000 };
        let got = run_sweep(&sweep, &SweepOptions::default()).unwrap().complete().unwrap();
        let want = scan_discriminant(-19, 100_000);
        assert_eq!(got.iter().map(|p| p.q).collect::<Vec<_>>(), want.iter().map(|p| p.q).collect::<Vec<_>>());
        let empty = DiscriminantSweep { d: -19, q_max: 1, width: 10 };
        assert_eq!(run_sweep(&empty, &SweepOptions::default()).unwrap().complete(), Some(vec![]));
    }
}
