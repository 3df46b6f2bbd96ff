//! File-based adapter that lets an external solver supply polar curves in
//! place of either internal fidelity level.
//!
//! Protocol, per request, inside the adapter directory:
//!
//! 1. the toolkit writes `design_<id>.txt` — one header line
//!    `# fidelity <level>` followed by the 32 design parameters, one per
//!    line;
//! 2. the external solver evaluates and writes `polar_<id>.csv` with the
//!    standard header `aoa_deg,lift_N,drag_N`;
//! 3. the solver then creates the empty sentinel `polar_<id>.done`; the
//!    toolkit only reads the CSV after the sentinel exists.
//!
//! `<id>` is a 16-hex-digit content hash of the design vector and fidelity
//! level, so identical requests map to identical file names.

use crate::error::{Error, Result};
use crate::geometry::FullDesignVector;
use crate::hydro::{Fidelity, PolarCurve};
use crate::scalar::Real;
use sha2::{Digest, Sha256};
use std::path::PathBuf;
use std::time::{Duration, Instant};

#[derive(Debug, Clone)]
pub struct ExternalSolverAdapter {
    pub dir: PathBuf,
    pub poll_interval: Duration,
    pub timeout: Duration,
}

impl ExternalSolverAdapter {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        ExternalSolverAdapter {
            dir: dir.into(),
            poll_interval: Duration::from_millis(100),
            timeout: Duration::from_secs(3600),
        }
    }

    /// Deterministic request id for a design/fidelity pair.
    pub fn request_id<T: Real>(u: &FullDesignVector<T>, fidelity: Fidelity) -> String {
        let mut hasher = Sha256::new();
        for v in u.as_slice() {
            hasher.update(v.as_f64().to_le_bytes());
        }
        hasher.update([fidelity.level() as u8]);
        let digest = hasher.finalize();
        digest[..8].iter().map(|b| format!("{b:02x}")).collect()
    }

    pub fn design_path(&self, id: &str) -> PathBuf {
        self.dir.join(format!("design_{id}.txt"))
    }

    pub fn polar_path(&self, id: &str) -> PathBuf {
        self.dir.join(format!("polar_{id}.csv"))
    }

    pub fn sentinel_path(&self, id: &str) -> PathBuf {
        self.dir.join(format!("polar_{id}.done"))
    }

    /// Write the design request file (atomically via a temp name).
    pub fn write_request<T: Real>(&self, u: &FullDesignVector<T>, fidelity: Fidelity) -> Result<String> {
        std::fs::create_dir_all(&self.dir)?;
        let id = Self::request_id(u, fidelity);
        let mut body = format!("# fidelity {}\n", fidelity.level());
        for v in u.as_slice() {
            body.push_str(&format!("{}\n", v.as_f64()));
        }
        let tmp = self.dir.join(format!(".design_{id}.tmp"));
        std::fs::write(&tmp, body)?;
        std::fs::rename(&tmp, self.design_path(&id))?;
        Ok(id)
    }

    /// Block until the sentinel for `id` appears, then parse the polar.
    pub fn wait_for_polar<T: Real>(&self, id: &str, fidelity: Fidelity) -> Result<PolarCurve<T>> {
        let start = Instant::now();
        let sentinel = self.sentinel_path(id);
        while !sentinel.exists() {
            if start.elapsed() > self.timeout {
                return Err(Error::Adapter(format!(
                    "timed out after {:?} waiting for {}",
                    self.timeout,
                    sentinel.display()
                )));
            }
            std::thread::sleep(self.poll_interval);
        }
        self.read_polar(id, fidelity)
    }

    /// Parse a completed polar file.
    pub fn read_polar<T: Real>(&self, id: &str, fidelity: Fidelity) -> Result<PolarCurve<T>> {
        let path = self.polar_path(id);
        let text = std::fs::read_to_string(&path)
            .map_err(|e| Error::Adapter(format!("read {}: {e}", path.display())))?;
        PolarCurve::from_csv(&text, fidelity)
    }

    /// Full request/wait/parse round trip.
    pub fn request_polar<T: Real>(&self, u: &FullDesignVector<T>, fidelity: Fidelity) -> Result<PolarCurve<T>> {
        let id = self.write_request(u, fidelity)?;
        self.wait_for_polar(&id, fidelity)
    }
}

/// Static description of the adapter file contract, used by docs and the
/// CLI help text.
pub const PROTOCOL_NOTE: &str = "design_<id>.txt in, polar_<id>.csv out, \
polar_<id>.done as completion sentinel; <id> = 16-hex content hash of the \
design vector and fidelity level";

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::baseline_design;

    fn fake_solver_response(dir: &std::path::Path, id: &str) {
        let csv = "aoa_deg,lift_N,drag_N\n-2,-1.0,0.4\n0,1.0,0.35\n2,3.0,0.5\n";
        std::fs::write(dir.join(format!("polar_{id}.csv")), csv).unwrap();
        std::fs::write(dir.join(format!("polar_{id}.done")), "").unwrap();
    }

    #[test]
    fn round_trip_through_directory_protocol() {
        let tmp = tempfile::tempdir().unwrap();
        let adapter = ExternalSolverAdapter::new(tmp.path());
        let u = baseline_design::<f64>();
        let id = adapter.write_request(&u, Fidelity::Fine).unwrap();
        assert!(adapter.design_path(&id).exists());
        let body = std::fs::read_to_string(adapter.design_path(&id)).unwrap();
        assert!(body.starts_with("# fidelity 2\n"));
        assert_eq!(body.lines().count(), 33);

        fake_solver_response(tmp.path(), &id);
        let polar: PolarCurve<f64> = adapter.wait_for_polar(&id, Fidelity::Fine).unwrap();
        assert_eq!(polar.points.len(), 3);
        assert_eq!(polar.fidelity, Fidelity::Fine);
    }

    #[test]
    fn request_ids_are_content_addressed() {
        let u = baseline_design::<f64>();
        let a = ExternalSolverAdapter::request_id(&u, Fidelity::Coarse);
        let b = ExternalSolverAdapter::request_id(&u, Fidelity::Coarse);
        let c = ExternalSolverAdapter::request_id(&u, Fidelity::Fine);
        assert_eq!(a, b);
        assert_ne!(a, c);
        assert_eq!(a.len(), 16);
    }

    #[test]
    fn missing_sentinel_times_out() {
        let tmp = tempfile::tempdir().unwrap();
        let mut adapter = ExternalSolverAdapter::new(tmp.path());
        adapter.timeout = Duration::from_millis(50);
        adapter.poll_interval = Duration::from_millis(10);
        let u = baseline_design::<f64>();
        let id = adapter.write_request(&u, Fidelity::Coarse).unwrap();
        assert!(matches!(
            adapter.wait_for_polar::<f64>(&id, Fidelity::Coarse),
            Err(Error::Adapter(_))
        ));
    }

    #[test]
    fn malformed_polar_is_rejected() {
        let tmp = tempfile::tempdir().unwrap();
        let adapter = ExternalSolverAdapter::new(tmp.path());
        let u = baseline_design::<f64>();
        let id = adapter.write_request(&u, Fidelity::Coarse).unwrap();
        std::fs::write(adapter.polar_path(&id), "bad,header\n1,2\n").unwrap();
        std::fs::write(adapter.sentinel_path(&id), "").unwrap();
        assert!(adapter.wait_for_polar::<f64>(&id, Fidelity::Coarse).is_err());
    }
}
