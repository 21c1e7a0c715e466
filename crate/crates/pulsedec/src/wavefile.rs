//! Waveform and manifest persistence.
//!
//! Waveforms use a fixed little-endian binary layout:
//! `fs: f64, n: u64`, followed by `n` samples as f64. Manifests are JSON and
//! record the scenario plus every generated spec and its seed, so a corpus is
//! reproducible from the manifest alone.

use crate::error::{Error, Result};
use crate::model::{ModulationSpec, SampledSignal};
use crate::testgen::ScenarioConfig;
use serde::{Deserialize, Serialize};
use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

pub fn write_waveform(path: &Path, signal: &SampledSignal) -> Result<()> {
    let mut out = BufWriter::new(File::create(path)?);
    out.write_all(&signal.fs().to_le_bytes())?;
    out.write_all(&(signal.len() as u64).to_le_bytes())?;
    for &s in signal.samples() {
        out.write_all(&s.to_le_bytes())?;
    }
    out.flush()?;
    Ok(())
}

pub fn read_waveform(path: &Path) -> Result<SampledSignal> {
    let mut input = BufReader::new(File::open(path)?);
    let mut header = [0u8; 16];
    input
        .read_exact(&mut header)
        .map_err(|_| Error::Format(format!("{}: missing 16-byte header", path.display())))?;
    let fs = f64::from_le_bytes(header[..8].try_into().unwrap());
    let n = u64::from_le_bytes(header[8..].try_into().unwrap());
    if !(fs > 0.0) || !fs.is_finite() {
        return Err(Error::Format(format!(
            "{}: invalid sampling rate {fs}",
            path.display()
        )));
    }
    if n == 0 {
        return Err(Error::Format(format!(
            "{}: waveform declares zero samples",
            path.display()
        )));
    }
    let mut bytes = Vec::new();
    input.read_to_end(&mut bytes)?;
    if bytes.len() != n as usize * 8 {
        return Err(Error::Format(format!(
            "{}: expected {} sample bytes, found {}",
            path.display(),
            n * 8,
            bytes.len()
        )));
    }
    let samples = bytes
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().unwrap()))
        .collect();
    SampledSignal::new(samples, fs)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ManifestEntry {
    pub id: String,
    pub spec: ModulationSpec,
}

/// Corpus manifest: the scenario it was drawn from and every signal's spec.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub scenario: ScenarioConfig,
    pub signals: Vec<ManifestEntry>,
}

impl Manifest {
    pub fn write_json(&self, path: &Path) -> Result<()> {
        let json = serde_json::to_string_pretty(self)
            .map_err(|e| Error::Format(format!("manifest serialization failed: {e}")))?;
        let mut out = BufWriter::new(File::create(path)?);
        out.write_all(json.as_bytes())?;
        out.write_all(b"\n")?;
        out.flush()?;
        Ok(())
    }

    pub fn read_json(path: &Path) -> Result<Self> {
        let mut text = String::new();
        BufReader::new(File::open(path)?).read_to_string(&mut text)?;
        serde_json::from_str(&text)
            .map_err(|e| Error::Format(format!("{}: {e}", path.display())))
    }
}

/// Canonical waveform file name for signal `index`.
pub fn signal_file_name(index: usize) -> String {
    format!("sig_{index:04}.bin")
}

/// Canonical signal id for manifest and CSV rows.
pub fn signal_id(index: usize) -> String {
    format!("sig_{index:04}")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn waveform_round_trip() {
        let dir = std::env::temp_dir().join("pulsedec_wave_test");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("w.bin");
        let sig = SampledSignal::new(vec![0.25, -1.5, 3.0e-5, 230.0], 10_000.0).unwrap();
        write_waveform(&path, &sig).unwrap();
        let back = read_waveform(&path).unwrap();
        assert_eq!(back.samples(), sig.samples());
        assert_eq!(back.fs(), sig.fs());
    }

    #[test]
    fn truncated_waveform_is_rejected() {
        let dir = std::env::temp_dir().join("pulsedec_wave_test");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("short.bin");
        std::fs::write(&path, [0u8; 20]).unwrap();
        assert!(matches!(read_waveform(&path), Err(Error::Format(_))));
    }

    #[test]
    fn empty_file_is_rejected() {
        let dir = std::env::temp_dir().join("pulsedec_wave_test");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("empty.bin");
        std::fs::write(&path, []).unwrap();
        assert!(read_waveform(&path).is_err());
    }
}
