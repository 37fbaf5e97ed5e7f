//! On-disk formats: a binary spectrum container and deterministic CSV/JSON
//! artifacts stamped with a configuration hash.
//!
//! The spectrum container is a single JSON header line (newline-terminated)
//! followed by little-endian f64 blocks: radial nodes, radial weights, then
//! interleaved (re, im) coefficients in m-major order. Storing the radial
//! rule verbatim makes the round trip bit-exact even for dyadically
//! relabeled grids, whose rules are rescalings rather than fresh designs.

use crate::error::{Error, Result};
use crate::field::SphericalSpectrum;
use crate::grid::SpectralGrid;
use crate::group::HTypeGroup;
use crate::special::RadialRule;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::{Path, PathBuf};

const MAGIC: &str = "htype-spectrum";
const VERSION: u32 = 1;

#[derive(Debug, Serialize, Deserialize)]
struct SpectrumHeader {
    magic: String,
    version: u32,
    d: usize,
    p: usize,
    m_max: usize,
    box_len: f64,
    n_s: usize,
    n_radial: usize,
    radial_m_max: usize,
    radial_lambda_min: f64,
    radial_lambda_max: f64,
}

fn write_f64s<W: Write>(w: &mut W, xs: &[f64]) -> std::io::Result<()> {
    for &x in xs {
        w.write_all(&x.to_le_bytes())?;
    }
    Ok(())
}

fn read_f64s<R: Read>(r: &mut R, n: usize) -> std::io::Result<Vec<f64>> {
    let mut buf = [0u8; 8];
    let mut out = Vec::with_capacity(n);
    for _ in 0..n {
        r.read_exact(&mut buf)?;
        out.push(f64::from_le_bytes(buf));
    }
    Ok(out)
}

/// Serialize a spectrum (with its full discretization) to a file.
pub fn write_spectrum(path: &Path, s: &SphericalSpectrum) -> Result<()> {
    let grid = &s.grid;
    let header = SpectrumHeader {
        magic: MAGIC.into(),
        version: VERSION,
        d: grid.group.d,
        p: grid.group.p,
        m_max: grid.m_max,
        box_len: grid.box_len,
        n_s: grid.n_s,
        n_radial: grid.radial.nodes.len(),
        radial_m_max: grid.radial.m_max,
        radial_lambda_min: grid.radial.lambda_min,
        radial_lambda_max: grid.radial.lambda_max,
    };
    let mut w = BufWriter::new(std::fs::File::create(path)?);
    serde_json::to_writer(&mut w, &header).map_err(|e| Error::Io(e.to_string()))?;
    w.write_all(b"\n")?;
    write_f64s(&mut w, &grid.radial.nodes)?;
    write_f64s(&mut w, &grid.radial.weights)?;
    let mut flat = Vec::with_capacity(2 * s.coeffs.len());
    for c in &s.coeffs {
        flat.push(c.re);
        flat.push(c.im);
    }
    write_f64s(&mut w, &flat)?;
    w.flush()?;
    Ok(())
}

/// Load a spectrum written by [`write_spectrum`]; the discretization is
/// reassembled bit-exactly from the stored radial rule.
pub fn read_spectrum(path: &Path) -> Result<SphericalSpectrum> {
    let mut r = BufReader::new(std::fs::File::open(path)?);
    let mut line = String::new();
    r.read_line(&mut line)?;
    let header: SpectrumHeader =
        serde_json::from_str(line.trim_end()).map_err(|e| Error::Io(e.to_string()))?;
    if header.magic != MAGIC || header.version != VERSION {
        return Err(Error::ConfigInvalid(format!(
            "not a spectrum container (magic '{}', version {})",
            header.magic, header.version
        )));
    }
    let group = HTypeGroup::build(header.d, header.p)?;
    let nodes = read_f64s(&mut r, header.n_radial)?;
    let weights = read_f64s(&mut r, header.n_radial)?;
    let radial = RadialRule {
        nodes,
        weights,
        m_max: header.radial_m_max,
        lambda_min: header.radial_lambda_min,
        lambda_max: header.radial_lambda_max,
    };
    let grid = SpectralGrid::with_layout(&group, header.m_max, header.box_len, header.n_s, radial);
    let n = (header.m_max + 1) * grid.n_bins;
    let flat = read_f64s(&mut r, 2 * n)?;
    let coeffs: Vec<Complex64> = flat
        .chunks_exact(2)
        .map(|c| Complex64::new(c[0], c[1]))
        .collect();
    Ok(SphericalSpectrum { grid, coeffs })
}

/// Hex SHA-256 of the canonical JSON encoding of a run configuration; the
/// same configuration always yields the same stamp.
pub fn config_hash<T: Serialize>(config: &T) -> String {
    let json = serde_json::to_string(config).expect("config serialization is infallible");
    let mut hasher = Sha256::new();
    hasher.update(json.as_bytes());
    let digest = hasher.finalize();
    digest.iter().take(16).map(|b| format!("{b:02x}")).collect()
}

/// Output directory: `$HTYPE_LAB_OUT` if set, else the working directory.
pub fn resolve_out_dir() -> PathBuf {
    std::env::var_os("HTYPE_LAB_OUT")
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from("."))
}

/// Write a JSON artifact `{config_hash, config, payload}`; byte-identical
/// across reruns of the same configuration.
pub fn write_json_artifact<C: Serialize, P: Serialize>(
    dir: &Path,
    name: &str,
    config: &C,
    payload: &P,
) -> Result<PathBuf> {
    std::fs::create_dir_all(dir)?;
    let path = dir.join(name);
    let doc = serde_json::json!({
        "config_hash": config_hash(config),
        "config": config,
        "payload": payload,
    });
    let mut w = BufWriter::new(std::fs::File::create(&path)?);
    serde_json::to_writer_pretty(&mut w, &doc).map_err(|e| Error::Io(e.to_string()))?;
    w.write_all(b"\n")?;
    w.flush()?;
    Ok(path)
}

/// Write a CSV artifact with the configuration stamp in a leading comment
/// line, then a header row and the data rows.
pub fn write_csv_artifact<C: Serialize>(
    dir: &Path,
    name: &str,
    config: &C,
    header: &[&str],
    rows: &[Vec<String>],
) -> Result<PathBuf> {
    std::fs::create_dir_all(dir)?;
    let path = dir.join(name);
    let mut file = BufWriter::new(std::fs::File::create(&path)?);
    writeln!(file, "# config_hash={}", config_hash(config))?;
    let mut w = csv::Writer::from_writer(file);
    w.write_record(header).map_err(|e| Error::Io(e.to_string()))?;
    for row in rows {
        w.write_record(row).map_err(|e| Error::Io(e.to_string()))?;
    }
    w.flush()?;
    Ok(path)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calculus::rescale_dyadic;

    #[test]
    fn spectrum_round_trip_is_bit_exact() {
        let g = HTypeGroup::build(2, 2).unwrap();
        let grid = SpectralGrid::design(&g, 6, 12.0, 8).unwrap();
        let s = SphericalSpectrum::random_band_limited(&grid, 4, 3, 9);
        // Use a dyadically relabeled spectrum: its radial rule is not a
        // fresh design, so this exercises the verbatim rule storage.
        let s = rescale_dyadic(&s, 1);
        let dir = std::env::temp_dir().join("htype-io-test");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("spec.htspec");
        write_spectrum(&path, &s).unwrap();
        let back = read_spectrum(&path).unwrap();
        assert!(back.grid.as_ref() == s.grid.as_ref());
        assert_eq!(back.grid.radial.nodes, s.grid.radial.nodes);
        assert_eq!(back.coeffs, s.coeffs);
    }

    #[test]
    fn config_hash_is_stable_and_sensitive() {
        let a = serde_json::json!({"d": 2, "p": 2, "m_max": 8});
        let b = serde_json::json!({"d": 2, "p": 2, "m_max": 9});
        assert_eq!(config_hash(&a), config_hash(&a));
        assert_ne!(config_hash(&a), config_hash(&b));
        assert_eq!(config_hash(&a).len(), 32);
    }

    #[test]
    fn artifacts_are_byte_identical_across_reruns() {
        let dir = std::env::temp_dir().join("htype-io-artifacts");
        let cfg = serde_json::json!({"run": "demo", "n": 4});
        let payload = serde_json::json!({"values": [1.0, 2.0]});
        let p1 = write_json_artifact(&dir, "a.json", &cfg, &payload).unwrap();
        let bytes1 = std::fs::read(&p1).unwrap();
        let p2 = write_json_artifact(&dir, "a.json", &cfg, &payload).unwrap();
        assert_eq!(bytes1, std::fs::read(&p2).unwrap());

        let rows = vec![vec!["1".to_string(), "2.5".to_string()]];
        let c1 = write_csv_artifact(&dir, "a.csv", &cfg, &["k", "v"], &rows).unwrap();
        let cb1 = std::fs::read(&c1).unwrap();
        let c2 = write_csv_artifact(&dir, "a.csv", &cfg, &["k", "v"], &rows).unwrap();
        assert_eq!(cb1, std::fs::read(&c2).unwrap());
        let text = String::from_utf8(cb1).unwrap();
        assert!(text.starts_with("# config_hash="));
    }
}
