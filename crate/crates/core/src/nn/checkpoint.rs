//! Portable flat-file checkpoints.
//!
//! Layout, all integers little-endian `u32`, all floats little-endian `f64`:
//!
//! ```text
//! magic   b"PRUNEQ1"
//! kind    0 = dense Q-network, 1 = behavior model, 2 = vector Q-network
//! layers  layer count, then (in_dim, out_dim) per layer
//! extra   kind 2 only: action_count, channel_count
//! data    per layer: weights row-major, then bias
//! ```
//!
//! Round-trips are bit-exact.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use sha2::{Digest, Sha256};

use crate::error::{CoreError, Result};

use super::matrix::Matrix;
use super::network::{DenseNetwork, Layer};

pub const MAGIC: &[u8; 7] = b"PRUNEQ1";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModelKind {
    DenseQ,
    Behavior,
    VectorQ,
}

impl ModelKind {
    fn code(self) -> u32 {
        match self {
            ModelKind::DenseQ => 0,
            ModelKind::Behavior => 1,
            ModelKind::VectorQ => 2,
        }
    }

    fn from_code(code: u32) -> Result<Self> {
        match code {
            0 => Ok(ModelKind::DenseQ),
            1 => Ok(ModelKind::Behavior),
            2 => Ok(ModelKind::VectorQ),
            other => Err(CoreError::Schema(format!("unknown model kind {other}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Checkpoint {
    pub kind: ModelKind,
    pub net: DenseNetwork,
    /// `[action_count, channel_count]` for vector Q-networks, empty otherwise.
    pub extra: Vec<u32>,
}

pub fn save_checkpoint(path: &Path, ckpt: &Checkpoint) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    w.write_all(MAGIC)?;
    w.write_all(&ckpt.kind.code().to_le_bytes())?;
    w.write_all(&(ckpt.net.layers().len() as u32).to_le_bytes())?;
    for layer in ckpt.net.layers() {
        w.write_all(&(layer.in_dim() as u32).to_le_bytes())?;
        w.write_all(&(layer.out_dim() as u32).to_le_bytes())?;
    }
    if ckpt.kind == ModelKind::VectorQ {
        if ckpt.extra.len() != 2 {
            return Err(CoreError::InvalidArgument(
                "vector Q checkpoint needs [action_count, channel_count]".into(),
            ));
        }
        for v in &ckpt.extra {
            w.write_all(&v.to_le_bytes())?;
        }
    }
    for layer in ckpt.net.layers() {
        for v in layer.weights.data() {
            w.write_all(&v.to_le_bytes())?;
        }
        for v in &layer.bias {
            w.write_all(&v.to_le_bytes())?;
        }
    }
    w.flush()?;
    Ok(())
}

pub fn load_checkpoint(path: &Path) -> Result<Checkpoint> {
    let mut r = BufReader::new(File::open(path)?);
    let mut magic = [0u8; 7];
    r.read_exact(&mut magic)?;
    if &magic != MAGIC {
        return Err(CoreError::Schema(format!(
            "bad magic {:?} in {}",
            magic,
            path.display()
        )));
    }
    let kind = ModelKind::from_code(read_u32(&mut r)?)?;
    let layer_count = read_u32(&mut r)? as usize;
    if layer_count == 0 || layer_count > 1024 {
        return Err(CoreError::Schema(format!(
            "implausible layer count {layer_count}"
        )));
    }
    let mut dims = Vec::with_capacity(layer_count);
    for _ in 0..layer_count {
        let in_dim = read_u32(&mut r)? as usize;
        let out_dim = read_u32(&mut r)? as usize;
        dims.push((in_dim, out_dim));
    }
    let extra = if kind == ModelKind::VectorQ {
        vec![read_u32(&mut r)?, read_u32(&mut r)?]
    } else {
        Vec::new()
    };
    let mut layers = Vec::with_capacity(layer_count);
    for &(in_dim, out_dim) in &dims {
        let mut weights = vec![0.0; in_dim * out_dim];
        for v in &mut weights {
            *v = read_f64(&mut r)?;
        }
        let mut bias = vec![0.0; out_dim];
        for v in &mut bias {
            *v = read_f64(&mut r)?;
        }
        layers.push(Layer {
            weights: Matrix::from_vec(out_dim, in_dim, weights)?,
            bias,
        });
    }
    let mut trailing = [0u8; 1];
    if r.read(&mut trailing)? != 0 {
        return Err(CoreError::Schema("trailing bytes after checkpoint".into()));
    }
    Ok(Checkpoint {
        kind,
        net: DenseNetwork::from_layers(layers)?,
        extra,
    })
}

/// Short content hash used as a checkpoint id in manifests and reports.
pub fn checkpoint_id(path: &Path) -> Result<String> {
    let bytes = std::fs::read(path)?;
    let digest = Sha256::digest(&bytes);
    Ok(hex::encode(&digest[..6]))
}

fn read_u32<R: Read>(r: &mut R) -> Result<u32> {
    let mut buf = [0u8; 4];
    r.read_exact(&mut buf)?;
    Ok(u32::from_le_bytes(buf))
}

fn read_f64<R: Read>(r: &mut R) -> Result<f64> {
    let mut buf = [0u8; 8];
    r.read_exact(&mut buf)?;
    Ok(f64::from_le_bytes(buf))
}
