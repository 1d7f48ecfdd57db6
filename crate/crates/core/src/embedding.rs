//! Binary container for sentence embeddings.
//!
//! Layout (all integers little-endian):
//!
//! ```text
//! magic   8 bytes   "BLMEMB1\0"
//! count   u64
//! record  count times:
//!           key_len u16, key (UTF-8, key_len bytes),
//!           768 x f32 (IEEE-754)
//! ```
//!
//! Keys are `<matrix id>/ctx/<0..6>` and `<matrix id>/ans/<0..5>`.

use std::collections::HashMap;
use std::io::{Read, Write};

use crate::error::{Error, Result};
use crate::variation::MatrixInstance;

pub const MAGIC: &[u8; 8] = b"BLMEMB1\0";
pub const DIM: usize = 768;
const RECORD_FLOATS_BYTES: usize = DIM * 4;

#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddingRecord {
    pub key: String,
    pub vector: Vec<f32>,
}

pub fn context_key(matrix_id: &str, row: usize) -> String {
    format!("{matrix_id}/ctx/{row}")
}

pub fn answer_key(matrix_id: &str, candidate: usize) -> String {
    format!("{matrix_id}/ans/{candidate}")
}

pub fn write_embeddings<W: Write>(mut w: W, records: &[EmbeddingRecord]) -> Result<()> {
    w.write_all(MAGIC)?;
    w.write_all(&(records.len() as u64).to_le_bytes())?;
    for r in records {
        let key_len = u16::try_from(r.key.len())
            .map_err(|_| Error::Container(format!("key of {} bytes is too long", r.key.len())))?;
        if r.vector.len() != DIM {
            return Err(Error::Container(format!(
                "{}: vector has {} dimensions, expected {DIM}",
                r.key,
                r.vector.len()
            )));
        }
        w.write_all(&key_len.to_le_bytes())?;
        w.write_all(r.key.as_bytes())?;
        for v in &r.vector {
            w.write_all(&v.to_le_bytes())?;
        }
    }
    w.flush()?;
    Ok(())
}

fn take<'a>(bytes: &mut &'a [u8], n: usize, what: &str) -> Result<&'a [u8]> {
    if bytes.len() < n {
        return Err(Error::Container(format!("truncated {what}")));
    }
    let (head, tail) = bytes.split_at(n);
    *bytes = tail;
    Ok(head)
}

/// Decode a complete container held in memory.
pub fn decode_embeddings(mut bytes: &[u8]) -> Result<Vec<EmbeddingRecord>> {
    if take(&mut bytes, MAGIC.len(), "magic")? != MAGIC {
        return Err(Error::Container("bad magic".into()));
    }
    let count = u64::from_le_bytes(take(&mut bytes, 8, "record count")?.try_into().unwrap());
    let min_record = 2 + RECORD_FLOATS_BYTES;
    if count > (bytes.len() / min_record) as u64 {
        return Err(Error::Container(format!(
            "header declares {count} records but only {} bytes follow",
            bytes.len()
        )));
    }
    let mut out = Vec::with_capacity(count as usize);
    for i in 0..count {
        let key_len = u16::from_le_bytes(take(&mut bytes, 2, "key length")?.try_into().unwrap());
        let key = std::str::from_utf8(take(&mut bytes, key_len as usize, "key")?)
            .map_err(|_| Error::Container(format!("record {i}: key is not UTF-8")))?
            .to_owned();
        let vector = take(&mut bytes, RECORD_FLOATS_BYTES, "vector")?
            .chunks_exact(4)
            .map(|c| f32::from_le_bytes(c.try_into().unwrap()))
            .collect();
        out.push(EmbeddingRecord { key, vector });
    }
    if !bytes.is_empty() {
        return Err(Error::Container(format!("{} trailing bytes", bytes.len())));
    }
    Ok(out)
}

pub fn read_embeddings<R: Read>(mut r: R) -> Result<Vec<EmbeddingRecord>> {
    let mut bytes = Vec::new();
    r.read_to_end(&mut bytes)?;
    decode_embeddings(&bytes)
}

/// Context and candidate embeddings of one matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddedMatrix {
    pub matrix_id: String,
    pub contexts: Vec<Vec<f32>>,
    pub candidates: Vec<Vec<f32>>,
    pub correct_index: usize,
}

/// Collect each matrix's 7 + 6 vectors from a decoded container.
pub fn assemble_matrices(
    records: &[EmbeddingRecord],
    matrices: &[MatrixInstance],
) -> Result<Vec<EmbeddedMatrix>> {
    let by_key: HashMap<&str, &Vec<f32>> = records.iter().map(|r| (r.key.as_str(), &r.vector)).collect();
    let get = |key: String| -> Result<Vec<f32>> {
        by_key
            .get(key.as_str())
            .map(|v| (*v).clone())
            .ok_or_else(|| Error::Container(format!("missing key {key}")))
    };
    matrices
        .iter()
        .map(|m| {
            Ok(EmbeddedMatrix {
                matrix_id: m.id.clone(),
                contexts: (0..m.contexts.len())
                    .map(|i| get(context_key(&m.id, i)))
                    .collect::<Result<_>>()?,
                candidates: (0..m.answer_set.candidates.len())
                    .map(|i| get(answer_key(&m.id, i)))
                    .collect::<Result<_>>()?,
                correct_index: m.answer_set.correct_index,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn record(key: &str, seed: f32) -> EmbeddingRecord {
        EmbeddingRecord {
            key: key.into(),
            vector: (0..DIM).map(|i| seed + i as f32 * 0.5).collect(),
        }
    }

    #[test]
    fn layout_is_exact() {
        let mut buf = Vec::new();
        write_embeddings(&mut buf, &[record("m/ctx/0", 1.0)]).unwrap();
        assert_eq!(&buf[..8], b"BLMEMB1\0");
        assert_eq!(&buf[8..16], &1u64.to_le_bytes());
        assert_eq!(&buf[16..18], &7u16.to_le_bytes());
        assert_eq!(&buf[18..25], b"m/ctx/0");
        assert_eq!(&buf[25..29], &1.0f32.to_le_bytes());
        assert_eq!(buf.len(), 8 + 8 + 2 + 7 + DIM * 4);
    }

    #[test]
    fn round_trip_is_bit_exact() {
        let mut recs = vec![record("a/ctx/0", 0.25), record("a/ans/5", -3.0)];
        recs[1].vector[7] = f32::from_bits(0x7fc0_0001);
        recs[1].vector[8] = -0.0;
        let mut buf = Vec::new();
        write_embeddings(&mut buf, &recs).unwrap();
        let back = decode_embeddings(&buf).unwrap();
        for (a, b) in recs.iter().zip(&back) {
            assert_eq!(a.key, b.key);
            let bits = |v: &[f32]| v.iter().map(|x| x.to_bits()).collect::<Vec<_>>();
            assert_eq!(bits(&a.vector), bits(&b.vector));
        }
    }

    #[test]
    fn malformed_containers() {
        let mut buf = Vec::new();
        write_embeddings(&mut buf, &[record("k", 0.0)]).unwrap();
        assert!(decode_embeddings(&buf[..buf.len() - 1]).is_err());
        let mut extra = buf.clone();
        extra.push(0);
        assert!(decode_embeddings(&extra).is_err());
        let mut bad = buf.clone();
        bad[0] = b'X';
        assert!(decode_embeddings(&bad).is_err());
        let mut huge = buf.clone();
        huge[8..16].copy_from_slice(&u64::MAX.to_le_bytes());
        assert!(decode_embeddings(&huge).is_err());
        assert!(write_embeddings(Vec::new(), &[EmbeddingRecord { key: "k".into(), vector: vec![0.0; 3] }]).is_err());
        assert!(decode_embeddings(&[]).is_err());
    }
}
