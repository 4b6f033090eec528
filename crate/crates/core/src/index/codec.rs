//! Posting list encodings for `terms.kv`.
//!
//! `Plain` writes five little-endian u32 per posting and is the reference
//! codec. `Delta` writes LEB128 varints with document and position deltas.

use super::PostingEntry;
use crate::ingest::NodeInterval;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PostingCodec {
    Plain,
    #[default]
    Delta,
}

impl PostingCodec {
    pub fn tag(self) -> u8 {
        match self {
            PostingCodec::Plain => 0,
            PostingCodec::Delta => 1,
        }
    }

    pub fn from_tag(tag: u8) -> Option<Self> {
        match tag {
            0 => Some(PostingCodec::Plain),
            1 => Some(PostingCodec::Delta),
            _ => None,
        }
    }

    pub fn encode(self, postings: &[PostingEntry], out: &mut Vec<u8>) {
        match self {
            PostingCodec::Plain => {
                for p in postings {
                    for v in [p.doc_id, p.context_id, p.position, p.interval.low, p.interval.high] {
                        out.extend_from_slice(&v.to_le_bytes());
                    }
                }
            }
            PostingCodec::Delta => {
                let (mut doc, mut pos) = (0u32, 0u32);
                for (i, p) in postings.iter().enumerate() {
                    let same_doc = i > 0 && p.doc_id == doc;
                    put_varint(out, if i == 0 { p.doc_id } else { p.doc_id - doc });
                    put_varint(out, if same_doc { p.position - pos } else { p.position });
                    put_varint(out, p.context_id);
                    put_varint(out, p.interval.low);
                    put_varint(out, p.interval.high - p.interval.low);
                    doc = p.doc_id;
                    pos = p.position;
                }
            }
        }
    }

    pub fn decode(self, buf: &[u8], cursor: &mut usize, count: usize) -> Result<Vec<PostingEntry>, String> {
        let mut out = Vec::with_capacity(count);
        match self {
            PostingCodec::Plain => {
                for _ in 0..count {
                    let mut f = [0u32; 5];
                    for v in &mut f {
                        *v = get_u32(buf, cursor)?;
                    }
                    if f[3] > f[4] {
                        return Err("interval low > high".into());
                    }
                    out.push(PostingEntry {
                        doc_id: f[0],
                        context_id: f[1],
                        position: f[2],
                        interval: NodeInterval::new(f[3], f[4]),
                    });
                }
            }
            PostingCodec::Delta => {
                let (mut doc, mut pos) = (0u32, 0u32);
                for i in 0..count {
                    let d = get_varint(buf, cursor)?;
                    let p = get_varint(buf, cursor)?;
                    let ctx = get_varint(buf, cursor)?;
                    let low = get_varint(buf, cursor)?;
                    let span = get_varint(buf, cursor)?;
                    let new_doc = if i == 0 { d } else { doc.checked_add(d).ok_or("doc overflow")? };
                    let position = if i > 0 && d == 0 {
                        pos.checked_add(p).ok_or("position overflow")?
                    } else {
                        p
                    };
                    let high = low.checked_add(span).ok_or("interval overflow")?;
                    out.push(PostingEntry {
                        doc_id: new_doc,
                        context_id: ctx,
                        position,
                        interval: NodeInterval::new(low, high),
                    });
                    doc = new_doc;
                    pos = position;
                }
            }
        }
        Ok(out)
    }
}

pub(crate) fn put_varint(out: &mut Vec<u8>, mut v: u32) {
    while v >= 0x80 {
        out.push((v as u8) | 0x80);
        v >>= 7;
    }
    out.push(v as u8);
}

pub(crate) fn get_varint(buf: &[u8], cursor: &mut usize) -> Result<u32, String> {
    let mut v: u64 = 0;
    for shift in (0..35).step_by(7) {
        let b = *buf.get(*cursor).ok_or("truncated varint")?;
        *cursor += 1;
        v |= u64::from(b & 0x7f) << shift;
        if b & 0x80 == 0 {
            return u32::try_from(v).map_err(|_| "varint overflow".to_string());
        }
    }
    Err("varint too long".into())
}

pub(crate) fn get_u32(buf: &[u8], cursor: &mut usize) -> Result<u32, String> {
    let bytes = buf.get(*cursor..*cursor + 4).ok_or("truncated u32")?;
    *cursor += 4;
    Ok(u32::from_le_bytes(bytes.try_into().unwrap()))
}

pub(crate) fn get_u64(buf: &[u8], cursor: &mut usize) -> Result<u64, String> {
    let bytes = buf.get(*cursor..*cursor + 8).ok_or("truncated u64")?;
    *cursor += 8;
    Ok(u64::from_le_bytes(bytes.try_into().unwrap()))
}
