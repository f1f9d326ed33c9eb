//! Row-streaming evaluation of the wraparound grid.
//!
//! One row of `width` labels lives in a buffer with `degree − 1` extra slots
//! holding copies of the leftmost labels, and is overwritten in place from
//! left to right. Each row is rotated by `degree − 1` columns relative to
//! the previous one, so position `p` of row `r` holds column
//! `(p + r(degree − 1)) mod width`.

use super::label::{check_zeta, internal_prelabel, source_prelabel};
use super::oracle::{Oracle, OracleSpec};
use super::table::{table_digest, StaticTable};
use super::ShfError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StreamShape {
    pub width: usize,
    pub degree: usize,
    pub levels: usize,
}

impl StreamShape {
    /// Shape from bit sizes: rows of `row_bits`, hash inputs of `in_bits`
    /// label bits and outputs of `out_bits`. Without `levels`, the height is
    /// `row_bits / (in_bits − out_bits)`.
    pub fn from_bits(row_bits: usize, in_bits: usize, out_bits: usize, levels: Option<usize>) -> Result<Self, ShfError> {
        let bad = |why: String| ShfError::Shape(why);
        if out_bits == 0 || !row_bits.is_multiple_of(out_bits) || !in_bits.is_multiple_of(out_bits) {
            return Err(bad(format!("row {row_bits} and input {in_bits} bits must be multiples of output {out_bits}")));
        }
        if in_bits <= out_bits {
            return Err(bad(format!("input size {in_bits} must exceed output size {out_bits}")));
        }
        let (width, degree) = (row_bits / out_bits, in_bits / out_bits);
        let levels = match levels {
            Some(l) => l,
            None if row_bits.is_multiple_of(in_bits - out_bits) => row_bits / (in_bits - out_bits),
            None => return Err(bad(format!("{} does not divide row size {row_bits}", in_bits - out_bits))),
        };
        if width < degree {
            return Err(bad(format!("row of {width} labels is narrower than the fan-in {degree}")));
        }
        if levels < 2 {
            return Err(bad("need at least two rows".into()));
        }
        Ok(StreamShape { width, degree, levels })
    }

    /// Graph description matching the node-by-node table when the shape is a cylinder.
    pub fn describe(&self) -> String {
        if self.degree == 2 && self.levels == 2 * self.width {
            format!("cylinder h={}", self.width)
        } else {
            format!("wraparound width={} levels={} degree={}", self.width, self.levels, self.degree)
        }
    }
}

#[derive(Debug, Clone)]
pub struct Streamed {
    pub table: StaticTable,
    pub hash_calls: u64,
    /// Labels held at once.
    pub buffer_labels: usize,
}

pub fn h1_streaming<O: Oracle + ?Sized>(
    oracle: &O,
    spec: &OracleSpec,
    zeta: &[u8],
    shape: &StreamShape,
) -> Result<Streamed, ShfError> {
    check_zeta(spec, zeta)?;
    let StreamShape { width, degree, levels } = *shape;
    let lb = spec.label_bytes();
    let slots = width + degree - 1;
    let mut buf = vec![0u8; slots * lb];
    let mut calls = 0u64;
    let mut hash = |input: &[u8]| {
        calls += 1;
        let mut out = oracle.query(input);
        out.truncate(lb);
        out
    };
    let wrap = |buf: &mut Vec<u8>| buf.copy_within(0..(degree - 1) * lb, width * lb);

    for p in 0..width {
        buf[p * lb..(p + 1) * lb].copy_from_slice(&hash(&source_prelabel(p, zeta)));
    }
    wrap(&mut buf);
    oracle.end_batch();
    let mut inputs: Vec<(usize, usize)> = Vec::with_capacity(degree);
    for r in 0..levels - 1 {
        let shift = r * (degree - 1);
        for p in 0..width {
            let column = (p + degree - 1 + shift) % width;
            inputs.clear();
            inputs.extend((p..p + degree).map(|q| ((q + shift) % width, q)));
            inputs.sort_unstable();
            let pre = internal_prelabel((r + 1) * width + column, inputs.iter().map(|&(_, q)| &buf[q * lb..(q + 1) * lb]));
            let label = hash(&pre);
            buf[p * lb..(p + 1) * lb].copy_from_slice(&label);
        }
        wrap(&mut buf);
        oracle.end_batch();
    }

    let shift = (levels - 1) * (degree - 1);
    let mut labels = vec![Vec::new(); width];
    for p in 0..width {
        labels[(p + shift) % width] = buf[p * lb..(p + 1) * lb].to_vec();
    }
    let digest = table_digest(&shape.describe(), spec, zeta);
    Ok(Streamed {
        table: StaticTable::new(spec.word_bits, spec.label_bits(), digest, labels),
        hash_calls: calls,
        buffer_labels: slots,
    })
}
