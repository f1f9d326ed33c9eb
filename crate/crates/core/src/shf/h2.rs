//! Input-dependent lookups into the static table, masked by the oracle.

use super::label::MASK_TAG;
use super::oracle::Oracle;
use super::table::{SeekOracle, StaticTable};
use super::ShfError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct H2Eval {
    pub output: Vec<u8>,
    /// 1-based table indices read, in order.
    pub indices: Vec<usize>,
    pub oracle_calls: u64,
}

fn masked<O: Oracle + ?Sized>(oracle: &O, x: &[u8]) -> Vec<u8> {
    let mut input = vec![MASK_TAG];
    input.extend_from_slice(x);
    oracle.query(&input)
}

/// `x + 1` on the big-endian reading of `x`, wrapping to zero.
pub fn increment(x: &[u8]) -> Vec<u8> {
    let mut out = x.to_vec();
    for b in out.iter_mut().rev() {
        let (v, carry) = b.overflowing_add(1);
        *b = v;
        if !carry {
            break;
        }
    }
    out
}

/// Uniform indices in `1..=n` drawn from `seed` by rejection sampling over
/// 8-byte big-endian windows. When the bytes run out the stream is
/// extended with `O(tag ‖ seed ‖ counter)`.
struct IndexStream<'a, O: Oracle + ?Sized> {
    oracle: &'a O,
    seed: Vec<u8>,
    buf: Vec<u8>,
    pos: usize,
    counter: u64,
    calls: u64,
}

impl<'a, O: Oracle + ?Sized> IndexStream<'a, O> {
    fn new(oracle: &'a O, seed: Vec<u8>) -> Self {
        IndexStream { oracle, buf: seed.clone(), seed, pos: 0, counter: 0, calls: 0 }
    }

    fn next_word(&mut self) -> u64 {
        while self.buf.len() - self.pos < 8 {
            let mut input = vec![MASK_TAG];
            input.extend_from_slice(&self.seed);
            input.extend_from_slice(&self.counter.to_le_bytes());
            self.counter += 1;
            self.calls += 1;
            let more = self.oracle.query(&input);
            self.buf.extend_from_slice(&more);
        }
        let w = u64::from_be_bytes(self.buf[self.pos..self.pos + 8].try_into().unwrap());
        self.pos += 8;
        w
    }

    fn sample(&mut self, n: usize) -> usize {
        let n = n as u128;
        let limit = ((1u128 << 64) / n) * n;
        loop {
            let x = u128::from(self.next_word());
            if x < limit {
                return (x % n) as usize + 1;
            }
        }
    }
}

/// Reads `q` labels at indices drawn from `O(x)` and masks their
/// concatenation with `O(x + 1)`. Labels must be `w / q` bits wide.
pub fn h2_q<O: Oracle + ?Sized>(table: &StaticTable, oracle: &O, x: &[u8], q: usize) -> Result<H2Eval, ShfError> {
    let w = oracle.output_bytes();
    if x.len() != w {
        return Err(ShfError::Width { what: "input", expected: w, found: x.len() });
    }
    if table.word_bits != w * 8 {
        return Err(ShfError::Width { what: "table word", expected: w * 8, found: table.word_bits });
    }
    if q == 0 || table.label_bits * q != table.word_bits {
        return Err(ShfError::Truncation { label_bits: table.label_bits, word_bits: table.word_bits, q });
    }
    if table.count() == 0 {
        return Err(ShfError::EmptyTable);
    }
    let rho0 = masked(oracle, x);
    let rho1 = masked(oracle, &increment(x));
    let mut stream = IndexStream::new(oracle, rho0);
    let mut seek = SeekOracle::new(table);
    let mut output = Vec::with_capacity(w);
    for _ in 0..q {
        let i = stream.sample(table.count());
        output.extend_from_slice(seek.seek(i));
    }
    for (o, m) in output.iter_mut().zip(&rho1) {
        *o ^= m;
    }
    Ok(H2Eval { output, indices: seek.into_log(), oracle_calls: 2 + stream.calls })
}

/// Single lookup: `R[ι] ⊕ O(x + 1)` with `ι` drawn from `O(x)`.
pub fn h2<O: Oracle + ?Sized>(table: &StaticTable, oracle: &O, x: &[u8]) -> Result<H2Eval, ShfError> {
    h2_q(table, oracle, x, 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{ConstructionParams, Family};
    use crate::par::Exec;
    use crate::shf::oracle::{HashId, OracleSpec};
    use crate::shf::table::h1;

    fn spec() -> OracleSpec {
        OracleSpec::new(256, HashId::Test { seed: 11 }).unwrap()
    }

    #[test]
    fn increment_wraps() {
        assert_eq!(increment(&[0x00, 0xff]), vec![0x01, 0x00]);
        assert_eq!(increment(&[0xff, 0xff]), vec![0x00, 0x00]);
    }

    #[test]
    fn singleton_table_forces_index() {
        let s = spec();
        let o = s.oracle();
        let t = StaticTable::new(256, 256, [0; 32], vec![vec![0xab; 32]]);
        let x = vec![0xff; 32];
        let e = h2(&t, &o, &x).unwrap();
        assert_eq!(e.indices, vec![1]);
        assert_eq!(e.oracle_calls, 2);
        let rho1 = o.query(&[&[MASK_TAG][..], &[0; 32]].concat());
        let expect: Vec<u8> = rho1.iter().map(|m| m ^ 0xab).collect();
        assert_eq!(e.output, expect);
    }

    #[test]
    fn deterministic_and_full_width() {
        let s = spec();
        let t = h1(&ConstructionParams::new(Family::Cylinder, 4), &s, &[0; 32], Exec::Sequential).unwrap();
        let o = s.oracle();
        for b in 0..20u8 {
            let x = vec![b; 32];
            let a = h2(&t, &o, &x).unwrap();
            assert_eq!(a, h2(&t, &o, &x).unwrap());
            assert_eq!(a.output.len(), 32);
        }
        assert!(h2(&t, &o, &[0; 31]).is_err());
        assert!(h2_q(&t, &o, &[0; 32], 2).is_err());
    }

    #[test]
    fn four_quarter_lookups() {
        let s = OracleSpec::new(512, HashId::Test { seed: 2 }).unwrap().truncated(128).unwrap();
        let t = h1(&ConstructionParams::new(Family::Cylinder, 5), &s, &[7; 64], Exec::Sequential).unwrap();
        assert_eq!(t.label_bits, 128);
        let e = h2_q(&t, &s.oracle(), &[1; 64], 4).unwrap();
        assert_eq!(e.output.len(), 64);
        assert_eq!(e.indices.len(), 4);
        assert!(e.indices.iter().all(|&i| (1..=5).contains(&i)));
    }

    #[test]
    fn short_words_extend_the_stream() {
        let s = OracleSpec::new(32, HashId::Test { seed: 5 }).unwrap().truncated(8).unwrap();
        let t = h1(&ConstructionParams::new(Family::Cylinder, 3), &s, &[0; 4], Exec::Sequential).unwrap();
        let e = h2_q(&t, &s.oracle(), &[9; 4], 4).unwrap();
        assert_eq!(e.indices.len(), 4);
        assert!(e.oracle_calls > 2);
    }
}
