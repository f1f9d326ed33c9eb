//! The static table: labels of a graph's targets, and its SHFR1 file form.

use sha2::{Digest, Sha256};

use crate::constructions::ConstructionParams;
use crate::graph::Dag;
use crate::par::Exec;

use super::label::label_all;
use super::oracle::{Oracle, OracleSpec};
use super::ShfError;

const MAGIC: &[u8; 5] = b"SHFR1";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StaticTable {
    pub word_bits: usize,
    pub label_bits: usize,
    /// Commitment to the graph description, oracle and seed.
    pub digest: [u8; 32],
    labels: Vec<u8>,
}

impl StaticTable {
    pub fn new(word_bits: usize, label_bits: usize, digest: [u8; 32], labels: Vec<Vec<u8>>) -> Self {
        let flat = labels.concat();
        debug_assert!(labels.iter().all(|l| l.len() * 8 == label_bits));
        StaticTable { word_bits, label_bits, digest, labels: flat }
    }

    pub fn count(&self) -> usize {
        self.labels.len() / (self.label_bits / 8)
    }

    /// Size of the table in bits.
    pub fn bits(&self) -> usize {
        self.labels.len() * 8
    }

    /// Label `i`, 0-based.
    pub fn label(&self, i: usize) -> &[u8] {
        let b = self.label_bits / 8;
        &self.labels[i * b..(i + 1) * b]
    }

    pub fn labels(&self) -> impl Iterator<Item = &[u8]> {
        self.labels.chunks(self.label_bits / 8)
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = MAGIC.to_vec();
        for field in [self.word_bits, self.label_bits, self.count()] {
            out.extend_from_slice(&(field as u32).to_le_bytes());
        }
        out.extend_from_slice(&self.digest);
        out.extend_from_slice(&self.labels);
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self, ShfError> {
        let bad = |why: &str| ShfError::TableFormat(why.to_string());
        let rest = bytes.strip_prefix(MAGIC.as_slice()).ok_or_else(|| bad("missing SHFR1 magic"))?;
        if rest.len() < 12 + 32 {
            return Err(bad("header truncated"));
        }
        let field = |i: usize| u32::from_le_bytes(rest[4 * i..4 * i + 4].try_into().unwrap()) as usize;
        let (word_bits, label_bits, count) = (field(0), field(1), field(2));
        if label_bits == 0 || label_bits % 8 != 0 || word_bits % label_bits != 0 {
            return Err(bad("inconsistent word and label sizes"));
        }
        let digest: [u8; 32] = rest[12..44].try_into().unwrap();
        let labels = &rest[44..];
        if labels.len() != count * label_bits / 8 {
            return Err(bad(&format!("expected {count} labels of {label_bits} bits, found {} bytes", labels.len())));
        }
        Ok(StaticTable { word_bits, label_bits, digest, labels: labels.to_vec() })
    }
}

/// SHA-256 over the graph description, oracle description and a hash of the seed.
pub fn table_digest(graph: &str, spec: &OracleSpec, zeta: &[u8]) -> [u8; 32] {
    let mut h = Sha256::new();
    for part in [graph.as_bytes(), spec.describe().as_bytes()] {
        h.update((part.len() as u64).to_le_bytes());
        h.update(part);
    }
    h.update(Sha256::digest(zeta));
    h.finalize().into()
}

/// Labels `d` and keeps its targets' labels, in target order.
pub fn h1_graph<O: Oracle + ?Sized>(
    d: &Dag,
    graph: &str,
    oracle: &O,
    spec: &OracleSpec,
    zeta: &[u8],
    exec: Exec,
) -> Result<StaticTable, ShfError> {
    let mut labels = label_all(d, oracle, spec, zeta, exec)?;
    let out = d.targets().iter().map(|&t| std::mem::take(&mut labels[t])).collect();
    Ok(StaticTable::new(spec.word_bits, spec.label_bits(), table_digest(graph, spec, zeta), out))
}

/// Builds the graph for `params` and returns its target labels.
pub fn h1(params: &ConstructionParams, spec: &OracleSpec, zeta: &[u8], exec: Exec) -> Result<StaticTable, ShfError> {
    let built = params.build()?;
    h1_graph(&built.dag, &params.describe(), &spec.oracle(), spec, zeta, exec)
}

/// Word-granular random access into a table, logging each access.
#[derive(Debug)]
pub struct SeekOracle<'a> {
    table: &'a StaticTable,
    log: Vec<usize>,
}

impl<'a> SeekOracle<'a> {
    pub fn new(table: &'a StaticTable) -> Self {
        SeekOracle { table, log: Vec::new() }
    }

    /// Word `index` of the table, 1-based.
    pub fn seek(&mut self, index: usize) -> &'a [u8] {
        assert!((1..=self.table.count()).contains(&index), "seek index {index} out of range");
        self.log.push(index);
        self.table.label(index - 1)
    }

    pub fn log(&self) -> &[usize] {
        &self.log
    }

    pub fn into_log(self) -> Vec<usize> {
        self.log
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::Family;
    use crate::shf::oracle::HashId;

    #[test]
    fn cylinder_tables_have_h_labels_and_round_trip() {
        let spec = OracleSpec::new(128, HashId::Test { seed: 0 }).unwrap();
        for h in 2..=4 {
            let p = ConstructionParams::new(Family::Cylinder, h);
            let t = h1(&p, &spec, &[0; 16], Exec::Parallel).unwrap();
            assert_eq!(t.count(), h);
            assert_eq!(t.bits(), h * 128);
            assert_eq!(t, h1(&p, &spec, &[0; 16], Exec::Sequential).unwrap());
            assert_eq!(StaticTable::from_bytes(&t.to_bytes()).unwrap(), t);
        }
    }

    #[test]
    fn malformed_tables() {
        assert!(StaticTable::from_bytes(b"SHFR2").is_err());
        let spec = OracleSpec::new(64, HashId::Sha512).unwrap();
        let t = h1(&ConstructionParams::new(Family::Pyramid, 3), &spec, &[0; 8], Exec::Sequential).unwrap();
        let bytes = t.to_bytes();
        assert!(StaticTable::from_bytes(&bytes[..bytes.len() - 1]).is_err());
    }

    #[test]
    fn digest_commits_to_seed() {
        let spec = OracleSpec::new(64, HashId::Sha512).unwrap();
        assert_ne!(table_digest("x", &spec, &[0; 8]), table_digest("x", &spec, &[1; 8]));
        assert_ne!(table_digest("x", &spec, &[0; 8]), table_digest("y", &spec, &[0; 8]));
    }

    #[test]
    fn seek_logs() {
        let spec = OracleSpec::new(64, HashId::Sha512).unwrap();
        let t = h1(&ConstructionParams::new(Family::Cylinder, 3), &spec, &[0; 8], Exec::Sequential).unwrap();
        let mut s = SeekOracle::new(&t);
        assert_eq!(s.seek(2), t.label(1));
        s.seek(3);
        assert_eq!(s.log(), &[2, 3]);
    }
}
