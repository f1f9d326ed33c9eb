//! Graph labeling: sources hash their index with the seed, internal nodes
//! hash their index with the labels of their predecessors.

use crate::graph::Dag;
use crate::par::Exec;

use super::oracle::{Oracle, OracleSpec};
use super::ShfError;

pub const SOURCE_TAG: u8 = 0x01;
pub const INTERNAL_TAG: u8 = 0x02;
pub const MASK_TAG: u8 = 0x03;

/// Domain tag followed by the 8-byte little-endian node index.
pub fn enc(tag: u8, v: usize) -> [u8; 9] {
    let mut out = [0u8; 9];
    out[0] = tag;
    out[1..].copy_from_slice(&(v as u64).to_le_bytes());
    out
}

pub fn source_prelabel(v: usize, zeta: &[u8]) -> Vec<u8> {
    let mut out = enc(SOURCE_TAG, v).to_vec();
    out.extend_from_slice(zeta);
    out
}

/// `pred_labels` must be in ascending predecessor order.
pub fn internal_prelabel<'a>(v: usize, pred_labels: impl IntoIterator<Item = &'a [u8]>) -> Vec<u8> {
    let mut out = enc(INTERNAL_TAG, v).to_vec();
    for l in pred_labels {
        out.extend_from_slice(l);
    }
    out
}

/// Pre-label of `v`, reading predecessor labels from `labels`.
pub fn prelabel(d: &Dag, v: usize, zeta: &[u8], labels: &[Vec<u8>]) -> Vec<u8> {
    if d.is_source(v) {
        source_prelabel(v, zeta)
    } else {
        internal_prelabel(v, d.preds(v).iter().map(|&u| labels[u].as_slice()))
    }
}

pub(crate) fn check_zeta(spec: &OracleSpec, zeta: &[u8]) -> Result<(), ShfError> {
    if zeta.len() != spec.word_bytes() {
        return Err(ShfError::Width { what: "seed", expected: spec.word_bytes(), found: zeta.len() });
    }
    Ok(())
}

fn truncate(mut out: Vec<u8>, spec: &OracleSpec) -> Vec<u8> {
    out.truncate(spec.label_bytes());
    out
}

/// Labels every node, one level of the depth decomposition per batch. Nodes
/// of a level only read labels of earlier levels, so each level is mapped
/// under `exec`. Makes exactly one oracle call per node.
pub fn label_all<O: Oracle + ?Sized>(
    d: &Dag,
    oracle: &O,
    spec: &OracleSpec,
    zeta: &[u8],
    exec: Exec,
) -> Result<Vec<Vec<u8>>, ShfError> {
    check_zeta(spec, zeta)?;
    let mut labels = vec![Vec::new(); d.node_count()];
    for level in d.levels() {
        let done = exec.map(&level, |&v| truncate(oracle.query(&prelabel(d, v, zeta, &labels)), spec));
        for (v, l) in level.into_iter().zip(done) {
            labels[v] = l;
        }
        oracle.end_batch();
    }
    Ok(labels)
}

/// Single-node labeling with a memo shared across calls.
pub struct Labeler<'a, O: Oracle + ?Sized> {
    dag: &'a Dag,
    oracle: &'a O,
    spec: OracleSpec,
    zeta: Vec<u8>,
    memo: Vec<Option<Vec<u8>>>,
}

impl<'a, O: Oracle + ?Sized> Labeler<'a, O> {
    pub fn new(dag: &'a Dag, oracle: &'a O, spec: OracleSpec, zeta: &[u8]) -> Result<Self, ShfError> {
        check_zeta(&spec, zeta)?;
        Ok(Labeler { dag, oracle, spec, zeta: zeta.to_vec(), memo: vec![None; dag.node_count()] })
    }

    pub fn label(&mut self, v: usize) -> Result<&[u8], ShfError> {
        if v >= self.dag.node_count() {
            return Err(ShfError::NodeOutOfRange(v));
        }
        // ancestors come back ascending, which is a topological order
        let mut todo = self.dag.ancestors(v);
        todo.push(v);
        for u in todo {
            if self.memo[u].is_some() {
                continue;
            }
            let pre = if self.dag.is_source(u) {
                source_prelabel(u, &self.zeta)
            } else {
                let preds = self.dag.preds(u);
                internal_prelabel(u, preds.iter().map(|&p| self.memo[p].as_deref().expect("ancestor labeled")))
            };
            self.memo[u] = Some(truncate(self.oracle.query(&pre), &self.spec));
        }
        Ok(self.memo[v].as_deref().expect("just labeled"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{cylinder, pyramid};
    use crate::graph::path;
    use crate::shf::oracle::HashId;

    fn spec() -> OracleSpec {
        OracleSpec::new(256, HashId::Test { seed: 3 }).unwrap()
    }

    #[test]
    fn base_case_and_unrolled_apex() {
        let s = spec();
        let o = s.oracle();
        let zeta = vec![0x5a; 32];
        let single = path(1).unwrap();
        let l = label_all(&single, &o, &s, &zeta, Exec::Sequential).unwrap();
        assert_eq!(l[0], o.query(&[&enc(SOURCE_TAG, 0)[..], &zeta].concat()));

        let d = pyramid(2).unwrap();
        let l = label_all(&d, &o, &s, &zeta, Exec::Sequential).unwrap();
        let expect = o.query(&[&enc(INTERNAL_TAG, 2)[..], &l[0], &l[1]].concat());
        assert_eq!(l[2], expect);
    }

    #[test]
    fn one_call_per_node_and_memo_agrees() {
        let s = spec();
        let d = cylinder(3).unwrap();
        let zeta = vec![1; 32];
        let o = s.oracle();
        let all = label_all(&d, &o, &s, &zeta, Exec::Parallel).unwrap();
        assert_eq!(o.calls(), d.node_count() as u64);
        let o2 = s.oracle();
        let mut lab = Labeler::new(&d, &o2, s, &zeta).unwrap();
        for &t in d.targets() {
            assert_eq!(lab.label(t).unwrap(), all[t].as_slice());
        }
        assert_eq!(o2.calls(), d.node_count() as u64);
        assert_eq!(lab.label(0).unwrap(), all[0].as_slice());
        assert_eq!(o2.calls(), d.node_count() as u64);
        assert!(lab.label(99).is_err());
    }

    #[test]
    fn truncated_labels_and_bad_seed() {
        let s = spec().truncated(64).unwrap();
        let d = pyramid(3).unwrap();
        let l = label_all(&d, &s.oracle(), &s, &[0; 32], Exec::Sequential).unwrap();
        assert!(l.iter().all(|x| x.len() == 8));
        assert!(label_all(&d, &s.oracle(), &s, &[0; 31], Exec::Sequential).is_err());
    }
}
