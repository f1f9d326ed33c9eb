//! Random-oracle instantiations.

use std::fmt;
use std::str::FromStr;
use std::sync::atomic::{AtomicU64, Ordering};

use blake2::digest::{Update, VariableOutput};
use blake2::Blake2bVar;
use sha2::{Digest, Sha512};

use super::ShfError;

/// Hash behind an oracle.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HashId {
    Blake2b,
    Sha512,
    /// SHA-512 keyed by a seed prefix. Deterministic stand-in for golden
    /// vectors and statistical tests.
    Test { seed: u64 },
}

impl fmt::Display for HashId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HashId::Blake2b => write!(f, "blake2b"),
            HashId::Sha512 => write!(f, "sha512"),
            HashId::Test { seed } => write!(f, "test:{seed}"),
        }
    }
}

impl FromStr for HashId {
    type Err = ShfError;

    fn from_str(s: &str) -> Result<Self, ShfError> {
        match s {
            "blake2b" => Ok(HashId::Blake2b),
            "sha512" => Ok(HashId::Sha512),
            _ => s
                .strip_prefix("test:")
                .or(if s == "test" { Some("0") } else { None })
                .and_then(|seed| seed.parse().ok())
                .map(|seed| HashId::Test { seed })
                .ok_or_else(|| ShfError::Spec(format!("unknown hash `{s}`"))),
        }
    }
}

/// Output width, hash and optional label truncation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleSpec {
    pub word_bits: usize,
    pub hash: HashId,
    /// Labels keep only the first `truncate_to` bits of each oracle output.
    pub truncate_to: Option<usize>,
}

impl OracleSpec {
    pub fn new(word_bits: usize, hash: HashId) -> Result<Self, ShfError> {
        OracleSpec { word_bits, hash, truncate_to: None }.checked()
    }

    pub fn truncated(self, bits: usize) -> Result<Self, ShfError> {
        OracleSpec { truncate_to: Some(bits), ..self }.checked()
    }

    fn checked(self) -> Result<Self, ShfError> {
        let w = self.word_bits;
        if w == 0 || !w.is_multiple_of(8) || w > 512 {
            return Err(ShfError::Spec(format!("word size {w} must be a positive multiple of 8, at most 512")));
        }
        if let Some(t) = self.truncate_to {
            if t == 0 || t % 8 != 0 || !w.is_multiple_of(t) {
                return Err(ShfError::Spec(format!("truncation {t} must be a multiple of 8 dividing {w}")));
            }
        }
        Ok(self)
    }

    pub fn word_bytes(&self) -> usize {
        self.word_bits / 8
    }

    pub fn label_bits(&self) -> usize {
        self.truncate_to.unwrap_or(self.word_bits)
    }

    pub fn label_bytes(&self) -> usize {
        self.label_bits() / 8
    }

    pub fn describe(&self) -> String {
        format!("{} w={} label={}", self.hash, self.word_bits, self.label_bits())
    }

    pub fn oracle(&self) -> HashOracle {
        HashOracle::new(*self)
    }
}

/// A function from bytes to `output_bytes()` bytes, queried in batches.
/// Implementations must be safe to query from several threads at once.
pub trait Oracle: Sync {
    fn output_bytes(&self) -> usize;

    fn query(&self, input: &[u8]) -> Vec<u8>;

    /// Marks the end of a round of independent queries.
    fn end_batch(&self) {}

    fn calls(&self) -> u64;
}

/// The plain hash oracle of an [`OracleSpec`], with a call counter.
#[derive(Debug)]
pub struct HashOracle {
    spec: OracleSpec,
    calls: AtomicU64,
}

impl HashOracle {
    pub fn new(spec: OracleSpec) -> Self {
        HashOracle { spec, calls: AtomicU64::new(0) }
    }

    pub fn spec(&self) -> &OracleSpec {
        &self.spec
    }
}

impl Oracle for HashOracle {
    fn output_bytes(&self) -> usize {
        self.spec.word_bytes()
    }

    fn query(&self, input: &[u8]) -> Vec<u8> {
        self.calls.fetch_add(1, Ordering::Relaxed);
        let len = self.spec.word_bytes();
        match self.spec.hash {
            HashId::Blake2b => {
                let mut h = Blake2bVar::new(len).expect("length checked by OracleSpec");
                h.update(input);
                let mut out = vec![0; len];
                h.finalize_variable(&mut out).expect("buffer has the requested length");
                out
            }
            HashId::Sha512 => Sha512::digest(input)[..len].to_vec(),
            HashId::Test { seed } => {
                let mut h = Sha512::new();
                Digest::update(&mut h, seed.to_le_bytes());
                Digest::update(&mut h, input);
                h.finalize()[..len].to_vec()
            }
        }
    }

    fn calls(&self) -> u64 {
        self.calls.load(Ordering::Relaxed)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spec_checks() {
        assert!(OracleSpec::new(512, HashId::Blake2b).is_ok());
        assert!(OracleSpec::new(12, HashId::Blake2b).is_err());
        assert!(OracleSpec::new(1024, HashId::Sha512).is_err());
        let s = OracleSpec::new(512, HashId::Sha512).unwrap();
        assert_eq!(s.truncated(128).unwrap().label_bytes(), 16);
        assert!(s.truncated(96).is_err());
    }

    #[test]
    fn widths_and_counting() {
        for hash in [HashId::Blake2b, HashId::Sha512, HashId::Test { seed: 7 }] {
            let o = OracleSpec::new(256, hash).unwrap().oracle();
            assert_eq!(o.query(b"abc").len(), 32);
            assert_eq!(o.query(b"abc"), o.query(b"abc"));
            assert_eq!(o.calls(), 3);
        }
        let a = OracleSpec::new(64, HashId::Test { seed: 1 }).unwrap().oracle();
        let b = OracleSpec::new(64, HashId::Test { seed: 2 }).unwrap().oracle();
        assert_ne!(a.query(b""), b.query(b""));
    }

    #[test]
    fn blake2b_known_answer() {
        // BLAKE2b-512("abc")
        let o = OracleSpec::new(512, HashId::Blake2b).unwrap().oracle();
        assert_eq!(
            hex::encode(o.query(b"abc")),
            "ba80a53f981c4d0d6a2797b69f12f6e94c212f14685ac4b74b12bb6fdbffa2d1\
             7d87c5392aab792dc252d5de4533cc9518d38aa8dbf1925ab92386edd4009923"
        );
    }

    #[test]
    fn hash_names_parse() {
        for h in [HashId::Blake2b, HashId::Sha512, HashId::Test { seed: 9 }] {
            assert_eq!(h.to_string().parse::<HashId>().unwrap(), h);
        }
        assert_eq!("test".parse::<HashId>().unwrap(), HashId::Test { seed: 0 });
        assert!("md5".parse::<HashId>().is_err());
    }
}
