//! JSON encoding. Complex numbers are `[re, im]` pairs, matrices row-major.

use std::fmt;
use std::marker::PhantomData;
use std::path::Path;

use serde::de::{self, SeqAccess, Visitor};
use serde::ser::SerializeSeq;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::error::Error;
use crate::matcore::{CMat, CMat4, CVec, C64};
use crate::qstate::DensityMatrix;

/// Failure to obtain a state from text: either the text is not a state
/// document at all, or it is one but the matrix is not a density matrix.
#[derive(Debug, Error)]
pub enum LoadError {
    #[error("cannot read {path}: {source}")]
    Read {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("parse error: {0}")]
    Parse(#[from] serde_json::Error),
    #[error(transparent)]
    Invalid(#[from] Error),
}

/// On-disk density matrix: `{"matrix": [[[re, im] × 4] × 4]}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct StateJson {
    pub matrix: CMat4,
}

impl TryFrom<StateJson> for DensityMatrix {
    type Error = Error;
    fn try_from(s: StateJson) -> Result<Self, Error> {
        DensityMatrix::validate(s.matrix)
    }
}

impl From<DensityMatrix> for StateJson {
    fn from(d: DensityMatrix) -> Self {
        StateJson {
            matrix: d.into_matrix(),
        }
    }
}

/// Parse and validate a state document.
pub fn parse_state(text: &str) -> Result<DensityMatrix, LoadError> {
    let raw: StateJson = serde_json::from_str(text)?;
    Ok(DensityMatrix::validate(raw.matrix)?)
}

pub fn read_state(path: &Path) -> Result<DensityMatrix, LoadError> {
    let text = std::fs::read_to_string(path).map_err(|source| LoadError::Read {
        path: path.display().to_string(),
        source,
    })?;
    parse_state(&text)
}

pub fn state_to_json(rho: &DensityMatrix) -> String {
    serde_json::to_string_pretty(&StateJson::from(*rho)).expect("matrix serializes")
}

/// Serde adapter for a bare complex scalar.
pub mod complex {
    use super::*;

    pub fn serialize<S: Serializer>(c: &C64, s: S) -> Result<S::Ok, S::Error> {
        [c.re, c.im].serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<C64, D::Error> {
        let [re, im] = <[f64; 2]>::deserialize(d)?;
        Ok(C64::new(re, im))
    }
}

struct Pair(C64);

impl Serialize for Pair {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        complex::serialize(&self.0, s)
    }
}

impl<'de> Deserialize<'de> for Pair {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        complex::deserialize(d).map(Pair)
    }
}

impl<const N: usize> Serialize for CVec<N> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(N))?;
        for c in &self.0 {
            seq.serialize_element(&Pair(*c))?;
        }
        seq.end()
    }
}

struct FixedSeq<T, const N: usize>(PhantomData<T>);

impl<'de, T: Deserialize<'de>, const N: usize> Visitor<'de> for FixedSeq<T, N> {
    type Value = Vec<T>;

    fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
        write!(f, "an array of length {N}")
    }

    fn visit_seq<A: SeqAccess<'de>>(self, mut seq: A) -> Result<Vec<T>, A::Error> {
        let mut out = Vec::with_capacity(N);
        while let Some(x) = seq.next_element()? {
            if out.len() == N {
                return Err(de::Error::invalid_length(N + 1, &self));
            }
            out.push(x);
        }
        if out.len() != N {
            return Err(de::Error::invalid_length(out.len(), &self));
        }
        Ok(out)
    }
}

impl<'de, const N: usize> Deserialize<'de> for CVec<N> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v = d.deserialize_seq(FixedSeq::<Pair, N>(PhantomData))?;
        Ok(CVec::from_fn(|i| v[i].0))
    }
}

impl<const N: usize> Serialize for CMat<N> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(N))?;
        for i in 0..N {
            seq.serialize_element(&self.row(i))?;
        }
        seq.end()
    }
}

impl<'de, const N: usize> Deserialize<'de> for CMat<N> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let rows = d.deserialize_seq(FixedSeq::<CVec<N>, N>(PhantomData))?;
        Ok(CMat::from_fn(|i, j| rows[i][j]))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qstate::sample_random;

    #[test]
    fn state_round_trip_is_lossless() {
        let rho = sample_random(3, 4).unwrap();
        let text = state_to_json(&rho);
        let back = parse_state(&text).unwrap();
        assert_eq!(back.matrix(), rho.matrix());
    }

    #[test]
    fn parse_vs_validation_errors() {
        assert!(matches!(parse_state("{"), Err(LoadError::Parse(_))));
        assert!(matches!(
            parse_state(r#"{"matrix": [[[1,0]]]}"#),
            Err(LoadError::Parse(_))
        ));
        let mut m = CMat4::identity().scale_re(0.3);
        m[(0, 0)] = C64::new(0.3, 0.0);
        let text = serde_json::to_string(&StateJson { matrix: m }).unwrap();
        assert!(matches!(
            parse_state(&text),
            Err(LoadError::Invalid(Error::NotUnitTrace { .. }))
        ));
    }

    #[test]
    fn density_matrix_serde_goes_through_validation() {
        let rho = DensityMatrix::maximally_mixed();
        let text = serde_json::to_string(&rho).unwrap();
        assert!(text.starts_with(r#"{"matrix":[[[0.25,0.0],"#));
        let back: DensityMatrix = serde_json::from_str(&text).unwrap();
        assert_eq!(back, rho);
        let bad = text.replace("0.25", "0.5");
        assert!(serde_json::from_str::<DensityMatrix>(&bad).is_err());
    }
}
