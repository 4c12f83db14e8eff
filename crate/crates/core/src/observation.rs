//! Observation payloads: keyed integer records and RGB pixel tensors.

use serde::ser::{SerializeMap, SerializeSeq};
use serde::{Serialize, Serializer};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ObsValue {
    Scalar(i64),
    /// Row-major data with an explicit shape.
    Array { shape: Vec<usize>, data: Vec<i64> },
}

impl ObsValue {
    pub fn shape(&self) -> &[usize] {
        match self {
            ObsValue::Scalar(_) => &[],
            ObsValue::Array { shape, .. } => shape,
        }
    }
}

/// Ordered record of named arrays and scalars describing the internal game
/// state. Keys are kept in ascending byte order for every puzzle.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct StateObservation {
    entries: Vec<(&'static str, ObsValue)>,
}

impl StateObservation {
    pub fn new() -> Self {
        Self::default()
    }

    fn push(&mut self, key: &'static str, value: ObsValue) {
        debug_assert!(
            self.entries.last().is_none_or(|(k, _)| *k < key),
            "observation keys must be pushed in ascending order ({key})"
        );
        self.entries.push((key, value));
    }

    pub fn scalar(mut self, key: &'static str, value: impl Into<i64>) -> Self {
        self.push(key, ObsValue::Scalar(value.into()));
        self
    }

    pub fn array<T: Into<i64> + Copy>(mut self, key: &'static str, shape: &[usize], data: &[T]) -> Self {
        debug_assert_eq!(shape.iter().product::<usize>(), data.len(), "{key}");
        self.push(
            key,
            ObsValue::Array {
                shape: shape.to_vec(),
                data: data.iter().map(|&v| v.into()).collect(),
            },
        );
        self
    }

    pub fn keys(&self) -> impl Iterator<Item = &'static str> + '_ {
        self.entries.iter().map(|(k, _)| *k)
    }

    pub fn get(&self, key: &str) -> Option<&ObsValue> {
        self.entries.iter().find(|(k, _)| *k == key).map(|(_, v)| v)
    }

    pub fn entries(&self) -> &[(&'static str, ObsValue)] {
        &self.entries
    }

    /// Integer data of an array entry, or the single value of a scalar.
    pub fn ints(&self, key: &str) -> Option<Vec<i64>> {
        self.get(key).map(|v| match v {
            ObsValue::Scalar(s) => vec![*s],
            ObsValue::Array { data, .. } => data.clone(),
        })
    }
}

struct Nested<'a> {
    shape: &'a [usize],
    data: &'a [i64],
}

impl Serialize for Nested<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self.shape {
            [] => s.serialize_i64(self.data[0]),
            [_] => self.data.serialize(s),
            [n, rest @ ..] => {
                let stride: usize = rest.iter().product();
                let mut seq = s.serialize_seq(Some(*n))?;
                for i in 0..*n {
                    seq.serialize_element(&Nested {
                        shape: rest,
                        data: &self.data[i * stride..(i + 1) * stride],
                    })?;
                }
                seq.end()
            }
        }
    }
}

impl Serialize for ObsValue {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            ObsValue::Scalar(v) => s.serialize_i64(*v),
            ObsValue::Array { shape, data } => Nested { shape, data }.serialize(s),
        }
    }
}

impl Serialize for StateObservation {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(self.entries.len()))?;
        for (k, v) in &self.entries {
            map.serialize_entry(k, v)?;
        }
        map.end()
    }
}

/// Channel-first RGB tensor of shape `(3, size, size)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PixelObservation {
    pub size: usize,
    pub data: Vec<u8>,
}

impl PixelObservation {
    pub fn shape(&self) -> [usize; 3] {
        [3, self.size, self.size]
    }

    pub fn pixel(&self, x: usize, y: usize) -> [u8; 3] {
        let plane = self.size * self.size;
        let i = y * self.size + x;
        [self.data[i], self.data[plane + i], self.data[2 * plane + i]]
    }

    /// Interleaved RGB rows, as image encoders expect.
    pub fn to_rgb_interleaved(&self) -> Vec<u8> {
        let plane = self.size * self.size;
        let mut out = Vec::with_capacity(3 * plane);
        for i in 0..plane {
            out.extend_from_slice(&[self.data[i], self.data[plane + i], self.data[2 * plane + i]]);
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Observation {
    State(StateObservation),
    Pixels(PixelObservation),
}
