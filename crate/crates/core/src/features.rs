//! The transformed-feature alphabet and the 16-slot vectors built over it.
//!
//! A transformed-feature is a boolean characteristic of a dataset ("has
//! nominal attributes", "has missing values in classes", ...) that pipeline
//! components can require or change. Dataset abstractions, surrogate tokens,
//! component capabilities and component effects are all 16-slot vectors over
//! this alphabet; they differ only in their value domain.

use std::fmt;
use std::marker::PhantomData;

use serde::de::{self, MapAccess, Visitor};
use serde::ser::SerializeMap;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// One slot of the abstraction. The declaration order below is canonical:
/// it fixes slot indices and the key order of every serialized vector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum TransformedFeature {
    BinaryClass,
    NumericClass,
    DateClass,
    MissingClassValues,
    NominalClass,
    SymbolicClass,
    StringClass,
    UnaryClass,
    BinaryAttributes,
    DateAttributes,
    EmptyNominalAttributes,
    MissingValues,
    NominalAttributes,
    NumericAttributes,
    UnaryAttributes,
    PredictiveModel,
}

pub const FEATURE_COUNT: usize = 16;

impl TransformedFeature {
    /// All features in canonical order.
    pub const ALL: [TransformedFeature; FEATURE_COUNT] = [
        TransformedFeature::BinaryClass,
        TransformedFeature::NumericClass,
        TransformedFeature::DateClass,
        TransformedFeature::MissingClassValues,
        TransformedFeature::NominalClass,
        TransformedFeature::SymbolicClass,
        TransformedFeature::StringClass,
        TransformedFeature::UnaryClass,
        TransformedFeature::BinaryAttributes,
        TransformedFeature::DateAttributes,
        TransformedFeature::EmptyNominalAttributes,
        TransformedFeature::MissingValues,
        TransformedFeature::NominalAttributes,
        TransformedFeature::NumericAttributes,
        TransformedFeature::UnaryAttributes,
        TransformedFeature::PredictiveModel,
    ];

    pub fn index(self) -> usize {
        Self::ALL.iter().position(|f| *f == self).unwrap()
    }

    /// Canonical serialized name, e.g. `NOMINAL_ATTRIBUTES`.
    pub fn name(self) -> &'static str {
        NAMES[self.index()]
    }

    pub fn from_name(name: &str) -> Option<TransformedFeature> {
        NAMES
            .iter()
            .position(|n| *n == name)
            .map(|i| TransformedFeature::ALL[i])
    }

    /// True for the slots describing the class attribute.
    pub fn is_class_kind(self) -> bool {
        matches!(
            self,
            TransformedFeature::BinaryClass
                | TransformedFeature::NumericClass
                | TransformedFeature::DateClass
                | TransformedFeature::NominalClass
                | TransformedFeature::SymbolicClass
                | TransformedFeature::StringClass
                | TransformedFeature::UnaryClass
        )
    }

    /// True for the slots describing non-class attributes.
    pub fn is_attribute_kind(self) -> bool {
        matches!(
            self,
            TransformedFeature::BinaryAttributes
                | TransformedFeature::DateAttributes
                | TransformedFeature::EmptyNominalAttributes
                | TransformedFeature::NominalAttributes
                | TransformedFeature::NumericAttributes
                | TransformedFeature::UnaryAttributes
        )
    }
}

const NAMES: [&str; FEATURE_COUNT] = [
    "BINARY_CLASS",
    "NUMERIC_CLASS",
    "DATE_CLASS",
    "MISSING_CLASS_VALUES",
    "NOMINAL_CLASS",
    "SYMBOLIC_CLASS",
    "STRING_CLASS",
    "UNARY_CLASS",
    "BINARY_ATTRIBUTES",
    "DATE_ATTRIBUTES",
    "EMPTY_NOMINAL_ATTRIBUTES",
    "MISSING_VALUES",
    "NOMINAL_ATTRIBUTES",
    "NUMERIC_ATTRIBUTES",
    "UNARY_ATTRIBUTES",
    "PREDICTIVE_MODEL",
];

impl fmt::Display for TransformedFeature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Value domain of a [`FeatureVector`]. Implemented by the [`Binary`] and
/// [`Signed`] markers; not meant to be implemented elsewhere.
pub trait Domain {
    const LABEL: &'static str;
    fn contains(value: i8) -> bool;
}

/// {0, 1}: dataset abstractions, tokens and capabilities.
#[derive(Debug)]
pub enum Binary {}

/// {-1, 0, 1}: component effects.
#[derive(Debug)]
pub enum Signed {}

impl Domain for Binary {
    const LABEL: &'static str = "binary";
    fn contains(value: i8) -> bool {
        value == 0 || value == 1
    }
}

impl Domain for Signed {
    const LABEL: &'static str = "signed";
    fn contains(value: i8) -> bool {
        (-1..=1).contains(&value)
    }
}

/// A 16-slot vector over [`TransformedFeature`], with the value domain
/// tracked in the type. All slots are always present; the serialized form
/// is a JSON object with all 16 keys in canonical order.
pub struct FeatureVector<D: Domain> {
    values: [i8; FEATURE_COUNT],
    _domain: PhantomData<fn() -> D>,
}

impl<D: Domain> FeatureVector<D> {
    pub fn zeros() -> Self {
        FeatureVector {
            values: [0; FEATURE_COUNT],
            _domain: PhantomData,
        }
    }

    pub fn get(&self, feature: TransformedFeature) -> i8 {
        self.values[feature.index()]
    }

    /// Sets one slot. Panics if `value` is outside the vector's domain;
    /// deserialization validates separately and never panics.
    pub fn set(&mut self, feature: TransformedFeature, value: i8) {
        assert!(
            D::contains(value),
            "value {} outside {} domain for {}",
            value,
            D::LABEL,
            feature
        );
        self.values[feature.index()] = value;
    }

    /// Builder-style [`set`](Self::set).
    pub fn with(mut self, feature: TransformedFeature, value: i8) -> Self {
        self.set(feature, value);
        self
    }

    pub fn iter(&self) -> impl Iterator<Item = (TransformedFeature, i8)> + '_ {
        TransformedFeature::ALL.iter().map(|f| (*f, self.get(*f)))
    }

    /// Features whose slot is exactly 1.
    pub fn active(&self) -> impl Iterator<Item = TransformedFeature> + '_ {
        self.iter().filter(|(_, v)| *v == 1).map(|(f, _)| f)
    }

    pub fn is_all_zero(&self) -> bool {
        self.values.iter().all(|v| *v == 0)
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string(self).expect("vector serialization is infallible")
    }

    pub fn from_json_str(text: &str) -> Result<Self, VectorReadError> {
        serde_json::from_str(text).map_err(|e| VectorReadError(e.to_string()))
    }
}

/// A serialized vector was rejected: unknown key, missing key, out-of-domain
/// value, or malformed JSON.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("feature vector: {0}")]
pub struct VectorReadError(pub String);

impl<D: Domain> Clone for FeatureVector<D> {
    fn clone(&self) -> Self {
        *self
    }
}

impl<D: Domain> Copy for FeatureVector<D> {}

impl<D: Domain> PartialEq for FeatureVector<D> {
    fn eq(&self, other: &Self) -> bool {
        self.values == other.values
    }
}

impl<D: Domain> Eq for FeatureVector<D> {}

impl<D: Domain> std::hash::Hash for FeatureVector<D> {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.values.hash(state);
    }
}

impl<D: Domain> Default for FeatureVector<D> {
    fn default() -> Self {
        Self::zeros()
    }
}

impl<D: Domain> fmt::Debug for FeatureVector<D> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut map = f.debug_map();
        for (feature, value) in self.iter() {
            if value != 0 {
                map.entry(&feature.name(), &value);
            }
        }
        map.finish()
    }
}

impl<D: Domain> Serialize for FeatureVector<D> {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(FEATURE_COUNT))?;
        for (feature, value) in self.iter() {
            map.serialize_entry(feature.name(), &value)?;
        }
        map.end()
    }
}

impl<'de, D: Domain> Deserialize<'de> for FeatureVector<D> {
    fn deserialize<De: Deserializer<'de>>(deserializer: De) -> Result<Self, De::Error> {
        struct VectorVisitor<D>(PhantomData<fn() -> D>);

        impl<'de, D: Domain> Visitor<'de> for VectorVisitor<D> {
            type Value = FeatureVector<D>;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                write!(f, "an object with all 16 transformed-feature keys")
            }

            fn visit_map<A: MapAccess<'de>>(self, mut access: A) -> Result<Self::Value, A::Error> {
                let mut vector = FeatureVector::<D>::zeros();
                let mut seen = [false; FEATURE_COUNT];
                while let Some((key, value)) = access.next_entry::<String, i8>()? {
                    let feature = TransformedFeature::from_name(&key).ok_or_else(|| {
                        de::Error::custom(format!("unknown transformed-feature key `{key}`"))
                    })?;
                    if seen[feature.index()] {
                        return Err(de::Error::custom(format!("duplicate key `{key}`")));
                    }
                    if !D::contains(value) {
                        return Err(de::Error::custom(format!(
                            "value {value} for `{key}` outside the {} domain",
                            D::LABEL
                        )));
                    }
                    seen[feature.index()] = true;
                    vector.values[feature.index()] = value;
                }
                if let Some(missing) = TransformedFeature::ALL.iter().find(|f| !seen[f.index()]) {
                    return Err(de::Error::custom(format!(
                        "missing transformed-feature `{}`",
                        missing.name()
                    )));
                }
                Ok(vector)
            }
        }

        deserializer.deserialize_map(VectorVisitor(PhantomData))
    }
}
