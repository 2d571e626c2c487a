//! Property tests over generated inputs: serialization round-trips and the
//! firing rules against arbitrary vectors.

use proptest::prelude::*;

use pipecheck_core::dataset::{load_arff_str, write_arff, Attribute, AttributeKind, Cell, Dataset};
use pipecheck_core::features::{Binary, FeatureVector, Signed, TransformedFeature};
use pipecheck_core::pipeline::{parse_pipeline, PipelineSpec, Step, DEFAULT_MAX_STEPS};
use pipecheck_core::surrogate::{fire_transition, SurrogateTransition};

fn binary_vector() -> impl Strategy<Value = FeatureVector<Binary>> {
    proptest::array::uniform16(0i8..=1).prop_map(|values| {
        let mut v = FeatureVector::zeros();
        for (feature, value) in TransformedFeature::ALL.iter().zip(values) {
            v.set(*feature, value);
        }
        v
    })
}

fn signed_vector() -> impl Strategy<Value = FeatureVector<Signed>> {
    proptest::array::uniform16(-1i8..=1).prop_map(|values| {
        let mut v = FeatureVector::zeros();
        for (feature, value) in TransformedFeature::ALL.iter().zip(values) {
            v.set(*feature, value);
        }
        v
    })
}

/// Identifier within the unquoted-token subset the ARFF writer emits.
fn ident() -> impl Strategy<Value = String> {
    "[a-z][a-z0-9_]{0,7}"
}

fn attribute_kind() -> impl Strategy<Value = AttributeKind> {
    prop_oneof![
        Just(AttributeKind::Numeric),
        prop::collection::btree_set(ident(), 1..4)
            .prop_map(|values| AttributeKind::Nominal(values.into_iter().collect())),
        Just(AttributeKind::Date),
        Just(AttributeKind::String),
    ]
}

fn cell_for(kind: &AttributeKind) -> BoxedStrategy<Cell> {
    let filled: BoxedStrategy<Cell> = match kind {
        AttributeKind::Numeric => any::<f64>()
            .prop_filter("finite", |v| v.is_finite())
            .prop_map(Cell::Numeric)
            .boxed(),
        AttributeKind::Nominal(values) => {
            let values = values.clone();
            (0..values.len()).prop_map(move |i| Cell::Nominal(values[i].clone())).boxed()
        }
        AttributeKind::Date => ident().prop_map(Cell::Date).boxed(),
        AttributeKind::String => ident().prop_map(Cell::Str).boxed(),
    };
    prop_oneof![4 => filled, 1 => Just(Cell::Missing)].boxed()
}

prop_compose! {
    fn dataset()(
        attr_kinds in prop::collection::vec(attribute_kind(), 0..4),
        class_kind in prop_oneof![
            Just(AttributeKind::Numeric),
            prop::collection::btree_set(ident(), 1..4)
                .prop_map(|values| AttributeKind::Nominal(values.into_iter().collect())),
        ],
        n_rows in 0usize..6,
    )(
        rows in {
            let mut kinds: Vec<AttributeKind> = attr_kinds.clone();
            kinds.push(class_kind.clone());
            prop::collection::vec(
                kinds.iter().map(cell_for).collect::<Vec<_>>(),
                n_rows..=n_rows,
            )
        },
        attr_kinds in Just(attr_kinds),
        class_kind in Just(class_kind),
    ) -> Dataset {
        let mut attributes: Vec<Attribute> = attr_kinds
            .into_iter()
            .enumerate()
            .map(|(i, kind)| Attribute::new(format!("a{i}"), kind))
            .collect();
        attributes.push(Attribute::new("klass", class_kind));
        let class_index = attributes.len() - 1;
        Dataset::new("prop", attributes, class_index, rows).expect("strategy builds valid datasets")
    }
}

proptest! {
    #[test]
    fn binary_vectors_round_trip(v in binary_vector()) {
        let back = FeatureVector::<Binary>::from_json_str(&v.to_json_string()).unwrap();
        prop_assert_eq!(back, v);
    }

    #[test]
    fn signed_vectors_round_trip(v in signed_vector()) {
        let back = FeatureVector::<Signed>::from_json_str(&v.to_json_string()).unwrap();
        prop_assert_eq!(back, v);
    }

    #[test]
    fn signed_json_never_deserializes_as_binary_when_negative(v in signed_vector()) {
        let has_negative = TransformedFeature::ALL.iter().any(|f| v.get(*f) == -1);
        let as_binary = FeatureVector::<Binary>::from_json_str(&v.to_json_string());
        prop_assert_eq!(as_binary.is_err(), has_negative);
    }

    #[test]
    fn arff_write_then_load_is_identity(d in dataset()) {
        let text = write_arff(&d);
        let back = load_arff_str(&text, "prop").unwrap();
        prop_assert_eq!(back, d);
    }

    #[test]
    fn pipeline_json_round_trips(
        components in prop::collection::vec(0usize..11, 1..=DEFAULT_MAX_STEPS),
        id in "[a-z0-9-]{1,12}",
    ) {
        let registry = pipecheck_core::components::registry();
        let steps = components
            .into_iter()
            .map(|i| Step::bare(registry[i].id.clone()))
            .collect();
        let spec = PipelineSpec::new(id, steps);
        let back = parse_pipeline(&spec.to_json_string(), DEFAULT_MAX_STEPS).unwrap();
        prop_assert_eq!(back, spec);
    }

    #[test]
    fn firing_keeps_the_token_binary(
        token in binary_vector(),
        capabilities in binary_vector(),
        effects in signed_vector(),
    ) {
        let transition = SurrogateTransition {
            component: "prop".into(),
            capabilities,
            effects,
        };
        if let Ok(out) = fire_transition(&transition, &token) {
            for f in TransformedFeature::ALL {
                prop_assert!(out.get(f) == 0 || out.get(f) == 1);
            }
        }
    }

    #[test]
    fn capability_rule_equals_slot_enumeration(
        token in binary_vector(),
        capabilities in binary_vector(),
    ) {
        let transition = SurrogateTransition {
            component: "prop".into(),
            capabilities,
            effects: FeatureVector::zeros(),
        };
        let expected: Vec<TransformedFeature> = TransformedFeature::ALL
            .iter()
            .copied()
            .filter(|f| token.get(*f) == 1 && capabilities.get(*f) == 0)
            .collect();
        match fire_transition(&transition, &token) {
            Ok(_) => prop_assert!(expected.is_empty()),
            Err(e) => prop_assert_eq!(e.violated, expected),
        }
    }

    #[test]
    fn extraction_is_row_order_invariant(d in dataset(), swap_a in 0usize..6, swap_b in 0usize..6) {
        let before = pipecheck_core::extract_features(&d);
        let mut rows = d.rows().to_vec();
        rows.reverse();
        if rows.len() > 1 {
            let (a, b) = (swap_a % rows.len(), swap_b % rows.len());
            rows.swap(a, b);
        }
        let shuffled = Dataset::new(d.name(), d.attributes().to_vec(), d.class_index(), rows).unwrap();
        prop_assert_eq!(pipecheck_core::extract_features(&shuffled), before);
    }
}
